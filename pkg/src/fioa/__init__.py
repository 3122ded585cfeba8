"""Compositional workbench for finite input/output automata.

Build machines (:mod:`fioa.core`), compose them with the weak product
(:mod:`fioa.product`), couple them through channels or coordination
conditions (:mod:`fioa.channels`, :mod:`fioa.conditions`,
:mod:`fioa.network`), analyze the results (:mod:`fioa.analysis`),
execute deterministic ones (:mod:`fioa.executor`), and move everything
through text and diagrams (:mod:`fioa.dsl`, :mod:`fioa.dot`,
:mod:`fioa.cli`).
"""

from .analysis import (
    LAWS,
    LawReport,
    SafetyReport,
    TraceEquivalence,
    check_law,
    random_nfioa,
    run_law_suite,
    safety_query,
    trace_equivalent,
    trace_language,
)
from .channels import (
    Channel,
    ConfigGraph,
    Configuration,
    Consistency,
    Edge,
    EdgeClass,
    RestrictedAutomaton,
    Run,
    WellFormedness,
    cbr,
    classify_config,
    edge_census,
    enabled,
    flatten,
    is_consistent,
    is_protocol,
    is_well_formed,
    open_components,
    run,
)
from .conditions import (
    Condition,
    IoPattern,
    QuasiDeterminism,
    Scope,
    cond,
    cond_strict,
    is_consistent_cond,
    is_quasi_deterministic,
    is_unaffected,
)
from .core import (
    EPSILON,
    Acceptance,
    AutomatonClass,
    ComponentAlphabet,
    EqualityReport,
    Nfioa,
    Projection,
    Transition,
    automata_equal,
    classify,
    identity_projection,
    project,
    prune,
    reachable_states,
    require_valid,
    validate,
    with_initial,
)
from .dot import export_dot
from .dsl import (
    Directive,
    NetFactor,
    NetworkDef,
    ResolvedDocument,
    WorkbenchDocument,
    parse,
    resolve,
    serialize,
)
from .errors import (
    CapacityExceeded,
    DslError,
    InvalidAutomaton,
    PreconditionError,
    SchedulerError,
    StepRejected,
    WiringError,
    WorkbenchError,
)
from .executor import (
    FiniteSystem,
    drive,
    render_trace,
    specifies,
    step,
    system_from_dfioa,
)
from .network import (
    BuiltNetwork,
    ChannelSpec,
    CompiledNetwork,
    ConditionSpec,
    FactorRef,
    NetworkSpec,
    PatternSpec,
    build_network,
    compile_network,
)
from .product import (
    LazyProduct,
    ProductIndex,
    acceptance_within,
    associate,
    weak_product,
)

__version__ = "0.1.0"

__all__ = [
    "EPSILON",
    "LAWS",
    "Acceptance",
    "AutomatonClass",
    "BuiltNetwork",
    "CapacityExceeded",
    "Channel",
    "ChannelSpec",
    "CompiledNetwork",
    "ComponentAlphabet",
    "Condition",
    "ConditionSpec",
    "ConfigGraph",
    "Configuration",
    "Consistency",
    "Directive",
    "DslError",
    "Edge",
    "EdgeClass",
    "EqualityReport",
    "FactorRef",
    "FiniteSystem",
    "InvalidAutomaton",
    "IoPattern",
    "LawReport",
    "LazyProduct",
    "NetFactor",
    "NetworkDef",
    "NetworkSpec",
    "Nfioa",
    "PatternSpec",
    "PreconditionError",
    "ProductIndex",
    "Projection",
    "QuasiDeterminism",
    "ResolvedDocument",
    "RestrictedAutomaton",
    "Run",
    "SafetyReport",
    "SchedulerError",
    "Scope",
    "StepRejected",
    "TraceEquivalence",
    "Transition",
    "WellFormedness",
    "WiringError",
    "WorkbenchDocument",
    "WorkbenchError",
    "acceptance_within",
    "associate",
    "automata_equal",
    "build_network",
    "cbr",
    "check_law",
    "classify",
    "classify_config",
    "compile_network",
    "cond",
    "cond_strict",
    "drive",
    "edge_census",
    "enabled",
    "export_dot",
    "flatten",
    "identity_projection",
    "is_consistent",
    "is_consistent_cond",
    "is_protocol",
    "is_quasi_deterministic",
    "is_unaffected",
    "is_well_formed",
    "open_components",
    "parse",
    "project",
    "prune",
    "random_nfioa",
    "reachable_states",
    "render_trace",
    "require_valid",
    "resolve",
    "run",
    "run_law_suite",
    "safety_query",
    "serialize",
    "specifies",
    "step",
    "system_from_dfioa",
    "trace_equivalent",
    "trace_language",
    "validate",
    "weak_product",
    "with_initial",
]
