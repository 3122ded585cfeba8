"""Channels and the excited/relaxed execution discipline.

A channel plugs an output component into an input component carrying the
same characters.  While a sent character is in flight the machine is
*excited* and the very next move must consume that character on the
channel's input side; otherwise it is *relaxed* and may move
spontaneously or read inputs that no channel feeds.  Because every label
activates at most one component, a single pending slot suffices.

Restriction is computed by forward exploration over configurations
(state + pending slot).  The exploration accepts an optional edge filter
so condition-based restriction composes with channel wiring in a single
pass; the surviving flat transition set is exactly what re-exploration
needs, which is what makes the algebraic-law comparisons in
`analysis` exact rather than approximate.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence, Union

import networkx as nx

from .core import (
    Acceptance,
    Nfioa,
    StateVector,
    Transition,
    active_slot,
    require_valid,
)
from .errors import (
    CapacityExceeded,
    PreconditionError,
    SchedulerError,
    WiringError,
)
from .product import LazyProduct

CONFIG_CAP = 2 * 10**6


class Channel(NamedTuple):
    """Directed link: flat output component -> flat input component."""

    out_component: int
    in_component: int


class Configuration(NamedTuple):
    """A state plus at most one in-flight character."""

    state: StateVector
    pending: tuple[Channel, str] | None

    @property
    def excited(self) -> bool:
        return self.pending is not None


def _ckey(c: Configuration):
    return (c.state, c.pending is not None, c.pending or (Channel(-1, -1), ""))


class Edge(NamedTuple):
    transition: Transition
    target: Configuration


@dataclass(frozen=True)
class ConfigGraph:
    """Forward-explored configuration graph; keys cover every node."""

    initial: Configuration
    edges: Mapping[Configuration, tuple[Edge, ...]]

    @property
    def configs(self) -> frozenset[Configuration]:
        return frozenset(self.edges)

    def nodes(self) -> list[Configuration]:
        return sorted(self.edges, key=_ckey)

    @property
    def edge_count(self) -> int:
        return sum(len(es) for es in self.edges.values())


def check_channels(
    inputs: Sequence, outputs: Sequence, channels: Iterable[Channel]
) -> list[str]:
    """Diagnostics for a channel set against flat interfaces."""
    out: list[str] = []
    chans = list(channels)
    for ch in chans:
        if not (0 <= ch.out_component < len(outputs)):
            out.append(f"channel {ch} output index out of range")
            continue
        if not (0 <= ch.in_component < len(inputs)):
            out.append(f"channel {ch} input index out of range")
            continue
        o, i = outputs[ch.out_component], inputs[ch.in_component]
        if not o.characters <= i.characters:
            out.append(
                f"channel {ch}: sender characters {sorted(o.characters - i.characters)} "
                f"not readable on {i.name!r}"
            )
    outs = [ch.out_component for ch in chans]
    ins = [ch.in_component for ch in chans]
    if len(set(outs)) != len(outs):
        out.append("two channels share an output component")
    if len(set(ins)) != len(ins):
        out.append("two channels share an input component")
    return out


Source = Union[Nfioa, LazyProduct, "RestrictedAutomaton"]


def _explore(
    initial: StateVector,
    outgoing: Callable[[StateVector], Sequence[Transition]],
    channels: Sequence[Channel],
    deny: Callable[[Transition], bool] | None = None,
    *,
    cap: int = CONFIG_CAP,
) -> ConfigGraph:
    """Build the configuration graph by BFS from the relaxed initial.

    Relaxed configurations take spontaneous and open-input transitions;
    a channel-fed input never fires unless its character is pending.
    Excited configurations take exactly the transitions consuming the
    pending character on the pending channel's input side.  The outgoing
    callback must return deterministically ordered transitions, which
    makes the whole graph — and every witness derived from it —
    reproducible.
    """
    out_chan = {ch.out_component: ch for ch in channels}
    in_chans = {ch.in_component for ch in channels}
    init = Configuration(tuple(initial), None)
    edges: dict[Configuration, tuple[Edge, ...]] = {}
    frontier = deque([init])
    seen = {init}
    while frontier:
        cfg = frontier.popleft()
        here: list[Edge] = []
        for t in outgoing(cfg.state):
            if deny is not None and deny(t):
                continue
            ia = active_slot(t.input)
            if cfg.pending is None:
                if ia is not None and ia[0] in in_chans:
                    continue
            else:
                chan, pending_char = cfg.pending
                if ia is None or ia != (chan.in_component, pending_char):
                    continue
            oa = active_slot(t.output)
            pend = None
            if oa is not None and oa[0] in out_chan:
                pend = (out_chan[oa[0]], oa[1])
            nxt = Configuration(t.target, pend)
            here.append(Edge(t, nxt))
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise CapacityExceeded(
                        f"configuration graph exceeded {cap} nodes"
                    )
                frontier.append(nxt)
        edges[cfg] = tuple(here)
    return ConfigGraph(initial=init, edges=edges)


@dataclass(frozen=True)
class RestrictedAutomaton:
    """An automaton together with its channel wiring and explored graph.

    `base` keeps the source's interface and acceptance but its transition
    set is the *surviving* one: exactly the transitions that label some
    configuration-graph edge.  Re-restricting the base with the same
    channels and filters reproduces the same graph, so operator identities
    can be checked on flat automata.
    """

    base: Nfioa
    channels: tuple[Channel, ...]
    graph: ConfigGraph
    conditions: tuple = ()
    name: str = ""

    @property
    def initial_config(self) -> Configuration:
        return self.graph.initial

    def __post_init__(self):
        if not self.name:
            object.__setattr__(self, "name", self.base.name)


def flatten(r: RestrictedAutomaton) -> Nfioa:
    """The flat automaton carrying only the transitions that survived."""
    return r.base


def cbr(
    source: Source,
    channels: Iterable[Channel | tuple[int, int]] = (),
    *,
    conditions: Iterable = (),
    name: str | None = None,
    cap: int = CONFIG_CAP,
) -> RestrictedAutomaton:
    """Restrict an automaton (or re-restrict a restriction) by channels.

    Accepts a plain automaton, a lazily-explored product, or an existing
    restriction.  Re-restricting unions the channel sets and edge filters
    and re-explores the surviving transition relation; the result is the
    same as having applied the union in one pass.
    """
    new_channels = tuple(Channel(*c) for c in channels)
    conditions = tuple(conditions)
    if isinstance(source, RestrictedAutomaton):
        merged = tuple(sorted(set(source.channels) | set(new_channels)))
        return cbr(
            source.base,
            merged,
            conditions=tuple(source.conditions) + conditions,
            name=name or source.name,
            cap=cap,
        )

    chans = tuple(sorted(set(new_channels)))
    deny = None
    if conditions:
        conds = conditions

        def deny(t: Transition) -> bool:
            return any(c.matches(t) for c in conds)

    if isinstance(source, LazyProduct):
        diags = check_channels(source.inputs, source.outputs, chans)
        if diags:
            raise WiringError("; ".join(diags))
        graph = _explore(source.initial, source.outgoing, chans, deny, cap=cap)
        states = frozenset(c.state for c in graph.edges)
        base = Nfioa(
            name=name or source.name,
            states=states,
            inputs=source.inputs,
            outputs=source.outputs,
            initial=source.initial,
            acceptance=source.acceptance_for(states),
            transitions=frozenset(e.transition for es in graph.edges.values() for e in es),
        )
        return RestrictedAutomaton(base, chans, graph, conditions, name or source.name)

    a = require_valid(source)
    diags = check_channels(a.inputs, a.outputs, chans)
    if diags:
        raise WiringError("; ".join(diags))
    by_source: dict[StateVector, list[Transition]] = {}
    for t in sorted(a.transitions):
        by_source.setdefault(t.source, []).append(t)
    graph = _explore(a.initial, lambda s: by_source.get(s, ()), chans, deny, cap=cap)
    base = Nfioa(
        name=name or a.name,
        states=a.states,
        inputs=a.inputs,
        outputs=a.outputs,
        initial=a.initial,
        acceptance=a.acceptance,
        transitions=frozenset(e.transition for es in graph.edges.values() for e in es),
    )
    return RestrictedAutomaton(base, chans, graph, conditions, name or a.name)


def classify_config(r: RestrictedAutomaton, c: Configuration) -> str:
    if c not in r.graph.edges:
        raise WiringError(f"{c!r} is not a configuration of {r.name}")
    return "excited" if c.pending is not None else "relaxed"


def enabled(r: RestrictedAutomaton, c: Configuration) -> tuple[Edge, ...]:
    if c not in r.graph.edges:
        raise WiringError(f"{c!r} is not a configuration of {r.name}")
    return r.graph.edges[c]


class EdgeClass(NamedTuple):
    """Row of the nine-way taxonomy of restricted moves."""

    mode: str  # relaxed | excited
    input_kind: str  # silent-in | open-in | consume
    output_kind: str  # silent-out | channel-out | open-out


def classify_edge(r: RestrictedAutomaton, c: Configuration, e: Edge) -> EdgeClass:
    mode = "excited" if c.pending is not None else "relaxed"
    ia = active_slot(e.transition.input)
    if c.pending is not None:
        input_kind = "consume"
    elif ia is None:
        input_kind = "silent-in"
    else:
        input_kind = "open-in"
    oa = active_slot(e.transition.output)
    out_chans = {ch.out_component for ch in r.channels}
    if oa is None:
        output_kind = "silent-out"
    elif oa[0] in out_chans:
        output_kind = "channel-out"
    else:
        output_kind = "open-out"
    return EdgeClass(mode, input_kind, output_kind)


ALL_EDGE_CLASSES = tuple(
    [EdgeClass("relaxed", i, o) for i in ("silent-in", "open-in") for o in ("silent-out", "channel-out", "open-out")]
    + [EdgeClass("excited", "consume", o) for o in ("silent-out", "channel-out", "open-out")]
)


def edge_census(r: RestrictedAutomaton) -> dict[EdgeClass, int]:
    """How many graph edges fall in each of the nine classes."""
    census: dict[EdgeClass, int] = {}
    for c in r.graph.nodes():
        for e in r.graph.edges[c]:
            row = classify_edge(r, c, e)
            census[row] = census.get(row, 0) + 1
    return census


class WellFormedness(NamedTuple):
    ok: bool
    witness: Configuration | None


def is_well_formed(r: RestrictedAutomaton) -> WellFormedness:
    """Every excited configuration must be able to consume its character."""
    for c in r.graph.nodes():
        if c.pending is not None and not r.graph.edges[c]:
            return WellFormedness(False, c)
    return WellFormedness(True, None)


class Consistency(NamedTuple):
    ok: bool
    witness: Configuration | None
    anchors: frozenset


def acceptance_anchors(
    nodes: Sequence,
    succ: Callable[[object], Iterable],
    state_of: Callable[[object], StateVector],
    acceptance: Acceptance,
) -> frozenset:
    """Nodes from which acceptance is already being met.

    Final mode: the nodes sitting on accepting states.  Muller mode: the
    nodes of strongly connected subgraphs that visit exactly one of the
    accepting families — computed as non-trivial components of the
    subgraph induced by a family whose projection covers the whole
    family.
    """
    if acceptance.mode == "final":
        return frozenset(n for n in nodes if state_of(n) in acceptance.final_states)
    anchors: set = set()
    for member in acceptance.muller_sets:
        inside = [n for n in nodes if state_of(n) in member]
        if not inside:
            continue
        node_set = set(inside)
        g = nx.DiGraph()
        g.add_nodes_from(inside)
        for n in inside:
            for m in succ(n):
                if m in node_set:
                    g.add_edge(n, m)
        for scc in nx.strongly_connected_components(g):
            if len(scc) == 1:
                (only,) = scc
                if not g.has_edge(only, only):
                    continue
            if {state_of(n) for n in scc} == member:
                anchors |= scc
    return frozenset(anchors)


def graph_consistency(
    nodes: Sequence,
    succ: Callable[[object], Iterable],
    state_of: Callable[[object], StateVector],
    acceptance: Acceptance,
    sort_key=None,
) -> Consistency:
    """Can every node still reach a point where acceptance is met?"""
    anchors = acceptance_anchors(nodes, succ, state_of, acceptance)
    reverse: dict = {n: [] for n in nodes}
    for n in nodes:
        for m in succ(n):
            if m in reverse:
                reverse[m].append(n)
    covered = set(anchors)
    frontier = deque(anchors)
    while frontier:
        n = frontier.popleft()
        for p in reverse[n]:
            if p not in covered:
                covered.add(p)
                frontier.append(p)
    missing = [n for n in nodes if n not in covered]
    if missing:
        missing.sort(key=sort_key)
        return Consistency(False, missing[0], anchors)
    return Consistency(True, None, anchors)


def is_consistent(r: RestrictedAutomaton) -> Consistency:
    """Acceptance reachable from every configuration; needs well-formedness."""
    wf = is_well_formed(r)
    if not wf.ok:
        raise PreconditionError(
            f"{r.name} is not well-formed: excited configuration {wf.witness!r} "
            "cannot consume its pending character"
        )
    return graph_consistency(
        r.graph.nodes(),
        lambda c: (e.target for e in r.graph.edges[c]),
        lambda c: c.state,
        r.base.acceptance,
        sort_key=_ckey,
    )


def open_components(
    source: Union[Nfioa, LazyProduct, RestrictedAutomaton],
    channels: Iterable[Channel] | None = None,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Input/output component indices no channel is attached to."""
    if isinstance(source, RestrictedAutomaton):
        chans = source.channels if channels is None else tuple(channels)
        inputs, outputs = source.base.inputs, source.base.outputs
    else:
        chans = tuple(channels or ())
        inputs, outputs = source.inputs, source.outputs
    ins = {ch.in_component for ch in chans}
    outs = {ch.out_component for ch in chans}
    open_in = tuple(k for k in range(len(inputs)) if k not in ins)
    open_out = tuple(k for k in range(len(outputs)) if k not in outs)
    return open_in, open_out


def is_protocol(r: RestrictedAutomaton) -> bool:
    """Closed system: every component is wired to a channel."""
    open_in, open_out = open_components(r)
    return not open_in and not open_out


@dataclass(frozen=True)
class Run:
    configs: tuple[Configuration, ...]
    transitions: tuple[Transition, ...]

    def __len__(self) -> int:
        return len(self.transitions)


def run(
    r: RestrictedAutomaton,
    scheduler: str = "random",
    step_bound: int = 100,
    *,
    seed: int = 0,
    script: Sequence[int] | None = None,
    run_cap: int = 100_000,
) -> Union[Run, tuple[Run, ...]]:
    """Walk the configuration graph under a scheduling policy.

    `random` resolves choices with a seeded generator; `scripted` takes an
    explicit choice index per step and fails loudly when the index does
    not exist; `exhaustive` returns every run that either deadlocks or
    reaches the step bound.
    """
    wf = is_well_formed(r)
    if not wf.ok:
        raise PreconditionError(
            f"cannot run {r.name}: excited configuration {wf.witness!r} is stuck"
        )
    start = r.graph.initial
    if scheduler == "random":
        rng = random.Random(seed)
        configs, trans = [start], []
        cfg = start
        for _ in range(step_bound):
            es = r.graph.edges[cfg]
            if not es:
                break
            e = rng.choice(es)
            trans.append(e.transition)
            cfg = e.target
            configs.append(cfg)
        return Run(tuple(configs), tuple(trans))
    if scheduler == "scripted":
        if script is None:
            raise SchedulerError("scripted scheduler needs a choice list")
        configs, trans = [start], []
        cfg = start
        for step_no, choice in enumerate(script[:step_bound]):
            es = r.graph.edges[cfg]
            if not (0 <= choice < len(es)):
                raise SchedulerError(
                    f"step {step_no}: choice {choice} out of range "
                    f"({len(es)} enabled at {cfg!r})"
                )
            e = es[choice]
            trans.append(e.transition)
            cfg = e.target
            configs.append(cfg)
        return Run(tuple(configs), tuple(trans))
    if scheduler == "exhaustive":
        complete: list[Run] = []
        stack: list[tuple[Configuration, tuple, tuple]] = [(start, (start,), ())]
        while stack:
            cfg, cpath, tpath = stack.pop()
            es = r.graph.edges[cfg]
            if not es or len(tpath) >= step_bound:
                complete.append(Run(cpath, tpath))
                if len(complete) > run_cap:
                    raise CapacityExceeded(
                        f"more than {run_cap} runs at bound {step_bound}"
                    )
                continue
            for e in reversed(es):
                stack.append((e.target, cpath + (e.target,), tpath + (e.transition,)))
        return tuple(complete)
    raise SchedulerError(f"unknown scheduler {scheduler!r}")
