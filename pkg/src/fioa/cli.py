"""Command-line driver for the workbench.

Commands operate on workbench text files (``.pw``): ``validate`` builds
everything a document declares and runs its ``check`` directives;
``product``/``cbr``/``cond`` report on compositions; ``check`` queries a
single property with a witness on failure; ``run`` walks a configuration
graph under a scheduler; ``laws`` exercises the operator identities on
seeded random instances; ``equiv`` compares channel-event traces;
``safety`` searches reachable configurations for a predicate; ``dot``
renders diagrams; ``examples`` lists and emits the bundled corpus.

Exit codes: 0 when the command succeeds and any queried property holds,
1 when a queried property fails (a witness is printed), 2 on usage,
parse, or capacity errors.
"""
from __future__ import annotations

import argparse
import sys

from . import examples as _corpus
from .analysis import LAWS, check_law, safety_query, trace_equivalent
from .channels import (
    ALL_EDGE_CLASSES,
    RestrictedAutomaton,
    edge_census,
    is_consistent,
    is_protocol,
    is_well_formed,
    open_components,
    run as run_graph,
)
from .conditions import is_consistent_cond, is_quasi_deterministic, is_unaffected
from .core import EPSILON, Nfioa, Projection, active_slot, classify, reachable_states
from .dot import export_dot
from .dsl import ResolvedDocument, WorkbenchDocument, load, resolve
from .errors import WorkbenchError
from .network import BuiltNetwork
from .product import weak_product

EX_OK = 0
EX_FAIL = 1
EX_USAGE = 2


class _UsageError(Exception):
    """A command was pointed at the wrong kind of thing."""


# ---------------------------------------------------------------------------
# lookup and formatting helpers
# ---------------------------------------------------------------------------


def _load(path: str) -> tuple[WorkbenchDocument, ResolvedDocument]:
    doc = load(path)
    return doc, resolve(doc)


def _automaton(env: ResolvedDocument, name: str) -> Nfioa:
    try:
        return env.automata[name]
    except KeyError:
        raise _UsageError(
            f"no automaton or network named {name!r}; declared: {', '.join(sorted(env.automata))}"
        ) from None


def _network(env: ResolvedDocument, name: str) -> BuiltNetwork:
    try:
        return env.networks[name]
    except KeyError:
        raise _UsageError(
            f"no network named {name!r}; declared: {', '.join(sorted(env.networks)) or 'none'}"
        ) from None


def _restricted(built: BuiltNetwork) -> RestrictedAutomaton:
    if built.restricted is None:
        raise _UsageError(f"network {built.name!r} wires no channels")
    return built.restricted


def _state_str(state) -> str:
    return "|".join(state)


def _cfg_str(built: BuiltNetwork, cfg) -> str:
    if cfg.pending is None:
        return _state_str(cfg.state)
    ch, char = cfg.pending
    return f"{_state_str(cfg.state)} !{char}@{built.compiled.channel_label(ch)}"


def _label_str(comps, vec) -> str:
    slot = active_slot(vec)
    if slot is None:
        return "-"
    k, ch = slot
    return f"{comps[k].name}.{ch}"


def _print_trace(built: BuiltNetwork, res) -> None:
    a = built.automaton
    for i, t in enumerate(res.transitions):
        print(
            f"{i}\t{_cfg_str(built, res.configs[i])}\t{_label_str(a.inputs, t.input)}"
            f"\t{_label_str(a.outputs, t.output)}\t{_cfg_str(built, res.configs[i + 1])}"
        )


# ---------------------------------------------------------------------------
# directives (the `check X NAME;` lines inside documents)
# ---------------------------------------------------------------------------


def _run_directive(env: ResolvedDocument, kind: str, target: str) -> tuple[bool, str]:
    built = env.networks.get(target)
    a = _automaton(env, target)
    r = built.restricted if built is not None else None
    if kind == "valid":
        return True, f"{len(a.states)} states"
    if kind == "deterministic":
        c = classify(a)
        return c.is_deterministic, "at most one move per state and input" if c.is_deterministic else "nondeterministic"
    if kind == "wellformed":
        if r is None:
            return False, "needs a channel-coupled network"
        wf = is_well_formed(r)
        if wf.ok:
            return True, "every sent character can be consumed"
        return False, f"stuck excited configuration {_cfg_str(built, wf.witness)}"
    if kind == "consistent":
        if r is not None:
            rep = is_consistent(r)
            if rep.ok:
                return True, f"{len(rep.anchors)} anchor configurations"
            return False, f"acceptance unreachable from {_cfg_str(built, rep.witness)}"
        rep = is_consistent_cond(a)
        if rep.ok:
            return True, f"{len(rep.anchors)} anchor states"
        return False, f"acceptance unreachable from {_state_str(rep.witness)}"
    if kind == "protocol":
        if r is None:
            return False, "needs a channel-coupled network"
        if is_protocol(r):
            return True, "all components wired"
        open_in, open_out = open_components(r)
        names = [f"input {a.inputs[k].name}" for k in open_in]
        names += [f"output {a.outputs[k].name}" for k in open_out]
        return False, "open components: " + ", ".join(names)
    if kind == "quasidet":
        qd = is_quasi_deterministic(r if r is not None else a)
        if qd.ok:
            return True, "at most one move per input everywhere"
        where, label, clashing = qd.witness
        return False, f"{len(clashing)} moves on {label!r} from {where!r}"
    raise _UsageError(f"unknown check kind {kind!r}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    doc, env = _load(args.file)
    for a in doc.automata:
        c = classify(a)
        kind = "deterministic" if c.is_deterministic else "nondeterministic"
        print(
            f"automaton {a.name}: {len(a.states)} states, "
            f"{len(a.transitions)} transitions, {kind}"
        )
    for n in doc.networks:
        built = env.networks[n.name]
        if built.restricted is not None:
            g = built.restricted.graph
            print(
                f"network {n.name}: {len(g.edges)} configurations, {g.edge_count} edges"
            )
        else:
            a = built.automaton
            print(
                f"network {n.name}: {len(a.states)} states, "
                f"{len(a.transitions)} transitions, "
                f"{len(reachable_states(a))} reachable"
            )
    failures = 0
    for d in doc.directives:
        ok, detail = _run_directive(env, d.kind, d.target)
        print(f"check {d.kind} {d.target}: {'ok' if ok else 'FAIL'} ({detail})")
        failures += 0 if ok else 1
    return EX_FAIL if failures else EX_OK


def cmd_product(args) -> int:
    _doc, env = _load(args.file)
    factors = [_automaton(env, n) for n in args.names]
    if len(factors) < 2:
        raise _UsageError("product needs at least two automaton names")
    prod, _index = weak_product(factors)
    c = classify(prod)
    print(f"product {prod.name}")
    print(f"states: {len(prod.states)}")
    print(f"transitions: {len(prod.transitions)}")
    print(f"reachable states: {len(reachable_states(prod))}")
    print("inputs: " + " ".join(f"{x.name}{{{','.join(sorted(x.characters))}}}" for x in prod.inputs))
    print("outputs: " + " ".join(f"{x.name}{{{','.join(sorted(x.characters))}}}" for x in prod.outputs))
    print(f"spontaneous: {'yes' if c.has_spontaneous else 'no'}")
    print(f"deterministic: {'yes' if c.is_deterministic else 'no'}")
    return EX_OK


def cmd_cbr(args) -> int:
    _doc, env = _load(args.file)
    built = _network(env, args.network)
    r = _restricted(built)
    g = r.graph
    print(f"network {built.name}")
    print(f"configurations: {len(g.edges)}")
    print(f"edges: {g.edge_count}")
    print(f"channels: {len(r.channels)}")
    print(f"conditions: {len(r.conditions)}")
    census = edge_census(r)
    for row in ALL_EDGE_CLASSES:
        n = census.get(row, 0)
        if n:
            print(f"census {row.mode}/{row.input_kind}/{row.output_kind}: {n}")
    return EX_OK


def cmd_cond(args) -> int:
    _doc, env = _load(args.file)
    built = _network(env, args.network)
    conds = built.compiled.conditions
    print(f"network {built.name}")
    print(f"conditions: {len(conds)}")
    for c in conds:
        print(f"  {c.name}")
    if built.restricted is not None:
        g = built.restricted.graph
        print(f"configurations: {len(g.edges)}")
        print(f"edges: {g.edge_count}")
        return EX_OK
    a = built.automaton
    full, _index = weak_product(built.compiled.factors)
    print(f"states: {len(a.states)}")
    print(f"transitions kept: {len(a.transitions)} of {len(full.transitions)}")
    print(f"reachable states: {len(reachable_states(a))}")
    return EX_OK


def _factor_projection(a: Nfioa, built: BuiltNetwork, keep: int) -> Projection:
    """Keep one factor's slots; pin other states, silence other lanes."""
    index = built.compiled.index
    state_maps = []
    for f, (off, width) in enumerate(index.state_slices):
        for slot in range(off, off + width):
            if f == keep:
                state_maps.append({})
            else:
                values = sorted({s[slot] for s in a.states})
                state_maps.append({v: "_" for v in values if v != "_"})
    input_maps = []
    for f, (off, width) in enumerate(index.input_slices):
        for slot in range(off, off + width):
            if f == keep:
                input_maps.append({})
            else:
                input_maps.append({ch: EPSILON for ch in a.inputs[slot].characters})
    output_maps = []
    for f, (off, width) in enumerate(index.output_slices):
        for slot in range(off, off + width):
            if f == keep:
                output_maps.append({})
            else:
                output_maps.append({ch: EPSILON for ch in a.outputs[slot].characters})
    return Projection(tuple(state_maps), tuple(input_maps), tuple(output_maps))


def cmd_check(args) -> int:
    _doc, env = _load(args.file)
    if args.kind == "unaffected":
        built = _network(env, args.network)
        full, _index = weak_product(built.compiled.factors)
        conds = built.compiled.conditions
        affected = 0
        for k, ref in enumerate(built.spec.factors):
            p = _factor_projection(full, built, k)
            ok = is_unaffected(full, conds, p)
            print(f"factor {ref.alias}: {'unaffected' if ok else 'affected'}")
            affected += 0 if ok else 1
        return EX_FAIL if affected else EX_OK
    ok, detail = _run_directive(env, args.kind, args.network)
    print(f"{args.kind}: {'yes' if ok else 'no'} ({detail})")
    return EX_OK if ok else EX_FAIL


def cmd_run(args) -> int:
    _doc, env = _load(args.file)
    built = _network(env, args.network)
    r = _restricted(built)
    if args.scheduler == "script":
        if not args.script:
            raise _UsageError("--scheduler script needs --script FILE")
        with open(args.script, "r", encoding="utf-8") as handle:
            script = [int(line) for line in handle.read().split()]
        res = run_graph(r, "scripted", step_bound=args.bound, script=script)
        _print_trace(built, res)
        print(f"steps: {len(res)}")
        return EX_OK
    if args.scheduler == "random":
        res = run_graph(r, "random", step_bound=args.bound, seed=args.seed)
        _print_trace(built, res)
        print(f"steps: {len(res)}")
        if len(res) < args.bound:
            print("halted: deadlock")
        return EX_OK
    runs = run_graph(r, "exhaustive", step_bound=args.bound)
    lengths = sorted(len(x) for x in runs)
    deadlocked = sum(1 for x in runs if len(x) < args.bound)
    print(f"runs: {len(runs)}")
    print(f"deadlocking runs: {deadlocked}")
    print(f"shortest run: {lengths[0]}")
    print(f"longest run: {lengths[-1]}")
    return EX_OK


def cmd_laws(args) -> int:
    if args.law == "all":
        names = LAWS
    elif args.law in LAWS:
        names = (args.law,)
    else:
        raise _UsageError(f"unknown law {args.law!r}; known: all, {', '.join(LAWS)}")
    failed = 0
    for law in names:
        if law == "separation":
            rep = check_law(law)
            status = "ok" if rep.passed else f"FAIL ({rep.detail})"
            print(f"law {law}: {status}")
            failed += 0 if rep.passed else 1
            continue
        holds = 0
        inapplicable = 0
        first_failure = None
        for seed in range(args.seeds):
            rep = check_law(law, seed=seed)
            if not rep.applicable:
                inapplicable += 1
            elif rep.ok:
                holds += 1
            elif first_failure is None:
                first_failure = (seed, rep.detail)
        if first_failure is None:
            print(f"law {law}: ok ({holds} applicable, {inapplicable} skipped)")
        else:
            seed, detail = first_failure
            print(f"law {law}: FAIL at seed {seed} ({detail})")
            failed += 1
    return EX_FAIL if failed else EX_OK


def cmd_equiv(args) -> int:
    _doc, env = _load(args.file)
    b1 = _network(env, args.net1)
    b2 = _network(env, args.net2)
    te = trace_equivalent(_restricted(b1), _restricted(b2), bound=args.bound)
    print(f"sufficient bound: {te.sufficient_bound}")
    print(f"bound used: {te.bound_used}")
    if te.equal:
        print("equivalent: yes")
        return EX_OK
    print("equivalent: no")
    print(f"distinguishing trace ({len(te.distinguishing)} events):")
    for ch, char in te.distinguishing:
        print(f"  {b1.compiled.channel_label(ch)} {char}")
    return EX_FAIL


def cmd_safety(args) -> int:
    _doc, env = _load(args.file)
    built = _network(env, args.network)
    r = _restricted(built)
    try:
        code = compile(args.predicate, "<predicate>", "eval")
    except SyntaxError as exc:
        raise _UsageError(f"predicate does not parse: {exc}") from exc

    def bad(cfg) -> bool:
        scope = {
            "state": cfg.state,
            "pending": cfg.pending[1] if cfg.pending is not None else None,
            "len": len,
            "any": any,
            "all": all,
            "sum": sum,
        }
        return bool(eval(code, {"__builtins__": {}}, scope))

    try:
        rep = safety_query(r, bad)
    except WorkbenchError:
        raise
    except Exception as exc:  # a broken predicate is a usage problem
        raise _UsageError(f"predicate failed on a configuration: {exc}") from exc
    if rep.ok:
        print("safe: yes")
        print(f"configurations checked: {len(r.graph.edges)}")
        return EX_OK
    print("safe: no")
    print(f"violation: {_cfg_str(built, rep.violation)}")
    print(f"path length: {len(rep.path)}")
    cfg = r.graph.initial
    print(f"  start {_cfg_str(built, cfg)}")
    a = built.automaton
    for e in rep.path:
        print(
            f"  {_label_str(a.inputs, e.transition.input)} / "
            f"{_label_str(a.outputs, e.transition.output)} -> {_cfg_str(built, e.target)}"
        )
    return EX_FAIL


def cmd_dot(args) -> int:
    _doc, env = _load(args.file)
    built = env.networks.get(args.target)
    if built is not None and built.restricted is not None:
        text = export_dot(built.restricted)
    else:
        text = export_dot(_automaton(env, args.target))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
        print(args.out)
    else:
        sys.stdout.write(text)
    return EX_OK


def cmd_examples(args) -> int:
    if args.action == "list":
        for name in _corpus.names():
            print(name)
        return EX_OK
    if not args.name:
        raise _UsageError("examples emit needs a NAME")
    try:
        text = _corpus.text(args.name)
    except KeyError as exc:
        raise _UsageError(str(exc.args[0])) from None
    path = f"{args.dir.rstrip('/')}/{args.name}.pw" if args.dir else f"{args.name}.pw"
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    print(path)
    return EX_OK


def examples() -> list[str]:
    """Names of the bundled example documents."""
    return list(_corpus.names())


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fioa",
        description="Compositional workbench for finite input/output automata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="build a document and run its check directives")
    p.add_argument("file")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("product", help="weak product of named automata")
    p.add_argument("file")
    p.add_argument("names", nargs="+")
    p.set_defaults(handler=cmd_product)

    p = sub.add_parser("cbr", help="channel-based restriction report for a network")
    p.add_argument("file")
    p.add_argument("network")
    p.set_defaults(handler=cmd_cbr)

    p = sub.add_parser("cond", help="condition-based restriction report for a network")
    p.add_argument("file")
    p.add_argument("network")
    p.set_defaults(handler=cmd_cond)

    p = sub.add_parser("check", help="query one property; exit 1 with witness on failure")
    p.add_argument(
        "kind",
        choices=["wellformed", "consistent", "protocol", "quasidet", "unaffected"],
    )
    p.add_argument("file")
    p.add_argument("network")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("run", help="walk a network's configuration graph")
    p.add_argument("file")
    p.add_argument("network")
    p.add_argument("--scheduler", choices=["random", "exhaustive", "script"], default="random")
    p.add_argument("--bound", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--script", help="file of choice indices for --scheduler script")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("laws", help="exercise the operator identities on random instances")
    p.add_argument("law", help="'all' or one law name")
    p.add_argument("--seeds", type=int, default=200)
    p.set_defaults(handler=cmd_laws)

    p = sub.add_parser("equiv", help="channel-event trace equivalence of two networks")
    p.add_argument("file")
    p.add_argument("net1")
    p.add_argument("net2")
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(handler=cmd_equiv)

    p = sub.add_parser("safety", help="search reachable configurations for a predicate")
    p.add_argument("file")
    p.add_argument("network")
    p.add_argument("--predicate", required=True, help="Python expression over state/pending")
    p.set_defaults(handler=cmd_safety)

    p = sub.add_parser("dot", help="DOT diagram for an automaton or network")
    p.add_argument("file")
    p.add_argument("target")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_dot)

    p = sub.add_parser("examples", help="list or emit the bundled corpus")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("name", nargs="?")
    p.add_argument("--dir", default=None)
    p.set_defaults(handler=cmd_examples)

    return parser


def cli(argv=None) -> int:
    """Dispatch one command line; returns the process exit code."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except (WorkbenchError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE


def main(argv=None) -> int:
    return cli(argv)


if __name__ == "__main__":
    sys.exit(main())
