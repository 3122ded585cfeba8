"""Law harness, behavioral (trace) equivalence, and safety queries.

The operator identities are checked by computing both sides along
genuinely different construction paths and comparing the resulting flat
automata exactly — same states, same transitions, no isomorphism search.
Random instances come from a seeded generator so failures replay.

Behavioral equivalence observes channel events only: an event is a send
occurrence (channel, character).  Internal moves are unobservable.  Both
sides are determinized over silent closures and walked in lockstep, which
is complete for these finite configuration graphs; the configuration
count product is reported as the (conservative) sufficient trace bound.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

from .core import (
    Acceptance,
    ComponentAlphabet,
    Nfioa,
    Transition,
    active_slot,
    automata_equal,
)
from .channels import (
    Channel,
    Configuration,
    Edge,
    RestrictedAutomaton,
    cbr,
    flatten,
    is_protocol,
)
from .conditions import Condition, IoPattern, cond
from .errors import WiringError
from .product import weak_product

LAWS = (
    "cbr-commute",
    "restr-product-commute",
    "protocol-product",
    "channel-condition-commute",
    "separation",
)


@dataclass(frozen=True)
class LawReport:
    law: str
    applicable: bool
    ok: bool
    detail: str | None = None

    @property
    def passed(self) -> bool:
        return (not self.applicable) or self.ok


# ---------------------------------------------------------------------------
# Random instances


def random_nfioa(
    seed: int,
    *,
    n_states: int = 4,
    n_inputs: int = 2,
    n_outputs: int = 2,
    n_chars: int = 2,
    n_transitions: int = 10,
    name: str | None = None,
) -> Nfioa:
    """Deterministic-per-seed valid automaton for the law harness."""
    rng = random.Random(seed)
    states = [(f"s{i}",) for i in range(n_states)]
    chars = "abcdef"[: max(1, n_chars)]
    inputs = tuple(
        ComponentAlphabet(f"in{k}", rng.sample(chars, rng.randint(1, len(chars))))
        for k in range(n_inputs)
    )
    outputs = tuple(
        ComponentAlphabet(f"out{k}", rng.sample(chars, rng.randint(1, len(chars))))
        for k in range(n_outputs)
    )

    def label(comps) -> tuple[str, ...]:
        vc = [""] * len(comps)
        if comps and rng.random() < 0.6:
            k = rng.randrange(len(comps))
            vc[k] = rng.choice(sorted(comps[k].characters))
        return tuple(vc)

    transitions = set()
    for _ in range(n_transitions):
        transitions.add(
            Transition(
                rng.choice(states),
                rng.choice(states),
                label(inputs),
                label(outputs),
            )
        )
    finals = frozenset(s for s in states if rng.random() < 0.5) or frozenset(states[:1])
    return Nfioa(
        name=name or f"rand{seed}",
        states=states,
        inputs=inputs,
        outputs=outputs,
        initial=states[0],
        acceptance=Acceptance.final(finals),
        transitions=transitions,
    )


def _weld(a: Nfioa, channels: Iterable[Channel]) -> Nfioa:
    """Grow input alphabets so every channel satisfies sender ⊆ receiver."""
    new_inputs = list(a.inputs)
    for ch in channels:
        recv = new_inputs[ch.in_component]
        send = a.outputs[ch.out_component]
        new_inputs[ch.in_component] = ComponentAlphabet(
            recv.name, recv.characters | send.characters
        )
    return Nfioa(
        name=a.name,
        states=a.states,
        inputs=tuple(new_inputs),
        outputs=a.outputs,
        initial=a.initial,
        acceptance=a.acceptance,
        transitions=a.transitions,
    )


def _random_condition(rng: random.Random, a: Nfioa, tag: int) -> Condition:
    values = sorted({v for s in a.states for v in s})

    def pattern():
        return tuple(
            rng.choice(values) if rng.random() < 0.5 else "*"
            for _ in range(a.state_width)
        )

    input_pat = IoPattern.silent() if rng.random() < 0.5 else IoPattern.any()
    return Condition(
        name=f"e{tag}",
        source=pattern(),
        target=pattern(),
        input=input_pat,
        output=IoPattern.any(),
    )


def law_instance(law: str, seed: int):
    """Build the seeded instance a law check runs on."""
    rng = random.Random(("fioa", law, seed).__repr__())
    sub = lambda: rng.randrange(10**9)
    if law == "cbr-commute":
        a = random_nfioa(sub(), n_inputs=2, n_outputs=2)
        c1, c2 = Channel(0, 0), Channel(1, 1)
        return (_weld(a, (c1, c2)), c1, c2)
    if law == "restr-product-commute":
        a = random_nfioa(sub(), n_inputs=1, n_outputs=1, n_states=3)
        b = random_nfioa(sub(), n_inputs=2, n_outputs=2, n_states=3)
        cb = Channel(0, 0)  # local to b
        return (a, _weld(b, (cb,)), cb)
    if law == "protocol-product":
        a1 = random_nfioa(sub(), n_inputs=2, n_outputs=2, n_states=3)
        a2 = random_nfioa(sub(), n_inputs=2, n_outputs=2, n_states=3)
        c1_local = Channel(0, 0)
        c2_local = Channel(0, 0)
        return (_weld(a1, (c1_local,)), (c1_local,), _weld(a2, (c2_local,)), (c2_local,))
    if law == "channel-condition-commute":
        a = random_nfioa(sub(), n_inputs=2, n_outputs=2)
        c = Channel(0, 0)
        a = _weld(a, (c,))
        conds = tuple(_random_condition(rng, a, i) for i in range(rng.randint(1, 2)))
        return (a, (c,), conds)
    if law == "separation":
        return None  # fixed composite; see examples.mitm_instance
    raise WiringError(f"unknown law {law!r}")


# ---------------------------------------------------------------------------
# The laws themselves


def _eq(lhs: Nfioa, rhs: Nfioa) -> tuple[bool, str | None]:
    rep = automata_equal(lhs, rhs, up_to_reachability=False)
    return rep.equal, rep.reason


def check_law(law: str, instance=None, *, seed: int = 0) -> LawReport:
    """Check one operator identity on one instance.

    A violated side condition (overlapping channels, a channel that
    touches the wrong factor, conditions out of scope) yields an
    inapplicable report, never a failure.
    """
    if instance is None:
        instance = law_instance(law, seed)

    if law == "cbr-commute":
        a, c1, c2 = instance
        if c1.out_component == c2.out_component or c1.in_component == c2.in_component:
            return LawReport(law, False, False, "channels share a component")
        r12 = cbr(cbr(a, (c1,)), (c2,))
        r21 = cbr(cbr(a, (c2,)), (c1,))
        both = cbr(a, (c1, c2))
        ok, why = _eq(flatten(r12), flatten(r21))
        if ok:
            ok, why = _eq(flatten(r12), flatten(both))
        return LawReport(law, True, ok, why)

    if law == "restr-product-commute":
        a, b, cb = instance
        if not (
            0 <= cb.out_component < len(b.outputs)
            and 0 <= cb.in_component < len(b.inputs)
        ):
            return LawReport(law, False, False, "channel is not local to the second factor")
        prod, idx = weak_product([a, b])
        shifted = Channel(
            idx.output_slices[1][0] + cb.out_component,
            idx.input_slices[1][0] + cb.in_component,
        )
        lhs = flatten(cbr(prod, (shifted,)))
        rb = flatten(cbr(b, (cb,)))
        prod2, _ = weak_product([a, rb])
        rhs = flatten(cbr(prod2, (shifted,)))
        ok, why = _eq(lhs, rhs)
        return LawReport(law, True, ok, why)

    if law == "protocol-product":
        a1, c1s, a2, c2s = instance
        prod_raw, idx = weak_product([a1, a2])
        in_off = idx.input_slices[1][0]
        out_off = idx.output_slices[1][0]

        def shift(ch: Channel) -> Channel:
            return Channel(ch.out_component + out_off, ch.in_component + in_off)

        local = tuple(c1s) + tuple(shift(c) for c in c2s)
        wired_in = {c.in_component for c in local}
        wired_out = {c.out_component for c in local}
        open_out = [k for k in range(len(prod_raw.outputs)) if k not in wired_out]
        open_in = [k for k in range(len(prod_raw.inputs)) if k not in wired_in]
        if len(open_out) != len(open_in):
            return LawReport(law, False, False, "interfaces cannot be closed pairwise")
        cross = [Channel(o, i) for o, i in zip(open_out, open_in)]
        everything = local + tuple(cross)

        p1 = flatten(cbr(a1, tuple(c1s)))
        p2 = flatten(cbr(a2, tuple(c2s)))
        pre_restricted, _ = weak_product([p1, p2])
        raw2, _ = weak_product([a1, a2])
        lhs = cbr(_weld(pre_restricted, everything), everything)
        rhs = cbr(_weld(raw2, everything), everything)
        ok, why = _eq(flatten(lhs), flatten(rhs))
        if ok and not is_protocol(lhs):
            ok, why = False, "closed wiring did not yield a protocol"
        return LawReport(law, True, ok, why)

    if law == "channel-condition-commute":
        a, channels, conditions = instance
        lhs = flatten(cond(cbr(a, channels), conditions))
        rhs = flatten(cbr(cond(a, conditions), channels))
        ok, why = _eq(lhs, rhs)
        return LawReport(law, True, ok, why)

    if law == "separation":
        from .examples import separation_sides

        lhs, rhs = separation_sides()
        ok, why = _eq(lhs, rhs)
        return LawReport(law, True, ok, why)

    raise WiringError(f"unknown law {law!r}")


def run_law_suite(
    laws: Sequence[str] | None = None, seeds: int = 200
) -> dict[str, list[tuple[int, LawReport]]]:
    """Run each law over seeded instances; returns failures per law.

    The separation identity has a single canonical instance, so it runs
    once regardless of the seed count.
    """
    failures: dict[str, list[tuple[int, LawReport]]] = {}
    for law in laws or LAWS:
        bad: list[tuple[int, LawReport]] = []
        count = 1 if law == "separation" else seeds
        for seed in range(count):
            rep = check_law(law, seed=seed)
            if not rep.passed:
                bad.append((seed, rep))
        failures[law] = bad
    return failures


# ---------------------------------------------------------------------------
# Behavioral (trace) equivalence over channel events

Event = tuple[Channel, str]


def _event_of(r: RestrictedAutomaton, e: Edge) -> Event | None:
    oa = active_slot(e.transition.output)
    if oa is None:
        return None
    for ch in r.channels:
        if ch.out_component == oa[0]:
            return (ch, oa[1])
    return None


def _silent_closure(r: RestrictedAutomaton, cfgs: Iterable[Configuration]) -> frozenset:
    seen = set(cfgs)
    frontier = deque(seen)
    while frontier:
        c = frontier.popleft()
        for e in r.graph.edges[c]:
            if _event_of(r, e) is None and e.target not in seen:
                seen.add(e.target)
                frontier.append(e.target)
    return frozenset(seen)


def _event_steps(r: RestrictedAutomaton, closure: frozenset) -> dict[Event, frozenset]:
    steps: dict[Event, set] = {}
    for c in closure:
        for e in r.graph.edges[c]:
            ev = _event_of(r, e)
            if ev is not None:
                steps.setdefault(ev, set()).add(e.target)
    return {ev: _silent_closure(r, tgts) for ev, tgts in steps.items()}


def _event_key(ev: Event):
    return (ev[0], ev[1])


def trace_language(r: RestrictedAutomaton, bound: int) -> frozenset[tuple[Event, ...]]:
    """All channel-event traces of length ≤ bound.  Prefix-closed."""
    start = _silent_closure(r, [r.graph.initial])
    traces = {(): None}
    frontier = deque([((), start)])
    step_cache: dict[frozenset, dict[Event, frozenset]] = {}
    while frontier:
        trace, closure = frontier.popleft()
        if len(trace) >= bound:
            continue
        if closure not in step_cache:
            step_cache[closure] = _event_steps(r, closure)
        for ev, nxt in step_cache[closure].items():
            t2 = trace + (ev,)
            if t2 not in traces:
                traces[t2] = None
                frontier.append((t2, nxt))
    return frozenset(traces)


class TraceEquivalence(NamedTuple):
    equal: bool
    distinguishing: tuple[Event, ...] | None
    sufficient_bound: int
    bound_used: int | None  # None = complete fixpoint


def trace_equivalent(
    r1: RestrictedAutomaton, r2: RestrictedAutomaton, *, bound: int | None = None
) -> TraceEquivalence:
    """Lockstep determinized comparison of channel-event behavior.

    Without a bound the walk runs to fixpoint over pairs of closure sets,
    which is exhaustive for finite configuration graphs; with a bound it
    stops at that trace length.  On divergence the shortest distinguishing
    trace is returned (breadth-first order guarantees minimality).
    """
    if set(r1.channels) != set(r2.channels):
        raise WiringError("networks have different channel structure")
    for ch in r1.channels:
        o1 = r1.base.outputs[ch.out_component].characters
        o2 = r2.base.outputs[ch.out_component].characters
        if o1 != o2:
            raise WiringError(
                f"channel {ch} carries {sorted(o1)} on one side, {sorted(o2)} on the other"
            )
    sufficient = len(r1.graph.edges) * len(r2.graph.edges)
    s1 = _silent_closure(r1, [r1.graph.initial])
    s2 = _silent_closure(r2, [r2.graph.initial])
    seen = {(s1, s2)}
    frontier = deque([((), s1, s2)])
    cache1: dict[frozenset, dict[Event, frozenset]] = {}
    cache2: dict[frozenset, dict[Event, frozenset]] = {}
    while frontier:
        trace, c1, c2 = frontier.popleft()
        if bound is not None and len(trace) >= bound:
            continue
        if c1 not in cache1:
            cache1[c1] = _event_steps(r1, c1)
        if c2 not in cache2:
            cache2[c2] = _event_steps(r2, c2)
        e1, e2 = cache1[c1], cache2[c2]
        if set(e1) != set(e2):
            ev = sorted(set(e1) ^ set(e2), key=_event_key)[0]
            return TraceEquivalence(False, trace + (ev,), sufficient, bound)
        for ev in sorted(e1, key=_event_key):
            pair = (e1[ev], e2[ev])
            if pair not in seen:
                seen.add(pair)
                frontier.append((trace + (ev,), e1[ev], e2[ev]))
    return TraceEquivalence(True, None, sufficient, bound)


# ---------------------------------------------------------------------------
# Safety


class SafetyReport(NamedTuple):
    ok: bool
    violation: Configuration | None
    path: tuple[Edge, ...] | None


def safety_query(
    r: RestrictedAutomaton, bad: Callable[[Configuration], bool]
) -> SafetyReport:
    """Search every reachable configuration for the bad predicate.

    Returns the first violation in breadth-first order together with a
    shortest edge path from the initial configuration (replayable through
    `enabled`).
    """
    init = r.graph.initial
    parent: dict[Configuration, tuple[Configuration, Edge] | None] = {init: None}
    if bad(init):
        return SafetyReport(False, init, ())
    frontier = deque([init])
    while frontier:
        c = frontier.popleft()
        for e in r.graph.edges[c]:
            if e.target in parent:
                continue
            parent[e.target] = (c, e)
            if bad(e.target):
                path = []
                node = e.target
                while parent[node] is not None:
                    prev, edge = parent[node]
                    path.append(edge)
                    node = prev
                return SafetyReport(False, e.target, tuple(reversed(path)))
            frontier.append(e.target)
    return SafetyReport(True, None, None)
