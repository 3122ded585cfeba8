"""Weakly synchronized products: exactly one factor moves per transition.

The flattened representation is literal concatenation — product states are
the factor state tuples glued together, and the input/output interfaces
are the factor interfaces side by side.  That makes re-bracketing a pure
bookkeeping operation (`associate`) and lets differently-grouped
constructions be compared with plain equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterable, Sequence

from .core import (
    EPSILON,
    Acceptance,
    ComponentAlphabet,
    Nfioa,
    StateVector,
    Transition,
    reachable_states,
    require_valid,
)
from .errors import CapacityExceeded, WiringError

STATE_CAP = 10**6
TRANSITION_CAP = 2 * 10**6


@dataclass(frozen=True)
class ProductIndex:
    """(offset, width) slices locating each factor in the flat vectors."""

    state_slices: tuple[tuple[int, int], ...]
    input_slices: tuple[tuple[int, int], ...]
    output_slices: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for slices in (self.state_slices, self.input_slices, self.output_slices):
            at = 0
            for off, width in slices:
                if off != at or width < 0:
                    raise WiringError("index slices must partition the flat dimensions")
                at += width

    @property
    def factor_count(self) -> int:
        return len(self.state_slices)

    @classmethod
    def for_factors(cls, factors: Sequence[Nfioa]) -> "ProductIndex":
        def slices(widths):
            out, at = [], 0
            for w in widths:
                out.append((at, w))
                at += w
            return tuple(out)

        return cls(
            state_slices=slices(f.state_width for f in factors),
            input_slices=slices(len(f.inputs) for f in factors),
            output_slices=slices(len(f.outputs) for f in factors),
        )

    def state_of(self, vec: tuple, k: int) -> tuple:
        off, w = self.state_slices[k]
        return vec[off : off + w]

    def input_of(self, vec: tuple, k: int) -> tuple:
        off, w = self.input_slices[k]
        return vec[off : off + w]

    def output_of(self, vec: tuple, k: int) -> tuple:
        off, w = self.output_slices[k]
        return vec[off : off + w]

    def regroup(self, groups: Sequence[Sequence[int]]) -> "ProductIndex":
        flat = [i for g in groups for i in g]
        if flat != list(range(self.factor_count)):
            raise WiringError(
                "regrouping must re-bracket the factors in order; permutations are out of scope"
            )

        def merge(slices):
            return tuple(
                (slices[g[0]][0], sum(slices[i][1] for i in g)) for g in groups
            )

        return ProductIndex(
            state_slices=merge(self.state_slices),
            input_slices=merge(self.input_slices),
            output_slices=merge(self.output_slices),
        )


def _qualified(factor: Nfioa, comps: tuple[ComponentAlphabet, ...]):
    return tuple(ComponentAlphabet(f"{factor.name}.{c.name}", c.characters) for c in comps)


def _concat_interfaces(factors: Sequence[Nfioa]):
    inputs = tuple(c for f in factors for c in _qualified(f, f.inputs))
    outputs = tuple(c for f in factors for c in _qualified(f, f.outputs))
    return inputs, outputs


def _product_acceptance(factors: Sequence[Nfioa]) -> Acceptance:
    """Conjunction of the factor conditions on the flattened state space.

    Final mode: the Cartesian product of the final sets.  Muller mode: one
    member per choice of factor members — the set product, flattened.
    """
    mode = factors[0].acceptance.mode
    if mode == "final":
        finals = [sorted(f.acceptance.final_states) for f in factors]
        return Acceptance.final(
            tuple(v for part in combo for v in part) for combo in cartesian(*finals)
        )
    families = [sorted(f.acceptance.muller_sets, key=sorted) for f in factors]
    members = []
    for combo in cartesian(*families):
        members.append(
            frozenset(
                tuple(v for part in pick for v in part)
                for pick in cartesian(*(sorted(m) for m in combo))
            )
        )
    return Acceptance.muller(members)


def acceptance_within(factors: Sequence[Nfioa], allowed: frozenset[StateVector]) -> Acceptance:
    """Product acceptance restricted to a known reachable state set.

    A Muller member that is not contained in `allowed` can never be the
    infinitely-visited set of a run staying inside it, so such members are
    dropped — without being materialized when a size count already rules
    them out.  Used for lazily-explored networks whose full rectangles
    would be enormous.
    """
    mode = factors[0].acceptance.mode
    if mode == "final":
        acc = _product_acceptance(factors)
        return Acceptance.final(acc.final_states & allowed)
    families = [sorted(f.acceptance.muller_sets, key=sorted) for f in factors]
    members = []
    for combo in cartesian(*families):
        size = 1
        for m in combo:
            size *= len(m)
        if size > len(allowed):
            continue
        member = frozenset(
            tuple(v for part in pick for v in part)
            for pick in cartesian(*(sorted(m) for m in combo))
        )
        if member <= allowed:
            members.append(member)
    return Acceptance.muller(members)


def _check_modes(factors: Sequence[Nfioa]):
    modes = {f.acceptance.mode for f in factors}
    if len(modes) > 1:
        raise WiringError(f"factors mix acceptance modes {sorted(modes)}; coercion is not defined")


def weak_product(
    factors: Sequence[Nfioa],
    *,
    name: str | None = None,
    state_cap: int = STATE_CAP,
    transition_cap: int = TRANSITION_CAP,
) -> tuple[Nfioa, ProductIndex]:
    """Eager weakly synchronized product of one or more automata.

    Exactly one factor moves per product transition, with the factor's
    input/output characters embedded at its slice of the flat interface
    and every other factor's state carried along unchanged.  Moving-factor
    sources and carried contexts are both restricted to the per-factor
    reachable states.  States are materialized up front, guarded by caps.
    """
    factors = list(factors)
    if not factors:
        raise WiringError("product needs at least one factor")
    for f in factors:
        require_valid(f)
    _check_modes(factors)
    index = ProductIndex.for_factors(factors)

    n_states = 1
    for f in factors:
        n_states *= len(f.states)
    if n_states > state_cap:
        raise CapacityExceeded(f"product would have {n_states} states (cap {state_cap})")

    reach = [sorted(reachable_states(f)) for f in factors]
    n_trans = 0
    for k, f in enumerate(factors):
        alive = sum(1 for t in f.transitions if t.source in f.states and t.source in set(reach[k]))
        ctx = 1
        for j in range(len(factors)):
            if j != k:
                ctx *= len(reach[j])
        n_trans += alive * ctx
    if n_trans > transition_cap:
        raise CapacityExceeded(
            f"product would have {n_trans} transitions (cap {transition_cap}); "
            "explore it as a network instead"
        )

    inputs, outputs = _concat_interfaces(factors)
    in_width, out_width = len(inputs), len(outputs)

    states = frozenset(
        tuple(v for part in combo for v in part)
        for combo in cartesian(*(sorted(f.states) for f in factors))
    )
    initial = tuple(v for f in factors for v in f.initial)

    def embed(vc: tuple, k: int, slices, width: int) -> tuple:
        out = [EPSILON] * width
        off, _w = slices[k]
        for i, ch in enumerate(vc):
            out[off + i] = ch
        return tuple(out)

    transitions: list[Transition] = []
    reach_sets = [set(r) for r in reach]
    for k, f in enumerate(factors):
        ctx_parts = [reach[j] for j in range(len(factors)) if j != k]
        moving = sorted(t for t in f.transitions if t.source in reach_sets[k])
        for ctx in cartesian(*ctx_parts):
            for t in moving:
                parts_src, parts_tgt = [], []
                ci = 0
                for j in range(len(factors)):
                    if j == k:
                        parts_src.append(t.source)
                        parts_tgt.append(t.target)
                    else:
                        parts_src.append(ctx[ci])
                        parts_tgt.append(ctx[ci])
                        ci += 1
                transitions.append(
                    Transition(
                        tuple(v for p in parts_src for v in p),
                        tuple(v for p in parts_tgt for v in p),
                        embed(t.input, k, index.input_slices, in_width),
                        embed(t.output, k, index.output_slices, out_width),
                    )
                )

    prod = Nfioa(
        name=name or "(" + " x ".join(f.name for f in factors) + ")",
        states=states,
        inputs=inputs,
        outputs=outputs,
        initial=initial,
        acceptance=_product_acceptance(factors),
        transitions=transitions,
    )
    return prod, index


def associate(
    product: Nfioa, index: ProductIndex, regrouping: Sequence[Sequence[int]]
) -> tuple[Nfioa, ProductIndex]:
    """Re-bracket a product's factors without touching the automaton.

    Because flattening is literal concatenation, ((A⊗B)⊗C) and (A⊗(B⊗C))
    are the same flat automaton; only the index bookkeeping changes.
    Permutations are rejected.
    """
    return product, index.regroup(regrouping)


class LazyProduct:
    """Weak product materialized on demand, for exploring large networks.

    Semantically identical to `weak_product` restricted to what a forward
    exploration can see: successors of a state are generated per factor
    when asked.  Carries the same flat interface and index so channel and
    condition machinery applies unchanged.
    """

    def __init__(self, factors: Sequence[Nfioa], *, name: str | None = None):
        self.factors = tuple(factors)
        if not self.factors:
            raise WiringError("product needs at least one factor")
        for f in self.factors:
            require_valid(f)
        _check_modes(self.factors)
        self.name = name or "(" + " x ".join(f.name for f in self.factors) + ")"
        self.index = ProductIndex.for_factors(self.factors)
        self.inputs, self.outputs = _concat_interfaces(self.factors)
        self.initial = tuple(v for f in self.factors for v in f.initial)
        self._reach = [reachable_states(f) for f in self.factors]
        self._by_source: list[dict] = []
        for f in self.factors:
            table: dict = {}
            for t in sorted(f.transitions):
                table.setdefault(t.source, []).append(t)
            self._by_source.append(table)
        self._in_width = len(self.inputs)
        self._out_width = len(self.outputs)

    def outgoing(self, state: StateVector) -> tuple[Transition, ...]:
        out: list[Transition] = []
        index = self.index
        for k in range(len(self.factors)):
            local = index.state_of(state, k)
            if local not in self._reach[k]:
                continue
            off, w = index.state_slices[k]
            in_off = index.input_slices[k][0]
            out_off = index.output_slices[k][0]
            for t in self._by_source[k].get(local, ()):
                tgt = state[:off] + t.target + state[off + w :]
                inp = [EPSILON] * self._in_width
                for i, ch in enumerate(t.input):
                    inp[in_off + i] = ch
                outp = [EPSILON] * self._out_width
                for i, ch in enumerate(t.output):
                    outp[out_off + i] = ch
                out.append(Transition(state, tgt, tuple(inp), tuple(outp)))
        return tuple(sorted(out))

    def acceptance_for(self, allowed: frozenset[StateVector]) -> Acceptance:
        return acceptance_within(self.factors, allowed)
