"""Analysis toolkit: operator laws, trace equivalence, safety search."""
from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from fioa import (
    LAWS,
    Acceptance,
    Channel,
    Transition,
    WiringError,
    automata_equal,
    cbr,
    check_law,
    cond,
    examples,
    flatten,
    random_nfioa,
    run_law_suite,
    safety_query,
    trace_equivalent,
    trace_language,
    weak_product,
)
from fioa.analysis import law_instance
from fioa.conditions import Condition, IoPattern, Scope
from fioa.core import ComponentAlphabet, Nfioa
from fioa.dsl import WorkbenchDocument, resolve


REQUEST = (Channel(0, 1), "req")
CONFIRM_REQ = (Channel(1, 0), "cf_req")
RELEASE = (Channel(0, 1), "fin")
CONFIRM_FIN = (Channel(1, 0), "cf_fin")


@pytest.fixture(scope="module")
def mutex(mutex_env):
    return mutex_env.networks["closed_mutex"].restricted


class TestLaws:
    def test_the_five_laws_are_registered(self):
        assert LAWS == (
            "cbr-commute",
            "restr-product-commute",
            "protocol-product",
            "channel-condition-commute",
            "separation",
        )

    @pytest.mark.parametrize("law", [l for l in LAWS if l != "separation"])
    def test_law_holds_on_seeded_instances(self, law):
        for seed in range(40):
            rep = check_law(law, seed=seed)
            assert rep.passed, (law, seed, rep.detail)

    def test_suite_runner_collects_no_failures(self):
        failures = run_law_suite(seeds=25)
        assert all(not bad for bad in failures.values())

    def test_overlapping_channels_make_an_instance_inapplicable(self):
        a, c1, _ = law_instance("cbr-commute", 0)
        rep = check_law("cbr-commute", (a, c1, c1))
        assert not rep.applicable
        assert rep.passed  # inapplicable never counts as failure

    def test_unknown_law_is_rejected(self):
        with pytest.raises(WiringError):
            check_law("conservation-of-mass")

    def test_product_with_prerestricted_factor_alone_is_not_enough(self):
        """Why the product/restriction law re-imposes the wiring on both sides.

        Flattening a restricted factor forgets which of its states are only
        reachable mid-handshake, so the bare product lets the other factor
        move from those states.  The law's right-hand side therefore wires
        the channel again after composing; comparing against the bare
        product instead would fail on this two-state walker.
        """

        handshake = Nfioa(
            name="handshake",
            states=[("b0",), ("b1",), ("b2",)],
            inputs=(ComponentAlphabet("mr", ("m",)),),
            outputs=(ComponentAlphabet("ms", ("m",)),),
            initial=("b0",),
            acceptance=Acceptance.final([("b2",)]),
            transitions=[
                Transition(("b0",), ("b1",), ("",), ("m",)),
                Transition(("b1",), ("b2",), ("m",), ("",)),
            ],
        )
        walker = Nfioa(
            name="walker",
            states=[("a0",), ("a1",)],
            inputs=(),
            outputs=(),
            initial=("a0",),
            acceptance=Acceptance.final([("a1",)]),
            transitions=[Transition(("a0",), ("a1",), (), ())],
        )
        loopback = Channel(0, 0)
        prod, index = weak_product([walker, handshake])
        shifted = Channel(index.output_slices[1][0], index.input_slices[1][0])

        lhs = flatten(cbr(prod, (shifted,)))
        mid_handshake_walk = Transition(("a0", "b1"), ("a1", "b1"), ("",), ("",))
        assert mid_handshake_walk not in lhs.transitions

        naive_rhs, _ = weak_product([walker, flatten(cbr(handshake, (loopback,)))])
        assert mid_handshake_walk in naive_rhs.transitions
        assert not automata_equal(lhs, naive_rhs).equal

        law_rhs = flatten(cbr(naive_rhs, (shifted,)))
        assert automata_equal(lhs, law_rhs, up_to_reachability=False).equal

    @given(st.integers(min_value=0, max_value=120))
    @settings(max_examples=60, deadline=None)
    def test_condition_restriction_also_commutes_with_products(self, seed):
        """Conditions scoped to one factor move through the product freely.

        Guarding a factor's conditions to its own slots (wildcard states and
        shifted component indices elsewhere) makes restricting the product
        agree with composing the restricted factor, up to reachability.
        Unlike channels this needs no second restriction pass: conditions
        carry no handshake state.
        """

        bystander = random_nfioa(seed=seed)
        target, _, conditions = law_instance("channel-condition-commute", seed + 10_000)
        shifted = tuple(
            _shift_into_product(c, bystander, target) for c in conditions
        )
        prod, _ = weak_product([bystander, target])
        lhs = cond(prod, shifted)
        rhs, _ = weak_product([bystander, cond(target, conditions)])
        verdict = automata_equal(lhs, rhs)
        assert verdict.equal, verdict.reason


def _shift_into_product(c, left, right):
    """Re-aim a condition on `right` at the product [left, right]."""

    width = len(left.initial)
    off_in, off_out = len(left.inputs), len(left.outputs)

    def shift_io(pat, off):
        if pat is None or pat.kind in ("any", "silent"):
            return pat
        return IoPattern(
            pat.kind,
            None if pat.component is None else pat.component + off,
            pat.character,
        )

    return Condition(
        name=c.name,
        source=("*",) * width + tuple(c.source),
        target=("*",) * width + tuple(c.target),
        input=shift_io(c.input, off_in),
        output=shift_io(c.output, off_out),
        scope=Scope(
            state_components=tuple(i + width for i in range(len(right.initial))),
            input_components=tuple(i + off_in for i in range(len(right.inputs))),
            output_components=tuple(i + off_out for i in range(len(right.outputs))),
        ),
    )


class TestSeparation:
    def test_direct_and_relayed_interception_agree_exactly(self):
        lhs, rhs = examples.separation_sides()
        assert len(lhs.states) == 40
        assert len(lhs.transitions) == 50
        rep = automata_equal(lhs, rhs, up_to_reachability=False)
        assert rep.equal, rep.reason

    def test_separation_law_report(self):
        rep = check_law("separation")
        assert rep.applicable and rep.ok


class TestTraceLanguage:
    def test_handshake_language_is_a_single_chain(self, mutex):
        lang = trace_language(mutex, 4)
        chain = (REQUEST, CONFIRM_REQ, RELEASE, CONFIRM_FIN)
        assert lang == frozenset(chain[:k] for k in range(5))

    def test_language_grows_with_the_bound(self, mutex):
        assert trace_language(mutex, 2) < trace_language(mutex, 6)

    def test_language_is_prefix_closed(self, mutex):
        lang = trace_language(mutex, 8)
        for trace in lang:
            for k in range(len(trace)):
                assert trace[:k] in lang

    @given(st.integers(min_value=0, max_value=100))
    @settings(max_examples=30, deadline=None)
    def test_random_instance_languages_are_prefix_closed(self, seed):
        a, c1, c2 = law_instance("cbr-commute", seed)
        r = cbr(a, (c1, c2))
        lang = trace_language(r, 3)
        assert () in lang
        for trace in lang:
            for k in range(len(trace)):
                assert trace[:k] in lang
        assert trace_language(r, 2) <= lang


class TestTraceEquivalence:
    def test_quasi_and_deterministic_rings_are_equivalent(self, ring_eq_env):
        quasi = ring_eq_env.networks["ring_quasi"].restricted
        det = ring_eq_env.networks["ring_det"].restricted
        assert len(quasi.graph.configs) == 10
        assert len(det.graph.configs) == 8
        verdict = trace_equivalent(quasi, det)
        assert verdict.equal
        assert verdict.sufficient_bound == 80
        assert verdict.bound_used is None  # ran to fixpoint

    def test_sticky_ring_is_distinguished_after_two_events(self, ring_eq_env):
        det = ring_eq_env.networks["ring_det"].restricted
        sticky = ring_eq_env.networks["ring_sticky"].restricted
        verdict = trace_equivalent(det, sticky)
        assert not verdict.equal
        assert verdict.distinguishing == (
            (Channel(6, 2), "timeout"),  # timer fires at the first cell
            (Channel(2, 4), "token"),  # the handover the sticky cell refuses
        )

    def test_busy_users_expose_the_quasi_administrator(self):
        """With idle clients the two administrators look alike; with real
        ones the checker refutes equivalence and produces a witness.

        The network administrator may answer a request with nothing
        scheduled between the timer firing and the confirmation, while the
        one-machine administrator that consumed a timeout has already
        committed the token to its neighbour.  The shortest witness is
        exactly that: a timeout at the first cell followed by a client
        request the quasi ring can still absorb.
        """

        doc = WorkbenchDocument(
            automata=(
                examples.user_role(),
                examples.server_role(),
                examples.ring_role(),
                examples.timer_role(),
                examples.det_admin_role(),
            ),
            networks=(
                examples.administrator_def(),
                examples.ring_def(2, name="busy_quasi"),
                examples.ring_def(
                    2,
                    name="busy_det",
                    admin_ref="DetAdmin",
                    admin_first_init=("avail",),
                ),
            ),
        )
        resolved = resolve(doc)
        quasi = resolved.networks["busy_quasi"].restricted
        det = resolved.networks["busy_det"].restricted
        verdict = trace_equivalent(quasi, det)
        assert not verdict.equal
        assert verdict.bound_used is None  # refuted at the fixpoint, not cut off
        assert verdict.distinguishing == (
            (Channel(6, 2), "timeout"),
            (Channel(8, 0), "req"),
        )
        compiled = resolved.networks["busy_quasi"].compiled
        labels = [compiled.channel_label(ch) for ch, _ in verdict.distinguishing]
        assert labels == ["t1.clk>a1.clk", "u1.svc>a1.svc"]

    def test_too_small_a_bound_hides_the_difference(self, ring_eq_env):
        det = ring_eq_env.networks["ring_det"].restricted
        sticky = ring_eq_env.networks["ring_sticky"].restricted
        verdict = trace_equivalent(det, sticky, bound=1)
        assert verdict.equal
        assert verdict.bound_used == 1

    def test_different_channel_structure_is_a_precondition_failure(self, mutex, ring_eq_env):
        with pytest.raises(WiringError, match="channel structure"):
            trace_equivalent(mutex, ring_eq_env.networks["ring_det"].restricted)

    def test_different_sender_alphabets_are_a_precondition_failure(self, mutex):
        base = flatten(mutex)
        widened = Nfioa(
            name="wide",
            states=base.states,
            inputs=(
                base.inputs[0],
                ComponentAlphabet(
                    base.inputs[1].name, base.inputs[1].characters | {"ping"}
                ),
            ),
            outputs=(
                ComponentAlphabet(
                    base.outputs[0].name, base.outputs[0].characters | {"ping"}
                ),
                base.outputs[1],
            ),
            initial=base.initial,
            acceptance=base.acceptance,
            transitions=base.transitions,
        )
        other = cbr(widened, mutex.channels)
        with pytest.raises(WiringError, match="carries"):
            trace_equivalent(mutex, other)

    def test_every_network_is_equivalent_to_itself(self, all_restrictions):
        from fioa import is_well_formed

        for built in all_restrictions:
            r = built.restricted
            if not is_well_formed(r).ok:
                continue
            assert trace_equivalent(r, r).equal


class TestSafety:
    def test_shared_criticality_is_reachable_in_the_handshake(self, mutex):
        report = safety_query(mutex, lambda c: c.state == ("crit", "crit"))
        assert not report.ok
        assert report.violation.state == ("crit", "crit")
        assert len(report.path) == 4
        # the path replays from the initial configuration
        at = mutex.graph.initial
        for edge in report.path:
            assert edge in mutex.graph.edges[at]
            at = edge.target
        assert at == report.violation

    def test_unreachable_shapes_come_back_safe(self, mutex):
        report = safety_query(
            mutex, lambda c: c.state[0] == "crit" and c.state[1] == "remn"
        )
        assert report.ok
        assert report.violation is None and report.path is None

    def test_violation_at_the_initial_configuration_has_an_empty_path(self, mutex):
        report = safety_query(mutex, lambda c: True)
        assert not report.ok
        assert report.violation == mutex.graph.initial
        assert report.path == ()

    def test_ring_exclusion_as_a_safety_query(self, ring2_env):
        r = ring2_env.networks["ring2"].restricted
        report = safety_query(
            r, lambda c: c.state[6] == "crit" and c.state[7] == "crit"
        )
        assert report.ok
