"""Condition-based restriction: label patterns, vetoes, scope guards,
quasi-determinism, and the coordinated token administrator."""
from __future__ import annotations

import pytest

from fioa import (
    Condition,
    EPSILON,
    IoPattern,
    Projection,
    Scope,
    Transition,
    WiringError,
    classify,
    cond,
    cond_strict,
    examples,
    is_consistent_cond,
    is_quasi_deterministic,
    is_unaffected,
    project,
    reachable_states,
    weak_product,
)
from fioa.core import is_silent


@pytest.fixture(scope="module")
def admin(admin_env):
    return admin_env.networks["administrator"].automaton


@pytest.fixture(scope="module")
def raw_admin_product():
    prod, _ = weak_product([examples.server_role(), examples.ring_role()])
    return prod


def server_factor_projection():
    """Keep the granter slot of the two-wide administrator state."""
    ring_states = {s[0]: "_" for s in examples.ring_role().states}
    return Projection(
        state_maps=({}, ring_states),
        input_maps=({}, {"token": EPSILON}, {"timeout": EPSILON}),
        output_maps=({}, {"trigger": EPSILON}, {"token": EPSILON}),
    )


class TestIoPattern:
    def test_any_matches_everything(self):
        p = IoPattern.any()
        assert p.matches(("", "")) and p.matches(("req", ""))

    def test_silent_matches_only_all_empty(self):
        p = IoPattern.silent()
        assert p.matches(("", ""))
        assert not p.matches(("req", ""))

    def test_literal_pins_component_and_character(self):
        p = IoPattern.literal(1, "req")
        assert p.matches(("", "req"))
        assert not p.matches(("req", ""))
        assert not p.matches(("", "fin"))

    def test_active_requires_any_character_at_component(self):
        p = IoPattern.active(0)
        assert p.matches(("req", ""))
        assert p.matches(("fin", ""))
        assert not p.matches(("", "req"))

    def test_literal_needs_component_and_character(self):
        with pytest.raises(WiringError):
            IoPattern("literal", component=0)
        with pytest.raises(WiringError):
            IoPattern("active")
        with pytest.raises(WiringError):
            IoPattern("telepathic")


class TestConditionMatching:
    T = Transition(("remn", "abst"), ("try", "abst"), ("", "", ""), ("req", "", ""))

    def test_wildcards_match_any_state_value(self):
        c = Condition("veto", ("*", "abst"), ("try", "*"))
        assert c.matches(self.T)

    def test_literal_state_mismatch_blocks(self):
        c = Condition("veto", ("crit", "*"), ("*", "*"))
        assert not c.matches(self.T)

    def test_width_mismatch_never_matches(self):
        c = Condition("veto", ("*",), ("*",))
        assert not c.matches(self.T)

    def test_label_patterns_participate(self):
        wants_silent_out = Condition(
            "veto", ("*", "*"), ("*", "*"), output=IoPattern.silent()
        )
        assert not wants_silent_out.matches(self.T)
        wants_req = Condition(
            "veto", ("*", "*"), ("*", "*"), output=IoPattern.literal(0, "req")
        )
        assert wants_req.matches(self.T)

    def test_unscoped_condition_requires_some_activity(self):
        idle = Transition(("remn", "abst"), ("remn", "abst"), ("", "", ""), ("", "", ""))
        c = Condition("veto", ("*", "*"), ("*", "*"))
        assert not c.matches(idle)

    def test_scope_guard_ignores_foreign_activity(self):
        # only the second slot moves; a condition scoped to the first
        # slot must not fire, an unscoped one does
        t = Transition(("remn", "abst"), ("remn", "avlb"), ("", "", ""), ("", "", ""))
        unscoped = Condition("veto", ("remn", "*"), ("remn", "*"))
        scoped = Condition(
            "veto",
            ("remn", "*"),
            ("remn", "*"),
            scope=Scope((0,), (0,), (0,)),
        )
        assert unscoped.matches(t)
        assert not scoped.matches(t)


class TestCondOperator:
    def test_states_and_interface_are_kept(self):
        user = examples.user_role()
        vetoed = cond(user, [Condition("no_requests", ("remn",), ("try",))])
        assert vetoed.states == user.states
        assert vetoed.inputs == user.inputs
        assert vetoed.acceptance == user.acceptance
        assert len(vetoed.transitions) == 3

    def test_strict_variant_prunes_disconnected_states(self):
        user = examples.user_role()
        vetoed = cond_strict(user, [Condition("no_requests", ("remn",), ("try",))])
        assert vetoed.states == frozenset({("remn",)})
        assert vetoed.transitions == frozenset()

    def test_unreachable_sources_are_dropped_even_unmatched(self):
        user = examples.user_role()
        strict = cond(user, [Condition("no_entry", ("try",), ("crit",))])
        # crit/exit become unreachable but their outgoing moves had
        # reachable sources at restriction time, so they stay
        assert len(strict.transitions) == 3
        again = cond(strict, [])
        # re-restricting re-evaluates reachability over the survivors
        assert len(again.transitions) == 1

    def test_conditions_join_a_channel_restriction(self, mutex_env):
        r = mutex_env.networks["closed_mutex"].restricted
        stop_fin = Condition("hold", ("crit", "*"), ("exit", "*"))
        truncated = cond(r, [stop_fin])
        assert len(truncated.graph.configs) == 5
        assert truncated.graph.edge_count == 4
        assert truncated.conditions[-1] is stop_fin


class TestAdministrator:
    def test_uncoordinated_product_shape(self, raw_admin_product):
        assert len(raw_admin_product.states) == 12
        assert len(raw_admin_product.transitions) == 24

    def test_coordination_removes_four_moves(self, admin, raw_admin_product):
        assert len(admin.transitions) == 20
        assert admin.states == raw_admin_product.states

    def test_token_possession_governs_service(self, admin):
        reach = reachable_states(admin)
        assert len(reach) == 11
        assert ("crit", "abst") not in reach
        assert reach == frozenset(examples.ADMIN_LIVE_STATES)

    def test_coordinated_administrator_is_quasi_deterministic(self, admin):
        verdict = is_quasi_deterministic(admin)
        assert verdict.ok and verdict.witness is None

    def test_uncoordinated_product_is_not_quasi_deterministic(self, raw_admin_product):
        verdict = is_quasi_deterministic(raw_admin_product)
        assert not verdict.ok
        _state, label, clashing = verdict.witness
        assert is_silent(label)
        assert len(clashing) >= 2

    def test_every_live_state_reaches_the_live_cycle(self, admin):
        verdict = is_consistent_cond(admin)
        assert verdict.ok
        assert {a for a in verdict.anchors} == frozenset(examples.ADMIN_LIVE_STATES)

    def test_administrator_is_not_fully_deterministic(self, admin):
        # spontaneous moves remain; quasi-determinism is the weaker notion
        c = classify(admin)
        assert c.has_spontaneous and not c.is_deterministic


class TestUnaffectedness:
    def test_token_rules_leave_the_granter_image_alone(self, admin_env, raw_admin_product):
        conditions = admin_env.networks["administrator"].compiled.conditions
        assert is_unaffected(raw_admin_product, conditions, server_factor_projection())

    def test_gagging_the_granter_is_visible_in_its_image(self, raw_admin_product):
        gag = Condition("no_service", ("remn", "*"), ("try", "*"))
        assert not is_unaffected(raw_admin_product, [gag], server_factor_projection())


class TestConsistencyOverPlainGraphs:
    def test_dead_end_is_reported(self):
        user = examples.user_role()
        vetoed = cond(user, [Condition("no_exit", ("crit",), ("exit",))])
        verdict = is_consistent_cond(vetoed)
        assert not verdict.ok
        assert verdict.witness == ("crit",)

    def test_untouched_cycle_is_consistent(self):
        verdict = is_consistent_cond(examples.user_role())
        assert verdict.ok
        assert len(verdict.anchors) == 4
