"""Network specs: aliasing, wiring forms, compilation errors, and the
token-ring family built from them."""
from __future__ import annotations

import pytest

from fioa import (
    Acceptance,
    Channel,
    ChannelSpec,
    ConditionSpec,
    FactorRef,
    NetworkSpec,
    PatternSpec,
    WiringError,
    build_network,
    compile_network,
    examples,
    is_well_formed,
    reachable_states,
)
from fioa.dsl import WorkbenchDocument, resolve


def mutex_spec(**kwargs) -> NetworkSpec:
    return NetworkSpec(
        name="pair",
        factors=(
            FactorRef("u", examples.user_role()),
            FactorRef("c", examples.server_role()),
        ),
        **kwargs,
    )


class TestCompile:
    def test_aliases_become_factor_names(self):
        compiled = compile_network(mutex_spec())
        assert [f.name for f in compiled.factors] == ["u", "c"]

    def test_duplicate_alias_is_rejected(self):
        spec = NetworkSpec(
            name="dup",
            factors=(
                FactorRef("u", examples.user_role()),
                FactorRef("u", examples.server_role()),
            ),
        )
        with pytest.raises(WiringError, match="used twice"):
            compile_network(spec)

    def test_unknown_factor_in_channel_is_rejected(self):
        spec = mutex_spec(channels=(ChannelSpec("ghost", "svc", "c", "svc"),))
        with pytest.raises(WiringError, match="unknown factor"):
            compile_network(spec)

    def test_unknown_component_name_is_rejected(self):
        spec = mutex_spec(channels=(ChannelSpec("u", "mail", "c", "svc"),))
        with pytest.raises(WiringError, match="no component named"):
            compile_network(spec)

    def test_component_index_out_of_range_is_rejected(self):
        spec = mutex_spec(channels=(ChannelSpec("u", 5, "c", "svc"),))
        with pytest.raises(WiringError, match="out of range"):
            compile_network(spec)

    def test_name_and_index_channel_forms_agree(self):
        by_name = compile_network(
            mutex_spec(channels=(ChannelSpec("u", "svc", "c", "svc"),))
        )
        by_index = compile_network(
            mutex_spec(channels=(ChannelSpec("u", 0, "c", 0),))
        )
        assert by_name.channels == by_index.channels == (Channel(0, 1),)

    def test_ambiguous_component_name_needs_an_index(self):
        relay = examples.build("mitm").networks["relay"]
        spec = NetworkSpec(
            name="wrap",
            factors=(
                FactorRef("u", examples.user_role()),
                FactorRef("m", relay.automaton),
            ),
            channels=(ChannelSpec("u", "svc", "m", "svc"),),
        )
        with pytest.raises(WiringError, match="ambiguous"):
            compile_network(spec)

    def test_initial_override_is_applied(self):
        spec = NetworkSpec(
            name="late",
            factors=(FactorRef("u", examples.user_role(), initial=("crit",)),),
        )
        compiled = compile_network(spec)
        assert compiled.factors[0].initial == ("crit",)

    def test_initial_override_must_name_a_state(self):
        spec = NetworkSpec(
            name="late",
            factors=(FactorRef("u", examples.user_role(), initial=("nowhere",)),),
        )
        with pytest.raises(WiringError):
            compile_network(spec)

    def test_condition_arity_must_match_scoped_width(self):
        spec = mutex_spec(
            conditions=(ConditionSpec("veto", ("*", "*", "*"), ("*", "*", "*")),)
        )
        with pytest.raises(WiringError, match="arity"):
            compile_network(spec)

    def test_scoped_condition_patterns_follow_the_on_listing(self):
        spec = mutex_spec(
            conditions=(
                ConditionSpec("veto", ("crit",), ("exit",), on=("c",)),
            )
        )
        compiled = compile_network(spec)
        (c,) = compiled.conditions
        assert c.source == ("*", "crit")
        assert c.target == ("*", "exit")
        assert c.scope.state_components == (1,)

    def test_channel_label_is_factor_qualified(self):
        compiled = compile_network(
            mutex_spec(channels=(ChannelSpec("u", "svc", "c", "svc"),))
        )
        assert compiled.channel_label(Channel(0, 1)) == "u.svc>c.svc"

    def test_literal_pattern_compiles_to_flat_component(self):
        spec = mutex_spec(
            conditions=(
                ConditionSpec(
                    "veto",
                    ("*", "*"),
                    ("*", "*"),
                    output=PatternSpec.literal("c", "svc", "cf_fin"),
                ),
            )
        )
        (c,) = compile_network(spec).conditions
        assert c.output.kind == "literal"
        assert c.output.component == 1  # granter's flat output slot
        assert c.output.character == "cf_fin"


class TestBuild:
    def test_channel_networks_come_with_a_config_graph(self, mutex_env):
        built = mutex_env.networks["closed_mutex"]
        assert built.restricted is not None
        assert built.automaton is built.restricted.base

    def test_channel_free_networks_are_eager(self, admin_env):
        built = admin_env.networks["administrator"]
        assert built.restricted is None
        assert len(built.automaton.states) == 12

    def test_acceptance_override_lands_on_the_result(self, mutex_env):
        built = mutex_env.networks["closed_mutex"]
        assert built.automaton.acceptance == Acceptance.muller(
            [frozenset(examples.MUTEX_CYCLE)]
        )

    def test_lazy_exploration_only_materializes_reachable_states(self, ring2_env):
        built = ring2_env.networks["ring2"]
        # raw product state count is astronomically larger
        assert len(built.automaton.states) < 200
        assert built.automaton.states == frozenset(
            c.state for c in built.restricted.graph.configs
        )


class TestTokenRings:
    def test_two_cell_ring_size_is_frozen(self, ring2_env):
        r = ring2_env.networks["ring2"].restricted
        assert len(r.graph.configs) == 170
        assert r.graph.edge_count == 232
        assert is_well_formed(r).ok

    def test_three_cell_ring_size_is_frozen(self, ring3_env):
        r = ring3_env.networks["ring3"].restricted
        assert len(r.graph.configs) == 909
        assert r.graph.edge_count == 1332
        assert is_well_formed(r).ok

    def test_exactly_one_token_alive_everywhere(self, ring2_env, ring3_env):
        for env, name, ring_slots in (
            (ring2_env, "ring2", (1, 3)),
            (ring3_env, "ring3", (1, 3, 5)),
        ):
            r = env.networks[name].restricted
            for cfg in r.graph.configs:
                held = sum(1 for i in ring_slots if cfg.state[i] != "abst")
                in_flight = 1 if cfg.pending and cfg.pending[1] == "token" else 0
                assert held + in_flight == 1, (name, cfg)

    def test_mutual_exclusion_holds_for_clients(self, ring2_env, ring3_env):
        for env, name, user_slots in (
            (ring2_env, "ring2", (6, 7)),
            (ring3_env, "ring3", (9, 10, 11)),
        ):
            r = env.networks[name].restricted
            for cfg in r.graph.configs:
                in_crit = sum(1 for i in user_slots if cfg.state[i] == "crit")
                assert in_crit <= 1, (name, cfg)


@pytest.fixture(scope="module")
def lax_ring():
    doc = WorkbenchDocument(
        automata=(
            examples.user_role(),
            examples.server_role(),
            examples.ring_role(),
            examples.timer_role(),
        ),
        networks=(
            examples.lax_administrator_def(),
            examples.ring_def(2, name="lax_ring", admin_ref="lax_administrator"),
        ),
        directives=(),
    )
    return resolve(doc).networks["lax_ring"].restricted


class TestLaxRingControl:
    """Dropping the token-possession rules really breaks exclusion."""

    def test_lax_ring_grows_extra_configurations(self, lax_ring):
        assert len(lax_ring.graph.configs) == 264
        assert lax_ring.graph.edge_count == 376

    def test_two_clients_can_sit_in_crit_at_once(self, lax_ring):
        offenders = [
            c
            for c in lax_ring.graph.configs
            if c.state[6] == "crit" and c.state[7] == "crit"
        ]
        assert len(offenders) == 6
