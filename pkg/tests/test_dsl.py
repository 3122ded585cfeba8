"""Workbench text format: parsing, canonical serialization, resolution,
and the shipped corpus staying in sync with its builders."""
from __future__ import annotations

from pathlib import Path

import pytest

from fioa import (
    Acceptance,
    DslError,
    examples,
    parse,
    resolve,
    serialize,
)
from fioa.dsl import Directive, NetFactor, NetworkDef, WorkbenchDocument, load

CORPUS = Path(__file__).resolve().parent.parent / "src" / "fioa" / "corpus"

MINIMAL = """
automaton Blinker {
  states dark, lit;
  initial dark;
  inputs btn: {push};
  outputs lamp: {glow};
  accept muller {{dark, lit}};
  trans dark -> lit on btn.push / lamp.glow;
  trans lit -> dark on - / -;
}
"""


class TestParsing:
    def test_minimal_automaton_parses(self):
        doc = parse(MINIMAL)
        (a,) = doc.automata
        assert a.name == "Blinker"
        assert a.states == frozenset({("dark",), ("lit",)})
        assert len(a.transitions) == 2
        assert a.acceptance == Acceptance.muller([[("dark",), ("lit",)]])

    def test_comments_and_whitespace_are_ignored(self):
        commented = MINIMAL.replace(
            "states dark, lit;", "states dark, lit;  # the two phases\n"
        )
        assert parse(commented) == parse(MINIMAL)

    def test_errors_carry_line_and_column(self):
        bad = MINIMAL.replace("initial dark;", "initial dark")
        with pytest.raises(DslError) as err:
            parse(bad)
        assert err.value.line is not None
        assert f"line {err.value.line}" in str(err.value)

    def test_unknown_top_level_word_is_rejected(self):
        with pytest.raises(DslError, match="expected 'automaton'"):
            parse("blueprint X {}")

    def test_reserved_words_cannot_name_machines(self):
        with pytest.raises(DslError, match="reserved"):
            parse(MINIMAL.replace("Blinker", "network"))

    def test_duplicate_names_are_rejected(self):
        with pytest.raises(DslError, match="declared twice"):
            parse(MINIMAL + MINIMAL)

    def test_accept_section_is_mandatory(self):
        bad = MINIMAL.replace("accept muller {{dark, lit}};", "")
        with pytest.raises(DslError, match="no 'accept' section"):
            parse(bad)

    def test_transitions_must_name_declared_states(self):
        bad = MINIMAL.replace("trans lit -> dark", "trans lit -> dusk")
        with pytest.raises(DslError, match="undeclared state 'dusk'"):
            parse(bad)

    def test_labels_must_name_declared_characters(self):
        bad = MINIMAL.replace("btn.push /", "btn.shove /")
        with pytest.raises(DslError, match="character 'shove'"):
            parse(bad)

    def test_labels_must_name_declared_components(self):
        bad = MINIMAL.replace("btn.push /", "dial.push /")
        with pytest.raises(DslError, match="unknown input component"):
            parse(bad)

    def test_acceptance_must_name_declared_states(self):
        bad = MINIMAL.replace("{{dark, lit}}", "{{dark, dawn}}")
        with pytest.raises(DslError, match="acceptance names undeclared"):
            parse(bad)

    def test_unknown_check_kind_is_rejected(self):
        with pytest.raises(DslError, match="unknown check kind"):
            parse(MINIMAL + "check sparkling Blinker;")

    def test_known_check_kinds_parse_into_directives(self):
        doc = parse(MINIMAL + "check wellformed Blinker;\ncheck valid Blinker;")
        assert doc.directives == (
            Directive("wellformed", "Blinker"),
            Directive("valid", "Blinker"),
        )


class TestNetworkBlocks:
    WIRED = MINIMAL + """
network Loop {
  use b1 = Blinker;
  use b2 = Blinker init lit;
  channel b1.lamp -> b2.btn;
}
"""

    def test_factors_channels_and_overrides_parse(self):
        doc = parse(self.WIRED)
        (net,) = doc.networks
        assert net.factors == (
            NetFactor("b1", "Blinker", None),
            NetFactor("b2", "Blinker", ("lit",)),
        )
        assert len(net.channels) == 1

    def test_channel_alphabets_are_still_checked_at_build(self):
        with pytest.raises(Exception, match="not readable"):
            resolve(parse(self.WIRED))

    def test_factor_references_resolve_in_declaration_order(self):
        with pytest.raises(DslError, match="not declared before it"):
            resolve(
                WorkbenchDocument(
                    automata=(),
                    networks=(NetworkDef("ghost_net", (NetFactor("g", "Ghost"),), (), (), None),),
                    directives=(),
                )
            )

    def test_networks_can_be_factors_of_later_networks(self, mitm_env):
        # the relay network is consumed as a machine by the wrapper
        assert "relay" in mitm_env.networks
        assert "mitm_relayed" in mitm_env.networks
        relay = mitm_env.networks["relay"].automaton
        assert relay.state_width == 2


class TestSerialization:
    def test_round_trip_text_to_document(self):
        doc = parse(MINIMAL)
        assert parse(serialize(doc)) == doc

    def test_serialization_is_canonical(self):
        doc = parse(MINIMAL)
        assert serialize(parse(serialize(doc))) == serialize(doc)

    def test_composite_state_machines_have_no_text_form(self, admin_env):
        admin = admin_env.networks["administrator"].automaton
        doc = WorkbenchDocument(automata=(admin,), networks=(), directives=())
        with pytest.raises(DslError, match="composite states"):
            serialize(doc)


class TestCorpus:
    @pytest.mark.parametrize("name", sorted(examples.names()))
    def test_builder_documents_round_trip(self, name):
        doc = examples.document(name)
        text = examples.text(name)
        assert parse(text) == doc
        assert serialize(parse(text)) == text

    @pytest.mark.parametrize("name", sorted(examples.names()))
    def test_shipped_files_match_their_builders(self, name):
        on_disk = (CORPUS / f"{name}.pw").read_text(encoding="utf-8")
        assert on_disk == examples.text(name), (
            f"corpus/{name}.pw is stale; regenerate with scripts/regen_corpus.py"
        )

    def test_corpus_directory_has_no_strays(self):
        assert {p.stem for p in CORPUS.glob("*.pw")} == set(examples.names())

    @pytest.mark.parametrize("name", sorted(examples.names()))
    def test_every_corpus_file_loads_and_resolves(self, name):
        env = resolve(load(str(CORPUS / f"{name}.pw")))
        assert env.automata

    def test_unknown_example_name_is_a_key_error(self):
        with pytest.raises(KeyError, match="mutex"):
            examples.document("does_not_exist")
