"""Scenario document parsing and the exact-decimal time syntax."""

import json
from fractions import Fraction as F
from pathlib import Path

import pytest

import bwpsim as b
from bwpsim.scenario import ParseError, load_scenario, scenario_from_obj
from support import adaptation_scenario

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def adaptation_doc():
    return json.loads((FIXTURES / "adaptation_fdd_scenario.json").read_text())


def test_fixture_runs_identically_to_in_code_scenario():
    # opaque link_params differ, behavior must not
    from_file = load_scenario(FIXTURES / "adaptation_fdd_scenario.json")
    t1, m1 = b.run(from_file)
    t2, m2 = b.run(adaptation_scenario())
    assert [r.to_json() for r in t1] == [r.to_json() for r in t2]
    assert m1 == m2


def test_parsed_fields_match_document():
    scn = load_scenario(FIXTURES / "adaptation_fdd_scenario.json")
    cfg = scn.cells["pcell"]
    assert cfg.duplex is b.Duplex.FDD
    assert cfg.dl_bwp(1).geometry.n_rbs == 270
    assert cfg.dl_bwp(0).dedicated is None
    assert cfg.ul_bwp(1).dedicated.uplink_waveform is b.UplinkWaveform.CP_OFDM
    assert cfg.ul_bwp(2).dedicated.uplink_waveform is b.UplinkWaveform.DFT_S_OFDM
    assert cfg.dl_bwp(1).common.link_params == {"pdcch": "wideband"}
    assert scn.capability.max_rrc_bwps == 4
    assert scn.horizon_ms == F(80)
    assert scn.events[0].kind is b.EventKind.RRC_RECONFIG
    assert scn.events[1].dci == b.DciEvent(b.DciFormat.FMT_1_1, "01")


def test_version_is_checked():
    doc = adaptation_doc()
    doc["version"] = "bwpsim/99"
    with pytest.raises(ParseError):
        scenario_from_obj(doc)


def test_missing_required_field():
    doc = adaptation_doc()
    del doc["cells"][0]["point_a_hz"]
    with pytest.raises(ParseError):
        scenario_from_obj(doc)


def test_bad_enum_value():
    doc = adaptation_doc()
    doc["cells"][0]["duplex"] = "XDD"
    with pytest.raises(ParseError):
        scenario_from_obj(doc)


def test_bad_indicator_bits():
    doc = adaptation_doc()
    doc["events"][1]["bwp_indicator_bits"] = "012"
    with pytest.raises(ParseError):
        scenario_from_obj(doc)


def test_fallback_with_indicator_bits_rejected():
    doc = adaptation_doc()
    doc["events"][1]["format"] = "1_0"
    with pytest.raises(ParseError):
        scenario_from_obj(doc)


def test_duplicate_cell_id():
    doc = adaptation_doc()
    doc["cells"].append(doc["cells"][0])
    with pytest.raises(ParseError):
        scenario_from_obj(doc)


def test_unknown_event_kind():
    doc = adaptation_doc()
    doc["events"][0]["kind"] = "Handover"
    with pytest.raises(ParseError):
        scenario_from_obj(doc)


def test_horizon_optional_for_validation_but_not_run():
    doc = adaptation_doc()
    del doc["horizon_ms"]
    scn = scenario_from_obj(doc)
    assert scn.horizon_ms is None
    assert not b.validate(scn.cells["pcell"], scn.capability).has_errors
    with pytest.raises(b.ScenarioInvalid):
        b.run(scn)


def test_unreadable_and_unparsable_files(tmp_path):
    with pytest.raises(ParseError):
        load_scenario(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": "bwpsim/1", ')
    with pytest.raises(ParseError):
        load_scenario(bad)


class TestTimeSyntax:
    @pytest.mark.parametrize(
        "text,value",
        [("2.25", F(9, 4)), ("0.5", F(1, 2)), ("3", F(3)), ("0", F(0)), ("12.125", F(97, 8))],
    )
    def test_parse_and_format_round_trip(self, text, value):
        assert b.parse_ms(text) == value
        assert b.ms_str(value) == text

    def test_float_means_its_decimal_literal(self):
        assert b.parse_ms(0.3) == F(3, 10)
        assert b.parse_ms(0.5) == F(1, 2)

    def test_non_decimal_fraction_has_no_string(self):
        with pytest.raises(ValueError):
            b.ms_str(F(1, 3))

    def test_booleans_are_not_times(self):
        with pytest.raises(ValueError):
            b.parse_ms(True)
