"""Scenario resolution, validation and positioned diagnostics."""

import json
import pathlib

import pytest

from obkit.scenario import ScenarioError, load_scenario, parse_scenario

SCENARIOS = pathlib.Path(__file__).resolve().parent.parent / "scenarios"


def fixture_text(name):
    return (SCENARIOS / name).read_text(encoding="utf-8")


def diag_codes(err):
    return {d.code for d in err.value.diagnostics}


def test_shipped_fixtures_parse():
    for name in ("paper_f2.json", "paper_z2.json", "paper_z6.json"):
        scenario = parse_scenario(fixture_text(name))
        assert scenario.paper is not None
        assert "kernel-of-first-invariant" in scenario.assertions
        assert scenario.lenses["g"].main.terms


def test_fixture_round_trip_determinism():
    # re-serializing the parsed JSON and re-parsing yields the same objects
    text = fixture_text("paper_f2.json")
    data = json.loads(text)
    again = parse_scenario(json.dumps(data))
    first = parse_scenario(text)
    assert again.spec == first.spec
    assert again.elements["sigma"] == first.elements["sigma"]


def test_empty_input():
    with pytest.raises(ScenarioError) as err:
        parse_scenario("")
    assert any(d.code == "E210" and "no group declared" in d.message
               for d in err.value.diagnostics)


def test_missing_group():
    with pytest.raises(ScenarioError) as err:
        parse_scenario('{"name": "x"}')
    assert "E210" in diag_codes(err)


def test_syntax_error_position():
    with pytest.raises(ScenarioError) as err:
        parse_scenario('{"group": }')
    (diag,) = err.value.diagnostics
    assert diag.code == "E100"
    assert diag.line == 1 and diag.col == 11


def test_unresolved_names():
    data = json.loads(fixture_text("paper_f2.json"))
    data["maps"]["r"]["source"] = "nosuch"
    with pytest.raises(ScenarioError) as err:
        parse_scenario(json.dumps(data))
    assert "E220" in diag_codes(err)
    assert any("nosuch" in d.message for d in err.value.diagnostics)


def test_bad_word_diagnostic():
    data = json.loads(fixture_text("paper_f2.json"))
    data["elements"]["sigma"] = "w*"
    with pytest.raises(ScenarioError) as err:
        parse_scenario(json.dumps(data))
    assert "E230" in diag_codes(err)


def test_invalid_module_rejected():
    data = json.loads(fixture_text("paper_z2.json"))
    data["modules"]["pi2"]["action"]["s"] = [[2, 0, 0], [0, 1, 0], [0, 0, 1]]
    with pytest.raises(ScenarioError) as err:
        parse_scenario(json.dumps(data))
    assert "E240" in diag_codes(err)


def test_invalid_cocycle_rejected_with_quadruple():
    data = json.loads(fixture_text("paper_z2.json"))
    data["cocycles"]["c"]["entries"][0]["value"] = [1, -1, 1]
    with pytest.raises(ScenarioError) as err:
        parse_scenario(json.dumps(data))
    diags = [d for d in err.value.diagnostics if d.code == "E243"]
    assert diags and "violated at" in diags[0].message


def test_profile_violation_is_syntax():
    with pytest.raises(ScenarioError) as err:
        parse_scenario('{"group": {"factors": [{"kind": "free", "names": ["t"]}]}, "x": 1.5}')
    assert "E100" in diag_codes(err)


def test_duplicate_key_diagnostic():
    text = '{"group": {"factors": [{"kind": "free", "names": ["t"]}]}, "name": "a", "name": "b"}'
    with pytest.raises(ScenarioError) as err:
        parse_scenario(text)
    assert "E201" in diag_codes(err)


def test_no_partial_acceptance():
    # two independent defects: both reported
    data = json.loads(fixture_text("paper_f2.json"))
    data["elements"]["sigma"] = "w"
    data["maps"]["r"]["target"] = "nosuch"
    with pytest.raises(ScenarioError) as err:
        parse_scenario(json.dumps(data))
    assert {"E230", "E220"} <= diag_codes(err)


def test_load_scenario(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(fixture_text("paper_f2.json"), encoding="utf-8")
    scenario = load_scenario(path)
    assert scenario.name == "paper-F2"


def test_shipped_modules_validate_and_torsion_mutations_reject():
    from obkit.gmodules import GModule, validate_module
    from obkit.intlinalg import IntMatrix

    for name in ("paper_f2.json", "paper_z2.json", "paper_z6.json"):
        scenario = parse_scenario(fixture_text(name))
        for module in scenario.modules.values():
            assert validate_module(module) is None
            for gen, matrix in module.action.items():
                fi, gi = scenario.spec.locate(gen)
                factor = scenario.spec.factors[fi]
                if factor.kind != "abelian" or gi < factor.free_rank:
                    continue
                order = factor.torsion[gi - factor.free_rank]
                k = module.rank
                for i in range(k):
                    for j in range(k):
                        rows = [list(r) for r in matrix.entries]
                        rows[i][j] += 1
                        bumped = IntMatrix(rows)
                        power = IntMatrix.identity(k)
                        for _ in range(order):
                            power = power @ bumped
                        breaks_torsion = any(
                            module.reduce(power.apply(e)) != module.reduce(e)
                            for e in module._basis()
                        )
                        if not breaks_torsion:
                            continue
                        action = dict(module.action)
                        action[gen] = bumped
                        mutated = GModule(scenario.spec, module.presentation,
                                          action=action)
                        assert validate_module(mutated) is not None
