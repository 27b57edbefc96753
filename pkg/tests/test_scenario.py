import json
import math

import pytest

from attacklab.errors import ValidationError
from attacklab.scenario import BUILTIN, builtin, load_scenario, save_scenario, scenario_from_dict


def minimal(**over):
    d = {"version": "v1", "seed": 3, "victim": {"start": [0, 0], "goal": [10, 0]}, "trap": {"center": [5, -2]}}
    d.update(over)
    return d


@pytest.mark.parametrize("name", sorted(BUILTIN))
def test_builtins_round_trip(name, tmp_path):
    sc = builtin(name)
    p = save_scenario(sc, tmp_path / "s.json")
    assert load_scenario(p).to_json() == sc.to_json()
    assert load_scenario(name).to_json() == sc.to_json()


def test_two_element_start_faces_goal():
    sc = scenario_from_dict(minimal(victim={"start": [0, 0], "goal": [0, 5]}))
    assert sc.victim.start.theta == pytest.approx(math.pi / 2)
    assert sc.victim.controller == "dwa" and sc.capture_radius == 0.3


def test_errors_carry_field_paths():
    d = minimal()
    d["victim"]["T"] = -0.1
    d["attacker"] = {"kappa": 0.5}
    d["attack"] = {"no_such_knob": 1}
    del d["seed"]
    with pytest.raises(ValidationError) as e:
        scenario_from_dict(d)
    msgs = e.value.errors
    assert any(m.startswith("victim.T:") for m in msgs)
    assert any(m.startswith("attacker.kappa:") for m in msgs)
    assert any(m.startswith("attack.no_such_knob:") for m in msgs)
    assert any(m.startswith("seed:") for m in msgs)


def test_holonomic_dwa_is_rejected():
    d = minimal(victim={"start": [0, 0], "goal": [1, 0], "kind": "holonomic", "controller": "dwa"})
    with pytest.raises(ValidationError, match="victim.controller"):
        scenario_from_dict(d)


def test_malformed_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"seed": 1,\n  "victim": }')
    with pytest.raises(ValidationError, match=r"bad.json:2:\d+"):
        load_scenario(p)


def test_unknown_builtin():
    with pytest.raises(ValidationError):
        builtin("nope")


def test_to_dict_is_valid_input():
    sc = builtin("diagonal")
    assert scenario_from_dict(json.loads(sc.to_json())).to_dict() == sc.to_dict()
