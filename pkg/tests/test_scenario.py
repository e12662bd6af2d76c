import json
import math
import os
from pathlib import Path

import pytest

from abclab import (
    ScenarioParseError,
    ValidationError,
    load_scenario,
    parse_scenario,
    render_csv,
    render_json,
    run_scenario,
    run_verify_suite,
)
from abclab.cli import main as cli_main
from abclab.scenario import emit

DATA_DIR = Path(__file__).parent / "data"
SCENARIO_DIR = Path(__file__).parent.parent / "scenarios"

AB_UNIT_DOC = """
kind: ab-solenoid
units: scaled-unity
params:
  solenoid: {r_cm: 1.0, L_cm: 1.0, M_g: 1.0, Q_statC: 1.0, v_cm_per_s: 1.0}
  orbit: {R_cm: 2.0, u_cm_per_s: 1.0}
"""


def test_parse_minimal_applies_defaults():
    s = parse_scenario(AB_UNIT_DOC)
    assert s.kind == "ab-solenoid"
    assert s.units == "scaled-unity"
    assert s.params["visibility"] == 1.0
    assert s.sweep is None
    assert s.output.format == "csv" and s.output.path is None


def test_parse_missing_mass_names_field():
    doc = AB_UNIT_DOC.replace("M_g: 1.0, ", "")
    with pytest.raises(ValidationError, match="M_g"):
        parse_scenario(doc)


def test_parse_attaches_long_solenoid_warning():
    doc = AB_UNIT_DOC.replace("r_cm: 1.0, L_cm: 1.0", "r_cm: 1.0, L_cm: 2.0")
    s = parse_scenario(doc)
    assert len(s.warnings) == 1 and "r/L" in s.warnings[0]


def test_parse_malformed_yaml_reports_location():
    with pytest.raises(ScenarioParseError, match="line"):
        parse_scenario("kind: [unclosed")


def test_parse_rejects_unknown_fields():
    with pytest.raises(ValidationError, match="unknown field"):
        parse_scenario(AB_UNIT_DOC + "\nextra: 1\n")
    with pytest.raises(ValidationError, match="unknown field"):
        parse_scenario(AB_UNIT_DOC.replace("visibility", "").replace(
            "orbit: {R_cm: 2.0, u_cm_per_s: 1.0}", "orbit: {R_cm: 2.0, u_cm_per_s: 1.0, tilt: 3}"
        ))


def test_parse_rejects_non_numeric():
    with pytest.raises(ValidationError, match="must be a number"):
        parse_scenario(AB_UNIT_DOC.replace("M_g: 1.0", "M_g: heavy"))


def test_parse_orbit_must_clear_solenoid():
    with pytest.raises(ValidationError, match="R_cm"):
        parse_scenario(AB_UNIT_DOC.replace("R_cm: 2.0", "R_cm: 0.5"))


def test_parse_sweep_validation():
    base = AB_UNIT_DOC + "sweep: {param: solenoid.v_cm_per_s, from: 0.1, to: 1.0, steps: 2}\n"
    assert parse_scenario(base).sweep.steps == 2
    with pytest.raises(ValidationError, match="steps"):
        parse_scenario(base.replace("steps: 2", "steps: 1"))
    with pytest.raises(ValidationError, match="does not exist"):
        parse_scenario(base.replace("solenoid.v_cm_per_s", "solenoid.w_cm_per_s"))
    with pytest.raises(ValidationError, match="log"):
        parse_scenario(base.replace("steps: 2", "steps: 3, scale: log").replace("from: 0.1", "from: -0.1"))


def test_run_ab_solenoid_unit_row():
    report = run_scenario(parse_scenario(AB_UNIT_DOC))
    row = report.rows[0]
    four_pi = 4.0 * math.pi
    assert row["flux"] == pytest.approx(four_pi, rel=1e-15)
    assert row["phase_ab_rad"] == pytest.approx(four_pi, rel=1e-15)
    assert row["phase_local_rad"] == pytest.approx(four_pi, rel=1e-14)
    assert row["p_a"] == pytest.approx(1.0, abs=1e-12)
    assert row["identity_residual"] < 1e-12
    assert {c.name: c.passed for c in report.checks} == {
        "factor4_identity": True,
        "flux_chain_consistency": True,
    }


def test_sweep_crossing_pi_routes_to_b():
    doc = AB_UNIT_DOC + "sweep: {param: solenoid.v_cm_per_s, from: 0.05, to: 0.45, steps: 9}\n"
    report = run_scenario(parse_scenario(doc))
    assert [row["sweep_index"] for row in report.rows] == list(range(9))
    at_pi = report.rows[4]  # v = 0.25 makes the flux phase pi
    assert at_pi["p_b"] == pytest.approx(1.0, abs=1e-12)
    assert report.columns[1] == "solenoid.v_cm_per_s"


def test_sweep_point_failure_isolated():
    # sweeping the orbit radius below the solenoid radius fails those points only
    doc = AB_UNIT_DOC + "sweep: {param: orbit.R_cm, from: 0.5, to: 2.0, steps: 4}\n"
    report = run_scenario(parse_scenario(doc))
    errors = [bool(row.get("error")) for row in report.rows]
    assert errors == [True, True, False, False]
    assert "error" in report.columns
    good = report.rows[2]
    assert good["identity_residual"] < 1e-12


def test_mzi_path_shift_run():
    doc = """
kind: mzi
units: scaled-unity
params:
  path_shift: {delta_l_cm: 0.5, wavelength_cm: 1.0}
"""
    report = run_scenario(parse_scenario(doc))
    assert report.rows[0]["p_b"] == pytest.approx(1.0, abs=1e-12)
    names = [c.name for c in report.checks]
    assert "routes_to_B_at_pi_phase" in names


def test_mzi_requires_exactly_one_phase_spec():
    with pytest.raises(ValidationError):
        parse_scenario(
            """
kind: mzi
params:
  phase_rad: 1.0
  path_shift: {delta_l_cm: 0.5, wavelength_cm: 1.0}
"""
        )


def test_ac_bounce_runs_both_laws():
    doc = """
kind: ac-bounce
units: scaled-unity
params:
  line: {lambda_statC_per_cm: 0.05}
  neutron: {mass_g: 1.0, mu_z_erg_per_G: 1.0}
  start: {x_cm: 3.0, y_cm: 0.5, vx_cm_per_s: -2.0}
  mirrors: {a_cm: 1.5, b_cm: 3.0}
  n_bounces: 3
  dt_s: 0.00390625
"""
    report = run_scenario(parse_scenario(doc))
    outcome = {c.name: c.passed for c in report.checks}
    assert outcome == {
        "energy_conserved_full_law": True,
        "energy_grows_naive_law": True,
        "work_integral_match": True,
    }
    laws = {row["law"] for row in report.rows}
    assert laws == {"full", "naive-boyer"}


def test_ac_phase_radius_independence_checks():
    doc = """
kind: ac-phase
units: scaled-unity
params:
  line: {lambda_statC_per_cm: 1.0}
  mu_z_erg_per_G: 1.0
  loop: {kind: circle, radius_cm: 0.8}
  second_radius_cm: 2.5
"""
    report = run_scenario(parse_scenario(doc))
    outcome = {c.name: c.passed for c in report.checks}
    assert outcome == {"ac_phase_loop_value": True, "ac_phase_radius_independent": True}
    assert report.rows[0]["phase_rad"] == pytest.approx(4.0 * math.pi, rel=1e-9)


def test_field_free_scenario_checks():
    doc = """
kind: field-free
units: scaled-unity
params: {d_cm: 1.0, e_statC: 1.0}
"""
    report = run_scenario(parse_scenario(doc))
    outcome = {c.name: c.passed for c in report.checks}
    assert outcome == {
        "field_free_three_charge": True,
        "potential_at_electron": True,
        "field_free_zero_phase_claim": True,
    }
    assert len(report.rows) == 3
    assert report.rows[0]["potential_statV"] == pytest.approx(8.0, rel=1e-14)


def test_emit_csv_structure_and_determinism(tmp_path):
    report = run_scenario(parse_scenario(AB_UNIT_DOC))
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    emit(report, "csv", str(first))
    emit(report, "csv", str(second))
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text().split("\n")
    assert lines[0].startswith("sweep_index,flux,phase_ab_rad")
    assert len([line for line in lines if line]) == 2  # header + one row
    assert "\r" not in first.read_text()


def test_emit_json_round_trip(tmp_path):
    report = run_scenario(parse_scenario(AB_UNIT_DOC))
    path = tmp_path / "report.json"
    emit(report, "json", str(path))
    loaded = json.loads(path.read_text())
    assert loaded == report.to_dict()
    assert loaded["schema_version"] == 1
    assert loaded["scenario"]["params"]["solenoid"]["r_cm"] == 1.0


def test_emit_rejects_unknown_format():
    report = run_scenario(parse_scenario(AB_UNIT_DOC))
    with pytest.raises(ValidationError):
        emit(report, "xml", None)


def test_golden_csv_matches_stored_file(tmp_path):
    scenario = load_scenario(str(SCENARIO_DIR / "ab_solenoid_unit.yaml"))
    report = run_scenario(scenario)
    produced = render_csv(report)
    assert produced.encode() == (DATA_DIR / "golden_ab_solenoid.csv").read_bytes()


def test_verify_suite_deterministic_and_green():
    first = run_verify_suite(seed=42)
    second = run_verify_suite(seed=42)
    assert render_json(first) == render_json(second)
    assert render_csv(first) == render_csv(second)
    assert first.all_passed
    names = [c.name for c in first.checks]
    assert "factor4_identity" in names and "newtons_third_law" in names


def test_verify_csv_uses_check_table():
    report = run_verify_suite(seed=1)
    lines = render_csv(report).split("\n")
    assert lines[0] == "name,expected,actual,tol,pass"


def test_cli_run_exit_codes(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code = cli_main(["run", str(SCENARIO_DIR / "ab_solenoid_unit.yaml"), "--output", str(out)])
    assert code == 0
    assert out.exists()
    captured = capsys.readouterr()
    assert "PASS factor4_identity" in captured.out


def test_cli_rejects_run_with_sweep_block():
    assert cli_main(["run", str(SCENARIO_DIR / "ab_solenoid_sweep.yaml")]) == 2


def test_cli_sweep_requires_sweep_block():
    assert cli_main(["sweep", str(SCENARIO_DIR / "ab_solenoid_unit.yaml")]) == 2


def test_cli_sweep_runs(tmp_path):
    out = tmp_path / "sweep.csv"
    code = cli_main(["sweep", str(SCENARIO_DIR / "ab_solenoid_sweep.yaml"), "--output", str(out)])
    assert code == 0
    assert len(out.read_text().splitlines()) == 10  # header + 9 points


def test_cli_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("kind: [unclosed")
    assert cli_main(["run", str(bad)]) == 2


def test_cli_verify_deterministic(tmp_path):
    first = tmp_path / "v1.json"
    second = tmp_path / "v2.json"
    assert cli_main(["verify", "--seed", "42", "--output", str(first)]) == 0
    assert cli_main(["verify", "--seed", "42", "--output", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_sweep_worker_env_var_keeps_order(tmp_path):
    doc = AB_UNIT_DOC + "sweep: {param: solenoid.v_cm_per_s, from: 0.1, to: 1.0, steps: 8}\n"
    scenario = parse_scenario(doc)
    sequential = run_scenario(scenario)
    os.environ["ABCLAB_MAX_WORKERS"] = "4"
    try:
        threaded = run_scenario(scenario)
    finally:
        del os.environ["ABCLAB_MAX_WORKERS"]
    assert render_csv(sequential) == render_csv(threaded)


def test_shipped_scenarios_all_pass():
    for name in (
        "mzi_half_wavelength.yaml",
        "ac_phase_circle.yaml",
        "field_free_triple.yaml",
    ):
        report = run_scenario(load_scenario(str(SCENARIO_DIR / name)))
        assert report.all_passed, name
