"""End-to-end tests that drive the command-line interface in process."""
from __future__ import annotations

import csv
import io
import json

import numpy as np
import pytest

from ottomon.asymptotics import (
    asymptotic_work_per_cycle,
    build_cycle_superoperator,
    derive_timed_config,
    spectrum,
    thermal_duration_from_theta,
)
from ottomon.cli import main
from ottomon.engine import EngineConfig, LandauZenerStroke
from ottomon.lattice import joint_via_lattice, work_per_cycle_series
from ottomon.moments import power_output
from ottomon.qubit import landau_zener_params


def run_cli(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text: str) -> tuple[list[str], list[list[str]]]:
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def column(header: list[str], rows: list[list[str]], name: str) -> np.ndarray:
    idx = header.index(name)
    return np.array([float(row[idx]) for row in rows])


def test_pdf_work_csv_is_a_normalized_density(capsys):
    code, out, _ = run_cli(capsys, "pdf", "--cycles", "1", "--points", "4097")
    assert code == 0
    header, rows = parse_csv(out)
    # The accumulated-readout schemes coincide for work, so one column serves
    # both and no rc1 column is emitted.
    assert header == ["value", "density_rm", "density_rc"]
    assert len(rows) == 4097
    grid = column(header, rows, "value")
    for name in ("density_rm", "density_rc"):
        density = column(header, rows, name)
        assert density.min() >= -1e-9
        assert abs(np.trapezoid(density, grid) - 1.0) < 1e-5


def test_pdf_heat_splits_the_single_pointer_column(capsys):
    code, out, _ = run_cli(
        capsys, "pdf", "--observable", "heat", "--cycles", "1", "--points", "4097"
    )
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["value", "density_rm", "density_rc", "density_rc1"]
    grid = column(header, rows, "value")
    rc2 = column(header, rows, "density_rc")
    rc1 = column(header, rows, "density_rc1")
    assert np.abs(rc1 - rc2).max() > 1e-6
    assert abs(np.trapezoid(rc1, grid) - 1.0) < 1e-5
    assert abs(np.trapezoid(rc2, grid) - 1.0) < 1e-5


def test_pdf_json_mirrors_the_component_mixture(capsys):
    code, out, _ = run_cli(capsys, "pdf", "--cycles", "1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["observable"] == "work"
    assert payload["cycles"] == 1
    assert set(payload["schemes"]) == {"rm", "rc1", "rc2"}
    for scheme in payload["schemes"].values():
        # Floats are serialized as shortest round-trip strings.
        assert isinstance(scheme["variance"], str)
        weights = [float(c["weight"]) for c in scheme["components"]]
        centers = [float(c["center"]) for c in scheme["components"]]
        assert abs(sum(weights) - 1.0) < 1e-12
        assert centers == sorted(centers)


def test_pdf_rejects_bad_grids(capsys):
    code, _, err = run_cli(
        capsys, "pdf", "--cycles", "1", "--grid-min", "1", "--grid-max", "0"
    )
    assert code == 2
    assert "error:" in err
    code, _, err = run_cli(capsys, "pdf", "--cycles", "1", "--points", "1")
    assert code == 2
    assert "error:" in err


def test_joint_csv_matches_the_enumeration(capsys):
    code, out, _ = run_cli(capsys, "joint", "--cycles", "1")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["work", "heat", "weight"]
    work = column(header, rows, "work")
    heat = column(header, rows, "heat")
    weight = column(header, rows, "weight")
    assert abs(weight.sum() - 1.0) < 1e-12
    keys = list(zip(work.tolist(), heat.tolist()))
    assert keys == sorted(keys)
    mix = joint_via_lattice(EngineConfig(), "RM", 1)
    expected_mean = float(mix.weights @ mix.centers[:, 0])
    assert abs(float(weight @ work) - expected_mean) < 1e-10
    expected_heat = float(mix.weights @ mix.centers[:, 1])
    assert abs(float(weight @ heat) - expected_heat) < 1e-10


def test_joint_rejects_unsupported_requests(capsys):
    # The file default is a five-cycle run, beyond the exhaustive-pair cap.
    code, _, err = run_cli(capsys, "joint")
    assert code == 2
    assert "at most 2 cycles" in err
    code, _, err = run_cli(capsys, "joint", "--cycles", "1", "--scheme", "RC1")
    assert code == 2
    assert "two pointers" in err


def test_joint_json_payload(capsys):
    code, out, _ = run_cli(
        capsys, "joint", "--cycles", "1", "--scheme", "RC2", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["scheme"] == "RC2"
    cov = np.array([[float(x) for x in row] for row in payload["covariance"]])
    assert cov.shape == (2, 2)
    assert abs(cov[0, 1] - cov[1, 0]) < 1e-15
    weights = [float(c["weight"]) for c in payload["components"]]
    assert abs(sum(weights) - 1.0) < 1e-12


def test_moments_columns_are_internally_consistent(capsys):
    code, out, _ = run_cli(capsys, "moments", "--cycles", "2")
    assert code == 0
    header, rows = parse_csv(out)
    schemes = [row[header.index("scheme")] for row in rows]
    assert schemes == ["RM", "RC1", "RC2"]
    for row in rows:
        mean_work = float(row[header.index("mean_work")])
        mean_heat = float(row[header.index("mean_heat")])
        var_work = float(row[header.index("var_work")])
        eta = float(row[header.index("efficiency")])
        rel = float(row[header.index("reliability")])
        assert eta == pytest.approx(-mean_work / mean_heat, rel=1e-9)
        assert rel == pytest.approx(-mean_work / np.sqrt(var_work), rel=1e-9)
        # No single-cycle closed form applies to a two-cycle run.
        assert row[header.index("analytic_mean_work")] == ""
    by_scheme = {row[header.index("scheme")]: row for row in rows}
    assert by_scheme["RC1"][header.index("cov_work_heat")] == ""


def test_moments_single_cycle_reports_closed_forms(capsys):
    code, out, _ = run_cli(capsys, "moments", "--cycles", "1")
    assert code == 0
    header, rows = parse_csv(out)
    by_scheme = {row[header.index("scheme")]: row for row in rows}
    # Over one cycle the heat record has the same mean under per-stroke and
    # two-pointer accumulated readout; the back-action only separates the
    # running states from the second cycle on.
    rm_heat = float(by_scheme["RM"][header.index("mean_heat")])
    rc2_heat = float(by_scheme["RC2"][header.index("mean_heat")])
    assert rm_heat == pytest.approx(rc2_heat, rel=1e-9)
    for scheme in ("RM", "RC2"):
        row = by_scheme[scheme]
        numeric = float(row[header.index("mean_work")])
        analytic = float(row[header.index("analytic_mean_work")])
        # The closed form drops the small invariant-state coherence.
        assert analytic == pytest.approx(numeric, abs=1e-5)
        assert row[header.index("analytic_mean_heat")] != ""
        assert row[header.index("analytic_efficiency")] != ""
    rc1 = by_scheme["RC1"]
    assert rc1[header.index("analytic_mean_work")] != ""
    assert rc1[header.index("analytic_reliability")] != ""
    for name in ("analytic_mean_heat", "analytic_var_heat", "analytic_efficiency"):
        assert rc1[header.index(name)] == ""


def test_sweep_single_point_matches_library_routes(capsys):
    code, out, _ = run_cli(
        capsys,
        "sweep",
        "--stroke", "landau_zener",
        "--t1-min", "5", "--t1-max", "5", "--t1-steps", "1",
        "--t2-min", "10", "--t2-max", "10", "--t2-steps", "1",
    )
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["kind", "t1", "t2", "value_rm", "value_rc"]
    kinds = [row[0] for row in rows]
    assert kinds == ["grid", "argmax_rm", "argmax_rc"]
    base = EngineConfig(stroke=LandauZenerStroke(t1=5.0))
    point = derive_timed_config(base, 5.0, 10.0)
    for kind, name in (("RM", "value_rm"), ("RC", "value_rc")):
        expected = power_output(asymptotic_work_per_cycle(point, kind), 5.0, 10.0)
        for row in rows:
            assert float(row[header.index(name)]) == pytest.approx(expected, rel=1e-9)


def test_sweep_finite_cycle_leg(capsys):
    code, out, _ = run_cli(
        capsys,
        "sweep",
        "--stroke", "landau_zener",
        "--t1-min", "5", "--t1-max", "5", "--t1-steps", "1",
        "--t2-min", "10", "--t2-max", "10", "--t2-steps", "1",
        "--at", "2",
    )
    assert code == 0
    header, rows = parse_csv(out)
    base = EngineConfig(stroke=LandauZenerStroke(t1=5.0))
    point = derive_timed_config(base, 5.0, 10.0)
    work = work_per_cycle_series(point, "RM", 2)[-1][1]
    expected = power_output(work, 5.0, 10.0)
    assert float(rows[0][header.index("value_rm")]) == pytest.approx(
        expected, rel=1e-9
    )


def test_sweep_validates_its_inputs(capsys):
    code, _, err = run_cli(capsys, "sweep")
    assert code == 2
    assert "landau_zener" in err
    code, _, err = run_cli(
        capsys, "sweep", "--stroke", "landau_zener", "--t1-steps", "0"
    )
    assert code == 2
    code, _, err = run_cli(
        capsys, "sweep", "--stroke", "landau_zener", "--t2-min", "-1"
    )
    assert code == 2
    code, _, err = run_cli(
        capsys, "sweep", "--stroke", "landau_zener", "--at", "fish"
    )
    assert code == 2


def test_asymptotic_rows_match_library_values(capsys):
    code, out, _ = run_cli(capsys, "asymptotic")
    assert code == 0
    header, rows = parse_csv(out)
    by_kind = {row[header.index("kind")]: row for row in rows}
    assert set(by_kind) == {"RM", "RC"}
    config = EngineConfig(cycles=5)
    for kind, row in by_kind.items():
        work = float(row[header.index("work_per_cycle")])
        lam2 = float(row[header.index("lambda2")])
        assert work == pytest.approx(
            asymptotic_work_per_cycle(config, kind), rel=1e-10
        )
        assert lam2 == pytest.approx(
            spectrum(build_cycle_superoperator(config, kind)).lambda2, rel=1e-10
        )
        # No stroke duration is configured, so no power is reported.
        assert row[header.index("power")] == ""
    assert by_kind["RM"][header.index("dud")] == "false"
    assert by_kind["RC"][header.index("dud")] == "true"


def test_asymptotic_reports_power_when_timed(capsys):
    code, out, _ = run_cli(capsys, "asymptotic", "--stroke", "landau_zener", "--t1", "5")
    assert code == 0
    header, rows = parse_csv(out)
    t2 = thermal_duration_from_theta(8.0, 1.0, 3.7)
    for row in rows:
        work = float(row[header.index("work_per_cycle")])
        power = float(row[header.index("power")])
        assert power == pytest.approx(-work / (5.0 + t2), rel=1e-9)


def test_lz_uses_resolved_duration(capsys):
    code, out, _ = run_cli(capsys, "lz")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["t1", "alpha", "phi"]
    params = landau_zener_params(1.0, 3.7, 5.0)
    assert float(rows[0][1]) == pytest.approx(params.alpha, rel=1e-11)
    assert float(rows[0][2]) == pytest.approx(params.phi, rel=1e-11)
    code, out, _ = run_cli(capsys, "lz", "--eps_h", "3.0", "--t1", "4")
    header, rows = parse_csv(out)
    params = landau_zener_params(1.0, 3.0, 4.0)
    assert float(rows[0][1]) == pytest.approx(params.alpha, rel=1e-11)
    code, _, err = run_cli(capsys, "lz", "--t1", "0")
    assert code == 2
    assert "positive stroke duration" in err


def test_validate_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "validate", "--cycles", "1")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("PASSED:")
    code, out, _ = run_cli(
        capsys, "validate", "--cycles", "1", "--corrupt-suppression", "1.1"
    )
    assert code == 1
    assert out.strip().splitlines()[-1].startswith("FAILED:")


def test_validate_json(capsys):
    code, out, _ = run_cli(capsys, "validate", "--cycles", "1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["passed"] is True
    assert all(c["status"] in ("pass", "skip") for c in payload["checks"])


def test_config_file_with_flag_precedence(capsys, tmp_path):
    path = tmp_path / "engine.cfg"
    path.write_text("[engine]\neps_h = 3.0\n", encoding="utf-8")
    code, out, _ = run_cli(capsys, "lz", "--config", str(path))
    assert code == 0
    _, rows = parse_csv(out)
    assert float(rows[0][1]) == pytest.approx(
        landau_zener_params(1.0, 3.0, 5.0).alpha, rel=1e-11
    )
    code, out, _ = run_cli(capsys, "lz", "--config", str(path), "--eps_h", "3.5")
    _, rows = parse_csv(out)
    assert float(rows[0][1]) == pytest.approx(
        landau_zener_params(1.0, 3.5, 5.0).alpha, rel=1e-11
    )


def test_output_flag_writes_file(capsys, tmp_path):
    path = tmp_path / "lz.csv"
    code, out, _ = run_cli(capsys, "lz", "-o", str(path))
    assert code == 0
    assert out == ""
    header, rows = parse_csv(path.read_text(encoding="utf-8"))
    assert header == ["t1", "alpha", "phi"]
    assert len(rows) == 1


def test_identical_invocations_are_deterministic(capsys):
    _, first, _ = run_cli(capsys, "moments", "--cycles", "2")
    _, second, _ = run_cli(capsys, "moments", "--cycles", "2")
    assert first == second


def test_json_floats_round_trip_exactly(capsys):
    code, out, _ = run_cli(capsys, "asymptotic", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    for row in payload["asymptotic"]:
        for key in ("work_per_cycle", "heat_per_cycle", "lambda2"):
            text = row[key]
            assert isinstance(text, str)
            assert repr(float(text)) == text
