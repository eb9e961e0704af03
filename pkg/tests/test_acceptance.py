"""End-to-end acceptance checks.

Each test covers one numbered criterion and prints a single
``[PASS]``/``[FAIL]`` line so the run log shows the verdicts even when
pytest captures regular output.  Oracles here are deliberately written
against raw formulas, not the library code paths they check.
"""

import math
from contextlib import contextmanager

import numpy as np
import pytest

from fundadmin import (
    AnnualRecord,
    CalibrationSample,
    FundSpec,
    LinearResponse,
    MissingEntryError,
    SaturatingResponse,
    composite_output,
    default_domain_matrix,
    fit_response,
    incremental_admin_cost,
    optimize_ar,
    psr_lookup,
    required_ar_for_min_psr,
    roi,
    sweep,
)
from fundadmin.cli import EXIT_OK, run_cli
from fundadmin.model import ar_from_y, evaluate_point, y_from_ar
from fundadmin.response import delta_psr, invert_delta

REF_SPEC = FundSpec(50_000.0, 5_000.0, 0.05, 0.54)
SAT_REF = SaturatingResponse(0.3, 0.002)
LIN_REF = LinearResponse(2e-4, 0.3)


@contextmanager
def _criterion(capfd, number, label):
    try:
        yield
    except BaseException:
        with capfd.disabled():
            print(f"[FAIL] criterion {number:02d}: {label}")
        raise
    else:
        with capfd.disabled():
            print(f"[PASS] criterion {number:02d}: {label}")


def _grid_port_sr(spec, response, ys):
    """Portfolio success rate from the raw formulas (oracle path)."""
    b = spec.base_fraction
    v_i = spec.project_funding
    ar = b + (1.0 - b) * (ys / (v_i + ys))
    if isinstance(response, LinearResponse):
        delta = np.minimum(response.slope * ys, response.max_delta_psr)
    else:
        delta = response.ceiling * (1.0 - np.exp(-response.rate * ys))
    psr = np.clip(spec.intrinsic_success_rate + delta, 0.0, 1.0)
    return (1.0 - ar) * psr


def test_criterion_01_domain_lookup(capfd):
    with _criterion(capfd, 1, "intrinsic success rate lookup"):
        matrix = default_domain_matrix()
        assert psr_lookup(matrix, "biotechnology", "experimental development") == 0.54
        assert psr_lookup(matrix, "Biotechnology", "Experimental Development") == 0.54
        with pytest.raises(MissingEntryError):
            psr_lookup(matrix, "astrology", "basic research")


def test_criterion_02_simultaneous_equation_fixed_point(capfd):
    with _criterion(capfd, 2, "cost system fixed point on 1000 random inputs"):
        rng = np.random.default_rng(2026)
        for _ in range(1_000):
            b = rng.uniform(0.0, 0.9)
            v_i = rng.uniform(1.0, 1e6)
            v_p = v_i * rng.uniform(1.01, 100.0) / (1.0 - b)
            spec = FundSpec(v_p, v_i, b, rng.uniform(0.0, 1.0))
            y = rng.uniform(0.0, 10.0 * v_i)
            ar = ar_from_y(spec, y)
            admin = ar * v_p
            count = (v_p - admin) / v_i
            implied = b * v_p + count * y
            assert implied == pytest.approx(admin, rel=1e-12)
            assert count * v_i + ar * v_p == pytest.approx(v_p, rel=1e-12)


def test_criterion_03_round_trips(capfd):
    with _criterion(capfd, 3, "ratio and uplift inversions round-trip"):
        rng = np.random.default_rng(3)
        specs = [REF_SPEC] + [
            FundSpec(
                v_i * rng.uniform(2.0, 50.0),
                v_i,
                rng.uniform(0.0, 0.3),
                rng.uniform(0.0, 1.0),
            )
            for v_i in rng.uniform(10.0, 1e5, size=3)
        ]
        for spec in specs:
            for y in np.linspace(0.0, 10.0 * spec.project_funding, 200):
                y = float(y)
                back = y_from_ar(spec, ar_from_y(spec, y))
                assert back == pytest.approx(y, rel=1e-9, abs=1e-9 * spec.project_funding)
        for response, cap in ((SAT_REF, SAT_REF.ceiling), (LIN_REF, LIN_REF.max_delta_psr)):
            for target in np.linspace(0.0, 0.99 * cap, 100):
                target = float(target)
                again = delta_psr(response, invert_delta(response, target))
                assert again == pytest.approx(target, rel=1e-9, abs=1e-15)


def test_criterion_04_linear_model_law(capfd):
    with _criterion(capfd, 4, "linear response: constant slope and corner optima"):
        # below the cap the curve is affine in the ratio itself
        expected = LIN_REF.slope * REF_SPEC.project_funding
        expected -= REF_SPEC.intrinsic_success_rate

        def port_sr_of_ar(ar):
            return evaluate_point(REF_SPEC, LIN_REF, y_from_ar(REF_SPEC, ar)).port_sr

        h = 1e-5
        for ar0 in (0.08, 0.12, 0.2):
            fd = (port_sr_of_ar(ar0 + h) - port_sr_of_ar(ar0 - h)) / (2.0 * h)
            assert abs(fd - expected) <= 1e-9

        # positive gradient: spend to the useful cap, closed form, exactly
        result = optimize_ar(REF_SPEC, LIN_REF)
        assert result.boundary_flag == "at_cap"
        useful = min(LIN_REF.max_delta_psr, max(0.0, 1.0 - REF_SPEC.intrinsic_success_rate))
        assert result.point.y == useful / LIN_REF.slope

        # negative gradient: base wins
        weak = LinearResponse(5e-5, 0.3)
        assert 5e-5 * REF_SPEC.project_funding - REF_SPEC.intrinsic_success_rate < 0.0
        result = optimize_ar(REF_SPEC, weak)
        assert result.boundary_flag == "at_base"
        assert result.point.y == 0.0


def test_criterion_05_saturating_optimizer_oracle(capfd):
    with _criterion(capfd, 5, "saturating optimizer beats a dense grid"):
        rng = np.random.default_rng(505)
        for _ in range(20):
            v_i = rng.uniform(500.0, 20_000.0)
            spec = FundSpec(
                v_i * rng.uniform(5.0, 50.0),
                v_i,
                rng.uniform(0.0, 0.15),
                rng.uniform(0.1, 0.9),
            )
            response = SaturatingResponse(
                ceiling=rng.uniform(0.05, 0.6),
                rate=10.0 ** rng.uniform(-4.5, -2.0),
            )
            result = optimize_ar(spec, response)
            y_max = max(10.0 / response.rate, 10.0 * v_i)
            grid = _grid_port_sr(spec, response, np.linspace(0.0, y_max, 100_000))
            assert result.point.port_sr >= float(np.max(grid)) - 1e-7

        reference = optimize_ar(REF_SPEC, SAT_REF)
        assert abs(reference.point.ar - 0.173) <= 0.005
        assert abs(reference.point.port_sr - 0.639) <= 0.002
        assert reference.point.ar < 0.20


def test_criterion_06_risk_inversion(capfd):
    with _criterion(capfd, 6, "minimum success rate inverts to spend and ratio"):
        point = required_ar_for_min_psr(REF_SPEC, SAT_REF, 0.7)
        assert abs(point.y - 381.07) / 381.07 <= 1e-4
        assert abs(point.ar - 0.117266) / 0.117266 <= 1e-4
        base = required_ar_for_min_psr(REF_SPEC, SAT_REF, 0.5)
        assert base.y == 0.0
        assert base.ar == REF_SPEC.base_fraction
        at_intrinsic = required_ar_for_min_psr(REF_SPEC, SAT_REF, 0.54)
        assert at_intrinsic.y == 0.0


def test_criterion_07_calibration_recovery(capfd):
    with _criterion(capfd, 7, "planted response parameters recovered"):
        ys = np.linspace(50.0, 3_000.0, 10)
        samples = [CalibrationSample(float(y), SAT_REF.delta_psr(float(y))) for y in ys]
        fitted = fit_response(samples, "saturating")
        assert abs(fitted.ceiling - 0.3) / 0.3 <= 1e-6
        assert abs(fitted.rate - 0.002) / 0.002 <= 1e-6

        linear = fit_response(
            [CalibrationSample(y, 2e-4 * y) for y in (100.0, 200.0, 300.0, 400.0, 500.0)],
            "linear",
        )
        assert linear.slope == 2e-4

        # dyadic slope with integer spends: every least-squares step is
        # exact in binary floating point, so equality is guaranteed
        c = 2.0 ** -12
        dyadic = fit_response(
            [CalibrationSample(y, c * y) for y in (1.0, 2.0, 4.0, 8.0, 16.0)],
            "linear",
        )
        assert dyadic.slope == c


def test_criterion_08_analytics_constants(capfd):
    with _criterion(capfd, 8, "output weighting, return and cost-per-project"):
        record = AnnualRecord(
            year=2000,
            disbursed=1_200_000.0,
            admin_cost=240_000.0,
            projects=10,
            publications=10,
            masters=5,
            doctorates=2,
            patents=1,
        )
        assert composite_output(record) == 60.0
        assert roi(record) == 0.5

        base = dict(
            disbursed=1.0, publications=0, masters=0, doctorates=0, patents=0
        )
        series = [
            AnnualRecord(year=2000 + i, admin_cost=50_000.0 + 3_240.0 * n, projects=n, **base)
            for i, n in enumerate((12, 18, 25, 31, 40))
        ]
        slope = incremental_admin_cost(series)
        assert abs(slope - 3_240.0) / 3_240.0 <= 1e-6


def test_criterion_09_curve_shapes(capfd):
    with _criterion(capfd, 9, "success curves have the expected shapes"):
        # saturating: single interior peak along the default grid
        ars = [0.05 + 0.01 * i for i in range(46)]
        rates = [p.port_sr for p in sweep(REF_SPEC, SAT_REF, ars)]
        peak = rates.index(max(rates))
        assert 0 < peak < len(rates) - 1
        assert all(a < b for a, b in zip(rates[:peak], rates[1 : peak + 1]))
        assert all(a > b for a, b in zip(rates[peak:], rates[peak + 1 :]))

        # linear: affine pieces joined by one kink where the cap binds
        grid = [0.05 + 0.005 * i for i in range(81)]
        values = [p.port_sr for p in sweep(REF_SPEC, LIN_REF, grid)]
        second = [
            values[i - 1] - 2.0 * values[i] + values[i + 1]
            for i in range(1, len(values) - 1)
        ]
        kinks = [i for i, d in enumerate(second) if abs(d) > 1e-9]
        # a kink between grid points bends both flanking windows
        assert len(kinks) in (1, 2)
        assert kinks[-1] - kinks[0] == len(kinks) - 1
        cap_ar = ar_from_y(REF_SPEC, LIN_REF.max_delta_psr / LIN_REF.slope)
        for index in kinks:
            assert abs(grid[index + 1] - cap_ar) <= 0.005
        flat = [d for i, d in enumerate(second) if i not in kinks]
        assert max(abs(d) for d in flat) <= 1e-12

        # the success rate collapses as administration eats the fund
        tail = evaluate_point(REF_SPEC, SAT_REF, y_from_ar(REF_SPEC, 1.0 - 1e-8))
        assert tail.port_sr <= 1e-7


def test_criterion_10_cli_determinism(capfd, tmp_path):
    with _criterion(capfd, 10, "repeated CLI runs are byte-identical"):
        sat_conf = tmp_path / "sat.conf"
        sat_conf.write_text(
            "v_p = 50000\nv_i = 5000\nb = 0.05\npsr_in = 0.54\n"
            "response.kind = saturating\nresponse.c = 0.3\nresponse.k = 0.002\n",
            encoding="utf-8",
        )
        samples = tmp_path / "samples.csv"
        samples.write_text("y,delta_psr\n100,0.05\n400,0.15\n900,0.24\n", encoding="utf-8")
        annual = tmp_path / "annual.csv"
        annual.write_text(
            "year,disbursed,admin_cost,projects,publications,masters,doctorates,patents\n"
            "2000,1000000,200000,10,4,2,1,0\n"
            "2001,1100000,220000,12,5,2,1,1\n",
            encoding="utf-8",
        )
        conf = str(sat_conf)
        invocations = [
            ["evaluate", "--config", conf, "--y", "500"],
            ["sweep", "--config", conf],
            ["optimize", "--config", conf],
            ["invert", "--config", conf, "--psr-min", "0.7"],
            ["calibrate", "--config", conf, "--samples", str(samples), "--kind", "saturating"],
            ["case-study", "--data", str(annual), "--base-year", "2000"],
        ]
        for argv in invocations:
            assert run_cli(argv) == EXIT_OK
            first = capfd.readouterr().out
            assert run_cli(argv) == EXIT_OK
            second = capfd.readouterr().out
            assert first == second
            assert first != ""

        # file outputs, figure rendering included
        for name, extra in (("sweep", ["--config", conf]),
                            ("case-study", ["--data", str(annual), "--base-year", "2000"])):
            pairs = []
            for tag in ("a", "b"):
                out = tmp_path / f"{name}-{tag}.csv"
                png = tmp_path / f"{name}-{tag}.png"
                argv = [name] + extra + ["--out", str(out), "--plot", str(png)]
                assert run_cli(argv) == EXIT_OK
                capfd.readouterr()
                pairs.append((out.read_bytes(), png.read_bytes()))
            assert pairs[0][0] == pairs[1][0]
            assert pairs[0][1] == pairs[1][1]
            assert pairs[0][1][:8] == b"\x89PNG\r\n\x1a\n"
