"""The ten acceptance criteria, one test each.

Every test records a single ``criterion N: PASS|FAIL ...`` line (printed in
the terminal summary) before asserting, so a failing criterion still reports
its measured residual.
"""

import time

import numpy as np
import pytest

from rankone import certify, checks, transform
from rankone.geometry import GroupDatum, catalog
from rankone.quadrature import QuadratureSpec
from rankone.radial import BKernel

from conftest import ACCEPTANCE_LINES

GROUPS = catalog()
Q = QuadratureSpec()


def report(n, ok, detail, seconds):
    ACCEPTANCE_LINES.append(f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail} ({seconds:.1f} s)")
    print(ACCEPTANCE_LINES[-1])


def per_group(fn):
    out = {}
    for g in GROUPS:
        out[g.name] = fn(g)
    return out


def test_criterion_01_kernel_transform():
    t0 = time.perf_counter()
    res = per_group(lambda g: checks.suite_kernel_transform(g, Q)[0].residual)
    dt = time.perf_counter() - t0
    worst = max(res.values())
    ok = worst < 1e-6 and dt < 60
    report(1, ok, f"kernel transform max rel err {worst:.2e} < 1e-6 over 6 groups, 5 lambda x 21 xi", dt)
    assert ok, res


def test_criterion_02_integral_one():
    t0 = time.perf_counter()
    res = per_group(lambda g: checks.suite_integral_one(g, Q)[0].residual)
    dt = time.perf_counter() - t0
    worst = max(res.values())
    ok = worst < 1e-8 and dt < 30
    report(2, ok, f"integral of Phi max rel err {worst:.2e} < 1e-8, 10 random lambda per group", dt)
    assert ok, res


def test_criterion_03_l1_norm():
    t0 = time.perf_counter()
    worst, monotone, shrink = 0.0, True, 0.0
    for g in GROUPS:
        for eta in checks.l1_etas(g):
            n = transform.l1_norm(BKernel(1j * eta), g, Q)
            exact = 1 / (eta**2 - g.rho**2)
            worst = max(worst, abs(n - exact) / exact)
        ray = np.array([transform.l1_norm(BKernel(1j * f * g.rho), g, Q) for f in checks.RAY_FACTORS])
        monotone &= bool(np.all(np.diff(ray) < 0))
        shrink = max(shrink, ray[-1] / ray[0])
    dt = time.perf_counter() - t0
    ok = worst < 1e-7 and monotone and shrink < 0.1
    report(3, ok, f"exact L1 max rel err {worst:.2e} < 1e-7; ray decreasing={monotone}, last/first {shrink:.3f}", dt)
    assert ok


def test_criterion_04_connection():
    t0 = time.perf_counter()
    res = per_group(lambda g: checks.suite_connection(g, Q)[0].residual)
    dt = time.perf_counter() - t0
    worst = max(res.values())
    ok = worst < 1e-8
    report(4, ok, f"connection residual {worst:.2e} < 1e-8 on 100 samples per group", dt)
    assert ok, res


def test_criterion_05_T_operator():
    t0 = time.perf_counter()
    forms, ident, outside = 0.0, 0.0, 0.0
    for g in GROUPS:
        f_checks = checks.suite_t_forms(g, Q)
        forms = max(forms, f_checks[0].residual)
        outside = max(outside, f_checks[1].residual)
        ident = max(ident, checks.suite_t_identity(g, Q)[0].residual)
    dt = time.perf_counter() - t0
    ok = forms < 1e-7 and ident < 1e-6 and outside == 0 and dt < 300
    report(5, ok, f"T forms discrepancy {forms:.2e} < 1e-7; identity residual {ident:.2e} < 1e-6 on 3x5 grid", dt)
    assert ok


def test_criterion_06_round_trip():
    t0 = time.perf_counter()
    res = {}
    for g in (GroupDatum(1, 0), GroupDatum(2, 0)):
        res[g.name] = checks.suite_roundtrip(g, Q)[0].residual
    dt = time.perf_counter() - t0
    worst = max(res.values())
    ok = worst < 1e-4 and dt < 300
    report(6, ok, f"synthesis round trip sup err {worst:.2e} < 1e-4 at w = 0, 0.5, 1 for H2R, H3R", dt)
    assert ok, res


def test_criterion_07_resolvent_branches():
    t0 = time.perf_counter()
    worst, branches = 0.0, set()
    for g in GROUPS:
        rows = checks.resolvent_table(g, Q, checks.resolvent_lambdas(g))
        worst = max(worst, max(r["relative_error"] for r in rows))
        branches |= {r["branch"] for r in rows}
    dt = time.perf_counter() - t0
    ok = worst < 1e-5 and branches == {"T", "kernel"}
    report(7, ok, f"both resolvent branches match 1/(xi0^2 - lambda^2): rel err {worst:.2e} < 1e-5", dt)
    assert ok


def test_criterion_08_certificates():
    t0 = time.perf_counter()
    violations = 0
    for c in checks.suite_certificate(GROUPS[0], Q):
        violations += c.info["violations"]
    ratio = max(c.residual for c in checks.suite_gamma_ratio(GROUPS[0], Q))
    pattern = max(checks.suite_c_pattern(g, Q)[0].residual for g in GROUPS)
    dt = time.perf_counter() - t0
    ok = violations == 0 and ratio < 0.05 and pattern < 0.05
    report(
        8,
        ok,
        f"domination violations {violations}/1500; gamma-ratio slope err {ratio:.3f}, c-pattern slope err {pattern:.3f} < 0.05",
        dt,
    )
    assert ok


def test_criterion_09_envelopes():
    t0 = time.perf_counter()
    slope_err, log_misfit, rate_err = 0.0, None, 0.0
    for g in GROUPS:
        prof = checks.small_t_profile(g)
        if prof["kind"] == "power":
            slope_err = max(slope_err, abs(prof["slope"] - prof["expected"]))
        else:
            log_misfit = prof["relative_misfit"]
        rate, expected = checks.large_t_rate(g)
        rate_err = max(rate_err, abs(rate - expected))
    dt = time.perf_counter() - t0
    ok = slope_err < 0.05 and log_misfit is not None and log_misfit < 1e-3 and rate_err < 0.01
    report(
        9,
        ok,
        f"small-t slope err {slope_err:.3f} < 0.05; (1,0) log-profile misfit {log_misfit:.1e}; decay-rate err {rate_err:.1e} < 0.01",
        dt,
    )
    assert ok


def test_criterion_10_divergence():
    t0 = time.perf_counter()
    flagged, growth = {}, {}
    for g in GROUPS:
        flag, partial = checks.divergence_probe(g, Q)
        flagged[g.name] = flag
        norms = list(partial.values())
        growth[g.name] = norms[-1] / norms[0] if norms else 0.0
    dt = time.perf_counter() - t0
    ok = all(flagged.values())
    report(10, ok, f"divergence flagged at Im lambda = 0.9 rho for {sum(flagged.values())}/6 groups, "
           f"min growth T=5..40 x{min(growth.values()):.3g}", dt)
    assert ok, flagged
