"""Acceptance suite: every criterion at its stated tolerance and runtime.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.
"""

import math
import time

import numpy as np

from sqcomp import gaussian, oracle
from sqcomp.cli import main
from sqcomp.comparator import (
    Efficiency,
    overlap,
    p_eta_same,
    p_two_hypotheses,
    p_universal,
    p_zero,
    p_zero_eta,
    reliability,
    verify_no_error,
)
from sqcomp.fock import SqueezeParam, Truncation, output_state, required_cutoff, squeeze_matrix


def _report(num, name, ok, detail):
    print(f"\n[criterion {num:02d}] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num:02d} {name}: {detail}"


def _pair(dm, dp):
    return (dp + dm) / 2.0, (dp - dm) / 2.0


def test_criterion_01_no_error_condition():
    t0 = time.perf_counter()
    trunc = Truncation(60, 1e-6)
    rep = verify_no_error([0.0, 0.25, 0.5, 0.75, 1.0], Efficiency(1.0), trunc)
    elapsed = time.perf_counter() - t0
    ok = rep.max_p_diff <= 1e-5 and elapsed < 10.0
    _report(1, "no-error condition at eta = 1", ok,
            f"max p(D|r,r) = {rep.max_p_diff:.3e} <= 1e-5, {elapsed:.2f}s < 10s")


def test_criterion_02_covariance_identity():
    t0 = time.perf_counter()
    grid = np.linspace(-1.0, 1.0, 21)
    worst = 0.0
    worst_det = 0.0
    for r in grid:
        for s in grid:
            a = gaussian.sigma_out(r, s)
            worst = max(worst, float(np.max(np.abs(a - gaussian.sigma_prime(r, s)))))
            worst_det = max(worst_det, abs(np.linalg.det(a) - 1.0 / 16.0))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and worst_det <= 1e-10 and elapsed < 1.0
    _report(2, "half-sum/half-difference covariance identity", ok,
            f"max |dev| = {worst:.2e} <= 1e-12, max |det - 1/16| = {worst_det:.2e} "
            f"<= 1e-10, {elapsed:.2f}s < 1s")


def test_criterion_03_closed_form_triangle():
    t0 = time.perf_counter()
    worst_series = 0.0
    for r in (0.1, 0.3, 0.5, 1.0):
        for eta in (0.5, 0.9, 0.99):
            res = p_zero_eta(SqueezeParam(r), SqueezeParam(r), Efficiency(eta),
                             Truncation(96, 1e-9))
            assert res.truncation_bound <= 1e-10
            series = p_eta_same(r, Efficiency(eta), Truncation(4000, 1e-9))
            worst_series = max(worst_series, abs(res.p_zero - series))
    worst_lit = 0.0
    for (r, s, eta) in ((0.3, 0.3, 0.9), (0.3, 0.1, 0.9), (0.5, 0.5, 0.5)):
        lit = oracle.direct_smeared_zero_prob(SqueezeParam(r), SqueezeParam(s), eta, 12)
        reg = p_zero_eta(SqueezeParam(r), SqueezeParam(s), Efficiency(eta),
                         Truncation(96, 1e-9)).p_zero
        ser = p_eta_same(r, Efficiency(eta), Truncation(4000, 1e-9)) if r == s else reg
        worst_lit = max(worst_lit, abs(lit - reg), abs(lit - ser))
    elapsed = time.perf_counter() - t0
    ok = worst_series <= 1e-8 and worst_lit <= 1e-4 and elapsed < 60.0
    _report(3, "closed-form triangle", ok,
            f"contracted vs series {worst_series:.2e} <= 1e-8, literal "
            f"{worst_lit:.2e} <= 1e-4, {elapsed:.2f}s < 60s")


def test_criterion_04_small_r_expansion():
    t0 = time.perf_counter()
    worst_ratio = 0.0
    for r in (0.01, 0.02, 0.05):
        for eta in (0.5, 0.9):
            p = p_eta_same(r, Efficiency(eta), Truncation(60, 1e-6))
            approx = 1.0 - 2.0 * eta * (1.0 - eta) * r * r
            worst_ratio = max(worst_ratio, abs(p - approx) / (5.0 * r**4))
    elapsed = time.perf_counter() - t0
    ok = worst_ratio <= 1.0 and elapsed < 5.0
    _report(4, "small-squeezing expansion", ok,
            f"max |p - approx| / 5r^4 = {worst_ratio:.3f} <= 1, {elapsed:.2f}s < 5s")


def test_criterion_05_figure2_shape():
    t0 = time.perf_counter()
    # strict ordering along the difference grid
    ordering_ok = True
    detail = ""
    for dm in np.arange(0.05, 3.0 + 1e-9, 0.05):
        dm = round(float(dm), 10)
        r, s = _pair(dm, max(1.2, dm))
        trunc = Truncation(required_cutoff(r, s, 1e-8), 1e-8)
        p_opt = p_zero(SqueezeParam(r), SqueezeParam(s), trunc).p_diff
        om = overlap(dm)
        if not (p_universal(om) < p_opt <= p_two_hypotheses(om) + 1e-6):
            ordering_ok = False
            detail = f"ordering broken at dm = {dm}"
            break
    # analytic endpoints
    endpoints_ok = p_universal(overlap(0.0)) == 0.0 and p_two_hypotheses(0.0) == 1.0
    # half-sum independence
    spread = 0.0
    for dm in (0.2, 0.5, 1.0):
        vals = []
        for dp in np.linspace(dm, 2.4, 5):
            r, s = _pair(dm, float(dp))
            trunc = Truncation(required_cutoff(r, s, 1e-8), 1e-8)
            vals.append(p_zero(SqueezeParam(r), SqueezeParam(s), trunc).p_diff)
        spread = max(spread, max(vals) - min(vals))
    elapsed = time.perf_counter() - t0
    ok = ordering_ok and endpoints_ok and spread <= 1e-6 and elapsed < 120.0
    _report(5, "difference-probability ordering and half-sum independence", ok,
            f"{detail or 'ordering holds on (0, 3]'}, endpoints analytic, "
            f"half-sum spread {spread:.2e} <= 1e-6, {elapsed:.1f}s < 120s")


def test_criterion_06_figure3_shape():
    t0 = time.perf_counter()
    etas = (0.5, 0.9, 0.99, 0.999)
    rs = [round(0.1 * i, 10) for i in range(31)]
    curves = {}
    for eta in etas:
        vals = []
        for r in rs:
            lam = math.tanh(r)
            q = eta * lam / (1.0 - (1.0 - eta) * lam) if lam else 0.0
            cap = 4000 if q < 0.99 else 8000
            vals.append(p_eta_same(r, Efficiency(eta), Truncation(cap, 1e-6)))
        curves[eta] = vals
    monotone_r = all(
        a >= b - 1e-12 for vals in curves.values() for a, b in zip(vals, vals[1:])
    )
    monotone_eta = all(
        curves[hi][i] > curves[lo][i]
        for hi, lo in zip(etas[::-1], etas[::-1][1:])
        for i in range(1, len(rs))
    )
    elapsed = time.perf_counter() - t0
    ok = monotone_r and monotone_eta and elapsed < 120.0
    _report(6, "same-input probability monotone in r and eta", ok,
            f"nonincreasing in r: {monotone_r}, ordered by eta: {monotone_eta}, "
            f"{elapsed:.1f}s < 120s")


def test_criterion_07_figure4_shape():
    t0 = time.perf_counter()
    ideal = reliability(0.6, 0.4, Efficiency(1.0), Truncation(120, 1e-10))
    ideal_ok = abs(ideal - 1.0) <= 1e-8

    etas = (0.5, 0.9, 0.99, 0.999)
    order_ok = True
    for dm in (0.2, 0.6, 1.0):
        r, s = _pair(dm, 1.0)
        trunc = Truncation(required_cutoff(r, s, 1e-9), 1e-8)
        vals = [reliability(r, s, Efficiency(e), trunc) for e in etas]
        order_ok = order_ok and all(a < b for a, b in zip(vals, vals[1:]))

    limits = []
    for dm in (0.2, 0.05, 0.01):
        r, s = _pair(dm, 1.0)
        trunc = Truncation(required_cutoff(r, s, 1e-9), 1e-8)
        limits.append(abs(reliability(r, s, Efficiency(0.9), trunc) - 0.5))
    limit_ok = limits[0] > limits[1] > limits[2] and limits[2] <= 1e-3

    elapsed = time.perf_counter() - t0
    ok = ideal_ok and order_ok and limit_ok and elapsed < 120.0
    _report(7, "reliability limits and eta ordering", ok,
            f"|R(eta=1) - 1| = {abs(ideal - 1.0):.1e} <= 1e-8, eta-ordered: {order_ok}, "
            f"|R - 1/2| at dm = 0.01 is {limits[2]:.1e} <= 1e-3, {elapsed:.1f}s < 120s")


def _converged_expm(gamma):
    dim = 64
    ref = oracle.expm_squeeze(gamma, dim)
    while dim < 1024:
        wider = oracle.expm_squeeze(gamma, 2 * dim)
        if np.max(np.abs(wider[:33, :33] - ref[:33, :33])) <= 1e-10:
            return wider
        dim *= 2
        ref = wider
    return ref


def test_criterion_08_oracle_equivalence():
    t0 = time.perf_counter()
    worst_sq = 0.0
    for gamma in (SqueezeParam(0.1), SqueezeParam(0.5), SqueezeParam(1.0),
                  SqueezeParam(0.5, math.pi / 3)):
        ref = _converged_expm(gamma)
        mat = squeeze_matrix(gamma, Truncation(63, 0.999)).elements
        worst_sq = max(worst_sq, float(np.max(np.abs(mat[:33, :33] - ref[:33, :33]))))
    worst_out = 0.0
    for r, s in ((0.5, 0.0), (0.3, 0.7)):
        ref = oracle.expm_output_state(SqueezeParam(r), SqueezeParam(s), 96)
        st = output_state(SqueezeParam(r), SqueezeParam(s), Truncation(63, 1e-6))
        worst_out = max(worst_out, float(np.max(np.abs(st.amps[:33, :33] - ref[:33, :33]))))
    elapsed = time.perf_counter() - t0
    ok = worst_sq <= 1e-8 and worst_out <= 1e-8 and elapsed < 60.0
    _report(8, "oracle equivalence", ok,
            f"squeeze matrix {worst_sq:.2e} <= 1e-8, output state {worst_out:.2e} "
            f"<= 1e-8, {elapsed:.1f}s < 60s")


def test_criterion_09_truncation_convergence():
    t0 = time.perf_counter()

    def opt_probe(n):
        return p_zero(SqueezeParam(1.1), SqueezeParam(0.1), Truncation(n, 1e-6)).p_diff

    probes = [
        ("p_diff(1,1) ideal", lambda n: p_zero(
            SqueezeParam(1.0), SqueezeParam(1.0), Truncation(n, 1e-6)).p_diff, 60),
        ("p_zero_eta(0.5,0.5,0.9)", lambda n: p_zero_eta(
            SqueezeParam(0.5), SqueezeParam(0.5), Efficiency(0.9),
            Truncation(n, 1e-6)).p_zero, 96),
        ("p_eta_same(0.05,0.9)", lambda n: p_eta_same(
            0.05, Efficiency(0.9), Truncation(n, 1e-6)), 1000),
        ("p_opt(dm=1,dp=1.2)", opt_probe, required_cutoff(1.1, 0.1, 1e-6)),
        ("p_eta_same(3,0.999)", lambda n: p_eta_same(
            3.0, Efficiency(0.999), Truncation(n, 1e-6)), 8000),
        ("R_D(0.6,0.4,0.9)", lambda n: reliability(
            0.6, 0.4, Efficiency(0.9), Truncation(n, 1e-6)), 100),
    ]
    worst = 0.0
    worst_name = ""
    for name, fn, base in probes:
        delta = abs(fn(base) - fn(2 * base))
        if delta > worst:
            worst, worst_name = delta, name
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6
    _report(9, "cutoff-doubling stability", ok,
            f"max change {worst:.2e} <= 1e-6 (worst: {worst_name}), {elapsed:.1f}s")


def test_criterion_10_cli_determinism(tmp_path, capsys):
    t0 = time.perf_counter()
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["figure2", "--grid-step", "0.25"]
    rc1 = main(argv + ["--out", str(out1)])
    rc2 = main(argv + ["--out", str(out2)])
    identical = out1.read_bytes() == out2.read_bytes()
    rc_val = main(["validate"])
    capsys.readouterr()
    elapsed = time.perf_counter() - t0
    ok = rc1 == rc2 == 0 and identical and rc_val == 0
    _report(10, "CLI determinism and default validate", ok,
            f"byte-identical: {identical}, validate exit {rc_val}, {elapsed:.1f}s")
