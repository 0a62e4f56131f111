"""Acceptance gate: one PASS/FAIL line per criterion, at the stated tolerances.

Criterion 1 is expected to fail. The tabulated beta_11 is 1.27e-8 away from
the zero, which a 30-digit mpmath root confirms to 1e-11 (see test_zeros).
"""
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from digamma_zeros import cli, hyperfactorial as hf, series, special, zeros
from digamma_zeros.series import IdentityId

TABLE = [
    ("psi", 0, 1.461632, 5e-6),
    ("psi", 10, -9.702672541, 5e-9),
    ("psi", 100, -99.80953650, 5e-8),
    ("psi", 1000, -999.8641415, 5e-7),
    ("psig", 0, 2.55766, 5e-5),
    ("psig", 1, 1.39147, 5e-5),
    ("psig", 2, -0.3662934, 5e-7),
    ("psig", 11, -9.622785495, 5e-9),
    ("psig", 101, -99.77177415, 5e-8),
    ("psig", 1001, -999.8444267, 5e-7),
]


def test_criterion_1_zero_spot_checks(verdict):
    misses = []
    for fam, k, ref, tol in TABLE:
        finder = zeros.find_psi_zero if fam == "psi" else zeros.find_psiG_zero
        diff = abs(finder(k).value - ref)
        if diff > tol:
            misses.append(f"{fam} k={k} off by {diff:.3g} > {tol:g}")
    detail = "; ".join(misses) if misses else f"{len(TABLE)} values within tolerance"
    verdict(1, "zero spot-checks", not misses, detail)


def test_criterion_2_identities(verdict):
    worst = []
    ok = True
    for ident in IdentityId:
        quartic = "quartic" in ident.value
        K, tol = (10**4, 1e-8) if quartic else (10**5, 1e-5)
        res = series.verify_identity(ident, K)
        ok &= res.rel_error <= tol
        worst.append(f"{ident.value} {res.rel_error:.2g}")
    verdict(2, "zero-sum identities", ok, ", ".join(worst))


def test_criterion_3_products(verdict):
    ok = True
    parts = []
    for name, product, ref_fn in (
        ("psi", series.weierstrass_psi, series.psi_over_gamma),
        ("psiG", series.weierstrass_psiG, series.psiG_over_gamma),
    ):
        for z in (0.25, 0.5, 1.5):
            ref = ref_fn(z)
            errs = [abs(product(z, K) / ref - 1.0) for K in (10**2, 10**3, 10**4)]
            ok &= errs[2] <= 1e-3 and errs[0] > errs[1] > errs[2]
            parts.append(f"{name}({z}) {errs[2]:.2g}")
    verdict(3, "Weierstrass products", ok, ", ".join(parts))


def test_criterion_4_hyperfactorial(verdict):
    mx, mn = hf.find_positive_extrema()
    ok = (abs(mx.location - 0.290957) <= 5e-6 and mx.kind is hf.ExtremumKind.MAX
          and abs(mn.location - 1.53769) <= 5e-5 and mn.kind is hf.ExtremumKind.MIN)
    gaps = [hf.paired_extremum(n).gap for n in range(2, 9)]
    ok &= all(b < a for a, b in zip(gaps, gaps[1:]))
    ok &= gaps[5 - 2] <= 1e-3
    curve = ", ".join(f"n={n}: {g:.2g}" for n, g in zip(range(2, 9), gaps))
    verdict(4, "hyperfactorial extrema", ok, f"max {mx.location:.7f}, min {mn.location:.6f}; gaps {curve}")


def test_criterion_5_properties(verdict):
    rng = np.random.default_rng(2024)
    fails = []

    xs = rng.uniform(0.0, 1.0, 200)
    refl = max(abs(special.digamma(1 - x) - special.digamma(x) - math.pi / math.tan(math.pi * x))
               / max(1.0, math.pi / abs(math.tan(math.pi * x))) for x in xs)
    xs = rng.uniform(0.1, 50.0, 200)
    rec = max(abs(special.digamma(x + 1) - special.digamma(x) - 1 / x) for x in xs)
    if max(refl, rec) > 1e-10:
        fails.append(f"digamma residual {max(refl, rec):.2g}")

    grid = np.linspace(-25.0, 25.0, 10_000)
    grid = grid[np.abs(grid - np.round(grid)) > 1e-9]
    if not all(special.trigamma(x) > 0 for x in grid):
        fails.append("trigamma sign")

    ws = np.concatenate([-1 / math.e + np.geomspace(1e-12, 1 / math.e, 500), np.geomspace(1e-10, 1e8, 500)])
    lam = max(abs(special.lambert_w0(x) * math.exp(special.lambert_w0(x)) - x) / max(1.0, abs(x))
              for x in ws)
    if lam > 1e-13:
        fails.append(f"Lambert residual {lam:.2g}")

    bg = max(abs(special.log_barnes_g(x + 1) - special.log_gamma(x) - special.log_barnes_g(x))
             for x in rng.uniform(0.1, 40.0, 200))
    if bg > 1e-10:
        fails.append(f"Barnes G residual {bg:.2g}")

    for n in range(9):
        hyper = math.fsum(k * math.log(k) for k in range(1, n + 1))
        if abs(hf.log_K(n + 1) - hyper) > 1e-10 * max(1.0, hyper):
            fails.append(f"log_K pin n={n}")

    count = 100_000
    a = zeros.zero_arrays("psi", count).values
    b = zeros.zero_arrays("psig", count).values
    k = np.arange(count)
    psi_in = (a[0] > 1 and a[0] < 2 and np.all((-k[1:] < a[1:]) & (a[1:] < -k[1:] + 1)))
    psig_in = (2 < b[0] < 3 and 1 < b[1] < 2
               and np.all((-(k[2:] - 1) < b[2:]) & (b[2:] < -(k[2:] - 2))))
    if not (psi_in and psig_in):
        fails.append("bracket containment")

    detail = "; ".join(fails) if fails else (
        f"reflection/recurrence {max(refl, rec):.1g}, Lambert {lam:.1g}, Barnes G {bg:.1g}, "
        f"{2 * count} zeros contained")
    verdict(5, "property suites", not fails, detail)


def test_criterion_6_determinism(verdict, tmp_path, monkeypatch):
    reports = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        subprocess.run([sys.executable, "-m", "digamma_zeros", "verify", "--out", str(out)],
                       capture_output=True, timeout=600)
        data = json.loads(out.read_text())
        data.pop("generated_at")
        reports.append(json.dumps(data, indent=2))
    same_report = reports[0] == reports[1]

    cache = tmp_path / "cache"
    cache.mkdir()
    monkeypatch.setenv(zeros.CACHE_ENV, str(cache))
    zeros.clear_memo()
    try:
        computed = zeros.zero_arrays("psi", 20_000)
        zeros.clear_memo()
        cached = zeros.zero_arrays("psi", 20_000)
        monkeypatch.delenv(zeros.CACHE_ENV)
        zeros.clear_memo()
        fresh = zeros.zero_arrays("psi", 20_000)
    finally:
        zeros.clear_memo()
    same_cache = (np.array_equal(computed.values, cached.values)
                  and np.array_equal(cached.values, fresh.values)
                  and np.array_equal(computed.residuals, cached.residuals))
    verdict(6, "CLI determinism", same_report and same_cache,
            f"reports identical: {same_report}, cache bit-identical: {same_cache}")
