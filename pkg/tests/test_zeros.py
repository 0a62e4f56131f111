import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from digamma_zeros import zeros as zr
from digamma_zeros._accel import USE_NUMBA, set_threads
from digamma_zeros.constants import CONSTANTS
from digamma_zeros.errors import DomainError, ZeroFindingError
from digamma_zeros.special import digamma, psi_G, trigamma
from digamma_zeros.zeros import ApproxForm, ZeroFamily

# mpmath.findroot at 30 digits
ALPHA = {
    0: 1.46163214496836234126,
    1: -0.504083008264455409258,
    10: -9.70267254000186373608,
    100: -99.8095365021877676557,
    1000: -999.864141508943565866,
}
BETA = {
    0: 2.55766393278901943422,
    1: 1.39147038104109517346,
    2: -0.366293400091743993673,
    11: -9.62278548233762084698,
    101: -99.7717741531871046016,
    1001: -999.844426681317062013,
}


@pytest.mark.parametrize("k,value", sorted(ALPHA.items()))
def test_psi_zero_matches_oracle(k, value):
    rec = zr.find_psi_zero(k)
    assert rec.value == pytest.approx(value, abs=1e-10)
    assert rec.bracket_lo < rec.value < rec.bracket_hi


@pytest.mark.parametrize("k,value", sorted(BETA.items()))
def test_psiG_zero_matches_oracle(k, value):
    rec = zr.find_psiG_zero(k)
    assert rec.value == pytest.approx(value, abs=1e-10)
    assert rec.bracket_lo < rec.value < rec.bracket_hi


@pytest.mark.parametrize("k,ref,tol", [
    (0, 1.461632, 5e-6),
    (10, -9.702672541, 5e-9),
    (100, -99.80953650, 5e-8),
    (1000, -999.8641415, 5e-7),
])
def test_psi_zero_reference_values(k, ref, tol):
    assert abs(zr.find_psi_zero(k).value - ref) <= tol


@pytest.mark.parametrize("k,ref,tol", [
    (0, 2.55766, 5e-5),
    (1, 1.39147, 5e-5),
    (2, -0.3662934, 5e-7),
    (101, -99.77177415, 5e-8),
    (1001, -999.8444267, 5e-7),
])
def test_psiG_zero_reference_values(k, ref, tol):
    assert abs(zr.find_psiG_zero(k).value - ref) <= tol


def test_beta11_tabulated_value_is_off_by_more_than_its_last_digit():
    # tabulated -9.622785495; the zero is -9.6227854823 (mpmath, 30 digits)
    value = zr.find_psiG_zero(11).value
    assert abs(value - BETA[11]) < 1e-11
    assert abs(value - (-9.622785495)) == pytest.approx(1.27e-8, rel=0.01)


def test_residual_invariant():
    for fam, finder in ((ZeroFamily.PSI, zr.find_psi_zero), (ZeroFamily.PSI_G, zr.find_psiG_zero)):
        for k in (0, 1, 2, 3, 7, 50, 999, 12345, 999_999):
            rec = finder(k)
            slope = abs(zr.derivative_at(fam, rec.value))
            assert rec.residual <= 1e-10 * max(1.0, slope)
            assert 0 < rec.iterations < zr.MAX_ITER


@given(st.integers(1, 10**6))
@settings(max_examples=60, deadline=None)
def test_psi_containment_property(k):
    rec = zr.find_psi_zero(k)
    assert -k < rec.value < -k + 1
    assert abs(digamma(rec.value)) <= 1e-10 * max(1.0, trigamma(rec.value))


@given(st.integers(2, 10**6))
@settings(max_examples=60, deadline=None)
def test_psiG_containment_property(k):
    rec = zr.find_psiG_zero(k)
    assert -(k - 1) < rec.value < -(k - 2)
    assert abs(psi_G(rec.value)) <= 1e-10 * max(1.0, abs(zr.derivative_at(ZeroFamily.PSI_G, rec.value)))


def test_positive_brackets():
    assert 1 < zr.find_psi_zero(0).value < 2
    assert 2 < zr.find_psiG_zero(0).value < 3
    assert 1 < zr.find_psiG_zero(1).value < 2


def test_negative_index_rejected():
    with pytest.raises(DomainError):
        zr.find_psi_zero(-1)


class TestApproximations:
    def test_psi_arctan_k10(self):
        assert abs(zr.approx_psi_zero(10) - zr.find_psi_zero(10).value) < 0.02

    def test_psi_arctan_k1000(self):
        assert abs(zr.approx_psi_zero(1000) - zr.find_psi_zero(1000).value) < 1e-3

    def test_psi_hermite_formula(self):
        assert zr.approx_psi_zero(10, ApproxForm.HERMITE) == -10 + 1 / math.log(10)

    def test_psiG_arctan_k11(self):
        assert abs(zr.approx_psiG_zero(11) - zr.find_psiG_zero(11).value) < 0.05

    def test_psiG_arctan_k1001(self):
        assert abs(zr.approx_psiG_zero(1001) - zr.find_psiG_zero(1001).value) < 2e-3

    def test_psiG_hermite_formula(self):
        # beta_11 sits in (-10, -9): n = 10
        expected = -10 + 1 / (math.log(10) - 1 - math.log(2 * math.pi) / 20)
        assert zr.approx_psiG_zero(11, "hermite") == pytest.approx(expected, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            zr.approx_psi_zero(1)
        with pytest.raises(DomainError):
            zr.approx_psiG_zero(3)
        with pytest.raises(DomainError):
            zr.approx_psiG_zero(4)  # log 3 - 1 - L/6 < 0
        assert zr.approx_psiG_zero(5) > -4

    def test_arctan_beats_hermite(self):
        for k in (10, 100, 1000):
            true = zr.find_psi_zero(k).value
            err_a = abs(zr.approx_psi_zero(k, "arctan") - true)
            err_h = abs(zr.approx_psi_zero(k, "hermite") - true)
            assert err_a <= err_h


class TestTable:
    def test_small_table(self):
        recs = zr.zero_table(ZeroFamily.PSI, 2)
        assert [r.index for r in recs] == [0, 1, 2]
        assert -1 < recs[1].value < 0
        assert -2 < recs[2].value < -1

    def test_psi_table_last_entry(self):
        recs = zr.zero_table("psi", 1000)
        assert abs(recs[-1].value - (-999.8641415)) <= 5e-7

    def test_psiG_table_last_entry(self):
        recs = zr.zero_table("psig", 11)
        assert recs[-1].value == pytest.approx(BETA[11], abs=1e-10)

    def test_table_matches_single_calls_bitwise(self):
        recs = zr.zero_table("psig", 300)
        for k in (0, 1, 2, 57, 300):
            assert recs[k] == zr.find_psiG_zero(k)

    def test_containment_and_simplicity(self):
        psi = zr.zero_arrays("psi", 5001)
        k = np.arange(1, 5001)
        assert np.all((-k < psi.values[1:]) & (psi.values[1:] < -k + 1))
        assert all(trigamma(v) > 0 for v in psi.values[:200])
        beta = zr.zero_arrays("psig", 5001)
        k = np.arange(2, 5001)
        assert np.all((-(k - 1) < beta.values[2:]) & (beta.values[2:] < -(k - 2)))

    def test_gap_positive_and_decreasing(self):
        vals = zr.zero_arrays("psi", 2001).values
        k = np.arange(5, 2001)
        d = vals[5:] + k
        assert np.all(d > 0)
        assert np.all(np.diff(d) < 0)

    def test_psiG_converges_more_slowly(self):
        # tabulated values first: beta_{k+1} and alpha_k share the interval (-k, -k+1)
        assert -9.622785495 + 10 > -9.702672541 + 10
        assert -99.77177415 + 100 > -99.80953650 + 100
        assert -999.8444267 + 1000 > -999.8641415 + 1000
        for k in (10, 100, 1000):
            assert zr.find_psiG_zero(k + 1).value + k > zr.find_psi_zero(k).value + k

    def test_arrays_read_only(self):
        arr = zr.zero_arrays("psi", 10)
        with pytest.raises(ValueError):
            arr.values[0] = 0.0

    def test_failure_reports_index_and_samples(self):
        ks = np.array([3, 7])
        status = np.array([zr.OK, zr.NO_SIGN_CHANGE])
        with pytest.raises(ZeroFindingError) as info:
            zr._raise_first_failure(ZeroFamily.PSI_G, ks, status)
        assert info.value.index == 7
        assert len(info.value.samples) == 2 * zr.SCAN_DEPTH + 7

    def test_iteration_limit_message(self):
        with pytest.raises(ZeroFindingError, match="iteration limit"):
            zr._raise_first_failure(ZeroFamily.PSI, np.array([4]), np.array([zr.ITER_LIMIT]))


class TestBackends:
    @pytest.mark.parametrize("family", ["psi", "psig"])
    def test_numpy_path_agrees(self, family):
        ks = np.arange(0, 20000)
        fam = ZeroFamily(family).code
        v_np, r_np, lo_np, hi_np, _, st_np = zr._solve_batch_np(fam, ks)
        v, r, lo, hi, _, st = zr.solve_batch(family, ks)
        assert np.all(st_np == zr.OK) and np.all(st == zr.OK)
        np.testing.assert_allclose(v_np, v, rtol=0, atol=1e-12)
        np.testing.assert_array_equal(lo_np, lo)
        np.testing.assert_array_equal(hi_np, hi)

    @pytest.mark.skipif(not USE_NUMBA, reason="thread count only matters under numba")
    def test_thread_count_does_not_change_bits(self):
        ks = np.arange(5000)
        set_threads(1)
        try:
            one = zr.solve_batch("psig", ks)[0]
        finally:
            set_threads(1 << 10)
        many = zr.solve_batch("psig", ks)[0]
        np.testing.assert_array_equal(one, many)


class TestDiskCache:
    def test_cache_hit_is_bit_identical(self, tmp_path, monkeypatch):
        monkeypatch.setenv(zr.CACHE_ENV, str(tmp_path))
        zr.clear_memo()
        try:
            first = zr.zero_arrays("psig", 1500)
            files = list(tmp_path.iterdir())
            assert len(files) == 1 and files[0].name.startswith("psig_kmax1499")
            zr.clear_memo()
            second = zr.zero_arrays("psig", 1500)
            for a, b in zip((first.values, first.residuals, first.bracket_lo, first.bracket_hi,
                             first.iterations),
                            (second.values, second.residuals, second.bracket_lo,
                             second.bracket_hi, second.iterations)):
                np.testing.assert_array_equal(a, b)
            monkeypatch.delenv(zr.CACHE_ENV)
            zr.clear_memo()
            fresh = zr.zero_arrays("psig", 1500)
            np.testing.assert_array_equal(fresh.values, second.values)
        finally:
            zr.clear_memo()


def test_constants_feed_psiG_zero():
    # psi_G(beta_0) = 0 re-derived from the closed form with the module constant c
    b = zr.find_psiG_zero(0).value
    assert CONSTANTS.c - b + (b - 1) * digamma(b) == pytest.approx(0.0, abs=1e-14)
