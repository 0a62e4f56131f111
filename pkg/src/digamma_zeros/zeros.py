"""Real zeros of psi (alpha_k) and psi_G (beta_k).

Indexing follows the tabulated values: alpha_0 in (1, 2) and alpha_k in
(-k, -k+1) for k >= 1; beta_0 in (2, 3), beta_1 in (1, 2) and beta_k in
(-(k-1), -(k-2)) for k >= 2, so beta_2 = -0.366... and beta_11 = -9.62...

Each zero is a pure function of (family, k); batch sweeps run in parallel
under numba and give the same bits as one-at-a-time calls.
"""
import csv
import enum
import math
import os
from dataclasses import dataclass

import numpy as np

from ._accel import BACKEND, USE_NUMBA, njit, prange
from .constants import LOG_2PI
from .errors import DomainError, ZeroFindingError
from .special import (
    _digamma,
    _psi_g,
    _psi_g_prime,
    _trigamma,
    digamma_np,
    psi_g_np,
    psi_g_prime_np,
    trigamma_np,
)

CACHE_ENV = "DIGAMMA_ZEROS_CACHE"

MAX_ITER = 100
STOP_TOL = 1e-11
POLE_OFFSET = 1e-9
SCAN_DEPTH = 8
SETTLE_ULPS = 4

_PSI = 0
_PSI_G = 1

OK = 0
ITER_LIMIT = 1
NO_SIGN_CHANGE = 2
_STATUS_TEXT = {ITER_LIMIT: "iteration limit reached", NO_SIGN_CHANGE: "no sign change in bracket"}


class ZeroFamily(enum.Enum):
    PSI = "psi"
    PSI_G = "psig"

    @property
    def code(self):
        return _PSI if self is ZeroFamily.PSI else _PSI_G


class ApproxForm(enum.Enum):
    ARCTAN = "arctan"
    HERMITE = "hermite"


@dataclass(frozen=True)
class ZeroRecord:
    family: ZeroFamily
    index: int
    value: float
    residual: float
    bracket_lo: float
    bracket_hi: float
    iterations: int


@dataclass(frozen=True)
class ZeroArrays:
    family: ZeroFamily
    values: np.ndarray
    residuals: np.ndarray
    bracket_lo: np.ndarray
    bracket_hi: np.ndarray
    iterations: np.ndarray

    def __len__(self):
        return self.values.shape[0]

    def record(self, k):
        return ZeroRecord(self.family, int(k), float(self.values[k]), float(self.residuals[k]),
                          float(self.bracket_lo[k]), float(self.bracket_hi[k]),
                          int(self.iterations[k]))

    def head(self, count):
        return ZeroArrays(self.family, *(_frozen(a[:count]) for a in (
            self.values, self.residuals, self.bracket_lo, self.bracket_hi, self.iterations)))


# --- asymptotic offsets ------------------------------------------------------

@njit(cache=True)
def _psi_arctan_offset(k):
    return math.atan(math.pi / (math.log(k) - 0.5 / k)) / math.pi


@njit(cache=True)
def _psig_denominator(n):
    return math.log(n) - 1.0 - LOG_2PI / (2.0 * n)


@njit(cache=True)
def _psig_arctan_offset(n):
    return math.atan(math.pi / _psig_denominator(n)) / math.pi


def approx_psi_zero(k, form=ApproxForm.ARCTAN):
    """Asymptotic alpha_k for k >= 2.

    ARCTAN: -k + atan(pi / (log k - 1/(2k))) / pi
    HERMITE: -k + 1 / log k
    """
    k = int(k)
    if k < 2:
        raise DomainError(f"asymptotic formula needs k >= 2, got {k}")
    form = ApproxForm(form)
    if form is ApproxForm.HERMITE:
        return -k + 1.0 / math.log(k)
    return -k + _psi_arctan_offset(float(k))


def approx_psiG_zero(k, form=ApproxForm.ARCTAN):
    """Asymptotic beta_k, written in terms of the left pole -n with n = k - 1."""
    k = int(k)
    if k < 4:
        raise DomainError(f"asymptotic formula needs k >= 4, got {k}")
    form = ApproxForm(form)
    n = float(k - 1)
    den = _psig_denominator(n)
    if den <= 0.0:
        raise DomainError(f"log n - 1 - log(2pi)/(2n) = {den:.3g} <= 0 at k={k}")
    if form is ApproxForm.HERMITE:
        return -n + 1.0 / den
    return -n + _psig_arctan_offset(n)


# --- scalar kernels ------------------------------------------------------------

@njit(cache=True)
def _f(fam, x):
    if fam == _PSI:
        return _digamma(x)
    return _psi_g(x)


@njit(cache=True)
def _df(fam, x):
    if fam == _PSI:
        return _trigamma(x)
    return _psi_g_prime(x)


@njit(cache=True)
def _bracket(fam, k):
    """(left, right, ends_are_poles)"""
    if fam == _PSI:
        if k == 0:
            return 1.0, 2.0, False
        left = -float(k)
    else:
        if k == 0:
            return 2.0, 3.0, False
        if k == 1:
            return 1.0, 2.0, False
        left = -float(k - 1)
    return left, left + 1.0, True


@njit(cache=True)
def _offset(v):
    return max(POLE_OFFSET, 1.8e-15 * abs(v))


@njit(cache=True)
def _settle(fam, a, b, x):
    """Best float within a few ulps of x, staying inside [a, b]."""
    lo = x
    hi = x
    for _ in range(SETTLE_ULPS):
        if lo > a:
            lo = np.nextafter(lo, -np.inf)
        if hi < b:
            hi = np.nextafter(hi, np.inf)
    best = x
    fbest = abs(_f(fam, x))
    y = lo
    while y <= hi:
        fy = abs(_f(fam, y))
        if fy < fbest:
            best = y
            fbest = fy
        y = np.nextafter(y, np.inf)
    return best, fbest


@njit(cache=True)
def _refine(fam, a, b, fa, x):
    """Safeguarded Newton on (a, b) with sign(f(a)) = sign(fa) != sign(f(b))."""
    f = 0.0
    for it in range(1, MAX_ITER + 1):
        f = _f(fam, x)
        df = _df(fam, x)
        if abs(f) <= STOP_TOL * max(1.0, abs(df)):
            # one more step costs little and lands within an ulp or two
            xn = x - f / df
            if not (a <= xn <= b):
                xn = x
            x, f = _settle(fam, a, b, xn)
            return x, f, it, OK
        if (f < 0.0) == (fa < 0.0):
            a = x
        else:
            b = x
        xn = x - f / df
        if xn == x or b - a <= 4.5e-16 * abs(x) + 1e-300:
            x, f = _settle(fam, a, b, x)
            return x, f, it, OK
        if not (a < xn < b):
            xn = 0.5 * (a + b)
        x = xn
    return x, abs(f), MAX_ITER, ITER_LIMIT


@njit(cache=True)
def _scan_points(left, right, poles):
    m = 2 * SCAN_DEPTH + 7
    pts = np.empty(m)
    for j in range(SCAN_DEPTH):
        pts[j] = left + 10.0 ** (-(SCAN_DEPTH - j))
        pts[m - 1 - j] = right - 10.0 ** (-(SCAN_DEPTH - j))
    for i in range(7):
        pts[SCAN_DEPTH + i] = left + 0.2 + 0.1 * i
    return pts


@njit(cache=True)
def _solve_one(fam, k):
    left, right, poles = _bracket(fam, k)
    if fam == _PSI:
        lo = left + _offset(left) if poles else left
        hi = right - _offset(right) if poles else right
        flo = _f(fam, lo)
        fhi = _f(fam, hi)
        if (flo < 0.0) == (fhi < 0.0):
            return math.nan, math.nan, lo, hi, 0, NO_SIGN_CHANGE
        if k >= 2:
            x0 = -k + 1.0 / math.log(k)
        else:
            x0 = 0.5 * (lo + hi)
        w = hi - lo
        x0 = min(max(x0, lo + 0.01 * w), hi - 0.01 * w)
        x, r, it, st = _refine(fam, lo, hi, flo, x0)
        return x, r, lo, hi, it, st
    pts = _scan_points(left, right, poles)
    lo = pts[0]
    hi = pts[pts.shape[0] - 1]
    fprev = _f(fam, pts[0])
    for j in range(1, pts.shape[0]):
        fj = _f(fam, pts[j])
        if (fprev < 0.0) != (fj < 0.0):
            a = pts[j - 1]
            b = pts[j]
            x, r, it, st = _refine(fam, a, b, fprev, 0.5 * (a + b))
            return x, r, lo, hi, it, st
        fprev = fj
    return math.nan, math.nan, lo, hi, 0, NO_SIGN_CHANGE


@njit(parallel=True, cache=True)
def _solve_batch_kernel(fam, ks, val, res, lo, hi, its, status):
    for i in prange(ks.shape[0]):
        v, r, a, b, n, st = _solve_one(fam, ks[i])
        val[i] = v
        res[i] = r
        lo[i] = a
        hi[i] = b
        its[i] = n
        status[i] = st


def _solve_batch_numba(fam, ks):
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    n = ks.shape[0]
    val = np.empty(n)
    res = np.empty(n)
    lo = np.empty(n)
    hi = np.empty(n)
    its = np.zeros(n, dtype=np.int64)
    status = np.zeros(n, dtype=np.int64)
    _solve_batch_kernel(fam, ks, val, res, lo, hi, its, status)
    return val, res, lo, hi, its, status


# --- numpy fallback ------------------------------------------------------------

def _f_np(fam, x):
    return digamma_np(x) if fam == _PSI else psi_g_np(x)


def _df_np(fam, x):
    return trigamma_np(x) if fam == _PSI else psi_g_prime_np(x)


def _brackets_np(fam, ks):
    kf = ks.astype(float)
    if fam == _PSI:
        left = np.where(ks == 0, 1.0, -kf)
        poles = ks >= 1
    else:
        left = np.where(ks == 0, 2.0, np.where(ks == 1, 1.0, -(kf - 1.0)))
        poles = ks >= 2
    return left, left + 1.0, poles


def _settle_np(fam, a, b, x):
    # same candidate order as _settle: x first, then ascending
    lo = [x]
    hi = [x]
    for _ in range(SETTLE_ULPS):
        lo.append(np.where(lo[-1] > a, np.nextafter(lo[-1], -np.inf), lo[-1]))
        hi.append(np.where(hi[-1] < b, np.nextafter(hi[-1], np.inf), hi[-1]))
    cand = np.stack([x] + lo[:0:-1] + [x] + hi[1:])
    fv = np.abs(_f_np(fam, cand.ravel())).reshape(cand.shape)
    j = np.argmin(fv, axis=0)
    cols = np.arange(x.shape[0])
    return cand[j, cols], fv[j, cols]


def _refine_np(fam, a, b, fa, x):
    n = x.shape[0]
    a, b, x = a.copy(), b.copy(), x.copy()
    res = np.full(n, np.nan)
    its = np.full(n, MAX_ITER, dtype=np.int64)
    status = np.full(n, ITER_LIMIT, dtype=np.int64)
    act = np.arange(n)
    for it in range(1, MAX_ITER + 1):
        if act.size == 0:
            break
        xa = x[act]
        f = _f_np(fam, xa)
        df = _df_np(fam, xa)
        res[act] = np.abs(f)
        done = np.abs(f) <= STOP_TOL * np.maximum(1.0, np.abs(df))
        same = (f < 0.0) == (fa[act] < 0.0)
        aa = np.where(same & ~done, xa, a[act])
        bb = np.where(~same & ~done, xa, b[act])
        a[act], b[act] = aa, bb
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = xa - f / df
        stall = ~done & ((xn == xa) | (bb - aa <= 4.5e-16 * np.abs(xa) + 1e-300))
        start = np.where(done & (aa <= xn) & (xn <= bb), xn, xa)
        fin = np.flatnonzero(done | stall)
        if fin.size:
            x[act[fin]], res[act[fin]] = _settle_np(fam, aa[fin], bb[fin], start[fin])
        done |= stall
        its[act[done]] = it
        status[act[done]] = OK
        bad = ~((aa < xn) & (xn < bb))
        xn[bad] = 0.5 * (aa[bad] + bb[bad])
        keep = ~done
        x[act[keep]] = xn[keep]
        act = act[keep]
    return x, res, its, status


def _solve_batch_np(fam, ks):
    ks = np.asarray(ks, dtype=np.int64)
    left, right, poles = _brackets_np(fam, ks)
    n = ks.shape[0]
    status = np.zeros(n, dtype=np.int64)
    if fam == _PSI:
        lo = np.where(poles, left + np.maximum(POLE_OFFSET, 1.8e-15 * np.abs(left)), left)
        hi = np.where(poles, right - np.maximum(POLE_OFFSET, 1.8e-15 * np.abs(right)), right)
        flo = _f_np(fam, lo)
        fhi = _f_np(fam, hi)
        status[(flo < 0.0) == (fhi < 0.0)] = NO_SIGN_CHANGE
        w = hi - lo
        with np.errstate(divide="ignore"):
            x0 = np.where(ks >= 2, -ks + 1.0 / np.log(np.maximum(ks, 2)), 0.5 * (lo + hi))
        x0 = np.minimum(np.maximum(x0, lo + 0.01 * w), hi - 0.01 * w)
        a, b, fa = lo, hi, flo
    else:
        depth = 10.0 ** -np.arange(SCAN_DEPTH, 0, -1)
        inner = 0.2 + 0.1 * np.arange(7)
        pts = np.concatenate([
            left[:, None] + depth[None, :],
            left[:, None] + inner[None, :],
            right[:, None] - depth[None, ::-1],
        ], axis=1)
        lo, hi = pts[:, 0], pts[:, -1]
        fv = _f_np(fam, pts.ravel()).reshape(pts.shape)
        change = (fv[:, :-1] < 0.0) != (fv[:, 1:] < 0.0)
        found = change.any(axis=1)
        j = np.argmax(change, axis=1)
        rows = np.arange(n)
        a, b = pts[rows, j], pts[rows, j + 1]
        fa = fv[rows, j]
        status[~found] = NO_SIGN_CHANGE
        x0 = 0.5 * (a + b)
    ok = status == OK
    val = np.full(n, np.nan)
    res = np.full(n, np.nan)
    its = np.zeros(n, dtype=np.int64)
    if ok.any():
        v, r, i, s = _refine_np(fam, a[ok], b[ok], fa[ok], x0[ok])
        val[ok], res[ok], its[ok], status[ok] = v, r, i, s
    return val, res, lo, hi, its, status


def solve_batch(family, ks):
    """Raw batch solve: (values, residuals, lo, hi, iterations, status)."""
    fam = ZeroFamily(family).code
    if USE_NUMBA:
        return _solve_batch_numba(fam, ks)
    return _solve_batch_np(fam, ks)


# --- public API ----------------------------------------------------------------------

def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def _raise_first_failure(family, ks, status):
    bad = np.flatnonzero(status != OK)
    if bad.size:
        i = int(bad[0])
        k = int(ks[i])
        samples = None
        if status[i] == NO_SIGN_CHANGE and family is ZeroFamily.PSI_G:
            left, right, poles = _bracket(_PSI_G, k)
            pts = _scan_points(left, right, poles)
            samples = [(float(p), float(_psi_g(p))) for p in pts]
        raise ZeroFindingError(family.value, k, _STATUS_TEXT[int(status[i])], samples)


def _compute(family, count):
    ks = np.arange(count, dtype=np.int64)
    val, res, lo, hi, its, status = solve_batch(family, ks)
    _raise_first_failure(family, ks, status)
    return ZeroArrays(family, _frozen(val), _frozen(res), _frozen(lo), _frozen(hi),
                      _frozen(its.astype(np.int64)))


_CSV_FIELDS = ("index", "value", "residual", "bracket_lo", "bracket_hi", "iterations")


def _cache_path(family, k_max):
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return os.path.join(root, f"{family.value}_kmax{k_max}_{BACKEND}.csv")


def _read_cache(path, family):
    cols = {f: [] for f in _CSV_FIELDS}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            for f in _CSV_FIELDS:
                cols[f].append(row[f])
    its = np.array([int(v) for v in cols["iterations"]], dtype=np.int64)
    fl = {f: np.array([float.fromhex(v) for v in cols[f]]) for f in _CSV_FIELDS[1:5]}
    return ZeroArrays(family, _frozen(fl["value"]), _frozen(fl["residual"]),
                      _frozen(fl["bracket_lo"]), _frozen(fl["bracket_hi"]), _frozen(its))


def _write_cache(path, arrays):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    tmp = f"{path}.{os.getpid()}.tmp"
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_CSV_FIELDS)
        for k in range(len(arrays)):
            w.writerow([k] + [float(a[k]).hex() for a in (
                arrays.values, arrays.residuals, arrays.bracket_lo, arrays.bracket_hi)]
                + [int(arrays.iterations[k])])
    os.replace(tmp, path)


_memo = {}


def zero_arrays(family, count):
    """Zeros with indices 0 .. count-1 as read-only numpy arrays.

    Results are memoised per process; a longer table already in memory is
    sliced, which is exact because each zero is computed independently.
    With ``DIGAMMA_ZEROS_CACHE`` set, tables are also persisted as CSV
    (floats stored in hex so a cache hit is bit-identical).
    """
    family = ZeroFamily(family)
    count = int(count)
    if count < 0:
        raise DomainError("count must be non-negative")
    have = _memo.get(family)
    if have is not None and len(have) >= count:
        return have.head(count)
    path = _cache_path(family, count - 1) if count else None
    if path and os.path.exists(path):
        arrays = _read_cache(path, family)
    else:
        arrays = _compute(family, count)
        if path:
            _write_cache(path, arrays)
    if have is None or len(arrays) > len(have):
        _memo[family] = arrays
    return arrays


def clear_memo():
    _memo.clear()


def _find(family, k):
    k = int(k)
    if k < 0:
        raise DomainError(f"zero index must be >= 0, got {k}")
    ks = np.array([k], dtype=np.int64)
    val, res, lo, hi, its, status = solve_batch(family, ks)
    _raise_first_failure(family, ks, status)
    return ZeroRecord(family, k, float(val[0]), float(res[0]), float(lo[0]), float(hi[0]),
                      int(its[0]))


def find_psi_zero(k):
    """alpha_k by safeguarded Newton inside its pole-to-pole bracket."""
    return _find(ZeroFamily.PSI, k)


def find_psiG_zero(k):
    """beta_k: geometric sign-change scan away from both poles, then Newton polish."""
    return _find(ZeroFamily.PSI_G, k)


def zero_table(family, k_max):
    """Records for k = 0 .. k_max, ordered by index."""
    k_max = int(k_max)
    if k_max < 0:
        raise DomainError(f"k_max must be >= 0, got {k_max}")
    arrays = zero_arrays(family, k_max + 1)
    return [arrays.record(k) for k in range(k_max + 1)]


def derivative_at(family, x):
    return float(_df(ZeroFamily(family).code, float(x)))
