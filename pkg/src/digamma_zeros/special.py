"""Real-line kernels for psi, psi_1, log Gamma, log G, psi_G and Lambert W0.

Every function comes in two layers.  The ``_name`` kernels are jitted when
numba is active, return NaN instead of raising, and are what the batch
root-finders call.  The public wrappers validate arguments and raise.

Asymptotic tails use Bernoulli numbers B_2 .. B_16 (8 terms) after the
argument has been shifted to at least 10 by recurrence; the first omitted
term is below 5e-17 relative there.  log G is shifted to at least 20 and
uses 5 correction terms.
"""
import math

import numpy as np

from ._accel import njit
from .constants import C_EXTREMUM, HALF_LOG_2PI, LOG_2PI, ZETA_PRIME_M1
from .errors import DomainError, PoleError

POLE_RADIUS = 1e-12
SHIFT = 10.0
BARNES_SHIFT = 20.0

# B_2, B_4, ..., B_16
_B = np.array([1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510])
_N2 = 2.0 * np.arange(1, 9)
# psi(x) = log x - 1/(2x) - sum B_2n / (2n x^2n)
_PSI_COEF = _B / _N2
# psi_1(x) = 1/x + 1/(2x^2) + sum B_2n / x^(2n+1)
_TRI_COEF = _B.copy()
# log Gamma tail: sum B_2n / (2n (2n-1) x^(2n-1))
_LGAM_COEF = _B / (_N2 * (_N2 - 1.0))
# log G(z+1) tail: sum_{k>=1} B_(2k+2) / (4k(k+1) z^2k)
_K = np.arange(1, 6)
_BARNES_COEF = _B[1:6] / (4.0 * _K * (_K + 1.0))

_INV_E_HI = 0.36787944117144233
_INV_E_LO = -1.2428753672788363e-17
_E = math.e


@njit(cache=True)
def _horner(coef, z):
    s = 0.0
    for i in range(coef.shape[0] - 1, -1, -1):
        s = s * z + coef[i]
    return s


@njit(cache=True)
def _near_pole(x):
    if x > 0.5:
        return False
    n = math.floor(x + 0.5)
    return n <= 0.0 and abs(x - n) < POLE_RADIUS


@njit(cache=True)
def _reduce(x):
    """x - nearest integer, exact for the arguments used here."""
    return x - math.floor(x + 0.5)


@njit(cache=True)
def _sinpi(x):
    n = math.floor(x + 0.5)
    s = math.sin(math.pi * (x - n))
    if n % 2.0 != 0.0:
        return -s
    return s


@njit(cache=True)
def _cotpi(x):
    r = math.pi * _reduce(x)
    return math.cos(r) / math.sin(r)


@njit(cache=True)
def _digamma_pos(x):
    acc = 0.0
    while x < SHIFT:
        acc += 1.0 / x
        x += 1.0
    z = 1.0 / (x * x)
    return math.log(x) - 0.5 / x - z * _horner(_PSI_COEF, z) - acc


@njit(cache=True)
def _digamma(x):
    if _near_pole(x):
        return math.nan
    if x < 0.0:
        return _digamma_pos(1.0 - x) - math.pi * _cotpi(x)
    return _digamma_pos(x)


@njit(cache=True)
def _trigamma_pos(x):
    acc = 0.0
    while x < SHIFT:
        acc += 1.0 / (x * x)
        x += 1.0
    z = 1.0 / (x * x)
    return acc + 1.0 / x + 0.5 * z + z * _horner(_TRI_COEF, z) / x


@njit(cache=True)
def _trigamma(x):
    if _near_pole(x):
        return math.nan
    if x < 0.0:
        s = math.sin(math.pi * _reduce(x))
        return math.pi * math.pi / (s * s) - _trigamma_pos(1.0 - x)
    return _trigamma_pos(x)


@njit(cache=True)
def _lgamma_pos(x):
    p = 1.0
    while x < SHIFT:
        p *= x
        x += 1.0
    z = 1.0 / (x * x)
    tail = _horner(_LGAM_COEF, z) / x
    return (x - 0.5) * math.log(x) - x + HALF_LOG_2PI + tail - math.log(p)


@njit(cache=True)
def _log_abs_gamma(x):
    if _near_pole(x):
        return math.nan
    if x > 0.0:
        return _lgamma_pos(x)
    s = abs(math.sin(math.pi * _reduce(x)))
    return math.log(math.pi) - math.log(s) - _lgamma_pos(1.0 - x)


@njit(cache=True)
def _log_barnes_g(x):
    # log G(x) = log G(x + n) - sum_{j<n} log Gamma(x + j)
    s = 0.0
    comp = 0.0
    while x < BARNES_SHIFT:
        v = _lgamma_pos(x)
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
        x += 1.0
    z = x - 1.0
    lz = math.log(z)
    w = 1.0 / (z * z)
    asym = (0.5 * z * z * lz - 0.75 * z * z + 0.5 * z * LOG_2PI - lz / 12.0
            + ZETA_PRIME_M1 + w * _horner(_BARNES_COEF, w))
    return asym - (s + comp)


@njit(cache=True)
def _psi_g(x):
    return C_EXTREMUM - x + (x - 1.0) * _digamma(x)


@njit(cache=True)
def _psi_g_prime(x):
    return -1.0 + _digamma(x) + (x - 1.0) * _trigamma(x)


@njit(cache=True)
def _lambert_w0(x):
    d = (x + _INV_E_HI) + _INV_E_LO
    if d < -1e-16:
        return math.nan
    if d <= 0.0:
        return -1.0
    if x < -0.25:
        # branch-point series in p = sqrt(2(ex + 1))
        p = math.sqrt(2.0 * _E * d)
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * 43.0 / 540.0)))
    elif x <= _E:
        w = math.log1p(x)
    else:
        l1 = math.log(x)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    for _ in range(64):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if f == 0.0 or wp1 == 0.0:
            break
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 4e-16 * (1.0 + abs(w)):
            break
    return w


# --- vectorised numpy twins (fallback path for batch routines) -------------

def _horner_np(coef, z):
    s = np.zeros_like(z)
    for c in coef[::-1]:
        s = s * z + c
    return s


def _near_pole_np(x):
    n = np.floor(x + 0.5)
    return (n <= 0.0) & (np.abs(x - n) < POLE_RADIUS)


def _digamma_pos_np(x):
    x = np.array(x, dtype=float, copy=True)
    acc = np.zeros_like(x)
    m = x < SHIFT
    while m.any():
        acc[m] += 1.0 / x[m]
        x[m] += 1.0
        m = x < SHIFT
    z = 1.0 / (x * x)
    return np.log(x) - 0.5 / x - z * _horner_np(_PSI_COEF, z) - acc


def _trigamma_pos_np(x):
    x = np.array(x, dtype=float, copy=True)
    acc = np.zeros_like(x)
    m = x < SHIFT
    while m.any():
        acc[m] += 1.0 / (x[m] * x[m])
        x[m] += 1.0
        m = x < SHIFT
    z = 1.0 / (x * x)
    return acc + 1.0 / x + 0.5 * z + z * _horner_np(_TRI_COEF, z) / x


def digamma_np(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    neg = x < 0.0
    pos = ~neg
    out[pos] = _digamma_pos_np(x[pos])
    xn = x[neg]
    r = np.pi * (xn - np.floor(xn + 0.5))
    out[neg] = _digamma_pos_np(1.0 - xn) - np.pi * np.cos(r) / np.sin(r)
    out[_near_pole_np(x)] = np.nan
    return out


def trigamma_np(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    neg = x < 0.0
    pos = ~neg
    out[pos] = _trigamma_pos_np(x[pos])
    xn = x[neg]
    s = np.sin(np.pi * (xn - np.floor(xn + 0.5)))
    out[neg] = np.pi * np.pi / (s * s) - _trigamma_pos_np(1.0 - xn)
    out[_near_pole_np(x)] = np.nan
    return out


def psi_g_np(x):
    x = np.asarray(x, dtype=float)
    return C_EXTREMUM - x + (x - 1.0) * digamma_np(x)


def psi_g_prime_np(x):
    x = np.asarray(x, dtype=float)
    return -1.0 + digamma_np(x) + (x - 1.0) * trigamma_np(x)


# --- public scalar API -----------------------------------------------------

def _check_pole(x):
    x = float(x)
    if _near_pole(x):
        raise PoleError(x)
    return x


def digamma(x):
    """psi(x) for real x away from the non-positive integers."""
    return _digamma(_check_pole(x))


def trigamma(x):
    """psi_1(x) = psi'(x); positive everywhere on the real line."""
    return _trigamma(_check_pole(x))


def log_gamma(x):
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma needs x > 0, got {x!r}; use log_abs_gamma")
    return _lgamma_pos(x)


def log_abs_gamma(x):
    """log|Gamma(x)|, by reflection for negative x."""
    return _log_abs_gamma(_check_pole(x))


def psi_G(x):
    """Logarithmic derivative of the Barnes G function.

    Closed form (1 + log 2pi)/2 - x + (x - 1) psi(x).
    """
    return _psi_g(_check_pole(x))


def psi_G_prime(x):
    return _psi_g_prime(_check_pole(x))


def log_barnes_g(x):
    """log G(x) for x > 0.

    Recurrence log G(z+1) = log Gamma(z) + log G(z) moves the argument to
    z + 1 >= 20, where

        log G(z+1) = z^2/2 log z - 3z^2/4 + z/2 log 2pi - log(z)/12
                     + zeta'(-1) + sum_k B_{2k+2} / (4k(k+1) z^{2k}).

    Differentiating gives psi_G(1+z) = log(2pi)/2 - z + z log z + O(1/z).
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_barnes_g needs x > 0, got {x!r}")
    return _log_barnes_g(x)


def lambert_w0(x):
    """Principal branch of Lambert W, by Halley iteration.

    Starting guesses: the branch-point series for x < -1/4, log1p(x) up to
    x = e, and log x - log log x + log log x / log x beyond.
    """
    x = float(x)
    w = _lambert_w0(x)
    if math.isnan(w):
        raise DomainError(f"lambert_w0 needs x >= -1/e, got {x!r}")
    return w
