"""Zero-sum identities and Weierstrass products for psi and psi_G.

A sum over zeros is split as

    exact zeros 0 .. K-1
  + asymptotic (arctan-form) surrogate zeros K .. M-1,  M = max(10^6, 100 K)
  + an integral of the term envelope from M - 1/2 to infinity.

Independently of the surrogate, the containment brackets of the zeros give
a rigorous enclosure of the remainder after K terms; its upper end is
reported as ``tail_bound`` and the distance from the estimate to the far
end of the enclosure as ``tail_error_bound``.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from ._accel import USE_NUMBA, njit
from .constants import CONSTANTS
from .errors import DegenerateError, DomainError
from .special import digamma, log_gamma, log_abs_gamma, psi_G, trigamma
from .summation import compensated_sum
from .zeros import ZeroFamily, _psi_arctan_offset, _psig_arctan_offset, zero_arrays

MIN_TAIL_K = 50
MIN_SURROGATE_M = 10**6

# term codes
_SHIFT = 0      # 1/(x^2 - x)
_QUAD = 1       # 1/x^2
_MINUS1 = 2     # 1/(x^2 - 1)
_QUARTIC = 3    # 1/x^4
_LOGDERIV = 4   # 1/(x^2 - x z)


class IdentityId(enum.Enum):
    PSI_QUAD_SHIFT = "psi-quad-shift"
    PSI_QUAD = "psi-quad"
    PSI_QUAD_MINUS1 = "psi-quad-minus1"
    PSI_QUARTIC = "psi-quartic"
    PSIG_QUAD = "psig-quad"
    PSIG_QUARTIC = "psig-quartic"

    @property
    def family(self):
        if self in (IdentityId.PSIG_QUAD, IdentityId.PSIG_QUARTIC):
            return ZeroFamily.PSI_G
        return ZeroFamily.PSI

    @property
    def term_code(self):
        return _TERM_CODES[self]


_TERM_CODES = {
    IdentityId.PSI_QUAD_SHIFT: _SHIFT,
    IdentityId.PSI_QUAD: _QUAD,
    IdentityId.PSI_QUAD_MINUS1: _MINUS1,
    IdentityId.PSI_QUARTIC: _QUARTIC,
    IdentityId.PSIG_QUAD: _QUAD,
    IdentityId.PSIG_QUARTIC: _QUARTIC,
}


@dataclass(frozen=True)
class SeriesResult:
    id: IdentityId
    terms_used: int
    partial_sum: float
    tail_estimate: float
    tail_bound: float
    tail_error_bound: float
    total: float
    closed_form: float
    abs_error: float
    rel_error: float


def _psig_quartic(g, pi, z3, L):
    return (2 * z3 * (L + 1) + g**4 + pi**4 / 9 + pi**2 * (L**2 + 3) / 6 + 2 * g**3 * (L + 1)
            + g * (24 * z3 + 3 + 4 * pi**2 * (L + 1) + 3 * L * (L**2 - L + 7)) / 6
            + g**2 * (9 * L**2 + 6 * L + 4 * pi**2 + 21) / 6
            + (L**4 - 4 * L**3 + 22 * L**2 - 36 * L + 49) / 16)


def closed_form(identity, constants=CONSTANTS):
    """Right-hand side of a zero-sum identity, from the constants alone."""
    identity = IdentityId(identity)
    g, pi, z3, L = constants.gamma, constants.pi, constants.zeta3, constants.L
    if identity is IdentityId.PSI_QUAD_SHIFT:
        return g + pi**2 / (6 * g)
    if identity is IdentityId.PSI_QUAD:
        return g**2 + pi**2 / 2
    if identity is IdentityId.PSI_QUAD_MINUS1:
        return g / 2 + pi**2 / (12 * g) - 1
    if identity is IdentityId.PSI_QUARTIC:
        return g**4 + 2 * g**2 * pi**2 / 3 + pi**4 / 9 + 4 * g * z3
    if identity is IdentityId.PSIG_QUAD:
        return 9 / 4 + pi**2 / 2 + g * (1 + g + L) - L / 2 + L**2 / 4
    return _psig_quartic(g, pi, z3, L)


# --- term kernels ---------------------------------------------------------------

@njit(cache=True)
def _term(code, x, z):
    xx = x * x
    if code == _SHIFT:
        return 1.0 / (xx - x)
    if code == _QUAD:
        return 1.0 / xx
    if code == _MINUS1:
        return 1.0 / (xx - 1.0)
    if code == _QUARTIC:
        u = 1.0 / xx
        return u * u
    return 1.0 / (xx - x * z)


@njit(cache=True)
def _envelope_tail(code, t, z):
    """Integral of the term over |zero| in (t, inf)."""
    if code == _SHIFT:
        return math.log1p(1.0 / t)
    if code == _QUAD:
        return 1.0 / t
    if code == _MINUS1:
        return 0.5 * math.log1p(2.0 / (t - 1.0))
    if code == _QUARTIC:
        return 1.0 / (3.0 * t * t * t)
    if z == 0.0:
        return 1.0 / t
    return math.log1p(z / t) / z


@njit(cache=True)
def _surrogate_abs(fam, k):
    if fam == 0:
        return k - _psi_arctan_offset(k)
    n = k - 1.0
    return n - _psig_arctan_offset(n)


@njit(cache=True)
def _surrogate_sum_kernel(fam, code, z, k0, k1):
    s = 0.0
    comp = 0.0
    for k in range(k0, k1):
        v = _term(code, -_surrogate_abs(fam, float(k)), z)
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
    return s + comp


def _surrogate_sum_np(fam, code, z, k0, k1, chunk=1 << 20):
    parts = []
    for start in range(k0, k1, chunk):
        k = np.arange(start, min(start + chunk, k1), dtype=float)
        if fam == 0:
            t = k - np.arctan(np.pi / (np.log(k) - 0.5 / k)) / np.pi
        else:
            n = k - 1.0
            den = np.log(n) - 1.0 - CONSTANTS.L / (2.0 * n)
            t = n - np.arctan(np.pi / den) / np.pi
        parts.append(_terms_np(code, -t, z))
    return math.fsum(np.concatenate(parts)) if parts else 0.0


def _terms_np(code, x, z=0.0):
    x = np.asarray(x, dtype=float)
    xx = x * x
    if code == _SHIFT:
        return 1.0 / (xx - x)
    if code == _QUAD:
        return 1.0 / xx
    if code == _MINUS1:
        return 1.0 / (xx - 1.0)
    if code == _QUARTIC:
        u = 1.0 / xx
        return u * u
    return 1.0 / (xx - x * z)


def _surrogate_sum(fam, code, z, k0, k1):
    if USE_NUMBA:
        return float(_surrogate_sum_kernel(fam, code, float(z), int(k0), int(k1)))
    return _surrogate_sum_np(fam, code, float(z), int(k0), int(k1))


def _surrogate_tail(family, code, K, z=0.0):
    fam = ZeroFamily(family).code
    M = max(MIN_SURROGATE_M, 100 * K)
    head = _surrogate_sum(fam, code, z, K, M)
    t0 = _surrogate_abs(fam, float(M)) - 0.5
    return head + float(_envelope_tail(code, t0, z))


def _check_tail_k(K):
    K = int(K)
    if K < MIN_TAIL_K:
        raise DomainError(f"tail estimation needs K >= {MIN_TAIL_K}, got {K}")
    return K


# --- public operations ------------------------------------------------------------

def partial_sum(identity, K):
    """Sum of the identity's term over the first K exact zeros."""
    identity = IdentityId(identity)
    K = int(K)
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    zs = zero_arrays(identity.family, K).values
    return compensated_sum(_terms_np(identity.term_code, zs))


def tail_estimate(identity, K):
    identity = IdentityId(identity)
    K = _check_tail_k(K)
    return _surrogate_tail(identity.family, identity.term_code, K)


def tail_enclosure(identity, K):
    """Rigorous (lower, upper) bounds on the remainder after K exact zeros.

    Uses only the brackets |alpha_k| in (k-1, k) and |beta_k| in (k-2, k-1)
    together with monotonicity of the terms in |zero|.
    """
    identity = IdentityId(identity)
    K = _check_tail_k(K)
    code = identity.term_code
    s = 1 if identity.family is ZeroFamily.PSI else 2
    q_lo = float(K - s + 1)
    q_hi = float(K - s)
    lower = float(_envelope_tail(code, q_lo, 0.0))
    upper = float(_term(code, -q_hi, 0.0) + _envelope_tail(code, q_hi, 0.0))
    return lower, upper


def verify_identity(identity, K, constants=CONSTANTS):
    identity = IdentityId(identity)
    K = _check_tail_k(K)
    part = partial_sum(identity, K)
    tail = tail_estimate(identity, K)
    lower, upper = tail_enclosure(identity, K)
    total = part + tail
    cf = closed_form(identity, constants)
    err = abs(total - cf)
    return SeriesResult(
        id=identity,
        terms_used=K,
        partial_sum=part,
        tail_estimate=tail,
        tail_bound=upper,
        tail_error_bound=max(upper - tail, tail - lower),
        total=total,
        closed_form=cf,
        abs_error=err,
        rel_error=err / abs(cf),
    )


def _log_product(zs, z):
    if np.any(np.abs(z - zs) <= 1e-6):
        raise DegenerateError(f"z={z!r} coincides with a zero used in the product")
    u = z / zs
    one_minus = 1.0 - u
    negatives = int(np.count_nonzero(one_minus < 0.0))
    small = np.abs(u) < 0.5
    logs = np.empty_like(u)
    logs[small] = np.log1p(-u[small])
    logs[~small] = np.log(np.abs(one_minus[~small]))
    return compensated_sum(logs + u), (-1.0 if negatives % 2 else 1.0)


def _check_z(z, K):
    z = float(z)
    if abs(z) > 50.0:
        raise DomainError(f"|z| must be <= 50, got {z!r}")
    K = int(K)
    if K < 0:
        raise DomainError(f"K must be >= 0, got {K}")
    return z, K


def weierstrass_psi(z, K):
    """Truncated product -exp(2 gamma z) prod_{k<K} (1 - z/alpha_k) exp(z/alpha_k)."""
    z, K = _check_z(z, K)
    logp, sign = _log_product(zero_arrays(ZeroFamily.PSI, K).values, z)
    return -sign * math.exp(2.0 * CONSTANTS.gamma * z + logp)


def weierstrass_psiG(z, K):
    """Truncated product for psi_G/Gamma with prefactor exp((2 gamma + L/2 - 1/2) z)."""
    z, K = _check_z(z, K)
    logp, sign = _log_product(zero_arrays(ZeroFamily.PSI_G, K).values, z)
    slope = 2.0 * CONSTANTS.gamma + 0.5 * CONSTANTS.L - 0.5
    return sign * math.exp(slope * z + logp)


def psi_over_gamma(z):
    """psi(z)/Gamma(z) from the kernels (zero at the poles of Gamma)."""
    return _over_gamma(digamma, z, -1.0)


def psiG_over_gamma(z):
    return _over_gamma(psi_G, z, 1.0)


def _over_gamma(fn, z, limit):
    z = float(z)
    if z <= 0.0 and z == math.floor(z):
        # both have simple poles; only z = 0 gives a non-zero limit
        return limit if z == 0.0 else 0.0
    if z > 0.0:
        return fn(z) * math.exp(-log_gamma(z))
    n = math.floor(z)
    gamma_sign = 1.0 if n % 2 == 0 else -1.0
    return gamma_sign * fn(z) * math.exp(-log_abs_gamma(z))


def check_logderiv_relation(z, K):
    """|psi'(z)/psi(z) - psi(z) - (2 gamma - z S)| with S the zero sum of 1/(a^2 - a z).

    S uses K exact zeros plus the surrogate tail.
    """
    z = float(z)
    K = _check_tail_k(K)
    psi = digamma(z)
    if abs(psi) < 1e-8:
        raise DegenerateError(f"psi({z!r}) is too close to zero")
    zs = zero_arrays(ZeroFamily.PSI, K).values
    if np.any(np.abs(zs - z) <= 1e-6):
        raise DegenerateError(f"z={z!r} coincides with a zero of psi")
    S = compensated_sum(_terms_np(_LOGDERIV, zs, z)) + _surrogate_tail(ZeroFamily.PSI, _LOGDERIV, K, z)
    lhs = trigamma(z) / psi - psi
    return abs(lhs - (2.0 * CONSTANTS.gamma - z * S))
