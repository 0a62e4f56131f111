"""Extrema of the hyperfactorial K(x) = Gamma(x)^(x-1) / G(x).

d/dx log K(x) = log Gamma(x) + x - c with c = (1 + log 2pi)/2, so extrema
are the real roots of ``extremum_equation``.  On the negative axis the
equation log|Gamma(x)| + x = c has a root on each side of every pole -n;
both are returned and the asymptotic Lambert-W location is paired with the
nearer one.
"""
import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import CONSTANTS
from .errors import DomainError, NoRootFoundError, PoleError
from .special import (
    _digamma,
    _log_abs_gamma,
    _near_pole,
    _sinpi,
    lambert_w0,
    log_barnes_g,
    log_gamma,
)

RESIDUAL_TOL = 1e-10
SCAN_POINTS = 1000
SCAN_POLE_RADIUS = 1e-7
# extra samples hugging the pole; roots sit ~ e^(-c-n)/n! away from -n
POLE_OFFSETS = 10.0 ** -np.arange(1, 12)
MAX_ITER = 200


class ExtremumKind(enum.Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class ExtremumRecord:
    n: int
    location: float
    kind: ExtremumKind
    approx_location: Optional[float]
    residual: float
    gap: Optional[float]


def log_K(x):
    """log K(x) = (x - 1) log Gamma(x) - log G(x), x > 0."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_K needs x > 0, got {x!r}")
    return (x - 1.0) * log_gamma(x) - log_barnes_g(x)


def extremum_equation(x):
    """log|Gamma(x)| + x - c; equals d/dx log K(x) for x > 0."""
    x = float(x)
    if _near_pole(x):
        raise PoleError(x)
    return _log_abs_gamma(x) + x - CONSTANTS.c


def _eq(x):
    return _log_abs_gamma(x) + x - CONSTANTS.c


def _eq_prime(x):
    return _digamma(x) + 1.0


def _probe_step(x):
    # never step across the nearest integer: near-pole roots sit closer than 1e-6
    d = abs(x - math.floor(x + 0.5))
    return min(1e-6, 0.25 * d) if d > 0.0 else 1e-6


def _classify(x):
    h = _probe_step(x)
    left, right = _eq(x - h), _eq(x + h)
    if left > 0.0 and right < 0.0:
        return ExtremumKind.MAX
    if left < 0.0 and right > 0.0:
        return ExtremumKind.MIN
    raise NoRootFoundError(f"no sign change of the extremum equation across x={x!r}")


def residual_floor(x):
    """Smallest residual attainable at double precision: 1e-10, or 4 ulp of slope."""
    return max(RESIDUAL_TOL, 4.0 * abs(_eq_prime(x)) * float(np.spacing(abs(x))))


def _polish(a, b):
    """Bisection + Newton on a sign-change interval (a, b)."""
    fa = _eq(a)
    x = 0.5 * (a + b)
    for _ in range(MAX_ITER):
        f = _eq(x)
        df = _eq_prime(x)
        if abs(f) <= RESIDUAL_TOL:
            # a final Newton step and an ulp-level look around
            xn = x - f / df
            if not a <= xn <= b:
                xn = x
            return _best(x, xn, *_neighbours(xn, a, b))
        if (f < 0.0) == (fa < 0.0):
            a, fa = x, f
        else:
            b = x
        if b - a <= 2.0 * np.spacing(abs(x)):
            return _best(a, b, x)
        xn = x - f / df
        x = xn if a < xn < b else 0.5 * (a + b)
    return x


def _neighbours(x, a, b, count=2):
    out = []
    lo = hi = x
    for _ in range(count):
        lo, hi = np.nextafter(lo, -np.inf), np.nextafter(hi, np.inf)
        out += [v for v in (lo, hi) if a <= v <= b]
    return [float(v) for v in out]


def _best(*xs):
    return min(xs, key=lambda v: abs(_eq(v)))


def _record(n, x, approx=None):
    return ExtremumRecord(
        n=n,
        location=x,
        kind=_classify(x),
        approx_location=approx,
        residual=abs(_eq(x)),
        gap=None if approx is None else abs(x - approx),
    )


def find_positive_extrema():
    """(MAX near 0.290957, MIN near 1.53769)."""
    out = []
    for a, b in ((0.05, 1.0), (1.0, 3.0)):
        if (_eq(a) < 0.0) == (_eq(b) < 0.0):
            raise NoRootFoundError(f"extremum equation has no sign change on ({a}, {b})")
        out.append(_record(0, _polish(a, b)))
    return tuple(out)


def lambert_argument(n):
    """a_n (1 + log n) with a_n = e^-c / pi * (-1)^n / n^n, built in log space."""
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    log_abs = -CONSTANTS.c - math.log(math.pi) - n * math.log(n)
    sign = -1.0 if n % 2 else 1.0
    return sign * math.exp(log_abs) * (1.0 + math.log(n))


def approx_negative_extremum(n):
    """-n + W0(a_n (1 + log n)) / (1 + log n)."""
    n = int(n)
    arg = lambert_argument(n)
    return -n + lambert_w0(arg) / (1.0 + math.log(n))


def _scan_grid(n):
    lo, hi = -n - 0.5, -n + 0.5
    uniform = np.linspace(lo, hi, SCAN_POINTS)
    uniform = uniform[np.abs(uniform + n) > SCAN_POLE_RADIUS]
    near = np.concatenate([-n - POLE_OFFSETS, -n + POLE_OFFSETS])
    return np.unique(np.concatenate([uniform, near]))


def find_negative_extrema(n):
    """All extrema in (-n - 1/2, -n + 1/2), each paired with the Lambert-W estimate.

    The scan is 10^3 uniform points plus geometric offsets 10^-1 .. 10^-11
    from the pole at -n; without the latter the roots for n >= 7 (closer
    than 1e-7 to the pole) would be missed.  From n = 10 on the roots lie
    within ~1e-11 of the pole and the search reports failure.
    """
    n = int(n)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    grid = _scan_grid(n)
    vals = np.array([_eq(x) for x in grid])
    roots = []
    for i in range(grid.size - 1):
        if -n > grid[i] and -n < grid[i + 1]:
            continue
        if (vals[i] < 0.0) != (vals[i + 1] < 0.0):
            roots.append(_polish(float(grid[i]), float(grid[i + 1])))
    if not roots:
        raise NoRootFoundError(f"no extremum found near -{n}", scan=list(zip(grid, vals)))
    approx = approx_negative_extremum(n)
    nearest = min(range(len(roots)), key=lambda j: abs(roots[j] - approx))
    return [_record(n, x, approx if j == nearest else None) for j, x in enumerate(roots)]


def paired_extremum(n):
    """The record of ``find_negative_extrema(n)`` carrying the approximation."""
    return next(r for r in find_negative_extrema(n) if r.approx_location is not None)


def verify_treq2(x):
    """|x^x sin(pi x) - e^-c|, the product formed in log space."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"verify_treq2 needs x > 0, got {x!r}")
    s = _sinpi(x)
    if s == 0.0:
        return math.exp(-CONSTANTS.c)
    value = math.copysign(math.exp(x * math.log(x) + math.log(abs(s))), s)
    return abs(value - math.exp(-CONSTANTS.c))
