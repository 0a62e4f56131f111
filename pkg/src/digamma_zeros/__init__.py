"""Zeros of psi and psi_G, their Weierstrass products and zero-sum identities,
and the extrema of the hyperfactorial K(x)."""
from ._accel import BACKEND, set_threads
from .constants import CONSTANTS, Constants
from .errors import (
    DegenerateError,
    DigammaZerosError,
    DomainError,
    NoRootFoundError,
    PoleError,
    ZeroFindingError,
)
from .hyperfactorial import (
    ExtremumKind,
    ExtremumRecord,
    approx_negative_extremum,
    extremum_equation,
    find_negative_extrema,
    find_positive_extrema,
    log_K,
    verify_treq2,
)
from .series import (
    IdentityId,
    SeriesResult,
    check_logderiv_relation,
    closed_form,
    partial_sum,
    tail_estimate,
    verify_identity,
    weierstrass_psi,
    weierstrass_psiG,
)
from .special import (
    digamma,
    lambert_w0,
    log_abs_gamma,
    log_barnes_g,
    log_gamma,
    psi_G,
    trigamma,
)
from .zeros import (
    ApproxForm,
    ZeroFamily,
    ZeroRecord,
    approx_psi_zero,
    approx_psiG_zero,
    find_psi_zero,
    find_psiG_zero,
    zero_table,
)

__version__ = "0.1.0"
