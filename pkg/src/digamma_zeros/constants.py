import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Constants:
    gamma: float
    pi: float
    zeta3: float
    L: float
    c: float


def _make():
    gamma = 0.57721566490153286060651209008240243
    pi = math.pi
    L = math.log(2.0 * pi)
    return Constants(
        gamma=gamma,
        pi=pi,
        zeta3=1.20205690315959428539973816151144999,
        L=L,
        c=0.5 * (1.0 + L),
    )


CONSTANTS = _make()

# module-level copies so jitted kernels can fold them in as literals
EULER_GAMMA = CONSTANTS.gamma
LOG_2PI = CONSTANTS.L
HALF_LOG_2PI = 0.5 * CONSTANTS.L
C_EXTREMUM = CONSTANTS.c
# zeta'(-1) = 1/12 - log(Glaisher's constant)
ZETA_PRIME_M1 = -0.16542114370045092921391966024278064
