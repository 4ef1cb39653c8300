"""SINR success test and the conservative transmission-range bound."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, ParameterError

DEFAULT_BETA = 0.15


class Sense(str, Enum):
    MIN = "MIN"
    MAX = "MAX"
    POINT = "POINT"


@dataclass(frozen=True)
class RadioParams:
    """Homogeneous radio parameters shared by every vehicle.

    ``pathloss_exp`` is the signal decay exponent (2 in free space); it is
    unrelated to the Euler-Mascheroni constant in :mod:`v2vint.specfun`.
    """

    power: float = 1.0
    pathloss_exp: float = 2.0
    noise: float = 0.0
    beta: float = DEFAULT_BETA

    def __post_init__(self):
        if not self.power > 0:
            raise ParameterError(f"power must be > 0, got {self.power}")
        if not 2.0 <= self.pathloss_exp <= 6.0:
            raise ParameterError(f"path-loss exponent must lie in [2, 6], got {self.pathloss_exp}")
        if not self.noise >= 0:
            raise ParameterError(f"noise must be >= 0, got {self.noise}")
        if not self.beta > 0:
            raise ParameterError(f"beta must be > 0, got {self.beta}")


@dataclass(frozen=True)
class SinrResult:
    sinr: float
    success: bool
    unbounded: bool = False


@dataclass(frozen=True)
class RangeResult:
    r_b_ft: float
    lambda_used: float
    beta_used: float
    optimization_sense: Sense = Sense.POINT
    unbounded: bool = False

    @property
    def r_naive_ft(self) -> float:
        return naive_range(self.beta_used, self.lambda_used)


def sinr_check(radio: RadioParams, tx_distance_ft: float, interference: float) -> SinrResult:
    """SINR at the receiver for a transmitter ``tx_distance_ft`` away.

    ``interference`` is the unit-power surrogate (sum of x**-gamma over the
    interferers); every vehicle transmits with ``radio.power``.
    """
    if not tx_distance_ft > 0:
        raise DomainError(f"transmission distance must be > 0, got {tx_distance_ft}")
    if interference < 0:
        raise DomainError(f"interference must be >= 0, got {interference}")
    signal = radio.power * tx_distance_ft ** (-radio.pathloss_exp)
    denom = radio.noise + radio.power * interference
    if denom == 0:
        return SinrResult(math.inf, True, unbounded=True)
    sinr = signal / denom
    return SinrResult(sinr, sinr >= radio.beta)


def transmission_range_bound(beta: float, lam: float, sense: Sense = Sense.POINT) -> RangeResult:
    """r_b = sqrt((beta + 1) / beta / lam)."""
    if not beta > 0:
        raise DomainError(f"beta must be > 0, got {beta}")
    if lam < 0:
        raise DomainError(f"interference must be >= 0, got {lam}")
    if lam == 0:
        return RangeResult(math.inf, 0.0, beta, Sense(sense), unbounded=True)
    # dividing (beta+1)/beta by lam (not multiplying by 1/lam) keeps r_b == 1.0
    # exact when lam == (beta+1)/beta
    return RangeResult(math.sqrt(((beta + 1.0) / beta) / lam), lam, beta, Sense(sense))


def naive_range(beta: float, lam: float) -> float:
    """Radius at which P r**-2 / (P lam) == beta with zero noise: (beta*lam)**-0.5."""
    if not beta > 0 or not lam > 0:
        raise DomainError("need beta > 0 and lambda > 0")
    return 1.0 / math.sqrt(beta * lam)
