"""Measurement-fitted link models.

Closed-form expressions for packet error rate, per-packet service-time
moments and packet-loss-rate moments of a retransmitting low-rate wireless
link, plus the transformation that folds losses into an equivalent
lossless arrival process.  All times are milliseconds, payload sizes are
bytes, SNR is dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "PerCoefficients",
    "MomentCoefficients",
    "LinkConfig",
    "EquivalentArrival",
    "packet_error_rate",
    "service_time_mean",
    "service_time_var",
    "plr_mean",
    "plr_var",
    "equivalent_arrival",
]


def _clamp01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


@dataclass(frozen=True)
class PerCoefficients:
    """Coefficients of the packet-error-rate model alpha*l_d*exp(beta*snr)."""

    alpha: float = 0.0128
    beta: float = -0.15

    def __post_init__(self) -> None:
        if self.alpha <= 0.0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.beta >= 0.0:
            raise ValueError(f"beta must be negative, got {self.beta}")


@dataclass(frozen=True)
class MomentCoefficients:
    """Coefficients of the fitted service-time and loss-rate moment models."""

    mean_scale: float = 0.06
    mean_offset: float = 15.0
    mean_exponent: float = -0.12
    var_scale: float = 30.0
    var_exponent: float = -0.15
    plr_mean_scale: float = 1.0 / 100.0
    plr_mean_exponent: float = -0.14
    plr_var_scale: float = 1.0 / 500.0
    plr_var_exponent: float = -0.1

    def __post_init__(self) -> None:
        for name in ("mean_scale", "var_scale", "plr_mean_scale", "plr_var_scale"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        for name in ("mean_exponent", "var_exponent", "plr_mean_exponent", "plr_var_exponent"):
            if getattr(self, name) >= 0.0:
                raise ValueError(f"{name} must be negative")
        if self.mean_offset < 0.0:
            raise ValueError("mean_offset must be non-negative")


@dataclass(frozen=True)
class LinkConfig:
    """Operating point of one link: payload, channel quality and MAC limits."""

    l_d: int = 50          # payload bytes
    snr: float = 20.0      # dB
    n_max_tries: int = 3   # transmission attempts per packet
    d_retry: float = 30.0  # retry delay, ms
    q_max: int = 60        # queue capacity in waiting packets
    t_pit: float = 50.0    # packet inter-arrival time, ms

    def __post_init__(self) -> None:
        if not 0 <= self.l_d <= 114:
            raise ValueError(f"l_d must be in [0, 114] bytes, got {self.l_d}")
        if self.n_max_tries < 1:
            raise ValueError(f"n_max_tries must be >= 1, got {self.n_max_tries}")
        if self.d_retry < 0.0:
            raise ValueError(f"d_retry must be >= 0, got {self.d_retry}")
        if self.q_max < 1:
            raise ValueError(f"q_max must be >= 1, got {self.q_max}")
        if self.t_pit <= 0.0:
            raise ValueError(f"t_pit must be > 0, got {self.t_pit}")


@dataclass(frozen=True)
class EquivalentArrival:
    """Rate and variance of the loss-compensated arrival process."""

    lam: float    # packets/ms
    var_a: float  # variance of the equivalent arrival rate


def packet_error_rate(l_d: float, snr: float, coeffs: PerCoefficients | None = None) -> float:
    """Single-attempt packet error probability, clamped to [0, 1]."""
    c = coeffs if coeffs is not None else PerCoefficients()
    if l_d < 0:
        raise ValueError(f"l_d must be >= 0, got {l_d}")
    return _clamp01(c.alpha * l_d * math.exp(c.beta * snr))


def service_time_mean(cfg: LinkConfig, coeffs: MomentCoefficients | None = None) -> float:
    """Fitted mean per-packet service time E(T) in ms."""
    c = coeffs if coeffs is not None else MomentCoefficients()
    retry = (c.mean_scale / cfg.n_max_tries) * cfg.d_retry * cfg.l_d
    return retry * math.exp(c.mean_exponent * cfg.snr) + c.mean_offset


def service_time_var(cfg: LinkConfig, coeffs: MomentCoefficients | None = None) -> float:
    """Fitted service-time variance Var(T) in ms^2."""
    c = coeffs if coeffs is not None else MomentCoefficients()
    return c.var_scale * cfg.n_max_tries * cfg.d_retry * math.exp(c.var_exponent * cfg.snr)


def plr_mean(l_d: float, snr: float, q_max: int, coeffs: MomentCoefficients | None = None) -> float:
    """Fitted mean packet loss rate, clamped to [0, 1].

    The 1/q_max term accounts for queue overflow losses on top of
    channel losses.
    """
    c = coeffs if coeffs is not None else MomentCoefficients()
    if q_max < 1:
        raise ValueError(f"q_max must be >= 1, got {q_max}")
    return _clamp01(c.plr_mean_scale * l_d * math.exp(c.plr_mean_exponent * snr) + 1.0 / q_max)


def plr_var(l_d: float, snr: float, coeffs: MomentCoefficients | None = None) -> float:
    """Fitted packet-loss-rate variance."""
    c = coeffs if coeffs is not None else MomentCoefficients()
    return c.plr_var_scale * l_d * math.exp(c.plr_var_exponent * snr)


def equivalent_arrival(t_int: float, plr_mean_value: float, plr_var_value: float) -> EquivalentArrival:
    """Fold packet losses into a thinned, lossless arrival process.

    The delivered fraction (1 - PLR) of the offered rate 1/t_int becomes
    the equivalent arrival rate, so lam * t_int + PLR == 1 holds by
    construction.
    """
    if t_int <= 0.0:
        raise ValueError(f"t_int must be > 0, got {t_int}")
    if not 0.0 <= plr_mean_value <= 1.0:
        raise ValueError(f"plr mean must be in [0, 1], got {plr_mean_value}")
    if plr_var_value < 0.0:
        raise ValueError(f"plr variance must be >= 0, got {plr_var_value}")
    lam = (1.0 - plr_mean_value) / t_int
    var_a = plr_var_value / (t_int * t_int)
    return EquivalentArrival(lam=lam, var_a=var_a)
