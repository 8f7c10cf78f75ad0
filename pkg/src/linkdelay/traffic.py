"""Arrival-process generators for the simulator and bound validation.

Three traffic shapes: strictly periodic, Poisson, and a two-state
Markov On-Off source that emits packets at a constant rate while On.
All rates are packets/ms, times are ms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "PeriodicTraffic",
    "PoissonTraffic",
    "OnOffTraffic",
    "TrafficSpec",
    "generate_arrivals",
]


@dataclass(frozen=True)
class PeriodicTraffic:
    t_pit: float        # packet inter-arrival time, ms
    horizon: int = 20000

    def __post_init__(self) -> None:
        if self.t_pit <= 0.0:
            raise ValueError(f"t_pit must be > 0, got {self.t_pit}")
        _check_horizon(self.horizon)

    @property
    def mean_interarrival(self) -> float:
        return self.t_pit


@dataclass(frozen=True)
class PoissonTraffic:
    rate: float         # packets/ms
    horizon: int = 20000

    def __post_init__(self) -> None:
        if self.rate <= 0.0:
            raise ValueError(f"rate must be > 0, got {self.rate}")
        _check_horizon(self.horizon)

    @property
    def mean_interarrival(self) -> float:
        return 1.0 / self.rate


@dataclass(frozen=True)
class OnOffTraffic:
    """Markov-modulated source: Off->On at mu_off_on, On->Off at lam_on_off.

    While On, one packet is emitted per 1/rate of accumulated On time;
    the emission clock pauses during Off periods, so the long-run packet
    rate is exactly rate * P(On) with P(On) = mu_off_on / (lam_on_off + mu_off_on).
    The source starts in Off at t = 0.
    """

    lam_on_off: float   # 1/ms, leaves On
    mu_off_on: float    # 1/ms, leaves Off
    rate: float         # packets/ms while On
    horizon: int = 20000

    def __post_init__(self) -> None:
        if self.lam_on_off <= 0.0 or self.mu_off_on <= 0.0:
            raise ValueError("state transition rates must be > 0")
        if self.rate <= 0.0:
            raise ValueError(f"rate must be > 0, got {self.rate}")
        _check_horizon(self.horizon)

    @property
    def p_on(self) -> float:
        return self.mu_off_on / (self.lam_on_off + self.mu_off_on)

    @property
    def mean_interarrival(self) -> float:
        return 1.0 / (self.rate * self.p_on)


TrafficSpec = Union[PeriodicTraffic, PoissonTraffic, OnOffTraffic]


def _check_horizon(horizon: int) -> None:
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")


def generate_arrivals(spec: TrafficSpec, rng: np.random.Generator) -> np.ndarray:
    """Arrival instants (ms, non-decreasing) for spec.horizon packets."""
    n = spec.horizon
    if isinstance(spec, PeriodicTraffic):
        return np.arange(n, dtype=float) * spec.t_pit
    if isinstance(spec, PoissonTraffic):
        return np.cumsum(rng.exponential(1.0 / spec.rate, n))
    if isinstance(spec, OnOffTraffic):
        return _onoff_arrivals(spec, rng, n)
    raise TypeError(f"unknown traffic spec {type(spec).__name__}")


def _onoff_arrivals(spec: OnOffTraffic, rng: np.random.Generator, n: int) -> np.ndarray:
    times: list[float] = []
    t = 0.0           # wall clock, chain starts Off
    on_time = 0.0     # accumulated On time
    emitted = 0       # packets emitted so far == floor(on_time * rate)
    period = 1.0 / spec.rate
    while len(times) < n:
        t += rng.exponential(1.0 / spec.mu_off_on)       # Off sojourn
        sojourn = rng.exponential(1.0 / spec.lam_on_off)  # On sojourn
        # emissions at on_time crossings of integer multiples of 1/rate
        end = on_time + sojourn
        k = emitted + 1
        while k * period <= end and len(times) < n:
            times.append(t + (k * period - on_time))
            k += 1
        emitted = k - 1
        on_time = end
        t += sojourn
    return np.asarray(times)
