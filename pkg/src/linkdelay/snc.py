"""Stochastic delay bounds via min-plus envelopes.

Arrival processes get stochastic arrival curves (rate envelope alpha plus
an exponential or deterministic violation bound f); the retransmitting
server gets a latency-free rate service curve derived from the
service-time MGF.  Combining the two yields, for each target delay, a
tail-probability bound obtained from the Stieltjes convolution of the two
violation bounds, optimised over the free exponent theta.

Traffic volume is measured in bits; a packet contributes packet_bits at
its arrival instant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .service_time import ServiceDistribution, _MGF_EXPONENT_LIMIT
from .traffic import OnOffTraffic, PeriodicTraffic, PoissonTraffic, TrafficSpec

__all__ = [
    "ArrivalCurve",
    "ServiceCurve",
    "DelayBound",
    "DelayCcdf",
    "StabilityViolation",
    "Overload",
    "periodic_arrival_curve",
    "poisson_arrival_curve",
    "onoff_arrival_curve",
    "arrival_curve_for",
    "service_curve",
    "horizontal_distance",
    "convolve_exponential_bounds",
    "delay_bound_at",
    "default_theta_grid",
    "optimize_delay_ccdf",
]


class StabilityViolation(Exception):
    """Arrival envelope rate exceeds the service curve rate."""

    def __init__(self, arrival_rate: float, service_rate: float):
        self.arrival_rate = arrival_rate
        self.service_rate = service_rate
        super().__init__(
            f"arrival rate {arrival_rate:.6g} bits/ms exceeds service rate "
            f"{service_rate:.6g} bits/ms"
        )


class Overload(Exception):
    """No exponent in the search grid satisfies the stability constraint."""


@dataclass(frozen=True)
class ArrivalCurve:
    """Affine envelope rate*t + burst with violation bound exp(-decay*x).

    decay None means the envelope is deterministic (never violated).
    """

    kind: str
    rate: float           # bits/ms
    burst: float          # bits
    decay: float | None   # 1/bits, None = deterministic
    theta: float | None
    packet_bits: float

    @property
    def deterministic(self) -> bool:
        return self.decay is None


@dataclass(frozen=True)
class ServiceCurve:
    """Rate service curve R*t with violation bound exp(-theta*x/R)."""

    rate: float   # bits/ms
    theta: float  # 1/ms

    @property
    def decay(self) -> float:
        return self.theta / self.rate


@dataclass(frozen=True)
class DelayBound:
    delay: float          # ms
    prob: float           # bound on P{delay exceeded}
    theta: float | None   # optimal exponent, None when only the vacuous bound holds


@dataclass(frozen=True)
class DelayCcdf:
    """Optimised delay tail bound on a grid of target delays."""

    points: tuple[DelayBound, ...]
    kind: str
    packet_bits: float

    def delays(self) -> np.ndarray:
        return np.array([p.delay for p in self.points])

    def probs(self) -> np.ndarray:
        return np.array([p.prob for p in self.points])


def periodic_arrival_curve(packet_bits: float, period: float) -> ArrivalCurve:
    """Deterministic envelope of a periodic source: one packet burst plus mean rate."""
    if packet_bits <= 0.0:
        raise ValueError(f"packet_bits must be > 0, got {packet_bits}")
    if period <= 0.0:
        raise ValueError(f"period must be > 0, got {period}")
    return ArrivalCurve(
        kind="periodic",
        rate=packet_bits / period,
        burst=packet_bits,
        decay=None,
        theta=None,
        packet_bits=packet_bits,
    )


def poisson_arrival_curve(rate: float, packet_bits: float, theta: float) -> ArrivalCurve:
    """Chernoff envelope of Poisson packet arrivals at the given exponent.

    The envelope rate (rate/theta) * (exp(theta*packet_bits) - 1) already
    accounts for whole packets arriving at single instants, so no burst
    term is needed.
    """
    if rate <= 0.0:
        raise ValueError(f"rate must be > 0, got {rate}")
    if packet_bits <= 0.0:
        raise ValueError(f"packet_bits must be > 0, got {packet_bits}")
    if theta <= 0.0:
        raise ValueError(f"theta must be > 0, got {theta}")
    return ArrivalCurve(
        kind="poisson",
        rate=rate * math.expm1(theta * packet_bits) / theta,
        burst=0.0,
        decay=theta,
        theta=theta,
        packet_bits=packet_bits,
    )


def onoff_arrival_curve(
    lam: float,
    mu: float,
    peak_rate: float,
    theta: float,
    packet_bits: float,
) -> ArrivalCurve:
    """Effective-bandwidth envelope of a two-state On-Off fluid source.

    lam is the On->Off transition rate, mu the Off->On rate, peak_rate r
    the emission rate while On (bits/ms).  The envelope rate is the
    Perron root of the exponentially tilted generator,

        rate(theta) = (theta*r - lam - mu
                       + sqrt((theta*r - lam + mu)^2 + 4*lam*mu)) / (2*theta),

    which runs from the mean rate r*mu/(lam+mu) at theta -> 0 up to the
    peak rate.  The fluid envelope holds for the emitted packet stream
    only after adding one packet of burst allowance, because a whole
    packet arrives the moment its fluid equivalent completes.
    """
    if lam <= 0.0 or mu <= 0.0:
        raise ValueError("lam and mu must be > 0")
    if peak_rate <= 0.0:
        raise ValueError(f"peak_rate must be > 0, got {peak_rate}")
    if theta <= 0.0:
        raise ValueError(f"theta must be > 0, got {theta}")
    if packet_bits <= 0.0:
        raise ValueError(f"packet_bits must be > 0, got {packet_bits}")
    tr = theta * peak_rate
    rate = (tr - lam - mu + math.sqrt((tr - lam + mu) ** 2 + 4.0 * lam * mu)) / (2.0 * theta)
    return ArrivalCurve(
        kind="onoff",
        rate=rate,
        burst=packet_bits,
        decay=theta,
        theta=theta,
        packet_bits=packet_bits,
    )


def arrival_curve_for(spec: TrafficSpec, packet_bits: float, theta: float) -> ArrivalCurve:
    """Arrival curve of a traffic spec at the given exponent."""
    if isinstance(spec, PeriodicTraffic):
        return periodic_arrival_curve(packet_bits, spec.t_pit)
    if isinstance(spec, PoissonTraffic):
        return poisson_arrival_curve(spec.rate, packet_bits, theta)
    if isinstance(spec, OnOffTraffic):
        return onoff_arrival_curve(
            spec.lam_on_off,
            spec.mu_off_on,
            spec.rate * packet_bits,
            theta,
            packet_bits,
        )
    raise TypeError(f"unknown traffic spec {type(spec).__name__}")


def service_curve(dist: ServiceDistribution, packet_bits: float, theta: float) -> ServiceCurve:
    """Rate service curve R = packet_bits * theta / ln(MGF(theta))."""
    if theta <= 0.0:
        raise ValueError(f"theta must be > 0, got {theta}")
    if packet_bits <= 0.0:
        raise ValueError(f"packet_bits must be > 0, got {packet_bits}")
    log_m = math.log(dist.mgf(theta))
    if log_m <= 0.0:
        raise ValueError("service-time MGF must exceed 1 for theta > 0")
    return ServiceCurve(rate=packet_bits * theta / log_m, theta=theta)


def horizontal_distance(ac: ArrivalCurve, x: float, sc: ServiceCurve) -> float:
    """Largest horizontal gap between the raised envelope ac + x and the service curve.

    For affine curves under stability this is (burst + x) / R.
    """
    if x < 0.0:
        raise ValueError(f"x must be >= 0, got {x}")
    if ac.rate > sc.rate:
        raise StabilityViolation(ac.rate, sc.rate)
    return (ac.burst + x) / sc.rate


def convolve_exponential_bounds(a: float, b: float, x: float) -> float:
    """Tail 1 - conv(fbar, gbar)(x) for bounds exp(-a*x) and exp(-b*x).

    Closed form (a*exp(-b*x) - b*exp(-a*x)) / (a - b) for a != b,
    (1 + a*x)*exp(-a*x) for a == b, clamped to [0, 1].
    """
    if a <= 0.0 or b <= 0.0:
        raise ValueError("decay rates must be > 0")
    if x < 0.0:
        raise ValueError(f"x must be >= 0, got {x}")
    if abs(a - b) <= 1e-12 * max(a, b):
        c = 0.5 * (a + b)
        val = (1.0 + c * x) * math.exp(-c * x)
    else:
        val = (a * math.exp(-b * x) - b * math.exp(-a * x)) / (a - b)
    return min(max(val, 0.0), 1.0)


def delay_bound_at(ac: ArrivalCurve, sc: ServiceCurve, x: float) -> tuple[float, float]:
    """One point of the delay tail bound: (delay, probability) at slack x bits."""
    delay = horizontal_distance(ac, x, sc)
    if ac.deterministic:
        prob = math.exp(-sc.decay * x)
    else:
        prob = convolve_exponential_bounds(ac.decay, sc.decay, x)
    return delay, min(max(prob, 0.0), 1.0)


def default_theta_grid() -> np.ndarray:
    """Log-spaced exponent grid, 60 points in [1e-5, 1] per ms."""
    return np.logspace(-5.0, 0.0, 60)


def _bound_prob(
    traffic: TrafficSpec,
    dist: ServiceDistribution,
    packet_bits: float,
    theta: float,
    delay: float,
) -> float:
    """Bound probability at one (theta, delay); inf when theta is infeasible."""
    if theta * dist.max_duration > _MGF_EXPONENT_LIMIT:
        return math.inf
    sc = service_curve(dist, packet_bits, theta)
    ac = arrival_curve_for(traffic, packet_bits, theta)
    if ac.rate > sc.rate:
        return math.inf
    x = delay * sc.rate - ac.burst
    if x < 0.0:
        return 1.0
    _, prob = delay_bound_at(ac, sc, x)
    return prob


def _golden_min(f: Callable[[float], float], lo: float, hi: float, iters: int = 40) -> tuple[float, float]:
    """Golden-section minimisation on [lo, hi], sampled on a log scale."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(math.exp(c)), f(math.exp(d))
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(math.exp(d))
    mid = math.exp(0.5 * (a + b))
    return mid, f(mid)


def optimize_delay_ccdf(
    traffic: TrafficSpec,
    dist: ServiceDistribution,
    packet_bits: float,
    delay_grid: Sequence[float],
    thetas: Sequence[float] | None = None,
) -> DelayCcdf:
    """Optimised tail bound over a delay grid.

    For each target delay the exponent is chosen by a scan over the theta
    grid followed by golden-section refinement, subject to the stability
    constraint rate(theta) <= R(theta).  Raises Overload when no grid
    exponent is stable.  Grid points where only the vacuous bound holds
    get probability 1 and no exponent.
    """
    delays = [float(d) for d in delay_grid]
    if not delays:
        raise ValueError("delay_grid must not be empty")
    if any(d <= 0.0 for d in delays):
        raise ValueError("delays must be > 0")
    if any(b <= a for a, b in zip(delays, delays[1:])):
        raise ValueError("delay_grid must be strictly increasing")
    grid = np.asarray(default_theta_grid() if thetas is None else list(thetas), dtype=float)
    if grid.size == 0 or np.any(grid <= 0.0):
        raise ValueError("theta grid must contain positive exponents")

    def stable(theta: float) -> bool:
        if theta * dist.max_duration > _MGF_EXPONENT_LIMIT:
            return False
        sc = service_curve(dist, packet_bits, theta)
        return arrival_curve_for(traffic, packet_bits, theta).rate <= sc.rate

    feasible = [t for t in np.sort(grid) if stable(t)]
    if not feasible:
        raise Overload(
            "no stable exponent in the theta grid; arrival envelope exceeds "
            "the service curve everywhere"
        )

    kind = {PeriodicTraffic: "periodic", PoissonTraffic: "poisson", OnOffTraffic: "onoff"}[
        type(traffic)
    ]
    points: list[DelayBound] = []
    best_prob, best_theta = math.inf, None
    for d in delays:
        probs = [_bound_prob(traffic, dist, packet_bits, t, d) for t in feasible]
        i = int(np.argmin(probs))
        prob, theta = probs[i], feasible[i]
        lo = feasible[max(i - 1, 0)]
        hi = feasible[min(i + 1, len(feasible) - 1)]
        if lo < hi:
            t_ref, p_ref = _golden_min(
                lambda t: _bound_prob(traffic, dist, packet_bits, t, d), lo, hi
            )
            if p_ref < prob:
                prob, theta = p_ref, t_ref
        # a bound valid at a smaller delay also bounds every larger delay
        if prob < best_prob:
            best_prob, best_theta = prob, theta
        if best_prob >= 1.0:
            points.append(DelayBound(delay=d, prob=1.0, theta=None))
        else:
            points.append(DelayBound(delay=d, prob=best_prob, theta=best_theta))
    return DelayCcdf(points=tuple(points), kind=kind, packet_bits=packet_bits)
