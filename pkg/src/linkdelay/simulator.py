"""Discrete-event oracle: single-server FIFO queue with finite waiting room.

Packets arrive at given instants, wait in a queue holding at most q_max
packets (the one in service not counted), and occupy the server for a
duration drawn from the service-time distribution.  Packets that exhaust
all transmission attempts still occupy the server for their full failed
duration but deliver nothing.  Delivered-packet delay is waiting time
plus own service time.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import beta

from .empirical import LinkConfig
from .service_time import TimingConstants, service_distribution
from .traffic import TrafficSpec, generate_arrivals

__all__ = [
    "SimTrace",
    "SimResult",
    "EmpiricalCcdf",
    "DominanceViolation",
    "simulate",
    "run_simulation",
    "empirical_ccdf",
    "dominance_report",
]

OUTCOME_DELIVERED = "delivered"
OUTCOME_RETRY_DROP = "retry_drop"
OUTCOME_QUEUE_DROP = "queue_drop"


@dataclass
class SimTrace:
    """Per-packet record in arrival order; NaN marks fields that never happened."""

    arrival: np.ndarray
    start: np.ndarray
    attempts: np.ndarray
    outcome: list[str]
    delay: np.ndarray


@dataclass
class SimResult:
    delivered_delays: np.ndarray
    n_arrivals: int
    n_delivered: int
    n_queue_drops: int
    n_retry_drops: int
    seed: int | None = None
    trace: SimTrace | None = field(default=None, repr=False)

    @property
    def mean_delay(self) -> float:
        return float(np.mean(self.delivered_delays)) if self.n_delivered else float("nan")

    @property
    def loss_fraction(self) -> float:
        return (self.n_queue_drops + self.n_retry_drops) / self.n_arrivals


def simulate(
    arrivals: np.ndarray,
    cfg: LinkConfig,
    tc: TimingConstants,
    p_e: float,
    rng: np.random.Generator,
    collect_trace: bool = False,
    seed: int | None = None,
) -> SimResult:
    """Run the queue over the given arrival instants.

    Deterministic for a fixed rng state and inputs: service outcomes are
    drawn up front and consumed in service-start order, so queue-dropped
    packets never consume a draw.
    """
    arrivals = np.asarray(arrivals, dtype=float)
    if arrivals.size == 0:
        raise ValueError("arrivals must not be empty")
    if np.any(np.diff(arrivals) < 0.0):
        raise ValueError("arrivals must be non-decreasing")
    dist = service_distribution(cfg, tc, p_e)
    draw_attempts, draw_durations, draw_delivered = dist.sample_many(rng, arrivals.size)

    n = arrivals.size
    start = np.full(n, np.nan)
    attempts = np.zeros(n, dtype=np.int64)
    outcome = [OUTCOME_QUEUE_DROP] * n
    delay = np.full(n, np.nan)

    queue: deque[int] = deque()
    busy_until = -np.inf
    busy = False
    draw_ptr = 0
    n_queue_drops = 0
    n_retry_drops = 0
    delays: list[float] = []

    def begin_service(idx: int, at: float) -> float:
        nonlocal draw_ptr, n_retry_drops
        k = draw_attempts[draw_ptr]
        duration = draw_durations[draw_ptr]
        ok = draw_delivered[draw_ptr]
        draw_ptr += 1
        start[idx] = at
        attempts[idx] = k
        if ok:
            outcome[idx] = OUTCOME_DELIVERED
            d = (at - arrivals[idx]) + duration
            delay[idx] = d
            delays.append(d)
        else:
            outcome[idx] = OUTCOME_RETRY_DROP
            n_retry_drops += 1
        return at + duration

    for i in range(n):
        t = arrivals[i]
        # departures at or before t free the server before the arrival is seen
        while busy and busy_until <= t:
            if queue:
                busy_until = begin_service(queue.popleft(), busy_until)
            else:
                busy = False
        if not busy:
            busy = True
            busy_until = begin_service(i, t)
        elif len(queue) < cfg.q_max:
            queue.append(i)
        else:
            n_queue_drops += 1
    while queue:
        busy_until = begin_service(queue.popleft(), busy_until)

    delivered_delays = np.asarray(delays)
    trace = None
    if collect_trace:
        trace = SimTrace(arrival=arrivals.copy(), start=start, attempts=attempts,
                         outcome=outcome, delay=delay)
    return SimResult(
        delivered_delays=delivered_delays,
        n_arrivals=n,
        n_delivered=len(delays),
        n_queue_drops=n_queue_drops,
        n_retry_drops=n_retry_drops,
        seed=seed,
        trace=trace,
    )


def run_simulation(
    cfg: LinkConfig,
    tc: TimingConstants,
    traffic: TrafficSpec,
    p_e: float,
    seed: int,
    collect_trace: bool = False,
) -> SimResult:
    """Generate arrivals and simulate with a single seeded stream."""
    rng = np.random.default_rng(seed)
    arrivals = generate_arrivals(traffic, rng)
    return simulate(arrivals, cfg, tc, p_e, rng, collect_trace=collect_trace, seed=seed)


@dataclass
class EmpiricalCcdf:
    """Exceedance fractions on a delay grid with one-sided upper confidence."""

    delays: np.ndarray
    fractions: np.ndarray
    upper: np.ndarray
    n_samples: int
    confidence: float


def empirical_ccdf(delays: np.ndarray, grid: np.ndarray, confidence: float = 0.99) -> EmpiricalCcdf:
    """Fraction of samples strictly exceeding each grid point.

    The upper envelope is the one-sided Clopper-Pearson binomial bound at
    the given confidence level.
    """
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must be in (0, 1), got {confidence}")
    samples = np.sort(np.asarray(delays, dtype=float))
    grid = np.asarray(grid, dtype=float)
    n = samples.size
    if n == 0:
        raise ValueError("need at least one delay sample")
    exceed = n - np.searchsorted(samples, grid, side="right")
    fractions = exceed / n
    upper = np.ones_like(fractions)
    partial = exceed < n
    upper[partial] = beta.ppf(confidence, exceed[partial] + 1, n - exceed[partial])
    return EmpiricalCcdf(delays=grid.copy(), fractions=fractions, upper=upper,
                         n_samples=n, confidence=confidence)


@dataclass(frozen=True)
class DominanceViolation:
    delay: float
    empirical_upper: float
    bound_prob: float


def dominance_report(
    emp: EmpiricalCcdf,
    bound_delays: np.ndarray,
    bound_probs: np.ndarray,
    min_bound_prob: float = 0.0,
) -> list[DominanceViolation]:
    """Grid points where the empirical upper confidence exceeds the bound.

    Both inputs must share the same delay grid.  An empty report means the
    analytic bound dominates the measurement everywhere it is checked;
    points with bound probability below min_bound_prob are skipped.
    """
    bound_delays = np.asarray(bound_delays, dtype=float)
    bound_probs = np.asarray(bound_probs, dtype=float)
    if bound_delays.shape != emp.delays.shape or not np.allclose(
        bound_delays, emp.delays, rtol=1e-12, atol=1e-9
    ):
        raise ValueError("bound and empirical CCDF must use the same delay grid")
    violations = []
    for d, up, bp in zip(emp.delays, emp.upper, bound_probs):
        if bp < min_bound_prob:
            continue
        if up > bp:
            violations.append(DominanceViolation(delay=float(d), empirical_upper=float(up),
                                                 bound_prob=float(bp)))
    return violations
