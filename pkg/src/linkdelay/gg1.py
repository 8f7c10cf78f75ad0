"""Mean-delay prediction through an equivalent lossless G/G/1 queue.

Waiting time uses the two-moment diffusion approximation
W_q = lam * (var_a + var_t) / (2 * (1 - rho)); total delay adds the mean
service time.  Input moments can come from the fitted link models or
from the exact discrete service-time distribution.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import empirical
from .empirical import LinkConfig, MomentCoefficients, PerCoefficients
from .service_time import ServiceDistribution

__all__ = [
    "Gg1Inputs",
    "Overloaded",
    "traffic_intensity",
    "waiting_time",
    "mean_delay",
    "inputs_from_fitted_models",
    "inputs_from_distribution",
]


class Overloaded(Exception):
    """Raised when the queue is unstable (rho >= 1)."""

    def __init__(self, rho: float):
        self.rho = rho
        super().__init__(f"traffic intensity rho = {rho:.6g} >= 1, queue is unstable")


@dataclass(frozen=True)
class Gg1Inputs:
    """Moment inputs of the equivalent queue."""

    lam: float     # arrival rate, packets/ms
    var_a: float   # equivalent arrival-rate variance
    mean_t: float  # mean service time, ms
    var_t: float   # service-time variance, ms^2

    def __post_init__(self) -> None:
        if self.lam <= 0.0:
            raise ValueError(f"lam must be > 0, got {self.lam}")
        if self.var_a < 0.0 or self.var_t < 0.0:
            raise ValueError("variances must be >= 0")
        if self.mean_t <= 0.0:
            raise ValueError(f"mean_t must be > 0, got {self.mean_t}")


def traffic_intensity(inputs: Gg1Inputs) -> float:
    """Server utilisation rho = lam * E(T)."""
    return inputs.lam * inputs.mean_t


def waiting_time(inputs: Gg1Inputs) -> float:
    """Mean queueing delay W_q in ms; raises Overloaded when rho >= 1."""
    rho = traffic_intensity(inputs)
    if rho >= 1.0:
        raise Overloaded(rho)
    return inputs.lam * (inputs.var_a + inputs.var_t) / (2.0 * (1.0 - rho))


def mean_delay(inputs: Gg1Inputs) -> float:
    """Mean sojourn time: queueing plus service, ms."""
    return waiting_time(inputs) + inputs.mean_t


def inputs_from_fitted_models(
    cfg: LinkConfig,
    moment_coeffs: MomentCoefficients | None = None,
    per_coeffs: PerCoefficients | None = None,
) -> Gg1Inputs:
    """Queue inputs from the measurement-fitted closed forms."""
    del per_coeffs  # loss enters through the fitted PLR model, not the PER
    plr = empirical.plr_mean(cfg.l_d, cfg.snr, cfg.q_max, moment_coeffs)
    pvar = empirical.plr_var(cfg.l_d, cfg.snr, moment_coeffs)
    arrival = empirical.equivalent_arrival(cfg.t_pit, plr, pvar)
    return Gg1Inputs(
        lam=arrival.lam,
        var_a=arrival.var_a,
        mean_t=empirical.service_time_mean(cfg, moment_coeffs),
        var_t=empirical.service_time_var(cfg, moment_coeffs),
    )


def inputs_from_distribution(dist: ServiceDistribution, t_int: float) -> Gg1Inputs:
    """Queue inputs consistent with the exact service-time law.

    Loss is the residual drop probability of the retry scheme; the
    per-configuration loss rate is deterministic, so the equivalent
    arrival-rate variance is zero.
    """
    arrival = empirical.equivalent_arrival(t_int, dist.drop_probability, 0.0)
    return Gg1Inputs(
        lam=arrival.lam,
        var_a=arrival.var_a,
        mean_t=dist.mean(),
        var_t=dist.variance(),
    )
