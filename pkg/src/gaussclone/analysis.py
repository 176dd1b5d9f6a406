"""Closed-form fidelities, gains, variances and CV-QKD excess-noise thresholds.

``M`` may be ``INF`` (``math.inf``) everywhere; ``1/M`` then evaluates to 0
exactly, which gives the measure-and-prepare limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gaussian import VACUUM_VARIANCE

INF = math.inf

#: Fidelity of the earlier four-wave-mixing 1->2 known-phase cloner.
FOUR_WAVE_MIXING_FIDELITY = 4 / 5

GOLDEN_EXCESS_NOISE = (math.sqrt(5) - 1) / 2


class ParameterError(ValueError):
    """Raised for parameter combinations outside an operation's domain."""


def check_nm(N, M) -> None:
    if not (isinstance(N, int) and N >= 1):
        raise ParameterError(f"N must be a positive integer, got {N!r}")
    if M != INF and not isinstance(M, int):
        raise ParameterError(f"M must be an integer or INF, got {M!r}")
    if not M > N:
        raise ParameterError(f"requires M > N (got N={N}, M={M})")


def inv_m(M) -> float:
    return 0.0 if M == INF else 1.0 / M


def coherent_fidelity(var_x: float, var_p: float) -> float:
    """Overlap with ``|alpha>`` of an unbiased Gaussian with diagonal covariance."""
    return 1.0 / (
        2.0 * math.sqrt((var_x + VACUUM_VARIANCE) * (var_p + VACUUM_VARIANCE))
    )


# symmetric cloner ------------------------------------------------------------


def symmetric_gain(N: int, M, epsilon: float) -> float:
    """Joint feed-forward gain that restores unit mean amplitude."""
    check_nm(N, M)
    if not 0.0 <= epsilon <= 1.0:
        raise ParameterError(f"epsilon must lie in [0, 1], got {epsilon}")
    if epsilon == 1.0:
        raise ParameterError("degenerate parameter: epsilon = 1 leaves nothing to measure")
    if M == INF:
        if epsilon > 0:
            raise ParameterError("M = inf requires epsilon = 0")
        return INF
    return math.sqrt(M / ((1 - epsilon) * N)) * (1 - math.sqrt(epsilon * N / M))


def symmetric_clone_gain(N: int, M) -> float:
    """Per-clone gain of the individual-displacement variant at epsilon = N/M."""
    check_nm(N, M)
    return math.sqrt(1 / N - inv_m(M))


def symmetric_variance(N: int, M, epsilon: float | None = None) -> float:
    """Quadrature variance of each clone (same for x and p)."""
    check_nm(N, M)
    if epsilon is not None:
        g = symmetric_gain(N, M, epsilon)
        if M != INF:
            return VACUUM_VARIANCE + g * g / (2 * M)
        # only epsilon = 0 is allowed at M = inf, which is the optimal split
    return VACUUM_VARIANCE + 0.5 * (1 / N - inv_m(M))


def fidelity_symmetric(N: int, M, epsilon: float | None = None) -> float:
    """Clone fidelity; the optimum ``MN / (MN + M - N)`` when ``epsilon`` is None."""
    check_nm(N, M)
    if epsilon is None or M == INF:
        symmetric_variance(N, M, epsilon)  # validates epsilon
        if M == INF:
            return N / (N + 1)
        return M * N / (M * N + M - N)
    v = symmetric_variance(N, M, epsilon)
    return coherent_fidelity(v, v)


# known-phase cloner ----------------------------------------------------------


def kp_epsilon(N: int, M, r: float) -> float:
    """Split ratio that minimizes the known-phase gain."""
    check_nm(N, M)
    eps = N * math.exp(2 * r) * inv_m(M)
    # at M = N + 1 with r = r_o the exact value is 1, which rounds to either side
    return 1.0 if abs(eps - 1.0) <= 1e-12 else eps


def kp_gain(N: int, M, r: float, epsilon: float | None = None) -> float:
    """Homodyne feed-forward gain that restores ``<x> = alpha``."""
    check_nm(N, M)
    if epsilon is None:
        epsilon = kp_epsilon(N, M, r)
        if epsilon > 1.0:
            raise ParameterError(
                f"requires N e^{{2r}} <= M (N={N}, M={M}, r={r})"
            )
        return math.sqrt((1 - epsilon) / N)
    if not 0.0 <= epsilon <= 1.0:
        raise ParameterError(f"epsilon must lie in [0, 1], got {epsilon}")
    numer = 1 - math.exp(r) * math.sqrt(epsilon * N * inv_m(M))
    if epsilon == 1.0:
        if abs(numer) > 1e-12:
            raise ParameterError("degenerate parameter: epsilon = 1 with nonzero gain")
        return 0.0
    return numer / math.sqrt((1 - epsilon) * N)


def kp_variances(N: int, M, r: float, epsilon: float | None = None) -> tuple[float, float]:
    """``(var_x, var_p)`` of each known-phase clone."""
    g = kp_gain(N, M, r, epsilon)
    var_p = VACUUM_VARIANCE * math.exp(-2 * r)
    if epsilon is None:
        var_x = VACUUM_VARIANCE * (1 / N + (1 - inv_m(M)) * math.exp(2 * r))
    else:
        var_x = VACUUM_VARIANCE * (math.exp(2 * r) + g * g)
    return var_x, var_p


def fidelity_kp(N: int, M, r: float, epsilon: float | None = None) -> float:
    """Known-phase clone fidelity at squeezing ``r``."""
    check_nm(N, M)
    if epsilon is not None:
        return coherent_fidelity(*kp_variances(N, M, r, epsilon))
    a, b = 1 / N, inv_m(M)
    if abs(r) > 350:
        return 0.0
    e2r = math.exp(2 * r)
    return 2 / math.sqrt((2 + a - b) + (1 + a) / e2r + (1 - b) * e2r)


def kp_bound(N: int, M) -> float:
    """Maximum over ``r`` of the known-phase fidelity."""
    check_nm(N, M)
    return 2 / (math.sqrt(1 + 1 / N) + math.sqrt(1 - inv_m(M)))


def fidelity_kp_unsqueezed(N: int, M) -> float:
    check_nm(N, M)
    if M == INF:
        return math.sqrt(2 * N / (2 * N + 1))
    return math.sqrt(2 * M * N / (2 * M * N + M - N))


def fidelity_kp_symmetric_noise(N: int, M) -> float:
    check_nm(N, M)
    return 4 * N / (2 * N + 1 + math.sqrt(1 + 4 * N * N * (1 - inv_m(M))))


def optimal_squeezing(N: int, M) -> float:
    """``r_o`` with ``e^{2 r_o} = sqrt((N+1) M / ((M-1) N))``."""
    check_nm(N, M)
    return 0.25 * math.log((N + 1) / (N * (1 - inv_m(M))))


def symmetric_noise_squeezing(N: int, M) -> float:
    """``r_*`` that equalizes the x and p variances of the known-phase clones."""
    check_nm(N, M)
    return -0.5 * math.log((1 + math.sqrt(1 + 4 * N * N * (1 - inv_m(M)))) / (2 * N))


# QKD -------------------------------------------------------------------------


def excess_noise(variance: float) -> float:
    """Excess noise in units of the vacuum variance."""
    return (variance - VACUUM_VARIANCE) / VACUUM_VARIANCE


def excess_noise_classical(phase_known: bool) -> float:
    """Excess noise imposed by the symmetric-noise 1 -> inf cloner."""
    if phase_known:
        return GOLDEN_EXCESS_NOISE
    return 2.0


@dataclass(frozen=True)
class QkdBound:
    """Largest excess noise compatible with key distillation at transmission ``eta``."""

    eta: float
    phase_known: bool
    delta_max: float

    def admits(self, delta: float) -> bool:
        """True if observed ``delta`` passes the necessary condition."""
        return delta < self.delta_max

    def verdict(self, delta: float) -> str:
        return "not excluded" if self.admits(delta) else "EB-reachable"


def qkd_threshold(eta: float, phase_known: bool) -> QkdBound:
    if not 0.0 < eta <= 1.0:
        raise ParameterError(f"eta must lie in (0, 1], got {eta}")
    return QkdBound(eta, bool(phase_known), excess_noise_classical(phase_known) * eta)
