"""Homodyne and heterodyne detection as Gaussian measurements, plus feed-forward.

Outcomes are reported in quadrature units. A homodyne-x measurement on a
coherent state gives a Gaussian outcome with variance 1/4; heterodyne (double
homodyne) outcomes follow the Q function, with per-quadrature variance 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import VACUUM_VARIANCE, GaussianState, _check_mode, _quad_indices
from .rng import standard_normals

HOMODYNE_X = "homodyne-x"
HOMODYNE_P = "homodyne-p"
HETERODYNE = "heterodyne"
KINDS = (HOMODYNE_X, HOMODYNE_P, HETERODYNE)

MIN_CONDITIONING_VARIANCE = 1e-14


@dataclass(frozen=True, eq=False)
class MeasurementModel:
    """Outcome statistics of a Gaussian measurement and its effect on the rest.

    Conditioned on outcome ``o``, the unmeasured modes are in the Gaussian state
    with mean ``remaining.mean + response @ (o - outcome_mean)`` and covariance
    ``remaining.cov``, which does not depend on ``o``.
    """

    kind: str
    mode: int
    outcome_mean: np.ndarray
    outcome_cov: np.ndarray
    remaining: GaussianState
    response: np.ndarray

    @property
    def outcome_dim(self) -> int:
        return self.outcome_mean.size

    def conditional(self, outcome) -> GaussianState:
        """State of the unmeasured modes given one outcome."""
        dev = np.atleast_1d(np.asarray(outcome, dtype=float)) - self.outcome_mean
        return GaussianState(
            self.remaining.mean + self.response @ dev, self.remaining.cov
        )


def measure(s: GaussianState, mode: int, kind: str) -> MeasurementModel:
    """Gaussian conditioning of ``s`` on a measurement of ``mode``."""
    if kind not in KINDS:
        raise ValueError(f"unknown measurement kind {kind!r}; expected one of {KINDS}")
    _check_mode(mode, s.n_modes)
    rest = [k for k in range(s.n_modes) if k != mode]
    a_idx = _quad_indices(rest)
    if kind == HETERODYNE:
        b_idx = _quad_indices([mode])
        noise = VACUUM_VARIANCE * np.eye(2)
    else:
        b_idx = np.array([2 * mode + (kind == HOMODYNE_P)])
        noise = np.zeros((1, 1))

    outcome_cov = s.cov[np.ix_(b_idx, b_idx)] + noise
    if np.min(np.linalg.eigvalsh(outcome_cov)) < MIN_CONDITIONING_VARIANCE:
        raise ValueError("outcome variance too small to condition on")
    cross = s.cov[np.ix_(a_idx, b_idx)]
    response = np.linalg.solve(outcome_cov, cross.T).T
    remaining = GaussianState(
        s.mean[a_idx], s.cov[np.ix_(a_idx, a_idx)] - response @ cross.T
    )
    return MeasurementModel(
        kind=kind,
        mode=mode,
        outcome_mean=s.mean[b_idx],
        outcome_cov=0.5 * (outcome_cov + outcome_cov.T),
        remaining=remaining,
        response=response,
    )


def sample_outcome(m: MeasurementModel, stream) -> np.ndarray:
    """Draw one outcome from ``m`` using the normals of ``stream``."""
    z = stream.normal(m.outcome_dim)
    return m.outcome_mean + np.linalg.cholesky(m.outcome_cov) @ z


def sample_outcomes(m: MeasurementModel, seed: int, trajectories) -> np.ndarray:
    """Vectorized :func:`sample_outcome`, one row per trajectory index."""
    z = standard_normals(seed, trajectories, m.outcome_dim)
    return m.outcome_mean + z @ np.linalg.cholesky(m.outcome_cov).T


def ensemble_after_feedforward(m: MeasurementModel, gain) -> GaussianState:
    """Outcome-averaged state after displacing the rest by ``gain @ outcome``.

    ``gain`` has one row per remaining quadrature and one column per outcome
    component.
    """
    gain = np.asarray(gain, dtype=float)
    expected = (m.remaining.mean.size, m.outcome_dim)
    if gain.shape != expected:
        raise ValueError(f"gain shape {gain.shape} does not match {expected}")
    total = m.response + gain
    return GaussianState(
        m.remaining.mean + gain @ m.outcome_mean,
        m.remaining.cov + total @ m.outcome_cov @ total.T,
    )
