"""Monte Carlo trajectory sampling of the cloning circuits.

Each trajectory draws one measurement outcome, builds the outcome-conditioned
clone (a pure coherent or squeezed-coherent state), displaces it by the
feed-forward and scores its overlap with the input. Because the overlap is
linear in the density operator, the trajectory average estimates the
fidelity of the outcome-averaged clone without ever forming the mixture.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analysis import INF, ParameterError
from .cloners import SYMMETRIC, CloneCircuit, CloneParams, clone
from .gaussian import VACUUM_VARIANCE, apply, beam_splitter, vacuum
from .measurement import HETERODYNE, HOMODYNE_P, HOMODYNE_X, measure
from .rng import standard_normals

DIRECT = "direct"
ANCILLA_CIRCUIT = "ancilla-circuit"

#: trajectories per work unit; fixed so results do not depend on worker count
CHUNK = 1 << 16


@dataclass(frozen=True)
class McConfig:
    circuit: CloneParams
    machine: str = SYMMETRIC
    trajectories: int = 100_000
    seed: int = 0
    heterodyne_model: str = DIRECT

    def __post_init__(self):
        if self.trajectories < 1:
            raise ParameterError("trajectories must be at least 1")
        if self.heterodyne_model not in (DIRECT, ANCILLA_CIRCUIT):
            raise ParameterError(f"unknown heterodyne model {self.heterodyne_model!r}")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    trajectories: int
    degenerate: bool = False


@dataclass(frozen=True, eq=False)
class McMoments:
    mean: np.ndarray
    cov: np.ndarray
    mean_stderr: np.ndarray
    cov_stderr: np.ndarray
    trajectories: int


class _Sampler:
    """Per-trajectory conditional clone means for one circuit."""

    def __init__(self, circuit: CloneCircuit, seed: int, heterodyne_model: str):
        self.seed = seed
        model = circuit.model()
        n = model.remaining.mean.size
        post_m = np.eye(n) if circuit.post is None else circuit.post.matrix
        post_s = np.zeros(n) if circuit.post is None else circuit.post.shift
        c = circuit.clones[0]
        self.rows = post_m[2 * c : 2 * c + 2]
        self.shift = post_s[2 * c : 2 * c + 2]
        self.gain = circuit.gain
        self.cov = self.rows @ model.remaining.cov @ self.rows.T
        self.dim = model.outcome_dim

        self.ancilla = None
        if heterodyne_model == ANCILLA_CIRCUIT and model.kind == HETERODYNE:
            self.ancilla = _ancilla_heterodyne(circuit)
        self.base = self.rows @ (model.remaining.mean + self.gain @ model.outcome_mean) + self.shift
        self.chol = np.linalg.cholesky(model.outcome_cov)
        self.response = self.rows @ (model.response + self.gain)

    def clone_means(self, start: int, stop: int) -> np.ndarray:
        traj = np.arange(start, stop, dtype=np.uint64)
        if self.ancilla is None:
            z = standard_normals(self.seed, traj, self.dim)
            return self.base + (z @ self.chol.T) @ self.response.T

        # separate draw block keeps the two heterodyne models statistically independent
        z = standard_normals(self.seed, traj, 2, draw=1)
        first, second, anc, keep = self.ancilla
        d1 = math.sqrt(first.outcome_cov[0, 0]) * z[:, 0]
        mean1 = first.remaining.mean + np.outer(d1, first.response[:, 0])
        d2 = math.sqrt(second.outcome_cov[0, 0]) * z[:, 1]
        o2 = mean1[:, 2 * anc + 1] + d2
        mean2 = mean1[:, keep] + np.outer(d2, second.response[:, 0])
        beta = math.sqrt(2.0) * np.column_stack([first.outcome_mean[0] + d1, -o2])
        return (mean2 + beta @ self.gain.T) @ self.rows.T + self.shift


def _ancilla_heterodyne(circuit: CloneCircuit):
    """Heterodyne as a balanced split with vacuum, then x and p homodynes."""
    s = circuit.state.tensor(vacuum(1))
    i, j = circuit.measured, s.n_modes - 1
    s = apply(beam_splitter(0.5, i, j, s.n_modes), s)
    first = measure(s, i, HOMODYNE_X)
    anc = j - 1
    second = measure(first.remaining, anc, HOMODYNE_P)
    keep = np.array([q for q in range(first.remaining.mean.size) if q // 2 != anc])
    return first, second, anc, keep


def _sampler(cfg: McConfig) -> _Sampler:
    if cfg.circuit.M == INF:
        raise ParameterError("Monte Carlo sampling needs a finite M")
    report = clone(cfg.machine, cfg.circuit)
    return _Sampler(report.circuit, cfg.seed, cfg.heterodyne_model)


def _chunks(n: int) -> list[tuple[int, int]]:
    return [(a, min(a + CHUNK, n)) for a in range(0, n, CHUNK)]


def _map_chunks(fn, n: int, workers: int) -> np.ndarray:
    chunks = _chunks(n)
    if workers <= 1:
        parts = [fn(*c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda c: fn(*c), chunks))
    return np.concatenate(parts)


def _overlaps(means: np.ndarray, cov: np.ndarray, alpha: complex) -> np.ndarray:
    """Overlap with |alpha> of single-mode states sharing ``cov``."""
    sigma = cov + VACUUM_VARIANCE * np.eye(2)
    inv = np.linalg.inv(sigma)
    d = means - np.array([alpha.real, alpha.imag])
    quad = inv[0, 0] * d[:, 0] ** 2 + 2 * inv[0, 1] * d[:, 0] * d[:, 1] + inv[1, 1] * d[:, 1] ** 2
    return np.exp(-0.5 * quad) / (2.0 * math.sqrt(np.linalg.det(sigma)))


def _mean_and_stderr(values: np.ndarray) -> tuple[float, float]:
    n = values.size
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((values - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def trajectory_overlaps(cfg: McConfig, workers: int = 1) -> np.ndarray:
    """Per-trajectory overlap of the conditional clone with the input."""
    sampler = _sampler(cfg)
    alpha = complex(cfg.circuit.alpha)
    return _map_chunks(
        lambda a, b: _overlaps(sampler.clone_means(a, b), sampler.cov, alpha),
        cfg.trajectories,
        workers,
    )


def mc_fidelity(cfg: McConfig, workers: int = 1) -> McEstimate:
    """Average overlap over ``cfg.trajectories`` sampled outcomes."""
    values = trajectory_overlaps(cfg, workers)
    mean, stderr = _mean_and_stderr(values)
    return McEstimate(mean, stderr, cfg.trajectories, degenerate=cfg.trajectories == 1)


def mc_moments(cfg: McConfig, workers: int = 1) -> McMoments:
    """Sample estimates of one clone's mean vector and covariance matrix.

    The covariance is the fixed conditional covariance plus the sample
    covariance of the conditional means (law of total covariance).
    """
    sampler = _sampler(cfg)
    means = _map_chunks(sampler.clone_means, cfg.trajectories, workers)
    n = cfg.trajectories
    mean = np.array([math.fsum(means[:, k]) / n for k in (0, 1)])
    dev = means - mean
    cov = sampler.cov.copy()
    mean_se = np.zeros(2)
    cov_se = np.zeros((2, 2))
    if n > 1:
        for a in (0, 1):
            mean_se[a] = math.sqrt(math.fsum(dev[:, a] ** 2) / (n - 1) / n)
            for b in (0, 1):
                prod = dev[:, a] * dev[:, b]
                m = math.fsum(prod) / (n - 1)
                cov[a, b] += m
                cov_se[a, b] = math.sqrt(math.fsum((prod - m) ** 2) / (n - 1) / n)
    return McMoments(mean, cov, mean_se, cov_se, n)
