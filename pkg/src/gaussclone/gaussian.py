"""Multimode Gaussian states and Gaussian unitaries in phase space.

Quadrature convention: ``x = (a + a^dagger) / 2`` and ``p = (a - a^dagger) / 2i``,
so the vacuum has variance 1/4 in each quadrature and a coherent state
``|alpha>`` has mean ``(Re alpha, Im alpha)``. Vectors are ordered
``(x_1, p_1, ..., x_n, p_n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

VACUUM_VARIANCE = 0.25


def symplectic_form(n: int) -> np.ndarray:
    """Block-diagonal symplectic form with ``((0, 1), (-1, 0))`` on each mode."""
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _quad_indices(modes: Iterable[int]) -> np.ndarray:
    return np.array([2 * k + q for k in modes for q in (0, 1)], dtype=int)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Mean quadrature vector and covariance matrix of an n-mode Gaussian state.

    The covariance matrix is symmetrized on construction. A zero-mode state is
    allowed and represents the empty remainder left after measuring every mode.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        if mean.size % 2:
            raise ValueError(f"mean vector must have even length, got {mean.size}")
        if cov.shape != (mean.size, mean.size):
            raise ValueError(
                f"covariance shape {cov.shape} does not match mean length {mean.size}"
            )
        cov = 0.5 * (cov + cov.T)
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def symplectic_eigenvalues(self) -> np.ndarray:
        """Williamson spectrum, one value per mode, in ascending order."""
        if self.n_modes == 0:
            return np.zeros(0)
        eig = np.linalg.eigvals(1j * symplectic_form(self.n_modes) @ self.cov)
        return np.sort(np.abs(eig.real))[::2]

    def is_physical(self, tol: float = 1e-10) -> bool:
        """True if the state obeys the uncertainty principle to within ``tol``."""
        if self.n_modes == 0:
            return True
        return bool(np.all(self.symplectic_eigenvalues() >= VACUUM_VARIANCE - tol))

    def allclose(self, other: GaussianState, atol: float = 1e-12) -> bool:
        return (
            self.n_modes == other.n_modes
            and np.allclose(self.mean, other.mean, rtol=0, atol=atol)
            and np.allclose(self.cov, other.cov, rtol=0, atol=atol)
        )

    def tensor(self, other: GaussianState) -> GaussianState:
        n = self.mean.size
        cov = np.zeros((n + other.mean.size,) * 2)
        cov[:n, :n] = self.cov
        cov[n:, n:] = other.cov
        return GaussianState(np.concatenate([self.mean, other.mean]), cov)


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    """Affine phase-space map ``v -> matrix @ v + shift``."""

    matrix: np.ndarray
    shift: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        shift = np.array(self.shift, dtype=float).reshape(-1)
        if matrix.shape != (shift.size, shift.size) or shift.size % 2:
            raise ValueError(
                f"inconsistent op shapes: matrix {matrix.shape}, shift {shift.shape}"
            )
        matrix.setflags(write=False)
        shift.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "shift", shift)

    @property
    def n_modes(self) -> int:
        return self.shift.size // 2

    def __matmul__(self, other: SymplecticOp) -> SymplecticOp:
        """Composition: ``(a @ b)`` applies ``b`` first, then ``a``."""
        if self.n_modes != other.n_modes:
            raise ValueError("cannot compose ops on different numbers of modes")
        return SymplecticOp(
            self.matrix @ other.matrix, self.matrix @ other.shift + self.shift
        )

    def inverse(self) -> SymplecticOp:
        # S^-1 = -Omega S^T Omega for symplectic S
        omega = symplectic_form(self.n_modes)
        inv = -omega @ self.matrix.T @ omega
        return SymplecticOp(inv, -inv @ self.shift)

    def symplectic_error(self) -> float:
        omega = symplectic_form(self.n_modes)
        return float(np.max(np.abs(self.matrix @ omega @ self.matrix.T - omega)))

    def is_symplectic(self, tol: float = 1e-12) -> bool:
        return self.symplectic_error() < tol


def identity(n: int) -> SymplecticOp:
    return SymplecticOp(np.eye(2 * n), np.zeros(2 * n))


def vacuum(n: int) -> GaussianState:
    return GaussianState(np.zeros(2 * n), VACUUM_VARIANCE * np.eye(2 * n))


def coherent_state(alphas: Sequence[complex]) -> GaussianState:
    """Product of coherent states with the given complex amplitudes."""
    alphas = list(alphas)
    if not alphas:
        raise ValueError("coherent_state needs at least one amplitude")
    mean = np.array([[complex(a).real, complex(a).imag] for a in alphas]).reshape(-1)
    return GaussianState(mean, VACUUM_VARIANCE * np.eye(mean.size))


def _check_mode(mode: int, n: int) -> None:
    if not 0 <= mode < n:
        raise ValueError(f"mode {mode} out of range for {n} modes")


def beam_splitter(t: float, i: int, j: int, n: int) -> SymplecticOp:
    """Beam splitter with transmittance ``t`` between modes ``i`` and ``j``.

    ``x_i -> sqrt(t) x_i + sqrt(1-t) x_j`` and
    ``x_j -> -sqrt(1-t) x_i + sqrt(t) x_j``, identically for ``p``.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {t}")
    if i == j:
        raise ValueError("beam splitter needs two distinct modes")
    _check_mode(i, n)
    _check_mode(j, n)
    c, s = np.sqrt(t), np.sqrt(1.0 - t)
    m = np.eye(2 * n)
    for q in (0, 1):
        a, b = 2 * i + q, 2 * j + q
        m[a, a], m[a, b] = c, s
        m[b, a], m[b, b] = -s, c
    return SymplecticOp(m, np.zeros(2 * n))


def squeezer(r: float, mode: int, n: int) -> SymplecticOp:
    """Single-mode squeezer: ``x -> e^r x``, ``p -> e^-r p``."""
    _check_mode(mode, n)
    m = np.eye(2 * n)
    m[2 * mode, 2 * mode] = np.exp(r)
    m[2 * mode + 1, 2 * mode + 1] = np.exp(-r)
    return SymplecticOp(m, np.zeros(2 * n))


def rotation(theta: float, mode: int, n: int) -> SymplecticOp:
    """Phase-space rotation ``a -> a e^{-i theta}``."""
    _check_mode(mode, n)
    c, s = np.cos(theta), np.sin(theta)
    m = np.eye(2 * n)
    m[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2] = [[c, s], [-s, c]]
    return SymplecticOp(m, np.zeros(2 * n))


def displacement(shift: Sequence[float] | complex, mode: int, n: int) -> SymplecticOp:
    """Displace ``mode`` by a complex amplitude or an ``(x, p)`` pair."""
    _check_mode(mode, n)
    if np.isscalar(shift):
        shift = (complex(shift).real, complex(shift).imag)
    vec = np.zeros(2 * n)
    vec[2 * mode : 2 * mode + 2] = shift
    return SymplecticOp(np.eye(2 * n), vec)


def apply(op: SymplecticOp, s: GaussianState) -> GaussianState:
    if op.n_modes != s.n_modes:
        raise ValueError(
            f"op acts on {op.n_modes} modes but state has {s.n_modes}"
        )
    m = op.matrix
    return GaussianState(m @ s.mean + op.shift, m @ s.cov @ m.T)


def concentration_network(modes: Sequence[int], n: int) -> SymplecticOp:
    """Cascade that folds equal coherent amplitudes on ``modes`` into ``modes[0]``.

    Step k (k = 1 .. len(modes)-1) mixes the accumulator with ``modes[k]`` at
    transmittance k/(k+1).
    """
    modes = list(modes)
    if not modes:
        raise ValueError("network needs at least one mode")
    op = identity(n)
    for k in range(1, len(modes)):
        op = beam_splitter(k / (k + 1), modes[0], modes[k], n) @ op
    return op


def concentrate(s: GaussianState, modes: Sequence[int] | None = None) -> GaussianState:
    """Map ``|alpha>^N`` on ``modes`` (default: all) to ``|sqrt(N) alpha>`` on the first."""
    if modes is None:
        modes = range(s.n_modes)
    return apply(concentration_network(modes, s.n_modes), s)


def distribute(
    s: GaussianState,
    source: int,
    M: int,
    targets: Sequence[int] | None = None,
) -> GaussianState:
    """Split mode ``source`` into ``M`` equal-amplitude parts.

    The parts land on ``source`` and ``targets``. When ``targets`` is omitted,
    ``M - 1`` vacuum modes are appended to the state and used.
    """
    if M < 1:
        raise ValueError(f"M must be at least 1, got {M}")
    if targets is None:
        first = s.n_modes
        if M > 1:
            s = s.tensor(vacuum(M - 1))
        targets = range(first, first + M - 1)
    modes = [source, *targets]
    if len(modes) != M:
        raise ValueError(f"need {M - 1} target modes, got {len(modes) - 1}")
    return apply(concentration_network(modes, s.n_modes).inverse(), s)


def partial_trace(s: GaussianState, keep: Sequence[int]) -> GaussianState:
    """Reduced state on ``keep``, in the given order."""
    keep = list(keep)
    if not keep:
        raise ValueError("keep set must be non-empty")
    for k in keep:
        _check_mode(k, s.n_modes)
    idx = _quad_indices(keep)
    return GaussianState(s.mean[idx], s.cov[np.ix_(idx, idx)])


def overlap_with_coherent(s: GaussianState, alpha: complex) -> float:
    """Fidelity ``<alpha|rho|alpha>`` of a single-mode state with a coherent state."""
    if s.n_modes != 1:
        raise ValueError(f"overlap needs a single-mode state, got {s.n_modes} modes")
    sigma = s.cov + VACUUM_VARIANCE * np.eye(2)
    d = s.mean - np.array([complex(alpha).real, complex(alpha).imag])
    factor = cho_factor(sigma)
    quad = d @ cho_solve(factor, d)
    det = np.prod(np.diag(factor[0])) ** 2
    return float(np.exp(-0.5 * quad) / (2.0 * np.sqrt(det)))
