"""Counter-based random streams keyed by (seed, trajectory, draw).

Philox4x32-10 evaluated with numpy over whole arrays of counters. Every draw is
a pure function of its key, so splitting trajectories across workers cannot
change any sample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK = np.uint64(0xFFFFFFFF)
_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85


def philox4x32(counter, key, rounds: int = 10) -> np.ndarray:
    """Philox4x32 block function.

    Args:
        counter: array of shape (4, ...) with 32-bit words.
        key: pair of 32-bit words.

    Returns:
        uint32 array with the same shape as ``counter``.
    """
    c0, c1, c2, c3 = (np.asarray(w, dtype=np.uint64) & _MASK for w in counter)
    k0, k1 = int(key[0]) & 0xFFFFFFFF, int(key[1]) & 0xFFFFFFFF
    for i in range(rounds):
        if i:
            k0 = (k0 + _W0) & 0xFFFFFFFF
            k1 = (k1 + _W1) & 0xFFFFFFFF
        p0 = _M0 * c0
        p1 = _M1 * c2
        c0, c1, c2, c3 = (
            (p1 >> np.uint64(32)) ^ c1 ^ np.uint64(k0),
            p1 & _MASK,
            (p0 >> np.uint64(32)) ^ c3 ^ np.uint64(k1),
            p0 & _MASK,
        )
    return np.stack([c0, c1, c2, c3]).astype(np.uint32)


def _key(seed: int) -> tuple[int, int]:
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    return seed & 0xFFFFFFFF, seed >> 32


def uniforms(seed: int, trajectories, n: int, draw: int = 0) -> np.ndarray:
    """``(K, n)`` doubles in [0, 1), 53 bits each; two per Philox block."""
    traj = np.atleast_1d(np.asarray(trajectories, dtype=np.uint64))
    blocks = (n + 1) // 2
    out = np.empty((traj.size, 2 * blocks))
    for b in range(blocks):
        words = philox4x32(
            (traj & _MASK, traj >> np.uint64(32), np.full_like(traj, draw + b), np.zeros_like(traj)),
            _key(seed),
        ).astype(np.uint64)
        for h in (0, 1):
            hi = words[2 * h] >> np.uint64(5)
            lo = words[2 * h + 1] >> np.uint64(6)
            out[:, 2 * b + h] = (hi * np.uint64(1 << 26) + lo) * 2.0**-53
    return out[:, :n]


def standard_normals(seed: int, trajectories, n: int, draw: int = 0) -> np.ndarray:
    """``(K, n)`` standard normals by Box-Muller, one pair per Philox block."""
    u = uniforms(seed, trajectories, 2 * ((n + 1) // 2), draw)
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 0::2]))
    angle = 2.0 * np.pi * u[:, 1::2]
    z = np.empty_like(u)
    z[:, 0::2] = radius * np.cos(angle)
    z[:, 1::2] = radius * np.sin(angle)
    return z[:, :n]


@dataclass(frozen=True)
class Stream:
    """Immutable handle on the draws of one trajectory."""

    seed: int
    trajectory: int = 0
    draw: int = 0

    def normal(self, n: int) -> np.ndarray:
        return standard_normals(self.seed, self.trajectory, n, self.draw)[0]

    def uniform(self, n: int) -> np.ndarray:
        return uniforms(self.seed, self.trajectory, n, self.draw)[0]

    def advance(self, blocks: int) -> Stream:
        return Stream(self.seed, self.trajectory, self.draw + blocks)
