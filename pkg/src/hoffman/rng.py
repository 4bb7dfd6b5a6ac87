"""Counter-based 64-bit generator with a documented update rule.

SplitMix64: the k-th output (k = 1, 2, ...) of seed s is

    z = s + k * 0x9E3779B97F4A7C15            (mod 2^64)
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)

Uniforms are (out >> 11) * 2^-53 in [0, 1). Standard normals use Box-Muller
on consecutive pairs (u1, u2): sqrt(-2 log(1 - u1)) * cos(2 pi u2), and the
matching sine for the second value of the pair. Everything is a pure function
of (seed, counter), so any implementation reproduces the same stream.
"""
from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MUL1 = np.uint64(0xBF58476D1CE4E5B9)
MUL2 = np.uint64(0x94D049BB133111EB)
MASK64 = (1 << 64) - 1


def mix64(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * MUL1
        z = (z ^ (z >> np.uint64(27))) * MUL2
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Stateful view of the counter stream: each draw advances the counter."""

    def __init__(self, seed: int):
        self.seed = np.uint64(int(seed) & MASK64)
        self.counter = 0

    def raw(self, count: int) -> np.ndarray:
        k = np.arange(self.counter + 1, self.counter + count + 1, dtype=np.uint64)
        self.counter += count
        with np.errstate(over="ignore"):
            return mix64(self.seed + k * GOLDEN)

    def uniform(self, count: int) -> np.ndarray:
        return (self.raw(count) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53

    def normal(self, count: int) -> np.ndarray:
        pairs = (count + 1) // 2
        u = self.uniform(2 * pairs).reshape(pairs, 2)
        rad = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        ang = 2.0 * np.pi * u[:, 1]
        return np.column_stack([rad * np.cos(ang), rad * np.sin(ang)]).ravel()[:count]

    def normal_matrix(self, m: int, n: int) -> np.ndarray:
        return self.normal(m * n).reshape(m, n)


def trial_seed(seed: int, trial: int) -> int:
    """Seed of an independent per-trial stream: output number trial+1 of ``seed``."""
    g = SplitMix64(seed)
    g.counter = trial
    return int(g.raw(1)[0])


def trial_matrix(seed: int, trial: int, m: int, n: int) -> np.ndarray:
    return SplitMix64(trial_seed(seed, trial)).normal_matrix(m, n)
