"""Seeded sample points that keep clear of pole ladders and branch cuts."""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

EXCLUSION = 1e-3


def pole_points(q: complex, N: int, extra: int = 2) -> np.ndarray:
    """Candidate poles x^2 = q^{e} for half-integer e, |e| <= 2N + extra (covers f, f_h, shifted grids)."""
    top = 2 * (2 * N + extra)
    es = np.arange(-top, top + 1) / 2.0
    return np.exp(es * np.log(complex(q)))


def sample_x(
    rng: np.random.Generator,
    count: int,
    q: complex,
    N: int,
    spread: float = 0.9,
    exclusion: float = EXCLUSION,
    avoid: Sequence[complex] = (),
) -> np.ndarray:
    """Points with |q|^{spread/2} < |x| < |q|^{-spread/2}, arg in (-0.95 pi, 0.95 pi).

    Rejects x whose square lies within ``exclusion`` of a candidate pole
    q^{e} or of any value in ``avoid``.
    """
    bad = np.concatenate([pole_points(q, N), np.asarray(list(avoid), dtype=complex)])
    half_width = -spread * math.log(abs(q)) / 2
    out = []
    while len(out) < count:
        mod = math.exp(rng.uniform(-half_width, half_width))
        arg = rng.uniform(-0.95 * math.pi, 0.95 * math.pi)
        x = mod * complex(math.cos(arg), math.sin(arg))
        if np.min(np.abs(x * x - bad)) > exclusion:
            out.append(x)
    return np.array(out)


def clear_of_poles(values: Iterable[complex], q: complex, N: int, exclusion: float = EXCLUSION) -> bool:
    bad = pole_points(q, N)
    return all(np.min(np.abs(complex(v) ** 2 - bad)) > exclusion for v in values)


def sample_triples(rng: np.random.Generator, count: int, q: complex, N: int) -> list:
    """Triples (z, w, u) with every pairwise ratio clear of the pole ladders."""
    out = []
    while len(out) < count:
        z = 1.0
        w, u = sample_x(rng, 2, q, N, spread=0.5)
        u = u * w
        if clear_of_poles([w / z, u / w, z / u, u / z], q, N):
            out.append((z, w, u))
    return out


def jacobi_sum(func, z: complex, w: complex, u: complex) -> complex:
    """Cyclic sum for the quadratic bracket {t(a), t(b)} = func(b/a) t(a) t(b)."""
    return (
        func(u / w) * (func(w / z) + func(u / z))
        + func(z / u) * (func(u / w) + func(z / w))
        + func(w / z) * (func(z / u) + func(w / u))
    )
