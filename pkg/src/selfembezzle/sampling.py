"""Seeded random instances shared by the experiments and the test suite."""
from __future__ import annotations

import numpy as np

from .embezzle import ADMISSIBLE_LAMBDA1
from .schmidt import SchmidtVector


def random_schmidt(rng: np.random.Generator, n: int, concentration: float | None = None) -> SchmidtVector:
    alpha = concentration if concentration is not None else rng.uniform(0.2, 3.0)
    p = np.sort(rng.dirichlet(np.full(n, alpha)))[::-1]
    amps = np.sqrt(p)
    return SchmidtVector(amps / np.linalg.norm(amps))


def random_admissible_catalyst(rng: np.random.Generator, max_support: int = 64, min_support: int = 2) -> SchmidtVector:
    """Random Schmidt vector with ``lambda1 <= sqrt(2/3)`` (rejection sampling)."""
    while True:
        lam = random_schmidt(rng, int(rng.integers(min_support, max_support + 1)))
        if lam.lambda1 <= ADMISSIBLE_LAMBDA1:
            return lam


def random_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_purification(rng: np.random.Generator, max_dim: int = 4, max_noise: float = 0.35):
    """A unit amplitude matrix near ``psi0 (x) psi``; returns ``(phi, psi)``.

    Rows of ``phi`` index the environment, columns the system.
    """
    d_env = int(rng.integers(1, max_dim + 1))
    d_sys = int(rng.integers(2, max_dim + 1))
    psi = random_unit(rng, d_sys)
    psi0 = random_unit(rng, d_env)
    noise = rng.normal(size=(d_env, d_sys)) + 1j * rng.normal(size=(d_env, d_sys))
    phi = np.outer(psi0, psi) + rng.uniform(0, max_noise) * noise / np.linalg.norm(noise)
    return phi / np.linalg.norm(phi), psi
