"""CHSH values on state vectors and on pairing states, plus the catalyst gate.

The CHSH functional is ``<A0 B0> + <A0 B1> + <A1 B0> - <A1 B1>``; a
violation factor is the value divided by the classical bound 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .car.pauli import AlgebraElement, PauliString, Site, operator_norm
from .car.states import PairingState, eval_element
from .embezzle import ADMISSIBLE_LAMBDA1, DEFAULT_EPS0
from .errors import LocalityError, ValidationError
from .schmidt import SchmidtVector

OBSERVABLE_TOL = 1e-9
CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = 2 * math.sqrt(2)

Observable = Union[np.ndarray, AlgebraElement]


@dataclass(frozen=True)
class ChshSettings:
    """Alice's ``A0, A1`` and Bob's ``B0, B1``: matrices or algebra elements."""

    a0: Observable
    a1: Observable
    b0: Observable
    b1: Observable

    def __post_init__(self):
        for name in ("a0", "a1", "b0", "b1"):
            obs = getattr(self, name)
            if isinstance(obs, PauliString):
                obs = AlgebraElement.of(obs)
                object.__setattr__(self, name, obs)
            _validate_observable(obs, name)

    @property
    def symbolic(self) -> bool:
        return isinstance(self.a0, AlgebraElement)


def _validate_observable(obs: Observable, name: str) -> None:
    if isinstance(obs, AlgebraElement):
        if not obs.is_self_adjoint(OBSERVABLE_TOL):
            raise ValidationError(f"{name} is not self-adjoint")
        if operator_norm(obs) > 1 + OBSERVABLE_TOL:
            raise ValidationError(f"{name} has norm above 1")
        return
    m = np.asarray(obs)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be a square matrix")
    if not np.allclose(m, m.conj().T, atol=OBSERVABLE_TOL):
        raise ValidationError(f"{name} is not Hermitian")
    ev = np.linalg.eigvalsh(m)
    if ev.min() < -1 - OBSERVABLE_TOL or ev.max() > 1 + OBSERVABLE_TOL:
        raise ValidationError(f"{name} has spectrum outside [-1, 1]")


def chsh_value_matrix(state: np.ndarray, s: ChshSettings, cut: tuple[int, int]) -> float:
    """CHSH value of a pure state on ``C^dA (x) C^dB`` with ``cut = (dA, dB)``."""
    d_a, d_b = cut
    psi = np.asarray(state, dtype=complex).ravel()
    if psi.size != d_a * d_b:
        raise ValidationError(f"state of size {psi.size} does not match cut {cut}")
    for name, d in (("a0", d_a), ("a1", d_a), ("b0", d_b), ("b1", d_b)):
        if np.asarray(getattr(s, name)).shape != (d, d):
            raise ValidationError(f"{name} does not act on dimension {d}")

    def corr(a, b):
        return np.real(psi.conj() @ np.kron(a, b) @ psi)

    return float(corr(s.a0, s.b0) + corr(s.a0, s.b1) + corr(s.a1, s.b0) - corr(s.a1, s.b1))


def _check_local(e: AlgebraElement, own: str, name: str) -> None:
    for site in e.support:
        if not site.register.startswith(own):
            raise LocalityError(f"{name} touches site {site} outside party {own}")


def chsh_value_abstract(
    state: PairingState, s: ChshSettings, alice: str = "A", bob: str = "B"
) -> float:
    """CHSH value computed inside the algebra by linearity of the state."""
    for name in ("a0", "a1"):
        _check_local(getattr(s, name), alice, name)
    for name in ("b0", "b1"):
        _check_local(getattr(s, name), bob, name)
    combo = s.a0 * s.b0 + s.a0 * s.b1 + s.a1 * s.b0 - s.a1 * s.b1
    return float(np.real(eval_element(state, combo)))


def violation_factor(chsh_value: float) -> float:
    return chsh_value / CLASSICAL_BOUND


def standard_settings(alice: Site = Site("A1", -1), bob: Site = Site("B1", -1)) -> ChshSettings:
    """``A0 = Z, A1 = X, B0 = (Z+X)/sqrt2, B1 = (Z-X)/sqrt2`` on one site each."""
    z_a = AlgebraElement.single(alice.register, alice.index, "Z")
    x_a = AlgebraElement.single(alice.register, alice.index, "X")
    z_b = AlgebraElement.single(bob.register, bob.index, "Z")
    x_b = AlgebraElement.single(bob.register, bob.index, "X")
    r = math.sqrt(2)
    return ChshSettings(z_a, x_a, (z_b + x_b) / r, (z_b - x_b) / r)


def planar_observable(theta: float) -> np.ndarray:
    """``cos(theta) Z + sin(theta) X``."""
    return np.array([[math.cos(theta), math.sin(theta)], [math.sin(theta), -math.cos(theta)]])


class Admissibility(NamedTuple):
    admissible: bool
    lambda1: float
    threshold: float
    eps0: float


def catalyst_admissible(lam: SchmidtVector, eps0: float = DEFAULT_EPS0) -> Admissibility:
    """Gate on the largest Schmidt amplitude, ``lambda1 <= sqrt(2/3)``.

    `eps0` is carried along for the record only; the threshold does not
    depend on it here.
    """
    return Admissibility(lam.lambda1 <= ADMISSIBLE_LAMBDA1 + 1e-12, lam.lambda1, ADMISSIBLE_LAMBDA1, eps0)
