"""Abstract states given by EPR pairings over sites, all other sites in |0>.

Generators are evaluated sitewise: an unpaired site contributes
``<0|X^x Z^z|0> = 1 - x`` and a paired site pair contributes
``<Psi|P (x) Q|Psi> = [P == Q]`` for ``Psi = (|00> + |11>)/sqrt(2)``.
Values on generators are therefore the integers 0 and 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import SizeCapError, ValidationError
from .pauli import LETTERS, AlgebraElement, PauliString, Site, adjoint, to_matrix

MAX_DENSITY_SITES = 6


@dataclass(frozen=True)
class PairRule:
    """Pairs ``(i, left) <-> (i, right)`` for every ``lo <= i < hi``.

    `None` bounds are unbounded, so a rule can describe infinitely many pairs.
    """

    left: str
    right: str
    lo: int | None = None
    hi: int | None = None

    def __post_init__(self):
        if self.left == self.right:
            raise ValidationError("a pair rule must join two different registers")

    def covers(self, index: int) -> bool:
        return (self.lo is None or index >= self.lo) and (self.hi is None or index < self.hi)

    def _overlaps(self, other: "PairRule") -> bool:
        lo = max(x for x in (self.lo, other.lo, -np.inf) if x is not None)
        hi = min(x for x in (self.hi, other.hi, np.inf) if x is not None)
        return lo < hi


@dataclass(frozen=True)
class PairingState:
    """A state fixed by disjoint EPR pairs; unmatched sites are |0>."""

    rules: tuple[PairRule, ...] = ()
    pairs: frozenset = frozenset()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        pairs = frozenset(tuple(sorted((Site(*a), Site(*b)))) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        regs = [(r, rule) for rule in self.rules for r in (rule.left, rule.right)]
        for (r1, a), (r2, b) in itertools.combinations(regs, 2):
            if r1 == r2 and (a is b or a._overlaps(b)):
                raise ValidationError(f"pair rules overlap on register {r1}")
        seen: set[Site] = set()
        for a, b in pairs:
            if a == b or a in seen or b in seen:
                raise ValidationError("explicit pairs must be disjoint")
            seen.update((a, b))
        for s in seen:
            if self._rule_partner(s) is not None:
                raise ValidationError(f"site {s} is paired twice")
        object.__setattr__(self, "_explicit", {a: b for a, b in pairs} | {b: a for a, b in pairs})

    def _rule_partner(self, site: Site) -> Site | None:
        for rule in self.rules:
            if rule.covers(site.index):
                if site.register == rule.left:
                    return Site(rule.right, site.index)
                if site.register == rule.right:
                    return Site(rule.left, site.index)
        return None

    def partner(self, site: Site) -> Site | None:
        p = self._explicit.get(site)
        return p if p is not None else self._rule_partner(site)


def all_zero_state() -> PairingState:
    """Every site in |0>: the product state ``phi`` (and ``phi (x) phi``, ``s_00``)."""
    return PairingState(name="phi")


def epr_chain_state(left: str = "A1", right: str = "B1") -> PairingState:
    """EPR pairs on every negative index, |0> elsewhere (``s_Psi`` and the catalyst ``psi``)."""
    return PairingState((PairRule(left, right, None, 0),), name="s_psi")


def initial_state() -> PairingState:
    """``psi (x) (phi (x) phi)`` on registers A1, B1, A2, B2."""
    return PairingState((PairRule("A1", "B1", None, 0),), name="psi_initial")


def target_state() -> PairingState:
    """``psi (x) psi``: negative indices paired in both register pairs."""
    return PairingState(
        (PairRule("A1", "B1", None, 0), PairRule("A2", "B2", None, 0)), name="psi_target"
    )


def eval_state(s: PairingState, g: PauliString) -> int:
    for site, (x, z) in g.items():
        partner = s.partner(site)
        if partner is None:
            if x:
                return 0
        elif g[partner] != (x, z):
            return 0
    # a paired site absent from g but whose partner is present was caught above
    return 1


def eval_element(s: PairingState, e: AlgebraElement | PauliString):
    if isinstance(e, PauliString):
        return eval_state(s, e)
    return sum((c * eval_state(s, g) for g, c in e), 0)


def window_paulis(window: Sequence[Site]) -> Iterable[PauliString]:
    letters = [(0, 0), *LETTERS.values()]
    for combo in itertools.product(letters, repeat=len(window)):
        yield PauliString(zip(window, combo))


def restrict_density(s: PairingState, window: Sequence[Site]) -> np.ndarray:
    """Density matrix of `s` on the window sites, rebuilt from expectations.

    ``rho = 2**-m * sum_P s(P) P*`` over the ``4**m`` window strings, which
    reproduces ``tr(rho P) = s(P)`` because the strings are orthogonal.
    """
    window = [Site(*w) for w in window]
    if len(window) > MAX_DENSITY_SITES:
        raise SizeCapError(f"window of {len(window)} sites exceeds {MAX_DENSITY_SITES}")
    dim = 2 ** len(window)
    rho = np.zeros((dim, dim), dtype=complex)
    for g in window_paulis(window):
        value = eval_state(s, g)
        if value:
            sign, _ = adjoint(g)
            rho += (value * sign) * to_matrix(g, window)
    return rho / dim


def purity_check(rho: np.ndarray, tol: float = 1e-9) -> tuple[float, bool]:
    purity = float(np.real(np.trace(rho @ rho)))
    return purity, purity >= 1 - tol
