"""Site permutations and the *-automorphisms they induce.

A register name ends in its slot digit (``A1``, ``A2``, ``B1``, ``B2``); a
permutation acts on ``(slot, index)`` and leaves the party prefix alone, so
the same map is applied to Alice's and Bob's registers.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ValidationError
from .pauli import AlgebraElement, PauliString, Site


@dataclass(frozen=True)
class AffinePiece:
    """Maps ``(slot, i)`` to ``(out_slot, (num*i + offset) // den)`` on its domain.

    The domain is ``lo <= i < hi`` (`None` for unbounded) intersected with
    ``i % modulus == residue``. `slot` of `None` matches any slot and keeps it.
    """

    slot: int | None
    lo: int | None
    hi: int | None
    out_slot: int | None
    num: int = 1
    offset: int = 0
    den: int = 1
    modulus: int = 1
    residue: int = 0

    def matches(self, slot: int, i: int) -> bool:
        return (
            (self.slot is None or slot == self.slot)
            and (self.lo is None or i >= self.lo)
            and (self.hi is None or i < self.hi)
            and i % self.modulus == self.residue
        )

    def apply(self, slot: int, i: int) -> tuple[int, int]:
        top = self.num * i + self.offset
        if top % self.den:
            raise ValidationError(f"piece {self} is not integral at {i}")
        return (slot if self.out_slot is None else self.out_slot), top // self.den


def _split(register: str) -> tuple[str, int]:
    if not register or not register[-1].isdigit():
        raise ValidationError(f"register {register!r} has no slot digit")
    return register[:-1], int(register[-1])


def _apply_pieces(pieces: tuple[AffinePiece, ...], site: Site) -> Site:
    party, slot = _split(site.register)
    for piece in pieces:
        if piece.matches(slot, site.index):
            out_slot, j = piece.apply(slot, site.index)
            return Site(f"{party}{out_slot}", j)
    raise ValidationError(f"no piece covers site {site}")


@dataclass(frozen=True)
class SitePermutation:
    """A bijection of sites given by forward and inverse piecewise rules."""

    forward: tuple[AffinePiece, ...]
    inverse: tuple[AffinePiece, ...]
    name: str = ""
    _checked: dict = field(default_factory=dict, compare=False, repr=False)

    def __call__(self, site: Site) -> Site:
        image = self._checked.get(site)
        if image is None:
            image = _apply_pieces(self.forward, site)
            if _apply_pieces(self.inverse, image) != site:
                raise ValidationError(f"{self.name or 'permutation'} is not invertible at {site}")
            self._checked[site] = image
        return image

    def preimage(self, site: Site) -> Site:
        pre = _apply_pieces(self.inverse, site)
        if self(pre) != site:
            raise ValidationError(f"{self.name or 'permutation'} is not invertible at {site}")
        return pre


def identity_permutation() -> SitePermutation:
    keep = (AffinePiece(None, None, None, None),)
    return SitePermutation(keep, keep, name="identity")


def canonical_sigma() -> SitePermutation:
    """Send every negative site of both slots onto the negative sites of slot 1.

    Slot 1: ``-k -> -(2k-1)``, non-negative indices fixed.
    Slot 2: ``-k -> (slot 1, -2k)``; non-negative ``j`` zigzags over all of
    slot 2 (0, -1, 1, -2, 2, ...).
    """
    forward = (
        AffinePiece(1, None, 0, 1, num=2, offset=1),
        AffinePiece(1, 0, None, 1),
        AffinePiece(2, None, 0, 1, num=2),
        AffinePiece(2, 0, None, 2, num=1, offset=0, den=2, modulus=2, residue=0),
        AffinePiece(2, 0, None, 2, num=-1, offset=-1, den=2, modulus=2, residue=1),
    )
    inverse = (
        AffinePiece(1, None, 0, 1, num=1, offset=-1, den=2, modulus=2, residue=1),
        AffinePiece(1, None, 0, 2, num=1, den=2, modulus=2, residue=0),
        AffinePiece(1, 0, None, 1),
        AffinePiece(2, 0, None, 2, num=2),
        AffinePiece(2, None, 0, 2, num=-2, offset=-1),
    )
    return SitePermutation(forward, inverse, name="canonical_sigma")


def apply_automorphism(sigma: SitePermutation, g):
    """Relabel every site ``s`` of `g` to ``sigma(s)``; letters are unchanged."""
    if isinstance(g, AlgebraElement):
        return AlgebraElement({apply_automorphism(sigma, h): c for h, c in g})
    return PauliString({sigma(site): letter for site, letter in g.items()})
