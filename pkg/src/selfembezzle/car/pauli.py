"""Finite-weight Pauli strings ``X^a Z^b`` over labelled sites.

Each site carries a pair of bits ``(x, z)`` standing for the single-site
operator ``X^x Z^z``. The composite letter ``XZ`` is never rewritten as
``Y``, so every product phase is ``+1`` or ``-1`` and state values stay
integral.
"""
from __future__ import annotations

from functools import reduce
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

import numpy as np

from ..errors import SizeCapError, SupportError, ValidationError

Letter = tuple[int, int]
IDENTITY_LETTER: Letter = (0, 0)
LETTERS: dict[str, Letter] = {"X": (1, 0), "Z": (0, 1), "XZ": (1, 1)}
LETTER_NAMES: dict[Letter, str] = {v: k for k, v in LETTERS.items()}

_INDEX_LIMIT = 2**63
MAX_MATRIX_SITES = 12

_MATRICES = {
    (0, 0): np.array([[1, 0], [0, 1]]),
    (1, 0): np.array([[0, 1], [1, 0]]),
    (0, 1): np.array([[1, 0], [0, -1]]),
    (1, 1): np.array([[0, -1], [1, 0]]),
}


class Site(NamedTuple):
    register: str
    index: int

    def validate(self) -> "Site":
        if not isinstance(self.index, (int, np.integer)) or not -_INDEX_LIMIT < self.index < _INDEX_LIMIT:
            raise ValidationError(f"site index {self.index!r} out of range")
        return self


def letter_matrix(letter: Letter) -> np.ndarray:
    return _MATRICES[letter]


class PauliString:
    """Immutable map from sites to non-identity letters."""

    __slots__ = ("_letters", "_key")

    def __init__(self, letters: Mapping[Site, Letter] | Iterable[tuple[Site, Letter]] = ()):
        items = letters.items() if isinstance(letters, Mapping) else letters
        clean = {}
        for site, letter in items:
            site = Site(*site).validate()
            x, z = letter
            if (x, z) not in _MATRICES:
                raise ValidationError(f"bad letter {letter!r}")
            if (x, z) != IDENTITY_LETTER:
                clean[site] = (x, z)
        self._letters = clean
        self._key = tuple(sorted(clean.items()))

    @classmethod
    def identity(cls) -> "PauliString":
        return cls()

    @classmethod
    def single(cls, register: str, index: int, letter: str | Letter) -> "PauliString":
        return cls({Site(register, index): LETTERS[letter] if isinstance(letter, str) else letter})

    @property
    def weight(self) -> int:
        return len(self._letters)

    @property
    def support(self) -> tuple[Site, ...]:
        return tuple(site for site, _ in self._key)

    def items(self):
        return self._key

    def __getitem__(self, site: Site) -> Letter:
        return self._letters.get(site, IDENTITY_LETTER)

    def __contains__(self, site) -> bool:
        return site in self._letters

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other: "PauliString") -> bool:
        return self._key < other._key

    def __repr__(self) -> str:
        return f"PauliString({format_generator(self)!r})"

    def __mul__(self, other):
        if isinstance(other, PauliString):
            phase, prod = pauli_mul(self, other)
            return AlgebraElement({prod: phase})
        return AlgebraElement.of(self) * other

    def __rmul__(self, scalar):
        return AlgebraElement.of(self) * scalar


def pauli_mul(g: PauliString, h: PauliString) -> tuple[int, PauliString]:
    """Product ``g h`` as ``(sign, string)``.

    Sitewise ``X^a Z^b X^a' Z^b' = (-1)^(b a') X^(a^a') Z^(b^b')``.
    """
    out = dict(g._letters)
    sign = 1
    for site, (x2, z2) in h._key:
        x1, z1 = out.get(site, IDENTITY_LETTER)
        if z1 & x2:
            sign = -sign
        out[site] = (x1 ^ x2, z1 ^ z2)
    return sign, PauliString(out)


def adjoint(g: PauliString) -> tuple[int, PauliString]:
    """``(X^a Z^b)* = Z^b X^a = (-1)^(a.b) X^a Z^b``."""
    odd = sum(x & z for _, (x, z) in g._key) & 1
    return (-1 if odd else 1), g


Scalar = Union[int, float, complex]


class AlgebraElement:
    """Finite linear combination of Pauli strings."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[PauliString, Scalar] | None = None):
        self.terms: dict[PauliString, Scalar] = {g: c for g, c in (terms or {}).items() if c != 0}

    @classmethod
    def of(cls, g: PauliString, coeff: Scalar = 1) -> "AlgebraElement":
        return cls({g: coeff})

    @classmethod
    def identity(cls) -> "AlgebraElement":
        return cls({PauliString(): 1})

    @classmethod
    def zero(cls) -> "AlgebraElement":
        return cls()

    @classmethod
    def single(cls, register: str, index: int, letter: str) -> "AlgebraElement":
        return cls.of(PauliString.single(register, index, letter))

    @property
    def support(self) -> tuple[Site, ...]:
        return tuple(sorted({s for g in self.terms for s in g.support}))

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, PauliString):
            other = AlgebraElement.of(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*[{format_generator(g)}]" for g, c in sorted(self.terms.items()))
        return f"AlgebraElement({body or '0'})"

    def _combine(self, other, sign: int) -> "AlgebraElement":
        other = _as_element(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, 0) + sign * c
        return AlgebraElement(out)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return _as_element(other)._combine(self, -1)

    def __neg__(self):
        return self * -1

    def __mul__(self, other):
        if isinstance(other, (PauliString, AlgebraElement)):
            other = _as_element(other)
            out: dict[PauliString, Scalar] = {}
            for g, a in self.terms.items():
                for h, b in other.terms.items():
                    sign, prod = pauli_mul(g, h)
                    out[prod] = out.get(prod, 0) + sign * a * b
            return AlgebraElement(out)
        return AlgebraElement({g: c * other for g, c in self.terms.items()})

    def __rmul__(self, scalar):
        return AlgebraElement({g: scalar * c for g, c in self.terms.items()})

    def __truediv__(self, scalar):
        return AlgebraElement({g: c / scalar for g, c in self.terms.items()})

    def adjoint(self) -> "AlgebraElement":
        out = {}
        for g, c in self.terms.items():
            sign, _ = adjoint(g)
            out[g] = sign * c.conjugate()
        return AlgebraElement(out)

    def is_self_adjoint(self, tol: float = 1e-12) -> bool:
        diff = self - self.adjoint()
        return all(abs(c) <= tol for _, c in diff)


def _as_element(x) -> AlgebraElement:
    if isinstance(x, AlgebraElement):
        return x
    if isinstance(x, PauliString):
        return AlgebraElement.of(x)
    return AlgebraElement({PauliString(): x})


def to_matrix(e: PauliString | AlgebraElement, window: Sequence[Site]) -> np.ndarray:
    """Matrix of `e` on the tensor product of the window sites, in window order."""
    window = [Site(*s) for s in window]
    if len(window) > MAX_MATRIX_SITES:
        raise SizeCapError(f"window of {len(window)} sites exceeds {MAX_MATRIX_SITES}")
    if len(set(window)) != len(window):
        raise ValidationError("window sites must be distinct")
    inside = set(window)
    if isinstance(e, PauliString):
        if not inside.issuperset(e.support):
            raise SupportError(f"{e!r} escapes the window")
        return reduce(np.kron, (letter_matrix(e[s]) for s in window), np.eye(1, dtype=int))
    dim = 2 ** len(window)
    out = np.zeros((dim, dim), dtype=complex)
    for g, c in e:
        out += c * to_matrix(g, window)
    return out


def operator_norm(e: PauliString | AlgebraElement) -> float:
    e = _as_element(e)
    window = e.support
    if len(window) > MAX_MATRIX_SITES:
        raise SizeCapError(f"support of {len(window)} sites exceeds {MAX_MATRIX_SITES}")
    if not e.terms:
        return 0.0
    return float(np.linalg.norm(to_matrix(e, window), 2))


def format_generator(g: PauliString) -> str:
    """Serialize as ``REG:INDEX:LETTER`` triples joined by ``;`` (``I`` for identity)."""
    if g.weight == 0:
        return "I"
    return ";".join(f"{s.register}:{s.index}:{LETTER_NAMES[l]}" for s, l in g.items())


def parse_generator(text: str) -> PauliString:
    text = text.strip()
    if text in ("", "I"):
        return PauliString()
    letters: dict[Site, Letter] = {}
    for part in text.split(";"):
        fields = part.strip().split(":")
        if len(fields) != 3:
            raise ValidationError(f"malformed site entry {part!r}")
        reg, idx, name = fields
        if name not in LETTERS:
            raise ValidationError(f"unknown letter {name!r} (expected X, Z or XZ)")
        try:
            site = Site(reg, int(idx))
        except ValueError as exc:
            raise ValidationError(f"bad index in {part!r}") from exc
        if site in letters:
            raise ValidationError(f"site {reg}:{idx} appears twice")
        letters[site] = LETTERS[name]
    return PauliString(letters)


def read_generators(lines: Iterable[str]) -> list[PauliString]:
    """Parse one generator per line, skipping blanks and ``#`` comments."""
    out = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_generator(line))
    return out
