"""Numeric primitives for bipartite pure states given in Schmidt form.

Everything here works on sorted, nonnegative vectors: Schmidt amplitudes
(`SchmidtVector`, squares sum to one) and probability vectors (`ProbDist`,
entries sum to one). Vectors of different lengths are compared after
zero-padding the shorter one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SizeCapError, ValidationError

CONSTRUCT_TOL = 1e-12
DERIVED_TOL = 1e-10
DEFAULT_CAP = 2**24


def _as_readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float).ravel()
    arr.setflags(write=False)
    return arr


def _check_sorted_nonneg(arr: np.ndarray, name: str) -> None:
    if arr.size == 0:
        raise ValidationError(f"{name} must have at least one entry")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    if np.any(arr < 0):
        raise ValidationError(f"{name} has negative entries")
    if np.any(np.diff(arr) > 0):
        raise ValidationError(f"{name} is not sorted nonincreasing")


@dataclass(frozen=True, eq=False)
class SchmidtVector:
    """Nonincreasing nonnegative Schmidt amplitudes with unit 2-norm."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _as_readonly(self.coeffs)
        _check_sorted_nonneg(arr, "SchmidtVector")
        norm2 = float(np.sum(arr * arr))
        if abs(norm2 - 1.0) > CONSTRUCT_TOL:
            raise ValidationError(f"squared amplitudes sum to {norm2!r}, not 1")
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_unsorted(cls, values: Sequence[float], normalize: bool = False) -> "SchmidtVector":
        arr = np.sort(np.abs(np.asarray(values, dtype=float)))[::-1]
        if normalize:
            arr = arr / np.linalg.norm(arr)
        return cls(arr)

    def __len__(self) -> int:
        return self.coeffs.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, SchmidtVector):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash(self.coeffs.tobytes())

    @property
    def lambda1(self) -> float:
        return float(self.coeffs[0])

    def probs(self) -> "ProbDist":
        return _unchecked(ProbDist, "probs", self.coeffs**2)

    def trim(self) -> "SchmidtVector":
        """Drop trailing zero amplitudes (always keeps at least one entry)."""
        nz = np.flatnonzero(self.coeffs)
        return SchmidtVector(self.coeffs[: nz[-1] + 1])


@dataclass(frozen=True, eq=False)
class ProbDist:
    """Nonincreasing probability vector."""

    probs: np.ndarray

    def __post_init__(self):
        arr = _as_readonly(self.probs)
        _check_sorted_nonneg(arr, "ProbDist")
        total = float(np.sum(arr))
        if abs(total - 1.0) > CONSTRUCT_TOL:
            raise ValidationError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probs", arr)

    @classmethod
    def from_unsorted(cls, values: Sequence[float]) -> "ProbDist":
        return cls(np.sort(np.asarray(values, dtype=float))[::-1])

    def __len__(self) -> int:
        return self.probs.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProbDist):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __hash__(self) -> int:
        return hash(self.probs.tobytes())


def pad(values, length: int) -> np.ndarray:
    """Zero-pad a 1-d array (or the coefficients of a vector type) to `length`."""
    arr = _values(values)
    if arr.size > length:
        raise ValueError(f"cannot pad length {arr.size} down to {length}")
    out = np.zeros(length)
    out[: arr.size] = arr
    return out


def _values(x) -> np.ndarray:
    if isinstance(x, SchmidtVector):
        return x.coeffs
    if isinstance(x, ProbDist):
        return x.probs
    return np.asarray(x, dtype=float).ravel()


def check_cap(length: int, cap: int = DEFAULT_CAP) -> None:
    if length > cap:
        raise SizeCapError(f"{length} entries exceeds the cap of {cap}")


def schmidt_from_probs(p: ProbDist) -> SchmidtVector:
    return SchmidtVector(np.sqrt(p.probs))


def sorted_products(*vectors, cap: int = DEFAULT_CAP) -> np.ndarray:
    """All products of one entry from each vector, sorted nonincreasing."""
    arrays = [_values(v) for v in vectors]
    check_cap(int(np.prod([a.size for a in arrays], dtype=object)), cap)
    out = arrays[0]
    for a in arrays[1:]:
        out = np.multiply.outer(out, a).ravel()
    # stable sort on the negated values keeps ties in input order
    return out[np.argsort(-out, kind="stable")]


def tensor_sorted(a: SchmidtVector, b: SchmidtVector, cap: int = DEFAULT_CAP) -> SchmidtVector:
    """Schmidt coefficients of the tensor product of two bipartite states."""
    prod = sorted_products(a, b, cap=cap)
    norm2 = float(np.sum(prod * prod))
    if abs(norm2 - 1.0) > DERIVED_TOL:
        raise ValidationError(f"tensor product lost normalization ({norm2!r})")
    return _unchecked(SchmidtVector, "coeffs", prod)


def _unchecked(cls, field: str, arr: np.ndarray):
    # derived vectors carry accumulated rounding beyond CONSTRUCT_TOL
    obj = object.__new__(cls)
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    object.__setattr__(obj, field, arr)
    return obj


def aligned_fidelity(a, b) -> float:
    """Maximal overlap between two bipartite pure states over local unitaries.

    With Schmidt amplitudes lined up largest-with-largest the overlap is
    ``sum_k a[k] * b[k]``; inputs are sorted here, so raw arrays are accepted.
    """
    x = np.sort(_values(a))[::-1]
    y = np.sort(_values(b))[::-1]
    n = max(x.size, y.size)
    f = float(np.dot(pad(x, n), pad(y, n)))
    return min(max(f, 0.0), 1.0)


def trace_distance_from_fidelity(fidelity: float) -> float:
    if fidelity < -CONSTRUCT_TOL or fidelity > 1 + CONSTRUCT_TOL:
        raise ValidationError(f"fidelity {fidelity!r} outside [0, 1]")
    f = min(max(fidelity, 0.0), 1.0)
    return float(np.sqrt(1.0 - f * f))


def variation_distance(p, q) -> float:
    x, y = _values(p), _values(q)
    n = max(x.size, y.size)
    return 0.5 * float(np.sum(np.abs(pad(x, n) - pad(y, n))))


def schmidt_decomposition(state: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """SVD-based Schmidt decomposition of an amplitude matrix.

    Test utility: returns (amplitudes, left vectors as columns, right vectors
    as rows) so that ``state == U @ diag(s) @ Vh``.
    """
    u, s, vh = np.linalg.svd(np.asarray(state, dtype=complex), full_matrices=False)
    return s, u, vh
