"""Self-embezzlement no-go quantities and the van Dam-Hayden catalyst.

The unitary case reduces to lining up Schmidt coefficients: the best local
unitaries map ``psi (x) |11>`` (Schmidt amplitudes ``lambda`` padded with
zeros) onto ``psi (x) psi`` (amplitudes ``lambda_j * lambda_k``), so the
optimal fidelity is an aligned dot product. The distribution-level version
compares ``p`` padded to ``n**2`` slots with the sorted ``p (x) p``.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import NamedTuple

import numpy as np

from .errors import SizeCapError, ValidationError
from .schmidt import (
    DEFAULT_CAP,
    ProbDist,
    SchmidtVector,
    aligned_fidelity,
    check_cap,
    pad,
    sorted_products,
    trace_distance_from_fidelity,
    variation_distance,
)

LEMMA_BOUND = 2 / 9
FIDELITY_BOUND = 0.974996
BOUND_TOL = 1e-9
ADMISSIBLE_LAMBDA1 = math.sqrt(2 / 3)
DEFAULT_EPS0 = 1 / 50
BRUTE_FORCE_MAX_SUPPORT = 4


@dataclass(frozen=True)
class RearrangementInstance:
    """A distribution together with the number of slots it is spread over."""

    p: ProbDist
    padded_length: int

    def __post_init__(self):
        if self.padded_length != len(self.p) ** 2:
            raise ValidationError("padded_length must equal len(p)**2")

    @classmethod
    def of(cls, p: ProbDist) -> "RearrangementInstance":
        return cls(p, len(p) ** 2)

    def padded(self) -> np.ndarray:
        return pad(self.p, self.padded_length)

    def square(self, cap: int = DEFAULT_CAP) -> np.ndarray:
        return sorted_products(self.p, self.p, cap=cap)


@dataclass(frozen=True)
class NoGoReport:
    catalyst: SchmidtVector
    lambda1: float
    fidelity_max: float
    trace_distance_min: float
    lemma_distance: float
    admissible: bool
    bound_satisfied: bool


def self_embezzlement_fidelity(lam: SchmidtVector, cap: int = DEFAULT_CAP) -> float:
    """Best fidelity between ``(U_A (x) U_B) psi (x) |11>`` and ``psi (x) psi``."""
    n = len(lam)
    check_cap(n * n, cap)
    return aligned_fidelity(pad(lam, n * n), sorted_products(lam, lam, cap=cap))


def min_rearrangement_distance(p: ProbDist, cap: int = DEFAULT_CAP) -> float:
    """Smallest variation distance between a rearrangement of `p` and ``p (x) p``.

    Sorted alignment is optimal for the L1 rearrangement problem, so the
    minimum is attained by matching both vectors in nonincreasing order.
    """
    n = len(p)
    check_cap(n * n, cap)
    inst = RearrangementInstance.of(p)
    return variation_distance(inst.padded(), inst.square(cap=cap))


def brute_force_rearrangement_min(p: ProbDist) -> float:
    """Exhaustive minimum over every injective placement of the masses of `p`.

    Independent of `min_rearrangement_distance`: no sorting argument, just
    enumeration of all ways to put the nonzero masses into the ``n**2`` slots
    of ``p (x) p``.
    """
    n = len(p)
    if n > BRUTE_FORCE_MAX_SUPPORT:
        raise SizeCapError(f"brute force is limited to support <= {BRUTE_FORCE_MAX_SUPPORT}")
    masses = [float(x) for x in p.probs if x > 0]
    q = np.multiply.outer(p.probs, p.probs).ravel()
    q_total = float(q.sum())
    best = math.inf
    for slots in itertools.permutations(range(q.size), len(masses)):
        placed = q[list(slots)]
        # unplaced slots of q contribute |0 - q| each
        d = sum(abs(m - s) for m, s in zip(masses, placed)) + (q_total - float(placed.sum()))
        best = min(best, d)
    return 0.5 * best


class LemmaPoint(NamedTuple):
    p: tuple[Fraction, ...]
    distance: float
    mu: Fraction
    m: int
    counterexample: bool


def _partitions(total: int, parts: int, largest: int):
    """Nonincreasing tuples of positive ints summing to `total`."""
    if total == 0:
        yield ()
        return
    if parts == 0:
        return
    for first in range(min(total, largest), 0, -1):
        if first * parts < total:
            break
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def grid_distributions(grid_step: float, max_support: int, max_first: Fraction = Fraction(1)):
    """Sorted distributions whose entries are multiples of `grid_step`."""
    denom = round(1 / grid_step)
    if denom < 1 or abs(denom * grid_step - 1) > 1e-9:
        raise ValidationError(f"grid_step {grid_step!r} must be 1/N for an integer N")
    largest = math.floor(max_first * denom)
    for parts in _partitions(denom, max_support, largest):
        yield tuple(Fraction(k, denom) for k in parts)


def lemma_quantities(p: tuple[Fraction, ...]) -> tuple[Fraction, int]:
    """Return ``(mu, m)``: the longest prefix of `p` with mass at most 2/3."""
    total = Fraction(0)
    m = 0
    for x in p:
        if total + x > Fraction(2, 3):
            break
        total += x
        m += 1
    return total, m


def lemma_scan(grid_step: float, max_support: int) -> list[LemmaPoint]:
    if not 0 < grid_step <= 0.5 + 1e-12:
        raise ValidationError("grid_step must lie in (0, 1/2]")
    if not 1 <= max_support <= 64:
        raise ValidationError("max_support must lie in [1, 64]")
    rows = []
    for p in grid_distributions(grid_step, max_support, Fraction(2, 3)):
        dist = min_rearrangement_distance(ProbDist([float(x) for x in p]))
        mu, m = lemma_quantities(p)
        rows.append(LemmaPoint(p, dist, mu, m, dist < LEMMA_BOUND - BOUND_TOL))
    rows.sort(key=lambda r: r.p, reverse=True)
    return rows


def channel_selfembezzlement_fidelity(
    lam: SchmidtVector, gamma: SchmidtVector, cap: int = DEFAULT_CAP
) -> float:
    """Best overlap of ``psi (x) |11>`` with ``phi (x) psi (x) psi``.

    `gamma` holds the Schmidt amplitudes of the environment state ``phi``.
    """
    check_cap(len(lam) ** 2 * len(gamma), cap)
    return aligned_fidelity(lam, sorted_products(lam, lam, gamma, cap=cap))


class ProductExtension(NamedTuple):
    index: int
    p0: float
    overlap: float


def nearest_product_extension(phi: np.ndarray, psi: np.ndarray, tol: float = 1e-10) -> ProductExtension:
    """Find the product vector ``psi0 (x) psi`` closest to `phi`.

    `phi` is an amplitude matrix with rows indexing the environment and
    columns indexing the system. Within a block of degenerate Schmidt
    amplitudes the right vectors are not unique; the block is rotated so that
    one of its vectors points along the projection of `psi`, which makes the
    result basis independent.
    """
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex).ravel()
    if phi.ndim != 2 or phi.shape[1] != psi.size:
        raise ValidationError("phi must be a matrix whose columns match psi")
    if abs(np.linalg.norm(phi) - 1) > tol or abs(np.linalg.norm(psi) - 1) > tol:
        raise ValidationError("phi and psi must have unit norm")
    _, s, vh = np.linalg.svd(phi, full_matrices=False)
    probs = s**2
    # <psi, v_i> for each right Schmidt vector v_i = vh[i]
    amps = vh @ psi.conj()
    best = None
    i = 0
    while i < probs.size:
        j = i + 1
        while j < probs.size and abs(probs[j] - probs[i]) <= tol:
            j += 1
        weight = float(np.sum(np.abs(amps[i:j]) ** 2))
        if best is None or weight > best[1] + tol:
            best = (i, weight, float(np.mean(probs[i:j])))
        i = j
    index, weight, p0 = best
    return ProductExtension(index, p0, p0 * weight)


def reduced_fidelity(phi: np.ndarray, psi: np.ndarray) -> float:
    """``<psi| Tr_env(phi phi*) |psi>`` for an amplitude matrix `phi`."""
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex).ravel()
    rho = phi.T @ phi.conj()
    return float(np.real(psi.conj() @ rho @ psi))


def vdh_catalyst(n: int) -> SchmidtVector:
    """Catalyst with amplitudes proportional to ``1/sqrt(j)``, j = 1..n."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    j = np.arange(1, n + 1, dtype=float)
    harmonic = math.fsum(1.0 / j)
    return SchmidtVector(np.sqrt(1.0 / (j * harmonic)))


def embezzlement_fidelity(
    catalyst: SchmidtVector,
    target: SchmidtVector,
    cap: int = DEFAULT_CAP,
    max_terms: int | None = None,
) -> float:
    """Best fidelity of ``catalyst (x) |00> -> catalyst (x) target``.

    Only the ``len(catalyst)`` largest products can pair with a nonzero
    catalyst amplitude. Below `cap` they come from a full sort; above it they
    are streamed from a k-way merge. Passing `max_terms` truncates the aligned
    sum, which gives a lower bound since every term is nonnegative.
    """
    c = catalyst.coeffs
    n = c.size
    terms = n if max_terms is None else min(n, max_terms)
    check_cap(terms, cap)
    if n * len(target) <= cap:
        top = sorted_products(catalyst, target, cap=cap)[:terms]
    else:
        streams = [_scaled(c, float(t)) for t in target.coeffs if t > 0]
        top = np.fromiter(islice(heapq.merge(*streams, reverse=True), terms), dtype=float, count=-1)
        top = pad(top, terms)
    return min(float(np.dot(c[:terms], top)), 1.0)


def _scaled(values: np.ndarray, factor: float):
    for x in values:
        yield factor * float(x)


def nogo_report(lam: SchmidtVector, cap: int = DEFAULT_CAP) -> NoGoReport:
    fid = self_embezzlement_fidelity(lam, cap=cap)
    dist = trace_distance_from_fidelity(fid)
    return NoGoReport(
        catalyst=lam,
        lambda1=lam.lambda1,
        fidelity_max=fid,
        trace_distance_min=dist,
        lemma_distance=min_rearrangement_distance(lam.probs(), cap=cap),
        admissible=lam.lambda1 <= ADMISSIBLE_LAMBDA1 + 1e-12,
        bound_satisfied=dist >= LEMMA_BOUND - BOUND_TOL,
    )
