"""Exact check that a site permutation turns ``psi (x) phi (x) phi`` into ``psi (x) psi``.

States evolve by composition with the automorphism: the final state on a
generator ``g`` is the initial state on ``alpha(g)``. The check compares
``initial(alpha(g))`` with ``target(g)`` as integers.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .automorphism import SitePermutation, apply_automorphism, canonical_sigma
from .pauli import LETTERS, PauliString, Site, format_generator
from .states import PairingState, eval_state, initial_state, target_state

REGISTERS = ("A1", "A2", "B1", "B2")
MAX_SAMPLE_WEIGHT = 16
MAX_COUNTEREXAMPLES = 20


@dataclass
class VerificationReport:
    window: int
    max_weight: int
    sample_count: int
    seed: int
    enumerated: int = 0
    sampled: int = 0
    extra: int = 0
    nonzero: int = 0
    mismatches: int = 0
    counterexamples: list[str] = field(default_factory=list)

    @property
    def checked(self) -> int:
        return self.enumerated + self.sampled + self.extra

    @property
    def passed(self) -> bool:
        return self.mismatches == 0


def window_sites(half_width: int, registers: Sequence[str] = REGISTERS) -> list[Site]:
    return [Site(r, i) for r in registers for i in range(-half_width, half_width)]


def enumerate_generators(sites: Sequence[Site], max_weight: int) -> Iterable[PauliString]:
    letters = list(LETTERS.values())
    for w in range(max_weight + 1):
        for chosen in itertools.combinations(sites, w):
            for combo in itertools.product(letters, repeat=w):
                yield PauliString(zip(chosen, combo))


def random_generators(
    sites: Sequence[Site], count: int, seed: int, max_weight: int = MAX_SAMPLE_WEIGHT
) -> Iterable[PauliString]:
    """Weight uniform in ``[1, max_weight]``, distinct uniform sites, uniform letters."""
    rng = random.Random(seed)
    letters = list(LETTERS.values())
    top = min(max_weight, len(sites))
    for _ in range(count):
        w = rng.randint(1, top)
        chosen = rng.sample(sites, w)
        yield PauliString({s: rng.choice(letters) for s in chosen})


def mirrored_generators(
    half_width: int, count: int, seed: int, max_weight: int = MAX_SAMPLE_WEIGHT
) -> Iterable[PauliString]:
    """Random generators built from matching A/B letters at equal (slot, index).

    Uniform sampling almost never hits a generator with a nonzero value; these
    put the same letter on both halves of candidate pairs so both states are
    exercised on their EPR structure, with an occasional unmatched Z.
    """
    rng = random.Random(seed)
    letters = list(LETTERS.values())
    cells = [(slot, i) for slot in (1, 2) for i in range(-half_width, half_width)]
    for _ in range(count):
        k = rng.randint(1, max(1, min(max_weight // 2, len(cells))))
        out = {}
        for slot, i in rng.sample(cells, k):
            letter = rng.choice(letters)
            if rng.random() < 0.1:
                out[Site(f"A{slot}", i)] = LETTERS["Z"]
            else:
                out[Site(f"A{slot}", i)] = letter
                out[Site(f"B{slot}", i)] = letter
        yield PauliString(out)


def check_generator(
    g: PauliString,
    sigma: SitePermutation,
    initial: PairingState,
    target: PairingState,
) -> tuple[int, int]:
    return eval_state(initial, apply_automorphism(sigma, g)), eval_state(target, g)


def verify_self_embezzlement(
    half_width: int,
    max_weight: int,
    sample_count: int,
    seed: int,
    sigma: SitePermutation | None = None,
    extra_generators: Sequence[PauliString] = (),
    mirrored_count: int = 0,
) -> VerificationReport:
    """Compare ``initial(alpha(g))`` and ``target(g)`` on many generators ``g``.

    Covers every generator on ``[-half_width, half_width)`` of the four
    registers with weight at most `max_weight`, then `sample_count` seeded
    random generators (weight <= 16), `mirrored_count` pair-structured ones,
    and any `extra_generators`. Mismatches are counted, not raised.
    """
    if seed is None:
        raise ValueError("a seed is required")
    sigma = sigma or canonical_sigma()
    initial, target = initial_state(), target_state()
    report = VerificationReport(half_width, max_weight, sample_count, seed)
    sites = window_sites(half_width)

    def run(gens: Iterable[PauliString], counter: str) -> None:
        for g in gens:
            lhs, rhs = check_generator(g, sigma, initial, target)
            setattr(report, counter, getattr(report, counter) + 1)
            report.nonzero += rhs != 0
            if lhs != rhs:
                report.mismatches += 1
                if len(report.counterexamples) < MAX_COUNTEREXAMPLES:
                    report.counterexamples.append(format_generator(g))

    run(enumerate_generators(sites, max_weight), "enumerated")
    samples = itertools.chain(
        random_generators(sites, sample_count, seed),
        mirrored_generators(half_width, mirrored_count, seed + 1),
    )
    run(samples, "sampled")
    run(extra_generators, "extra")
    return report
