"""Symbolic CAR-algebra engine: Pauli strings, pairing states, site permutations."""
from .automorphism import (
    AffinePiece,
    SitePermutation,
    apply_automorphism,
    canonical_sigma,
    identity_permutation,
)
from .pauli import (
    LETTERS,
    AlgebraElement,
    PauliString,
    Site,
    adjoint,
    format_generator,
    operator_norm,
    parse_generator,
    pauli_mul,
    read_generators,
    to_matrix,
)
from .states import (
    PairingState,
    PairRule,
    all_zero_state,
    epr_chain_state,
    eval_element,
    eval_state,
    initial_state,
    purity_check,
    restrict_density,
    target_state,
)
from .verify import VerificationReport, verify_self_embezzlement
