import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from selfembezzle.car import AlgebraElement, Site, all_zero_state, epr_chain_state, target_state
from selfembezzle.chsh import (
    CLASSICAL_BOUND,
    TSIRELSON_BOUND,
    ChshSettings,
    catalyst_admissible,
    chsh_value_abstract,
    chsh_value_matrix,
    planar_observable,
    standard_settings,
    violation_factor,
)
from selfembezzle.errors import LocalityError, ValidationError
from selfembezzle.schmidt import SchmidtVector

from conftest import SQ2

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
Z = np.diag([1, -1])
EPR = np.array([1, 0, 0, 1]) / SQ2
ZERO2 = np.array([1, 0, 0, 0])


def brute_chsh(psi, a0, a1, b0, b1):
    # full operator, independent of the correlator helper
    op = np.kron(a0, b0 + b1) + np.kron(a1, b0 - b1)
    return float(np.real(psi.conj() @ op @ psi))


class TestMatrix:
    def test_product_state_reaches_classical_bound(self):
        s = ChshSettings(Z, X, Z, Z)
        assert chsh_value_matrix(ZERO2, s, (2, 2)) == pytest.approx(2.0, abs=1e-12)

    def test_symmetric_settings_on_zero_state(self):
        s = ChshSettings(Z, X, Z, X)
        assert chsh_value_matrix(ZERO2, s, (2, 2)) == pytest.approx(1.0, abs=1e-12)

    def test_epr_tsirelson(self):
        s = ChshSettings(Z, X, (Z + X) / SQ2, (Z - X) / SQ2)
        assert chsh_value_matrix(EPR, s, (2, 2)) == pytest.approx(TSIRELSON_BOUND, abs=1e-12)

    @given(st.lists(st.floats(0, 2 * math.pi), min_size=4, max_size=4))
    def test_matches_brute_force(self, th):
        obs = [planar_observable(t) for t in th]
        s = ChshSettings(*obs)
        assert chsh_value_matrix(EPR, s, (2, 2)) == pytest.approx(brute_chsh(EPR, *obs), abs=1e-12)

    def test_grid_never_exceeds_tsirelson(self):
        grid = np.linspace(0, 2 * math.pi, 9)
        states = [EPR, ZERO2, np.array([0, 1, -1, 0]) / SQ2, np.array([0.6, 0, 0, 0.8])]
        best = -np.inf
        for psi in states:
            for th in itertools.product(grid, repeat=4):
                v = chsh_value_matrix(psi, ChshSettings(*(planar_observable(t) for t in th)), (2, 2))
                best = max(best, abs(v))
        assert best <= TSIRELSON_BOUND + 1e-9
        assert best == pytest.approx(TSIRELSON_BOUND, abs=1e-9)

    @given(st.lists(st.floats(0, 2 * math.pi), min_size=4, max_size=4))
    def test_party_swap_symmetry(self, th):
        a0, a1, b0, b1 = (planar_observable(t) for t in th)
        v1 = chsh_value_matrix(EPR, ChshSettings(a0, a1, b0, b1), (2, 2))
        v2 = chsh_value_matrix(EPR, ChshSettings(b0, b1, a0, a1), (2, 2))
        assert v1 == pytest.approx(v2, abs=1e-12)

    def test_product_state_classical(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            u = rng.normal(size=2); u /= np.linalg.norm(u)
            v = rng.normal(size=2); v /= np.linalg.norm(v)
            obs = [planar_observable(t) for t in rng.uniform(0, 2 * math.pi, 4)]
            assert abs(chsh_value_matrix(np.kron(u, v), ChshSettings(*obs), (2, 2))) <= CLASSICAL_BOUND + 1e-12

    def test_bad_observable(self):
        with pytest.raises(ValidationError):
            ChshSettings(2 * Z, X, Z, X)
        with pytest.raises(ValidationError):
            ChshSettings(np.array([[0, 1], [0, 0]]), X, Z, X)

    def test_bad_cut(self):
        with pytest.raises(ValidationError):
            chsh_value_matrix(EPR, ChshSettings(Z, X, Z, X), (4, 1))
        with pytest.raises(ValidationError):
            chsh_value_matrix(EPR, ChshSettings(Z, X, Z, X), (3, 2))


class TestAbstract:
    def test_identity_settings(self):
        one = AlgebraElement.identity()
        s = ChshSettings(one, one, one, one)
        assert chsh_value_abstract(epr_chain_state(), s) == pytest.approx(2.0)

    def test_epr_chain(self):
        v = chsh_value_abstract(epr_chain_state(), standard_settings())
        assert v == pytest.approx(TSIRELSON_BOUND, abs=1e-12)
        assert violation_factor(v) == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_phi(self):
        v = chsh_value_abstract(all_zero_state(), standard_settings(Site("A1", 0), Site("B1", 0)))
        assert v == pytest.approx(math.sqrt(2), abs=1e-12)

    def test_new_pair_in_target(self):
        s = standard_settings(Site("A2", -5), Site("B2", -5))
        assert chsh_value_abstract(target_state(), s) == pytest.approx(TSIRELSON_BOUND, abs=1e-12)

    def test_unpaired_sites_give_product_value(self):
        s = standard_settings(Site("A1", -1), Site("B1", -2))
        assert abs(chsh_value_abstract(epr_chain_state(), s)) <= CLASSICAL_BOUND + 1e-12

    def test_locality(self):
        s = standard_settings()
        bad = ChshSettings(AlgebraElement.single("B1", -1, "Z"), s.a1, s.b0, s.b1)
        with pytest.raises(LocalityError):
            chsh_value_abstract(epr_chain_state(), bad)

    def test_non_self_adjoint_rejected(self):
        with pytest.raises(ValidationError):
            z = AlgebraElement.single("A1", -1, "Z")
            ChshSettings(AlgebraElement.single("A1", -1, "XZ"), z, AlgebraElement.single("B1", -1, "Z"), AlgebraElement.single("B1", -1, "Z"))


def test_violation_factor():
    assert violation_factor(2.0) == 1.0
    assert violation_factor(TSIRELSON_BOUND) == pytest.approx(math.sqrt(2))


class TestAdmissible:
    def test_epr(self):
        a = catalyst_admissible(SchmidtVector([1 / SQ2, 1 / SQ2]))
        assert a.admissible and a.eps0 == pytest.approx(1 / 50)

    def test_product(self):
        assert not catalyst_admissible(SchmidtVector([1.0])).admissible

    def test_threshold_edge(self):
        l1 = math.sqrt(2 / 3)
        assert catalyst_admissible(SchmidtVector([l1, math.sqrt(1 / 3)])).admissible
        assert not catalyst_admissible(SchmidtVector.from_unsorted([0.83, 0.5578], normalize=True)).admissible
