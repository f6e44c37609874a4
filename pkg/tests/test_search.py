import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdiscrim.acceptance import finite_difference_error, ixz_gates
from qdiscrim.certificates import certify_block_family, certify_not_r_assisted
from qdiscrim.discrimination import verify
from qdiscrim.errors import InvalidRank, ZeroFactor
from qdiscrim.gates import GateSet, family_block, family_max, family_sqrt_d, family_sqrt_rd, pauli_xz
from qdiscrim.search import (
    NOT_FOUND_LABEL,
    SearchOptions,
    objective_and_gradient,
    search_density,
    search_diagonal,
)

from conftest import random_gateset

SOUND = SearchOptions(restarts=200)


def test_objective_examples():
    one = GateSet(3, ["I"], [np.eye(3)])
    f, g = objective_and_gradient(one, np.ones((3, 2)))
    assert f == 0 and np.allclose(g, 0)
    ix = GateSet(2, ["I", "X"], [np.eye(2), pauli_xz(2, 1, 0)])
    f, _ = objective_and_gradient(ix, np.array([1.0, 0.0]))
    assert f == 0


def test_objective_scale_invariant(rng):
    gates = random_gateset(4, 3, rng)
    S = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    assert np.isclose(objective_and_gradient(gates, S)[0], objective_and_gradient(gates, 3.7j * S)[0])


def test_objective_zero_factor():
    with pytest.raises(ZeroFactor):
        objective_and_gradient(ixz_gates(), np.zeros((2, 1)))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.integers(2, 4), st.integers(0, 10**6))
def test_gradient_matches_finite_differences(d, k, seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(1, d + 1))
    gates = random_gateset(d, k, rng)
    S = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    assert finite_difference_error(gates, S / np.linalg.norm(S)) <= 1e-5


def test_search_family_max():
    gates, _ = family_max(4, 2)
    out = search_density(gates, 2, SearchOptions())
    assert out.feasible and out.best_residual <= 1e-9
    assert verify(gates, out.density, 2).passed


def test_search_ixz_not_found():
    out = search_density(ixz_gates(), 1, SOUND)
    assert not out.feasible and out.best_residual >= 1e-2
    assert out.to_dict()["label"] == NOT_FOUND_LABEL


def test_maximally_mixed_shortcut():
    out = search_density(family_sqrt_rd(4, 2), 4, SearchOptions())
    assert out.feasible and out.restarts_used == 0
    assert np.allclose(out.density.matrix, np.eye(4) / 4)


def test_search_rank_range():
    with pytest.raises(InvalidRank):
        search_density(ixz_gates(), 3, SearchOptions())


def test_search_deterministic_across_workers(rng):
    gates = random_gateset(4, 3, rng)
    a = search_density(gates, 2, SearchOptions(restarts=8, seed=11))
    b = search_density(gates, 2, SearchOptions(restarts=8, seed=11, workers=4))
    assert a.restarts_used == b.restarts_used
    assert a.best_residual == b.best_residual
    if a.feasible:
        assert np.array_equal(a.density.matrix, b.density.matrix)


@pytest.mark.parametrize("d", range(2, 7))
def test_search_finds_family_max_witness(d):
    for r in range(1, d + 1):
        gates, _ = family_max(d, r)
        out = search_density(gates, r, SearchOptions())
        assert out.feasible, (d, r, out.best_residual)
        assert verify(gates, out.density, r).passed


def test_options_validation():
    with pytest.raises(ValueError):
        SearchOptions(tol=0)
    with pytest.raises(ValueError):
        SearchOptions(restarts=0)


def test_search_diagonal_examples():
    gates, _ = family_max(2, 1)
    out = search_diagonal(gates, 1)
    assert out.feasible and np.allclose(out.density.matrix, np.diag([1, 0]))
    gates, _ = family_block(8, 2)
    out = search_diagonal(gates, 8)
    assert out.feasible and verify(gates, out.density, 8).passed
    iz = GateSet(2, ["I", "Z"], [np.eye(2), pauli_xz(2, 0, 1)])
    assert not search_diagonal(iz, 1).feasible
    assert search_diagonal(iz, 2).feasible


@pytest.mark.parametrize("d", range(2, 10))
def test_soundness_sqrt_rd(d):
    # every certified-impossible rank must also defeat the numerical search
    for r in range(1, d):
        gates = family_sqrt_rd(d, r)
        assert certify_not_r_assisted(gates, r).not_r_assisted
        out = search_density(gates, r, SOUND)
        assert not out.feasible and out.best_residual > 1e-6, (d, r)


@pytest.mark.parametrize("d", range(4, 10))
def test_soundness_sqrt_d(d):
    gates = family_sqrt_d(d)
    assert certify_not_r_assisted(gates, 1).not_r_assisted
    out = search_density(gates, 1, SOUND)
    assert not out.feasible and out.best_residual > 1e-6


@pytest.mark.parametrize("d", [6, 8])
def test_soundness_block(d):
    gates, witness = family_block(d, 2)
    assert certify_block_family(d, 2, gates).not_r_assisted
    assert not search_density(gates, 2, SOUND).feasible
    assert verify(gates, witness, d).passed
