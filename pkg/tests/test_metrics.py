import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opfidelity.errors import BadDistribution, DimensionMismatch, EnvTooSmall
from opfidelity.linalg import kron, psd_sqrt, trace_norm
from opfidelity.metrics import (
    classical_fidelity,
    fidelity,
    pure_overlap,
    random_purification_sweep,
    test_pass_probability as pass_probability,
    uhlmann_optimal_purifications,
    uhlmann_variational,
)
from opfidelity.states import (
    PureState,
    basis_state,
    random_density,
    random_pure,
    random_unitary,
    reduce,
    validate_density,
)

from conftest import random_pairs

INV_SQRT2 = 1 / math.sqrt(2)


def test_fidelity_identical():
    rho = random_density(3, 2, 1)
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)


def test_fidelity_diag_example(diag_pair):
    rho, sigma = diag_pair
    expected = classical_fidelity([0.5, 0.5], [1.0, 0.0])
    assert expected == pytest.approx(0.70710678118654752, abs=1e-15)
    assert fidelity(rho, sigma) == pytest.approx(expected, abs=1e-12)


def test_fidelity_orthogonal():
    assert fidelity(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == 0.0


def test_fidelity_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        fidelity(np.eye(2) / 2, np.eye(3) / 3)


def test_pure_overlap_examples():
    zero, one = basis_state(2, 0), basis_state(2, 1)
    plus = PureState(np.array([1, 1]) / math.sqrt(2))
    assert pure_overlap(zero, zero) == 1.0
    assert pure_overlap(zero, one) == 0.0
    assert pure_overlap(plus, zero) == pytest.approx(abs(np.vdot(plus.amplitudes, zero.amplitudes)))
    assert pure_overlap(plus, zero) == pytest.approx(INV_SQRT2, abs=1e-15)


def test_pass_probability_examples():
    zero, one = basis_state(2, 0), basis_state(2, 1)
    plus = PureState(np.array([1, 1]) / math.sqrt(2))
    assert pass_probability(zero, zero) == 1.0
    assert pass_probability(zero, one) == 0.0
    assert pass_probability(plus, zero) == pytest.approx(0.5, abs=1e-15)


def test_classical_fidelity_examples():
    assert classical_fidelity([0.2, 0.8], [0.2, 0.8]) == pytest.approx(1.0)
    assert classical_fidelity([1, 0], [0, 1]) == 0.0
    assert classical_fidelity([0.5, 0.5], [1, 0]) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(BadDistribution):
        classical_fidelity([0.5, 0.6], [1, 0])
    with pytest.raises(BadDistribution):
        classical_fidelity([1.5, -0.5], [1, 0])


def test_pure_state_fidelity_reduces_to_overlap():
    for s in range(50):
        psi, phi = random_pure(3, 2 * s), random_pure(3, 2 * s + 1)
        assert abs(fidelity(psi, phi) - pure_overlap(psi, phi)) <= 1e-9


def test_fidelity_properties_on_ensemble():
    for rho, sigma in random_pairs(100, dims=(2, 3, 4, 5), seed=300):
        f = fidelity(rho, sigma)
        assert 0.0 <= f <= 1.0
        assert abs(f - fidelity(sigma, rho)) <= 1e-10
        cross = trace_norm(psd_sqrt(sigma.matrix) @ psd_sqrt(rho.matrix))
        assert abs(f - cross) <= 1e-9


def test_unitary_invariance():
    for i, (rho, sigma) in enumerate(random_pairs(40, seed=700)):
        u = random_unitary(rho.dim, i)
        a = validate_density(u @ rho.matrix @ u.conj().T)
        b = validate_density(u @ sigma.matrix @ u.conj().T)
        assert abs(fidelity(a, b) - fidelity(rho, sigma)) <= 1e-9


def test_tensor_multiplicativity():
    pairs = random_pairs(20, dims=(2, 3), seed=900)
    for (r1, s1), (r2, s2) in zip(pairs[::2], pairs[1::2]):
        joint = fidelity(validate_density(kron(r1.matrix, r2.matrix)), validate_density(kron(s1.matrix, s2.matrix)))
        assert abs(joint - fidelity(r1, s1) * fidelity(r2, s2)) <= 1e-8


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_commuting_states_match_classical(d, seed):
    rng = np.random.default_rng(seed)
    p, q = rng.random(d), rng.random(d) * (rng.random(d) > 0.4)
    q[0] += 0.05
    p, q = p / p.sum(), q / q.sum()
    f = fidelity(validate_density(np.diag(p)), validate_density(np.diag(q)))
    assert abs(f - classical_fidelity(p, q)) <= 1e-10


def _check_uhlmann(res, rho, sigma, f):
    psi0, phi0 = res.psi0.vector.amplitudes, res.phi0.vector.amplitudes
    assert abs(abs(np.vdot(psi0, phi0)) - f) <= 1e-8
    assert res.overlap.imag == 0 and res.overlap.real >= 0
    assert np.abs(reduce(res.psi0).matrix - np.asarray(rho)).max() <= 1e-8
    assert np.abs(reduce(res.phi0).matrix - np.asarray(sigma)).max() <= 1e-8


def test_uhlmann_equal_states():
    rho = random_density(3, 3, 4)
    res = uhlmann_optimal_purifications(rho, rho)
    assert res.overlap.real == pytest.approx(1.0, abs=1e-12)
    _check_uhlmann(res, rho, rho, 1.0)


def test_uhlmann_pure_states_give_product_purifications():
    psi, phi = random_pure(3, 1), random_pure(3, 2)
    res = uhlmann_optimal_purifications(psi.to_density(), phi.to_density())
    assert res.overlap.real == pytest.approx(pure_overlap(psi, phi), abs=1e-12)
    for p in (res.psi0, res.phi0):
        # product vectors have Schmidt rank one
        s = np.linalg.svd(p.vector.amplitudes.reshape(3, 3), compute_uv=False)
        assert s[1] <= 1e-12


def test_uhlmann_diag_example(diag_pair):
    rho, sigma = diag_pair
    res = uhlmann_optimal_purifications(validate_density(rho), validate_density(sigma), 2)
    assert res.overlap.real == pytest.approx(INV_SQRT2, abs=1e-12)
    _check_uhlmann(res, rho, sigma, fidelity(rho, sigma))


def test_uhlmann_larger_environment():
    rho, sigma = random_density(3, 3, 5), random_density(3, 2, 6)
    res = uhlmann_optimal_purifications(rho, sigma, 5)
    assert res.psi0.dim_e == 5
    _check_uhlmann(res, rho, sigma, fidelity(rho, sigma))


def test_uhlmann_env_too_small():
    with pytest.raises(EnvTooSmall):
        uhlmann_optimal_purifications(random_density(3, 3, 1), random_density(3, 3, 2), 2)


def test_uhlmann_ensemble():
    for rho, sigma in random_pairs(60, seed=40):
        _check_uhlmann(uhlmann_optimal_purifications(rho, sigma), rho, sigma, fidelity(rho, sigma))


def test_variational_equal_states():
    rho = random_density(2, 2, 3)
    assert uhlmann_variational(rho, rho, seed=1).final == pytest.approx(1.0, abs=1e-5)


def test_variational_diag_example(diag_pair):
    tr = uhlmann_variational(*diag_pair, seed=2)
    assert abs(tr.final - INV_SQRT2) <= 1e-5
    assert tr.final <= INV_SQRT2 + 1e-7


def test_variational_qutrit():
    rho, sigma = random_density(3, 3, 77), random_density(3, 2, 78)
    tr = uhlmann_variational(rho, sigma, seed=5)
    f = fidelity(rho, sigma)
    assert abs(tr.final - f) <= 1e-5
    assert np.all(np.diff(tr.best_overlap_per_iteration) >= 0)
    assert np.all(tr.best_overlap_per_iteration >= 0)
    assert len(tr.restart_finals) == 8


def test_variational_never_exceeds_fidelity():
    for i, (rho, sigma) in enumerate(random_pairs(15, seed=55)):
        tr = uhlmann_variational(rho, sigma, restarts=2, seed=i)
        assert tr.final <= fidelity(rho, sigma) + 1e-7


def test_sweep_examples(diag_pair):
    rho = random_density(2, 2, 9)
    assert random_purification_sweep(rho, rho, trials=50, seed=1) <= 1.0
    assert random_purification_sweep(*diag_pair, trials=500, seed=3) <= INV_SQRT2 + 1e-9
    assert random_purification_sweep(*diag_pair, trials=0) == 0.0
