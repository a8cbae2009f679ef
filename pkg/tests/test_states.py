import numpy as np
import pytest

from opfidelity.errors import BadRank, BadTrace, EnvTooSmall, NotHermitian, NotNormalized, NotPSD
from opfidelity.linalg import env_index, herm_eig, partial_trace_env
from opfidelity.rng import complex_gaussian, derive_seed, generator
from opfidelity.states import (
    DensityMatrix,
    PureState,
    Purification,
    pure_state,
    random_density,
    random_pure,
    random_unitary,
    reduce,
    standard_purification,
    validate_density,
)


def test_validate_maximally_mixed_unchanged():
    m = np.eye(2, dtype=complex) / 2
    rho = validate_density(m)
    np.testing.assert_array_equal(rho.matrix, m)
    assert rho.corrections == ()


def test_validate_bad_trace():
    with pytest.raises(BadTrace):
        validate_density(np.diag([0.9, 0.0]))


def test_validate_not_psd():
    with pytest.raises(NotPSD):
        validate_density(np.diag([1.01, -0.01]))


def test_validate_not_hermitian():
    with pytest.raises(NotHermitian):
        validate_density(np.array([[0.5, 0.1], [0.0, 0.5]]))


def test_validate_repairs_small_deviations():
    rho = validate_density(np.diag([1.0 + 5e-11, -3e-11]), tol=1e-10)
    assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-15)
    assert np.linalg.eigvalsh(rho.matrix).min() >= 0
    assert len(rho.corrections) == 2


def test_density_matrix_is_immutable():
    rho = validate_density(np.eye(2) / 2)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_pure_state_norm_check():
    with pytest.raises(NotNormalized):
        pure_state([1.0, 1.0])
    assert pure_state([1.0, 0.0]).dim == 2


def test_standard_purification_pure_input():
    rho = validate_density(np.diag([1.0, 0.0]))
    p = standard_purification(rho, 2)
    expected = np.zeros(4)
    expected[env_index(0, 0, 2)] = 1
    np.testing.assert_allclose(p.vector.amplitudes, expected, atol=1e-15)


def test_standard_purification_maximally_mixed():
    p = standard_purification(validate_density(np.eye(2) / 2), 2)
    # Schmidt coefficients of a maximally entangled state
    s = np.linalg.svd(p.vector.amplitudes.reshape(2, 2), compute_uv=False)
    np.testing.assert_allclose(s, [1 / np.sqrt(2)] * 2, atol=1e-15)
    np.testing.assert_allclose(partial_trace_env(p.vector.projector(), 2, 2), np.eye(2) / 2, atol=1e-15)


def test_standard_purification_env_too_small():
    with pytest.raises(EnvTooSmall):
        standard_purification(random_density(3, 3, 1), 2)


def test_standard_purification_small_env_for_low_rank():
    rho = random_density(4, 2, 3)
    p = standard_purification(rho, 2)
    np.testing.assert_allclose(reduce(p).matrix, rho.matrix, atol=1e-12)


def test_standard_purification_larger_env():
    rho = random_density(3, 3, 8)
    p = standard_purification(rho, 5)
    assert (p.dim_e, p.dim_q) == (5, 3)
    np.testing.assert_allclose(reduce(p).matrix, rho.matrix, atol=1e-12)


def test_standard_purification_is_canonical():
    rho = random_density(3, 2, 11)
    a = standard_purification(rho).vector.amplitudes.reshape(3, 3)
    for row in a:
        nz = np.flatnonzero(np.abs(row) > 1e-12)
        if nz.size:
            assert abs(row[nz[0]].imag) < 1e-15 and row[nz[0]].real > 0


def test_reduce_product_state():
    psi = random_pure(3, 4)
    vec = np.kron([1, 0], psi.amplitudes)
    rho = reduce(Purification(2, 3, PureState(vec)))
    np.testing.assert_allclose(rho.matrix, psi.projector(), atol=1e-15)


def test_reduce_bell():
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(reduce(Purification(2, 2, PureState(bell))).matrix, np.eye(2) / 2)


def test_purification_roundtrip_ensemble():
    worst = 0.0
    for i in range(100):
        d = 2 + i % 4
        rho = random_density(d, 1 + (i // 4) % d, 1000 + i)
        worst = max(worst, np.abs(reduce(standard_purification(rho, d)).matrix - rho.matrix).max())
    assert worst <= 1e-9


def test_random_density_rank_one_is_pure():
    rho = random_density(2, 1, 17)
    assert herm_eig(rho.matrix).eigenvalues[-1] == pytest.approx(1.0, abs=1e-10)


def test_random_density_deterministic():
    a, b = random_density(3, 2, 99), random_density(3, 2, 99)
    assert np.array_equal(a.matrix, b.matrix)
    assert not np.array_equal(a.matrix, random_density(3, 2, 100).matrix)


def test_random_density_full_rank_validates():
    rho = random_density(3, 3, 5)
    again = validate_density(rho.matrix)
    assert again.corrections == ()
    np.testing.assert_array_equal(again.matrix, rho.matrix)


def test_random_density_bad_rank():
    with pytest.raises(BadRank):
        random_density(2, 3, 0)
    with pytest.raises(BadRank):
        random_density(2, 0, 0)


def test_every_random_density_validates():
    for i in range(100):
        d = 2 + i % 4
        rho = random_density(d, 1 + i % d, i)
        assert validate_density(rho.matrix).corrections == ()


def test_random_unitary_and_pure():
    u = random_unitary(3, 21)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(3), atol=1e-10)
    assert abs(np.linalg.norm(random_pure(4, 21).amplitudes) - 1) <= 1e-12
    assert np.array_equal(random_unitary(3, 21), u)
    assert np.array_equal(random_pure(4, 5).amplitudes, random_pure(4, 5).amplitudes)


def test_random_unitary_gram_schmidt_phase_convention():
    # R = U^dagger Z must be upper triangular with positive real diagonal
    z = complex_gaussian(generator(33), (4, 4))
    u = random_unitary(4, 33)
    r = u.conj().T @ z
    np.testing.assert_allclose(np.tril(r, -1), 0, atol=1e-12)
    assert np.all(np.diag(r).real > 0)
    np.testing.assert_allclose(np.diag(r).imag, 0, atol=1e-12)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_random_unitary_first_moment(dim):
    fixed = random_unitary(dim, 123456)
    plain, rotated = [], []
    for s in range(2000):
        u = random_unitary(dim, derive_seed(7, dim, s))
        plain.append(abs(u[0, 0]) ** 2)
        rotated.append(abs((fixed @ u)[0, 0]) ** 2)
    assert abs(np.mean(plain) - 1 / dim) <= 0.02
    assert abs(np.mean(rotated) - 1 / dim) <= 0.02


def test_complex_gaussian_moments():
    z = complex_gaussian(generator(1), (200000,))
    assert abs(z.real.mean()) < 0.01 and abs(z.imag.mean()) < 0.01
    assert abs(z.real.var() - 1) < 0.02 and abs(z.imag.var() - 1) < 0.02
    assert abs(np.mean(z.real * z.imag)) < 0.01


def test_seed_splitting():
    assert derive_seed(5, 1) != derive_seed(5, 2)
    assert derive_seed(5, 1) == derive_seed(5, 1)
    assert 0 <= derive_seed(-1) < 2**64
