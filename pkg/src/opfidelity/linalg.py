"""Dense complex linear algebra kernels.

Everything here works on 2-D ``numpy.ndarray`` of dtype ``complex128``. The
eigensolver is a cyclic complex Jacobi method; SVD, polar decomposition,
matrix square roots and trace norms are derived from it so that the whole
package rests on a single diagonalization routine.

Composite systems are always ordered environment first: the basis index of
``|e>_E |q>_Q`` is ``e * dimQ + q`` (see :func:`env_index`).
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .config import DEFAULTS
from .errors import DimensionMismatch, NoConvergence, NotHermitian, NotPSD


class HermEigResult(NamedTuple):
    eigenvalues: np.ndarray  # ascending, real
    eigenvectors: np.ndarray  # orthonormal columns


class SVDResult(NamedTuple):
    U: np.ndarray
    s: np.ndarray  # descending, >= 0
    V: np.ndarray  # M = U @ diag(s) @ V^dagger


def as_matrix(m, square: bool = False) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or 0 in a.shape:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def fro(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def env_index(e: int, q: int, dim_q: int) -> int:
    """Row index of ``|e>_E |q>_Q`` in the composite basis."""
    return e * dim_q + q


def _offdiag_norm(a: np.ndarray) -> float:
    return fro(a - np.diag(np.diagonal(a)))


def herm_eig(m, tol: float | None = None, max_sweeps: int | None = None) -> HermEigResult:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns.
    """
    a = as_matrix(m, square=True).copy()
    herm_tol = DEFAULTS.hermitian if tol is None else tol
    max_sweeps = DEFAULTS.jacobi_sweeps if max_sweeps is None else max_sweeps
    norm = fro(a)
    asym = fro(a - dagger(a))
    if asym > herm_tol * max(1.0, norm):
        raise NotHermitian(f"||M - M^dagger||_F = {asym:.3e} exceeds {herm_tol:.1e}")
    a = (a + dagger(a)) / 2
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = DEFAULTS.jacobi_offdiag * norm
    # entries this small are zeroed outright instead of rotated
    negligible = 1e-3 * threshold / n

    for _ in range(max_sweeps + 1):
        if _offdiag_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= negligible:
                    a[p, q] = a[q, p] = 0.0
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                # rotation annihilating a[p, q]; phase first makes the 2x2 block real
                theta = (aqq - app) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ph = apq / mag
                sph = s * ph.conjugate()
                cph = c * ph.conjugate()

                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - sph * colq
                a[:, q] = s * colp + cph * colq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - s * ph * rowq
                a[q, :] = s * rowp + c * ph * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - sph * vq
                v[:, q] = s * vp + cph * vq
    else:
        raise NoConvergence(
            f"Jacobi iteration did not converge in {max_sweeps} sweeps "
            f"(off-diagonal mass {_offdiag_norm(a):.3e})"
        )

    w = np.diagonal(a).real.copy()
    order = np.argsort(w, kind="stable")
    return HermEigResult(w[order], v[:, order])


def _inf_norm(a: np.ndarray) -> float:
    return float(np.max(np.sum(np.abs(a), axis=1)))


def roundoff_floor(a: np.ndarray, ref: float | None = None) -> float:
    """Eigenvalue magnitude indistinguishable from zero for the Jacobi solver."""
    ref = _inf_norm(a) if ref is None else ref
    return 16.0 * a.shape[0] * np.finfo(float).eps * ref


def psd_sqrt(m, tol: float | None = None, scale: float | None = None) -> np.ndarray:
    """Principal square root of a Hermitian positive-semidefinite matrix.

    Eigenvalues in ``[-tol * ||M||_inf, 0)`` are clipped to zero; anything
    more negative raises :class:`NotPSD`. Eigenvalues within a few ulps of
    ``||M||_inf`` of zero are also set to zero, so exact null spaces survive
    roundoff instead of contributing ``sqrt(eps)``-sized garbage.

    ``scale`` replaces ``||M||_inf`` in both thresholds when ``M`` was
    computed from larger operands and inherits their absolute roundoff.
    """
    a = as_matrix(m, square=True)
    tol = DEFAULTS.psd if tol is None else tol
    w, v = herm_eig(a)
    ref = _inf_norm(a) if scale is None else max(scale, _inf_norm(a))
    floor = -tol * ref
    if w[0] < floor:
        raise NotPSD(f"eigenvalue {w[0]:.3e} below -tol*||M||_inf = {floor:.3e}")
    root = np.sqrt(np.where(w > roundoff_floor(a, ref), w, 0.0))
    r = (v * root) @ dagger(v)
    return (r + dagger(r)) / 2


def orthonormalize_against(
    x: np.ndarray, basis: list[np.ndarray], passes: int = 2
) -> tuple[np.ndarray, float]:
    """Modified Gram-Schmidt of ``x`` against orthonormal ``basis``.

    Returns the residual vector (unnormalized) and its norm.
    """
    r = np.array(x, dtype=np.complex128)
    for _ in range(passes):
        for b in basis:
            r = r - (b.conj() @ r) * b
    return r, float(np.linalg.norm(r))


def complete_basis(columns: list[np.ndarray], dim: int, drop_tol: float = 1e-8) -> list[np.ndarray]:
    """Extend orthonormal ``columns`` to a full orthonormal basis of C^dim.

    Candidates are the standard basis vectors in order; those whose residual
    after projection drops below ``drop_tol`` are skipped.
    """
    basis = list(columns)
    for k in range(dim):
        if len(basis) == dim:
            break
        e = np.zeros(dim, dtype=np.complex128)
        e[k] = 1.0
        r, nrm = orthonormalize_against(e, basis)
        if nrm < drop_tol:
            continue
        basis.append(r / nrm)
    return basis


def svd(m) -> SVDResult:
    """Thin singular value decomposition ``M = U diag(s) V^dagger``.

    Right singular vectors come from :func:`herm_eig` of ``M^dagger M``; left
    vectors are recovered as ``M v / ||M v||`` and re-orthogonalized, with null
    directions filled in by basis completion.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    k = min(rows, cols)
    _, vecs = herm_eig(dagger(a) @ a)
    vecs = vecs[:, ::-1][:, :k]
    images = a @ vecs
    s = np.linalg.norm(images, axis=0)
    order = np.argsort(-s, kind="stable")
    s = s[order]
    vecs = vecs[:, order]
    images = images[:, order]

    cutoff = DEFAULTS.svd_null * max(float(s[0]) if k else 0.0, np.finfo(float).tiny)
    slots: list[np.ndarray | None] = [None] * k
    found: list[np.ndarray] = []
    for i in range(k):
        if s[i] <= cutoff:
            continue
        r, nrm = orthonormalize_against(images[:, i] / s[i], found)
        if nrm < 0.5:
            # swamped by cancellation; filled in below like a null direction
            continue
        slots[i] = r / nrm
        found.append(slots[i])
    extra = iter(complete_basis(found, rows)[len(found):])
    U = np.column_stack([c if c is not None else next(extra) for c in slots])
    return SVDResult(U, s, vecs)


def polar_unitary(m) -> np.ndarray:
    """Unitary factor ``W`` of the polar decomposition ``M = W P``.

    For rank-deficient ``M`` the null directions are paired arbitrarily, so
    ``W`` is one of many valid unitary completions.
    """
    a = as_matrix(m, square=True)
    U, _, V = svd(a)
    return U @ dagger(V)


def trace_norm(m) -> float:
    return float(np.sum(svd(m).s))


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace_env(m, dim_e: int, dim_q: int) -> np.ndarray:
    """Trace out the first (environment) factor of an ``E (x) Q`` operator."""
    a = as_matrix(m, square=True)
    if a.shape[0] != dim_e * dim_q:
        raise DimensionMismatch(
            f"operator of size {a.shape[0]} is not on a {dim_e}x{dim_q} composite"
        )
    return np.einsum("eiej->ij", a.reshape(dim_e, dim_q, dim_e, dim_q))


def is_unitary(m, tol: float = 1e-9) -> bool:
    a = as_matrix(m, square=True)
    return fro(dagger(a) @ a - np.eye(a.shape[0])) <= tol
