"""Validated state types, purifications and seeded random ensembles."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from .config import DEFAULTS
from .errors import (
    BadRank,
    BadTrace,
    DimensionMismatch,
    EnvTooSmall,
    NotHermitian,
    NotNormalized,
    NotPSD,
)
from .linalg import (
    as_matrix,
    complete_basis,
    dagger,
    fro,
    herm_eig,
    orthonormalize_against,
    partial_trace_env,
    roundoff_floor,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray
    corrections: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(self.projector())


@dataclass(frozen=True, eq=False)
class Purification:
    """Unit vector on ``E (x) Q`` (environment first)."""

    dim_e: int
    dim_q: int
    vector: PureState

    def __post_init__(self):
        if self.dim_e < 1 or self.dim_q < 1:
            raise DimensionMismatch("factor dimensions must be positive")
        if self.vector.dim != self.dim_e * self.dim_q:
            raise DimensionMismatch(
                f"vector of length {self.vector.dim} does not live on {self.dim_e}x{self.dim_q}"
            )


def validate_density(m, tol: float | None = None) -> DensityMatrix:
    """Admit ``m`` as a density matrix.

    Deviations within ``tol`` are repaired (Hermitian part taken, small
    negative eigenvalues clipped, trace renormalized) and listed in
    ``corrections``. Larger ones raise ``NotHermitian``, ``BadTrace`` or
    ``NotPSD``.
    """
    tol = DEFAULTS.trace if tol is None else tol
    if isinstance(m, DensityMatrix):
        m = m.matrix
    a = as_matrix(m, square=True)
    fixes = []

    asym = fro(a - dagger(a))
    if asym > tol * max(1.0, fro(a)):
        raise NotHermitian(f"||M - M^dagger||_F = {asym:.3e} exceeds tol {tol:.1e}")
    if asym > 0.0:
        a = (a + dagger(a)) / 2
        fixes.append(f"hermitized (deviation {asym:.3e})")

    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > tol:
        raise BadTrace(f"trace {tr:.12g} deviates from 1 by {abs(tr - 1.0):.3e} > {tol:.1e}")

    w, v = herm_eig(a, tol=max(tol, DEFAULTS.hermitian))
    if w[0] < -tol:
        raise NotPSD(f"eigenvalue {w[0]:.3e} below -{tol:.1e}")
    # negatives inside the solver's roundoff band are left alone so that
    # validation is idempotent
    if w[0] < -roundoff_floor(a):
        fixes.append(f"clipped negative eigenvalues (min {w[0]:.3e})")
        w = np.clip(w, 0.0, None)
        a = (v * w) @ dagger(v)
        a = (a + dagger(a)) / 2
        tr = float(np.trace(a).real)

    if abs(tr - 1.0) > 4 * a.shape[0] * np.finfo(float).eps:
        a = a / tr
        fixes.append(f"renormalized trace (was {tr:.17g})")
    return DensityMatrix(a, tuple(fixes))


def pure_state(v, tol: float | None = None) -> PureState:
    """Admit ``v`` as a unit vector; norm deviations within ``tol`` are renormalized."""
    tol = DEFAULTS.norm if tol is None else tol
    if isinstance(v, PureState):
        return v
    a = np.asarray(v, dtype=np.complex128)
    if a.ndim != 1 or a.size == 0:
        raise DimensionMismatch(f"expected a non-empty vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector has non-finite entries")
    nrm = float(np.linalg.norm(a))
    if abs(nrm - 1.0) > tol:
        raise NotNormalized(f"norm {nrm:.12g} deviates from 1 by {abs(nrm - 1.0):.3e} > {tol:.1e}")
    if abs(nrm - 1.0) > 4 * np.finfo(float).eps:
        a = a / nrm
    return PureState(a)


def basis_state(dim: int, index: int = 0) -> PureState:
    e = np.zeros(dim, dtype=np.complex128)
    e[index] = 1.0
    return PureState(e)


def as_density(x) -> DensityMatrix:
    """Coerce a PureState or matrix-like to a DensityMatrix."""
    if isinstance(x, DensityMatrix):
        return x
    if isinstance(x, PureState):
        return x.to_density()
    return validate_density(x)


def _canonical_phase(vecs: np.ndarray, cutoff: float = 1e-12) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real positive."""
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        k = int(np.argmax(np.abs(col) > cutoff))
        out[:, j] = col * (abs(col[k]) / col[k])
    return out


def spectrum_descending(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    w, v = herm_eig(rho.matrix)
    w = w[::-1]
    w = np.where(w > roundoff_floor(rho.matrix), w, 0.0)
    return w, _canonical_phase(v[:, ::-1])


def standard_purification(rho: DensityMatrix, dim_e: int | None = None) -> Purification:
    """``sum_i sqrt(p_i) |i>_E |u_i>_Q`` over the eigenpairs of ``rho``, largest first."""
    rho = as_density(rho)
    dim_q = rho.dim
    dim_e = dim_q if dim_e is None else int(dim_e)
    p, u = spectrum_descending(rho)
    rank = int(np.sum(p > DEFAULTS.psd))
    if dim_e < max(rank, 1):
        raise EnvTooSmall(f"environment dimension {dim_e} < rank {rank}")
    k = min(dim_e, dim_q)
    amp = np.zeros((dim_e, dim_q), dtype=np.complex128)
    amp[:k, :] = (np.sqrt(p[:k])[:, None] * u[:, :k].T)
    vec = amp.reshape(-1)
    return Purification(dim_e, dim_q, PureState(vec / np.linalg.norm(vec)))


def reduce(p: Purification) -> DensityMatrix:
    """Partial trace over the environment of ``|p><p|``."""
    proj = p.vector.projector()
    return validate_density(partial_trace_env(proj, p.dim_e, p.dim_q), tol=1e-9)


def _check_dim(dim: int) -> int:
    dim = int(dim)
    if dim < 1:
        raise DimensionMismatch(f"dimension must be positive, got {dim}")
    return dim


def random_density(dim: int, rank: int | None = None, seed: int = 0) -> DensityMatrix:
    """``G G^dagger / tr(G G^dagger)`` for a ``dim x rank`` complex Gaussian ``G``."""
    dim = _check_dim(dim)
    rank = dim if rank is None else int(rank)
    if not 1 <= rank <= dim:
        raise BadRank(f"rank must lie in [1, {dim}], got {rank}")
    g = _rng.complex_gaussian(_rng.generator(seed), (dim, rank))
    m = g @ dagger(g)
    m = (m + dagger(m)) / 2
    return validate_density(m / np.trace(m).real)


def random_pure(dim: int, seed: int = 0) -> PureState:
    dim = _check_dim(dim)
    z = _rng.complex_gaussian(_rng.generator(seed), (dim,))
    return PureState(z / np.linalg.norm(z))


def random_unitary(dim: int, seed: int = 0) -> np.ndarray:
    """Haar unitary: Gram-Schmidt on the columns of a complex Gaussian matrix.

    Gram-Schmidt leaves the triangular factor with a real positive diagonal,
    which is the phase convention that makes the result Haar distributed.
    """
    dim = _check_dim(dim)
    z = _rng.complex_gaussian(_rng.generator(seed), (dim, dim))
    cols: list[np.ndarray] = []
    for j in range(dim):
        r, nrm = orthonormalize_against(z[:, j], cols)
        if nrm < 1e-8:  # measure-zero degeneracy
            continue
        cols.append(r / nrm)
    cols = complete_basis(cols, dim)
    return np.column_stack(cols)
