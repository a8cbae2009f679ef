"""Quantum channels in Kraus form and their Stinespring dilations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadRank,
    CompletionFailure,
    DimensionMismatch,
    NotTracePreserving,
    TooManyKraus,
)
from .linalg import as_matrix, complete_basis, dagger, fro, partial_trace_env
from .states import DensityMatrix, as_density, random_unitary, validate_density

PAULI_I = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    dim_q: int
    kraus: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.kraus)


def completeness_defect(ops: Sequence[np.ndarray]) -> float:
    """``||sum_k K_k^dagger K_k - I||_F``."""
    d = ops[0].shape[1]
    total = sum(dagger(k) @ k for k in ops)
    return fro(total - np.eye(d))


def validate_kraus(ops, tol: float = 1e-9) -> KrausChannel:
    ops = [as_matrix(k, square=True) for k in ops]
    if not ops:
        raise DimensionMismatch("a channel needs at least one Kraus operator")
    d = ops[0].shape[0]
    for i, k in enumerate(ops):
        if k.shape != (d, d):
            raise DimensionMismatch(f"Kraus operator {i} has shape {k.shape}, expected {(d, d)}")
    defect = completeness_defect(ops)
    if defect > tol:
        raise NotTracePreserving(f"||sum K^dagger K - I||_F = {defect:.3e} exceeds {tol:.1e}")
    frozen = []
    for k in ops:
        k = k.copy()
        k.setflags(write=False)
        frozen.append(k)
    return KrausChannel(d, tuple(frozen))


def identity_channel(dim: int) -> KrausChannel:
    return validate_kraus([np.eye(dim)])


def bit_flip(p: float) -> KrausChannel:
    return validate_kraus([np.sqrt(1 - p) * PAULI_I, np.sqrt(p) * PAULI_X])


def fully_depolarizing_qubit() -> KrausChannel:
    return validate_kraus([P / 2 for P in (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)])


def completely_depolarizing(dim: int) -> KrausChannel:
    """``rho -> I/dim`` via the ``dim**2`` operators ``|i><j| / sqrt(dim)``."""
    ops = []
    for i in range(dim):
        for j in range(dim):
            k = np.zeros((dim, dim), dtype=np.complex128)
            k[i, j] = 1.0 / np.sqrt(dim)
            ops.append(k)
    return validate_kraus(ops)


def _check_dim(ch: KrausChannel, dim: int) -> None:
    if ch.dim_q != dim:
        raise DimensionMismatch(f"channel on dimension {ch.dim_q} given input of dimension {dim}")


def apply(ch: KrausChannel, state) -> DensityMatrix:
    """``sum_k K rho K^dagger``; pure inputs are taken as their projectors."""
    rho = as_density(state)
    _check_dim(ch, rho.dim)
    out = sum(k @ rho.matrix @ dagger(k) for k in ch.kraus)
    return validate_density(out, tol=1e-8)


def compose(g: KrausChannel, e: KrausChannel) -> KrausChannel:
    """``g o e``: apply ``e`` first, then ``g``."""
    if g.dim_q != e.dim_q:
        raise DimensionMismatch(f"cannot compose channels on {g.dim_q} and {e.dim_q}")
    return KrausChannel(g.dim_q, tuple(gk @ ek for gk in g.kraus for ek in e.kraus))


def choi(ch: KrausChannel) -> np.ndarray:
    """``(id (x) E)(|Omega><Omega|)`` with unnormalized ``|Omega> = sum_k |k>|k>``."""
    vecs = np.array([k.T.reshape(-1) for k in ch.kraus])
    return vecs.T @ vecs.conj()


def channels_equal(a: KrausChannel, b: KrausChannel, tol: float = 1e-8) -> bool:
    return a.dim_q == b.dim_q and fro(choi(a) - choi(b)) <= tol


@dataclass(frozen=True, eq=False)
class StinespringDilation:
    """Unitary ``U`` on ``E (x) Q`` with the environment prepared in ``|env_init_index>``."""

    dim_q: int
    dim_e: int
    U: np.ndarray
    env_init_index: int = 0

    def isometry(self) -> np.ndarray:
        lo = self.env_init_index * self.dim_q
        return self.U[:, lo : lo + self.dim_q]


def dilation_from_isometry(iso: np.ndarray, dim_e: int, dim_q: int, env_init_index: int = 0):
    """Complete an isometry ``Q -> E (x) Q`` to a unitary whose ``env_init_index`` block is ``iso``."""
    n = dim_e * dim_q
    if iso.shape != (n, dim_q):
        raise DimensionMismatch(f"isometry has shape {iso.shape}, expected {(n, dim_q)}")
    cols = [iso[:, j] for j in range(dim_q)]
    rest = complete_basis(cols, n)[dim_q:]
    if len(rest) != n - dim_q:
        raise CompletionFailure(f"completion produced {len(rest)} of {n - dim_q} columns")
    lo = env_init_index * dim_q
    ordered = rest[:lo] + cols + rest[lo:]
    U = np.column_stack(ordered)
    defect = fro(dagger(U) @ U - np.eye(n))
    if defect > 1e-9:
        raise CompletionFailure(f"completed dilation has ||U^dagger U - I||_F = {defect:.3e}")
    U.setflags(write=False)
    return StinespringDilation(dim_q, dim_e, U, env_init_index)


def stinespring_dilate(ch: KrausChannel) -> StinespringDilation:
    """Unitary dilation with a ``dim_q**2``-dimensional environment.

    Kraus lists shorter than ``dim_q**2`` are padded with zero operators.
    """
    dq = ch.dim_q
    de = dq * dq
    if len(ch.kraus) > de:
        raise TooManyKraus(f"{len(ch.kraus)} Kraus operators exceed environment dimension {de}")
    iso = np.zeros((de * dq, dq), dtype=np.complex128)
    for k, op in enumerate(ch.kraus):
        iso[k * dq : (k + 1) * dq, :] = op
    return dilation_from_isometry(iso, de, dq)


def apply_dilation(d: StinespringDilation, state) -> DensityMatrix:
    """``tr_E[U (|0><0| (x) rho) U^dagger]``."""
    rho = as_density(state)
    if rho.dim != d.dim_q:
        raise DimensionMismatch(f"dilation on dimension {d.dim_q} given input of dimension {rho.dim}")
    w = d.isometry()
    out = partial_trace_env(w @ rho.matrix @ dagger(w), d.dim_e, d.dim_q)
    return validate_density(out, tol=1e-8)


def kraus_from_dilation(d: StinespringDilation) -> KrausChannel:
    w = d.isometry()
    ops = [w[k * d.dim_q : (k + 1) * d.dim_q, :] for k in range(d.dim_e)]
    return validate_kraus(ops)


def random_channel(dim_q: int, kraus_rank: int, seed: int = 0) -> KrausChannel:
    """Kraus operators sliced from a Haar isometry ``Q -> E' (x) Q`` with ``dim E' = kraus_rank``."""
    if not 1 <= kraus_rank <= dim_q * dim_q:
        raise BadRank(f"Kraus rank must lie in [1, {dim_q * dim_q}], got {kraus_rank}")
    iso = random_unitary(kraus_rank * dim_q, seed)[:, :dim_q]
    return validate_kraus([iso[k * dim_q : (k + 1) * dim_q, :] for k in range(kraus_rank)])

