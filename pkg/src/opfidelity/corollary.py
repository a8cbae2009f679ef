"""Fidelity as the best overlap of pure states mapped onto ``rho`` and ``sigma`` by one channel.

:func:`construct_witness` builds, for any pair of states, pure inputs
``psi``, ``phi`` and a channel ``E`` with ``E(psi) = rho``, ``E(phi) = sigma``
and ``|<psi|phi>| = F(rho, sigma)``. The remaining checks confirm numerically
that no channel does better and that channels never decrease fidelity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import KrausChannel, StinespringDilation, apply, compose, identity_channel, kraus_from_dilation
from .config import DEFAULTS
from .errors import DimensionMismatch, GramMismatch
from .metrics import fidelity, pure_overlap, uhlmann_optimal_purifications
from .linalg import complete_basis, dagger, orthonormalize_against
from .states import DensityMatrix, PureState, as_density, basis_state


def _vec(x) -> np.ndarray:
    if isinstance(x, PureState):
        return x.amplitudes
    return np.asarray(x, dtype=np.complex128)


def two_pair_unitary(a1, a2, b1, b2, tol: float | None = None) -> np.ndarray:
    """Unitary ``U`` with ``U a1 = b1`` and ``U a2 = b2``.

    Such a ``U`` exists iff the pairs have the same Gram matrix; for unit
    vectors that is ``<a1|a2> = <b1|b2>``. Both pairs are orthonormalized,
    the spans are mapped onto each other and the orthogonal complements are
    matched in basis-completion order.
    """
    tol = DEFAULTS.gram if tol is None else tol
    a1, a2, b1, b2 = (_vec(v) for v in (a1, a2, b1, b2))
    d = a1.shape[0]
    if any(v.shape != (d,) for v in (a2, b1, b2)):
        raise DimensionMismatch("all four vectors must share one dimension")
    ga = np.vdot(a1, a2)
    gb = np.vdot(b1, b2)
    if abs(ga - gb) > tol:
        raise GramMismatch(ga, gb, tol)

    xs = [a1 / np.linalg.norm(a1)]
    ys = [b1 / np.linalg.norm(b1)]
    ra, na = orthonormalize_against(a2, xs)
    rb, nb = orthonormalize_against(b2, ys)
    if min(na, nb) >= DEFAULTS.dependence:
        xs.append(ra / na)
        ys.append(rb / nb)
    X = np.column_stack(complete_basis(xs, d))
    Y = np.column_stack(complete_basis(ys, d))
    return Y @ dagger(X)


@dataclass(frozen=True, eq=False)
class CorollaryWitness:
    psi: PureState
    phi: PureState
    channel: KrausChannel
    overlap: float
    fidelity_target: float


def construct_witness(rho, sigma) -> CorollaryWitness:
    """Pure pair and channel achieving ``|<psi|phi>| = F(rho, sigma)``.

    The channel is the environment trace of a unitary taking
    ``|0>_E|psi>`` and ``|0>_E|phi>`` onto optimal Uhlmann purifications
    of ``rho`` and ``sigma``.
    """
    rho, sigma = as_density(rho), as_density(sigma)
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"states of dimension {rho.dim} and {sigma.dim}")
    dq = rho.dim
    if dq == 1:
        one = basis_state(1)
        return CorollaryWitness(one, one, identity_channel(1), 1.0, 1.0)

    uhl = uhlmann_optimal_purifications(rho, sigma, dq)
    f = min(max(uhl.overlap.real, 0.0), 1.0)
    psi = basis_state(dq, 0)
    amp = np.zeros(dq, dtype=np.complex128)
    amp[0] = f
    amp[1] = np.sqrt(1.0 - f * f)
    phi = PureState(amp)

    env0 = basis_state(dq, 0).amplitudes
    U = two_pair_unitary(
        np.kron(env0, psi.amplitudes),
        np.kron(env0, phi.amplitudes),
        uhl.psi0.vector.amplitudes,
        uhl.phi0.vector.amplitudes,
    )
    channel = kraus_from_dilation(StinespringDilation(dq, dq, U, 0))
    return CorollaryWitness(psi, phi, channel, pure_overlap(psi, phi), uhl.fidelity)


@dataclass(frozen=True)
class WitnessReport:
    passed: bool
    residual_rho: float
    residual_sigma: float
    residual_overlap: float
    tol: float


def verify_witness(w: CorollaryWitness, rho, sigma, tol: float = 1e-8) -> WitnessReport:
    rho, sigma = as_density(rho), as_density(sigma)
    if not (w.channel.dim_q == rho.dim == sigma.dim):
        raise DimensionMismatch("witness and states disagree on dimension")
    r_rho = float(np.linalg.norm(apply(w.channel, w.psi).matrix - rho.matrix))
    r_sigma = float(np.linalg.norm(apply(w.channel, w.phi).matrix - sigma.matrix))
    r_ov = abs(pure_overlap(w.psi, w.phi) - fidelity(rho, sigma))
    ok = max(r_rho, r_sigma, r_ov) <= tol
    return WitnessReport(ok, r_rho, r_sigma, r_ov, tol)


def overlap_upper_bound_check(ch: KrausChannel, psi: PureState, phi: PureState) -> float:
    """``F(E(psi), E(phi)) - |<psi|phi>|``; never below roundoff for a valid channel."""
    if not (ch.dim_q == psi.dim == phi.dim):
        raise DimensionMismatch("channel and states disagree on dimension")
    return fidelity(apply(ch, psi), apply(ch, phi)) - pure_overlap(psi, phi)


def monotonicity_check(g: KrausChannel, rho, sigma) -> float:
    """``F(G(rho), G(sigma)) - F(rho, sigma)``."""
    rho, sigma = as_density(rho), as_density(sigma)
    if not (g.dim_q == rho.dim == sigma.dim):
        raise DimensionMismatch("channel and states disagree on dimension")
    return fidelity(apply(g, rho), apply(g, sigma)) - fidelity(rho, sigma)


@dataclass(frozen=True)
class MonotonicityReport:
    passed: bool
    witness: WitnessReport
    residual_g_rho: float  # ||(G o E)(psi) - G(rho)||_F
    residual_g_sigma: float
    bound_residual: float  # F((G o E)(psi), (G o E)(phi)) - |<psi|phi>|
    direct_residual: float  # F(G(rho), G(sigma)) - F(rho, sigma)
    tol: float


def monotonicity_via_witness(g: KrausChannel, rho, sigma, tol: float = 1e-8) -> MonotonicityReport:
    """Monotonicity of fidelity, argued through the witness channel.

    With ``E`` from :func:`construct_witness`, ``G o E`` maps the witness pair
    to ``G(rho)`` and ``G(sigma)``, so their fidelity is bounded below by the
    witness overlap, which equals ``F(rho, sigma)``.
    """
    rho, sigma = as_density(rho), as_density(sigma)
    if not (g.dim_q == rho.dim == sigma.dim):
        raise DimensionMismatch("channel and states disagree on dimension")
    w = construct_witness(rho, sigma)
    wrep = verify_witness(w, rho, sigma, tol)
    c = compose(g, w.channel)
    g_rho, g_sigma = apply(g, rho), apply(g, sigma)
    r1 = float(np.linalg.norm(apply(c, w.psi).matrix - g_rho.matrix))
    r2 = float(np.linalg.norm(apply(c, w.phi).matrix - g_sigma.matrix))
    bound = overlap_upper_bound_check(c, w.psi, w.phi)
    direct = fidelity(g_rho, g_sigma) - w.overlap
    ok = wrep.passed and max(r1, r2) <= tol and min(bound, direct) >= -tol
    return MonotonicityReport(ok, wrep, r1, r2, bound, direct, tol)
