"""Fidelity of mixed states and optimal purifications.

Purification overlaps are handled in matrix form: a vector on ``E (x) Q``
reshaped to a ``dim_e x dim_q`` array ``A`` (row = environment index). Acting
with ``V (x) I`` on the vector multiplies ``A`` from the left by ``V``, and

    <psi0| (V (x) I) |phi0> = tr(A^dagger V B) = tr(V B A^dagger),

so the best environment unitary is read off the polar decomposition of the
cross operator ``B A^dagger``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng as _rng
from .config import DEFAULTS
from .errors import (
    BadDistribution,
    DimensionMismatch,
    EnvTooSmall,
    NoConvergence,
    NumericsError,
)
from .linalg import dagger, polar_unitary, psd_sqrt
from .states import (
    DensityMatrix,
    PureState,
    Purification,
    as_density,
    random_unitary,
    standard_purification,
)


def _pair(rho, sigma) -> tuple[DensityMatrix, DensityMatrix]:
    rho, sigma = as_density(rho), as_density(sigma)
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"states of dimension {rho.dim} and {sigma.dim}")
    return rho, sigma


def _clamp_unit(x: float, what: str) -> float:
    slack = DEFAULTS.fidelity_clamp
    if x > 1.0 + slack or x < -slack:
        raise NumericsError(f"{what} = {x!r} lies outside [0, 1] beyond {slack:.0e}")
    return min(max(x, 0.0), 1.0)


def fidelity(rho, sigma) -> float:
    """``tr sqrt(sqrt(rho) sigma sqrt(rho))``.

    Accepts ``DensityMatrix``, ``PureState`` or plain arrays.
    """
    rho, sigma = _pair(rho, sigma)
    root = psd_sqrt(rho.matrix)
    inner = root @ sigma.matrix @ root
    inner = (inner + dagger(inner)) / 2
    scale = float(np.linalg.norm(rho.matrix, 2) * np.linalg.norm(sigma.matrix, 2))
    value = float(np.trace(psd_sqrt(inner, scale=scale)).real)
    return _clamp_unit(value, "fidelity")


def pure_overlap(psi: PureState, phi: PureState) -> float:
    if psi.dim != phi.dim:
        raise DimensionMismatch(f"states of dimension {psi.dim} and {phi.dim}")
    return _clamp_unit(float(abs(np.vdot(psi.amplitudes, phi.amplitudes))), "overlap")


def test_pass_probability(psi: PureState, phi: PureState) -> float:
    """Probability that ``phi`` passes a test for being ``psi``."""
    return pure_overlap(psi, phi) ** 2


# keep pytest from collecting the function above when it is imported into a test module
test_pass_probability.__test__ = False


def classical_fidelity(p, q, tol: float = 1e-10) -> float:
    """Bhattacharyya coefficient ``sum_i sqrt(p_i q_i)`` of two distributions."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise BadDistribution(f"distributions of shapes {p.shape} and {q.shape}")
    for name, d in (("p", p), ("q", q)):
        if np.any(d < 0) or abs(d.sum() - 1.0) > tol:
            raise BadDistribution(f"{name} is not a probability vector (sum {d.sum():.12g})")
    return float(np.sum(np.sqrt(p * q)))


@dataclass(frozen=True, eq=False)
class UhlmannResult:
    fidelity: float
    psi0: Purification
    phi0: Purification
    overlap: complex


def _amplitudes(p: Purification) -> np.ndarray:
    return p.vector.amplitudes.reshape(p.dim_e, p.dim_q)


def _cross_operator(rho, sigma, dim_e):
    psi0 = standard_purification(rho, dim_e)
    phi_std = standard_purification(sigma, dim_e)
    a = _amplitudes(psi0)
    b = _amplitudes(phi_std)
    return psi0, phi_std, b @ dagger(a)


def _env_dim(rho: DensityMatrix, dim_e) -> int:
    dim_e = rho.dim if dim_e is None else int(dim_e)
    if dim_e < rho.dim:
        raise EnvTooSmall(f"environment dimension {dim_e} < system dimension {rho.dim}")
    return dim_e


def uhlmann_optimal_purifications(rho, sigma, dim_e: int | None = None) -> UhlmannResult:
    """Purifications of ``rho`` and ``sigma`` whose overlap equals their fidelity.

    ``psi0`` is the standard purification of ``rho``; ``phi0`` is the standard
    purification of ``sigma`` with its environment rotated by the optimal
    unitary and a global phase making the overlap real and non-negative.
    """
    rho, sigma = _pair(rho, sigma)
    dim_e = _env_dim(rho, dim_e)
    psi0, phi_std, cross = _cross_operator(rho, sigma, dim_e)
    v = dagger(polar_unitary(cross))
    phi_vec = (v @ _amplitudes(phi_std)).reshape(-1)
    ov = np.vdot(psi0.vector.amplitudes, phi_vec)
    if abs(ov) > 0.0:
        phase = ov.conjugate() / abs(ov)
        phi_vec = phi_vec * phase
        ov = abs(ov)
    phi0 = Purification(dim_e, rho.dim, PureState(phi_vec / np.linalg.norm(phi_vec)))
    return UhlmannResult(fidelity(rho, sigma), psi0, phi0, complex(ov))


@dataclass(frozen=True)
class VariationalTrace:
    iterations: int
    best_overlap_per_iteration: np.ndarray
    final: float
    restart_finals: tuple[float, ...] = field(default=())
    converged: tuple[bool, ...] = field(default=())


def _cayley(omega: np.ndarray, t: float) -> np.ndarray:
    eye = np.eye(omega.shape[0])
    return np.linalg.solve(eye - 0.5 * t * omega, eye + 0.5 * t * omega)


def _gradient(cross, v):
    z = np.trace(v @ cross)
    phase = z.conjugate() / abs(z) if abs(z) > 0 else 1.0
    x = phase * (cross @ v)
    return abs(z), (dagger(x) - x) / 2  # left-trivialized Riemannian gradient


def _ascend(cross, v, max_iters, step_tol, memory=5):
    """Gradient ascent of ``|tr(V C)|`` on the unitary group.

    Steps are Cayley rotations ``V <- V (I - t/2 W)^-1 (I + t/2 W)`` along the
    Riemannian gradient ``W``, which keep ``V`` exactly unitary. The trial
    step length is the Barzilai-Borwein ratio of successive gradients and is
    halved until the value beats the worst of the last ``memory`` iterates.
    """
    value, omega = _gradient(cross, v)
    history = [value]
    t = 1.0
    converged = False
    for _ in range(max_iters):
        gnorm = float(np.linalg.norm(omega))
        if t * gnorm < step_tol or gnorm < step_tol:
            converged = True
            break
        reference = min(history[-memory:])
        while True:
            cand = v @ _cayley(omega, t)
            cand_value, cand_omega = _gradient(cross, cand)
            if cand_value > reference or t * gnorm < step_tol:
                break
            t *= 0.5
        if cand_value <= reference:
            converged = True
            break
        # BB step from the left-trivialized displacement and gradient change
        s_step = t * omega
        y = cand_omega - omega
        sy = float(np.real(np.vdot(s_step, y)))
        v, value, omega = cand, cand_value, cand_omega
        history.append(value)
        t = abs(float(np.real(np.vdot(s_step, s_step))) / sy) if sy != 0 else 2 * t
        t = min(max(t, 1e-6), 1e3)
    return max(history), history, converged


def uhlmann_variational(
    rho,
    sigma,
    dim_e: int | None = None,
    restarts: int = 8,
    max_iters: int = 500,
    step_tol: float = 1e-10,
    seed: int = 0,
) -> VariationalTrace:
    """Maximize ``|<psi0|(V (x) I)|phi0>|`` over environment unitaries ``V``.

    Each restart starts from a seeded Haar unitary. The merged trace records,
    per iteration, the best overlap reached so far by any restart.
    """
    rho, sigma = _pair(rho, sigma)
    dim_e = _env_dim(rho, dim_e)
    _, _, cross = _cross_operator(rho, sigma, dim_e)
    target = fidelity(rho, sigma)

    finals, histories, flags = [], [], []
    for r in range(restarts):
        v0 = random_unitary(dim_e, _rng.derive_seed(seed, r))
        value, history, ok = _ascend(cross, v0, max_iters, step_tol)
        finals.append(float(value))
        histories.append(np.maximum.accumulate(history))
        flags.append(ok)

    length = max(len(h) for h in histories)
    padded = np.array([np.pad(h, (0, length - len(h)), mode="edge") for h in histories])
    merged = padded.max(axis=0)
    final = float(merged[-1])
    if final < target - 1e-3:
        raise NoConvergence(
            f"all {restarts} restarts stalled: best {final:.6g} vs fidelity {target:.6g}"
        )
    return VariationalTrace(length - 1, merged, final, tuple(finals), tuple(flags))


class UhlmannBoundViolation(NumericsError):
    pass


def random_purification_sweep(
    rho, sigma, dim_e: int | None = None, trials: int = 100, seed: int = 0
) -> float:
    """Largest overlap seen over random environment twists of ``sigma``'s purification.

    Every sample is checked against the fidelity bound; an overshoot larger
    than 1e-9 raises :class:`UhlmannBoundViolation`.
    """
    rho, sigma = _pair(rho, sigma)
    dim_e = _env_dim(rho, dim_e)
    _, _, cross = _cross_operator(rho, sigma, dim_e)
    bound = fidelity(rho, sigma) + 1e-9
    best = 0.0
    for t in range(trials):
        v = random_unitary(dim_e, _rng.derive_seed(seed, t))
        value = float(abs(np.trace(v @ cross)))
        if value > bound:
            raise UhlmannBoundViolation(
                f"sample {t}: overlap {value!r} exceeds fidelity bound {bound!r}"
            )
        best = max(best, value)
    return best
