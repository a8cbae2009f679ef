"""Seeded randomized property suites.

Each suite draws ``trials`` random cases (dimensions cycling through
``dims``), evaluates a handful of named checks per case and keeps, per check,
the worst residual. A residual is a non-negative error for equalities and the
negated signed slack for inequalities, so a check passes iff its residual is
at most its tolerance.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import channels as ch
from . import corollary as cor
from . import metrics as fid
from .linalg import fro, psd_sqrt, trace_norm
from .rng import derive_seed
from .states import (
    PureState,
    random_density,
    random_pure,
    random_unitary,
    reduce,
    validate_density,
)

SUITES = ("fidelity", "uhlmann", "dilation", "witness", "bound", "monotonicity")

DEFAULT_TOLERANCES = {
    "fidelity.cross_form": 1e-9,
    "fidelity.classical": 1e-10,
    "fidelity.self": 1e-10,
    "fidelity.symmetry": 1e-10,
    "fidelity.pure_reduction": 1e-9,
    "fidelity.pass_probability": 1e-12,
    "uhlmann.optimal_overlap": 1e-8,
    "uhlmann.reduction": 1e-8,
    "uhlmann.sweep_bound": 1e-9,
    "uhlmann.variational": 1e-5,
    "dilation.choi_roundtrip": 1e-8,
    "dilation.unitarity": 1e-9,
    "dilation.env_dim": 0.5,
    "dilation.action": 1e-9,
    "witness.rho": 1e-8,
    "witness.sigma": 1e-8,
    "witness.overlap": 1e-8,
    "bound.residual": 1e-8,
    "monotonicity.direct": 1e-8,
    "monotonicity.via_witness": 1e-8,
}

SWEEP_SAMPLES = 20
VARIATIONAL_RESTARTS = 4


@dataclass
class SuiteConfig:
    seed: int = 0
    trials: int = 100
    dims: tuple[int, ...] = (2, 3, 4)
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    suites: tuple[str, ...] = SUITES

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.dims or any(not 2 <= d <= 16 for d in self.dims):
            raise ValueError(f"dims must be a non-empty subset of [2, 16], got {self.dims}")
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")
        for name, tol in self.tolerances.items():
            if not tol > 0:
                raise ValueError(f"tolerance {name} must be positive")


@dataclass
class CheckStats:
    tol: float
    worst: float = float("-inf")
    passed: int = 0
    count: int = 0

    @property
    def ok(self) -> bool:
        return self.passed == self.count


@dataclass
class SuiteResult:
    name: str
    trials: int
    checks: dict[str, CheckStats]
    failing_seeds: list[int]
    seconds: float

    @property
    def passed_trials(self) -> int:
        return self.trials - len(self.failing_seeds)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())


@dataclass
class Report:
    config: SuiteConfig
    results: list[SuiteResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "seed": self.config.seed,
            "trials": self.config.trials,
            "dims": list(self.config.dims),
            "suites": {},
            "passed": self.ok,
        }
        for r in self.results:
            entry = {
                "passed": r.ok,
                "trials": r.trials,
                "passed_trials": r.passed_trials,
                "checks": {
                    name: {
                        "worst_residual": c.worst,
                        "tolerance": c.tol,
                        "passed": c.passed,
                        "count": c.count,
                    }
                    for name, c in r.checks.items()
                },
                "failing_seeds": r.failing_seeds,
            }
            if timing:
                entry["seconds"] = r.seconds
            out["suites"][r.name] = entry
        return out


def _ranks(d: int, t: int) -> tuple[int, int]:
    return 1 + t % d, 1 + (t // d) % d


def _trial_fidelity(d, t, s):
    r1, r2 = _ranks(d, t)
    rho = random_density(d, r1, derive_seed(s, 0))
    sigma = random_density(d, r2, derive_seed(s, 1))
    f = fid.fidelity(rho, sigma)
    out = {
        "cross_form": abs(f - trace_norm(psd_sqrt(sigma.matrix) @ psd_sqrt(rho.matrix))),
        "self": 1.0 - fid.fidelity(rho, rho),
        "symmetry": abs(f - fid.fidelity(sigma, rho)),
    }
    rng = np.random.default_rng(derive_seed(s, 2))
    p = rng.random(d)
    q = rng.random(d) * (rng.random(d) > 0.3)
    q[t % d] += 0.1
    p, q = p / p.sum(), q / q.sum()
    dp = validate_density(np.diag(p).astype(complex))
    dq = validate_density(np.diag(q).astype(complex))
    out["classical"] = abs(fid.fidelity(dp, dq) - fid.classical_fidelity(p, q))
    psi, phi = random_pure(d, derive_seed(s, 3)), random_pure(d, derive_seed(s, 4))
    ov = fid.pure_overlap(psi, phi)
    out["pure_reduction"] = abs(fid.fidelity(psi, phi) - ov)
    out["pass_probability"] = abs(fid.test_pass_probability(psi, phi) - ov * ov)
    return out


def _trial_uhlmann(d, t, s):
    r1, r2 = _ranks(d, t)
    rho = random_density(d, r1, derive_seed(s, 0))
    sigma = random_density(d, r2, derive_seed(s, 1))
    res = fid.uhlmann_optimal_purifications(rho, sigma)
    f = res.fidelity
    ov = abs(np.vdot(res.psi0.vector.amplitudes, res.phi0.vector.amplitudes))
    red = max(fro(reduce(res.psi0).matrix - rho.matrix), fro(reduce(res.phi0).matrix - sigma.matrix))
    sweep = fid.random_purification_sweep(rho, sigma, trials=SWEEP_SAMPLES, seed=derive_seed(s, 2))
    var = fid.uhlmann_variational(rho, sigma, restarts=VARIATIONAL_RESTARTS, seed=derive_seed(s, 3))
    return {
        "optimal_overlap": abs(ov - f),
        "reduction": red,
        "sweep_bound": sweep - f,
        "variational": abs(var.final - f),
    }


def _trial_dilation(d, t, s):
    rank = 1 + t % (d * d)
    chan = ch.random_channel(d, rank, derive_seed(s, 0))
    dil = ch.stinespring_dilate(chan)
    back = ch.kraus_from_dilation(dil)
    rho = random_density(d, d, derive_seed(s, 1))
    return {
        "choi_roundtrip": fro(ch.choi(back) - ch.choi(chan)),
        "unitarity": fro(dil.U.conj().T @ dil.U - np.eye(dil.U.shape[0])),
        "env_dim": float(dil.dim_e != d * d),
        "action": fro(ch.apply_dilation(dil, rho).matrix - ch.apply(chan, rho).matrix),
    }


def _trial_witness(d, t, s):
    if t == 0:  # identical states
        rho = random_density(d, 1 + t % d, derive_seed(s, 0))
        sigma = rho
    elif t == 1:  # orthogonal supports
        u = random_unitary(d, derive_seed(s, 0))
        rho = validate_density(np.outer(u[:, 0], u[:, 0].conj()))
        sigma = validate_density(np.outer(u[:, 1], u[:, 1].conj()))
    else:
        r1, r2 = _ranks(d, t)
        rho = random_density(d, r1, derive_seed(s, 0))
        sigma = random_density(d, r2, derive_seed(s, 1))
    w = cor.construct_witness(rho, sigma)
    rep = cor.verify_witness(w, rho, sigma)
    return {"rho": rep.residual_rho, "sigma": rep.residual_sigma, "overlap": rep.residual_overlap}


def _trial_bound(d, t, s):
    chan = ch.random_channel(d, 1 + t % (d * d), derive_seed(s, 0))
    psi: PureState = random_pure(d, derive_seed(s, 1))
    phi: PureState = random_pure(d, derive_seed(s, 2))
    return {"residual": -cor.overlap_upper_bound_check(chan, psi, phi)}


def _trial_monotonicity(d, t, s):
    r1, r2 = _ranks(d, t)
    g = ch.random_channel(d, 1 + t % (d * d), derive_seed(s, 0))
    rho = random_density(d, r1, derive_seed(s, 1))
    sigma = random_density(d, r2, derive_seed(s, 2))
    rep = cor.monotonicity_via_witness(g, rho, sigma)
    via = max(
        rep.witness.residual_rho,
        rep.witness.residual_sigma,
        rep.witness.residual_overlap,
        rep.residual_g_rho,
        rep.residual_g_sigma,
        -rep.bound_residual,
        -rep.direct_residual,
    )
    return {"direct": -cor.monotonicity_check(g, rho, sigma), "via_witness": via}


_TRIALS = {
    "fidelity": _trial_fidelity,
    "uhlmann": _trial_uhlmann,
    "dilation": _trial_dilation,
    "witness": _trial_witness,
    "bound": _trial_bound,
    "monotonicity": _trial_monotonicity,
}


def run_suite(name: str, config: SuiteConfig) -> SuiteResult:
    trial = _TRIALS[name]
    suite_key = SUITES.index(name)
    checks: dict[str, CheckStats] = {}
    failing: list[int] = []
    start = time.perf_counter()
    for t in range(config.trials):
        d = config.dims[t % len(config.dims)]
        s = derive_seed(config.seed, suite_key, t)
        residuals = trial(d, t // len(config.dims), s)
        bad = False
        for check, value in residuals.items():
            key = f"{name}.{check}"
            stats = checks.setdefault(check, CheckStats(config.tolerances.get(key, DEFAULT_TOLERANCES[key])))
            value = float(value)
            stats.count += 1
            stats.worst = max(stats.worst, value)
            if value <= stats.tol:
                stats.passed += 1
            else:
                bad = True
        if bad:
            failing.append(s)
    return SuiteResult(name, config.trials, checks, failing, time.perf_counter() - start)


def run_suites(config: SuiteConfig) -> Report:
    return Report(config, [run_suite(name, config) for name in config.suites])
