"""Command-line front end.

Exit codes: 0 on success or passing check, 1 when a check fails, 2 on usage,
parse or validation errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import channels as ch
from . import corollary as cor
from . import metrics as fid
from . import io
from .errors import FidelityError
from .linalg import fro
from .states import DensityMatrix, PureState, random_density, random_pure, reduce
from .suite import SUITES, SuiteConfig, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _val(x: float) -> str:
    return f"{x:.17g}"


def _res(x: float) -> str:
    return f"{x:.3g}"


def _pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).reshape(-1)]


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def _state(path) -> DensityMatrix | PureState:
    return io.parse_state_file(path)


def _pure(path) -> PureState:
    x = io.parse_state_file(path)
    if not isinstance(x, PureState):
        raise UsageError(f"{path}: expected a pure state")
    return x


def cmd_fidelity(args) -> int:
    rho, sigma = _state(args.rho), _state(args.sigma)
    f = fid.fidelity(rho, sigma)
    _emit(args, {"fidelity": f}, [_val(f)])
    return EXIT_OK


def cmd_purify(args) -> int:
    rho, sigma = _state(args.rho), _state(args.sigma)
    res = fid.uhlmann_optimal_purifications(rho, sigma, args.dim_e)
    r_rho = fro(reduce(res.psi0).matrix - fid.as_density(rho).matrix)
    r_sigma = fro(reduce(res.phi0).matrix - fid.as_density(sigma).matrix)
    payload = {
        "fidelity": res.fidelity,
        "overlap": res.overlap.real,
        "dim_e": res.psi0.dim_e,
        "dim_q": res.psi0.dim_q,
        "psi0": _pairs(res.psi0.vector.amplitudes),
        "phi0": _pairs(res.phi0.vector.amplitudes),
        "residuals": {"reduce_rho": r_rho, "reduce_sigma": r_sigma},
    }
    lines = [
        f"fidelity  {_val(res.fidelity)}",
        f"overlap   {_val(res.overlap.real)}",
        f"dim E x Q {res.psi0.dim_e} x {res.psi0.dim_q}",
        f"residuals reduce(psi0)-rho {_res(r_rho)}  reduce(phi0)-sigma {_res(r_sigma)}",
    ]
    if args.variational:
        trace = fid.uhlmann_variational(rho, sigma, args.dim_e, seed=args.seed)
        payload["variational"] = {"final": trace.final, "iterations": trace.iterations}
        lines.append(f"variational {_val(trace.final)} after {trace.iterations} iterations")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_witness(args) -> int:
    rho, sigma = _state(args.rho), _state(args.sigma)
    w = cor.construct_witness(rho, sigma)
    rep = cor.verify_witness(w, rho, sigma, args.tol)
    if args.out:
        prefix = Path(args.out)
        io.serialize_state(w.psi, prefix.with_name(prefix.name + ".psi.qst"))
        io.serialize_state(w.phi, prefix.with_name(prefix.name + ".phi.qst"))
        io.serialize_channel(w.channel, prefix.with_name(prefix.name + ".channel.qch"))
    payload = {
        "passed": rep.passed,
        "fidelity": w.fidelity_target,
        "overlap": w.overlap,
        "kraus_count": len(w.channel),
        "psi": _pairs(w.psi.amplitudes),
        "phi": _pairs(w.phi.amplitudes),
        "residuals": {
            "rho": rep.residual_rho,
            "sigma": rep.residual_sigma,
            "overlap": rep.residual_overlap,
        },
    }
    lines = [
        f"fidelity  {_val(w.fidelity_target)}",
        f"overlap   {_val(w.overlap)}",
        f"kraus operators {len(w.channel)}",
        f"residuals E(psi)-rho {_res(rep.residual_rho)}  E(phi)-sigma {_res(rep.residual_sigma)}"
        f"  overlap {_res(rep.residual_overlap)}",
        "PASS" if rep.passed else "FAIL",
    ]
    _emit(args, payload, lines)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_dilate(args) -> int:
    chan = io.parse_channel_file(args.channel)
    dil = ch.stinespring_dilate(chan)
    unitarity = fro(dil.U.conj().T @ dil.U - np.eye(dil.U.shape[0]))
    roundtrip = fro(ch.choi(ch.kraus_from_dilation(dil)) - ch.choi(chan))
    ok = unitarity <= 1e-9 and roundtrip <= args.tol
    payload = {
        "passed": ok,
        "dim_q": dil.dim_q,
        "dim_e": dil.dim_e,
        "env_init_index": dil.env_init_index,
        "residuals": {"unitarity": unitarity, "choi_roundtrip": roundtrip},
    }
    if args.json:
        payload["U"] = [_pairs(row) for row in dil.U]
    lines = [
        f"dim Q {dil.dim_q}  dim E {dil.dim_e}",
        f"residuals unitarity {_res(unitarity)}  choi roundtrip {_res(roundtrip)}",
        "PASS" if ok else "FAIL",
    ]
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_check_bound(args) -> int:
    chan = io.parse_channel_file(args.channel)
    psi, phi = _pure(args.psi), _pure(args.phi)
    r = cor.overlap_upper_bound_check(chan, psi, phi)
    ok = r >= -args.tol
    _emit(args, {"passed": ok, "residual": r}, [f"residual {_res(r)}", "PASS" if ok else "FAIL"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_check_monotonicity(args) -> int:
    g = io.parse_channel_file(args.channel)
    rho, sigma = _state(args.rho), _state(args.sigma)
    r = cor.monotonicity_check(g, rho, sigma)
    ok = r >= -args.tol
    payload = {"passed": ok, "residual": r}
    lines = [f"residual {_res(r)}"]
    if args.via_witness:
        rep = cor.monotonicity_via_witness(g, rho, sigma, args.tol)
        ok = ok and rep.passed
        payload["passed"] = ok
        payload["via_witness"] = {
            "passed": rep.passed,
            "residual_g_rho": rep.residual_g_rho,
            "residual_g_sigma": rep.residual_g_sigma,
            "bound_residual": rep.bound_residual,
            "direct_residual": rep.direct_residual,
        }
        lines.append(
            f"via witness: (G.E)(psi)-G(rho) {_res(rep.residual_g_rho)}"
            f"  (G.E)(phi)-G(sigma) {_res(rep.residual_g_sigma)}"
            f"  bound {_res(rep.bound_residual)}"
        )
    lines.append("PASS" if ok else "FAIL")
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_FAIL


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def cmd_suite(args) -> int:
    suites = tuple(args.suites.split(",")) if args.suites else SUITES
    try:
        config = SuiteConfig(seed=args.seed, trials=args.trials, dims=args.dims, suites=suites)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.tol_given:
        config.tolerances = {k: args.tol for k in config.tolerances}
    report = run_suites(config)
    if args.json:
        print(json.dumps(report.to_dict(timing=not args.no_timing), indent=2))
    else:
        for r in report.results:
            head = f"{r.name:<13} {r.passed_trials}/{r.trials} trials"
            if not args.no_timing:
                head += f"  {r.seconds:.2f}s"
            print(head + ("  PASS" if r.ok else "  FAIL"))
            for name, c in r.checks.items():
                print(
                    f"    {name:<18} worst {_res(c.worst):>10}  tol {_res(c.tol):>7}"
                    f"  {c.passed}/{c.count}"
                )
            if r.failing_seeds:
                print(f"    failing seeds: {', '.join(map(str, r.failing_seeds[:10]))}")
        print("PASS" if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_random_state(args) -> int:
    if args.pure:
        x = random_pure(args.dim, args.seed)
    else:
        x = random_density(args.dim, args.rank or args.dim, args.seed)
    _write_or_print(x, args.out)
    return EXIT_OK


def cmd_random_channel(args) -> int:
    x = ch.random_channel(args.dim, args.kraus_rank, args.seed)
    _write_or_print(x, args.out)
    return EXIT_OK


def _write_or_print(x, out) -> None:
    if out:
        if isinstance(x, ch.KrausChannel):
            io.serialize_channel(x, out)
        else:
            io.serialize_state(x, out)
    else:
        sys.stdout.write(io.dumps(x))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--tol", type=float, default=None, help="pass tolerance")
    common.add_argument("--no-timing", action="store_true", help="omit wall-clock times")

    parser = argparse.ArgumentParser(
        prog="opfidelity", description="Fidelity, optimal purifications and channel witnesses."
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        p.set_defaults(func=func)
        return p

    p = add("fidelity", cmd_fidelity, "fidelity of two states")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)

    p = add("purify", cmd_purify, "purifications whose overlap equals the fidelity")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--dim-e", type=int, default=None)
    p.add_argument("--variational", action="store_true", help="also run the gradient ascent")

    p = add("witness", cmd_witness, "pure pair and channel achieving the fidelity")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--out", help="write PREFIX.psi.qst, PREFIX.phi.qst, PREFIX.channel.qch")

    p = add("dilate", cmd_dilate, "unitary dilation of a channel")
    p.add_argument("--channel", required=True)

    p = add("check-bound", cmd_check_bound, "F(E(psi), E(phi)) >= |<psi|phi>|")
    p.add_argument("--channel", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--phi", required=True)

    p = add("check-monotonicity", cmd_check_monotonicity, "F(G(rho), G(sigma)) >= F(rho, sigma)")
    p.add_argument("--channel", required=True)
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--via-witness", action="store_true")

    p = add("suite", cmd_suite, "run the randomized property suites")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dims", type=_parse_dims, default=(2, 3, 4))
    p.add_argument("--suites", default=None, help=f"comma-separated subset of {','.join(SUITES)}")

    p = add("random-state", cmd_random_state, "draw a random state")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--pure", action="store_true")
    p.add_argument("--out")

    p = add("random-channel", cmd_random_channel, "draw a random channel")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--kraus-rank", type=int, required=True)
    p.add_argument("--out")
    return parser


def run_command(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.tol_given = args.tol is not None
    if args.tol is None:
        args.tol = 1e-8
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FidelityError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
