"""Command-line front end.

Exit codes: 0 success, 2 invalid parameters, 3 disagreement between
computation routes.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import INF, ParameterError, qkd_threshold
from .cloners import INDIVIDUAL, JOINT, KNOWN_PHASE, POLICIES, SYMMETRIC, CloneParams, clone
from .golden import golden_checks, mc_checks
from .montecarlo import ANCILLA_CIRCUIT, DIRECT, McConfig, mc_fidelity, mc_moments
from .report import ReportRow, format_value, json_value, render

EXIT_OK = 0
EXIT_PARAM = 2
EXIT_DISAGREE = 3

ROUTE_TOL = 1e-10
MC_SIGMAS = 4.0


class RouteDisagreement(Exception):
    pass


def parse_m(text: str):
    if text.strip().lower() in ("inf", "infinity"):
        return INF
    return _int(text)


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None


def parse_epsilon(text: str):
    if text.strip().lower() == "auto":
        return None
    return float(text)


def parse_squeeze(text: str):
    if text in POLICIES:
        return text
    if text.startswith("r="):
        return float(text[2:])
    raise argparse.ArgumentTypeError(
        f"squeeze must be one of {', '.join(POLICIES)} or r=<value>, got {text!r}"
    )


def parse_alpha(text: str) -> complex:
    return complex(text.replace(" ", "").replace("i", "j"))


def parse_range(text: str, allow_inf: bool = False) -> list:
    """``"1..3"``, ``"1-3"``, ``"1,2,5"`` or a single value."""
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        for sep in ("..", "-"):
            if sep in part:
                lo, hi = part.split(sep, 1)
                values.extend(range(_int(lo), _int(hi) + 1))
                break
        else:
            values.append(parse_m(part) if allow_inf else _int(part))
    return values


def _params(args) -> CloneParams:
    return CloneParams(
        N=args.n,
        M=args.m,
        alpha=args.alpha,
        epsilon=args.epsilon,
        squeeze=args.squeeze,
        displacement=args.displacement,
    )


def _run_row(machine: str, params: CloneParams, trajectories=None, seed=0,
             heterodyne=DIRECT, workers=1) -> ReportRow:
    rep = clone(machine, params)
    if rep.fidelity_circuit is not None and abs(rep.fidelity_circuit - rep.fidelity_analytic) > ROUTE_TOL:
        raise RouteDisagreement(
            f"circuit fidelity {rep.fidelity_circuit!r} != analytic {rep.fidelity_analytic!r}"
        )
    est = None
    if trajectories and params.M != INF:
        est = mc_fidelity(McConfig(params, machine, trajectories, seed, heterodyne), workers)
        if abs(est.mean - rep.fidelity_analytic) > max(MC_SIGMAS * est.stderr, 1e-12):
            raise RouteDisagreement(
                f"Monte Carlo fidelity {est.mean!r} +- {est.stderr!r} misses analytic "
                f"{rep.fidelity_analytic!r} by more than {MC_SIGMAS} sigma"
            )
    return ReportRow.from_report(rep, est, seed)


def cmd_clone(args) -> int:
    row = _run_row(args.machine, _params(args), args.trajectories, args.seed,
                   args.heterodyne, args.workers)
    sys.stdout.write(render([row], args.format))
    return EXIT_OK


def cmd_sweep(args) -> int:
    ns = sorted(set(parse_range(args.n)))
    ms = sorted(set(parse_range(args.m)))
    if not ns or not ms:
        raise ParameterError("empty N or M range")
    if args.machine == SYMMETRIC:
        policies = ["none"]
    else:
        policies = [parse_squeeze(p.strip()) for p in args.squeeze.split(",") if p.strip()]
        if not policies:
            raise ParameterError("empty squeeze policy list")
    rank = {p: i for i, p in enumerate(POLICIES)}
    policies = sorted(set(policies), key=lambda p: (rank.get(p, len(POLICIES)), str(p)))
    rows = []
    for n in ns:
        mvals = [m for m in ms if m > n] + ([INF] if args.include_inf else [])
        for m in mvals:
            for pol in policies:
                params = CloneParams(n, m, args.alpha, None, pol, args.displacement)
                rows.append(_run_row(args.machine, params, args.trajectories, args.seed,
                                     args.heterodyne, args.workers))
    if not rows:
        raise ParameterError("no (N, M) pair with M > N in the requested ranges")
    sys.stdout.write(render(rows, args.format))
    return EXIT_OK


def cmd_qkd(args) -> int:
    unknown = qkd_threshold(args.eta, False)
    known = qkd_threshold(args.eta, True)
    out = {
        "eta": json_value(args.eta),
        "unknown_phase": json_value(unknown.delta_max),
        "known_phase": json_value(known.delta_max),
    }
    if args.delta is not None:
        out["delta"] = json_value(args.delta)
        out["unknown_phase_verdict"] = unknown.verdict(args.delta)
        out["known_phase_verdict"] = known.verdict(args.delta)
    if args.format == "json":
        sys.stdout.write(json.dumps(out) + "\n")
    else:
        for k, v in out.items():
            sys.stdout.write(f"{k:<24} {format_value(v)}\n")
    return EXIT_OK


def cmd_paper_check(args) -> int:
    checks = golden_checks()
    if args.mc:
        checks += mc_checks(args.seed, args.trajectories, args.workers)
    sys.stdout.write(f"{'':6}{'check':<44} {'value':<20} {'expected':<20} tol\n")
    for c in checks:
        sys.stdout.write(c.line() + "\n")
    failed = sum(not c.passed for c in checks)
    sys.stdout.write(f"{len(checks) - failed}/{len(checks)} passed\n")
    return EXIT_OK if failed == 0 else EXIT_DISAGREE


def cmd_mc(args) -> int:
    params = _params(args)
    cfg = McConfig(params, args.machine, args.trajectories, args.seed, args.heterodyne)
    row = _run_row(args.machine, params, args.trajectories, args.seed, args.heterodyne, args.workers)
    mom = mc_moments(cfg, args.workers)
    if args.format == "csv":
        sys.stdout.write(render([row], "csv"))
        return EXIT_OK
    moments = {
        "mean_x": mom.mean[0], "mean_p": mom.mean[1],
        "mean_x_stderr": mom.mean_stderr[0], "mean_p_stderr": mom.mean_stderr[1],
        "var_x": mom.cov[0, 0], "var_p": mom.cov[1, 1], "cov_xp": mom.cov[0, 1],
        "var_x_stderr": mom.cov_stderr[0, 0], "var_p_stderr": mom.cov_stderr[1, 1],
    }
    if args.format == "json":
        sys.stdout.write(render([row], "json"))
        sys.stdout.write(json.dumps({k: json_value(float(v)) for k, v in moments.items()}) + "\n")
    else:
        sys.stdout.write(render([row], "table"))
        for k, v in moments.items():
            sys.stdout.write(f"mc {k:<16} {format_value(float(v))}\n")
    return EXIT_OK


def _clone_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--machine", choices=[SYMMETRIC, KNOWN_PHASE], default=SYMMETRIC)
    p.add_argument("--alpha", type=parse_alpha, default=1.0)
    p.add_argument("--displacement", choices=[JOINT, INDIVIDUAL], default=JOINT)
    p.add_argument("--seed", type=_int, default=0)
    p.add_argument("--heterodyne", choices=[DIRECT, ANCILLA_CIRCUIT], default=DIRECT)
    p.add_argument("--workers", type=_int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussclone", description="Gaussian coherent-state cloning simulator"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clone", help="run one cloning machine")
    _clone_flags(p)
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--m", type=parse_m, required=True)
    p.add_argument("--epsilon", type=parse_epsilon, default=None)
    p.add_argument("--squeeze", type=parse_squeeze, default="none")
    p.add_argument("--trajectories", type=_int, default=None)
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.set_defaults(func=cmd_clone)

    p = sub.add_parser("sweep", help="sweep N, M and squeeze policies")
    _clone_flags(p)
    p.add_argument("--n", required=True, help="e.g. 1..3 or 1,2,4")
    p.add_argument("--m", required=True, help="e.g. 2..4")
    p.add_argument("--squeeze", default="none", help="comma-separated policies")
    p.add_argument("--include-inf", action="store_true")
    p.add_argument("--trajectories", type=_int, default=None)
    p.add_argument("--format", choices=["table", "csv", "json"], default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("qkd", help="excess-noise thresholds")
    p.add_argument("--eta", type=float, required=True)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--format", choices=["table", "json"], default="json")
    p.set_defaults(func=cmd_qkd)

    p = sub.add_parser("paper-check", help="golden-value regression")
    p.add_argument("--mc", action="store_true")
    p.add_argument("--seed", type=_int, default=7)
    p.add_argument("--trajectories", type=_int, default=1_000_000)
    p.add_argument("--workers", type=_int, default=1)
    p.set_defaults(func=cmd_paper_check)

    p = sub.add_parser("mc", help="Monte Carlo fidelity and moments")
    _clone_flags(p)
    p.add_argument("--n", type=_int, required=True)
    p.add_argument("--m", type=parse_m, required=True)
    p.add_argument("--epsilon", type=parse_epsilon, default=None)
    p.add_argument("--squeeze", type=parse_squeeze, default="none")
    p.add_argument("--trajectories", type=_int, default=1_000_000)
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.set_defaults(func=cmd_mc)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARAM if exc.code else EXIT_OK
    try:
        return args.func(args)
    except RouteDisagreement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
