"""Command-line front end.

Subcommands: probs, sweep, weakvalue, fisher, estimate, montecarlo.
Angles are accepted in degrees only. CSV output is UTF-8 with a header
row, comma separators, LF line endings and floats printed with 12
significant digits; undefined cells are emitted as empty fields. JSON
output is a single object or array with stable key order. Identical
invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from . import errors
from .errors import WeakMeasError
from .estimation import (
    ConditionalPair,
    FisherReport,
    cramer_rao_bound,
    estimate_epsilon,
    extract_weak_value,
    fisher_information,
)
from .gatesim import COMPENSATED_PPBS, GateParams
from .montecarlo import ModelTag, model_distribution, run_ensemble
from .qstate import QubitState, linear_pol_state, stokes_hv
from .weakmodel import (
    SINGULARITY_THRESHOLD,
    JointDistribution,
    PostSelectOutcome,
    weak_value,
)

SWEEP_FORMAT_VERSION = "sweep-1"

SWEEP_COLUMNS = (
    "theta_deg",
    "p_DA",
    "p_AA",
    "p_DD",
    "p_AD",
    "wv_A",
    "wv_D",
    "eps_hat_A",
    "sigma_rel_A",
    "F_A",
    "F_D",
    "F_total",
    "format_version",
)

_IO_EXIT_CODE = 20


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return f"{value:.12g}"


def _exit_code_table() -> list[tuple[int, str]]:
    rows = [
        (err.exit_code, name)
        for name, err in vars(errors).items()
        if isinstance(err, type)
        and issubclass(err, WeakMeasError)
        and err is not WeakMeasError
    ]
    rows.append((_IO_EXIT_CODE, "I/O error"))
    rows.append((2, "invalid arguments"))
    return sorted(rows)


def _epilog() -> str:
    lines = ["exit codes:"]
    for code, name in _exit_code_table():
        lines.append(f"  {code:>3}  {name}")
    return "\n".join(lines)


def _postselect_basis(postselect_deg: float) -> tuple[QubitState, QubitState]:
    """Basis pair for a post-selection angle: the orthogonal partner maps
    to outcome label D, the analyzer state itself to label A. The default
    270 deg gives the diagonal (D, A) pair."""
    return linear_pol_state(postselect_deg - 180.0), linear_pol_state(postselect_deg)


def _gate_params(args) -> GateParams | None:
    if args.model != "exact-ppbs":
        return None
    t_v = args.tv if args.tv is not None else COMPENSATED_PPBS.t_v
    t_h = args.th if args.th is not None else COMPENSATED_PPBS.t_h
    a_h = args.ah if args.ah is not None else COMPENSATED_PPBS.a_h
    return GateParams(t_h=t_h, t_v=t_v, a_h=a_h)


def _distribution(args, theta: float, eps: float) -> JointDistribution:
    return model_distribution(
        theta,
        eps,
        ModelTag.parse(args.model),
        gate_params=_gate_params(args),
        f_basis=_postselect_basis(args.postselect),
    )


def _print_json(payload: dict, out=None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    (out or sys.stdout).write(text)


def cmd_probs(args) -> int:
    dist = _distribution(args, args.theta, args.epsilon)
    p_da, p_aa, p_dd, p_ad = dist.values()
    payload = {
        "theta_deg": args.theta,
        "epsilon": args.epsilon,
        "model": args.model,
        "p_DA": p_da,
        "p_AA": p_aa,
        "p_DD": p_dd,
        "p_AD": p_ad,
    }
    if args.format == "json":
        _print_json(payload)
    else:
        keys = ("p_DA", "p_AA", "p_DD", "p_AD")
        sys.stdout.write(",".join(keys) + "\n")
        sys.stdout.write(",".join(_fmt(payload[k]) for k in keys) + "\n")
    return 0


def _sweep_row(args, theta: float) -> dict:
    psi = linear_pol_state(theta)
    basis = _postselect_basis(args.postselect)
    obs = stokes_hv()

    row = dict.fromkeys(SWEEP_COLUMNS)
    row["theta_deg"] = theta
    row["format_version"] = SWEEP_FORMAT_VERSION

    report = fisher_information(psi, basis, obs=obs)
    f_a = report.per_f[PostSelectOutcome.A]
    f_d = report.per_f[PostSelectOutcome.D]
    row["F_A"], row["F_D"], row["F_total"] = f_a, f_d, report.total
    if f_a > SINGULARITY_THRESHOLD:
        row["sigma_rel_A"] = 1.0 / math.sqrt(f_a)

    wv_a = None
    try:
        wv_a = weak_value(psi, basis[1], obs).real
        row["wv_A"] = wv_a
    except WeakMeasError:
        pass
    try:
        row["wv_D"] = weak_value(psi, basis[0], obs).real
    except WeakMeasError:
        pass

    try:
        dist = _distribution(args, theta, args.epsilon)
    except WeakMeasError:
        dist = None
    if dist is not None:
        row["p_DA"], row["p_AA"], row["p_DD"], row["p_AD"] = dist.values()
        if wv_a is not None and dist.marginal_f(PostSelectOutcome.A) > 0.0:
            try:
                cond = ConditionalPair.from_joint(dist, PostSelectOutcome.A)
                row["eps_hat_A"] = estimate_epsilon(
                    cond, wv_a, PostSelectOutcome.A
                ).epsilon_hat
            except WeakMeasError:
                pass
    return row


def cmd_sweep(args) -> int:
    if args.theta_step <= 0:
        raise ValueError("--theta-step must be positive")
    if args.theta_start > args.theta_stop:
        raise ValueError("--theta-start must not exceed --theta-stop")
    thetas = []
    k = 0
    while True:
        theta = args.theta_start + k * args.theta_step
        if theta > args.theta_stop + 1e-9:
            break
        thetas.append(theta)
        k += 1

    rows = [_sweep_row(args, theta) for theta in thetas]
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        if args.format == "csv":
            handle.write(",".join(SWEEP_COLUMNS) + "\n")
            for row in rows:
                handle.write(",".join(_fmt(row[c]) for c in SWEEP_COLUMNS) + "\n")
        else:
            _print_json({"format": SWEEP_FORMAT_VERSION, "rows": rows}, out=handle)
    return 0


def cmd_weakvalue(args) -> int:
    psi = linear_pol_state(args.theta)
    basis = _postselect_basis(args.postselect)
    analytic = weak_value(psi, basis[1], stokes_hv()).real
    p_eps = model_distribution(args.theta, args.eps_probe, ModelTag.LINEAR, f_basis=basis)
    p_zero = model_distribution(args.theta, 0.0, ModelTag.LINEAR, f_basis=basis)
    finite_diff = extract_weak_value(p_eps, p_zero, PostSelectOutcome.A, args.eps_probe)
    _print_json(
        {
            "theta_deg": args.theta,
            "postselect_deg": args.postselect,
            "eps_probe": args.eps_probe,
            "wv_analytic": analytic,
            "wv_finite_difference": finite_diff,
        }
    )
    return 0


def cmd_fisher(args) -> int:
    psi = linear_pol_state(args.theta)
    report = fisher_information(psi, _postselect_basis(args.postselect))
    payload = {
        "theta_deg": args.theta,
        "postselect_deg": args.postselect,
        "F_A": report.per_f[PostSelectOutcome.A],
        "F_D": report.per_f[PostSelectOutcome.D],
        "F_total": report.total,
    }
    if args.shots is not None:
        payload["crb_total"] = cramer_rao_bound(report, args.shots)
        f_a = report.per_f[PostSelectOutcome.A]
        payload["crb_A"] = cramer_rao_bound(
            FisherReport({PostSelectOutcome.A: f_a}, f_a), args.shots
        )
    _print_json(payload)
    return 0


def cmd_estimate(args) -> int:
    psi = linear_pol_state(args.theta)
    basis = _postselect_basis(args.postselect)
    dist = _distribution(args, args.theta, args.epsilon)
    wv_ref = weak_value(psi, basis[1], stokes_hv()).real
    p_d, p_a = dist.conditional(PostSelectOutcome.A)
    n_events = None
    if args.shots is not None:
        # expected number of post-selected events among the shots
        n_events = args.shots * dist.marginal_f(PostSelectOutcome.A)
    cond = ConditionalPair(p_d, p_a, n_events=n_events)
    result = estimate_epsilon(cond, wv_ref, PostSelectOutcome.A)
    payload = {
        "theta_deg": args.theta,
        "epsilon_set": args.epsilon,
        "model": args.model,
        "f": "A",
        "wv_reference": result.wv_reference,
        "eps_hat": result.epsilon_hat,
    }
    if result.sigma_epsilon is not None:
        payload["sigma_eps"] = result.sigma_epsilon
    _print_json(payload)
    return 0


def cmd_montecarlo(args) -> int:
    stats = run_ensemble(
        args.theta,
        args.epsilon,
        ModelTag.parse(args.model),
        n_per_replica=args.shots,
        n_replicas=args.replicas,
        base_seed=args.seed,
        f=PostSelectOutcome(args.f),
        gate_params=_gate_params(args),
        mode=args.mode,
    )
    _print_json(
        {
            "theta_deg": args.theta,
            "epsilon": args.epsilon,
            "model": args.model,
            "f": args.f,
            "shots": args.shots,
            "replicas": args.replicas,
            "seed": args.seed,
            "mean_eps_hat": stats.mean_eps_hat,
            "var_eps_hat": stats.var_eps_hat,
            "n_replicas": stats.n_replicas,
            "n_discarded": stats.n_discarded,
            "crb": stats.crb,
        }
    )
    return 0


def _add_model_args(sub) -> None:
    sub.add_argument(
        "--model",
        choices=("linear", "exact-ideal", "exact-ppbs"),
        default="linear",
        help="probability model (default: linear)",
    )
    sub.add_argument("--tv", type=float, default=None, help="PPBS t_V amplitude")
    sub.add_argument("--th", type=float, default=None, help="PPBS t_H amplitude")
    sub.add_argument("--ah", type=float, default=None, help="H compensation amplitude")


def _add_postselect_arg(sub) -> None:
    sub.add_argument(
        "--postselect",
        type=float,
        default=270.0,
        help="post-selection analyzer angle in degrees (default: 270)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakmeas",
        description="Weak-measurement simulation and coupling estimation.",
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("probs", help="joint probabilities p(m, f) at one point")
    p.add_argument("--theta", type=float, required=True, help="input angle (deg)")
    p.add_argument("--epsilon", type=float, required=True, help="coupling strength")
    _add_model_args(p)
    _add_postselect_arg(p)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_probs)

    p = subs.add_parser("sweep", help="theta sweep written to a file")
    p.add_argument("--theta-start", type=float, default=0.0)
    p.add_argument("--theta-stop", type=float, default=359.0)
    p.add_argument("--theta-step", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, required=True)
    _add_model_args(p)
    _add_postselect_arg(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True, help="output file path")
    p.set_defaults(func=cmd_sweep)

    p = subs.add_parser("weakvalue", help="analytic and finite-difference weak value")
    p.add_argument("--theta", type=float, required=True)
    _add_postselect_arg(p)
    p.add_argument(
        "--eps-probe",
        type=float,
        default=0.08,
        help="probe coupling for the finite difference (default: 0.08)",
    )
    p.set_defaults(func=cmd_weakvalue)

    p = subs.add_parser("fisher", help="Fisher information split by post-selection")
    p.add_argument("--theta", type=float, required=True)
    _add_postselect_arg(p)
    p.add_argument("--shots", type=int, default=None, help="trials for the CRB")
    p.set_defaults(func=cmd_fisher)

    p = subs.add_parser("estimate", help="moment estimate from model conditionals")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    _add_model_args(p)
    _add_postselect_arg(p)
    p.add_argument(
        "--shots",
        type=int,
        default=None,
        help="total trials; enables the binomial error on the estimate",
    )
    p.set_defaults(func=cmd_estimate)

    p = subs.add_parser("montecarlo", help="seeded estimator ensemble")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    _add_model_args(p)
    p.add_argument("--shots", type=int, required=True, help="events per replica")
    p.add_argument("--replicas", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--f", choices=("D", "A"), default="A", help="post-selection column")
    p.add_argument("--mode", choices=("multinomial", "poisson"), default="multinomial")
    p.set_defaults(func=cmd_montecarlo)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WeakMeasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return type(exc).exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return _IO_EXIT_CODE


if __name__ == "__main__":
    sys.exit(main())
