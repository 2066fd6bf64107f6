"""Command-line interface: point computations, sweeps and the Raman fit."""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import List, Optional

from .bb84 import bb84_point, optimize_mu
from .config import Config, ConfigError, default_config, parse_config
from .gmcs import gmcs_point, total_excess_noise
from .noise import (
    DomainError,
    UnfittableError,
    channel_transmittance,
    compute_noise_budget,
    fit_raman_coefficient,
)
from .output import emit, sweep_to_csv, sweep_to_json
from .scenarios import builtin_scenarios, run_sweep, scenario_by_name
from .units import dbm_to_watts


def _load_config(path: Optional[str]) -> Config:
    if path is None:
        return default_config()
    with open(path, encoding="utf-8") as handle:
        return parse_config(handle.read())


def _print_json(doc, out: Optional[str]) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _g(x: float) -> float:
    return float(format(x, ".9g"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dwdm-qkd",
        description=(
            "Noise-photon budgets and secure-key rates for QKD channels "
            "multiplexed with classical DWDM traffic"
        ),
    )
    parser.add_argument("--config", help="path to a configuration file")
    parser.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="sweep output format"
    )
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument(
        "--conservative",
        action="store_true",
        help="pad the homodyne excess-noise estimate by the measurement uncertainty",
    )
    parser.add_argument(
        "--strict-eps-out",
        action="store_true",
        help="also fold unmatched-mode noise into the excess-noise estimate",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_noise = sub.add_parser("noise", help="noise budget at one distance")
    p_noise.add_argument("--z", type=float, required=True, help="fiber length, km")

    p_bb84 = sub.add_parser("bb84", help="decoy-BB84 key-rate point")
    p_bb84.add_argument("--z", type=float, required=True)
    p_bb84.add_argument("--mu", type=float, help="signal mean photon number (default: optimize)")

    p_gmcs = sub.add_parser("gmcs", help="GMCS homodyne key-rate point")
    p_gmcs.add_argument("--z", type=float, required=True)

    p_sweep = sub.add_parser("sweep", help="run a built-in scenario sweep")
    p_sweep.add_argument("--scenario", required=True)

    sub.add_parser("scenarios", help="list built-in scenario names")

    p_fit = sub.add_parser("fit-beta", help="back out the Raman coefficient")
    p_fit.add_argument("--p-out-dbm", type=float, required=True)
    p_fit.add_argument("--delta-lambda-nm", type=float, required=True)
    p_fit.add_argument("--insertion-loss-db", type=float, default=0.0)
    p_fit.add_argument(
        "--point",
        action="append",
        required=True,
        metavar="Z_KM:POWER_W",
        help="measurement point, repeatable",
    )
    return parser


def cmd_noise(args, config: Config) -> int:
    link = dataclasses.replace(config.link, fiber_length_km=args.z)
    budget = compute_noise_budget(
        link,
        config.comp,
        config.bb84.delta_t_s,
        eta_bob=config.gmcs.eta_bob,
        detector_bandwidth_hz=config.gmcs.detector_bandwidth_hz,
        n_lo=config.gmcs.n_lo,
    )
    _print_json(
        {"z_km": args.z, **{k: _g(v) for k, v in dataclasses.asdict(budget).items()}},
        args.out,
    )
    return 0


def cmd_bb84(args, config: Config) -> int:
    link = dataclasses.replace(config.link, fiber_length_km=args.z)
    if args.mu is not None:
        mu, point = args.mu, bb84_point(link, config.comp, config.bb84, mu=args.mu)
    else:
        mu, point = optimize_mu(link, config.comp, config.bb84)
    doc = {"protocol": "BB84", "mu": mu, **dataclasses.asdict(point)}
    _print_json({k: (_g(v) if isinstance(v, float) else v) for k, v in doc.items()}, args.out)
    return 0


def cmd_gmcs(args, config: Config) -> int:
    link = dataclasses.replace(config.link, fiber_length_km=args.z)
    det = config.gmcs
    if args.conservative:
        det = dataclasses.replace(det, conservative=True)
    budget = compute_noise_budget(
        link,
        config.comp,
        1e-9,
        eta_bob=det.eta_bob,
        detector_bandwidth_hz=det.detector_bandwidth_hz,
        n_lo=det.n_lo,
    )
    eta_ch = channel_transmittance(args.z, link.alpha_db_per_km)
    eps_in = budget.eps_in + (budget.eps_out if args.strict_eps_out else 0.0)
    eps = total_excess_noise(
        det.eps0,
        eps_in,
        eta_ch,
        config.comp.eta_dmu,
        det.eta_bob,
        sigma_meas=det.sigma_meas,
        conservative=det.conservative,
    )
    point = gmcs_point(eta_ch, det, eps, eta_dmu=config.comp.eta_dmu, z_km=args.z)
    _print_json(
        {
            "protocol": "GMCS",
            "z_km": args.z,
            "eps": _g(point.eps),
            "eps_in": _g(budget.eps_in),
            "eps_out": _g(budget.eps_out),
            "i_ab": _g(point.i_ab),
            "chi_be": _g(point.chi_be),
            "rate": _g(point.rate),
            "sigma": [_g(s) for s in point.sigma],
        },
        args.out,
    )
    return 0


def cmd_sweep(args) -> int:
    scenario = scenario_by_name(args.scenario)
    result = run_sweep(scenario, strict_eps_out=args.strict_eps_out)
    if args.out:
        emit(result, args.format, args.out)
    else:
        text = sweep_to_csv(result) if args.format == "csv" else sweep_to_json(result)
        sys.stdout.write(text)
    return 0


def cmd_fit_beta(args) -> int:
    points = []
    for spec in args.point:
        try:
            z_str, p_str = spec.split(":", 1)
            points.append((float(z_str), float(p_str)))
        except ValueError:
            raise DomainError(f"malformed --point {spec!r}; expected Z_KM:POWER_W")
    beta = fit_raman_coefficient(
        points,
        dbm_to_watts(args.p_out_dbm),
        args.delta_lambda_nm,
        insertion_loss_db=args.insertion_loss_db,
    )
    _print_json({"beta_raman": _g(beta), "points": len(points)}, args.out)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "scenarios":
            names = [s.name for s in builtin_scenarios()]
            if args.format == "json":
                _print_json(names, args.out)
            else:
                text = "\n".join(names) + "\n"
                if args.out:
                    with open(args.out, "w", encoding="utf-8") as handle:
                        handle.write(text)
                else:
                    sys.stdout.write(text)
            return 0
        if args.command == "fit-beta":
            return cmd_fit_beta(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        config = _load_config(args.config)
        if args.command == "noise":
            return cmd_noise(args, config)
        if args.command == "bb84":
            return cmd_bb84(args, config)
        if args.command == "gmcs":
            return cmd_gmcs(args, config)
    except (ConfigError, DomainError, UnfittableError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
