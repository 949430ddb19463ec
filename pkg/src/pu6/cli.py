"""Command-line front end: simulate | verify | scan | represent.

Configuration comes from a JSON file plus flag overrides; every output is
deterministic for a fixed config and seed (CSV uses '.' decimals and 17
significant digits so doubles round-trip exactly).

Exit codes: 0 success, 1 failed verification, 2 malformed configuration,
3 overflow during integration, 4 complex representation branch.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import dynamics, positivity, representations, verification
from .core import (
    PUParams,
    frequencies_from_params,
    frequency_triple,
    hamiltonian_form,
    params_from_frequencies,
)
from .errors import ComplexBranch, ComplexFrequencies, ConfigError, NonFinite, Pu6Error

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NONFINITE = 3
EXIT_COMPLEX_BRANCH = 4


@dataclass
class RunConfig:
    params: PUParams
    omegas: Optional[tuple[float, float, float]]
    seed: int
    tol: Optional[float]  # overrides the degeneracy-classification tolerance
    sections: dict

    @property
    def frequencies(self):
        tol = self.tol if self.tol is not None else 1e-9
        if self.omegas is not None:
            return frequency_triple(*self.omegas, tol=tol)
        return frequencies_from_params(self.params, tol=tol)


def load_config(path: Optional[str], overrides: argparse.Namespace) -> RunConfig:
    raw = {}
    if path is not None:
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    model = raw.get("model", raw)
    has_omegas = "omegas" in model
    has_params = all(k in model for k in ("alpha", "beta", "gamma"))
    if has_omegas and has_params:
        raise ConfigError("give either omegas or (alpha, beta, gamma), not both")
    if not has_omegas and not has_params:
        raise ConfigError("config must specify omegas or (alpha, beta, gamma)")
    if has_omegas:
        om = model["omegas"]
        if not (isinstance(om, (list, tuple)) and len(om) == 3):
            raise ConfigError(f"omegas must be a list of three reals, got {om!r}")
        omegas = tuple(float(v) for v in om)
        params = params_from_frequencies(frequency_triple(*omegas))
    else:
        omegas = None
        params = PUParams(float(model["alpha"]), float(model["beta"]), float(model["gamma"]))
    return RunConfig(
        params=params,
        omegas=omegas,
        seed=int(overrides.seed if overrides.seed is not None else raw.get("seed", 0)),
        tol=overrides.tol if overrides.tol is not None else raw.get("tol"),
        sections=raw,
    )


def _open_out(path: Optional[str], default=sys.stdout):
    if path is None:
        return default, False
    return open(path, "w"), True


def cmd_simulate(cfg: RunConfig, out: Optional[str]) -> int:
    sec = cfg.sections.get("simulate", {})
    dt = float(sec.get("dt", 1e-3))
    t_end = float(sec.get("t_end", 20.0))
    initial = sec.get("initial", [1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    method = sec.get("method", "rk4")
    if method not in ("rk4", "exact"):
        raise ConfigError(f"simulate.method must be rk4 or exact, got {method!r}")
    interaction = None
    if "interaction" in sec and sec["interaction"] is not None:
        isec = sec["interaction"]
        try:
            if isec.get("kind", "quartic") == "quartic":
                interaction = dynamics.InteractionSpec.quartic(
                    lam=float(isec.get("lam", 1.0)), variable=int(isec.get("variable", 0))
                )
            else:
                interaction = dynamics.InteractionSpec(
                    coefficients=tuple(float(c) for c in isec["coefficients"]),
                    variable=int(isec.get("variable", 0)),
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed interaction spec: {exc}") from exc

    p = cfg.params
    divergent = None
    if interaction is None:
        try:
            sol = dynamics.solve_exact(cfg.frequencies, initial)
            divergent = dynamics.divergent_mode_present(sol)
        except (ComplexFrequencies, Pu6Error):
            sol = None
    else:
        sol = None

    if method == "exact":
        if sol is None:
            raise ConfigError("exact simulation needs an oscillatory, interaction-free model")
        traj = dynamics.exact_trajectory(sol, t_end, dt)
    else:
        traj = dynamics.integrate_rk4(p, initial, t_end, dt, interaction)

    base = out or "trajectory"
    csv_path, json_path = base + ".csv", base + ".json"
    with open(csv_path, "w") as fh:
        dynamics.trajectory_csv(traj, p, fh)
    forms = [hamiltonian_form(k, p) for k in (1, 2, 3)]
    drift = dynamics.conservation_drift(traj, forms)
    summary = {
        "method": traj.method,
        "dt": dt,
        "t_end": t_end,
        "max_drift": {"H1": drift[0], "H2": drift[1], "H3": drift[2]},
        "interacting": interaction is not None,
    }
    if divergent is not None:
        summary["divergent_mode_present"] = bool(divergent)
    with open(json_path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, out: Optional[str]) -> int:
    sec = cfg.sections.get("verify", {})
    n_random = int(sec.get("n_random", 20))
    rng = np.random.default_rng(cfg.seed)
    results = verification.run_invariant_suite(
        cfg.params, rng=rng, n_random=n_random, tol=cfg.tol
    )
    report = {
        "params": {"alpha": cfg.params.alpha, "beta": cfg.params.beta, "gamma": cfg.params.gamma},
        "seed": cfg.seed,
        "checks": [
            {"name": r.name, "status": r.status, "residual": r.residual, "detail": r.detail}
            for r in results
        ],
        "all_passed": verification.suite_passed(results),
    }
    stream, close = _open_out(out)
    try:
        json.dump(report, stream, indent=2, sort_keys=True)
        stream.write("\n")
    finally:
        if close:
            stream.close()
    if not report["all_passed"]:
        first = next(r for r in results if r.status == "fail")
        print(f"verification failed at: {first.name} ({first.detail})", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_scan(cfg: RunConfig, out: Optional[str]) -> int:
    sec = cfg.sections.get("scan")
    if sec is None:
        raise ConfigError("scan requires a 'scan' section with the grid spec")
    grid = positivity.GridSpec.from_json(sec)
    result = positivity.region_scan(grid, cfg.frequencies)
    stream, close = _open_out(out)
    try:
        result.write_csv(stream)
    finally:
        if close:
            stream.close()
    print(
        f"{result.positive_count()} positive of {len(result.cells)} cells; "
        f"{len(result.disagreements)} method disagreements",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_represent(cfg: RunConfig, out: Optional[str]) -> int:
    sec = cfg.sections.get("represent", {})
    kind = sec.get("kind", "Ta2")
    choices = sec.get("free_choices", {})
    p = cfg.params
    rep = representations.build_representation(kind, p, choices)
    report = representations.equivalence_check(rep, p)
    c456 = representations.transformed_coefficients(kind, p, choices)
    verdict = representations.representation_positivity(kind, p, choices)
    payload = {
        "representation": rep.to_json_dict(),
        "equivalence_pattern": list(report.pattern),
        "structural_residuals": list(report.structural_residuals),
        "transformed_coefficients": {"c4": c456[0], "c5": c456[1], "c6": c456[2]},
        "positivity": {
            "positive": verdict.positive,
            "min_eigenvalue": verdict.min_eigenvalue,
            "prefactors": list(verdict.prefactors) if verdict.prefactors else None,
        },
    }
    stream, close = _open_out(out)
    try:
        json.dump(payload, stream, indent=2, sort_keys=True)
        stream.write("\n")
    finally:
        if close:
            stream.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def add_common(parser, default=None):
        parser.add_argument("--config", default=default, help="JSON config file")
        parser.add_argument("--out", default=default, help="output path (base path for simulate)")
        parser.add_argument("--seed", type=int, default=default, help="seed for random draws")
        parser.add_argument(
            "--tol", type=float, default=default,
            help="degeneracy-classification tolerance override",
        )

    ap = argparse.ArgumentParser(
        prog="pu6",
        description="sixth-order oscillator: simulation, invariant verification, "
        "positivity scans and 3D representations",
    )
    add_common(ap)
    # flags are also accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering values given before it
    common = argparse.ArgumentParser(add_help=False)
    add_common(common, default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("simulate", "verify", "scan", "represent"):
        sub.add_parser(name, parents=[common])
    return ap


_COMMANDS = {
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "represent": cmd_represent,
}


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config, args)
        return _COMMANDS[args.command](cfg, args.out)
    except (ConfigError, ComplexFrequencies) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonFinite as exc:
        print(f"integration overflow: {exc}", file=sys.stderr)
        return EXIT_NONFINITE
    except ComplexBranch as exc:
        print(f"complex branch: {exc}", file=sys.stderr)
        return EXIT_COMPLEX_BRANCH
    except Pu6Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
