"""Command-line front end: generate, certify, sweep, tomo-sim.

Exit codes: 0 success, 2 bad usage or parameters, 3 an internal
cross-check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import circuit as qc
from . import pptlab, report, states, tomo, witness
from .errors import BoundentError, ConsistencyError
from .qmat import max_norm_distance
from .serialize import SCHEMA, fmt_float, state_from_dict, state_to_dict, to_json
from .settings import WITNESS_SETTINGS, tomography_settings

EXIT_USAGE = 2
EXIT_CHECK = 3
NETWORK_TOL = 1e-10

PRESETS = {"optimal-abls": "abls", "eq24": "dct"}


class UsageError(Exception):
    pass


# -- parameters -------------------------------------------------------------------

def _add_param_flags(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--family", choices=("abls", "dct"))
    ap.add_argument("--preset", choices=sorted(PRESETS))
    g = ap.add_argument_group("ABLS parameters")
    g.add_argument("--a", type=float)
    g.add_argument("--b", type=float)
    g.add_argument("--c", type=float)
    g = ap.add_argument_group("DCT weights")
    g.add_argument("--l0p", type=float, help="lambda_0^+")
    g.add_argument("--l0m", type=float, help="lambda_0^-")
    g.add_argument("--l01", type=float)
    g.add_argument("--l10", type=float)
    g.add_argument("--l11", type=float)


def resolve_params(args) -> tuple[str, object]:
    family = args.family
    if args.preset:
        preset_family = PRESETS[args.preset]
        if family and family != preset_family:
            raise UsageError(f"preset {args.preset} belongs to family {preset_family}")
        family = preset_family
        return family, states.OPTIMAL_ABLS if family == "abls" else states.EQ24_DCT
    if family is None:
        raise UsageError("give --family or --preset")
    if family == "abls":
        vals = (args.a, args.b, args.c)
        if None in vals:
            raise UsageError("ABLS needs --a, --b and --c")
        return family, states.ABLSParams(*vals)
    vals = (args.l0p, args.l0m, args.l01, args.l10, args.l11)
    if None in vals:
        raise UsageError("DCT needs --l0p, --l0m, --l01, --l10 and --l11")
    return family, states.DCTParams(*vals)


def _builders(family: str):
    if family == "abls":
        return states.abls_direct, states.abls_network, states.abls_circuit
    return states.dct_direct, states.dct_network, states.dct_circuit


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------------

def cmd_generate(args) -> int:
    family, p = resolve_params(args)
    direct_fn, network_fn, circuit_fn = _builders(family)
    direct = direct_fn(p)
    network = network_fn(p)
    dist = max_norm_distance(direct, network)
    out = {
        "schema": SCHEMA,
        "state_family": family,
        "params": report.params_dict(p),
        "max_norm_distance": dist,
        "direct": state_to_dict(direct),
        "network": state_to_dict(network),
    }
    _write(to_json(out), args.out)
    if args.circuit:
        Path(args.circuit).write_text(qc.dump_circuit(circuit_fn(p)))
    print(f"max-norm distance direct vs network: {dist:.3e}", file=sys.stderr)
    if dist > NETWORK_TOL:
        raise ConsistencyError(f"network and direct constructions differ by {dist:.3g}")
    return 0


def cmd_certify(args) -> int:
    if args.from_counts:
        data = tomo.load_shots(Path(args.from_counts).read_text())
        family, p = resolve_params(args) if (args.family or args.preset) else ("abls", states.OPTIMAL_ABLS)
        by_axes = {d.setting.axes for d in data}
        have_tomo = all(s.axes in by_axes for s in tomography_settings())
        have_witness = all(s.axes in by_axes for s in WITNESS_SETTINGS)
        if not have_tomo:
            raise tomo.MissingSetting("certification from counts needs all 27 x/y/z settings")
        rho = tomo.reconstruct(data, project=args.project)
        estimate = None
        if family == "abls" and have_witness:
            eps = witness.epsilon_min(p, seed=args.seed, n_probes=args.probes).epsilon
            estimate = tomo.witness_from_counts(data, p, eps)
        tomo_data = [d for d in data if d.setting.axes in {s.axes for s in tomography_settings()}]
        intervals = None
        npt_cuts = None
        if args.bootstrap:
            intervals = {
                cut: tomo.bootstrap_pt_min(tomo_data, i, n_resamples=args.bootstrap, seed=args.seed)
                for i, cut in enumerate("ABC")
            }
            # a cut counts as NPT only if its whole interval is negative
            npt_cuts = {cut for cut, (_, hi) in intervals.items() if hi < -pptlab.PPT_TOL}
        rep = report.certify(rho, family, p, seed=args.seed, n_probes=args.probes,
                             witness_estimate=estimate, strict=False, npt_cuts=npt_cuts)
        rep.extra["from_counts"] = {
            "n_settings": len(data),
            "projected": bool(args.project),
            "bootstrap_pt_min": None if intervals is None else {c: list(v) for c, v in intervals.items()},
        }
        if npt_cuts is not None:
            rep.notes.append("counts input: a cut is NPT only if its bootstrap interval lies below zero")
        if args.project:
            rep.notes.append("reconstructed state projected onto the PSD cone")
    else:
        family, p = resolve_params(args)
        rho = _builders(family)[0](p)
        rep = report.certify(rho, family, p, seed=args.seed, n_probes=args.probes)
    _write(to_json(rep), args.out)
    print(f"verdict: {rep.verdict}", file=sys.stderr)
    return 0


def sweep_point(a: float, seed: int = 0, n_probes: int = witness.N_PROBES) -> dict:
    p = states.ABLSParams.symmetric(a)
    res = witness.epsilon_min(p, seed=seed, n_probes=n_probes)
    return {
        "a": a,
        "epsilon": res.epsilon,
        "branch": witness.branch(p),
        "theta_e": res.angles[0],
        "theta_f": res.angles[1],
        "theta_g": res.angles[2],
        "p_star": witness.noise_threshold(res.epsilon),
    }


SWEEP_COLUMNS = ("a", "epsilon", "branch", "theta_e", "theta_f", "theta_g", "p_star")


def sweep_grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0 or stop < start:
        raise UsageError("empty sweep range")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    grid = [round(start + i * step, 12) for i in range(n)]
    grid = [a for a in grid if 0 < a and abs(a - 1) > 1e-12]
    if not grid:
        raise UsageError("empty sweep range")
    return grid


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in sorted(rows, key=lambda r: r["a"]):
        w.writerow([r[c] if isinstance(r[c], str) else fmt_float(r[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    grid = sweep_grid(args.start, args.stop, args.step)
    seeds = [args.seed] * len(grid)
    probes = [args.probes] * len(grid)
    if args.workers > 1 and len(grid) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(sweep_point, grid, seeds, probes))
    else:
        rows = [sweep_point(a, s, n) for a, s, n in zip(grid, seeds, probes)]
    _write(rows_to_csv(rows), args.out)
    best = max(rows, key=lambda r: r["epsilon"])
    print(f"max epsilon {best['epsilon']:.6f} at a={best['a']}", file=sys.stderr)
    return 0


def load_state(path: str) -> np.ndarray:
    """State JSON as written by ``generate`` (uses "direct") or a bare {n_qubits, entries} object."""
    d = json.loads(Path(path).read_text())
    return state_from_dict(d["direct"] if "direct" in d else d)


def cmd_tomo_sim(args) -> int:
    if args.state:
        rho = load_state(args.state)
    else:
        family, p = resolve_params(args)
        rho = _builders(family)[0](p)
    settings = []
    if args.settings in ("tomography", "all"):
        settings += tomography_settings()
    if args.settings in ("witness", "all"):
        settings += [s for s in WITNESS_SETTINGS if s not in settings]
    data = tomo.simulate(rho, settings, args.shots, args.seed)
    _write(tomo.dump_shots(data), args.out)
    return 0


# -- entry point -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="boundent", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a state directly and via its purification network")
    _add_param_flags(g)
    g.add_argument("--out", help="state JSON path (default stdout)")
    g.add_argument("--circuit", help="also write the network as a gate list")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("certify", help="witness, PT spectra, SPA and power traces with a verdict")
    _add_param_flags(c)
    c.add_argument("--from-counts", help="JSON-lines shot file (27 x/y/z settings, optional witness settings)")
    c.add_argument("--project", action="store_true", help="project the reconstructed state onto the PSD cone")
    c.add_argument("--bootstrap", type=int, default=200, help="bootstrap resamples for counts input (0 disables)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--probes", type=int, default=witness.N_PROBES, help="random probe angles for the eps search")
    c.add_argument("--out")
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("sweep", help="eps on the slice a = b = 1/c as CSV")
    s.add_argument("--start", type=float, default=0.05)
    s.add_argument("--stop", type=float, default=0.95)
    s.add_argument("--step", type=float, default=0.005)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--probes", type=int, default=witness.N_PROBES)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    t = sub.add_parser("tomo-sim", help="simulate seeded shot counts as JSON lines")
    _add_param_flags(t)
    t.add_argument("--state", help="simulate this state JSON instead of a family member")
    t.add_argument("--shots", type=int, default=100_000)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--settings", choices=("tomography", "witness", "all"), default="all")
    t.add_argument("--out")
    t.set_defaults(func=cmd_tomo_sim)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print(f"error: internal check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (UsageError, BoundentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
