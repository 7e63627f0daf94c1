"""Command-line front end: catalog, check, solve, verify, replay.

One run per process.  Exit status 0 means every verdict in the run holds
or is confirmed; 2 means a counterexample or an inclusion violation was
found (still a successful run); 1 means the run itself failed.  A flat
key=value config file can preload any flag; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Tuple

from . import catalog, report
from .bifunctions import (
    check_monotone,
    check_pseudomonotone,
    check_reversal_homogeneity,
    check_strictly_pseudomonotone,
    check_subadditive_poshom,
    check_upper_sign_continuous,
)
from .cone import DEFAULT_TOL
from .convexity import (
    HCONVEX_FORMS,
    check_dini_envelope,
    check_geodesic_convex,
    check_geodesic_quasiconvex,
    check_h_convex,
    check_h_pseudoconvex,
    check_h_quasiconvex,
)
from .dini import LimitSchedule
from .manifolds import Euclidean, HyperbolaCurve, Manifold, Point, PositiveOrthant
from .replay import extract_witness, replay_witness
from .sampling import HOLDS
from .vilab import (
    THEOREMS,
    ProblemInstance,
    build_problem,
    check_w_set_convex,
    solve_mnvvip,
    solve_nvop,
    solve_nvvip,
    verify_theorem,
)

# property name -> (needs objective, needs bifunction)
PROPERTIES = {
    "geodesic-convex": (True, False),
    "geodesic-quasiconvex": (True, False),
    "h-convex": (True, True),
    "h-pseudoconvex": (True, True),
    "h-quasiconvex": (True, True),
    "dini-envelope-upper": (True, True),
    "dini-envelope-lower": (True, True),
    "reversal-homogeneity": (False, True),
    "monotone": (False, True),
    "pseudomonotone": (False, True),
    "strictly-pseudomonotone": (False, True),
    "upper-sign-continuous": (False, True),
    "subadditive-poshom": (False, True),
    "w-set-convex": (False, True),
}


@dataclass
class RunConfig:
    command: str
    instance: Optional[str] = None
    manifold: Optional[str] = None
    bounds: Optional[str] = None
    grid_n: Optional[int] = None
    spacing: Optional[str] = None
    extra_random: Optional[int] = None
    objective: Optional[str] = None
    bifunction: Optional[str] = None
    mode: Optional[str] = None
    prop: Optional[str] = None
    problem: Optional[str] = None
    theorem: Optional[str] = None
    replay_file: Optional[str] = None
    point: Optional[str] = None
    tol: float = DEFAULT_TOL
    seed: int = 42
    dini_t0: float = 1e-2
    dini_ratio: float = 0.5
    dini_steps: int = 20
    hconvex_form: str = "componentwise"
    fmt: str = "text"
    out: Optional[str] = None

    def schedule(self) -> LimitSchedule:
        return LimitSchedule(self.dini_t0, self.dini_ratio, self.dini_steps)


def parse_manifold(token: str) -> Manifold:
    name, _, dim = token.partition(":")
    name = name.replace("_", "-")
    n = int(dim) if dim else 1
    if name == "euclidean":
        return Euclidean(n)
    if name in ("positive-orthant", "orthant"):
        return PositiveOrthant(n)
    if name in ("hyperbola", "hyperbola-curve"):
        return HyperbolaCurve()
    raise ValueError(f"unknown manifold {token!r}")


def parse_bounds(token: str) -> Tuple[Tuple[float, float], ...]:
    axes = []
    for part in token.split(","):
        lo, _, hi = part.partition(":")
        axes.append((float(lo), float(hi)))
    return tuple(axes)


def _resolve_spec(cfg: RunConfig) -> catalog.InstanceSpec:
    if cfg.instance:
        spec = catalog.get_instance(cfg.instance)
        overrides = {}
        if cfg.objective:
            overrides["objective"] = cfg.objective
        if cfg.bifunction:
            overrides["bifunction"] = cfg.bifunction
        if cfg.spacing:
            overrides["spacing"] = cfg.spacing
        if cfg.extra_random is not None:
            overrides["extra_random"] = cfg.extra_random
        return catalog.with_overrides(spec, **overrides) if overrides else spec
    if not cfg.manifold or not cfg.bounds:
        raise ValueError("need --instance, or an inline definition with --manifold and --bounds")
    return catalog.InstanceSpec(
        id="inline",
        manifold=parse_manifold(cfg.manifold),
        box=parse_bounds(cfg.bounds),
        grid_n=cfg.grid_n or 9,
        objective=cfg.objective,
        bifunction=cfg.bifunction,
        spacing=cfg.spacing or "linear",
        extra_random=cfg.extra_random or 0,
        seed=cfg.seed,
    )


def _build_instance(cfg: RunConfig) -> ProblemInstance:
    spec = _resolve_spec(cfg)
    box = parse_bounds(cfg.bounds) if (cfg.bounds and cfg.instance) else None
    return build_problem(
        spec,
        sched=cfg.schedule(),
        seed=cfg.seed,
        grid_n=cfg.grid_n,
        box=box,
        mode=cfg.mode,
    )


def _parse_point(inst: ProblemInstance, token: str) -> Point:
    return Point(inst.sampler.manifold, tuple(float(c) for c in token.split(",")))


def _run_check(cfg: RunConfig) -> Tuple[int, dict]:
    if cfg.replay_file:
        return _run_replay_file(cfg, cfg.replay_file)
    if not cfg.prop:
        raise ValueError("check needs --property (or --replay)")
    if cfg.prop not in PROPERTIES:
        raise ValueError(f"unknown property {cfg.prop!r}; known: {sorted(PROPERTIES)}")
    needs_obj, needs_bif = PROPERTIES[cfg.prop]
    inst = _build_instance(cfg)
    if needs_obj and inst.objective is None:
        raise ValueError(f"property {cfg.prop!r} needs an instance with an objective")
    if needs_bif and inst.bifunction is None:
        raise ValueError(f"property {cfg.prop!r} needs an instance with a bifunction")
    phi, h, sampler, sched, tol = inst.objective, inst.bifunction, inst.sampler, inst.sched, cfg.tol
    if cfg.prop == "geodesic-convex":
        outcome = check_geodesic_convex(phi, sampler, tol)
    elif cfg.prop == "geodesic-quasiconvex":
        outcome = check_geodesic_quasiconvex(phi, sampler, tol)
    elif cfg.prop == "h-convex":
        outcome = check_h_convex(phi, h, sampler, tol, cfg.hconvex_form)
    elif cfg.prop == "h-pseudoconvex":
        outcome = check_h_pseudoconvex(phi, h, sampler, tol)
    elif cfg.prop == "h-quasiconvex":
        outcome = check_h_quasiconvex(phi, h, sampler, tol)
    elif cfg.prop == "dini-envelope-upper":
        outcome = check_dini_envelope(phi, h, sampler, sched, tol, "upper")
    elif cfg.prop == "dini-envelope-lower":
        outcome = check_dini_envelope(phi, h, sampler, sched, tol, "lower")
    elif cfg.prop == "reversal-homogeneity":
        outcome = check_reversal_homogeneity(h, sampler, tol)
    elif cfg.prop == "monotone":
        outcome = check_monotone(h, sampler, tol)
    elif cfg.prop == "pseudomonotone":
        outcome = check_pseudomonotone(h, sampler, tol)
    elif cfg.prop == "strictly-pseudomonotone":
        outcome = check_strictly_pseudomonotone(h, sampler, tol)
    elif cfg.prop == "upper-sign-continuous":
        outcome = check_upper_sign_continuous(h, sampler, tol)
    elif cfg.prop == "subadditive-poshom":
        outcome = check_subadditive_poshom(h, sampler, tol)
    else:
        at = _parse_point(inst, cfg.point) if cfg.point else None
        outcome = check_w_set_convex(inst, at, tol)
    exit_status = 0 if outcome.holds else 2
    return exit_status, {"result": outcome.describe(), "instance": inst.describe(), "prop": cfg.prop,
                         "mode": _mode_of(inst)}


def _mode_of(inst: ProblemInstance) -> Optional[str]:
    manifold = inst.sampler.manifold
    return manifold.mode.value if isinstance(manifold, HyperbolaCurve) else None


def _run_solve(cfg: RunConfig) -> Tuple[int, dict]:
    if cfg.problem not in ("nvvip", "mnvvip", "nvop-eff", "nvop-weak"):
        raise ValueError("problem must be one of nvvip, mnvvip, nvop-eff, nvop-weak")
    inst = _build_instance(cfg)
    if cfg.problem == "nvvip":
        sol = solve_nvvip(inst, cfg.tol)
    elif cfg.problem == "mnvvip":
        sol = solve_mnvvip(inst, cfg.tol)
    elif cfg.problem == "nvop-eff":
        sol = solve_nvop(inst, cfg.tol, "efficient")
    else:
        sol = solve_nvop(inst, cfg.tol, "weak")
    return 0, {"result": sol.describe(), "instance": inst.describe(), "problem": cfg.problem,
               "mode": _mode_of(inst)}


def _run_verify(cfg: RunConfig) -> Tuple[int, dict]:
    if not cfg.theorem:
        raise ValueError("verify needs --theorem")
    inst = _build_instance(cfg)
    rep = verify_theorem(cfg.theorem, inst, cfg.tol, cfg.hconvex_form)
    exit_status = 0 if rep.status == "confirmed_on_grid" else 2
    return exit_status, {"result": rep.describe(), "instance": inst.describe(), "theorem": cfg.theorem,
                         "mode": _mode_of(inst)}


def _run_replay_file(cfg: RunConfig, path: str) -> Tuple[int, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    witness = extract_witness(payload)
    sched = cfg.schedule()
    if isinstance(payload.get("dini_schedule"), dict):
        s = payload["dini_schedule"]
        sched = LimitSchedule(s["t0"], s["ratio"], int(s["steps"]))
    verdict, margin = replay_witness(witness, sched)
    result = {
        "verdict": verdict,
        "samples_checked": 1,
        "margin": margin,
        "witness": witness,
    }
    exit_status = 0 if verdict == HOLDS else 2
    return exit_status, {"result": result, "prop": witness["check"]}


def _run_catalog(cfg: RunConfig) -> Tuple[int, dict]:
    return 0, {"result": catalog.catalog_listing()}


def run(cfg: RunConfig) -> Tuple[int, dict]:
    """Execute one command and return (exit_status, report dict)."""
    start = time.perf_counter()
    if cfg.command == "catalog":
        exit_status, payload = _run_catalog(cfg)
    elif cfg.command == "check":
        exit_status, payload = _run_check(cfg)
    elif cfg.command == "solve":
        exit_status, payload = _run_solve(cfg)
    elif cfg.command == "verify":
        exit_status, payload = _run_verify(cfg)
    elif cfg.command == "replay":
        exit_status, payload = _run_replay_file(cfg, cfg.replay_file)
    else:
        raise ValueError(f"unknown command {cfg.command!r}")
    runtime_ms = (time.perf_counter() - start) * 1000.0
    rep = report.build_report(
        command=cfg.command,
        result=payload["result"],
        exit_status=exit_status,
        seed=cfg.seed,
        tol=cfg.tol,
        dini_schedule=cfg.schedule().describe(),
        hconvex_form=cfg.hconvex_form,
        mode=payload.get("mode"),
        instance=payload.get("instance"),
        prop=payload.get("prop"),
        problem=payload.get("problem"),
        theorem=payload.get("theorem"),
        runtime_ms=runtime_ms,
    )
    return exit_status, rep


def _load_config_file(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key=value: {line!r}")
            key, _, value = line.partition("=")
            out[key.strip().replace("-", "_")] = value.strip()
    return out


_CONFIG_COERCE = {
    "grid_n": int, "grid": int, "extra_random": int, "seed": int, "dini_steps": int,
    "tol": float, "dini_t0": float, "dini_ratio": float,
}


def _merge(cli_value, file_values: dict, key: str, default):
    if cli_value is not None:
        return cli_value
    if key in file_values:
        coerce = _CONFIG_COERCE.get(key, str)
        return coerce(file_values[key])
    return default


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file; explicit flags win")
    p.add_argument("--instance", help="catalog instance id")
    p.add_argument("--manifold", help="inline manifold, e.g. euclidean:1, positive-orthant:2, hyperbola")
    p.add_argument("--bounds", help="chart box, lo:hi per axis, comma separated")
    p.add_argument("--grid", type=int, dest="grid_n", help="grid points per axis")
    p.add_argument("--spacing", choices=["linear", "log"])
    p.add_argument("--extra-random", type=int, dest="extra_random", help="extra seeded-uniform samples")
    p.add_argument("--objective", help="catalog objective id")
    p.add_argument("--bifunction", help="catalog bifunction id (dini:<objective> for adapters)")
    p.add_argument("--mode", choices=["paper", "constant-speed"], help="geodesic parameterization mode")
    p.add_argument("--tol", type=float, help="comparison tolerance (default 1e-9)")
    p.add_argument("--seed", type=int, help="sampling seed (default 42)")
    p.add_argument("--dini-t0", type=float, dest="dini_t0")
    p.add_argument("--dini-ratio", type=float, dest="dini_ratio")
    p.add_argument("--dini-steps", type=int, dest="dini_steps")
    p.add_argument("--hconvex-form", choices=list(HCONVEX_FORMS), dest="hconvex_form")
    p.add_argument("--format", choices=["text", "json", "csv"], dest="fmt")
    p.add_argument("--out", help="write the report to this path instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vvilab",
        description="check geodesic convexity/monotonicity properties and solve "
                    "vector variational inequality and vector optimization problems "
                    "on the catalog manifolds by brute force",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_catalog = sub.add_parser("catalog", help="list built-in instances, objectives and bifunctions")
    p_catalog.add_argument("--format", choices=["text", "json", "csv"], dest="fmt")
    p_catalog.add_argument("--out")

    p_check = sub.add_parser("check", help="run a property checker")
    _add_common(p_check)
    p_check.add_argument("--property", dest="prop", choices=sorted(PROPERTIES))
    p_check.add_argument("--replay", dest="replay_file", help="re-evaluate the witness in a report file")
    p_check.add_argument("--point", help="anchor point for w-set-convex, comma separated coords")

    p_solve = sub.add_parser("solve", help="compute a solution set on the instance grid")
    _add_common(p_solve)
    p_solve.add_argument("--problem", required=True, choices=["nvvip", "mnvvip", "nvop-eff", "nvop-weak"])

    p_verify = sub.add_parser("verify", help="check a solution-set relation and its hypotheses")
    _add_common(p_verify)
    p_verify.add_argument("--theorem", required=True, choices=sorted(THEOREMS))

    p_replay = sub.add_parser("replay", help="re-evaluate the witness in a report file")
    p_replay.add_argument("file")
    p_replay.add_argument("--format", choices=["text", "json", "csv"], dest="fmt")
    p_replay.add_argument("--out")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    file_values = _load_config_file(args.config) if getattr(args, "config", None) else {}

    def get(key, default=None):
        return _merge(getattr(args, key, None), file_values, key, default)

    return RunConfig(
        command=args.command,
        instance=get("instance"),
        manifold=get("manifold"),
        bounds=get("bounds"),
        grid_n=get("grid_n") or (int(file_values["grid"]) if "grid" in file_values else None),
        spacing=get("spacing"),
        extra_random=get("extra_random"),
        objective=get("objective"),
        bifunction=get("bifunction"),
        mode=get("mode"),
        prop=get("prop") or file_values.get("property"),
        problem=get("problem"),
        theorem=get("theorem"),
        replay_file=getattr(args, "replay_file", None) or getattr(args, "file", None),
        point=get("point"),
        tol=get("tol", DEFAULT_TOL),
        seed=get("seed", 42),
        dini_t0=get("dini_t0", 1e-2),
        dini_ratio=get("dini_ratio", 0.5),
        dini_steps=get("dini_steps", 20),
        hconvex_form=get("hconvex_form", "componentwise"),
        fmt=get("fmt", "text"),
        out=get("out"),
    )


def _emit(rep: dict, fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        text = report.to_json(rep)
    elif fmt == "csv":
        text = report.to_csv(rep)
    else:
        text = report.to_text(rep)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"report written to {out}")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        exit_status, rep = run(cfg)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(rep, cfg.fmt, cfg.out)
    return exit_status


if __name__ == "__main__":
    sys.exit(main())
