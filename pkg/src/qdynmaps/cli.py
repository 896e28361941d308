"""Command-line front end.

Exit codes: 0 success (CP / Markov), 2 an NCP or non-Markov finding,
1 usage, configuration or parse failure.
"""
from __future__ import annotations

import argparse
import io
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import matcore
from .dynmaps import CP_TOL, N_SAMPLES, AMap, a_to_b, b_to_a, diagnose, load_map, save_map
from .errors import InvalidConfig, ParseError, QDynMapsError, SingularIntermediateMap
from .markov import Verdict, classify_family, concurrence_trajectory, scan_divisibility
from .models import PFunction, SigmaZXModel, SpinStarModel, WernerFamily, closed_form_intermediate

EXIT_OK, EXIT_USAGE, EXIT_NCP = 0, 1, 2

MODELS = ("werner-exp", "werner-stretched", "werner-cospower", "spinstar", "sigmazx")
WERNER_MODELS = MODELS[:3]

# per-command grid defaults: (t_start, t_end, steps)
GRID_DEFAULTS = {"scan": (0.2, 3.0, 15), "concurrence": (0.0, 5.0, 101)}


@dataclass
class RunConfig:
    command: str
    model: str = "werner-exp"
    alpha: float = 1.0
    beta: float = 0.5
    a: float = 1.0
    N: int = 1
    g: float = 1.0
    omega: float = 1.0
    t_start: float = 0.2
    t_end: float = 3.0
    steps: int = 15
    cp_tol: float = CP_TOL
    singular_tol: float = matcore.SINGULAR_TOL
    out: Optional[str] = None
    seed: int = 0

    def validate(self) -> None:
        if self.model not in MODELS:
            raise InvalidConfig(f"unknown model {self.model!r}")
        if self.steps < 2:
            raise InvalidConfig(f"steps must be >= 2, got {self.steps}")
        if not (self.t_end > self.t_start >= 0):
            raise InvalidConfig(f"need t_end > t_start >= 0, got [{self.t_start}, {self.t_end}]")
        if self.cp_tol <= 0 or self.singular_tol <= 0:
            raise InvalidConfig("tolerances must be positive")
        for name in ("alpha", "beta", "a", "g", "omega"):
            if getattr(self, name) <= 0:
                raise InvalidConfig(f"--{name} must be positive")
        if self.N < 1:
            raise InvalidConfig("--N must be a positive integer")

    def grid(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.steps)

    def pfunction(self) -> PFunction:
        if self.model == "werner-exp":
            return PFunction.exponential(self.alpha)
        if self.model == "werner-stretched":
            return PFunction.stretched(self.alpha, self.beta)
        if self.model == "werner-cospower":
            return PFunction.cospower(self.a, self.N)
        raise InvalidConfig(f"model {self.model!r} has no p(t) profile")

    def family(self):
        if self.model in WERNER_MODELS:
            return WernerFamily(self.pfunction())
        if self.model == "spinstar":
            return SpinStarModel(self.g, self.N)
        return SigmaZXModel(self.omega)


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def scan_csv(cfg: RunConfig) -> tuple[str, object]:
    scan = scan_divisibility(cfg.family(), cfg.grid(), cfg.cp_tol, cfg.singular_tol)
    buf = io.StringIO()
    buf.write("t1,t2,min_choi_eig,cp,semigroup_defect\n")
    for r in sorted(scan.rows, key=lambda r: (r.t1, r.t2)):
        cp = "" if r.cp is None else ("true" if r.cp else "false")
        buf.write(f"{fmt(r.t1)},{fmt(r.t2)},{fmt(r.min_choi_eig)},{cp},{fmt(r.semigroup_defect)}\n")
    return buf.getvalue(), scan


def concurrence_csv(cfg: RunConfig) -> tuple[str, object]:
    if cfg.model not in WERNER_MODELS:
        raise InvalidConfig("concurrence trajectories are defined for the werner-* models only")
    traj = concurrence_trajectory(cfg.pfunction(), cfg.grid())
    buf = io.StringIO()
    buf.write("t,p,concurrence\n")
    for r in traj.rows:
        buf.write(f"{fmt(r.t)},{fmt(r.p)},{fmt(r.concurrence)}\n")
    return buf.getvalue(), traj


def cmd_check(map_file: str, cp_tol: float = CP_TOL, seed: int = 0, n_samples: int = N_SAMPLES) -> int:
    try:
        mp = load_map(map_file)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    amap = mp if isinstance(mp, AMap) else b_to_a(mp)
    diag = diagnose(amap, cp_tol=cp_tol, n_samples=n_samples, seed=seed)
    print(f"d             {amap.d}")
    print(f"kind          {'A' if isinstance(mp, AMap) else 'B'}")
    print(f"tp_defect     {fmt(diag.tp_defect)}")
    print(f"herm_defect   {fmt(diag.herm_defect)}")
    print(f"min_choi_eig  {fmt(diag.min_choi_eig)}")
    print(f"block_pos_min {fmt(diag.block_pos_min)}")
    print(f"CP            {'yes' if diag.is_cp else 'no'}")
    print(f"TP            {'yes' if diag.is_tp else 'no'}")
    return EXIT_OK if diag.is_cp and diag.is_tp else EXIT_NCP


def cmd_model(cfg: RunConfig, t1: float, t2: Optional[float]) -> int:
    """Write A(t1, 0), or B(t2, t1) when ``t2`` is given, as a map file."""
    fam = cfg.family()
    if t2 is None:
        mp = fam.amap(t1)
        label = f"A({fmt(t1)}, 0)"
        evals = a_to_b(mp).eigenvalues()
    else:
        mp = closed_form_intermediate(fam, t1, t2, cfg.singular_tol)
        label = f"B({fmt(t2)}, {fmt(t1)})"
        evals = mp.eigenvalues()
    if cfg.out:
        save_map(mp, cfg.out)
    print(f"{cfg.model} {label}: B-map eigenvalues " + " ".join(fmt(e) for e in evals))
    return EXIT_OK if evals[0] >= -cfg.cp_tol else EXIT_NCP


def cmd_scan(cfg: RunConfig, figure: Optional[str] = None) -> int:
    text, scan = scan_csv(cfg)
    _emit(text, cfg.out)
    if figure:
        from .plotting import plot_scan

        plot_scan(scan, figure, title=cfg.model)
    return EXIT_OK


def cmd_concurrence(cfg: RunConfig, figure: Optional[str] = None) -> int:
    text, traj = concurrence_csv(cfg)
    _emit(text, cfg.out)
    if figure:
        from .plotting import plot_concurrence

        scale = cfg.a if cfg.model == "werner-cospower" else cfg.alpha
        plot_concurrence({cfg.model: traj}, figure, time_scale=scale)
    return EXIT_OK


def cmd_classify(cfg: RunConfig, t1: float, t2: float) -> int:
    if not t2 > t1 > 0:
        raise InvalidConfig(f"need t2 > t1 > 0, got t1={t1}, t2={t2}")
    try:
        rep = classify_family(cfg.family(), t1, t2, cfg.cp_tol, cfg.singular_tol)
    except SingularIntermediateMap:
        print(f"intermediate undefined at t1={fmt(t1)}")
        return EXIT_USAGE
    rec = rep.record

    def flag(v):
        return "--" if v is None else ("CP" if v else "NCP")

    print("B(t1,0)  B(t2,0)  B(t2,t1)  verdict")
    print(f"{flag(rec.cp_t1):<8} {flag(rec.cp_t2):<8} {flag(rec.cp_intermediate):<9} {rec.verdict.value}")
    print(f"min_choi_eig B(t1,0)  = {fmt(rep.min_eig_t1)}")
    print(f"min_choi_eig B(t2,0)  = {fmt(rep.min_eig_t2)}")
    print(f"min_choi_eig B(t2,t1) = {fmt(rep.min_eig_intermediate)}")
    return EXIT_OK if rec.verdict is Verdict.MARKOV else EXIT_NCP


def _model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=MODELS, default="werner-exp")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--g", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--cp-tol", type=float, default=CP_TOL)
    p.add_argument("--singular-tol", type=float, default=matcore.SINGULAR_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output file (stdout when omitted)")


def _grid_args(p: argparse.ArgumentParser, command: str) -> None:
    t0, t1, n = GRID_DEFAULTS[command]
    p.add_argument("--t-start", type=float, default=t0)
    p.add_argument("--t-end", type=float, default=t1)
    p.add_argument("--steps", type=int, default=n)
    p.add_argument("--figure", default=None, help="also render a figure to this path (e.g. out.png)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdynmaps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="diagnose a map file (trace preservation, Hermiticity, CP)")
    p.add_argument("map_file")
    p.add_argument("--cp-tol", type=float, default=CP_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-samples", type=int, default=N_SAMPLES)

    p = sub.add_parser("model", help="write A(t1,0) or the intermediate B(t2,t1) of a model")
    _model_args(p)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--t2", type=float, default=None)

    p = sub.add_parser("scan", help="intermediate-map CP scan over a time grid (CSV)")
    _model_args(p)
    _grid_args(p, "scan")

    p = sub.add_parser("concurrence", help="Choi-state concurrence trajectory (CSV)")
    _model_args(p)
    _grid_args(p, "concurrence")

    p = sub.add_parser("classify", help="Markov / non-Markov verdict for one (t1, t2) pair")
    _model_args(p)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--t2", type=float, required=True)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        model=args.model,
        alpha=args.alpha,
        beta=args.beta,
        a=args.a,
        N=args.N,
        g=args.g,
        omega=args.omega,
        cp_tol=args.cp_tol,
        singular_tol=args.singular_tol,
        out=args.out,
        seed=args.seed,
    )
    if args.command in GRID_DEFAULTS:
        cfg.t_start, cfg.t_end, cfg.steps = args.t_start, args.t_end, args.steps
    cfg.validate()
    return cfg


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        if args.command == "check":
            return cmd_check(args.map_file, args.cp_tol, args.seed, args.n_samples)
        cfg = config_from_args(args)
        if args.command == "model":
            return cmd_model(cfg, args.t1, args.t2)
        if args.command == "scan":
            return cmd_scan(cfg, args.figure)
        if args.command == "concurrence":
            return cmd_concurrence(cfg, args.figure)
        return cmd_classify(cfg, args.t1, args.t2)
    except SingularIntermediateMap as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QDynMapsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
