"""Command-line front end: ``polysharp {verify,sweep,extremal,factor,norms,profile}``.

Exit status: 0 when every gap record holds (or is an equality), 2 when at
least one is violated, 1 on a usage or configuration error (in which case
no report is written).
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import inequalities as ineq
from .factorization import BoundaryModulus, FactorizationError, OuterFunction, riesz_factorize
from .generate import LAWS, generate_random_function, random_polynomial_with_zeros, trial_seeds
from .inequalities import INEQUALITY_IDS, InequalityError, ModulusSum, Tolerances
from .norms import NormError, norm_report
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, QuadratureError, torus_power_mean
from .report import RunReport
from .search import Problem, SearchError, SearchSpace, kernel_path, maximize_ratio, ratio_profile
from .series import PolySeries, SeriesError, load_series

log = logging.getLogger("polysharp")

COMMANDS = ("verify", "sweep", "extremal", "factor", "norms", "profile")
ONE_VARIABLE = ("equal_function", "carleman", "carleman_double", "isoperimetric", "logsub")

EXIT_OK, EXIT_CONFIG, EXIT_VIOLATED = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    inequality: str | None = None
    n: int = 1
    m: int = 2
    p: tuple[float, ...] = ()
    q: tuple[float, ...] = ()
    degree: int = 3
    grid: int = DEFAULT_CONFIG.grid
    radial: int = DEFAULT_CONFIG.radial
    max_points: int = DEFAULT_CONFIG.max_points
    rtol: float = DEFAULT_CONFIG.rtol
    trials: int = 1
    seed: int = 0
    tol: float = 1e-10
    equality_tol: float = 1e-6
    law: str = "uniform_disc"
    inputs: tuple[str, ...] = ()
    curve: str | None = None
    modulus: str | None = None
    family: str = "coefficient_ball"
    rho: float = 0.6
    budget: int | None = None
    restarts: int = 5
    samples: int = 21
    zeros_inside: int = 2
    out: str | None = None
    table: str | None = None
    workers: int = 1
    timing: bool = False

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(grid=self.grid, radial=self.radial, max_points=self.max_points, rtol=self.rtol)

    def tolerances(self) -> Tolerances:
        return Tolerances(self.tol, self.equality_tol)

    def echo(self) -> dict:
        """Config as recorded in the report; output paths and thread count do not affect results."""
        d = asdict(self)
        for k in ("out", "table", "workers", "timing"):
            d.pop(k)
        d["p"], d["q"], d["inputs"] = list(self.p), list(self.q), list(self.inputs)
        return d

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        needs_ineq = self.command in ("verify", "sweep", "extremal", "profile")
        if needs_ineq and self.inequality not in INEQUALITY_IDS:
            raise ConfigError(f"--inequality must be one of {', '.join(INEQUALITY_IDS)}")
        if self.n < 1 or self.m < 2:
            raise ConfigError("need --n >= 1 and --m >= 2")
        if self.inequality in ONE_VARIABLE and self.n != 1 and needs_ineq:
            raise ConfigError(f"{self.inequality} is a one-variable inequality; use --n 1")
        if self.degree < 0 or self.trials < 1 or self.samples < 1 or self.restarts < 1:
            raise ConfigError("--degree must be >= 0 and --trials, --samples, --restarts >= 1")
        if any(not x > 0 for x in self.p + self.q):
            raise ConfigError("exponents --p and weights --q must be positive")
        if self.grid < 1 or self.radial < 1 or self.max_points < 1:
            raise ConfigError("--grid, --radial and --max-points must be positive")
        if not (self.tol > 0 and self.equality_tol > 0):
            raise ConfigError("--tol and --equality-tol must be positive")
        if self.law not in LAWS:
            raise ConfigError(f"--law must be one of {LAWS}")
        if self.command == "profile" and not 0 < self.rho < 1:
            raise ConfigError("--rho must lie in (0, 1)")


# function tuples

def _exponents(cfg: RunConfig, default: float, count: int) -> tuple[float, ...]:
    vals = cfg.p or (default,)
    if len(vals) == 1:
        return vals * count
    if len(vals) != count:
        raise ConfigError(f"expected 1 or {count} values of --p, got {len(vals)}")
    return vals


def _arity(cfg: RunConfig) -> int:
    i = cfg.inequality
    if i in ("carleman", "equal_function", "isoperimetric"):
        return 1
    if i == "carleman_double":
        return 2
    return cfg.m


def _load_inputs(cfg: RunConfig) -> list[PolySeries]:
    try:
        fs = [load_series(src) for src in cfg.inputs]
    except (SeriesError, OSError) as exc:
        raise ConfigError(f"cannot read coefficient input: {exc}") from exc
    return fs


def _functions(cfg: RunConfig, seq) -> list[PolySeries]:
    k = _arity(cfg)
    if cfg.inputs:
        fs = _load_inputs(cfg)
        if len(fs) == 1 and k > 1:
            fs = fs * k
        if len(fs) != k:
            raise ConfigError(f"{cfg.inequality} needs {k} input series, got {len(fs)}")
        return fs
    seqs = seq.spawn(k)
    return [generate_random_function(s, cfg.n, cfg.degree, cfg.law) for s in seqs]


def _gap(cfg: RunConfig, fs: list[PolySeries]) -> ineq.GapReport:
    i, qc, tols = cfg.inequality, cfg.quadrature(), cfg.tolerances()
    if i == "burbea_hilbert":
        ws = cfg.q or (1.0,)
        ws = ws * len(fs) if len(ws) == 1 else ws
        if len(ws) != len(fs):
            raise ConfigError(f"expected 1 or {len(fs)} values of --q")
        return ineq.burbea_hilbert_gap(fs, ws, tols)
    if i == "main_product":
        return ineq.main_product_gap(fs, _exponents(cfg, 2.0, len(fs)), qc, tols)
    if i == "equal_function":
        return ineq.equal_function_gap(fs[0], _exponents(cfg, 2.0, 1)[0], cfg.m, qc, tols)
    if i == "carleman":
        return ineq.carleman_gap(fs[0], _exponents(cfg, 2.0, 1)[0], qc, tols)
    if i == "carleman_double":
        return ineq.carleman_double_gap(fs[0], fs[1], qc, tols)
    if i == "isoperimetric":
        return ineq.isoperimetric_check(derivative=fs[0], config=qc, tols=tols)
    mu_q = cfg.q[0] if cfg.q else None
    if i == "logsub":
        powers = _exponents(cfg, 1.0, len(fs))
        return ineq.logsub_gap([ModulusSum((f,), (s,)) for f, s in zip(fs, powers)], mu_q, qc, tols)
    return ineq.phi_main_gap(fs, _exponents(cfg, 2.0, len(fs)), None, mu_q, qc, tols)


def _curve_points(path: str) -> np.ndarray:
    try:
        data = np.loadtxt(path, comments="#", ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read curve file: {exc}") from exc
    if data.shape[1] != 2:
        raise ConfigError("curve file needs two columns x y")
    return data


# commands

def _verify(cfg: RunConfig) -> list[dict]:
    if cfg.inequality == "isoperimetric" and cfg.curve:
        rep = ineq.isoperimetric_check(curve=_curve_points(cfg.curve), tols=cfg.tolerances())
        return [rep.as_dict()]
    fs = _functions(cfg, np.random.SeedSequence(cfg.seed))
    return [_gap(cfg, fs).as_dict()]


def _sweep(cfg: RunConfig) -> list[dict]:
    if cfg.inputs:
        raise ConfigError("sweep draws random functions; --in is not accepted")

    def trial(args):
        idx, seq = args
        rec = _gap(cfg, _functions(cfg, seq)).as_dict()
        rec["trial"] = idx
        return rec

    jobs = list(enumerate(trial_seeds(cfg.seed, cfg.trials)))
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(trial, jobs))
    return [trial(j) for j in jobs]


def _problem(cfg: RunConfig) -> Problem:
    i = cfg.inequality
    if i == "burbea_hilbert":
        ws = cfg.q or (1.0,)
        return Problem(i, ws * cfg.m if len(ws) == 1 else ws, cfg.m)
    if i in ("carleman", "equal_function"):
        return Problem(i, _exponents(cfg, 2.0, 1), cfg.m)
    if i in ("carleman_double", "isoperimetric"):
        return Problem(i, (1.0, 1.0) if i == "carleman_double" else (1.0,), 2)
    return Problem(i, _exponents(cfg, 2.0, cfg.m), cfg.m)


def _extremal(cfg: RunConfig) -> list[dict]:
    space = SearchSpace(_problem(cfg), cfg.family, cfg.degree, cfg.rho)
    out = []
    for t in range(cfg.trials):
        res = maximize_ratio(space, cfg.budget, cfg.seed + t, cfg.restarts, tols=cfg.tolerances(),
                             workers=cfg.workers)
        out.append(res.as_dict())
    return out


def _factor(cfg: RunConfig) -> list[dict]:
    ps = cfg.p or (1.0,)
    out = []
    if cfg.modulus:
        try:
            U = BoundaryModulus.load(cfg.modulus)
        except (OSError, ValueError, FactorizationError) as exc:
            raise ConfigError(f"cannot read boundary modulus: {exc}") from exc
        F = OuterFunction(U)
        out.append({"kind": "outer", "samples": U.size, "value_at_zero": complex(F(0.0)),
                    "boundary_deviation": F.boundary_deviation()})
        return out
    if cfg.inputs:
        fs = _load_inputs(cfg)
    else:
        seqs = trial_seeds(cfg.seed, cfg.trials)
        fs = [random_polynomial_with_zeros(s, max(cfg.degree, cfg.zeros_inside), cfg.zeros_inside) for s in seqs]
    for f in fs:
        if f.dim != 1:
            raise ConfigError("factorization works with one-variable series")
        for p in ps:
            out.append(riesz_factorize(f, p, cfg.quadrature()).as_dict())
    return out


def _norms(cfg: RunConfig) -> list[dict]:
    if cfg.inputs:
        fs = _load_inputs(cfg)
    else:
        fs = [generate_random_function(s, cfg.n, cfg.degree, cfg.law) for s in trial_seeds(cfg.seed, cfg.trials)]
    out = []
    for f in fs:
        for q in cfg.q or (1.0,):
            out.append(norm_report(f, q).as_dict())
        for p in cfg.p:
            est = torus_power_mean(f, p, cfg.quadrature())
            out.append({"kind": "hardy_norm", "p": p, "value": est.value ** (1.0 / p), "error": est.error,
                        "converged": est.converged})
    return out


def _profile(cfg: RunConfig) -> list[dict]:
    problem = _problem(cfg)
    pts = ratio_profile(problem, kernel_path(problem), cfg.samples, (0.0, cfg.rho), tols=cfg.tolerances())
    if cfg.table:
        lines = ["# t\tratio\tstatus"] + ["%.17g\t%.17g\t%s" % p.as_row() for p in pts]
        Path(cfg.table).write_text("\n".join(lines) + "\n")
    return [{"kind": "profile", "t": p.t, "ratio": p.ratio, "status": p.status} for p in pts]


HANDLERS = {"verify": _verify, "sweep": _sweep, "extremal": _extremal, "factor": _factor,
            "norms": _norms, "profile": _profile}


def run(cfg: RunConfig) -> RunReport:
    cfg.validate()
    t0 = time.perf_counter()
    try:
        records = HANDLERS[cfg.command](cfg)
    except (InequalityError, SeriesError, NormError, SearchError) as exc:
        raise ConfigError(str(exc)) from exc
    wall = time.perf_counter() - t0 if cfg.timing else None
    return RunReport(cfg.echo(), records, wall)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polysharp", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--inequality", choices=INEQUALITY_IDS)
    ap.add_argument("--n", type=int, default=1, help="number of variables")
    ap.add_argument("--m", type=int, default=2, help="number of functions (product inequalities)")
    ap.add_argument("--p", type=float, action="append", default=[], help="exponent p_j (repeatable)")
    ap.add_argument("--q", type=float, action="append", default=[],
                    help="weight q_j (repeatable); for logsub/phi_main the measure parameter")
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--grid", type=int, default=DEFAULT_CONFIG.grid, help="initial angular points per axis")
    ap.add_argument("--radial", type=int, default=DEFAULT_CONFIG.radial, help="initial radial points per axis")
    ap.add_argument("--max-points", type=int, default=DEFAULT_CONFIG.max_points, help="adaptive cap")
    ap.add_argument("--rtol", type=float, default=DEFAULT_CONFIG.rtol, help="adaptive relative tolerance")
    ap.add_argument("--trials", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--equality-tol", type=float, default=1e-6)
    ap.add_argument("--law", choices=LAWS, default="uniform_disc")
    ap.add_argument("--in", dest="inputs", action="append", default=[],
                    help="coefficient file or inline JSON (repeatable)")
    ap.add_argument("--curve", help="two-column closed curve samples (isoperimetric)")
    ap.add_argument("--modulus", help="boundary modulus file (factor: outer function)")
    ap.add_argument("--family", choices=("coefficient_ball", "kernel_family"), default="coefficient_ball")
    ap.add_argument("--rho", type=float, default=0.6)
    ap.add_argument("--budget", type=int)
    ap.add_argument("--restarts", type=int, default=5)
    ap.add_argument("--samples", type=int, default=21)
    ap.add_argument("--zeros-inside", type=int, default=2)
    ap.add_argument("--out", help="report path (default: stdout)")
    ap.add_argument("--table", help="profile: delimited (t, ratio) table path")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--timing", action="store_true", help="record wall-clock time in the report")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=ns.command, inequality=ns.inequality, n=ns.n, m=ns.m, p=tuple(ns.p), q=tuple(ns.q),
        degree=ns.degree, grid=ns.grid, radial=ns.radial, max_points=ns.max_points, rtol=ns.rtol,
        trials=ns.trials, seed=ns.seed, tol=ns.tol, equality_tol=ns.equality_tol, law=ns.law,
        inputs=tuple(ns.inputs), curve=ns.curve, modulus=ns.modulus, family=ns.family, rho=ns.rho,
        budget=ns.budget, restarts=ns.restarts, samples=ns.samples, zeros_inside=ns.zeros_inside,
        out=ns.out, table=ns.table, workers=ns.workers, timing=ns.timing,
    )


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cfg = config_from_args(ns)
    try:
        report = run(cfg)
    except (ConfigError, QuadratureError, FactorizationError) as exc:
        print(f"polysharp: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = report.write(cfg.out)
    if cfg.out in (None, "-"):
        sys.stdout.write(text)
    s = report.summary
    log.info("records=%d holds=%d equality=%d violated=%d", s["records"], s["holds"], s["equality"], s["violated"])
    return EXIT_VIOLATED if s["violated"] else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
