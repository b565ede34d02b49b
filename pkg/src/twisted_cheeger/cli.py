"""Command line entry point.

Subcommands: ``eval``, ``minimize``, ``threshold``, ``figures``, ``verify``.
Options may also come from a ``key = value`` config file (``--config`` or
the ``TC_CONFIG`` environment variable); flags given on the command line win.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 solver failure, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import geometry as geo
from . import mathcore as mc
from . import optimize as opt
from . import verify as ver

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3, 4
ENDPOINT_GAP = 1e-9


class UsageError(Exception):
    pass


class IOFailure(Exception):
    pass


@dataclass
class RunConfig:
    n: int = 2
    q: Optional[float] = None
    q_min: Optional[float] = None
    q_max: Optional[float] = None
    x: Optional[float] = None
    steps: Optional[int] = None
    tol_x: float = opt.TOL_X
    tol_q: float = opt.TOL_Q
    tie_tol: float = opt.TIE_TOL
    seed: int = ver.DEFAULT_SEED
    out: Optional[str] = None
    format: Optional[str] = None
    claim: Optional[str] = None
    explicit: frozenset = field(default_factory=frozenset)

    def validate(self):
        mc.check_dim(self.n)
        if self.steps is not None and self.steps < 2:
            raise UsageError(f"--steps must be >= 2, got {self.steps}")
        for name in ("tol_x", "tol_q", "tie_tol"):
            if not getattr(self, name) > 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.format not in (None, "csv", "json"):
            raise UsageError(f"--format must be csv or json, got {self.format!r}")
        return self


FIELD_TYPES = {
    "n": int,
    "q": float,
    "q_min": float,
    "q_max": float,
    "x": float,
    "steps": int,
    "tol_x": float,
    "tol_q": float,
    "tie_tol": float,
    "seed": int,
    "out": str,
    "format": str,
    "claim": str,
}


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, keys may use dashes."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in FIELD_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = FIELD_TYPES[key](val)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {val!r}") from None
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="space dimension (>= 2)")
    common.add_argument("--q", type=float, help="exponent in [1, n/(n-1))")
    common.add_argument("--q-min", type=float)
    common.add_argument("--q-max", type=float)
    common.add_argument("--x", type=float, help="log-radius coordinate")
    common.add_argument("--steps", type=int, help="grid size")
    common.add_argument("--tol-x", type=float)
    common.add_argument("--tol-q", type=float)
    common.add_argument("--tie-tol", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output file (directory for figures)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--config", help="key = value config file (default: $TC_CONFIG)")
    common.add_argument("--claim", help="registry claim id (verify only)")

    parser = argparse.ArgumentParser(prog="twisted-cheeger", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[common], help="evaluate f, df/dx, A, c")
    sub.add_parser("minimize", parents=[common], help="global minimizer for (n, q)")
    sub.add_parser("threshold", parents=[common], help="symmetry-breaking exponent for n")
    sub.add_parser("figures", parents=[common], help="write plot-ready CSV data")
    sub.add_parser("verify", parents=[common], help="run the claim registry")
    return parser


def resolve_config(args) -> RunConfig:
    values = {}
    path = args.config or os.environ.get("TC_CONFIG")
    if path:
        values.update(read_config_file(path))
    for key in FIELD_TYPES:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return RunConfig(**values, explicit=frozenset(values)).validate()


# ---------------------------------------------------------------------------
# formatting


def fmt_num(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(stream, header, rows):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_num(v) if isinstance(v, (int, float, np.floating, np.integer)) else v for v in row])


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def emit(text: str, out: Optional[str]):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOFailure(str(exc)) from exc


def cap_sweep(n, q):
    """Sweeps that request the endpoint ``1*`` stop just short of it."""
    qc = mc.critical_exponent(n)
    return min(q, qc - ENDPOINT_GAP)


def q_sweep(cfg: RunConfig, default_lo=1.0, default_hi=None, default_steps=400):
    n = cfg.n
    lo = cfg.q_min if cfg.q_min is not None else default_lo
    hi = cfg.q_max if cfg.q_max is not None else (default_hi or mc.critical_exponent(n))
    hi = cap_sweep(n, hi)
    mc.check_exponent(n, lo)
    mc.check_exponent(n, hi)
    if hi < lo:
        raise UsageError("--q-max must not be below --q-min")
    return np.linspace(lo, hi, cfg.steps or default_steps)


# ---------------------------------------------------------------------------
# commands


def cmd_eval(cfg: RunConfig) -> int:
    n = cfg.n
    if cfg.q is not None:
        qs = [mc.check_exponent(n, cfg.q)]
    elif cfg.q_min is not None or cfg.q_max is not None:
        qs = list(q_sweep(cfg, default_steps=11))
    else:
        raise UsageError("eval needs --q or a --q-min/--q-max range")
    rows = []
    for q in qs:
        if cfg.x is not None:
            xs = np.array([cfg.x], dtype=float)
        else:
            xs = np.linspace(0.0, opt.bracket_xmax(n, q), cfg.steps or 101)
        with np.errstate(over="ignore"):
            vals = zip(mc.f(n, q, xs), mc.dfdx(n, q, xs), mc.A(n, q, xs), mc.c(n, q, xs))
        for x, (fv, dv, av, cv) in zip(xs, vals):
            rows.append((n, q, x, fv, dv, av, cv))
    header = ["n", "q", "x", "f", "dfdx", "A", "c"]
    if (cfg.format or "csv") == "json":
        text = dump_json([dict(zip(header, (int(r[0]), *map(float, r[1:])))) for r in rows])
    else:
        buf = io.StringIO()
        write_csv(buf, header, rows)
        text = buf.getvalue()
    emit(text, cfg.out)
    return EXIT_OK


def minimize_payload(n, q, cfg: RunConfig) -> dict:
    res = opt.global_min(n, q, cfg.tol_x, cfg.tie_tol)
    radii = geo.x_to_radii(n, res.x_star)
    return {
        "n": n,
        "q": q,
        "x_star": res.x_star,
        "f_star": res.f_star,
        "r1": radii.r1,
        "r2": radii.r2,
        "J": geo.scale_invariant_optimum(n, q, res.f_star),
        "tie": res.tie,
        "stationary_points": [asdict(p) for p in res.stationary_points],
    }


def cmd_minimize(cfg: RunConfig) -> int:
    if cfg.q is None:
        raise UsageError("minimize needs --q")
    q = mc.check_exponent(cfg.n, cfg.q)
    payload = minimize_payload(cfg.n, q, cfg)
    if (cfg.format or "json") == "json":
        text = dump_json(payload)
    else:
        buf = io.StringIO()
        header = ["n", "q", "x", "f", "kind", "r1", "r2", "J", "global"]
        rows = []
        for p in payload["stationary_points"]:
            r = geo.x_to_radii(cfg.n, p["x"])
            is_global = p["x"] == payload["x_star"] or p["x"] == payload["tie"]
            rows.append((cfg.n, q, p["x"], p["value"], p["kind"], r.r1, r.r2, payload["J"], int(is_global)))
        write_csv(buf, header, rows)
        text = buf.getvalue()
    emit(text, cfg.out)
    return EXIT_OK


def cmd_threshold(cfg: RunConfig) -> int:
    res = opt.threshold(cfg.n, cfg.tol_q, cfg.tie_tol)
    payload = {
        "n": res.n,
        "q_tilde": res.q_tilde,
        "bracket": list(res.bracket),
        "iterations": res.iterations,
        "minimizers_at_threshold": res.minimizers_at_threshold,
        "lower_bound": 1.0 + 1.0 / res.n,
        "upper_bound": 1.0 + 1.0 / res.n + 1.0 / res.n**2,
    }
    if (cfg.format or "json") == "json":
        text = dump_json(payload)
    else:
        buf = io.StringIO()
        write_csv(buf, ["n", "q_tilde", "q_lo", "q_hi", "iterations", "x_tilde"],
                  [(res.n, res.q_tilde, *res.bracket, res.iterations, res.minimizers_at_threshold[-1])])
        text = buf.getvalue()
    emit(text, cfg.out)
    return EXIT_OK


def profile_rows(n, qs, steps):
    X = max(opt.bracket_xmax(n, q) for q in qs)
    xs = np.linspace(0.0, X, steps)
    rows = []
    for q in sorted(qs):
        rows.extend((n, q, x, fv) for x, fv in zip(xs, mc.f(n, q, xs)))
    return rows


def fig2_exponents(n=3):
    """One exponent in each of the four regimes of ``f_n``, ``n >= 3``."""
    fold = opt.fold_exponent(n)
    qt = opt.threshold(n).q_tilde
    qb = mc.qbar(n)
    qc = mc.critical_exponent(n)
    return [1.0 + 1.0 / n, 0.5 * (fold + qt), 0.5 * (qt + qb), 0.5 * (qb + qc)]


def curve_grid(n, cfg: RunConfig, steps):
    qs = q_sweep(cfg, default_steps=steps)
    if n >= 3:
        # extra samples around the jump so it is resolved to ~3e-4
        qt = opt.threshold(n, cfg.tol_q, cfg.tie_tol).q_tilde
        lo, hi = max(qs[0], qt - 0.06), min(qs[-1], qt + 0.06)
        if hi > lo:
            qs = np.union1d(qs, np.linspace(lo, hi, 401))
    return qs


def curve_rows(n, qs, cfg: RunConfig):
    return [(n, s.q, s.x_bar, s.f_bar) for s in opt.minimizer_curve(n, qs, cfg.tol_x, cfg.tie_tol)]


def cmd_figures(cfg: RunConfig) -> int:
    outdir = Path(cfg.out or "figures")
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IOFailure(str(exc)) from exc
    xsteps = cfg.steps or 2001
    n3 = cfg.n if cfg.n >= 3 else 3
    files = {
        "fig1.csv": (["n", "q", "x", "f"], profile_rows(2, [1.5, 1.75, 1.8, 1.9], xsteps)),
        "fig2.csv": (["n", "q", "x", "f"], profile_rows(n3, fig2_exponents(n3), xsteps)),
        "fig3.csv": (["n", "q", "xbar", "fbar"], curve_rows(2, q_sweep(RunConfig(n=2)), cfg)),
        "fig4.csv": (["n", "q", "xbar", "fbar"], curve_rows(n3, curve_grid(n3, RunConfig(n=n3), 400), cfg)),
    }
    for name, (header, rows) in files.items():
        buf = io.StringIO()
        write_csv(buf, header, rows)
        emit(buf.getvalue(), str(outdir / name))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    claims = None if cfg.claim is None else [c.strip() for c in cfg.claim.split(",")]
    if claims:
        unknown = [c for c in claims if c not in ver.REGISTRY]
        if unknown:
            raise UsageError(f"unknown claim(s): {', '.join(unknown)}; known: {', '.join(ver.REGISTRY)}")
    overrides = {"seed": cfg.seed}
    if "n" in cfg.explicit:
        overrides["n"] = (cfg.n,)
    reports = ver.run_all(claims, **overrides)
    emit(dump_json([r.to_dict() for r in reports]), cfg.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


COMMANDS = {
    "eval": cmd_eval,
    "minimize": cmd_minimize,
    "threshold": cmd_threshold,
    "figures": cmd_figures,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, mc.DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except opt.SolverError as exc:
        print(f"solver failure: {exc}; state={exc.state}", file=sys.stderr)
        return EXIT_SOLVER
    except (IOFailure, OSError) as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
