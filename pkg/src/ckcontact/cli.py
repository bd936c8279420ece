"""Command-line entry point: ``verify``, ``simulate``, ``reduce`` and ``catalog``.

Exit status is 0 when everything passes, 1 when a check fails and 2 for
usage or configuration errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .calculus.integrate import integrate
from .errors import CKError, NotLiouville, NotRegular, StepFailure
from .fibration import fibration, in_domain, reeb_flow, verify_pullback
from .geometry import AMBIENT
from .reduction import compare_flows, reduction_pair
from .systems.catalog import (
    CATALOG,
    catalog_get,
    catalog_ids,
    instantiate,
    parse_coeffs,
    system_first_integrals,
    time_hamiltonian,
)
from .verify import SUITES, Check, Report, run_suites

USAGE, FAILURE, OK = 2, 1, 0
MAX_SEED = 2 ** 64


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str = "verify"
    system: str | None = None
    kappa: tuple | None = None
    coeffs: dict = field(default_factory=dict)
    x0: tuple | None = None
    t0: float = 0.0
    t1: float = 10.0
    tol: float = 1e-10
    seed: int = 42
    out: str | None = None
    suite: str = "all"
    chart: str | None = None
    timing: bool = False

    def validate(self):
        if not self.tol > 0:
            raise UsageError(f"tolerance must be positive, got {self.tol}")
        if not self.t1 > self.t0:
            raise UsageError(f"need t1 > t0, got t0={self.t0}, t1={self.t1}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < MAX_SEED):
            raise UsageError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        return self


def _floats(text, what, n=None):
    if isinstance(text, (list, tuple)):
        vals = [float(v) for v in text]
    else:
        try:
            vals = [float(v) for v in str(text).split(",") if v.strip()]
        except ValueError as e:
            raise UsageError(f"bad {what}: {text!r}") from e
    if n is not None and len(vals) != n:
        raise UsageError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    return tuple(vals)


def _coeff_pairs(items):
    out = {}
    for item in items or ():
        name, sep, expr = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--coeff expects name=expr, got {item!r}")
        out[name.strip()] = expr.strip()
    return out


def load_config(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config {path}: {e}") from e
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def build_config(args) -> RunConfig:
    """Config file values first, then every flag given on the command line."""
    base = load_config(args.config) if getattr(args, "config", None) else {}
    cfg = RunConfig(command=args.command)
    for key, value in base.items():
        if key == "kappa" and value is not None:
            value = _floats(value, "kappa", 3)
        elif key == "x0" and value is not None:
            value = _floats(value, "x0")
        elif key == "coeffs":
            value = {str(k): str(v) for k, v in value.items()}
        cfg = replace(cfg, **{key: value})
    overrides = {}
    for name in ("system", "t0", "t1", "tol", "seed", "out", "suite", "chart"):
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = v
    if getattr(args, "kappa", None) is not None:
        overrides["kappa"] = _floats(args.kappa, "kappa", 3)
    if getattr(args, "x0", None) is not None:
        overrides["x0"] = _floats(args.x0, "x0")
    if getattr(args, "coeff", None):
        overrides["coeffs"] = {**cfg.coeffs, **_coeff_pairs(args.coeff)}
    if getattr(args, "timing", False):
        overrides["timing"] = True
    cfg = replace(cfg, command=args.command, **overrides)
    cfg = replace(cfg, t0=float(cfg.t0), t1=float(cfg.t1), tol=float(cfg.tol))
    return cfg.validate()


def _write(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- verify --------------------------------------------------------------------

def run_verify(cfg: RunConfig) -> Report:
    if cfg.suite not in SUITES + ("all",):
        raise UsageError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES + ('all',))}")
    return run_suites(cfg.suite, cfg.seed, cfg.timing)


# -- simulate ------------------------------------------------------------------

def _default_chart(sid):
    return AMBIENT if sid == "sp4-ck" or sid.startswith("liouville-") else None


def _descriptor(cfg: RunConfig, chart):
    if not cfg.system:
        raise UsageError("--system is required")
    return catalog_get(cfg.system, cfg.kappa, chart)


def monitors(d, coeffs, x0):
    """Drift functions ``(t, x) -> value``: constraint, conserved integrals and,
    for constant coefficients, the Hamiltonian itself."""
    x0 = np.asarray(x0, dtype=float)
    out = {}
    if d.constraint is not None:
        out["constraint"] = lambda t, x, c=d.constraint: float(c.at(x))
    for f in system_first_integrals(d):
        v0 = float(f.at(x0))
        out[f.name] = lambda t, x, f=f, v0=v0: float(f.at(x)) - v0
    exprs = parse_coeffs(d, coeffs)
    if all(e.is_constant for e in exprs.values()) and (d.symplectic is not None or d.liouville):
        H = time_hamiltonian(d, coeffs)
        h0 = float(H.at(x0))
        out["H"] = lambda t, x, H=H, h0=h0: float(H.at(x)) - h0
    return out


def _fmt(v):
    return f"{v:.17g}"


def run_simulate(cfg: RunConfig):
    chart = cfg.chart or _default_chart(cfg.system or "")
    d = _descriptor(cfg, chart)
    coeffs = cfg.coeffs or dict(d.presets)
    x0 = np.asarray(cfg.x0 if cfg.x0 is not None else d.x0, dtype=float)
    if x0.shape != (d.dim,):
        raise UsageError(f"{d.id} in chart {d.chart} needs a {d.dim}-component initial state")
    mons = monitors(d, coeffs, x0)
    tr = integrate(instantiate(d, coeffs), x0, cfg.t0, cfg.t1, cfg.tol, mons)
    names = list(mons)
    header = ["t"] + [f"x{i}" for i in range(d.dim)] + [f"drift_{n}" for n in names]
    lines = [",".join(header)]
    for i, t in enumerate(tr.t):
        row = [t, *tr.states[i], *(tr.drifts[n][i] for n in names)]
        lines.append(",".join(_fmt(v) for v in row))
    summary = {
        "system": d.id, "chart": d.chart, "kappa": None if d.kappa is None else list(d.kappa),
        "coeffs": {k: str(v) for k, v in sorted(coeffs.items())}, "t0": cfg.t0, "t1": cfg.t1,
        "steps": int(len(tr.t) - 1), "final": [float(v) for v in tr.final],
        "max_drift": {n: float(np.max(tr.drifts[n])) for n in names},
        "flagged": sorted(n for n in names if tr.flagged[n]),
    }
    return "\n".join(lines) + "\n", summary


# -- reduce --------------------------------------------------------------------

def run_reduce(cfg: RunConfig) -> Report:
    if not cfg.system:
        raise UsageError("--system is required")
    sid = cfg.system
    if sid not in CATALOG:
        catalog_get(sid)
    if cfg.kappa is not None:
        fibration(cfg.kappa)  # NotRegular / UnsupportedKappa before anything else
    kappa = cfg.kappa
    if kappa is None and CATALOG[sid].kappas:
        kappa = CATALOG[sid].kappas[0]
    pair = reduction_pair(sid, kappa)
    up = pair.upstairs
    coeffs = cfg.coeffs or None
    rng = np.random.default_rng(cfg.seed)
    res, tu, td = compare_flows(pair, coeffs, cfg.x0, cfg.t0, cfg.t1, cfg.tol)
    checks = [Check("reduce/commutation", res, 1e-6, 51)]
    meta = {"system": sid, "label": up.label, "downstairs": pair.downstairs.chart}
    if pair.fibration is not None:
        f = pair.fibration
        x = up.sample(100, rng)
        x = x[in_domain(f, x)]
        checks.append(Check("reduce/pullback", verify_pullback(f, up.contact, x), 1e-9, len(x)))
        base = f(x)
        worst = 0.0
        for t in (0.5, 1.5):
            y = np.array([reeb_flow(f.kappa, xi, t) for xi in x])
            m = in_domain(f, y)
            worst = max(worst, f.distance(f(y[m]), base[m]))
        checks.append(Check("reduce/fiber-invariance", worst, 1e-9, len(x)))
        meta["kappa"] = list(f.kappa)
        meta["structure_group"] = f.structure_group
    return Report("reduce", cfg.seed, checks, [], None, meta)


# -- catalog -------------------------------------------------------------------

def catalog_listing():
    rows = []
    for sid in catalog_ids():
        e = CATALOG[sid]
        rows.append({"id": sid, "needs_kappa": e.needs_kappa,
                     "kappas": [list(k) for k in e.kappas] or None, "description": e.description})
    return rows


# -- argument parsing ----------------------------------------------------------

def _common(p, system=True):
    p.add_argument("--config", help="JSON config; flags override its fields")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output path (default: stdout)")
    if system:
        p.add_argument("--system")
        p.add_argument("--kappa", help="k1,k2,k3")
        p.add_argument("--chart")
        p.add_argument("--coeff", action="append", metavar="NAME=EXPR")
        p.add_argument("--x0", help="comma-separated initial state")
        p.add_argument("--t0", type=float)
        p.add_argument("--t1", type=float)
        p.add_argument("--tol", type=float)


def make_parser():
    parser = argparse.ArgumentParser(prog="ckcontact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run invariant suites and print a JSON report")
    _common(v, system=False)
    v.add_argument("--suite")
    v.add_argument("--timing", action="store_true", help="record wall-clock time in the report")
    s = sub.add_parser("simulate", help="integrate a catalog system and write a CSV trajectory")
    _common(s)
    s.add_argument("--summary", help="write the JSON summary here (default: stderr)")
    r = sub.add_parser("reduce", help="compare upstairs and downstairs flows of a reduction")
    _common(r)
    c = sub.add_parser("catalog", help="list catalog systems")
    c.add_argument("--json", action="store_true")
    return parser


def _glue_negative_values(argv):
    """``--kappa -1,-1,1`` would read the value as an option; glue it on."""
    out = []
    it = iter(argv)
    for a in it:
        if a in ("--kappa", "--x0"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = make_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.command == "catalog":
            rows = catalog_listing()
            if args.json:
                sys.stdout.write(json.dumps(rows, indent=2) + "\n")
            else:
                for r in rows:
                    ks = "" if not r["kappas"] else " kappa in " + " ".join(",".join(f"{v:g}" for v in k)
                                                                           for k in r["kappas"])
                    need = " (needs --kappa)" if r["needs_kappa"] else ""
                    sys.stdout.write(f"{r['id']:<16}{r['description']}{need}{ks}\n")
            return OK
        cfg = build_config(args)
        if cfg.command == "verify":
            report = run_verify(cfg)
            _write(report.to_json(), cfg.out)
            return OK if report.passed else FAILURE
        if cfg.command == "simulate":
            csv, summary = run_simulate(cfg)
            _write(csv, cfg.out)
            text = json.dumps(summary, indent=2) + "\n"
            if args.summary:
                Path(args.summary).write_text(text)
            else:
                sys.stderr.write(text)
            return FAILURE if summary["flagged"] else OK
        if cfg.command == "reduce":
            report = run_reduce(cfg)
            _write(report.to_json(), cfg.out)
            return OK if report.passed else FAILURE
    except UsageError as e:
        sys.stderr.write(f"ckcontact: {e}\n")
        return USAGE
    except StepFailure as e:
        # a run that blows up is a failed result, not a usage mistake
        sys.stderr.write(f"ckcontact: StepFailure: {e}\n")
        return FAILURE
    except (NotRegular, NotLiouville) as e:
        sys.stderr.write(f"ckcontact: {type(e).__name__}: {e}\n")
        return USAGE
    except (CKError, ValueError, KeyError) as e:
        sys.stderr.write(f"ckcontact: {type(e).__name__}: {e}\n")
        return USAGE
    return USAGE


if __name__ == "__main__":
    sys.exit(main())
