"""Command-line front end: sweeps, CSV/JSON serialization, reproducible runs.

Commands
    steady      real-space correlation blocks -> CSV (x, g11, g12, g21, g22)
    xi          correlation length fit + branch-cut bound -> CSV
                (mu, gamma, q, L, xi_up, xi_fit, alpha, r2)
    negativity  block-size profile -> CSV (ell, chord, negativity)
    gap         Liouvillian gap -> CSV (mu, gamma, q, L, gap)
    oracle      dense cross-validation report -> JSON
    sweep       any of the above driven by a config file

Sweep axes accept start:stop:step ranges (stop included when within
1e-12) or comma lists. Every output starts with comment lines echoing
the full configuration and seed; --reproducible suppresses the
timestamp line so identical configs give byte-identical files.
Exit codes: 0 success, 1 invalid arguments, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import negativity as neg
from . import oracle as orc
from . import spatial, spectrum
from .errors import PPKitaevError
from .model import ModelParams

SCHEMAS = {
    "steady": ["x", "g11", "g12", "g21", "g22"],
    "xi": ["mu", "gamma", "q", "L", "xi_up", "xi_fit", "alpha", "r2"],
    "negativity": ["ell", "chord", "negativity"],
    "gap": ["mu", "gamma", "q", "L", "gap"],
}
SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    command: str
    mu: float = 0.4
    gamma: float = 1.0
    q: float = 1.0
    L: int = 64
    ell_list: list[int] | None = None
    sweep_q: list[float] | None = None
    sweep_gamma: list[float] | None = None
    sweep_mu: list[float] | None = None
    sweep_L: list[int] | None = None
    out: str = "-"
    fmt: str = "csv"
    seed: int = 1234
    reproducible: bool = False
    im_max: float = 3.0
    n_re: int = 2048
    n_im: int = 512
    fit_window: tuple[int, int] | None = None
    n_traj: int = 0
    T: float | None = None
    dense: bool = False
    extras: dict = field(default_factory=dict)

    def axis(self, name: str, default):
        vals = getattr(self, f"sweep_{name}")
        return vals if vals else [default]

    def points(self):
        for mu in self.axis("mu", self.mu):
            for g in self.axis("gamma", self.gamma):
                for q in self.axis("q", self.q):
                    for L in self.axis("L", self.L):
                        yield ModelParams(mu=mu, gamma=g, q=q, L=int(L))


def parse_range(text: str, integer: bool = False) -> list:
    """start:stop:step range (stop included within 1e-12) or comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("range step must be positive")
        n = int(np.floor((stop - start) / step + 1e-12)) + 1
        vals = [start + i * step for i in range(max(n, 0))]
        vals = [v for v in vals if v <= stop + 1e-12]
    else:
        vals = [float(p) for p in text.split(",") if p.strip()]
    if integer:
        out = []
        for v in vals:
            if abs(v - round(v)) > 1e-9:
                raise ValueError(f"expected integers in {text!r}")
            out.append(int(round(v)))
        return out
    return vals


KNOWN_KEYS = {
    "command", "mu", "gamma", "q", "L", "ell", "sweep-q", "sweep-gamma",
    "sweep-mu", "sweep-L", "out", "format", "seed", "reproducible",
    "im-max", "n-re", "n-im", "fit-window", "n-traj", "T", "dense",
}


def parse_config_file(path: str) -> dict:
    """Flat key = value file; '#' comments; unknown keys rejected."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in KNOWN_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = val
    return out


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ppkitaev",
        description="Steady-state properties of a partially postselected monitored Kitaev chain",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_L=True):
        p.add_argument("--mu", type=float, default=0.4, help="chemical potential (default 0.4)")
        p.add_argument("--gamma", type=float, default=1.0, help="monitoring rate >= 0 (default 1)")
        p.add_argument("--q", type=float, default=1.0, help="detection efficiency in [0,1] (default 1)")
        if with_L:
            p.add_argument("--L", type=int, default=64, help="even chain length (default 64)")
        p.add_argument("--sweep-q", type=str, default=None, help="q axis: start:stop:step or list")
        p.add_argument("--sweep-gamma", type=str, default=None, help="gamma axis")
        p.add_argument("--sweep-mu", type=str, default=None, help="mu axis")
        p.add_argument("--sweep-L", type=str, default=None, help="L axis (integers)")
        p.add_argument("--out", type=str, default="-", help="output path ('-' = stdout)")
        p.add_argument("--format", dest="fmt", choices=["csv", "json"], default=None)
        p.add_argument("--seed", type=int, default=1234)
        p.add_argument("--reproducible", action="store_true", help="suppress timestamp header")
        p.add_argument("--config", type=str, default=None, help="flat key=value config file")

    p = sub.add_parser("steady", help="real-space correlation blocks")
    common(p)
    p = sub.add_parser("xi", help="correlation length fit and upper bound")
    common(p)
    p.add_argument("--im-max", type=float, default=3.0)
    p.add_argument("--n-re", type=int, default=2048)
    p.add_argument("--n-im", type=int, default=512)
    p.add_argument("--fit-window", type=str, default=None, help="xmin,xmax")
    p = sub.add_parser("negativity", help="negativity vs block size")
    common(p)
    p.add_argument("--ell", type=str, default=None, help="comma list of block sizes")
    p = sub.add_parser("gap", help="Liouvillian gap")
    common(p)
    p.add_argument("--dense", action="store_true", help="dense 4Lx4L path (validation)")
    p = sub.add_parser("oracle", help="dense cross-validation report (L <= 6)")
    common(p)
    p.add_argument("--n-traj", type=int, default=0, help="also run trajectory sampling")
    p.add_argument("--T", type=float, default=None, help="trajectory horizon")
    p = sub.add_parser("sweep", help="run a command described by a config file")
    p.add_argument("--config", type=str, required=True)
    p.add_argument("--out", type=str, default=None, help="override config output path")
    p.add_argument("--reproducible", action="store_true")
    return ap


def parse_and_validate(argv: list[str]) -> RunConfig:
    """argv (or a config file via `sweep`) -> validated RunConfig.

    Raises SystemExit(1) with a one-line reason on invalid input.
    """
    ap = _build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            raise SystemExit(1) from exc
        raise
    try:
        merged: dict = {}
        if getattr(ns, "config", None):
            merged = parse_config_file(ns.config)
        if ns.command == "sweep":
            if "command" not in merged:
                raise ValueError("sweep config must set `command`")
            command = merged["command"]
            if command not in ("steady", "xi", "negativity", "gap", "oracle"):
                raise ValueError(f"unknown command {command!r} in config")
        else:
            command = ns.command

        defaults = {a.dest: a.default for a in ap._subparsers._group_actions[0].choices[
            ns.command]._actions if hasattr(a, "dest")}

        def pick(key, cast, default, ns_attr=None):
            # CLI flag (if explicitly set) > config file > CLI default > default
            attr = ns_attr or key.replace("-", "_")
            cli_val = getattr(ns, attr, None)
            if cli_val is not None and cli_val != defaults.get(attr):
                return cast(cli_val)
            if key in merged:
                return cast(merged[key])
            return cli_val if cli_val is not None else default

        cfg = RunConfig(
            command=command,
            mu=float(pick("mu", float, 0.4)),
            gamma=float(pick("gamma", float, 1.0)),
            q=float(pick("q", float, 1.0)),
            L=int(pick("L", int, 64)),
            out=str(pick("out", str, "-")),
            seed=int(pick("seed", int, 1234)),
            reproducible=bool(getattr(ns, "reproducible", False) or merged.get("reproducible") == "true"),
        )
        fmt = pick("format", str, None, ns_attr="fmt")
        cfg.fmt = fmt if fmt else ("json" if command == "oracle" else "csv")
        for name in ("q", "gamma", "mu", "L"):
            raw = pick(f"sweep-{name}", str, None, ns_attr=f"sweep_{name}")
            if raw:
                setattr(cfg, f"sweep_{name}", parse_range(raw, integer=(name == "L")))
        ell_raw = pick("ell", str, None)
        if ell_raw:
            cfg.ell_list = parse_range(ell_raw, integer=True)
        if command == "xi":
            cfg.im_max = float(pick("im-max", float, 3.0))
            cfg.n_re = int(pick("n-re", int, 2048))
            cfg.n_im = int(pick("n-im", int, 512))
            win = pick("fit-window", str, None)
            if win:
                lo, hi = parse_range(win, integer=True)
                cfg.fit_window = (lo, hi)
        if command == "gap":
            cfg.dense = bool(getattr(ns, "dense", False) or merged.get("dense") == "true")
        if command == "oracle":
            cfg.n_traj = int(pick("n-traj", int, 0))
            traw = pick("T", str, None, ns_attr="T")
            cfg.T = float(traw) if traw is not None else None
        for p in cfg.points():
            pass  # ModelParams validation happens point by point
        if cfg.fmt not in ("csv", "json"):
            raise ValueError(f"unknown format {cfg.fmt!r}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(1) from exc
    return cfg


def _header_lines(cfg: RunConfig) -> list[str]:
    items = []
    for key in ("command", "mu", "gamma", "q", "L", "seed", "fmt"):
        items.append(f"{key}={getattr(cfg, key)}")
    for name in ("q", "gamma", "mu", "L"):
        vals = getattr(cfg, f"sweep_{name}")
        if vals:
            items.append(f"sweep_{name}=[{','.join(_fmt(v) for v in vals)}]")
    if cfg.ell_list:
        items.append(f"ell=[{','.join(str(v) for v in cfg.ell_list)}]")
    lines = [
        f"# ppkitaev schema={cfg.command} v{SCHEMA_VERSION}",
        f"# config: {' '.join(items)}",
    ]
    if not cfg.reproducible:
        lines.append(f"# generated: {time.strftime('%Y-%m-%dT%H:%M:%S')}")
    return lines


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float) and np.isinf(v):
        return "inf"
    return f"{v:.17g}"


def _rows_steady(cfg: RunConfig):
    for p in cfg.points():
        corr = spatial.correlations_real_space(p)
        for x in range(p.L):
            b = corr.blocks[x]
            yield (x, b[0, 0], b[0, 1], b[1, 0], b[1, 1])


def _rows_xi(cfg: RunConfig):
    for p in cfg.points():
        scan = spatial.scan_singularities(p, im_max=cfg.im_max, n_re=cfg.n_re, n_im=cfg.n_im)
        xi_up = spatial.xi_upper_bound(scan)
        corr = spatial.correlations_real_space(p)
        try:
            fit = spatial.fit_correlation_length(corr, window=cfg.fit_window)
            xi_fit, alpha, r2 = fit.xi, fit.alpha, fit.r2
        except PPKitaevError:
            xi_fit, alpha, r2 = float("nan"), float("nan"), float("nan")
        yield (p.mu, p.gamma, p.q, p.L, xi_up, xi_fit, alpha, r2)


def _rows_negativity(cfg: RunConfig):
    for p in cfg.points():
        for res in neg.negativity_profile(p, cfg.ell_list):
            yield (res.ell, res.chord, res.value)


def _rows_gap(cfg: RunConfig):
    for p in cfg.points():
        yield (p.mu, p.gamma, p.q, p.L, spectrum.gap_for_params(p, dense=cfg.dense))


def _oracle_report(cfg: RunConfig) -> dict:
    report = {"points": [], "all_pass": True, "seed": cfg.seed}
    for p in cfg.points():
        ocfg = orc.OracleConfig(seed=cfg.seed, T=500.0 if p.q < 1 else 5000.0)
        state = orc.evolve_master_equation(p, ocfg)
        cov_dense = orc.covariance_from_density(state, p)
        cov_are = spatial.correlations_real_space(p).full_matrix()
        mismatch = float(np.max(np.abs(cov_dense - cov_are)))
        entry = {
            "mu": p.mu,
            "gamma": p.gamma,
            "q": p.q,
            "L": p.L,
            "covariance_mismatch": mismatch,
            "trace_drift": state.trace_drift,
            "residual": state.residual,
            "pass": bool(mismatch < 1e-6),
        }
        if cfg.n_traj > 0:
            tcfg = orc.OracleConfig(seed=cfg.seed, n_traj=cfg.n_traj)
            traj = orc.sample_trajectories(p, tcfg, T=cfg.T if cfg.T else 12.0)
            dev = np.abs(traj.mean_cov - cov_dense)
            sig = np.where(traj.stderr > 0, traj.stderr, np.inf)
            entry["trajectory_max_sigma"] = float(np.max(dev / sig))
            entry["trajectory_survivors"] = traj.n_surviving
            entry["pass"] = entry["pass"] and entry["trajectory_max_sigma"] < 3.0
        report["points"].append(entry)
        report["all_pass"] = report["all_pass"] and entry["pass"]
    return report


def run(cfg: RunConfig) -> int:
    """Execute a validated config; returns the process exit code."""
    try:
        if cfg.command == "oracle":
            report = _oracle_report(cfg)
            meta = {"schema": "oracle", "version": SCHEMA_VERSION,
                    "config": _header_lines(cfg)[1][2:]}
            text = json.dumps({"meta": meta, **report}, indent=2, sort_keys=True) + "\n"
            _write(cfg.out, text)
            return 0
        rows = {
            "steady": _rows_steady,
            "xi": _rows_xi,
            "negativity": _rows_negativity,
            "gap": _rows_gap,
        }[cfg.command](cfg)
        lines = _header_lines(cfg)
        lines.append(",".join(SCHEMAS[cfg.command]))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        _write(cfg.out, "\n".join(lines) + "\n")
        return 0
    except PPKitaevError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    cfg = parse_and_validate(sys.argv[1:] if argv is None else argv)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
