"""Correlation dynamics of two-qubit mixed states under an XX Ising coupling.

Exit codes: 0 success, 1 validation failure, 2 invalid or unphysical
parameters, 3 numerical failure (discord optimizer).
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, fields, replace
from typing import List, Optional, Sequence

from . import correlations as corr
from .dynamics import PAPER, PHYSICAL, HamiltonianSpec, evolve
from .errors import MemsdynError, OptimizerFailure
from .states import FAMILIES, MEMS, RHO_M, StateSpec, s_max
from .sweeps import (
    DEFAULT_SAMPLES,
    SweepRow,
    SweepSpec,
    evaluate_row,
    phi_window_physical,
    phi_window_violation,
    time_grid,
)
from .validation import run_checks

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARAMS = 2
EXIT_NUMERICAL = 3

CSV_HEADER = [
    "family", "gamma", "c", "s", "phi", "theta", "J", "B", "t",
    "concurrence", "discord", "linear_entropy", "purity", "horodecki_m",
    "bell_violated", "min_eig", "physical",
]
PAPER_EXTRA = ["divergence"]

FIGURES = {
    "fig1": {"s": 1 / 8, "phi": [0.54657, 0.65605]},
    "fig2": {"s": 1 / 2, "phi": [0.25, 1.45]},
    "fig3": {"s": 7 / 10, "phi": [0.0, 2 * math.pi]},
}
FIGURE_GAMMAS = (0.0, 0.4, 0.6)


@dataclass
class RunConfig:
    command: str = ""
    family: Optional[str] = None
    gamma: Optional[float] = None
    c: Optional[float] = None
    s: Optional[float] = None
    phi: Optional[List[float]] = None
    theta: float = 0.0
    j: float = 1.0
    b: float = 0.0
    t_max: Optional[float] = None
    samples: int = DEFAULT_SAMPLES
    mode: str = PHYSICAL
    out: Optional[str] = None
    format: str = "csv"
    resolution: float = 1e-3
    as_printed: bool = False
    figure: Optional[str] = None
    force_discord: bool = False
    # config-file only; multiplies J inside H
    j_scale: float = 1.0

    def state(self) -> StateSpec:
        if self.family is None:
            raise MemsdynError("--family is required")
        fam = self.family
        phi = None
        if fam == RHO_M:
            if not self.phi or len(self.phi) != 1:
                raise MemsdynError("rho-m needs exactly one --phi value")
            phi = self.phi[0]
        return StateSpec(
            fam,
            gamma=self.gamma if fam in (MEMS, "werner") else None,
            c=self.c if fam in ("rho-n", RHO_M) else None,
            s=self.s if fam == RHO_M else None,
            phi=phi,
            theta=self.theta,
            as_printed=self.as_printed,
        )

    def ham(self) -> HamiltonianSpec:
        return HamiltonianSpec(self.j, self.b, self.j_scale)


_CONFIG_ALIASES = {"J": "j", "B": "b", "t-max": "t_max", "as-printed": "as_printed"}


def load_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise MemsdynError(f"config {path} must hold a flat JSON object")
    names = {f.name for f in fields(RunConfig)}
    out = {}
    for key, value in raw.items():
        key = _CONFIG_ALIASES.get(key, key)
        if key not in names:
            raise MemsdynError(f"unknown config key {key!r}")
        if key == "phi" and not isinstance(value, list):
            value = [value]
        out[key] = value
    return out


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def csv_record(state: StateSpec, ham: HamiltonianSpec, row: SweepRow, paper: bool) -> list:
    r = row.report
    rec = [
        state.family, state.gamma, state.c, state.s, state.phi, state.theta, ham.j, ham.b, row.t,
        r.concurrence, r.discord,
        row.paper_linear_entropy if paper else r.linear_entropy,
        r.purity, r.horodecki_m, r.bell_violated, r.min_eigenvalue, row.physical,
    ]
    if paper:
        rec.append(row.divergence)
    return [fmt(v) for v in rec]


def run_sweep(cfg: RunConfig, state: StateSpec):
    """Evaluate every grid row; optimizer failures flag the row and the exit code."""
    spec = SweepSpec(state, cfg.ham(), time_grid(cfg.j, cfg.samples, cfg.t_max), cfg.mode, cfg.force_discord)
    rho0 = state.build() if cfg.mode == PHYSICAL else state.matrix()
    rows, failed = [], False
    for t in spec.t_grid:
        try:
            rows.append(evaluate_row(spec, rho0, t))
        except OptimizerFailure as exc:
            print(f"t={t}: {exc}", file=sys.stderr)
            failed = True
            rows.append(_failed_row(spec, rho0, t))
    return spec, rows, failed


def _failed_row(spec, rho0, t):
    if spec.mode == PHYSICAL:
        rep = corr.report(evolve(rho0, spec.ham, t), with_discord=False)
        return SweepRow(t, replace(rep, physical=False), False)
    return evaluate_row(replace(spec, force_discord=False), rho0, t)


def write_csv(fh, cfg: RunConfig, state: StateSpec, rows: Sequence[SweepRow]):
    paper = cfg.mode == PAPER
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER + (PAPER_EXTRA if paper else []))
    for row in rows:
        w.writerow(csv_record(state, cfg.ham(), row, paper))


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _emit(cfg: RunConfig, text: str):
    fh, close = _open_out(cfg.out)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _g(x) -> str:
    return "-" if x is None else f"{x:.6g}"


def _admissible_text(flag) -> str:
    if flag is None:
        return "n/a: C = 0"
    return "admissible: S_L <= s_max" if flag else "NOT admissible: S_L > s_max"


def cmd_info(cfg: RunConfig) -> int:
    state = cfg.state()
    rho = state.build()
    rep = corr.report(rho)
    eig = rho.eigenvalues
    smax = s_max(min(max(rep.concurrence, 0.0), 1.0))
    # the (S_L, C) bound is defined for entangled states only
    admissible = rep.linear_entropy <= smax + 1e-12 if rep.concurrence > 0 else None
    if cfg.format == "json":
        doc = {
            "state": {k: getattr(state, k) for k in ("family", "gamma", "c", "s", "phi", "theta")},
            "tag": rho.tag,
            "report": {
                "concurrence": rep.concurrence,
                "discord": rep.discord,
                "linear_entropy": rep.linear_entropy,
                "purity": rep.purity,
                "horodecki_m": rep.horodecki_m,
                "lambda": rep.lam,
                "bell_violated": rep.bell_violated,
                "min_eigenvalue": rep.min_eigenvalue,
            },
            "eigenvalues": [float(x) for x in eig],
            "s_max": smax,
            "admissible": admissible,
        }
        _emit(cfg, json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    lines = [
        f"family          {state.family}" + (f"  [{rho.tag}]" if rho.tag else ""),
        f"parameters      gamma={_g(state.gamma)} c={_g(state.c)} s={_g(state.s)} "
        f"phi={_g(state.phi)} theta={_g(state.theta)}",
        f"eigenvalues     {' '.join(f'{x:.6g}' for x in eig)}",
        f"concurrence     {rep.concurrence:.6g}",
        f"discord         {rep.discord:.6g} bits",
        f"linear_entropy  {rep.linear_entropy:.6g}",
        f"purity          {rep.purity:.6g}",
        f"horodecki_m     {rep.horodecki_m:.6g}",
        f"lambda          {rep.lam:.6g}",
        f"bell_violated   {'true' if rep.bell_violated else 'false'}",
        f"min_eigenvalue  {rep.min_eigenvalue:.6g}",
        f"s_max(C)        {smax:.6g}  ({_admissible_text(admissible)})",
    ]
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_evolve(cfg: RunConfig) -> int:
    state = cfg.state()
    _, rows, failed = run_sweep(cfg, state)
    if cfg.format == "json":
        doc = [dict(zip(CSV_HEADER + (PAPER_EXTRA if cfg.mode == PAPER else []),
                        csv_record(state, cfg.ham(), r, cfg.mode == PAPER))) for r in rows]
        _emit(cfg, json.dumps(doc, indent=1) + "\n")
    else:
        buf = io.StringIO()
        write_csv(buf, cfg, state, rows)
        _emit(cfg, buf.getvalue())
    return EXIT_NUMERICAL if failed else EXIT_OK


def windows_document(c: float, s: float, resolution: float) -> dict:
    return {
        "c": c,
        "s": s,
        "physical": [[w.lo, w.hi] for w in phi_window_physical(c, s, resolution)],
        "violating": [[w.lo, w.hi] for w in phi_window_violation(c, s, resolution)],
        "resolution": resolution,
    }


def cmd_windows(cfg: RunConfig) -> int:
    if cfg.family not in (None, RHO_M):
        raise MemsdynError("windows is defined for --family rho-m only")
    if cfg.c is None or cfg.s is None:
        raise MemsdynError("windows needs --c and --s")
    _emit(cfg, json.dumps(windows_document(cfg.c, cfg.s, cfg.resolution), indent=2) + "\n")
    return EXIT_OK


def figure_series(figure: str, phis: Optional[List[float]] = None):
    """(label, StateSpec) pairs plotted together in ``figure``."""
    if figure not in FIGURES:
        raise MemsdynError(f"unknown figure {figure!r}; expected one of {sorted(FIGURES)}")
    spec = FIGURES[figure]
    out = [(f"mems_gamma{g:g}", StateSpec(MEMS, gamma=g)) for g in FIGURE_GAMMAS]
    for phi in phis or spec["phi"]:
        out.append((f"rho{figure[-1]}m_phi{phi:.6g}", StateSpec(RHO_M, c=0.5, s=spec["s"], phi=phi)))
    return out


def cmd_reproduce(cfg: RunConfig) -> int:
    out_dir = cfg.out or "figures"
    os.makedirs(out_dir, exist_ok=True)
    figures = [cfg.figure] if cfg.figure and cfg.figure != "all" else sorted(FIGURES)
    status = EXIT_OK
    for fig in figures:
        for label, state in figure_series(fig, cfg.phi):
            for mode in (PHYSICAL, PAPER):
                run = RunConfig(**{**cfg.__dict__, "mode": mode})
                name = f"{fig}_{label}_{mode}.csv"
                try:
                    _, rows, failed = run_sweep(run, state)
                except MemsdynError as exc:
                    # e.g. a quoted phi just outside the physical window
                    print(f"skipped {name}: {exc}")
                    continue
                with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="") as fh:
                    write_csv(fh, run, state, rows)
                print(f"wrote {os.path.join(out_dir, name)}")
                if failed:
                    status = EXIT_NUMERICAL
    return status


def cmd_validate(cfg: RunConfig) -> int:
    fields_b = tuple(sorted({0.0, 0.5, 2.0, float(cfg.b)}))
    results = run_checks(as_printed=cfg.as_printed, fields=fields_b)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_VALIDATION


COMMANDS = {
    "info": cmd_info,
    "evolve": cmd_evolve,
    "windows": cmd_windows,
    "reproduce": cmd_reproduce,
    "validate": cmd_validate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    common.add_argument("--config", default=S, help="JSON file of flat RunConfig keys; flags override it")
    common.add_argument("--family", choices=FAMILIES, default=S)
    common.add_argument("--gamma", type=float, default=S)
    common.add_argument("--c", type=float, default=S)
    common.add_argument("--s", type=float, default=S)
    common.add_argument("--phi", type=float, action="append", default=S,
                        help="repeat for several values (reproduce)")
    common.add_argument("--theta", type=float, default=S)
    common.add_argument("--J", dest="j", type=float, default=S)
    common.add_argument("--B", dest="b", type=float, default=S)
    common.add_argument("--t-max", dest="t_max", type=float, default=S)
    common.add_argument("--samples", type=int, default=S)
    common.add_argument("--mode", choices=(PHYSICAL, PAPER), default=S)
    common.add_argument("--resolution", type=float, default=S)
    common.add_argument("--out", default=S)
    common.add_argument("--format", choices=("csv", "json"), default=S)
    common.add_argument("--as-printed", dest="as_printed", action="store_true", default=S,
                        help="use the uncorrected low-gamma MEMS branch")
    common.add_argument("--force-discord", dest="force_discord", action="store_true", default=S,
                        help="paper mode: run the discord optimizer on printed matrices")

    p = argparse.ArgumentParser(prog="memsdyn", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="report all correlation measures of one state")
    sub.add_parser("evolve", parents=[common], help="time sweep as CSV")
    sub.add_parser("windows", parents=[common], help="phi windows of rho-m as JSON")
    rp = sub.add_parser("reproduce", parents=[common], help="figure data series as CSV files")
    rp.add_argument("figure", nargs="?", default="all", choices=sorted(FIGURES) + ["all"])
    sub.add_parser("validate", parents=[common], help="run the cross-module property checks")
    return p


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    values = {}
    if "config" in ns:
        values.update(load_config(ns.pop("config")))
    values.update(ns)
    return RunConfig(**values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
        return COMMANDS[cfg.command](cfg)
    except OptimizerFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (MemsdynError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
