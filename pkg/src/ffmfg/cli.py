"""Command-line entry point.

Examples::

    ffmfg --command simulate --config run.cfg --out results/
    ffmfg --command levelsets --levels 1,2,4,8 --out figure1/
    ffmfg --command eigen --state 3 4
    ffmfg --command convergence-study --config linear.cfg --ladder 64,128,256 --out study/

Exit status: 0 success, 2 configuration error, 3 runtime failure (for
example loss of density positivity), 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ConfigError, parse_config
from .core import PositivityError, SimConfig
from .diagnostics import DiagnosticsRecord
from .exact import LinearCaseData
from .models import ModelKind, eigen_qq, gnl_indicators, singular_residual
from .parabolic import check_centered, recenter, simulate
from .riemann import level_curve, riemann_invariants
from .studies import convergence_study

logger = logging.getLogger("ffmfg")

COMMANDS = ("simulate", "levelsets", "eigen", "convergence-study")
EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_IO = 0, 2, 3, 4

FIELD_COLUMNS = ["t", "x", "v", "m", "w1", "w2"]
DIAGNOSTIC_COLUMNS = ["t", "mass", "mean_v", "l1_v", "l1_m", "min_m", "max_w1", "max_w2"]
LEVELSET_COLUMNS = ["which", "c", "v", "m"]
ERROR_COLUMNS = ["n_cells", "l1_error", "linf_error", "observed_order"]

DEFAULT_STUDY_CONFIG = """\
model = linear
g = identity
u0 = sin(2*pi*x) / (2*pi)
m0 = 1 + 0.5*sin(2*pi*x)
t_end = 0.25
"""


class RuntimeFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class RunManifest:
    command: str
    config_path: Path | None = None
    out_dir: Path = Path("out")
    force: bool = False


def fmt(value) -> str:
    """Shortest text that parses back to the same number."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return repr(float(value))


def prepare_outputs(manifest: RunManifest, names) -> list[Path]:
    out = manifest.out_dir
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / name for name in names]
    existing = [p for p in paths if p.exists()]
    if existing and not manifest.force:
        raise FileExistsError(f"refusing to overwrite {existing[0]} (use --force)")
    return paths


def write_csv(path: Path, columns, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(x) for x in row])


def write_manifest(path: Path, manifest: RunManifest, extra: dict) -> None:
    body = {"command": manifest.command,
            "config": str(manifest.config_path) if manifest.config_path else None, **extra}
    path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")


def load_config(manifest: RunManifest, default: str | None = None) -> tuple[SimConfig, str]:
    if manifest.config_path is None:
        if default is None:
            raise ConfigError(f"--config is required for {manifest.command}")
        return parse_config(default), default
    text = Path(manifest.config_path).read_text()
    return parse_config(text), text


def field_rows(trajectory, model):
    density = model.kind is not ModelKind.PSYSTEM
    for snap in trajectory.snapshots:
        if density and snap.density_positive:
            w1, w2 = riemann_invariants(snap.v, snap.m)
        else:
            w1 = w2 = np.full(snap.grid.n_cells, math.nan)
        for row in zip(snap.grid.centers, snap.v, snap.m, w1, w2):
            yield (snap.time, *row)


def diagnostic_rows(records: list[DiagnosticsRecord]):
    for r in records:
        yield (r.time, r.mass, r.mean_v, r.l1_v, r.l1_m, r.min_m, r.max_w1, r.max_w2)


def cmd_simulate(manifest: RunManifest, figures: bool = True) -> int:
    config, text = load_config(manifest)
    model = config.model
    if config.viscous and model.kind is ModelKind.QUADRATIC_QUADRATIC:
        state = config.initial_state()
        if config.recenter:
            state = recenter(state)
        try:
            check_centered(state)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    names = ["fields.csv", "diagnostics.csv", "manifest.json"]
    if figures:
        names += ["fields.png", "diagnostics.png"]
    paths = dict(zip(names, prepare_outputs(manifest, names)))
    try:
        trajectory = simulate(config)
    except PositivityError as exc:
        raise RuntimeFailure(str(exc)) from exc
    write_csv(paths["fields.csv"], FIELD_COLUMNS, field_rows(trajectory, model))
    write_csv(paths["diagnostics.csv"], DIAGNOSTIC_COLUMNS, diagnostic_rows(trajectory.diagnostics))
    write_manifest(paths["manifest.json"], manifest, {
        "config_text": text, "seed": config.seed, "model": model.kind.value,
        "solver": "viscous" if config.viscous else "hyperbolic",
        "n_snapshots": len(trajectory.snapshots),
    })
    if figures:
        from .plotting import plot_diagnostics, plot_fields
        snaps = trajectory.snapshots
        pick = sorted(set(np.linspace(0, len(snaps) - 1, min(len(snaps), 6)).astype(int)))
        label = "w" if model.kind is ModelKind.PSYSTEM else "m"
        plot_fields([snaps[i] for i in pick], paths["fields.png"], second_label=label)
        plot_diagnostics(trajectory.diagnostics, paths["diagnostics.png"])
    final = trajectory.diagnostics[-1]
    print(f"t = {fmt(final.time)}  l1_v = {fmt(final.l1_v)}  l1_m = {fmt(final.l1_m)}  "
          f"min_m = {fmt(final.min_m)}")
    return EXIT_OK


def levelset_rows(levels, m_values):
    rows, gaps = [], []
    for which in (1, 2):
        for c in levels:
            points, missing = level_curve(which, c, m_values)
            rows.extend((which, c, v, m) for v, m in points)
            gaps.extend((which, c, m) for m in missing)
    return rows, gaps


def cmd_levelsets(manifest: RunManifest, levels, m_max=None, m_points=200, figures=True) -> int:
    if not levels or any(not c > 0 for c in levels):
        raise ConfigError("levels must be positive numbers")
    if m_max is None:
        m_max = 1.5 * max(levels) ** (1.0 / 3.0)
    if not m_max > 0 or m_points < 1:
        raise ConfigError("--m-max must be positive and --m-points at least 1")
    m_values = np.linspace(m_max / m_points, m_max, m_points)
    names = ["levelsets.csv", "manifest.json"] + (["levelsets.png"] if figures else [])
    paths = dict(zip(names, prepare_outputs(manifest, names)))
    rows, gaps = levelset_rows(levels, m_values)
    write_csv(paths["levelsets.csv"], LEVELSET_COLUMNS, rows)
    write_manifest(paths["manifest.json"], manifest, {
        "levels": [float(c) for c in levels], "m_max": float(m_max), "m_points": int(m_points),
        "gaps": [[w, float(c), float(m)] for w, c, m in gaps],
    })
    if figures:
        from .plotting import plot_levelsets
        plot_levelsets(rows, paths["levelsets.png"])
    print(f"{len(rows)} level-curve points, {len(gaps)} (which, c, m) gaps")
    return EXIT_OK


def eigen_report(v: float, m: float) -> str:
    e = eigen_qq(v, m)
    g1, g2 = gnl_indicators(v, m)
    w1, w2 = riemann_invariants(v, m)

    def pair(a, b):
        return f"({fmt(a)}, {fmt(b)})"

    return "\n".join([
        f"state = {pair(v, m)}",
        f"lambda = {pair(e.lambda1, e.lambda2)}",
        f"r1 = {pair(*e.r1)}",
        f"r2 = {pair(*e.r2)}",
        f"gnl = {pair(g1, g2)}",
        f"singular_residual = {fmt(singular_residual(v, m))}",
        f"w = {pair(w1, w2)}",
    ])


def cmd_eigen(v: float, m: float) -> int:
    if not m > 0:
        raise ConfigError(f"density must be positive, got m = {m!r}")
    print(eigen_report(v, m))
    return EXIT_OK


def cmd_convergence(manifest: RunManifest, ladder, figures=True) -> int:
    config, text = load_config(manifest, DEFAULT_STUDY_CONFIG)
    if config.model.kind is not ModelKind.LINEAR_EXACT:
        raise ConfigError("convergence-study needs model = linear (the case with a closed-form solution)")
    if len(ladder) < 2 or any(n < 2 for n in ladder):
        raise ConfigError("--ladder needs at least two grid sizes >= 2")
    data = LinearCaseData(config.u0, config.m0, config.model.coupling, config.grid.length)
    names = ["errors.csv", "manifest.json"] + (["errors.png"] if figures else [])
    paths = dict(zip(names, prepare_outputs(manifest, names)))
    try:
        rows = convergence_study(data, ladder, config.t_end, config.cfl)
    except PositivityError as exc:
        raise RuntimeFailure(str(exc)) from exc
    write_csv(paths["errors.csv"], ERROR_COLUMNS,
              ((r["n_cells"], r["l1_error"], r["linf_error"], r["observed_order"]) for r in rows))
    write_manifest(paths["manifest.json"], manifest, {
        "config_text": text, "seed": config.seed, "ladder": [int(n) for n in ladder],
        "t_end": config.t_end,
    })
    if figures:
        from .plotting import plot_errors
        plot_errors(rows, paths["errors.png"])
    for r in rows:
        print(f"N = {r['n_cells']:5d}  L1 = {r['l1_error']:.3e}  order = {r['observed_order']:.3f}")
    return EXIT_OK


def _numbers(text: str, kind=float):
    try:
        return [kind(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ffmfg", description=__doc__.split("\n\n")[0])
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--config", type=Path, help="key = value configuration file")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    p.add_argument("--force", action="store_true", help="overwrite existing output files")
    p.add_argument("--state", nargs=2, type=float, metavar=("V", "M"), default=(0.0, 1.0),
                   help="state for the eigen command")
    p.add_argument("--levels", type=_numbers, default=[1.0, 2.0, 4.0, 8.0],
                   help="comma-separated invariant levels for levelsets")
    p.add_argument("--m-max", type=float, default=None)
    p.add_argument("--m-points", type=int, default=200)
    p.add_argument("--ladder", type=lambda s: _numbers(s, int), default=[64, 128, 256],
                   help="comma-separated grid sizes for convergence-study")
    p.add_argument("--no-figures", action="store_true", help="skip the PNG figures")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def run(manifest: RunManifest, args: argparse.Namespace | None = None) -> int:
    args = args or build_parser().parse_args(["--command", manifest.command])
    figures = not args.no_figures
    try:
        if manifest.command == "simulate":
            return cmd_simulate(manifest, figures)
        if manifest.command == "levelsets":
            return cmd_levelsets(manifest, args.levels, args.m_max, args.m_points, figures)
        if manifest.command == "eigen":
            return cmd_eigen(*args.state)
        if manifest.command == "convergence-study":
            return cmd_convergence(manifest, args.ladder, figures)
        raise ConfigError(f"unknown command {manifest.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RuntimeFailure, FloatingPointError) as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    manifest = RunManifest(args.command, args.config, args.out, args.force)
    return run(manifest, args)


if __name__ == "__main__":
    sys.exit(main())
