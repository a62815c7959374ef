"""Experiment drivers and the ``boussinesq-dei`` command line.

Exit statuses: 0 completed, 2 blow-up detected, 64 invalid configuration.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import kernels
from .config import ExperimentConfig, parse_config
from .diagnostics import (
    ERROR_CSV_HEADER,
    BlowupObserver,
    BlowupPolicy,
    error_pair,
    fit_order,
    mass,
)
from .errors import BoussinesqError, ConfigError
from .solutions import PRESET_IDS
from .stepper import Observer, WaveState, build_tables, evolve

log = logging.getLogger("boussinesq_dei")

EXIT_OK = 0
EXIT_BLOWUP = 2
EXIT_CONFIG = 64


def _g(x):
    return f"{x:.17g}"


class SeriesWriter(Observer):
    """Appends mass, peak |z| and (optionally) error rows every ``stride`` steps."""

    def __init__(self, out_dir, stride, exact=None, m_orders=()):
        self.stride = stride
        self.exact = exact
        self.m_orders = m_orders
        self.mass = open(out_dir / "mass.csv", "w")
        self.mass.write("t,mass\n")
        self.amp = open(out_dir / "amplitude.csv", "w")
        self.amp.write("t,value\n")
        self.err = None
        if exact is not None:
            self.err = open(out_dir / "errors.csv", "w")
            self.err.write(ERROR_CSV_HEADER + "\n")
        self.last_step = None

    def __call__(self, step_index, state):
        if step_index == self.last_step:
            return False
        self.last_step = step_index
        z, _ = state.nodal()
        self.mass.write(f"{_g(state.t)},{_g(mass(state))}\n")
        self.amp.write(f"{_g(state.t)},{_g(float(np.abs(z).max()))}\n")
        if self.err is not None:
            for m in self.m_orders:
                self.err.write(error_pair(state, self.exact, m).csv_row() + "\n")
        return False

    def close(self):
        for fh in (self.mass, self.amp, self.err):
            if fh is not None:
                fh.close()


class SnapshotWriter(Observer):
    """One ``x,z,dz`` file per snapshot under ``out_dir/snapshots``."""

    def __init__(self, out_dir, stride):
        self.stride = stride
        self.dir = out_dir / "snapshots"
        self.dir.mkdir(parents=True, exist_ok=True)
        self.written = []

    def __call__(self, step_index, state):
        path = self.dir / f"snap_{step_index:08d}.csv"
        if path in self.written:
            return False
        z, dz = state.nodal()
        x = state.grid.nodes
        with open(path, "w") as fh:
            fh.write(f"# t = {_g(state.t)}\nx,z,dz\n")
            for row in zip(x, z, dz):
                fh.write(",".join(map(_g, row)) + "\n")
        self.written.append(path)
        return False


@dataclass
class RunResult:
    status: str
    final_state: WaveState
    blowup: object = None
    out_dir: Path = None

    @property
    def exit_code(self):
        return EXIT_BLOWUP if self.status == "blew-up" else EXIT_OK

    def status_line(self):
        if self.blowup is not None:
            return f"status: blew-up t={_g(self.blowup.t)}"
        return f"status: completed t={_g(self.final_state.t)}"


def simulate(config, observers=()):
    """Run ``config`` in memory; returns ``(final_state, blowup_record_or_None)``."""
    grid = config.grid()
    state = WaveState.from_initial(config.initial_data(grid))
    blowup = BlowupObserver(BlowupPolicy(config.blowup_threshold))
    tables = build_tables(grid, config.tau)
    final = evolve(
        state, config.tau, config.n_steps, config.nonlinearity_fn(),
        [blowup, *observers], tables=tables,
    )
    record = blowup.record
    if final.diverged and record is None:
        # non-finite values appeared between blow-up checks
        from .diagnostics import detect_blowup

        record = detect_blowup(final)
    return final, record


def run(config, out_dir=None):
    """Run one experiment, writing snapshots and series under ``out_dir``."""
    out = Path(out_dir or config.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.txt").write_text(config.to_text())
    except OSError as exc:
        raise BoussinesqError(f"cannot write output directory {out}: {exc}") from exc
    exact = config.exact_solution()
    series = SeriesWriter(out, config.series_stride, exact, config.m_orders)
    snaps = SnapshotWriter(out, config.snapshot_stride)
    try:
        final, record = simulate(config, [series, snaps])
        if not final.diverged:
            # always record the last state reached
            series(final.step, final)
            snaps(final.step, final)
    finally:
        series.close()
    result = RunResult("blew-up" if record else "completed", final, record, out)
    (out / "status.txt").write_text(result.status_line() + "\n")
    return result


# -- convergence sweeps -------------------------------------------------------

@dataclass
class OrderTable:
    mode: str
    m_orders: tuple
    rows: list  # (level, step, {m: error or None})
    fits: dict  # m -> slope (nan if unavailable)

    def to_csv(self):
        cols = ",".join(f"e_{m:g}" for m in self.m_orders)
        lines = [f"level,step,{cols},fitted_order"]
        for level, step_size, errors in self.rows:
            vals = ",".join("diverged" if errors is None else _g(errors[m]) for m in self.m_orders)
            lines.append(f"{level},{_g(step_size)},{vals},")
        fit_vals = ",".join(_g(self.fits[m]) for m in self.m_orders)
        lines.append(f"fit,,{fit_vals},{_g(self.fits[self.m_orders[0]])}")
        return "\n".join(lines) + "\n"


def _sweep_point(args):
    config, m_orders = args
    exact = config.exact_solution()
    final, record = simulate(config)
    if record is not None or final.diverged:
        return None
    return {m: error_pair(final, exact, m).total for m in m_orders}


def converge(config, mode, levels, m_orders=None, jobs=1):
    """Errors at ``T`` for each level plus least-squares orders.

    ``mode='time'`` varies ``tau`` over ``levels`` with the grid fixed;
    ``mode='space'`` varies ``M`` with ``tau`` fixed (the reported step is ``h``).
    """
    if mode not in ("time", "space"):
        raise ConfigError("mode must be 'time' or 'space'", "mode")
    if len(levels) < 3:
        raise ConfigError("need at least three levels", "levels")
    if config.exact_solution() is None:
        raise ConfigError("convergence sweeps need a single-soliton config with an exact solution", "family")
    m_orders = tuple(m_orders or config.m_orders)
    if mode == "time":
        configs = [replace(config, tau=float(t)) for t in levels]
        steps = [c.tau for c in configs]
    else:
        configs = [replace(config, M=int(M)) for M in levels]
        steps = [c.h for c in configs]
    payload = [(c, m_orders) for c in configs]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_sweep_point, payload))
    else:
        results = [_sweep_point(p) for p in payload]
    rows = [(i, s, r) for i, (s, r) in enumerate(zip(steps, results))]
    fits = {}
    for m in m_orders:
        samples = [(s, r[m]) for s, r in zip(steps, results) if r is not None and r[m] > 0]
        fits[m] = fit_order(samples).slope if len(samples) >= 3 else math.nan
    return OrderTable(mode, m_orders, rows, fits)


# -- command line ------------------------------------------------------------

def _load_config(args):
    if args.preset:
        mapping = {"preset": args.preset}
        text_cfg = None
    else:
        if not args.config:
            raise ConfigError("give a config file or --preset")
        text_cfg = parse_config(Path(args.config).read_text(encoding="utf-8"))
        mapping = None
    overrides = dict(kv.split("=", 1) for kv in args.set or [])
    overrides = {k.strip(): v.strip() for k, v in overrides.items()}
    if mapping is not None:
        mapping.update(overrides)
        return ExperimentConfig.from_mapping(mapping)
    if overrides:
        text = text_cfg.to_text() + "".join(f"{k} = {v}\n" for k, v in overrides.items())
        lines = {}
        for line in text.splitlines():
            k, v = line.split("=", 1)
            lines[k.strip()] = v.strip()
        return ExperimentConfig.from_mapping(lines)
    return text_cfg


def _parse_levels(text):
    from .config import parse_number

    return [parse_number(p, "levels") for p in text.replace(",", " ").split()]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="boussinesq-dei",
        description="Exponential-integrator pseudospectral solver for the Good Boussinesq equation",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_args(p):
        p.add_argument("config", nargs="?", help="key = value config file")
        p.add_argument("--preset", help="preset id instead of a config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")

    p_run = sub.add_parser("run", help="run one experiment")
    add_config_args(p_run)
    p_run.add_argument("--out-dir", help="output directory (overrides out_dir)")

    p_conv = sub.add_parser("converge", help="temporal or spatial convergence sweep")
    add_config_args(p_conv)
    p_conv.add_argument("--mode", choices=("time", "space"), required=True)
    p_conv.add_argument("--levels", required=True, help="comma-separated tau values (time) or M values (space)")
    p_conv.add_argument("--out", help="write the order table CSV here (default: stdout)")
    p_conv.add_argument("--jobs", type=int, default=1)

    p_show = sub.add_parser("show-config", help="print the fully resolved config")
    add_config_args(p_show)

    sub.add_parser("presets", help="list preset ids")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.command == "presets":
        print("\n".join(PRESET_IDS))
        return EXIT_OK
    try:
        config = _load_config(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    log.info("kernel backend: %s", kernels.BACKEND)

    if args.command == "show-config":
        sys.stdout.write(config.to_text())
        return EXIT_OK
    if args.command == "run":
        try:
            result = run(config, args.out_dir)
        except BoussinesqError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(result.status_line())
        return result.exit_code
    try:
        table = converge(config, args.mode, _parse_levels(args.levels), jobs=args.jobs)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    csv = table.to_csv()
    if args.out:
        Path(args.out).write_text(csv)
    else:
        sys.stdout.write(csv)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
