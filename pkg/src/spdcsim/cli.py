"""Command-line driver: config-driven simulation and analysis runs.

Usage: ``spdc <subcommand> --config <path> [--out <dir>] [--threads N]``.
Subcommands: simulate (analytic joint amplitude), oracle (direct
superposition vs analytic comparison), schmidt, epr, phasematch. Outputs
are deterministic: identical config and build give byte-identical files;
each run also writes a manifest with input and output checksums.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, backend
from .analysis import (schmidt_decompose, sum_coordinate_marginal,
                       sum_difference_statistics)
from .biphoton import direct_wavefunction, joint_amplitude_analytic
from .config import (RunConfig, build_axes, build_crystal, build_pump,
                     build_quadrature, build_windows, parse_config)
from .core import relative_l2_error, write_field_dump
from .errors import SpdcError
from .phasematch import collinear_condition, cone_transverse_momenta, \
    phase_matching_factor

SUBCOMMANDS = ("simulate", "oracle", "schmidt", "epr", "phasematch")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_text(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8", newline="\n")


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    lines.extend(",".join(str(c) for c in row) for row in rows)
    _write_text(path, "\n".join(lines) + "\n")


def _axis_marginals(amp):
    """Rows (axis, index, value, density) for every 1D marginal plus the
    sum coordinate of 2D modes."""
    field = amp.field
    p = np.abs(field.data) ** 2 * field.cell_measure
    rows = []
    for i, ax in enumerate(field.axes):
        other = tuple(j for j in range(len(field.axes)) if j != i)
        dens = p.sum(axis=other) / ax.step
        for idx, (v, d) in enumerate(zip(ax.values, dens)):
            rows.append((ax.label, idx, _fmt(v), _fmt(d)))
    if len(field.axes) == 2:
        s, dens = sum_coordinate_marginal(amp)
        label = f"{field.axes[0].label}+{field.axes[1].label}"
        for idx, (v, d) in enumerate(zip(s, dens)):
            rows.append((label, idx, _fmt(v), _fmt(d)))
    return rows


def _analytic(cfg: RunConfig):
    return joint_amplitude_analytic(
        build_pump(cfg), build_crystal(cfg), build_axes(cfg),
        include_pm_factor=cfg.crystal.pm_factor)


def _cmd_simulate(cfg, outdir, threads):
    amp = _analytic(cfg)
    written = []
    if "dump" in cfg.output.formats:
        write_field_dump(amp.field, outdir / "jsa.dump")
        written.append("jsa.dump")
    if "csv" in cfg.output.formats:
        _write_csv(outdir / "marginals.csv", "axis,index,value,density",
                   _axis_marginals(amp))
        written.append("marginals.csv")
    return written


def _cmd_oracle(cfg, outdir, threads):
    amp_a = _analytic(cfg)
    amp_d = direct_wavefunction(
        build_pump(cfg), build_crystal(cfg), build_windows(cfg),
        build_axes(cfg), quadrature=build_quadrature(cfg), threads=threads)
    err_aligned = relative_l2_error(amp_a.field, amp_d.field, align_phase=True)
    err_raw = relative_l2_error(amp_a.field, amp_d.field, align_phase=False)
    rows = [("mode", amp_a.mode),
            ("rel_l2_phase_aligned", _fmt(err_aligned)),
            ("rel_l2_raw", _fmt(err_raw)),
            ("grid_points", amp_a.field.data.size),
            ("window_T", _fmt(amp_d.window_T)),
            ("window_W", _fmt(amp_d.window_W)),
            ("crystal_L", _fmt(amp_d.crystal_L))]
    _write_csv(outdir / "comparison.csv", "key,value", rows)
    written = ["comparison.csv"]
    if "dump" in cfg.output.formats:
        write_field_dump(amp_a.field, outdir / "analytic.dump")
        write_field_dump(amp_d.field, outdir / "direct.dump")
        written += ["analytic.dump", "direct.dump"]
    return written


def _cmd_schmidt(cfg, outdir, threads):
    spectrum = schmidt_decompose(_analytic(cfg))
    rows = [(f"lambda_{i:04d}", _fmt(w)) for i, w in enumerate(spectrum.weights)]
    rows += [("schmidt_number", _fmt(spectrum.schmidt_number)),
             ("entropy_bits", _fmt(spectrum.entropy_bits))]
    _write_csv(outdir / "schmidt.csv", "key,value", rows)
    return ["schmidt.csv"]


def _cmd_epr(cfg, outdir, threads):
    report = sum_difference_statistics(
        _analytic(cfg), epr_threshold=cfg.analysis.epr_threshold)
    _write_csv(outdir / "correlation.csv", "key,value", report.rows())
    return ["correlation.csv"]


def _cmd_phasematch(cfg, outdir, threads):
    crystal = build_crystal(cfg)
    L = crystal.L
    span = 8.0 * math.pi / L
    dkz = np.linspace(-span, span, cfg.analysis.pm_sweep_points)
    factor = phase_matching_factor(dkz, L)
    _write_csv(outdir / "phasematch.csv", "dkz,factor",
               [(_fmt(x), _fmt(f)) for x, f in zip(dkz, factor)])
    w_half = cfg.pump.omega0 / 2.0
    cone = cone_transverse_momenta(w_half, w_half, crystal)
    check = collinear_condition(w_half, w_half, crystal,
                                tol=cfg.analysis.collinear_tol)
    rows = [("omega_1", _fmt(w_half)), ("omega_2", _fmt(w_half)),
            ("alpha", _fmt(cone.alpha)),
            ("degenerate_q", "none" if cone.degenerate_q is None
             else _fmt(cone.degenerate_q)),
            ("collinear_residual", _fmt(check.residual)),
            ("collinear_matched", str(check.matched)),
            ("collinear_tol", _fmt(cfg.analysis.collinear_tol))]
    _write_csv(outdir / "cone.csv", "key,value", rows)
    return ["phasematch.csv", "cone.csv"]


_HANDLERS = {"simulate": _cmd_simulate, "oracle": _cmd_oracle,
             "schmidt": _cmd_schmidt, "epr": _cmd_epr,
             "phasematch": _cmd_phasematch}


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(outdir: Path, config_text: str, written: list[str]) -> None:
    lines = [f"package = spdcsim {__version__}",
             f"backend = {backend.backend_name()}",
             f"config-sha256 = {hashlib.sha256(config_text.encode()).hexdigest()}"]
    for name in sorted(written):
        path = outdir / name
        lines.append(f"file = {name} sha256={_sha256(path)} bytes={path.stat().st_size}")
    _write_text(outdir / "manifest.txt", "\n".join(lines) + "\n")


def run(subcommand: str, cfg: RunConfig, outdir, threads: int = 1,
        config_text: str = "") -> list[str]:
    """Execute one subcommand; returns the names of the files written
    (manifest included)."""
    if subcommand not in _HANDLERS:
        raise SpdcError(f"unknown subcommand {subcommand!r}")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = _HANDLERS[subcommand](cfg, outdir, threads)
    _write_manifest(outdir, config_text, written)
    return written + ["manifest.txt"]


def _resolve_threads(arg_value) -> int:
    if arg_value is not None:
        return max(1, arg_value)
    env = os.environ.get("SPDC_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SpdcError(f"SPDC_THREADS={env!r} is not an integer") from None
    return 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spdc",
        description="Two-photon downconversion amplitudes and diagnostics.")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="path to the run config")
    parser.add_argument("--out", default=None,
                        help="output directory (default: [output] directory)")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for the direct path "
                             "(default: SPDC_THREADS or 1)")
    args = parser.parse_args(argv)
    try:
        config_text = Path(args.config).read_text(encoding="utf-8")
        cfg = parse_config(config_text)
        outdir = args.out if args.out is not None else cfg.output.directory
        run(args.subcommand, cfg, outdir, threads=_resolve_threads(args.threads),
            config_text=config_text)
    except SpdcError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"io-error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
