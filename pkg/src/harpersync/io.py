"""Output writers with byte-deterministic formatting.

Every file is written with LF line endings and UTF-8, no locale influence.
CSV numeric cells carry 17 significant digits ('%.17g'), enough to
round-trip any double exactly; JSON floats use Python's shortest exact
repr.  Two runs with identical inputs produce byte-identical files.

Schemas
-------
trajectory.csv   header n,x_a,p_a,x_b,p_b; one row per recorded step
curve.csv        header eps,e_int
grid_*.csv       first line m=<cells per axis>, then m rows of m fractions
verdict.json     m, rho_c, max_delta_rho, synchronized
<obs>.csv        sweep surface per observable: header n,eps=<v>,...; one
                 row per kick (delta_e.csv, e_int_norm.csv, s_a.csv)
sweep_meta.json  sweep axes and reproducibility metadata
observables.csv  per-kick series of one evolution
mi_map.csv       first line n=<sites>, then rows indexed by j_B with one
                 column per j_A (abscissa j_A, ordinate j_B)
mi_map.json      axes metadata, map maximum and its site pair
config.txt       resolved key=value reproducibility record
"""

import json
import os

import numpy as np

from .config import RunConfig, config_items
from .measure_sync import DensityGrid, SyncVerdict
from .sweep import ClassicalSweepResult, SweepSurface

__all__ = [
    "fmt",
    "write_text",
    "write_json",
    "write_config_echo",
    "write_outputs",
]

_SURFACE_FILES = {"dE": "delta_e", "eint": "e_int_norm", "SA": "s_a"}


def fmt(x) -> str:
    """17-significant-digit text for a float; exact round-trip."""
    return format(float(x), ".17g")


def _label(x) -> str:
    """Short axis label for a coupling value (grid values are round)."""
    return format(float(x), "g")


def write_text(path: str, text: str) -> str:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def write_json(path: str, obj) -> str:
    return write_text(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, tuple):
        return list(x)
    return x


def write_config_echo(cfg: RunConfig, outdir: str) -> str:
    lines = [f"{key}={text}" for key, text in config_items(cfg)]
    return write_text(os.path.join(outdir, "config.txt"), "\n".join(lines) + "\n")


def _write_table_csv(path, header_cells, rows):
    lines = [",".join(header_cells)]
    lines.extend(",".join(row) for row in rows)
    return write_text(path, "\n".join(lines) + "\n")


def _write_trajectory(traj, cfg, outdir):
    start = cfg.n_transient + 1
    if cfg.format == "json":
        obj = {"columns": ["n", "x_a", "p_a", "x_b", "p_b"],
               "start_step": start, "states": np.asarray(traj).tolist()}
        return [write_json(os.path.join(outdir, "trajectory.json"), obj)]
    rows = ([str(start + i)] + [fmt(v) for v in row] for i, row in enumerate(np.asarray(traj)))
    return [_write_table_csv(os.path.join(outdir, "trajectory.csv"),
                             ["n", "x_a", "p_a", "x_b", "p_b"], rows)]


def _write_curve(curve, cfg, outdir):
    curve = np.asarray(curve)
    if cfg.format == "json":
        obj = {"columns": ["eps", "e_int"], "points": curve.tolist()}
        return [write_json(os.path.join(outdir, "curve.json"), obj)]
    rows = ([fmt(eps), fmt(e)] for eps, e in curve)
    return [_write_table_csv(os.path.join(outdir, "curve.csv"), ["eps", "e_int"], rows)]


def _write_grid(grid: DensityGrid, name, cfg, outdir):
    if cfg.format == "json":
        obj = {"m": grid.m, "cells": grid.cells.tolist()}
        return [write_json(os.path.join(outdir, f"{name}.json"), obj)]
    lines = [f"m={grid.m}"]
    lines.extend(",".join(fmt(v) for v in row) for row in grid.cells)
    return [write_text(os.path.join(outdir, f"{name}.csv"), "\n".join(lines) + "\n")]


def _write_verdict(verdict: SyncVerdict, cfg, outdir):
    obj = {"m": cfg.grid_m, "rho_c": verdict.threshold,
           "max_delta_rho": verdict.max_delta_rho,
           "synchronized": bool(verdict.synchronized)}
    return [write_json(os.path.join(outdir, "verdict.json"), obj)]


def _write_surface(surface: SweepSurface, cfg, outdir):
    paths = []
    eps_labels = [_label(e) for e in surface.eps_axis]
    for name in surface.values:
        stem = _SURFACE_FILES[name]
        vals = surface.values[name]
        if cfg.format == "json":
            obj = {"observable": name, "kick_axis": surface.kick_axis.tolist(),
                   "eps_axis": surface.eps_axis.tolist(), "values": vals.tolist()}
            paths.append(write_json(os.path.join(outdir, f"{stem}.json"), obj))
        else:
            header = ["n"] + [f"eps={lab}" for lab in eps_labels]
            rows = ([str(int(k))] + [fmt(v) for v in vals[i]]
                    for i, k in enumerate(surface.kick_axis))
            paths.append(_write_table_csv(os.path.join(outdir, f"{stem}.csv"), header, rows))
    meta = {k: _jsonable(v) for k, v in surface.meta.items()}
    paths.append(write_json(os.path.join(outdir, "sweep_meta.json"), meta))
    return paths


def _write_series(series: dict, cfg, outdir):
    names = sorted(series)
    length = len(series[names[0]])
    if cfg.format == "json":
        obj = {"columns": ["n"] + names,
               "values": {k: np.asarray(v).tolist() for k, v in series.items()}}
        return [write_json(os.path.join(outdir, "observables.json"), obj)]
    rows = ([str(i)] + [fmt(series[name][i]) for name in names] for i in range(length))
    return [_write_table_csv(os.path.join(outdir, "observables.csv"), ["n"] + names, rows)]


def _write_mi_map(mi, meta, cfg, outdir):
    mi = np.asarray(mi)
    paths = []
    if cfg.format == "json":
        obj = dict(meta)
        obj["grid"] = mi.T.tolist()  # rows j_B, columns j_A
        obj["grid_layout"] = {"rows": "j_B", "columns": "j_A"}
        return [write_json(os.path.join(outdir, "mi_map.json"), obj)]
    lines = [f"n={mi.shape[0]}"]
    # abscissa j_A as columns, ordinate j_B as rows
    lines.extend(",".join(fmt(v) for v in row) for row in mi.T)
    paths.append(write_text(os.path.join(outdir, "mi_map.csv"), "\n".join(lines) + "\n"))
    obj = dict(meta)
    obj["grid_layout"] = {"rows": "j_B", "columns": "j_A"}
    paths.append(write_json(os.path.join(outdir, "mi_map.json"), obj))
    return paths


def _write_classical_sweep(result: ClassicalSweepResult, kink_eps, cfg, outdir):
    paths = _write_curve(result.curve, cfg, outdir)
    verdicts = {
        _label(eps): {"max_delta_rho": v.max_delta_rho, "rho_c": v.threshold,
                      "synchronized": bool(v.synchronized)}
        for eps, v in result.verdicts.items()}
    summary = {"kink_eps": kink_eps, "kink_factor": cfg.kink_factor,
               "verdicts": verdicts}
    summary.update({k: _jsonable(v) for k, v in result.meta.items()})
    paths.append(write_json(os.path.join(outdir, "summary.json"), summary))
    return paths


def write_outputs(artifacts: dict, cfg: RunConfig):
    """Write all artifacts plus the resolved-config record into cfg.outdir.

    Returns the list of written paths.  An empty artifact set writes only
    the config record.
    """
    outdir = cfg.outdir
    os.makedirs(outdir, exist_ok=True)
    paths = [write_config_echo(cfg, outdir)]
    for key in sorted(artifacts):
        obj = artifacts[key]
        if key == "trajectory":
            paths += _write_trajectory(obj, cfg, outdir)
        elif key == "curve":
            paths += _write_curve(obj, cfg, outdir)
        elif key in ("grid_a", "grid_b", "grid_delta"):
            paths += _write_grid(obj, key, cfg, outdir)
        elif key == "verdict":
            paths += _write_verdict(obj, cfg, outdir)
        elif key == "surface":
            paths += _write_surface(obj, cfg, outdir)
        elif key == "series":
            paths += _write_series(obj, cfg, outdir)
        elif key == "mi_map":
            paths += _write_mi_map(obj, artifacts.get("mi_meta", {}), cfg, outdir)
        elif key == "classical_sweep":
            paths += _write_classical_sweep(obj, artifacts.get("kink_eps"), cfg, outdir)
        elif key in ("mi_meta", "kink_eps"):
            continue  # folded into their parent artifacts
        else:
            raise ValueError(f"unknown artifact {key!r}")
    return paths
