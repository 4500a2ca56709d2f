"""Config-driven sweeps producing plot-ready CSV tables and a JSON manifest."""

from __future__ import annotations

import configparser
import csv
import dataclasses
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analytic, simulate
from .model import (CONTROL_KEYS, PARAM_KEYS, ParameterError, control_errors,
                    controls_from_mapping, param_errors, params_from_mapping)

AXES = ("theta_db", "gamma", "h", "eps_scale")
METHODS = ("analytic_beta", "gil_pelaez", "semi_analytic", "full_fading")
EXPERIMENT_KEYS = ("sweep", "grid", "theta_db", "gamma", "eps_scale", "methods", "output")

AXIS_COLUMNS = ["theta_db", "gamma", "h", "eps_l", "eps_n"]
VALUE_COLUMNS = ["M1_analytic", "M2_analytic", "M1_empirical", "var_empirical",
                 "meta_beta", "meta_gilpelaez", "meta_semi_analytic", "meta_full_fading"]
COLUMNS = AXIS_COLUMNS + VALUE_COLUMNS + ["n_realizations", "seed"]


@dataclass
class ExperimentSpec:
    params: object
    controls: object
    sweep: str
    grid: list
    theta_db: list = field(default_factory=lambda: [0.0])
    gamma: list = field(default_factory=lambda: [0.9])
    eps_scale: float | None = 1.0
    methods: tuple = METHODS
    output: str = "run.csv"
    source: dict = field(default_factory=dict)

    def axis_values(self, name):
        if name == self.sweep:
            return list(self.grid)
        if name == "h":
            return [self.params.h]
        if name == "eps_scale":
            return [self.eps_scale]
        return list(getattr(self, name))


def _floats(text):
    return [float(x) for x in str(text).replace("\n", ",").split(",") if x.strip()]


def read_config(path):
    """Flat ``key = value`` file ('#' comments, comma-separated lists) as a dict of strings."""
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"),
                                       inline_comment_prefixes=("#",))
    parser.optionxform = str
    text = Path(path).read_text()
    parser.read_string("[config]\n" + text)
    return dict(parser["config"])


def spec_from_mapping(values):
    """Split flat config values into params, controls and experiment settings.

    Raises :class:`ParameterError` listing every problem found.
    """
    p_vals, c_vals, x_vals = {}, {}, {}
    errs = []
    for key, val in values.items():
        if key in EXPERIMENT_KEYS:
            x_vals[key] = val
        elif key in PARAM_KEYS:
            p_vals[key] = val
        elif key in CONTROL_KEYS:
            c_vals[key] = val
        else:
            errs.append(f"unknown key {key!r}")
    try:
        params = params_from_mapping(p_vals)
    except (ParameterError, ValueError) as exc:
        errs.extend(getattr(exc, "errors", [str(exc)]))
        params = None
    try:
        controls = controls_from_mapping(c_vals)
    except (ParameterError, ValueError) as exc:
        errs.extend(getattr(exc, "errors", [str(exc)]))
        controls = None

    sweep = x_vals.get("sweep", "").strip()
    if sweep not in AXES:
        errs.append(f"sweep={sweep!r} must be one of {AXES}")
    try:
        grid = _floats(x_vals.get("grid", ""))
    except ValueError as exc:
        errs.append(f"grid: {exc}")
        grid = []
    if not grid:
        errs.append("grid is empty")
    elif any(b <= a for a, b in zip(grid, grid[1:])):
        errs.append("grid must be strictly increasing")

    kw = {}
    for key in ("theta_db", "gamma"):
        if key in x_vals:
            try:
                kw[key] = _floats(x_vals[key])
            except ValueError as exc:
                errs.append(f"{key}: {exc}")
            else:
                if not kw[key]:
                    errs.append(f"{key} is empty")
    if "eps_scale" in x_vals:
        try:
            kw["eps_scale"] = float(x_vals["eps_scale"])
        except ValueError as exc:
            errs.append(f"eps_scale: {exc}")
    elif "eps_l" in p_vals or "eps_n" in p_vals:
        kw["eps_scale"] = None
    if "methods" in x_vals:
        methods = tuple(m.strip() for m in x_vals["methods"].split(",") if m.strip())
        bad = [m for m in methods if m not in METHODS]
        if bad or not methods:
            errs.append(f"methods {bad or '(none)'} not in {METHODS}")
        kw["methods"] = methods
    if "output" in x_vals:
        kw["output"] = x_vals["output"].strip()

    scales = grid if sweep == "eps_scale" else [kw.get("eps_scale", 1.0)]
    if any(s is not None and not 0 <= s <= 1 for s in scales):
        errs.append("eps_scale must lie in [0, 1]")
    if sweep == "gamma" and any(not 0 < g < 1 for g in grid):
        errs.append("gamma grid must lie in (0, 1)")
    if any(not 0 < g < 1 for g in kw.get("gamma", [])):
        errs.append("gamma values must lie in (0, 1)")
    if sweep == "h" and any(v <= 0 for v in grid):
        errs.append("h grid must be positive")

    spec = ExperimentSpec(params, controls, sweep if sweep in AXES else "theta_db", grid,
                          source=dict(values), **kw)
    if params is not None and controls is not None:
        try:
            points = _points(spec)
        except (ParameterError, ValueError) as exc:
            errs.extend(getattr(exc, "errors", [str(exc)]))
            points = []
        for p in points or [params]:
            errs.extend(f"[h={p.h:g}] {e}" for e in param_errors(p) + control_errors(controls, p))
    if errs:
        raise ParameterError(list(dict.fromkeys(errs)))
    return spec


def load_spec(path):
    return spec_from_mapping(read_config(path))


def _points(spec):
    """Resolved NetworkParams for every (h, eps_scale) combination."""
    out = []
    for h in spec.axis_values("h"):
        for scale in spec.axis_values("eps_scale"):
            p = spec.params.replace(h=float(h))
            if scale is not None:
                p = p.with_eps_scale(float(scale))
            out.append(p)
    return out


def _fmt(x):
    if x is None:
        return ""
    return repr(float(x))


def run(spec, output=None):
    """Execute ``spec``; writes the CSV and a ``.json`` manifest next to it. Returns the CSV path."""
    out_path = Path(output or spec.output)
    t_start = time.perf_counter()
    controls = spec.controls
    thetas_db = spec.axis_values("theta_db")
    gammas = np.array(spec.axis_values("gamma"), dtype=float)
    log_floor = math.log(float(gammas.min())) - 5.0
    rows, diagnostics = [], []
    need_semi = "semi_analytic" in spec.methods or "gil_pelaez" in spec.methods

    for p in _points(spec):
        thetas = [10.0 ** (t / 10.0) for t in thetas_db]
        semi = simulate.run_semi_analytic_sweep(p, controls, thetas) if need_semi else None
        full = (simulate.run_full_fading_sweep(p, controls, thetas)
                if "full_fading" in spec.methods else None)
        for i, (tdb, theta) in enumerate(zip(thetas_db, thetas)):
            diag = {"h": p.h, "eps_l": p.eps_l, "eps_n": p.eps_n, "theta_db": tdb}
            cols = dict.fromkeys(VALUE_COLUMNS)
            meta = {}
            if "analytic_beta" in spec.methods:
                ms = analytic.moment_set(theta, p, controls)
                cols["M1_analytic"], cols["M2_analytic"] = ms.M1, ms.M2
                diag.update(moment_est_error=ms.est_error, moment_converged=ms.converged,
                            z_tail_octave_change=ms.tail_change)
                meta["meta_beta"] = analytic.beta_approximation(ms.M1, max(ms.M2, ms.M1 ** 2), gammas)
            ref = semi[i] if semi is not None else (full[i] if full is not None else None)
            if ref is not None:
                cols["M1_empirical"] = simulate.empirical_moment(ref, 1)
                cols["var_empirical"] = simulate.empirical_moment(ref, 2) - cols["M1_empirical"] ** 2
            if "semi_analytic" in spec.methods:
                meta["meta_semi_analytic"] = simulate.empirical_meta(semi[i], gammas)
            if "full_fading" in spec.methods:
                meta["meta_full_fading"] = simulate.empirical_meta(full[i], gammas)
            if "gil_pelaez" in spec.methods:
                im = analytic.SampleImaginaryMoment(semi[i].values, log_floor=log_floor)
                vals, info = analytic.gil_pelaez(im, gammas, controls, full_output=True)
                meta["meta_gilpelaez"] = vals
                diag.update(gp_tail_estimate=float(np.max(info["tail_estimate"])),
                            zero_samples=im.n_zero)
            diagnostics.append(diag)
            for k, g in enumerate(gammas):
                row = {"theta_db": tdb, "gamma": float(g), "h": p.h, "eps_l": p.eps_l, "eps_n": p.eps_n}
                for name in VALUE_COLUMNS:
                    row[name] = meta[name][k] if name in meta else cols[name]
                rows.append(row)

    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in AXIS_COLUMNS + VALUE_COLUMNS]
                       + [controls.n_realizations, controls.seed])
    manifest = {
        "config": spec.source,
        "params": dataclasses.asdict(spec.params),
        "controls": dataclasses.asdict(controls),
        "sweep": spec.sweep,
        "grid": spec.grid,
        "theta_db": thetas_db,
        "gamma": gammas.tolist(),
        "methods": list(spec.methods),
        "wall_time_s": time.perf_counter() - t_start,
        "diagnostics": diagnostics,
    }
    out_path.with_suffix(".json").write_text(json.dumps(manifest, indent=2, default=float))
    return out_path


class SchemaError(ValueError):
    pass


def _read_table(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return reader.fieldnames or [], list(reader)


def compare(path_a, path_b):
    """Max absolute per-cell difference for every value column present in both runs."""
    cols_a, rows_a = _read_table(path_a)
    cols_b, rows_b = _read_table(path_b)
    if cols_a != cols_b:
        raise SchemaError(f"column mismatch: {cols_a} vs {cols_b}")
    if len(rows_a) != len(rows_b):
        raise SchemaError(f"row count mismatch: {len(rows_a)} vs {len(rows_b)}")
    diffs = {}
    for n, (ra, rb) in enumerate(zip(rows_a, rows_b)):
        for c in AXIS_COLUMNS:
            if c in ra and float(ra[c]) != float(rb[c]):
                raise SchemaError(f"row {n}: axis column {c} differs ({ra[c]} vs {rb[c]})")
        for c in VALUE_COLUMNS:
            if c not in ra:
                continue
            if (ra[c] == "") != (rb[c] == ""):
                raise SchemaError(f"row {n}: {c} present in only one run")
            if ra[c] != "":
                diffs[c] = max(diffs.get(c, 0.0), abs(float(ra[c]) - float(rb[c])))
    return diffs
