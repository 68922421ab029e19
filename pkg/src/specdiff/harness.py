"""Config-driven experiment runner: sweeps, ladders, artifacts, manifests.

Each run consumes an ExperimentConfig (JSON), dispatches to the computational
modules, writes CSV/JSON artifacts into the output directory, and finishes
with a manifest recording the config hash, a content digest for every file,
the tolerance table in force, and any per-point failures.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .alpha import alpha_derivative, alpha_smatrix, d_spectrum_ladder, fredholm_check
from .opcore import ModelSpec, build_model
from .pcfunc import (PiecewiseFn, accumulation_set, empirical_spectrum,
                     hausdorff, predicted_ess_spectrum)
from .resolvent import boundary_value
from .scatter1d import smatrix_stationary, smatrix_transfer

KINDS = ("alpha_sweep", "d_ladder", "phi_check", "hankel_suite",
         "fredholm_sweep", "scattering_compare")

TOLERANCE_TABLE = {
    "band_margin": 0.1,
    "factorization": 1e-12,
    "projection_idempotence": 1e-9,
    "psd_floor": 1e-10,
    "inversion_identity": 1e-9,
    "resonance_cond": 1e12,
    "alpha_cap": 1e-6,
    "kernel_tol": 1e-6,
    "unitarity": 1e-10,
    "stationary_z_normalization": 1e-9,
    "eps_n_min": 50.0,
    "transient_move": 0.1,
    "pm_one": 1e-6,
    "accumulation": 0.02,
}

TOLERANCE_VERSION = 1


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def _expand_grid(grid):
    if isinstance(grid, dict):
        return list(np.linspace(float(grid["min"]), float(grid["max"]), int(grid["count"])))
    return [float(x) for x in grid]


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    model: ModelSpec
    lambda_grid: tuple = ()
    n_list: tuple = ()
    epsilon_schedule: tuple = ()
    output_dir: str = "out"
    tolerances: tuple = ()
    phi: PiecewiseFn | None = None
    hankel_n: int = 200
    hankel_t: float = 50.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        object.__setattr__(self, "lambda_grid", tuple(float(x) for x in self.lambda_grid))
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "epsilon_schedule",
                           tuple(float(e) for e in self.epsilon_schedule))
        object.__setattr__(self, "tolerances", tuple(self.tolerances))

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        if "kind" not in doc or "model" not in doc:
            raise ConfigError("config must carry 'kind' and 'model'")
        model = ModelSpec.from_json(json.dumps(doc["model"]))
        phi = None
        if doc.get("phi") is not None:
            phi = PiecewiseFn.from_json(json.dumps(doc["phi"]))
        return cls(
            kind=doc["kind"],
            model=model,
            lambda_grid=tuple(_expand_grid(doc.get("lambda_grid", []))),
            n_list=tuple(doc.get("n_list", [])),
            epsilon_schedule=tuple(doc.get("epsilon_schedule", [])),
            output_dir=doc.get("output_dir", "out"),
            tolerances=tuple(sorted(doc.get("tolerances", {}).items())),
            phi=phi,
            hankel_n=int(doc.get("hankel_n", 200)),
            hankel_t=float(doc.get("hankel_t", 50.0)),
        )

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            return cls.from_json(fh.read())

    def canonical_json(self):
        doc = {
            "kind": self.kind,
            "model": json.loads(self.model.to_json()),
            "lambda_grid": list(self.lambda_grid),
            "n_list": list(self.n_list),
            "epsilon_schedule": list(self.epsilon_schedule),
            "output_dir": self.output_dir,
            "tolerances": dict(self.tolerances),
            "phi": json.loads(self.phi.to_json()) if self.phi else None,
            "hankel_n": self.hankel_n,
            "hankel_t": self.hankel_t,
        }
        return json.dumps(doc, sort_keys=True)

    def config_hash(self):
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()

    def tolerance_table(self):
        table = dict(TOLERANCE_TABLE)
        table.update(dict(self.tolerances))
        return table


def _fatal_diagnostics(config: ExperimentConfig):
    """Structural problems that prevent the run from starting at all."""
    diags = []
    needs_grid = config.kind in ("alpha_sweep", "d_ladder", "fredholm_sweep",
                                 "scattering_compare")
    if needs_grid and not config.lambda_grid:
        diags.append("lambda_grid is empty")
    if config.kind == "d_ladder" and len(config.n_list) < 3:
        diags.append("d_ladder needs at least 3 truncation sizes")
    if config.kind == "phi_check" and config.phi is None:
        diags.append("phi_check requires a phi symbol")
    parent = os.path.dirname(os.path.abspath(config.output_dir)) or "."
    if not os.access(parent, os.W_OK):
        diags.append(f"output directory parent {parent} not writable")
    return diags


def validate(config: ExperimentConfig):
    """Static configuration diagnostics; no computation, nothing thrown.

    Includes advisory warnings (band-edge grid points, window schedules) on
    top of the structural checks that would stop a run.
    """
    diags = _fatal_diagnostics(config)
    margin = config.tolerance_table()["band_margin"]
    for lam in config.lambda_grid:
        if config.model.kind == "lattice1d" and abs(lam) > 2.0 - margin \
                and config.kind != "d_ladder":
            diags.append(f"lambda={lam} within band_margin of the spectral edge")
    for eps in config.epsilon_schedule:
        n = max(config.n_list) if config.n_list else config.model.n_half
        if eps * n < TOLERANCE_TABLE["eps_n_min"]:
            diags.append(f"eps*N = {eps * n:.1f} violates the eps*N >= "
                         f"{TOLERANCE_TABLE['eps_n_min']:.0f} rule")
    return diags


@dataclass
class RunRecord:
    config_hash: str
    status: str
    started: float
    finished: float = 0.0
    files: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)
    results: dict = field(default_factory=dict)

    def manifest(self, config: ExperimentConfig):
        return json.dumps({
            "config_hash": self.config_hash,
            "config": json.loads(config.canonical_json()),
            "status": self.status,
            "started": self.started,
            "finished": self.finished,
            "files": self.files,
            "errors": self.errors,
            "tolerances": config.tolerance_table(),
            "tolerance_version": TOLERANCE_VERSION,
        }, indent=2, sort_keys=True)


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _write_atomic(path, text):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


class _Emitter:
    def __init__(self, out_dir, record):
        self.out_dir = out_dir
        self.record = record

    def write(self, name, text):
        path = os.path.join(self.out_dir, name)
        _write_atomic(path, text)
        self.record.files[name] = _digest(path)


def _csv(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{x:.17g}" if isinstance(x, float) else str(x)
                              for x in row))
    return "\n".join(lines) + "\n"


def _run_alpha_sweep(config, emit, record):
    rows = []
    for lam in config.lambda_grid:
        try:
            pair = build_model(config.model)
            bv = boundary_value(pair, lam)
            for est in (alpha_derivative(bv, pair.j), alpha_smatrix(bv, pair.j)):
                rows.append((lam, est.route, est.value, bv.err_estimate, bv.route))
        except Exception as exc:
            record.errors.append({"lambda": lam, "error": str(exc)})
    emit.write("alpha_sweep.csv",
               _csv(("lambda", "route", "value", "err", "mode"), rows))
    record.results["rows"] = len(rows)


def _run_d_ladder(config, emit, record):
    for lam in config.lambda_grid:
        try:
            est = d_spectrum_ladder(config.model, lam, config.n_list)
            emit.write(f"d_ladder_lambda_{lam:+.6g}.json", est.to_json())
        except Exception as exc:
            record.errors.append({"lambda": lam, "error": str(exc)})


def _run_phi_check(config, emit, record):
    phi = config.phi

    def alpha_fn(lam):
        pair = build_model(config.model)
        return alpha_derivative(boundary_value(pair, lam), pair.j).value

    pred = predicted_ess_spectrum(phi, alpha_fn)
    out = {"predicted_endpoints": [[w.real, w.imag] for w in pred.endpoints]}
    if phi.is_real and config.n_list:
        res = empirical_spectrum(config.model, phi, config.n_list)
        clouds = res["clouds"]
        if len(clouds) >= 2:
            acc = accumulation_set(clouds[-1], clouds[-2])
        else:
            acc = clouds[-1]
        target = pred.sample()
        dist = hausdorff(np.concatenate([acc, [0.0]]), target) if target.size else 0.0
        out.update({
            "n_list": list(res["n_list"]),
            "big_counts": list(res["big_counts"]),
            "accumulation": [float(x) for x in acc],
            "hausdorff_to_prediction": float(dist),
        })
    emit.write("phi_check.json", json.dumps(out, indent=2, sort_keys=True))
    record.results.update(out)


def _run_hankel_suite(config, emit, record):
    from .hankelmodel import build_l_operators, gamma_matrix, hankel_bound_check
    n, t = config.hankel_n, config.hankel_t
    gamma = gamma_matrix(n, t)
    eigs = np.linalg.eigvalsh(gamma.matrix)
    emit.write("gamma_spectrum.csv",
               _csv(("n", "T", "index", "eigenvalue"),
                    [(n, float(t), i, float(w)) for i, w in enumerate(eigs)]))
    carleman = hankel_bound_check(lambda tt: -np.expm1(-tt) / tt, 1.0, n, t)
    out = {"gamma_max": float(eigs.max()), "gamma_min": float(eigs.min()),
           "carleman_norm": carleman["norm"], "carleman_ok": carleman["bound_ok"]}
    if config.model.potential and config.lambda_grid:
        pair = build_model(config.model)
        lam = config.lambda_grid[0]
        rec = build_l_operators(pair, lam, n, t)
        out["residual_b16"] = rec["residual_b16"]
    emit.write("hankel_suite.json", json.dumps(out, indent=2, sort_keys=True))
    record.results.update(out)


def _run_fredholm_sweep(config, emit, record):
    rows = []
    for lam in config.lambda_grid:
        try:
            pair = build_model(config.model)
            bv = boundary_value(pair, lam)
            chk = fredholm_check(bv, pair.j)
            alpha = alpha_derivative(bv, pair.j).value
            rows.append((lam, chk["sigma_min_0"], chk["sigma_min_1"],
                         int(chk["fredholm"]), alpha))
        except Exception as exc:
            record.errors.append({"lambda": lam, "error": str(exc)})
    emit.write("fredholm_sweep.csv",
               _csv(("lambda", "sigma_min_0", "sigma_min_1", "fredholm", "alpha"), rows))
    record.results["rows"] = len(rows)


def _run_scattering_compare(config, emit, record):
    rows = []
    for lam in config.lambda_grid:
        try:
            pair = build_model(config.model)
            bv = boundary_value(pair, lam)
            sc = smatrix_transfer(config.model.potential, lam)
            s_stat = smatrix_stationary(pair, bv)
            alpha = alpha_derivative(bv, pair.j).value
            half_s = 0.5 * float(np.linalg.norm(sc.s - np.eye(2), 2))
            half_stat = 0.5 * float(np.linalg.norm(s_stat - np.eye(2), 2))
            rows.append((lam, abs(sc.t), abs(sc.r_plus), 2 * half_s, 2 * half_stat,
                         alpha, abs(half_s - alpha)))
        except Exception as exc:
            record.errors.append({"lambda": lam, "error": str(exc)})
    emit.write("scattering_compare.csv",
               _csv(("lambda", "abs_t", "abs_r", "norm_S_minus_I",
                     "norm_S_stationary_minus_I", "alpha_derivative",
                     "discrepancy"), rows))
    record.results["rows"] = len(rows)


_DISPATCH = {
    "alpha_sweep": _run_alpha_sweep,
    "d_ladder": _run_d_ladder,
    "phi_check": _run_phi_check,
    "hankel_suite": _run_hankel_suite,
    "fredholm_sweep": _run_fredholm_sweep,
    "scattering_compare": _run_scattering_compare,
}


def run(config: ExperimentConfig, overwrite=False) -> RunRecord:
    """Execute the experiment, write artifacts and manifest, return the record.

    Refuses to touch an output directory that already holds a manifest unless
    overwrite is set; per-point module errors are recorded and the remaining
    grid points still run (status 'partial').
    """
    diags = _fatal_diagnostics(config)
    if diags:
        raise ConfigError("; ".join(diags))
    out_dir = config.output_dir
    manifest_path = os.path.join(out_dir, "manifest.json")
    if os.path.exists(manifest_path) and not overwrite:
        raise ConfigError(f"{manifest_path} exists; pass overwrite to replace")
    os.makedirs(out_dir, exist_ok=True)
    record = RunRecord(config_hash=config.config_hash(), status="running",
                       started=time.time())
    emit = _Emitter(out_dir, record)
    _DISPATCH[config.kind](config, emit, record)
    record.finished = time.time()
    record.status = "partial" if record.errors else "complete"
    _write_atomic(manifest_path, record.manifest(config))
    return record
