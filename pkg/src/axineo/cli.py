"""
Command-line driver.

``axineo --config run.cfg [--output DIR] [--threads N] [--quiet]`` runs one
experiment and writes CSV tables and a ``report.json`` into the output
directory. ``axineo-check-history history.csv`` verifies that a recorded
history is feasible and monotone.

Exit codes: 0 success (including a solver stall), 1 configuration error,
2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import fields
from .config import RunConfig, load_config
from .diagnostics import (build_report, concentration_profile, cofactor_median, det_gap,
                          em_residual, equi_integrability_table, jensen_check, scalar_dictionary,
                          surface_dictionary, surface_energy_lower_bound, variation_dictionary)
from .energy import energy
from .errors import ConfigError, ConstraintError, InfeasibleDeterminantError
from .grid import build_grid
from .io import (read_field_csv, read_history_csv, write_field_csv, write_history_csv, write_json,
                 write_table_csv)
from .kinematics import DeformationField
from .solve import BoundaryData, apply_boundary, check_history, minimize

logger = logging.getLogger("axineo")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2
PINCH_DELTA = 0.1
EQUI_FACTORS = (0.0, 1.0, 3.0, 10.0)


def _boundary(cfg: RunConfig, grid) -> BoundaryData:
    if cfg["bc.kind"] == "affine":
        return BoundaryData("affine", lam=cfg["bc.lambda"], b_z=cfg["bc.b_z"])
    return BoundaryData.from_map(grid, fields.taper(cfg["bc.stretch"], cfg["bc.shear"]))


def _start(cfg: RunConfig, grid) -> DeformationField:
    s = cfg.domain
    kind = cfg["start.kind"]
    if kind == "identity":
        f = fields.identity()
    elif kind == "affine":
        f = fields.affine(cfg["bc.lambda"], cfg["bc.b_z"])
    elif kind == "taper":
        f = fields.taper(cfg["bc.stretch"], cfg["bc.shear"])
    else:
        f = fields.perturbed_affine(cfg["bc.lambda"], cfg["bc.b_z"], (s.r_min, s.r_max, s.z_min, s.z_max),
                                    cfg["start.amplitude"])
    start = DeformationField.from_function(grid, f)
    if cfg["start.noise"] > 0:
        rng = np.random.default_rng(cfg.solve.seed)
        m = grid.interior_mask
        scale = cfg["start.noise"] * grid.h
        start.v1[m] += scale * rng.standard_normal(int(m.sum()))
        start.v2[m] += scale * rng.standard_normal(int(m.sum()))
    return start


def _history_summary(hist) -> dict:
    ok, problems = check_history(hist)
    return {"status": hist.status, "converged": hist.converged, "iterations": len(hist) - 1,
            "evaluations": hist.n_evals, "G_final": hist.G[-1], "grad_norm_final": hist.grad_norm[-1],
            "min_detDv": min(hist.min_det_Dv), "min_v1": min(hist.min_v1),
            "history_check": {"ok": ok, "problems": problems}}


def _solve(cfg: RunConfig, out: Path):
    grid = build_grid(cfg.domain)
    bc = _boundary(cfg, grid)
    start = apply_boundary(grid, _start(cfg, grid), bc)
    hist = minimize(grid, start, cfg.material, bc, cfg.solve)
    write_history_csv(out / "history.csv", hist)
    write_field_csv(out / "field.csv", grid, hist.final_field)
    if hist.status == "stalled":
        logger.warning("solver stalled after %d iterations", len(hist) - 1)
    return grid, bc, hist


def run_annulus_minimize(cfg: RunConfig, out: Path) -> dict:
    grid, bc, hist = _solve(cfg, out)
    rep = build_report(grid, hist.final_field, cfg.material, bc, cfg["diagnostics.deltas"],
                       cfg["diagnostics.n_tests"], cfg.solve.seed, cfg["diagnostics.em_quad_order"],
                       cfg["diagnostics.raster_resolution"])
    return {"solve": _history_summary(hist),
            "energy": energy(grid, hist.final_field, cfg.material).to_dict(),
            "diagnostics": rep.to_dict()}


def run_affine_check(cfg: RunConfig, out: Path) -> dict:
    grid, bc, hist = _solve(cfg, out)
    v = hist.final_field
    aff = DeformationField.from_function(grid, fields.affine(bc.lam, bc.b_z))
    dist = float(max(np.abs(v.v1 - aff.v1).max(), np.abs(v.v2 - aff.v2).max()))
    G_aff = energy(grid, aff, cfg.material).G_total
    dictionary = variation_dictionary(grid, cfg["diagnostics.n_tests"], cfg.solve.seed)
    return {"solve": _history_summary(hist),
            "uniqueness_distance": dist,
            "relative_energy_gap": (hist.G[-1] - G_aff) / abs(G_aff),
            "jensen": jensen_check(grid, v, cfg.material, bc.lam, bc.b_z).to_dict(),
            "em_residual": em_residual(grid, v, cfg.material, dictionary, quad_order=cfg["diagnostics.em_quad_order"]),
            "em_residual_affine": em_residual(grid, aff, cfg.material, dictionary,
                                              quad_order=cfg["diagnostics.em_quad_order"])}


def run_axis_concentration(cfg: RunConfig, out: Path) -> dict:
    grid = build_grid(cfg.domain)
    s = cfg.domain
    deltas = sorted(set(cfg["diagnostics.deltas"]) | {PINCH_DELTA})
    psis = scalar_dictionary(grid, cfg["diagnostics.n_tests"], cfg.solve.seed)
    surf = surface_dictionary(grid, seed=cfg.solve.seed)
    conc_rows, equi_rows, gap_rows = [], [], []
    for eps in cfg["pinch_epsilons"]:
        v = DeformationField.from_function(grid, fields.pinch(eps, cfg["pinch.a0"], (s.z_min, s.z_max)))
        for row in concentration_profile(grid, v, deltas):
            conc_rows.append({"epsilon": eps, **row})
        med = cofactor_median(grid, v)
        for k, row in zip(EQUI_FACTORS, equi_integrability_table(grid, v, [k * med for k in EQUI_FACTORS], PINCH_DELTA)):
            equi_rows.append({"epsilon": eps, "M_factor": k, **row})
        gap = det_gap(grid, v, psis)[0]
        lb = surface_energy_lower_bound(grid, v, surf)
        tube = concentration_profile(grid, v, [PINCH_DELTA])[0]
        gap_rows.append({"epsilon": eps, "det_gap": gap, "surface_energy_lb": lb,
                         "tube_cofactor": tube["tube_cofactor"], "tube_dirichlet": tube["tube_dirichlet"],
                         "G": energy(grid, v, cfg.material).G_total})
    write_table_csv(out / "concentration.csv", conc_rows, list(conc_rows[0]))
    write_table_csv(out / "equi_integrability.csv", equi_rows, list(equi_rows[0]))
    write_table_csv(out / "det_gap.csv", gap_rows, list(gap_rows[0]))

    def increasing(key):
        order = np.argsort([-r["epsilon"] for r in gap_rows])
        vals = [gap_rows[k][key] for k in order]
        return bool(all(b > a for a, b in zip(vals, vals[1:])))

    tails = [r["outer_tail"] for r in equi_rows if r["M_factor"] == 10.0]
    return {"family": "v1 = r sqrt(1 + a(z)^2 / (r^2 + eps^2)), v2 = z, a(z) = a0 sin^2(pi (z - z0)/(z1 - z0))",
            "delta": PINCH_DELTA, "concentration": conc_rows, "equi_integrability": equi_rows, "det_gap": gap_rows,
            "monotone": {"tube_cofactor": increasing("tube_cofactor"), "det_gap": increasing("det_gap"),
                         "surface_energy_lb": increasing("surface_energy_lb")},
            "outer_tail_within_2x": bool(max(tails) <= 2 * min(tails))}


def run_diagnose_field(cfg: RunConfig, out: Path) -> dict:
    grid = build_grid(cfg.domain)
    try:
        v = read_field_csv(cfg["field_path"], grid)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot load field {cfg['field_path']}: {exc}") from None
    bc = BoundaryData("affine", lam=cfg["bc.lambda"], b_z=cfg["bc.b_z"]) if cfg["bc.kind"] == "affine" else None
    if bc is not None:
        m = grid.boundary_mask
        b1, b2 = bc.values(grid)
        if max(np.abs(v.v1[m] - b1).max(), np.abs(v.v2[m] - b2).max()) > 1e-10:
            bc = None
    rep = build_report(grid, v, cfg.material, bc, cfg["diagnostics.deltas"], cfg["diagnostics.n_tests"],
                       cfg.solve.seed, cfg["diagnostics.em_quad_order"], cfg["diagnostics.raster_resolution"])
    return {"energy": energy(grid, v, cfg.material).to_dict(), "diagnostics": rep.to_dict()}


EXPERIMENT_RUNNERS = {
    "annulus-minimize": run_annulus_minimize,
    "affine-check": run_affine_check,
    "axis-concentration": run_axis_concentration,
    "diagnose-field": run_diagnose_field,
}


def run(cfg: RunConfig) -> int:
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    with np.errstate(invalid="raise", divide="raise", over="raise"):
        body = EXPERIMENT_RUNNERS[cfg.experiment](cfg, out)
    report = {"experiment": cfg.experiment, "config": cfg.resolved(), **body}
    write_json(out / "report.json", report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="axineo", description="Axisymmetric energy minimization experiments.")
    p.add_argument("--config", required=True, type=Path, help="run configuration file")
    p.add_argument("--threads", type=int, default=None, help="worker threads (recorded in the report)")
    p.add_argument("--output", type=Path, default=None, help="output directory (overrides output_dir)")
    p.add_argument("--quiet", action="store_true", help="only print errors")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.INFO, format="%(levelname)s %(message)s")
    overrides = {}
    if args.output is not None:
        overrides["output_dir"] = str(args.output)
    if args.threads is not None:
        overrides["threads"] = args.threads
    try:
        cfg = load_config(args.config, overrides)
        if cfg["threads"] < 1:
            raise ConfigError("threads must be at least 1")
        code = run(cfg)
    except (ConfigError, ConstraintError, InfeasibleDeterminantError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FloatingPointError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if not args.quiet:
        print(f"{cfg.experiment}: wrote {cfg.output_dir / 'report.json'}")
    return code


def check_history_main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="axineo-check-history",
                                description="Check that every iterate in a history CSV is feasible and G is monotone.")
    p.add_argument("history", nargs="+", type=Path)
    args = p.parse_args(argv)
    status = EXIT_OK
    for path in args.history:
        try:
            ok, problems = check_history(read_history_csv(path))
        except (OSError, ValueError) as exc:
            print(f"{path}: cannot read history: {exc}", file=sys.stderr)
            status = EXIT_CONFIG
            continue
        print(f"{path}: {'ok' if ok else 'FAILED'}")
        for msg in problems:
            print(f"  {msg}")
        if not ok:
            status = EXIT_NUMERIC
    return status


if __name__ == "__main__":
    sys.exit(main())
