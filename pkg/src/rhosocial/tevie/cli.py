# src/rhosocial/tevie/cli.py
"""
Batch front end.

    tevie --config scene.toml --mode forward --out results/

Modes: ``forward`` (FFT operator + GMRES, field maps), ``spectrum`` (dense
eigenvalues against symbol predictions), ``validate`` (single dielectric disk
against the cylinder series solution) and ``selfcheck`` (numerical invariants;
needs no scene file).

Exit codes: 0 success, 1 selfcheck or validation failure, 2 configuration
error, 3 solver non-convergence, 4 resource budget exceeded.
"""
import argparse
import logging
import sys
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from . import artifacts, assembly, fastop, oracle, selfcheck, symbol
from .config import SceneConfig, load_scene_config, runtime_threads
from .errors import ConfigurationError, ResourceError, TevieError
from .scene import FieldVector, Scene
from .solver import SolveReport, SolverConfig, solve_iterative, write_residual_history

logger = logging.getLogger('tevie.cli')

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NOT_CONVERGED = 3

Mode = Literal['forward', 'spectrum', 'validate', 'selfcheck']


class RunManifest(BaseModel):
    """Everything one invocation needs, after flag parsing."""

    model_config = ConfigDict(frozen=True)

    config: Optional[Path] = None
    mode: Mode = 'forward'
    out: Path = Path('.')
    tol: Optional[float] = Field(None, gt=0, lt=1)
    maxit: Optional[int] = Field(None, ge=1)
    restart: Optional[int] = Field(None, ge=1)
    precond: Optional[Literal['none', 'symbol_diagonal']] = None
    seed: int = 0
    log_level: Literal['DEBUG', 'INFO', 'WARNING', 'ERROR'] = 'WARNING'

    def load_config(self) -> SceneConfig:
        if self.config is None:
            raise ConfigurationError(f"--config is required for mode {self.mode}")
        return load_scene_config(self.config)

    def solver_config(self, scene_config: SceneConfig) -> SolverConfig:
        """File settings first, then flags."""
        settings: Dict[str, Any] = dict(scene_config.solver_overrides())
        flags = {'rel_tolerance': self.tol, 'max_iterations': self.maxit,
                 'restart': self.restart, 'preconditioner': self.precond}
        settings.update({k: v for k, v in flags.items() if v is not None})
        return SolverConfig(**settings)


def prepare_output(out: Path) -> Path:
    """Create the output directory and make sure it is writable."""
    try:
        out.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(dir=out, prefix='.tevie-write-check-'):
            pass
    except OSError as e:
        raise ConfigurationError(f"output directory is not writable: {e.strerror or e}",
                                 source=str(out)) from None
    return out


def _scene_summary(scene: Scene) -> Dict[str, Any]:
    grid = scene.grid
    return {'n1': grid.n1, 'n2': grid.n2, 'h': grid.h, 'origin': list(grid.origin),
            'k_b': scene.medium.k_b, 'kbh': scene.kbh}


def _solve(scene_config: SceneConfig, manifest: RunManifest):
    scene = scene_config.build_scene()
    wave = scene_config.build_wave()
    cfg = manifest.solver_config(scene_config)
    if scene_config.solver.operator == 'dense':
        op = assembly.assemble_dense(scene)
    else:
        op = fastop.build_operator(scene)
    rhs = assembly.assemble_rhs(scene, wave)
    logger.info(f"solving {3 * scene.n_cells} unknowns with the {scene_config.solver.operator} "
                f"operator (tol {cfg.rel_tolerance:g}, restart {cfg.restart})")
    report = solve_iterative(op, np.asarray(rhs), cfg, scene=scene)
    return scene, rhs, report


def _report_payload(scene: Scene, report: SolveReport, operator: str) -> Dict[str, Any]:
    payload = report.summary()
    payload['operator'] = operator
    payload['scene'] = _scene_summary(scene)
    return payload


def run_forward(manifest: RunManifest) -> int:
    scene_config = manifest.load_config()
    out = prepare_output(manifest.out)
    scene, rhs, report = _solve(scene_config, manifest)

    total = FieldVector(report.solution, scene.n_cells)
    artifacts.write_field_vector(out, 'total', scene.grid, total)
    artifacts.write_field_vector(out, 'scattered', scene.grid, total - rhs)
    write_residual_history(report, out / 'residual_history.csv')
    artifacts.write_json(out / 'solve_report.json',
                         _report_payload(scene, report, scene_config.solver.operator))
    if not report.converged:
        print(f"tevie: GMRES did not converge: {report.diagnostic}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def run_spectrum(manifest: RunManifest) -> int:
    scene_config = manifest.load_config()
    out = prepare_output(manifest.out)
    scene = scene_config.build_scene()
    size = 3 * scene.n_cells
    if size > oracle.EIGEN_BUDGET:
        raise ResourceError(f"dense eigensolver limited to {oracle.EIGEN_BUDGET} unknowns",
                            required=size, budget=oracle.EIGEN_BUDGET)
    matrix = assembly.assemble_dense(scene)
    report = oracle.dense_spectrum(matrix)

    artifacts.write_spectrum(out / 'spectrum.csv', report.eigenvalues, report.predicted)
    artifacts.write_json(out / 'spectrum_summary.json', {
        'scene': _scene_summary(scene),
        'n_eigenvalues': int(report.eigenvalues.size),
        'predicted': [{'point': p, 'min_distance': d}
                      for p, d in zip(report.predicted, report.distances)],
        'min_abs_eigenvalue': report.min_abs_eigenvalue,
        'elliptic': symbol.is_elliptic(scene.contrast),
    })
    return EXIT_OK


def run_validate(manifest: RunManifest) -> int:
    scene_config = manifest.load_config()
    spec = scene_config.cylinder()
    out = prepare_output(manifest.out)
    scene, _, report = _solve(scene_config, manifest)

    centers = scene.grid.centers()
    keep = spec.boundary_distance(centers) > scene.grid.h
    points = centers[keep]
    reference = oracle.mie_cylinder_fields(spec, scene.medium, scene_config.build_wave(), points)
    total = FieldVector(report.solution, scene.n_cells)
    numerical = {'E1': total.e1[keep], 'E2': total.e2[keep], 'H3': total.h3[keep]}
    expected = {'E1': reference.e1, 'E2': reference.e2, 'H3': reference.h3}

    diff = np.concatenate([numerical['E1'] - expected['E1'], numerical['E2'] - expected['E2']])
    ref = np.concatenate([expected['E1'], expected['E2']])
    error = float(np.linalg.norm(diff) / np.linalg.norm(ref)) if ref.size else float('nan')
    threshold = scene_config.validation.threshold
    passed = bool(error < threshold)

    artifacts.write_field_comparison(out / 'field_comparison.csv', points, numerical, expected)
    artifacts.write_json(out / 'validation_report.json', {
        'scene': _scene_summary(scene),
        'cylinder': {'radius': spec.radius, 'chi_e_inside': spec.chi_e_inside,
                     'center': list(spec.center)},
        'series_order': reference.order,
        'truncation_estimate': reference.truncation_estimate,
        'points_compared': int(points.shape[0]),
        'relative_l2_error': error,
        'threshold': threshold,
        'passed': passed,
        'solver': report.summary(),
    })
    print(f"relative L2 error of (E1, E2): {error:.4e} (threshold {threshold:g})")
    if not report.converged:
        print(f"tevie: GMRES did not converge: {report.diagnostic}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def run_selfcheck(manifest: RunManifest) -> int:
    out = prepare_output(manifest.out)
    results = selfcheck.run_checks(manifest.seed)
    artifacts.write_rows(
        out / 'selfcheck.csv', ['invariant', 'status', 'deviation', 'tolerance', 'detail'],
        [(r.invariant, r.status, r.deviation, r.tolerance, r.detail) for r in results],
    )
    failed = [r.invariant for r in results if not r.passed]
    if failed:
        print("failed invariants: " + ", ".join(failed))
        return EXIT_CHECK_FAILED
    print(f"all {len(results)} invariants passed")
    return EXIT_OK


_RUNNERS = {
    'forward': run_forward,
    'spectrum': run_spectrum,
    'validate': run_validate,
    'selfcheck': run_selfcheck,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='tevie', description="2D TE volume integral equation solver")
    parser.add_argument('--config', type=Path, help="scene file (TOML)")
    parser.add_argument('--mode', choices=list(_RUNNERS), default='forward')
    parser.add_argument('--out', type=Path, default=Path('.'), help="output directory")
    parser.add_argument('--tol', type=float, help="GMRES relative tolerance")
    parser.add_argument('--maxit', type=int, help="GMRES iteration limit")
    parser.add_argument('--restart', type=int, help="GMRES restart length")
    parser.add_argument('--precond', choices=['none', 'symbol_diagonal'])
    parser.add_argument('--seed', type=int, default=0, help="seed for selfcheck sampling")
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    return parser


def _configure_logging(level: str) -> None:
    root = logging.getLogger('tevie')
    root.setLevel(level)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
        root.addHandler(handler)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.log_level)
    try:
        manifest = RunManifest(**vars(args))
    except ValidationError as e:
        first = e.errors()[0]
        field = '.'.join(str(p) for p in first['loc'])
        print(f"tevie: error: --{field.replace('_', '-')}: {first['msg']}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        runtime_threads()
        return _RUNNERS[manifest.mode](manifest)
    except TevieError as e:
        print(f"tevie: error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
