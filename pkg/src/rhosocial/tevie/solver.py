# src/rhosocial/tevie/solver.py
"""
Linear solvers for the collocation system.

``solve_iterative`` is a restarted GMRES with modified Gram-Schmidt Arnoldi and
complex Givens rotations. It accepts anything ``as_linear_operator`` can wrap:
a dense ndarray, a ``DenseSystemMatrix``, an ``OperatorHandle`` or a scipy
``LinearOperator``. Non-convergence is not an error: the returned report has
``converged = False`` and a diagnostic.

The residual history holds one relative residual per inner iteration; entry
``i`` is the residual after ``i`` iterations. Inner entries are the Arnoldi
estimates of ``||M (b - A x)|| / ||M b||``. At every restart the last entry is
replaced by the unpreconditioned ``||b - A x|| / ||b||``, and only that value
decides convergence. When the preconditioned estimate reaches the target while
the true residual has not, the inner target is tightened by the ratio of the
two and the iteration continues.

A scene with zero contrast makes the operator the identity; the solution is
then ``b`` itself with no iteration.
"""
import csv
import logging
import warnings
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve, solve_triangular
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from .assembly import DenseSystemMatrix, diagonal_entries
from .errors import DegenerateContrastError, DomainError, SingularityError
from .scene import Scene

logger = logging.getLogger('tevie.solver')

# Relative size of the new Krylov direction below which Arnoldi stops.
BREAKDOWN_TOLERANCE = 1e-14
PIVOT_TOLERANCE = 1e-300
DEGENERATE_TOLERANCE = 1e-14


class Preconditioner(str, Enum):
    NONE = 'none'
    SYMBOL_DIAGONAL = 'symbol_diagonal'


class SolverConfig(BaseModel):
    """GMRES settings; see ``SceneConfig.solver_overrides`` for file overrides."""

    model_config = ConfigDict(frozen=True)

    rel_tolerance: float = Field(1e-8, gt=0, lt=1)
    max_iterations: int = Field(2000, ge=1)
    restart: int = Field(80, ge=1)
    preconditioner: Preconditioner = Preconditioner.NONE


@dataclass(frozen=True)
class SolveReport:
    solution: np.ndarray
    residual_history: List[float]
    iterations: int
    converged: bool
    diagnostic: Optional[str] = None
    preconditioner: Preconditioner = field(default=Preconditioner.NONE)

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else 0.0

    def summary(self) -> Dict[str, Any]:
        return {
            'converged': self.converged,
            'iterations': self.iterations,
            'final_relative_residual': self.final_residual,
            'preconditioner': self.preconditioner.value,
            'diagnostic': self.diagnostic,
        }


def as_linear_operator(op) -> LinearOperator:
    """Wrap dense matrices, operator handles and scipy operators alike."""
    if isinstance(op, LinearOperator):
        return op
    if hasattr(op, 'as_linear_operator'):
        return op.as_linear_operator()
    if isinstance(op, DenseSystemMatrix):
        op = op.matrix
    if isinstance(op, np.ndarray):
        if op.ndim != 2 or op.shape[0] != op.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {op.shape}")
        return aslinearoperator(op)
    raise DomainError(f"cannot use {type(op).__name__} as a linear operator")


def precondition_symbol_diagonal(scene: Scene) -> np.ndarray:
    """Left scaling: E rows by ``1/(1 + chi_e/2)``, H3 rows by ``1/[A_33]_nn``."""
    chi_e = scene.contrast.chi_e
    electric = 1.0 + 0.5 * chi_e
    _, magnetic = diagonal_entries(scene)
    for name, denominator in (('1 + chi_e/2', electric), ('[A_33]_nn', magnetic)):
        small = np.abs(denominator) < DEGENERATE_TOLERANCE
        if np.any(small):
            cell = int(np.argmax(small))
            raise DegenerateContrastError(
                f"preconditioner denominator {name} vanishes at cell {cell} "
                f"(value {complex(denominator[cell])!r})"
            )
    return np.concatenate([1.0 / electric, 1.0 / electric, 1.0 / magnetic])


def _givens(a: complex, b: complex):
    """Rotation (c, s) mapping (a, b) to (r, 0); c is real."""
    if a == 0:
        return 0.0, 1.0 + 0.0j
    abs_a = abs(a)
    norm = np.hypot(abs_a, abs(b))
    return abs_a / norm, (a / abs_a) * np.conj(b) / norm


def solve_iterative(op, b, cfg: Optional[SolverConfig] = None,
                    scene: Optional[Scene] = None) -> SolveReport:
    """Restarted GMRES on ``M A x = M b``.

    ``scene`` is needed for the symbol-diagonal preconditioner; when omitted it
    is taken from ``op.scene`` if present.
    """
    cfg = cfg or SolverConfig()
    linop = as_linear_operator(op)
    rhs = np.asarray(b, dtype=complex).ravel()
    size = rhs.size
    if linop.shape != (size, size):
        raise DomainError(
            f"right-hand side of length {size} does not match operator {linop.shape}"
        )

    scene = scene if scene is not None else getattr(op, 'scene', None)
    scaling = None
    if cfg.preconditioner is Preconditioner.SYMBOL_DIAGONAL:
        if scene is None:
            raise DomainError("symbol-diagonal preconditioning needs the scene")
        scaling = precondition_symbol_diagonal(scene)

    rhs_norm = float(np.linalg.norm(rhs))
    if rhs_norm == 0.0:
        return SolveReport(np.zeros(size, dtype=complex), [0.0], 0, True,
                           preconditioner=cfg.preconditioner)
    if scene is not None and scene.n_cells * 3 == size and scene.contrast.is_zero():
        logger.debug("zero contrast: returning the right-hand side unchanged")
        return SolveReport(rhs.copy(), [0.0], 0, True, preconditioner=cfg.preconditioner)

    def apply(x: np.ndarray) -> np.ndarray:
        y = linop.matvec(x)
        return scaling * y if scaling is not None else y

    target = scaling * rhs if scaling is not None else rhs
    bnorm = float(np.linalg.norm(target))

    x = np.zeros(size, dtype=complex)
    history: List[float] = []
    iterations = 0
    converged = False
    diagnostic: Optional[str] = None
    stalled = False
    inner_tolerance = cfg.rel_tolerance

    while True:
        raw = rhs - linop.matvec(x)
        true_rel = float(np.linalg.norm(raw)) / rhs_norm
        r = scaling * raw if scaling is not None else raw
        beta = float(np.linalg.norm(r))
        rel = beta / bnorm
        if history:
            history[-1] = true_rel
        else:
            history.append(true_rel)
        logger.debug(f"GMRES restart at iteration {iterations}: relative residual "
                     f"{true_rel:.3e} (preconditioned {rel:.3e})")
        if true_rel <= cfg.rel_tolerance:
            converged = True
            break
        if stalled:
            diagnostic = (f"Krylov space exhausted (Arnoldi breakdown) at iteration {iterations} "
                          f"with relative residual {true_rel:.3e}")
            break
        if iterations >= cfg.max_iterations:
            diagnostic = f"iteration limit {cfg.max_iterations} reached"
            break
        if scaling is not None:
            inner_tolerance = min(inner_tolerance, cfg.rel_tolerance * rel / true_rel)

        m = min(cfg.restart, cfg.max_iterations - iterations)
        basis = np.zeros((size, m + 1), dtype=complex)
        hess = np.zeros((m + 1, m), dtype=complex)
        cs = np.zeros(m)
        sn = np.zeros(m, dtype=complex)
        g = np.zeros(m + 1, dtype=complex)
        g[0] = beta
        basis[:, 0] = r / beta
        steps = 0

        for j in range(m):
            w = apply(basis[:, j])
            w_norm = float(np.linalg.norm(w))
            for i in range(j + 1):
                hess[i, j] = np.vdot(basis[:, i], w)
                w = w - hess[i, j] * basis[:, i]
            h_next = float(np.linalg.norm(w))
            hess[j + 1, j] = h_next
            for i in range(j):
                upper = cs[i] * hess[i, j] + sn[i] * hess[i + 1, j]
                hess[i + 1, j] = -np.conj(sn[i]) * hess[i, j] + cs[i] * hess[i + 1, j]
                hess[i, j] = upper
            cs[j], sn[j] = _givens(hess[j, j], hess[j + 1, j])
            hess[j, j] = cs[j] * hess[j, j] + sn[j] * hess[j + 1, j]
            hess[j + 1, j] = 0.0
            g[j + 1] = -np.conj(sn[j]) * g[j]
            g[j] = cs[j] * g[j]

            iterations += 1
            steps = j + 1
            estimate = abs(g[j + 1]) / bnorm
            history.append(estimate)
            if h_next <= BREAKDOWN_TOLERANCE * w_norm:
                stalled = True
                break
            basis[:, j + 1] = w / h_next
            if estimate <= inner_tolerance:
                break

        upper = hess[:steps, :steps]
        if np.any(np.abs(np.diag(upper)) == 0.0):
            diagnostic = (f"singular least-squares system after {iterations} iterations "
                          f"(zero on the Hessenberg diagonal)")
            history[-1] = float(np.linalg.norm(rhs - linop.matvec(x))) / rhs_norm
            break
        y = solve_triangular(upper, g[:steps], lower=False)
        x = x + basis[:, :steps] @ y

    if not converged:
        logger.warning(f"GMRES did not converge: {diagnostic}")
    return SolveReport(solution=x, residual_history=history, iterations=iterations,
                       converged=converged, diagnostic=diagnostic,
                       preconditioner=cfg.preconditioner)


def solve_direct(A, b) -> np.ndarray:
    """Dense LU with partial pivoting."""
    matrix = np.asarray(A.matrix if isinstance(A, DenseSystemMatrix) else A, dtype=complex)
    rhs = np.asarray(b, dtype=complex).ravel()
    if matrix.ndim != 2 or matrix.shape != (rhs.size, rhs.size):
        raise DomainError(f"matrix of shape {matrix.shape} does not match rhs length {rhs.size}")
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', LinAlgWarning)
        lu, piv = lu_factor(matrix)
    pivot = float(np.min(np.abs(np.diag(lu))))
    if pivot < PIVOT_TOLERANCE:
        raise SingularityError(f"matrix is numerically singular (smallest pivot {pivot:.3e})")
    return lu_solve((lu, piv), rhs)


def write_residual_history(report: SolveReport, path: Union[str, Path]) -> None:
    with open(path, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['iteration', 'relative_residual'])
        for i, value in enumerate(report.residual_history):
            writer.writerow([i, '%.17g' % value])


__all__ = [
    'Preconditioner',
    'SolverConfig',
    'SolveReport',
    'as_linear_operator',
    'precondition_symbol_diagonal',
    'solve_iterative',
    'solve_direct',
    'write_residual_history',
]
