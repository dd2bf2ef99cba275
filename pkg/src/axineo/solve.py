"""
Feasibility-preserving minimization of the discrete reduced energy.

Limited-memory BFGS over the interior nodal values with Armijo backtracking.
Trial points are rejected (the step shrinks) when any sample has
``det Dv <= 0``, any node has ``v1 < 0``, or the optional sup-norm cap is
exceeded; the blow-up of ``H`` at zero keeps iterates away from the
constraint, backtracking only guards against discrete overshoot. On
axis-touching domains minimizers need not exist, so a collapsed line search
ends the run with status ``"stalled"`` instead of raising.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .energy import energy_and_gradient
from .errors import ConstraintError, InfeasibleDeterminantError
from .grid import MeridianGrid
from .kinematics import DeformationField, check_feasibility, sample_kinematics
from .material import MaterialLaw

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ("iter", "G", "grad_norm", "step", "min_detDv", "min_v1")


@dataclass
class BoundaryData:
    """Dirichlet data on the rectangle boundary.

    ``kind="affine"`` prescribes ``v = (lam r, lam z + b_z)``; ``kind="custom"``
    carries explicit values ``v1``, ``v2`` for the boundary nodes in grid
    order (``np.flatnonzero(grid.boundary_mask)``).
    """

    kind: str = "affine"
    lam: float = 1.0
    b_z: float = 0.0
    v1: np.ndarray | None = None
    v2: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("affine", "custom"):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "custom":
            if self.v1 is None or self.v2 is None:
                raise ValueError("custom boundary data needs v1 and v2")
            self.v1 = np.asarray(self.v1, float).ravel()
            self.v2 = np.asarray(self.v2, float).ravel()
            if (self.v1 < 0).any():
                raise ConstraintError("custom boundary data has v1 < 0")

    @classmethod
    def from_map(cls, grid: MeridianGrid, func: Callable) -> "BoundaryData":
        pts = grid.nodes[grid.boundary_mask]
        v1, v2 = func(pts[:, 0], pts[:, 1])
        return cls("custom", v1=np.broadcast_to(v1, len(pts)), v2=np.broadcast_to(v2, len(pts)))

    @classmethod
    def from_field(cls, grid: MeridianGrid, fld: DeformationField) -> "BoundaryData":
        m = grid.boundary_mask
        return cls("custom", v1=fld.v1[m], v2=fld.v2[m])

    def values(self, grid: MeridianGrid) -> tuple[np.ndarray, np.ndarray]:
        pts = grid.nodes[grid.boundary_mask]
        if self.kind == "affine":
            return self.lam * pts[:, 0], self.lam * pts[:, 1] + self.b_z
        if self.v1.size != pts.shape[0]:
            raise ValueError(f"custom boundary data has {self.v1.size} values, grid has {pts.shape[0]} boundary nodes")
        return self.v1, self.v2

    def to_dict(self) -> dict:
        if self.kind == "affine":
            return {"kind": "affine", "lambda": self.lam, "b_z": self.b_z}
        return {"kind": "custom", "n_values": int(self.v1.size)}


@dataclass
class SolveOptions:
    max_iters: int = 2000
    grad_tol: float = 1e-6
    step_init: float = 1e-2
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4
    memory: int = 10
    M_bound: float | None = None
    seed: int = 0

    def __post_init__(self):
        if not (self.grad_tol > 0 and self.step_init > 0):
            raise ValueError("tolerances must be positive")
        if not 0 < self.backtrack_factor < 1 or not 0 < self.armijo_c < 1:
            raise ValueError("backtrack_factor and armijo_c must lie in (0, 1)")
        if self.memory < 0 or self.max_iters < 0:
            raise ValueError("memory and max_iters must be non-negative")


@dataclass
class SolveHistory:
    """Per accepted iterate (iterate 0 is the start) plus the final state."""

    G: list = field(default_factory=list)
    grad_norm: list = field(default_factory=list)
    step: list = field(default_factory=list)
    min_det_Dv: list = field(default_factory=list)
    min_v1: list = field(default_factory=list)
    final_field: DeformationField | None = None
    converged: bool = False
    status: str = "running"
    n_evals: int = 0
    grid: MeridianGrid | None = field(default=None, repr=False)
    law: MaterialLaw | None = None
    bc: BoundaryData | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.G)

    def rows(self):
        for k in range(len(self.G)):
            yield (k, self.G[k], self.grad_norm[k], self.step[k], self.min_det_Dv[k], self.min_v1[k])

    def is_monotone(self) -> bool:
        g = np.asarray(self.G)
        return bool((np.diff(g) <= 0).all())


def apply_boundary(grid: MeridianGrid, fld: DeformationField, bc: BoundaryData) -> DeformationField:
    """Copy of ``fld`` with boundary nodes overwritten by ``bc``."""
    b1, b2 = bc.values(grid)
    if (np.asarray(b1) < 0).any():
        raise ConstraintError("boundary data has v1 < 0")
    out = fld.copy()
    out.v1[grid.boundary_mask] = b1
    out.v2[grid.boundary_mask] = b2
    return out


def check_history(history) -> tuple[bool, list[str]]:
    """Feasibility and monotonicity of a recorded history.

    Accepts a :class:`SolveHistory` or a sequence of row mappings with the
    history CSV columns. Returns ``(ok, problems)``.
    """
    if isinstance(history, SolveHistory):
        rows = [dict(zip(HISTORY_COLUMNS, row)) for row in history.rows()]
    else:
        rows = list(history)
    problems = []
    prev = np.inf
    for row in rows:
        k = int(row["iter"])
        if not float(row["min_detDv"]) > 0:
            problems.append(f"iterate {k}: min det Dv = {row['min_detDv']}")
        if not float(row["min_v1"]) >= 0:
            problems.append(f"iterate {k}: min v1 = {row['min_v1']}")
        g = float(row["G"])
        if not np.isfinite(g):
            problems.append(f"iterate {k}: G is not finite")
        elif g > prev:
            problems.append(f"iterate {k}: G increased from {prev!r} to {g!r}")
        prev = g
    return not problems, problems


class _Problem:
    """Energy restricted to the free (interior) degrees of freedom."""

    def __init__(self, grid, base: DeformationField, law, M_bound):
        self.grid, self.law, self.M_bound = grid, law, M_bound
        self.free = np.concatenate([grid.interior_mask, grid.interior_mask])
        self.full = base.as_vector()
        self.n_evals = 0

    def field(self, x) -> DeformationField:
        full = self.full.copy()
        full[self.free] = x
        return DeformationField.from_vector(full)

    def evaluate(self, x):
        """``(G, grad, min_det, min_v1)`` or ``None`` when ``x`` is infeasible."""
        self.n_evals += 1
        fld = self.field(x)
        if fld.v1.min() < 0:
            return None
        if self.M_bound is not None and fld.sup_norm() > self.M_bound:
            return None
        ks = sample_kinematics(self.grid, fld)
        if not (ks.det_Dv > 0).all() or not (ks.v1 > 0).all():
            return None
        br, grad = energy_and_gradient(self.grid, fld, self.law)
        g = grad.ravel()[self.free]
        if not (np.isfinite(br.G_total) and np.isfinite(g).all()):
            raise FloatingPointError("non-finite energy or gradient")
        return br.G_total, g, float(ks.det_Dv.min()), float(fld.v1.min())


def _two_loop(g, pairs):
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * (s @ q)
        alphas.append(a)
        q -= a * y
    s, y, _ = pairs[-1]
    q *= (s @ y) / (y @ y)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        b = rho * (y @ q)
        q += (a - b) * s
    return -q


def minimize(grid: MeridianGrid, field0: DeformationField, law: MaterialLaw, bc: BoundaryData,
             opts: SolveOptions | None = None, callback: Callable | None = None) -> SolveHistory:
    """Minimize the discrete G over fields matching ``bc``.

    ``callback(k, field)`` is invoked for every accepted iterate, including
    the start (``k = 0``). The history always satisfies ``G[k+1] <= G[k]``.
    """
    opts = opts or SolveOptions()
    start = apply_boundary(grid, field0, bc)
    ks = sample_kinematics(grid, start)
    feas = check_feasibility(ks, start)
    if not feas.feasible:
        raise InfeasibleDeterminantError(
            f"start is infeasible after applying boundary data (min det Dv = {feas.min_det_Dv:.6g}, "
            f"min v1 = {feas.min_v1:.6g})", None, feas.min_det_Dv)

    prob = _Problem(grid, start, law, opts.M_bound)
    x = start.as_vector()[prob.free]
    ev = prob.evaluate(x)
    if ev is None:
        raise InfeasibleDeterminantError("start violates the sup-norm bound or has v1 = 0 at a sample")
    G, g, mdet, mv1 = ev
    hist = SolveHistory(grid=grid, law=law, bc=bc)

    def record(step, xk):
        hist.G.append(G)
        hist.grad_norm.append(float(np.linalg.norm(g)))
        hist.step.append(step)
        hist.min_det_Dv.append(mdet)
        hist.min_v1.append(mv1)
        if callback is not None:
            callback(len(hist.G) - 1, prob.field(xk))

    record(0.0, x)
    pairs: deque = deque(maxlen=max(opts.memory, 1))
    status = "max_iters"

    for it in range(opts.max_iters):
        gnorm = hist.grad_norm[-1]
        if gnorm < opts.grad_tol:
            status = "converged"
            break
        if opts.memory > 0 and pairs:
            p = _two_loop(g, pairs)
            alpha0 = 1.0
            if not (p @ g < 0):
                pairs.clear()
                p = -g
                alpha0 = opts.step_init / gnorm
        else:
            p = -g
            alpha0 = opts.step_init / gnorm

        slope = float(p @ g)
        alpha = alpha0
        accepted = None
        while alpha >= 1e-14 * alpha0:
            xt = x + alpha * p
            trial = prob.evaluate(xt)
            if trial is not None:
                Gt = trial[0]
                # G + c*alpha*slope rounds to G for tiny alpha, so demand a strict decrease
                if Gt <= G + opts.armijo_c * alpha * slope and Gt < G:
                    accepted = trial
                    break
                # roundoff regime: G flat to machine precision, gradient clearly smaller
                if Gt <= G and np.linalg.norm(trial[1]) < 0.9 * gnorm:
                    accepted = trial
                    break
            alpha *= opts.backtrack_factor
        if accepted is None:
            status = "stalled"
            logger.info("line search stalled at iteration %d (|g| = %.3e)", it, gnorm)
            break

        s = alpha * p
        y = accepted[1] - g
        sy = float(s @ y)
        if opts.memory > 0 and sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            pairs.append((s, y, 1.0 / sy))
        x = xt
        G, g, mdet, mv1 = accepted
        record(float(np.linalg.norm(s)), x)
    else:
        if hist.grad_norm[-1] < opts.grad_tol:
            status = "converged"

    hist.final_field = prob.field(x)
    hist.status = status
    hist.converged = status == "converged"
    hist.n_evals = prob.n_evals
    return hist
