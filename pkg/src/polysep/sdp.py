"""Dense block-diagonal semidefinite programming.

Standard primal form solved here:

    maximize    <C, X>
    subject to  <A_k, X> = b_k   for k = 1..m,
                X >= 0           (block-diagonal, positive semidefinite)

with the Lagrange dual

    minimize    b^T y
    subject to  S = sum_k y_k A_k - C >= 0.

The solver is an infeasible-start primal-dual path-following method with a
Mehrotra predictor-corrector, using the XZ (HKM) search direction and dense
linear algebra throughout.  It targets desk-scale problems: robustness over
speed, no sparsity exploitation, blocks capped at a configured size.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg as la

MAX_BLOCK_SIZE = 400
SYMMETRY_TOL = 1e-14


class SdpStatus(Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    NUMERICAL_TROUBLE = "NumericalTrouble"
    ITERATION_LIMIT = "IterationLimit"


class DependentConstraintWarning(UserWarning):
    """Linearly dependent constraint rows were dropped before solving."""


def _check_symmetric(mat: np.ndarray, what: str) -> np.ndarray:
    asym = np.max(np.abs(mat - mat.T)) if mat.size else 0.0
    scale = max(1.0, float(np.max(np.abs(mat))) if mat.size else 0.0)
    if asym > SYMMETRY_TOL * scale:
        raise ValueError(f"{what} is not symmetric: max asymmetry {asym:g}")
    return 0.5 * (mat + mat.T)


@dataclass
class SdpProblem:
    """Block-diagonal SDP data, sense: maximize.

    ``objective`` holds one symmetric matrix per block (C); each constraint is
    a (per-block matrix list, scalar) pair, where an entry may be None for an
    all-zero block.
    """

    block_sizes: tuple
    objective: list
    constraints: list

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.block_sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError("block sizes must be positive")
        if any(s > MAX_BLOCK_SIZE for s in sizes):
            raise ValueError(f"block size exceeds the configured limit of {MAX_BLOCK_SIZE}")
        object.__setattr__(self, "block_sizes", sizes)
        if len(self.objective) != len(sizes):
            raise ValueError("objective must have one matrix per block")
        obj = []
        for s, mat in zip(sizes, self.objective):
            m = np.zeros((s, s)) if mat is None else np.asarray(mat, dtype=float)
            if m.shape != (s, s):
                raise ValueError(f"objective block has shape {m.shape}, expected {(s, s)}")
            obj.append(_check_symmetric(m, "objective block"))
        self.objective = obj
        if not self.constraints:
            raise ValueError("problem needs at least one constraint")
        rows = []
        for mats, rhs in self.constraints:
            if len(mats) != len(sizes):
                raise ValueError("constraint must have one matrix (or None) per block")
            row = []
            for s, mat in zip(sizes, mats):
                if mat is None:
                    row.append(None)
                    continue
                m = np.asarray(mat, dtype=float)
                if m.shape != (s, s):
                    raise ValueError(f"constraint block has shape {m.shape}, expected {(s, s)}")
                row.append(_check_symmetric(m, "constraint block"))
            rows.append((row, float(rhs)))
        self.constraints = rows

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def dump(self) -> str:
        """Plain-text dump for cross-checking against external solvers.

        Line 1: block sizes.  Then the objective blocks and, per constraint,
        its right-hand side followed by its non-zero blocks, all row-major.
        """
        lines = [f"blocks {' '.join(str(s) for s in self.block_sizes)}", "objective"]
        for bi, mat in enumerate(self.objective):
            lines.append(f"  block {bi}")
            for row in mat:
                lines.append("    " + " ".join(repr(float(v)) for v in row))
        for k, (mats, rhs) in enumerate(self.constraints):
            lines.append(f"constraint {k} rhs {rhs!r}")
            for bi, mat in enumerate(mats):
                if mat is None or not np.any(mat):
                    continue
                lines.append(f"  block {bi}")
                for row in mat:
                    lines.append("    " + " ".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"


@dataclass
class SdpSolution:
    status: SdpStatus
    X: list
    y: np.ndarray
    S: list
    objective: float
    dual_objective: float
    gap: float
    primal_residual: float
    dual_residual: float
    iterations: int
    diagnostics: dict = field(default_factory=dict)


def min_eigenvalue(mat) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    m = np.asarray(mat, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    asym = np.max(np.abs(m - m.T)) if m.size else 0.0
    if asym > 1e-12 * max(1.0, float(np.max(np.abs(m)))):
        raise ValueError(f"matrix is not symmetric: max asymmetry {asym:g}")
    return float(la.eigvalsh(0.5 * (m + m.T))[0])


class _BlockOps:
    """Vectorized per-block constraint algebra for the interior-point loop."""

    def __init__(self, sizes, constraints):
        self.sizes = sizes
        self.m = len(constraints)
        # stacked[b] has shape (m, s_b, s_b); flat[b] is its (m, s_b^2) view
        self.stacked = []
        for bi, s in enumerate(sizes):
            arr = np.zeros((self.m, s, s))
            for k, (mats, _) in enumerate(constraints):
                if mats[bi] is not None:
                    arr[k] = mats[bi]
            self.stacked.append(arr)
        self.flat = [a.reshape(self.m, -1) for a in self.stacked]

    def apply(self, blocks) -> np.ndarray:
        """A(X): the m-vector of <A_k, X>."""
        out = np.zeros(self.m)
        for fb, xb in zip(self.flat, blocks):
            out += fb @ xb.reshape(-1)
        return out

    def adjoint(self, y) -> list:
        """A*(y): per-block sum_k y_k A_k."""
        return [np.einsum("k,kij->ij", y, st) for st in self.stacked]

    def schur(self, xblocks, zinv_blocks) -> np.ndarray:
        """M[j, k] = sum_b <A_j, X A_k Zinv> (symmetric positive definite)."""
        m_mat = np.zeros((self.m, self.m))
        for st, fl, xb, zib in zip(self.stacked, self.flat, xblocks, zinv_blocks):
            t = np.einsum("ij,kjl,lm->kim", xb, st, zib)
            m_mat += fl @ t.reshape(self.m, -1).T
        return 0.5 * (m_mat + m_mat.T)


def _rank_filter(problem: SdpProblem):
    """Drop linearly dependent constraint rows; detect inconsistent duplicates.

    Returns (kept indices, dropped indices, inconsistent flag).
    """
    m = problem.num_constraints
    dim = sum(s * s for s in problem.block_sizes)
    vecs = np.zeros((m, dim))
    for k, (mats, _) in enumerate(problem.constraints):
        offset = 0
        for s, mat in zip(problem.block_sizes, mats):
            if mat is not None:
                vecs[k, offset : offset + s * s] = mat.reshape(-1)
            offset += s * s
    b = np.array([rhs for _, rhs in problem.constraints])

    _, r, piv = la.qr(vecs.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0.0:
        return [], list(range(m)), bool(np.any(np.abs(b) > 1e-12))
    rank = int(np.sum(diag > diag[0] * max(vecs.shape) * np.finfo(float).eps))
    kept = sorted(piv[:rank].tolist())
    dropped = sorted(set(range(m)) - set(kept))
    inconsistent = False
    if dropped:
        basis = vecs[kept].T
        for j in dropped:
            coeff, *_ = la.lstsq(basis, vecs[j], lapack_driver="gelsd")
            if abs(b[j] - coeff @ b[kept]) > 1e-8 * (1.0 + abs(b[j])):
                inconsistent = True
                break
    return kept, dropped, inconsistent


def _max_step(blocks, directions) -> float:
    """Largest alpha with M + alpha*D >= 0 on every block, capped at 1e6."""
    alpha = 1e6
    for mat, d in zip(blocks, directions):
        lam = la.eigh(d, mat, eigvals_only=True, subset_by_index=(0, 0))[0]
        if lam < 0.0:
            alpha = min(alpha, -1.0 / lam)
    return alpha


def solve(problem: SdpProblem, tol: float = 1e-8, max_iter: int = 100) -> SdpSolution:
    """Solve the block SDP by a Mehrotra predictor-corrector interior-point method.

    Status Optimal guarantees relative primal/dual residuals and duality gap
    at most ``tol``; Infeasible comes with a dual improving-ray certificate in
    the diagnostics.  The iteration schedule is deterministic.
    """
    if not 0.0 < tol <= 1e-2:
        raise ValueError(f"tol must lie in (0, 1e-2], got {tol}")
    if max_iter < 1:
        raise ValueError("max_iter must be positive")

    sizes = problem.block_sizes
    kept, dropped, inconsistent = _rank_filter(problem)
    diagnostics: dict = {"dropped_rows": dropped, "trace": []}
    if dropped:
        warnings.warn(
            f"dropped {len(dropped)} linearly dependent constraint row(s): {dropped}",
            DependentConstraintWarning,
            stacklevel=2,
        )
    zeros = [np.zeros((s, s)) for s in sizes]
    if inconsistent:
        diagnostics["message"] = "inconsistent dependent constraint rows"
        return SdpSolution(
            status=SdpStatus.INFEASIBLE,
            X=zeros,
            y=np.zeros(problem.num_constraints),
            S=zeros,
            objective=float("nan"),
            dual_objective=float("nan"),
            gap=float("inf"),
            primal_residual=float("inf"),
            dual_residual=float("inf"),
            iterations=0,
            diagnostics=diagnostics,
        )
    if not kept:
        raise ValueError("all constraint rows are zero; the problem is not a proper SDP")

    constraints = [problem.constraints[k] for k in kept]
    b = np.array([rhs for _, rhs in constraints])
    c_blocks = problem.objective
    ops = _BlockOps(sizes, constraints)
    m = len(constraints)
    n_total = sum(sizes)
    eye = [np.eye(s) for s in sizes]

    eta = 1.0 + float(np.max(np.abs(b)))
    x = [e * eta for e in eye]
    z = [e * eta for e in eye]
    y = np.zeros(m)

    b_scale = 1.0 + la.norm(b)
    c_scale = 1.0 + np.sqrt(sum(la.norm(cb) ** 2 for cb in c_blocks))

    status = SdpStatus.ITERATION_LIMIT
    iterations = 0
    pobj = dobj = 0.0
    pinf = dinf = relgap = float("inf")

    def frob(blocks):
        return np.sqrt(sum(la.norm(bk) ** 2 for bk in blocks))

    for it in range(max_iter):
        iterations = it
        fp = b - ops.apply(x)
        rd = [cb - ab + zb for cb, ab, zb in zip(c_blocks, ops.adjoint(y), z)]
        mu = sum(np.vdot(xb, zb) for xb, zb in zip(x, z)) / n_total
        pobj = sum(np.vdot(cb, xb) for cb, xb in zip(c_blocks, x))
        dobj = float(b @ y)
        pinf = la.norm(fp) / b_scale
        dinf = frob(rd) / c_scale
        relgap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        diagnostics["trace"].append(
            {"iter": it, "mu": mu, "pinf": pinf, "dinf": dinf, "relgap": relgap}
        )

        if pinf <= tol and dinf <= tol and relgap <= tol:
            status = SdpStatus.OPTIMAL
            break

        # Farkas-style certificate of primal infeasibility: a normalized dual
        # ray with A*(y) almost PSD and b^T y decidedly negative.
        ynorm = la.norm(y)
        if pinf > 10.0 * tol and ynorm > 1e2 * b_scale:
            yhat = y / ynorm
            ray = ops.adjoint(yhat)
            ray_scale = max(1.0, max(float(np.max(np.abs(rb))) for rb in ray))
            lam_min = min(la.eigvalsh(rb)[0] for rb in ray)
            if b @ yhat < -1e-4 * b_scale and lam_min >= -1e-9 * ray_scale:
                status = SdpStatus.INFEASIBLE
                diagnostics["infeasibility_ray"] = {
                    "y": yhat.tolist(),
                    "objective": float(b @ yhat),
                    "min_eigenvalue": float(lam_min),
                    "block_min_eigenvalues": [float(la.eigvalsh(rb)[0]) for rb in ray],
                }
                break

        if not np.isfinite(mu) or mu > 1e18:
            status = SdpStatus.NUMERICAL_TROUBLE
            diagnostics["message"] = "complementarity diverged"
            break

        try:
            zinv = []
            for zb in z:
                cf = la.cho_factor(zb, lower=True, check_finite=False)
                zinv.append(la.cho_solve(cf, np.eye(zb.shape[0]), check_finite=False))
            m_mat = ops.schur(x, zinv)
            cond = np.linalg.cond(m_mat)
            jitter = 0.0
            while True:
                try:
                    m_fac = la.cho_factor(
                        m_mat + jitter * np.eye(m), lower=True, check_finite=False
                    )
                    break
                except la.LinAlgError:
                    jitter = max(10.0 * jitter, 1e-14 * (1.0 + np.trace(m_mat) / m))
                    if jitter > 1e-2:
                        raise
        except la.LinAlgError:
            status = SdpStatus.NUMERICAL_TROUBLE
            diagnostics["message"] = "Newton system factorization failed"
            break

        tr_a_zinv = np.concatenate(
            [fl @ zi.reshape(-1, 1) for fl, zi in zip(ops.flat, zinv)], axis=1
        ).sum(axis=1)
        x_rd_zinv = [xb @ rb @ zib for xb, rb, zib in zip(x, rd, zinv)]
        base_rhs = (
            np.concatenate(
                [fl @ t.reshape(-1, 1) for fl, t in zip(ops.flat, x_rd_zinv)], axis=1
            ).sum(axis=1)
            - b
        )

        # predictor: pure Newton step toward the boundary (sigma = 0)
        dy_p = la.cho_solve(m_fac, base_rhs, check_finite=False)
        dz_p = [ab - rb for ab, rb in zip(ops.adjoint(dy_p), rd)]
        dx_p = []
        for xb, dzb, zib in zip(x, dz_p, zinv):
            d = -xb - xb @ dzb @ zib
            dx_p.append(0.5 * (d + d.T))

        try:
            ap = min(1.0, _max_step(x, dx_p))
            ad = min(1.0, _max_step(z, dz_p))
        except la.LinAlgError:
            status = SdpStatus.NUMERICAL_TROUBLE
            diagnostics["message"] = "step-length eigensolve failed"
            break
        mu_aff = sum(
            np.vdot(xb + ap * dxb, zb + ad * dzb)
            for xb, dxb, zb, dzb in zip(x, dx_p, z, dz_p)
        ) / n_total
        sigma = min(1.0, max(0.0, (max(mu_aff, 0.0) / mu) ** 3))

        # corrector: recentred step with Mehrotra's second-order term
        corr = [dxb @ dzb @ zib for dxb, dzb, zib in zip(dx_p, dz_p, zinv)]
        corr_rhs = (
            base_rhs
            + sigma * mu * tr_a_zinv
            - np.concatenate(
                [fl @ t.reshape(-1, 1) for fl, t in zip(ops.flat, corr)], axis=1
            ).sum(axis=1)
        )
        dy = la.cho_solve(m_fac, corr_rhs, check_finite=False)
        dz = [ab - rb for ab, rb in zip(ops.adjoint(dy), rd)]
        dx = []
        for xb, dzb, zib, cb2 in zip(x, dz, zinv, corr):
            d = sigma * mu * zib - xb - xb @ dzb @ zib - cb2
            dx.append(0.5 * (d + d.T))

        try:
            step_tau = 0.98
            ap = min(1.0, step_tau * _max_step(x, dx))
            ad = min(1.0, step_tau * _max_step(z, dz))
        except la.LinAlgError:
            status = SdpStatus.NUMERICAL_TROUBLE
            diagnostics["message"] = "step-length eigensolve failed"
            break

        if cond > 1e14 and max(ap, ad) < 1e-5:
            status = SdpStatus.NUMERICAL_TROUBLE
            diagnostics["message"] = f"Newton system condition {cond:.2e} exceeds 1e14 and progress stalled"
            break

        x = [xb + ap * dxb for xb, dxb in zip(x, dx)]
        y = y + ad * dy
        z = [zb + ad * dzb for zb, dzb in zip(z, dz)]
        diagnostics["trace"][-1].update({"sigma": sigma, "alpha_p": ap, "alpha_d": ad})
        iterations = it + 1
    else:
        iterations = max_iter

    y_full = np.zeros(problem.num_constraints)
    for pos, k in enumerate(kept):
        y_full[k] = y[pos]

    return SdpSolution(
        status=status,
        X=x,
        y=y_full,
        S=z,
        objective=float(pobj),
        dual_objective=float(dobj),
        gap=float(abs(pobj - dobj)),
        primal_residual=float(pinf),
        dual_residual=float(dinf),
        iterations=iterations,
        diagnostics=diagnostics,
    )
