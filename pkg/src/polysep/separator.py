"""Search for a certified separating polynomial between two semialgebraic sets.

The contract: find p with p >= 1 on A = S(g) and p <= 0 on B = S(h),
witnessed by quadratic-module memberships of p - 1 over g and of -p over h.
At a fixed level l the search is one joint SDP: maximize a margin t subject
to p - 1 - t in Q_l(g) and -p - t in Q_l(h), with the coefficients of p tied
into both membership systems and eliminated against the g-side expansion.
A positive optimal margin yields the polynomial and both certificates; the
hierarchy then sweeps candidate degrees and levels until one succeeds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .poly import DEFAULT_GRID_BUDGET, Polynomial
from .sdp import SdpProblem, SdpStatus, solve as sdp_solve
from .semialg import EmptySampleError, SemialgebraicSet, sample_grid
from .sos import (
    QmCertificate,
    _contribution_rows,
    _multiplier_bases,
    expand_gram,
    monomials_up_to_degree,
    reconstruct_residual,
)


class InfeasibleAtLevelError(RuntimeError):
    """The margin SDP found no strict separator at this (degree, level)."""

    def __init__(self, degree: int, level: int, slack: float):
        super().__init__(
            f"no separator of degree {degree} at level {level}: margin {slack:.6g}"
        )
        self.degree = degree
        self.level = level
        self.slack = slack


class HierarchyExhaustedError(RuntimeError):
    """Every attempted (degree, level) pair failed; carries the attempt trace."""

    def __init__(self, trace: list):
        super().__init__(
            f"hierarchy exhausted after {len(trace)} attempts; "
            "the sets may intersect or the degree/level caps are too small"
        )
        self.trace = trace


class SeparatorSolverError(RuntimeError):
    """The underlying SDP solve ended in a non-optimal status."""

    def __init__(self, status: SdpStatus, detail: str = ""):
        super().__init__(f"SDP solver failed with status {status.value}. {detail}".strip())
        self.status = status


@dataclass(frozen=True)
class SeparatorOptions:
    margin_tol: float = 1e-6
    solver_tol: float = 1e-8
    max_iter: int = 200
    ball_constraint: bool = True


@dataclass(frozen=True)
class SeparatorProblem:
    A: SemialgebraicSet
    B: SemialgebraicSet
    p_degree: int
    level: int
    options: SeparatorOptions = field(default_factory=SeparatorOptions)

    def __post_init__(self):
        if self.A.n != self.B.n:
            raise ValueError("sets must share the ambient dimension")
        if self.p_degree < 0:
            raise ValueError("p_degree must be non-negative")
        gens_a, gens_b = _augmented_generators(self.A, self.B, self.options)
        min_level = max(
            [self.p_degree]
            + [g.total_degree() for g in gens_a]
            + [h.total_degree() for h in gens_b]
        )
        if self.level < min_level:
            raise ValueError(f"level {self.level} is below the minimum {min_level}")


@dataclass
class SeparatorResult:
    p: Polynomial
    cert_A: QmCertificate
    cert_B: QmCertificate
    slack: float
    level: int
    p_degree: int
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SeparationReport:
    """Grid check of the pointwise separation contract."""

    min_on_A: float
    max_on_B: float
    witness_A: tuple
    witness_B: tuple
    count_A: int
    count_B: int
    resolution: int
    tol: float
    passed: bool


def _augmented_generators(a, b, options):
    gens_a = list(a.generators)
    gens_b = list(b.generators)
    if options.ball_constraint:
        ball = Polynomial.ball_generator(a.n)
        gens_a.append(ball)
        gens_b.append(ball)
    return gens_a, gens_b


def _assemble_separation(n, gens_a, gens_b, degree, level):
    """Joint margin SDP for the two memberships with p eliminated.

    Writing S_g = s_0 + sum s_i g_i and S_h likewise, the two memberships
    p - 1 - t = S_g and -p - t = S_h are equivalent to the rows

        [S_g + S_h]_alpha + (1 + 2t) [alpha = 0] = 0     for deg(alpha) <= l,
        [S_g]_alpha = 0                                  for d < deg(alpha) <= l,

    after which p is recovered as 1 + t + S_g truncated to degree d.  The
    margin is encoded as t = w - u with two 1x1 blocks and the row w = 1,
    which caps t at 1 (a separator certified with any margin rescales to
    margin 1) and keeps the problem bounded.
    """
    mults_a = [Polynomial.constant(n, 1.0)] + list(gens_a)
    mults_b = [Polynomial.constant(n, 1.0)] + list(gens_b)
    bases_a = _multiplier_bases(n, mults_a, level)
    bases_b = _multiplier_bases(n, mults_b, level)
    contrib_a = _contribution_rows(mults_a, bases_a)
    contrib_b = _contribution_rows(mults_b, bases_b)

    num_a = len(mults_a)
    block_sizes = (1, 1) + tuple(len(b2) for b2 in bases_a) + tuple(len(b2) for b2 in bases_b)
    num_blocks = len(block_sizes)
    first_a = 2
    first_b = 2 + num_a

    constraints = []
    zero = (0,) * n
    for alpha in monomials_up_to_degree(n, level):
        mats: list = [None] * num_blocks
        for i, mat in contrib_a.get(alpha, {}).items():
            mats[first_a + i] = mat
        for i, mat in contrib_b.get(alpha, {}).items():
            mats[first_b + i] = mat
        rhs = 0.0
        if alpha == zero:
            mats[0] = np.array([[2.0]])
            mats[1] = np.array([[-2.0]])
            rhs = -1.0
        if any(m is not None for m in mats):
            constraints.append((mats, rhs))
    for alpha in monomials_up_to_degree(n, level):
        if sum(alpha) <= degree or alpha not in contrib_a:
            continue
        mats = [None] * num_blocks
        for i, mat in contrib_a[alpha].items():
            mats[first_a + i] = mat
        constraints.append((mats, 0.0))
    norm_row: list = [None] * num_blocks
    norm_row[0] = np.array([[1.0]])
    constraints.append((norm_row, 1.0))

    objective = [np.zeros((s, s)) for s in block_sizes]
    objective[0][0, 0] = 1.0
    objective[1][0, 0] = -1.0
    problem = SdpProblem(block_sizes, objective, constraints)
    return problem, bases_a, bases_b, first_a, first_b


def solve_fixed_level(prob: SeparatorProblem) -> SeparatorResult:
    """Solve the joint margin SDP at the problem's fixed degree and level."""
    opts = prob.options
    n = prob.A.n
    gens_a, gens_b = _augmented_generators(prob.A, prob.B, opts)
    sdp_problem, bases_a, bases_b, first_a, first_b = _assemble_separation(
        n, gens_a, gens_b, prob.p_degree, prob.level
    )
    sol = sdp_solve(sdp_problem, tol=opts.solver_tol, max_iter=opts.max_iter)
    if sol.status is not SdpStatus.OPTIMAL:
        raise SeparatorSolverError(sol.status, sol.diagnostics.get("message", ""))
    t = float(sol.X[0][0, 0] - sol.X[1][0, 0])
    if t <= opts.margin_tol:
        raise InfeasibleAtLevelError(prob.p_degree, prob.level, t)

    grams_a = tuple(sol.X[first_a + i] for i in range(len(bases_a)))
    grams_b = tuple(sol.X[first_b + i] for i in range(len(bases_b)))
    s_g = Polynomial.zero(n)
    for f, gram, bas in zip([Polynomial.constant(n, 1.0)] + list(gens_a), grams_a, bases_a):
        s_g = s_g + expand_gram(gram, bas) * f
    p_full = s_g + Polynomial.constant(n, 1.0 + t)
    p = p_full.truncate(prob.p_degree)
    truncation_error = p_full.max_coeff_diff(p)

    cert_a = QmCertificate(tuple(gens_a), grams_a, tuple(bases_a), prob.level)
    cert_b = QmCertificate(tuple(gens_b), grams_b, tuple(bases_b), prob.level)
    return SeparatorResult(
        p=p,
        cert_A=cert_a,
        cert_B=cert_b,
        slack=t,
        level=prob.level,
        p_degree=prob.p_degree,
        diagnostics={
            "sdp_iterations": sol.iterations,
            "sdp_primal_residual": sol.primal_residual,
            "sdp_dual_residual": sol.dual_residual,
            "sdp_gap": sol.gap,
            "block_sizes": list(sdp_problem.block_sizes),
            "num_constraints": sdp_problem.num_constraints,
            "truncation_error": truncation_error,
            "ball_constraint": opts.ball_constraint,
        },
    )


def run_hierarchy(
    a: SemialgebraicSet,
    b: SemialgebraicSet,
    d_max: int,
    l_max: int,
    options: SeparatorOptions = SeparatorOptions(),
) -> SeparatorResult:
    """Sweep degrees d = 1..d_max and even levels up to l_max; first success wins.

    For each degree the level starts at max(d, generator degrees) rounded up
    to even and steps by 2 (odd levels do not change the Gram half-degrees).
    Raises HierarchyExhaustedError with the full attempt trace if nothing
    separates, which signals intersecting sets or caps that are too small.
    """
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    if l_max < d_max:
        raise ValueError("l_max must be at least d_max")
    gens_a, gens_b = _augmented_generators(a, b, options)
    gen_degree = max(g.total_degree() for g in gens_a + gens_b)

    trace = []
    for d in range(1, d_max + 1):
        level = max(d, gen_degree)
        level += level % 2
        while level <= l_max:
            attempt = {"degree": d, "level": level}
            try:
                result = solve_fixed_level(
                    SeparatorProblem(A=a, B=b, p_degree=d, level=level, options=options)
                )
            except InfeasibleAtLevelError as err:
                attempt.update(outcome="no_margin", slack=err.slack)
                trace.append(attempt)
            except SeparatorSolverError as err:
                attempt.update(outcome="solver_error", detail=str(err))
                trace.append(attempt)
            else:
                attempt.update(outcome="separated", slack=result.slack)
                trace.append(attempt)
                result.diagnostics["trace"] = trace
                return result
            level += 2
    raise HierarchyExhaustedError(trace)


def verify_separation(
    p: Polynomial,
    a: SemialgebraicSet,
    b: SemialgebraicSet,
    resolution: int,
    tol: float,
    budget: int = DEFAULT_GRID_BUDGET,
) -> SeparationReport:
    """Grid check: p >= 1 - tol on samples of A and p <= tol on samples of B."""
    cloud_a = sample_grid(a, resolution, budget)
    cloud_b = sample_grid(b, resolution, budget)
    if len(cloud_a) == 0:
        raise EmptySampleError(f"first set has no sample points at resolution {resolution}")
    if len(cloud_b) == 0:
        raise EmptySampleError(f"second set has no sample points at resolution {resolution}")
    vals_a = p.evaluate_many(cloud_a.points)
    vals_b = p.evaluate_many(cloud_b.points)
    i_min = int(np.argmin(vals_a))
    i_max = int(np.argmax(vals_b))
    min_a = float(vals_a[i_min])
    max_b = float(vals_b[i_max])
    return SeparationReport(
        min_on_A=min_a,
        max_on_B=max_b,
        witness_A=tuple(float(v) for v in cloud_a.points[i_min]),
        witness_B=tuple(float(v) for v in cloud_b.points[i_max]),
        count_A=len(cloud_a),
        count_B=len(cloud_b),
        resolution=resolution,
        tol=tol,
        passed=bool(min_a >= 1.0 - tol and max_b <= tol),
    )


def certificate_residuals(result: SeparatorResult) -> tuple:
    """Reconstruction residuals of the two certified identities."""
    n = result.p.n
    target_a = result.p - Polynomial.constant(n, 1.0 + result.slack)
    target_b = (-result.p) - Polynomial.constant(n, result.slack)
    return (
        reconstruct_residual(result.cert_A, target_a),
        reconstruct_residual(result.cert_B, target_b),
    )


def verify_certificate(result: SeparatorResult, tol: float) -> bool:
    """Certificate validity: small residuals, near-PSD Grams, positive slack."""
    if result.slack <= 0.0:
        return False
    res_a, res_b = certificate_residuals(result)
    if res_a > tol or res_b > tol:
        return False
    min_eig = min(result.cert_A.min_gram_eigenvalue(), result.cert_B.min_gram_eigenvalue())
    return min_eig >= -tol
