"""Truncated quadratic-module membership compiled to semidefinite feasibility.

A polynomial q belongs to the degree-l truncated quadratic module of
generators f_1..f_t when q = s_0 + sum_i s_i f_i with every multiplier s_i a
sum of squares, deg(s_0) <= l and deg(s_i f_i) <= l.  Each s_i is
parameterized by a Gram matrix over the monomial basis of half degree
floor((l - deg f_i)/2), turning membership into a block SDP with one linear
constraint per monomial of degree <= l.

Feasibility is always solved with a margin: the Gram blocks are shifted by
t*I and t is maximized subject to t <= 1.  A positive optimum certifies
strict feasibility; a negative optimum certifies infeasibility at this level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poly import Polynomial
from .sdp import SdpProblem, SdpSolution, SdpStatus, min_eigenvalue

DEFAULT_SLACK_TOL = 1e-6


class NegativeSlackError(RuntimeError):
    """No strict quadratic-module certificate exists at this level."""

    def __init__(self, message: str, slack: float | None = None):
        super().__init__(message)
        self.slack = slack


class LevelTooSmallError(ValueError):
    """The requested level cannot accommodate the target or a generator."""


def monomials_up_to_degree(n: int, degree: int) -> list:
    """All exponent tuples of total degree <= degree, graded lex (x1 major)."""

    def fixed(total: int, nvars: int):
        if nvars == 1:
            yield (total,)
            return
        for k in range(total, -1, -1):
            for rest in fixed(total - k, nvars - 1):
                yield (k,) + rest

    out = []
    for d in range(degree + 1):
        out.extend(fixed(d, n))
    return out


@dataclass(frozen=True)
class MonomialBasis:
    """Ordered monomial basis of R[x]_d used to parameterize one Gram matrix."""

    n: int
    half_degree: int
    elements: tuple

    def __len__(self) -> int:
        return len(self.elements)


def basis(n: int, half_degree: int) -> MonomialBasis:
    if half_degree < 0:
        raise ValueError(f"half degree must be non-negative, got {half_degree}")
    return MonomialBasis(n, half_degree, tuple(monomials_up_to_degree(n, half_degree)))


@dataclass(frozen=True)
class QmCertificate:
    """Explicit quadratic-module membership witness.

    ``grams[0]`` is the Gram matrix of the free SOS multiplier s_0 (for the
    implicit generator 1); ``grams[i]`` pairs with ``generators[i-1]``.
    """

    generators: tuple
    grams: tuple
    bases: tuple
    level: int

    def multipliers(self) -> list:
        """The SOS multipliers s_0..s_t expanded to polynomials."""
        return [expand_gram(g, b) for g, b in zip(self.grams, self.bases)]

    def min_gram_eigenvalue(self) -> float:
        return min(min_eigenvalue(g) for g in self.grams)


def expand_gram(gram: np.ndarray, bas: MonomialBasis) -> Polynomial:
    """The polynomial z(x)^T G z(x) over the basis monomials z."""
    g = np.asarray(gram, dtype=float)
    k = len(bas)
    if g.shape != (k, k):
        raise ValueError(f"Gram matrix shape {g.shape} does not match basis size {k}")
    terms: dict = {}
    elems = bas.elements
    for a in range(k):
        for b2 in range(k):
            if g[a, b2] == 0.0:
                continue
            mono = tuple(x + y for x, y in zip(elems[a], elems[b2]))
            terms[mono] = terms.get(mono, 0.0) + g[a, b2]
    return Polynomial(bas.n, terms)


@dataclass
class MembershipAssembly:
    """Index maps tying SDP blocks and rows back to the membership statement.

    Block 0 is the 1x1 normalization block w (pinned to 1), block 1 the 1x1
    slack block u; the shifted Gram of multiplier i lives in block 2 + i and
    the margin is t = w - u.  Row k (before the final normalization row)
    matches the coefficient of ``row_monomials[k]``.
    """

    target: Polynomial
    generators: tuple
    bases: tuple
    level: int
    row_monomials: list
    norm_block: int = 0
    slack_block: int = 1
    first_gram_block: int = 2


def _multiplier_bases(n: int, multipliers, level: int):
    out = []
    for f in multipliers:
        d = f.total_degree()
        if d > level:
            raise LevelTooSmallError(f"level {level} is below generator degree {d}")
        out.append(basis(n, (level - d) // 2))
    return out


def _contribution_rows(multipliers, bases_list):
    """Per-monomial constraint matrices of sum_i z_i^T G_i z_i * f_i.

    Returns dict: monomial -> {multiplier index -> symmetric matrix}; entry
    (a, b) of matrix i is the coefficient with which G_i[a, b] feeds the
    monomial's coefficient.
    """
    rows: dict = {}
    for i, (f, bas) in enumerate(zip(multipliers, bases_list)):
        elems = bas.elements
        k = len(elems)
        for a in range(k):
            for b2 in range(a, k):
                pair_mono = tuple(x + y for x, y in zip(elems[a], elems[b2]))
                for beta, coeff in f.terms.items():
                    alpha = tuple(x + y for x, y in zip(pair_mono, beta))
                    mat = rows.setdefault(alpha, {}).setdefault(i, np.zeros((k, k)))
                    mat[a, b2] += coeff
                    if a != b2:
                        mat[b2, a] += coeff
    return rows


def assemble_membership(target: Polynomial, generators, level: int):
    """Compile ``target in Q_level(generators)`` into a max-margin SDP.

    Returns (SdpProblem, MembershipAssembly).  The per-monomial rows carry
    the target coefficients as right-hand sides exactly; one extra row pins
    the normalization block to 1 so the margin t = w - u is capped at 1.
    """
    n = target.n
    gens = tuple(generators)
    for g in gens:
        if g.n != n:
            raise ValueError("generator dimension mismatch")
    if target.total_degree() > level:
        raise LevelTooSmallError(
            f"level {level} is below the target degree {target.total_degree()}"
        )
    multipliers = [Polynomial.constant(n, 1.0)] + list(gens)
    bases_list = _multiplier_bases(n, multipliers, level)
    contrib = _contribution_rows(multipliers, bases_list)

    block_sizes = (1, 1) + tuple(len(b) for b in bases_list)
    num_blocks = len(block_sizes)
    row_monomials = monomials_up_to_degree(n, level)

    constraints = []
    for alpha in row_monomials:
        mats: list = [None] * num_blocks
        tr_alpha = 0.0
        for i, mat in contrib.get(alpha, {}).items():
            mats[2 + i] = mat
            tr_alpha += float(np.trace(mat))
        if tr_alpha != 0.0:
            mats[0] = np.array([[tr_alpha]])
            mats[1] = np.array([[-tr_alpha]])
        constraints.append((mats, target.terms.get(alpha, 0.0)))
    norm_row: list = [None] * num_blocks
    norm_row[0] = np.array([[1.0]])
    constraints.append((norm_row, 1.0))

    objective = [np.zeros((s, s)) for s in block_sizes]
    objective[0][0, 0] = 1.0
    objective[1][0, 0] = -1.0

    problem = SdpProblem(block_sizes, objective, constraints)
    maps = MembershipAssembly(
        target=target,
        generators=gens,
        bases=tuple(bases_list),
        level=level,
        row_monomials=row_monomials,
    )
    return problem, maps


def membership_slack(sol: SdpSolution, maps: MembershipAssembly) -> float:
    """The achieved margin t = w - u; positive means strict membership."""
    return float(sol.X[maps.norm_block][0, 0] - sol.X[maps.slack_block][0, 0])


def extract_certificate(
    sol: SdpSolution, maps: MembershipAssembly, slack_tol: float = DEFAULT_SLACK_TOL
) -> QmCertificate:
    """Read the Gram matrices out of a solved membership SDP.

    Raises NegativeSlackError when the max-margin value falls below
    -slack_tol (no certificate at this level) or the solve was infeasible.
    """
    if sol.status is SdpStatus.INFEASIBLE:
        raise NegativeSlackError("membership SDP is infeasible at this level")
    if sol.status is not SdpStatus.OPTIMAL:
        raise RuntimeError(f"membership SDP did not converge: {sol.status.value}")
    t = membership_slack(sol, maps)
    if t < -slack_tol:
        raise NegativeSlackError(
            f"no strict certificate at level {maps.level}: margin {t:.3e}", slack=t
        )
    shift = max(t, 0.0)
    grams = []
    for i, bas in enumerate(maps.bases):
        block = sol.X[maps.first_gram_block + i]
        grams.append(block + shift * np.eye(len(bas)))
    return QmCertificate(
        generators=maps.generators,
        grams=tuple(grams),
        bases=maps.bases,
        level=maps.level,
    )


def reconstruct_residual(cert: QmCertificate, target: Polynomial) -> float:
    """Coefficient-wise max-norm of target - (s_0 + sum_i s_i f_i)."""
    n = target.n
    total = Polynomial.zero(n)
    mults = [Polynomial.constant(n, 1.0)] + list(cert.generators)
    for f, gram, bas in zip(mults, cert.grams, cert.bases):
        total = total + expand_gram(gram, bas) * f
    return target.max_coeff_diff(total)
