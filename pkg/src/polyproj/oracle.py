"""Independent ground truth for projections onto polyhedra.

:func:`oracle_project` minimizes ``|y - x|`` over an intersection of
hyperplanes and halfspaces by brute force: for every subset of the
inequality constraints it solves the equality-constrained problem
(all hyperplanes plus the chosen boundaries), then keeps the candidates
that are primal feasible with nonnegative multipliers on the chosen
boundaries.  Since the constraints are affine, the true projection is
always among the candidates, so the minimum-distance candidate is the
projection.  The enumeration is exponential by design; it exists to
check the closed-form projectors, not to replace them.

:func:`kkt_check` evaluates the first-order optimality residuals of a
proposed projection: stationarity of the quadratic objective, primal
feasibility, dual nonnegativity, and complementary slackness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptySet, SingularGram, TooManyConstraints
from .linalg import DEPENDENCE_TOL, as_vector, solve_gram
from .sets import (
    Feasibility,
    Halfspace,
    Hyperplane,
    LinearSet,
    is_empty,
    membership_bound,
    reduce_hyperplane_system,
)

MAX_INEQUALITIES = 20

KKT_TOL = 1e-9


@dataclass(frozen=True)
class KktCertificate:
    """First-order optimality residuals for a candidate projection.

    ``lam`` holds the inequality multipliers (input order of the
    halfspaces), ``beta`` the equality multipliers (input order of the
    hyperplanes).  The certificate is valid when every residual is at
    most ``tol`` and no inequality multiplier is below ``-tol``.
    """

    lam: np.ndarray
    beta: np.ndarray
    stationarity_residual: float
    feasibility_residual: float
    complementarity_residual: float
    tol: float
    valid: bool


def _split(sets: Sequence[LinearSet]):
    eq = [(i, s) for i, s in enumerate(sets) if isinstance(s, Hyperplane)]
    ineq = [(i, s) for i, s in enumerate(sets) if isinstance(s, Halfspace)]
    if len(eq) + len(ineq) != len(sets):
        raise TypeError("sets must be Hyperplane or Halfspace instances")
    return eq, ineq


def kkt_check(
    sets: Sequence[LinearSet],
    x,
    p,
    lam: Sequence[float],
    beta: Sequence[float],
    tol: float = KKT_TOL,
) -> KktCertificate:
    """Evaluate the KKT residuals of a proposed projection ``p`` of ``x``.

    Stationarity: |p - x + sum lam_i u_i + sum beta_j u_j|.
    Feasibility: worst constraint violation at p.
    Complementarity: max_i |lam_i * (<p,u_i> - eta_i)| over halfspaces.
    """
    xv = as_vector(x)
    pv = as_vector(p)
    if xv.shape != pv.shape:
        raise DimensionMismatch("x and p must share one dimension")
    eq, ineq = _split(sets)
    lam_arr = np.asarray(lam, dtype=float)
    beta_arr = np.asarray(beta, dtype=float)
    if lam_arr.shape != (len(ineq),):
        raise DimensionMismatch(
            f"expected {len(ineq)} inequality multipliers, got {lam_arr.shape}"
        )
    if beta_arr.shape != (len(eq),):
        raise DimensionMismatch(
            f"expected {len(eq)} equality multipliers, got {beta_arr.shape}"
        )
    for _, s in eq + ineq:
        if s.dim != xv.shape[0]:
            raise DimensionMismatch("sets and point must share one dimension")

    grad = pv - xv
    for mult, (_, s) in zip(lam_arr, ineq):
        grad = grad + mult * s.u
    for mult, (_, s) in zip(beta_arr, eq):
        grad = grad + mult * s.u
    stationarity = float(np.linalg.norm(grad))

    feasibility = 0.0
    for _, s in eq:
        feasibility = max(feasibility, abs(float(np.dot(pv, s.u)) - s.eta))
    for _, s in ineq:
        feasibility = max(feasibility, float(np.dot(pv, s.u)) - s.eta)
    feasibility = max(feasibility, 0.0)

    complementarity = 0.0
    for mult, (_, s) in zip(lam_arr, ineq):
        complementarity = max(
            complementarity, abs(mult * (float(np.dot(pv, s.u)) - s.eta))
        )

    valid = (
        stationarity <= tol
        and feasibility <= tol
        and complementarity <= tol
        and bool(np.all(lam_arr >= -tol))
    )
    return KktCertificate(
        lam=lam_arr,
        beta=beta_arr,
        stationarity_residual=stationarity,
        feasibility_residual=feasibility,
        complementarity_residual=complementarity,
        tol=tol,
        valid=valid,
    )


class OracleResult(NamedTuple):
    point: np.ndarray
    certificate: KktCertificate


def oracle_project(
    sets: Sequence[LinearSet],
    x,
    tol: float = KKT_TOL,
    dependence_tol: float = DEPENDENCE_TOL,
) -> OracleResult:
    """Brute-force projection onto an intersection of linear sets.

    Enumerates all subsets of the inequality constraints as candidate
    active sets; keeps candidates that are feasible for every
    constraint and whose active multipliers are nonnegative (within
    ``tol``); returns the minimum-distance candidate, breaking distance
    ties toward the lexicographically smallest active set.  Raises
    EmptySet when no subset yields a feasible point, which for affine
    constraints certifies an empty intersection.
    """
    xv = as_vector(x)
    for s in sets:
        if s.dim != xv.shape[0]:
            raise DimensionMismatch("sets and point must share one dimension")
        if is_empty(s):
            raise EmptySet("empty intersection")
    eq, ineq = _split(sets)
    m = len(ineq)
    if m > MAX_INEQUALITIES:
        raise TooManyConstraints(
            f"{m} inequality constraints exceed the enumeration limit of {MAX_INEQUALITIES}"
        )

    best: tuple[float, tuple[int, ...], np.ndarray, np.ndarray, np.ndarray] | None = None

    for mask in range(1 << m):
        active = tuple(i for i in range(m) if mask & (1 << i))
        planes = [s for _, s in eq] + [ineq[i][1].boundary() for i in active]
        ineq_offset = len(eq)
        if planes:
            reduced = reduce_hyperplane_system(planes, dependence_tol)
            if reduced.status is Feasibility.INFEASIBLE:
                continue
            if reduced.retained:
                rhs = [float(np.dot(xv, pl.u)) - pl.eta for pl in reduced.retained]
                try:
                    beta = solve_gram([pl.u for pl in reduced.retained], rhs)
                except SingularGram:
                    continue
                point = xv.copy()
                for b, pl in zip(beta, reduced.retained):
                    point -= b * pl.u
                multipliers = np.zeros(len(planes))
                for b, idx in zip(beta, reduced.retained_indices):
                    multipliers[idx] = b
            else:
                point = xv.copy()
                multipliers = np.zeros(len(planes))
        else:
            point = xv.copy()
            multipliers = np.zeros(0)

        lam_active = multipliers[ineq_offset:]
        if np.any(lam_active < -tol):
            continue

        feasible = True
        for _, s in eq:
            bound = membership_bound(s, point, tol)
            if abs(float(np.dot(point, s.u)) - s.eta) > bound:
                feasible = False
                break
        if feasible:
            for _, s in ineq:
                bound = membership_bound(s, point, tol)
                if float(np.dot(point, s.u)) - s.eta > bound:
                    feasible = False
                    break
        if not feasible:
            continue

        lam_full = np.zeros(m)
        for pos, i in enumerate(active):
            lam_full[i] = max(lam_active[pos], 0.0)
        beta_full = multipliers[: len(eq)]
        dist = float(np.linalg.norm(point - xv))
        key = (dist, active)
        if best is None or key < (best[0], best[1]):
            best = (dist, active, point, lam_full, beta_full)

    if best is None:
        raise EmptySet("empty intersection")

    _, _, point, lam_full, beta_full = best
    certificate = kkt_check(sets, xv, point, lam_full, beta_full, tol)
    return OracleResult(point, certificate)
