"""Closed-form projectors onto intersections of linear sets.

Three intersections admit explicit formulas:

* finitely many hyperplanes, via a Gram solve on an independent
  subfamily of the normals;
* two halfspaces, split into a dependent-normal dispatch (the
  intersection collapses to the whole space, one of the sets, a single
  halfspace with a merged normal, a slab, or nothing) and an
  independent-normal dispatch over four point regions;
* a hyperplane and a halfspace, where the multiplier on the halfspace
  normal is either strictly positive (both boundaries active) or zero
  (the plane projection already satisfies the halfspace).

Every projector returns a :class:`ProjectionBreakdown` carrying the
projected point together with the multipliers on the normals it used,
so the result can be verified independently through the KKT residuals
in :mod:`polyproj.oracle`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DependentNormals, DimensionMismatch, EmptySet
from .linalg import DEPENDENCE_TOL, PairTag, as_vector, classify_pair, solve_gram
from .sets import Halfspace, Hyperplane, reduce_hyperplane_system, Feasibility

ILL_CONDITIONED_GAMMA = 1.0 - 1e-6


class Region(enum.Enum):
    """Which multiplier branch applies at a query point.

    INSIDE_BOTH / C1 / C2 / C3 partition the space for a halfspace
    pair with independent normals; IN_C / NOT_IN_C split it for a
    hyperplane-halfspace pair.
    """

    INSIDE_BOTH = "InsideBoth"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    IN_C = "InC"
    NOT_IN_C = "NotInC"


@dataclass(frozen=True)
class ProjectionBreakdown:
    """A projected point plus the multipliers that produce it.

    The invariant ``point == x - sum(coefficients[i] * normals[i])``
    holds to machine precision; halfspace multipliers are nonnegative.
    ``case`` labels the dependent-normal branch taken (None on the
    independent path), and ``ill_conditioned`` flags independent pairs
    whose normals are within 1e-6 of dependence: the formulas still
    evaluate but the 2x2 determinant is vanishing.
    """

    point: np.ndarray
    coefficients: np.ndarray
    normals: tuple[np.ndarray, ...]
    region: Region | None = None
    case: str | None = None
    ill_conditioned: bool = False

    def reconstruction(self, x) -> np.ndarray:
        """Recompute the point from x and the recorded multipliers."""
        p = as_vector(x).copy()
        for c, u in zip(self.coefficients, self.normals):
            p -= c * u
        return p


def _checked(u1: np.ndarray, u2: np.ndarray, x) -> np.ndarray:
    xv = as_vector(x)
    if xv.shape[0] != u1.shape[0] or u1.shape[0] != u2.shape[0]:
        raise DimensionMismatch("point and normals must share one dimension")
    return xv


def _pair_terms(s1_set, s2_set, xv):
    u1, u2 = s1_set.u, s2_set.u
    a1 = float(np.dot(xv, u1)) - s1_set.eta
    a2 = float(np.dot(xv, u2)) - s2_set.eta
    q = float(np.dot(u1, u2))
    n1sq = float(np.dot(u1, u1))
    n2sq = float(np.dot(u2, u2))
    return a1, a2, q, n1sq, n2sq


def _region_of(a1, a2, q, n1sq, n2sq) -> Region:
    # Ties fall to the earlier, non-strict branch; the four cases
    # partition the space when the normals are independent.
    if a1 <= 0.0 and a2 <= 0.0:
        return Region.INSIDE_BOTH
    if a1 > 0.0 and n1sq * a2 <= q * a1:
        return Region.C1
    if a2 > 0.0 and n2sq * a1 <= q * a2:
        return Region.C2
    return Region.C3


def classify_region_halfspace_pair(
    w1: Halfspace, w2: Halfspace, x, tol: float = DEPENDENCE_TOL
) -> Region:
    """Locate a point relative to a halfspace pair with independent normals.

    Raises DependentNormals when the pair is (numerically) dependent;
    the dependent dispatch inside :func:`project_halfspace_pair` covers
    that geometry instead.
    """
    xv = _checked(w1.u, w2.u, x)
    pc = classify_pair(w1.u, w2.u, tol)
    if pc.linearly_dependent:
        raise DependentNormals("region labels require independent normals")
    return _region_of(*_pair_terms(w1, w2, xv))


def _halfspace_step(u: np.ndarray, eta: float, xv: np.ndarray):
    """One-sided projection step; returns (point, multiplier >= 0)."""
    value = float(np.dot(xv, u)) - eta
    if value > 0.0:
        t = value / float(np.dot(u, u))
        return xv - t * u, t
    return xv.copy(), 0.0


def _dependent_pair(w1: Halfspace, w2: Halfspace, xv, pc) -> ProjectionBreakdown:
    u1, u2 = w1.u, w2.u
    n1 = float(np.linalg.norm(u1))
    n2 = float(np.linalg.norm(u2))

    if n1 == 0.0 and n2 == 0.0:
        if min(w1.eta, w2.eta) < 0.0:
            raise EmptySet("empty intersection")
        return ProjectionBreakdown(
            xv.copy(), np.zeros(2), (u1, u2), case="whole_space"
        )
    if n2 == 0.0:
        if w2.eta < 0.0:
            raise EmptySet("empty intersection")
        point, t = _halfspace_step(u1, w1.eta, xv)
        return ProjectionBreakdown(
            point, np.array([t, 0.0]), (u1, u2), case="first_set_only"
        )
    if n1 == 0.0:
        if w1.eta < 0.0:
            raise EmptySet("empty intersection")
        point, t = _halfspace_step(u2, w2.eta, xv)
        return ProjectionBreakdown(
            point, np.array([0.0, t]), (u1, u2), case="second_set_only"
        )

    if pc.tag is PairTag.DEPENDENT_POSITIVE:
        # The intersection is a single halfspace whose normal merges the
        # pair; the lone multiplier refers to that merged normal.
        merged_u = n2 * u1
        merged_eta = min(w1.eta * n2, w2.eta * n1)
        point, t = _halfspace_step(merged_u, merged_eta, xv)
        return ProjectionBreakdown(
            point, np.array([t]), (merged_u,), case="merged_halfspace"
        )

    # Opposite normals: a slab, or nothing when the offsets contradict.
    if w1.eta * n2 + w2.eta * n1 < 0.0:
        raise EmptySet("empty intersection")
    a1 = float(np.dot(xv, u1)) - w1.eta
    a2 = float(np.dot(xv, u2)) - w2.eta
    if a1 > 0.0:
        t = a1 / (n1 * n1)
        return ProjectionBreakdown(
            xv - t * u1, np.array([t, 0.0]), (u1, u2), case="slab"
        )
    if a2 > 0.0:
        t = a2 / (n2 * n2)
        return ProjectionBreakdown(
            xv - t * u2, np.array([0.0, t]), (u1, u2), case="slab"
        )
    return ProjectionBreakdown(xv.copy(), np.zeros(2), (u1, u2), case="slab")


def project_halfspace_pair(
    w1: Halfspace, w2: Halfspace, x, tol: float = DEPENDENCE_TOL
) -> ProjectionBreakdown:
    """Project onto the intersection of two halfspaces.

    Dependent normals dispatch over the collapsed geometries; for
    independent normals the point region picks the multipliers, which
    solve the 2x2 normal system in closed form on C3.  Raises EmptySet
    when the intersection is empty.
    """
    xv = _checked(w1.u, w2.u, x)
    pc = classify_pair(w1.u, w2.u, tol)
    if pc.linearly_dependent:
        return _dependent_pair(w1, w2, xv, pc)

    a1, a2, q, n1sq, n2sq = _pair_terms(w1, w2, xv)
    region = _region_of(a1, a2, q, n1sq, n2sq)
    flag = pc.gamma > ILL_CONDITIONED_GAMMA
    u1, u2 = w1.u, w2.u
    if region is Region.INSIDE_BOTH:
        g1, g2 = 0.0, 0.0
    elif region is Region.C1:
        g1, g2 = a1 / n1sq, 0.0
    elif region is Region.C2:
        g1, g2 = 0.0, a2 / n2sq
    else:
        det = n1sq * n2sq - q * q
        g1 = max((n2sq * a1 - q * a2) / det, 0.0)
        g2 = max((n1sq * a2 - q * a1) / det, 0.0)
    point = xv - g1 * u1 - g2 * u2
    return ProjectionBreakdown(
        point, np.array([g1, g2]), (u1, u2), region=region, ill_conditioned=flag
    )


def project_hyperplane_halfspace(
    h1: Hyperplane, w2: Halfspace, x, tol: float = DEPENDENCE_TOL
) -> ProjectionBreakdown:
    """Project onto the intersection of a hyperplane and a halfspace.

    With independent normals the intersection is never empty: the
    halfspace multiplier is strictly positive exactly when the plain
    plane projection violates the halfspace (region IN_C), and zero
    otherwise.  With dependent normals the intersection is the plane,
    the halfspace, or empty.
    """
    xv = _checked(h1.u, w2.u, x)
    pc = classify_pair(h1.u, w2.u, tol)
    u1, u2 = h1.u, w2.u

    if pc.linearly_dependent:
        n1 = float(np.linalg.norm(u1))
        n2 = float(np.linalg.norm(u2))
        if n1 == 0.0:
            if h1.eta != 0.0:
                raise EmptySet("empty intersection")
            if n2 == 0.0 and w2.eta < 0.0:
                raise EmptySet("empty intersection")
            if n2 == 0.0:
                point, t = xv.copy(), 0.0
            else:
                point, t = _halfspace_step(u2, w2.eta, xv)
            return ProjectionBreakdown(
                point, np.array([0.0, t]), (u1, u2), case="plane_is_whole_space"
            )
        if n2 == 0.0:
            if w2.eta < 0.0:
                raise EmptySet("empty intersection")
            xi1 = (float(np.dot(xv, u1)) - h1.eta) / (n1 * n1)
            return ProjectionBreakdown(
                xv - xi1 * u1,
                np.array([xi1, 0.0]),
                (u1, u2),
                case="halfspace_is_whole_space",
            )
        sign = 1.0 if pc.tag is PairTag.DEPENDENT_POSITIVE else -1.0
        if sign * h1.eta * n2 > w2.eta * n1:
            raise EmptySet("empty intersection")
        xi1 = (float(np.dot(xv, u1)) - h1.eta) / (n1 * n1)
        return ProjectionBreakdown(
            xv - xi1 * u1,
            np.array([xi1, 0.0]),
            (u1, u2),
            case="plane_inside_halfspace",
        )

    a1, a2, q, n1sq, n2sq = _pair_terms(h1, w2, xv)
    flag = pc.gamma > ILL_CONDITIONED_GAMMA
    active = a2 * n1sq - a1 * q
    if active > 0.0:
        det = n1sq * n2sq - q * q
        xi1 = (a1 * n2sq - a2 * q) / det
        xi2 = active / det
        point = xv - xi1 * u1 - xi2 * u2
        return ProjectionBreakdown(
            point,
            np.array([xi1, xi2]),
            (u1, u2),
            region=Region.IN_C,
            ill_conditioned=flag,
        )
    xi1 = a1 / n1sq
    return ProjectionBreakdown(
        xv - xi1 * u1,
        np.array([xi1, 0.0]),
        (u1, u2),
        region=Region.NOT_IN_C,
        ill_conditioned=flag,
    )


def project_hyperplanes(
    planes: Sequence[Hyperplane], x, tol: float = DEPENDENCE_TOL
) -> ProjectionBreakdown:
    """Project onto the intersection of finitely many hyperplanes.

    The system is first pruned to an independent subfamily; redundant
    planes get zero multipliers, and an inconsistent system raises
    EmptySet.  On the retained planes the multipliers solve the Gram
    system of the normals.
    """
    if len(planes) == 0:
        raise ValueError("need at least one hyperplane")
    xv = as_vector(x)
    for p in planes:
        if p.dim != xv.shape[0]:
            raise DimensionMismatch("point and planes must share one dimension")
    reduced = reduce_hyperplane_system(planes, tol)
    if reduced.status is Feasibility.INFEASIBLE:
        raise EmptySet("empty intersection")
    coefficients = np.zeros(len(planes))
    normals = tuple(p.u for p in planes)
    if not reduced.retained:
        return ProjectionBreakdown(xv.copy(), coefficients, normals)
    rhs = [float(np.dot(xv, p.u)) - p.eta for p in reduced.retained]
    beta = solve_gram([p.u for p in reduced.retained], rhs)
    point = xv.copy()
    for b, p in zip(beta, reduced.retained):
        point -= b * p.u
    for b, idx in zip(beta, reduced.retained_indices):
        coefficients[idx] = b
    return ProjectionBreakdown(point, coefficients, normals)
