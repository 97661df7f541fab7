"""Iterative schemes built from the atomic projectors.

Two engines live here: plain composition of projectors (whose iterates
either reach the intersection projection exactly, converge linearly
with the cosine of the normal angle as the factor, or land at a
feasible point in one step, depending on the geometry), and Dykstra's
algorithm with its correction buffer, which converges to the
intersection projection for any finite family of closed convex sets.

:func:`verify_bam` machine-checks the best-approximation-mapping
contract for a candidate composition: the fixed-set projection must be
invariant along the orbit and the distance to it must contract at the
supplied geometric rate.  :func:`predict_behavior` is the lookup table
from pair classification to expected behavior.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EmptySet, ZeroNormal
from .linalg import PairClass, PairTag, as_vector, classify_pair
from .sets import Halfspace, Hyperplane, LinearSet, is_empty
from .atomic import project_onto

STEP_TOL = 1e-12

RATE_SLACK = 1e-9

FIXPOINT_TOL = 1e-8


class StopReason(enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERATIONS = "MaxIterations"


@dataclass
class IterationTrace:
    """Sequence of iterates, optionally with errors against a reference.

    ``iterates[0]`` is the starting point; ``errors`` is present exactly
    when a reference projection was supplied and then matches the
    iterates in length.
    """

    iterates: list[np.ndarray]
    errors: list[float] | None
    stop_reason: StopReason

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]

    def write_csv(self, path) -> None:
        """Write rows ``k, x0..x{n-1}, err`` (err blank without a reference)."""
        dim = self.iterates[0].shape[0]
        header = ["k"] + [f"x{i}" for i in range(dim)] + ["err"]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for k, point in enumerate(self.iterates):
                err = "" if self.errors is None else f"{self.errors[k]:.17g}"
                writer.writerow([k] + [f"{c:.17g}" for c in point] + [err])


def compose_iterate(
    projectors: Sequence[Callable[[np.ndarray], np.ndarray]],
    x,
    max_k: int,
    reference=None,
) -> IterationTrace:
    """Iterate the composition of the given projectors.

    One trace entry per application of the full composition (first
    projector applied first).  Stops early once a full step moves less
    than ``STEP_TOL * (1 + |x0|)``.
    """
    if max_k < 1:
        raise ValueError("max_k must be at least 1")
    if len(projectors) == 0:
        raise ValueError("need at least one projector")
    x0 = as_vector(x)
    ref = None if reference is None else as_vector(reference)
    threshold = STEP_TOL * (1.0 + float(np.linalg.norm(x0)))
    iterates = [x0.copy()]
    stop = StopReason.MAX_ITERATIONS
    current = x0
    for _ in range(max_k):
        nxt = current
        for proj in projectors:
            nxt = proj(nxt)
        iterates.append(nxt)
        step = float(np.linalg.norm(nxt - current))
        current = nxt
        if step <= threshold:
            stop = StopReason.CONVERGED
            break
    errors = None
    if ref is not None:
        errors = [float(np.linalg.norm(p - ref)) for p in iterates]
    return IterationTrace(iterates, errors, stop)


@dataclass
class DykstraState:
    """Current iterate plus one pending correction per constraint set."""

    x: np.ndarray
    corrections: list[np.ndarray]
    k: int = 0

    @classmethod
    def initial(cls, x: np.ndarray, num_sets: int) -> "DykstraState":
        return cls(x.copy(), [np.zeros_like(x) for _ in range(num_sets)], 0)

    def sweep(self, sets: Sequence[LinearSet]) -> None:
        """One full cycle: re-add each set's correction, project, update it."""
        for i, s in enumerate(sets):
            shifted = self.x + self.corrections[i]
            projected = project_onto(s, shifted)
            self.corrections[i] = shifted - projected
            self.x = projected
            self.k += 1


def dykstra(
    sets: Sequence[LinearSet],
    x,
    max_sweeps: int = 10_000,
    tol: float = 1e-10,
    reference=None,
) -> IterationTrace:
    """Dykstra's algorithm over a finite family of linear sets.

    Corrections start at zero and are retained for hyperplanes as well
    as halfspaces.  The trace records one entry per full sweep and the
    run stops when consecutive sweep iterates differ by at most ``tol``
    (per-step displacement can vanish spuriously mid-cycle).
    """
    if len(sets) == 0:
        raise ValueError("need at least one set")
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be at least 1")
    for s in sets:
        if is_empty(s):
            raise EmptySet("a constraint set is empty")
    x0 = as_vector(x)
    ref = None if reference is None else as_vector(reference)
    state = DykstraState.initial(x0, len(sets))
    iterates = [x0.copy()]
    stop = StopReason.MAX_ITERATIONS
    for _ in range(max_sweeps):
        previous = state.x
        state.sweep(sets)
        iterates.append(state.x.copy())
        if float(np.linalg.norm(state.x - previous)) <= tol:
            stop = StopReason.CONVERGED
            break
    errors = None
    if ref is not None:
        errors = [float(np.linalg.norm(p - ref)) for p in iterates]
    return IterationTrace(iterates, errors, stop)


def rate_gamma(u1, u2) -> float:
    """Cosine of the angle between two nonzero normals.

    This is the linear convergence factor of the composed projections;
    it is below 1 exactly when the normals are independent.
    """
    v1 = as_vector(u1)
    v2 = as_vector(u2)
    n1 = float(np.linalg.norm(v1))
    n2 = float(np.linalg.norm(v2))
    if n1 == 0.0 or n2 == 0.0:
        raise ZeroNormal("rate constant requires nonzero normals")
    pc = classify_pair(v1, v2)
    return pc.gamma


@dataclass(frozen=True)
class BamSampleResult:
    fixpoint_identity_holds: bool
    rate_bound_holds: bool


@dataclass(frozen=True)
class BamReport:
    """Per-sample outcome of the best-approximation-mapping checks."""

    results: tuple[BamSampleResult, ...]
    gamma: float
    k_max: int

    @property
    def all_hold(self) -> bool:
        return all(
            r.fixpoint_identity_holds and r.rate_bound_holds for r in self.results
        )


def verify_bam(
    composition: Callable[[np.ndarray], np.ndarray],
    fix_projector: Callable[[np.ndarray], np.ndarray],
    gamma: float,
    samples: Sequence,
    k_max: int,
    fixpoint_tol: float = FIXPOINT_TOL,
    rate_slack: float = RATE_SLACK,
) -> BamReport:
    """Check the best-approximation-mapping contract on sample points.

    For every sample x and every k from 1 to k_max, the projection of
    the k-th iterate onto the fixed set must equal the projection of x
    (within ``fixpoint_tol``), and the distance of the k-th iterate to
    that projection must be at most ``gamma**k`` times the starting
    distance plus ``rate_slack``.  Failures are reported, not raised.
    """
    if not 0.0 <= gamma < 1.0:
        raise ValueError("gamma must lie in [0, 1)")
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    results = []
    for sample in samples:
        x0 = as_vector(sample)
        target = fix_projector(x0)
        base = float(np.linalg.norm(x0 - target))
        fix_ok = True
        rate_ok = True
        current = x0
        for k in range(1, k_max + 1):
            current = composition(current)
            if float(np.linalg.norm(fix_projector(current) - target)) > fixpoint_tol:
                fix_ok = False
            err = float(np.linalg.norm(current - target))
            if err > gamma**k * base + rate_slack:
                rate_ok = False
        results.append(BamSampleResult(fix_ok, rate_ok))
    return BamReport(tuple(results), gamma, k_max)


class BehaviorTag(enum.Enum):
    EXACT_COMPOSITION = "ExactComposition"
    LINEAR_RATE_BAM = "LinearRateBAM"
    ONE_STEP_FEASIBLE = "OneStepFeasible"
    EXACT_BOTH_ORDERS = "ExactBothOrders"


@dataclass(frozen=True)
class BehaviorCase:
    """Predicted behavior of a composed pair of projectors."""

    tag: BehaviorTag
    gamma: float | None = None


def _kind_of(marker) -> type:
    kind = marker if isinstance(marker, type) else type(marker)
    if kind not in (Hyperplane, Halfspace):
        raise TypeError("markers must be Hyperplane or Halfspace (types or instances)")
    return kind


def predict_behavior(kind1, kind2, pair_class: PairClass) -> BehaviorCase:
    """Expected behavior of the composition, from set kinds and pair class.

    Two halfspaces: dependent or orthogonal normals make the composition
    equal the intersection projection; a negative cosine gives a linear
    rate; a positive cosine reaches a feasible point in one step.  Any
    pair involving a hyperplane: dependent or orthogonal normals make
    both composition orders exact, anything else converges linearly.
    """
    k1 = _kind_of(kind1)
    k2 = _kind_of(kind2)
    dependent = pair_class.linearly_dependent
    orthogonal = pair_class.tag is PairTag.INDEPENDENT_ORTHOGONAL
    gamma = pair_class.gamma
    if k1 is Halfspace and k2 is Halfspace:
        if dependent or orthogonal:
            return BehaviorCase(BehaviorTag.EXACT_COMPOSITION)
        if pair_class.tag is PairTag.INDEPENDENT_NEGATIVE:
            return BehaviorCase(BehaviorTag.LINEAR_RATE_BAM, gamma)
        return BehaviorCase(BehaviorTag.ONE_STEP_FEASIBLE)
    if dependent or orthogonal:
        return BehaviorCase(BehaviorTag.EXACT_BOTH_ORDERS)
    return BehaviorCase(BehaviorTag.LINEAR_RATE_BAM, gamma)
