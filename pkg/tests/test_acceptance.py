"""Acceptance suite: one test per criterion, one pass/fail line each.

Every criterion runs at its stated tolerance on seeded instances; run
with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines as they pass.
"""

import time

import numpy as np
import pytest

from polyproj import (
    EmptySet,
    Halfspace,
    Hyperplane,
    Membership,
    Region,
    classify_pair,
    classify_region_halfspace_pair,
    compose_iterate,
    contains,
    dykstra,
    inner,
    kkt_check,
    max_independent_subset,
    oracle_project,
    project_halfspace,
    project_halfspace_pair,
    project_hyperplane,
    project_hyperplane_halfspace,
    project_hyperplanes,
    project_onto,
    rate_gamma,
    reduce_hyperplane_system,
    solve_gram,
    verify_bam,
)
from polyproj.sets import Feasibility
from polyproj.instances import (
    pair_of_normals,
    random_hyperplane_system,
    random_offset,
    random_point,
    unit_vector,
)

from helpers import (
    EMPTY_LD_PAIR_CASES,
    LD_PAIR_CASES,
    ld_pair_case,
    li_halfspace_pair,
    plane_halfspace_ld,
    plane_halfspace_li,
    point_in_region,
)

SEED = 20260810


def _report(number, name, failures):
    status = "PASS" if not failures else f"FAIL ({len(failures)} problems)"
    print(f"acceptance criterion {number} [{name}]: {status}")
    assert not failures, failures[:10]


def _rand_dim(rng):
    return int(rng.integers(2, 11))


def test_criterion_1_oracle_equivalence():
    rng = np.random.default_rng(SEED)
    failures = []
    ld_seen = {case: 0 for case in LD_PAIR_CASES}
    region_seen = {r: 0 for r in (Region.INSIDE_BOTH, Region.C1, Region.C2, Region.C3)}
    hw_region_seen = {Region.IN_C: 0, Region.NOT_IN_C: 0}
    hw_ld_seen = {"plane_is_whole_space": 0, "plane_inside_halfspace": 0, "empty": 0}
    system_seen = {"feasible": 0, "infeasible": 0}
    total = 0
    started = time.perf_counter()

    def check_pair(w1, w2, x):
        try:
            expected, cert = oracle_project([w1, w2], x)
            oracle_empty = False
        except EmptySet:
            oracle_empty = True
        try:
            out = project_halfspace_pair(w1, w2, x)
        except EmptySet:
            if not oracle_empty:
                failures.append("closed form empty, oracle not")
            return None
        if oracle_empty:
            failures.append("oracle empty, closed form not")
            return None
        if np.linalg.norm(out.point - expected) > 1e-9:
            failures.append(f"pair deviation {np.linalg.norm(out.point - expected):.2e}")
        return out

    # dependent halfspace pairs: all nine collapsed geometries
    for i in range(2500):
        case = LD_PAIR_CASES[i % len(LD_PAIR_CASES)]
        w1, w2 = ld_pair_case(rng, _rand_dim(rng), case)
        x = random_point(rng, w1.dim, 4.0)
        check_pair(w1, w2, x)
        ld_seen[case] += 1
        total += 1

    # independent halfspace pairs with every region represented
    flavors = ["orthogonal", "negative", "positive"]
    targets = list(region_seen)
    for i in range(2500):
        w1, w2 = li_halfspace_pair(rng, _rand_dim(rng), flavors[i % 3])
        x = None
        if i % 4 == 0:
            x = point_in_region(rng, w1, w2, targets[(i // 4) % 4], max_tries=200)
        if x is None:
            x = random_point(rng, w1.dim, 4.0)
        out = check_pair(w1, w2, x)
        if out is not None and out.region is not None:
            region_seen[out.region] += 1
        total += 1

    # hyperplane + halfspace: dependent branches and both multiplier cases
    for i in range(2500):
        dim = _rand_dim(rng)
        roll = i % 10
        if roll == 0:
            h1, w2 = plane_halfspace_ld(rng, dim, whole_plane=True)
        elif roll == 1:
            h1, w2 = plane_halfspace_ld(rng, dim, contained=True)
        elif roll == 2:
            h1, w2 = plane_halfspace_ld(rng, dim, contained=False)
        else:
            h1, w2 = plane_halfspace_li(rng, dim, flavors[i % 3])
        x = random_point(rng, dim, 4.0)
        try:
            expected, _ = oracle_project([h1, w2], x)
            oracle_empty = False
        except EmptySet:
            oracle_empty = True
        try:
            out = project_hyperplane_halfspace(h1, w2, x)
        except EmptySet:
            if not oracle_empty:
                failures.append("plane+halfspace: closed form empty, oracle not")
            else:
                hw_ld_seen["empty"] += 1
            total += 1
            continue
        if oracle_empty:
            failures.append("plane+halfspace: oracle empty, closed form not")
        elif np.linalg.norm(out.point - expected) > 1e-9:
            failures.append(
                f"plane+halfspace deviation {np.linalg.norm(out.point - expected):.2e}"
            )
        if out.region is not None:
            hw_region_seen[out.region] += 1
        elif out.case in hw_ld_seen:
            hw_ld_seen[out.case] += 1
        total += 1

    # hyperplane systems, redundant and occasionally contradictory
    for i in range(2500):
        dim = _rand_dim(rng)
        planes = random_hyperplane_system(rng, dim, num_planes=int(rng.integers(2, 5)))
        if i % 7 == 0:
            bad = planes[-1]
            planes[-1] = Hyperplane(bad.u, bad.eta + 1.0)
        if i % 11 == 0:
            planes.append(Hyperplane(np.zeros(dim), 0.0))
        x = random_point(rng, dim, 4.0)
        try:
            expected, _ = oracle_project(planes, x)
            oracle_empty = False
        except EmptySet:
            oracle_empty = True
        try:
            out = project_hyperplanes(planes, x)
        except EmptySet:
            if not oracle_empty:
                failures.append("system: closed form empty, oracle not")
            else:
                system_seen["infeasible"] += 1
            total += 1
            continue
        if oracle_empty:
            failures.append("system: oracle empty, closed form not")
        elif np.linalg.norm(out.point - expected) > 1e-9:
            failures.append(f"system deviation {np.linalg.norm(out.point - expected):.2e}")
        system_seen["feasible"] += 1
        total += 1

    elapsed = time.perf_counter() - started
    if total != 10_000:
        failures.append(f"expected 10000 instances, ran {total}")
    for case, count in ld_seen.items():
        if count == 0:
            failures.append(f"dependent case never generated: {case}")
    for region, count in region_seen.items():
        if count == 0:
            failures.append(f"region never exercised: {region}")
    for region, count in hw_region_seen.items():
        if count == 0:
            failures.append(f"plane+halfspace region never exercised: {region}")
    for case, count in hw_ld_seen.items():
        if count == 0:
            failures.append(f"plane+halfspace branch never exercised: {case}")
    if min(system_seen.values()) == 0:
        failures.append("hyperplane systems missing a feasibility branch")
    if elapsed >= 60.0:
        failures.append(f"runtime {elapsed:.1f}s exceeds 60s")
    _report(1, f"oracle equivalence, 10000 instances in {elapsed:.1f}s", failures)


def test_criterion_2_exact_composition():
    rng = np.random.default_rng(SEED + 1)
    failures = []

    for _ in range(1000):
        dim = _rand_dim(rng)
        case = ["whole_space", "first_only", "second_only", "merged_halfspace", "slab"][
            int(rng.integers(5))
        ]
        w1, w2 = ld_pair_case(rng, dim, case)
        x = random_point(rng, dim, 4.0)
        expected = project_halfspace_pair(w1, w2, x).point
        composed = project_halfspace(w2, project_halfspace(w1, x))
        if np.linalg.norm(composed - expected) > 1e-10:
            failures.append("dependent pair composition deviates")

    for _ in range(1000):
        dim = _rand_dim(rng)
        w1, w2 = li_halfspace_pair(rng, dim, "orthogonal")
        x = random_point(rng, dim, 4.0)
        expected = project_halfspace_pair(w1, w2, x).point
        composed = project_halfspace(w2, project_halfspace(w1, x))
        if np.linalg.norm(composed - expected) > 1e-10:
            failures.append("orthogonal pair composition deviates")

    for i in range(1000):
        dim = _rand_dim(rng)
        if i % 2 == 0:
            h1, w2 = plane_halfspace_ld(rng, dim, contained=True)
        else:
            h1, w2 = plane_halfspace_li(rng, dim, "orthogonal")
        x = random_point(rng, dim, 4.0)
        expected = project_hyperplane_halfspace(h1, w2, x).point
        forward = project_halfspace(w2, project_hyperplane(h1, x))
        backward = project_hyperplane(h1, project_halfspace(w2, x))
        if np.linalg.norm(forward - expected) > 1e-10:
            failures.append("plane-first composition deviates")
        if np.linalg.norm(backward - expected) > 1e-10:
            failures.append("halfspace-first composition deviates")

    _report(2, "exact composition identities", failures)


def test_criterion_3_rate_bounds():
    rng = np.random.default_rng(SEED + 2)
    failures = []

    for _ in range(1000):
        dim = _rand_dim(rng)
        w1, w2 = li_halfspace_pair(rng, dim, "negative")
        gamma = rate_gamma(w1.u, w2.u)
        report = verify_bam(
            lambda x: project_halfspace(w2, project_halfspace(w1, x)),
            lambda x: project_halfspace_pair(w1, w2, x).point,
            gamma,
            [random_point(rng, dim, 4.0)],
            k_max=50,
        )
        if not report.all_hold:
            failures.append("halfspace pair rate bound failed")

    for i in range(1000):
        dim = _rand_dim(rng)
        flavor = "negative" if i % 2 == 0 else "positive"
        h1, w2 = plane_halfspace_li(rng, dim, flavor)
        gamma = rate_gamma(h1.u, w2.u)
        report = verify_bam(
            lambda x: project_halfspace(w2, project_hyperplane(h1, x)),
            lambda x: project_hyperplane_halfspace(h1, w2, x).point,
            gamma,
            [random_point(rng, dim, 4.0)],
            k_max=50,
        )
        if not report.all_hold:
            failures.append("plane+halfspace rate bound failed")

    _report(3, "linear rate bounds, k <= 50", failures)


def test_criterion_4_one_step_feasibility():
    rng = np.random.default_rng(SEED + 3)
    failures = []
    witnesses = 0

    for _ in range(1000):
        dim = _rand_dim(rng)
        w1, w2 = li_halfspace_pair(rng, dim, "positive")
        x = random_point(rng, dim, 4.0)
        composed = project_halfspace(w2, project_halfspace(w1, x))
        if (
            contains(w1, composed) is Membership.OUTSIDE
            or contains(w2, composed) is Membership.OUTSIDE
        ):
            failures.append("one-step image infeasible")
        in_union = np.dot(x, w1.u) - w1.eta <= 0 or np.dot(x, w2.u) - w2.eta <= 0
        if in_union:
            expected = project_halfspace_pair(w1, w2, x).point
            if np.linalg.norm(composed - expected) > 1e-10:
                failures.append("one-step image misses the projection on the union")

    attempts = 0
    while witnesses < 50 and attempts < 50_000:
        attempts += 1
        dim = _rand_dim(rng)
        w1, w2 = li_halfspace_pair(rng, dim, "positive")
        x = random_point(rng, dim, 4.0)
        if np.dot(x, w1.u) - w1.eta <= 0 or np.dot(x, w2.u) - w2.eta <= 0:
            continue
        plane_image = project_hyperplane(w1.boundary(), x)
        if np.dot(plane_image, w2.u) - w2.eta <= 0:
            continue
        composed = project_halfspace(w2, project_halfspace(w1, x))
        expected = project_halfspace_pair(w1, w2, x).point
        if np.linalg.norm(composed - expected) <= 1e-6:
            failures.append("constructed witness shows no gap")
        witnesses += 1
    if witnesses < 50:
        failures.append(f"only {witnesses} gap witnesses constructed")

    _report(4, "one-step feasibility and strict gap", failures)


def test_criterion_5_reverse_order_bounds():
    rng = np.random.default_rng(SEED + 4)
    failures = []
    counted = {True: 0, False: 0}
    attempts = 0

    while (counted[True] < 250 or counted[False] < 250) and attempts < 100_000:
        attempts += 1
        dim = _rand_dim(rng)
        flavor = "negative" if attempts % 2 == 0 else "positive"
        h1, w2 = plane_halfspace_li(rng, dim, flavor)
        x = random_point(rng, dim, 4.0)
        first = project_hyperplane(h1, project_halfspace(w2, x))
        if np.dot(first, w2.u) - w2.eta <= 0:
            continue
        x_in_w2 = bool(np.dot(x, w2.u) - w2.eta <= 0)
        if counted[x_in_w2] >= 250:
            continue
        counted[x_in_w2] += 1
        gamma = rate_gamma(h1.u, w2.u)
        reference = project_hyperplane_halfspace(h1, w2, x).point
        base = np.linalg.norm(x - reference)
        current = np.asarray(x, dtype=float)
        for k in range(1, 51):
            current = project_hyperplane(h1, project_halfspace(w2, current))
            iterate = project_halfspace(w2, current) if x_in_w2 else current
            if np.linalg.norm(iterate - reference) > gamma**k * base + 1e-9:
                failures.append(f"reverse-order bound failed at k={k}")
                break
    if counted[True] < 250 or counted[False] < 250:
        failures.append(f"instance quota not met: {counted}")

    _report(5, "reverse-order rate bounds (500 instances)", failures)


def test_criterion_6_dykstra_convergence():
    rng = np.random.default_rng(SEED + 5)
    failures = []
    started = time.perf_counter()

    for i in range(500):
        dim = _rand_dim(rng)
        if i % 4 == 0:
            case = ["whole_space", "first_only", "second_only", "merged_halfspace", "slab"][
                int(rng.integers(5))
            ]
            s1, s2 = ld_pair_case(rng, dim, case)
        elif i % 4 == 1:
            while True:
                h1, w2 = plane_halfspace_li(
                    rng, dim, ["orthogonal", "negative", "positive"][i % 3]
                )
                if rate_gamma(h1.u, w2.u) <= 0.95:
                    s1, s2 = h1, w2
                    break
        else:
            while True:
                w1, w2 = li_halfspace_pair(
                    rng, dim, ["orthogonal", "negative", "positive"][i % 3]
                )
                if rate_gamma(w1.u, w2.u) <= 0.95:
                    s1, s2 = w1, w2
                    break
        x = random_point(rng, dim, 4.0)
        if isinstance(s1, Hyperplane):
            reference = project_hyperplane_halfspace(s1, s2, x).point
        else:
            reference = project_halfspace_pair(s1, s2, x).point
        trace = dykstra([s1, s2], x, max_sweeps=10_000, tol=1e-12)
        if np.linalg.norm(trace.final - reference) > 1e-6:
            failures.append(
                f"dykstra deviation {np.linalg.norm(trace.final - reference):.2e}"
            )

    elapsed = time.perf_counter() - started
    if elapsed >= 30.0:
        failures.append(f"runtime {elapsed:.1f}s exceeds 30s")
    _report(6, f"dykstra limits (500 instances in {elapsed:.1f}s)", failures)


def _perturbation_checks(sets, x, point, lam, beta, failures):
    cert = kkt_check(sets, x, point, lam, beta, tol=1e-9)
    if not cert.valid:
        failures.append("closed-form multipliers fail the certificate")
        return
    ineq = [s for s in sets if isinstance(s, Halfspace)]
    eq = [s for s in sets if isinstance(s, Hyperplane)]
    for i, s in enumerate(ineq):
        if abs(float(np.dot(point, s.u)) - s.eta) > 1e-7:
            continue
        bumped = np.array(lam, dtype=float)
        bumped[i] += 0.1
        worse = kkt_check(sets, x, point, bumped, beta, tol=1e-9)
        if worse.stationarity_residual < 0.05:
            failures.append("inequality multiplier perturbation undetected")
    for j, s in enumerate(eq):
        bumped = np.array(beta, dtype=float)
        bumped[j] += 0.1
        worse = kkt_check(sets, x, point, lam, bumped, tol=1e-9)
        if worse.stationarity_residual < 0.05:
            failures.append("equality multiplier perturbation undetected")


def test_criterion_7_kkt_certificates():
    rng = np.random.default_rng(SEED + 6)
    failures = []

    for i in range(600):
        dim = _rand_dim(rng)
        if i % 3 == 0:
            case = LD_PAIR_CASES[i % len(LD_PAIR_CASES)]
            if case in EMPTY_LD_PAIR_CASES:
                case = "slab"
            w1, w2 = ld_pair_case(rng, dim, case)
        else:
            w1, w2 = li_halfspace_pair(
                rng, dim, ["orthogonal", "negative", "positive"][i % 3]
            )
        x = random_point(rng, dim, 4.0)
        out = project_halfspace_pair(w1, w2, x)
        if out.case == "merged_halfspace":
            merged_eta = min(
                w1.eta * np.linalg.norm(w2.u), w2.eta * np.linalg.norm(w1.u)
            )
            _perturbation_checks(
                [Halfspace(out.normals[0], merged_eta)], x, out.point,
                out.coefficients, [], failures,
            )
        else:
            _perturbation_checks([w1, w2], x, out.point, out.coefficients, [], failures)

    for i in range(600):
        dim = _rand_dim(rng)
        if i % 5 == 0:
            h1, w2 = plane_halfspace_ld(rng, dim, contained=True)
        else:
            h1, w2 = plane_halfspace_li(
                rng, dim, ["orthogonal", "negative", "positive"][i % 3]
            )
        x = random_point(rng, dim, 4.0)
        out = project_hyperplane_halfspace(h1, w2, x)
        if h1.has_zero_normal:
            continue
        _perturbation_checks(
            [h1, w2], x, out.point, [out.coefficients[1]], [out.coefficients[0]], failures
        )

    for _ in range(300):
        dim = _rand_dim(rng)
        planes = []
        normals = []
        for _ in range(int(rng.integers(1, min(dim, 4)))):
            u = unit_vector(rng, dim)
            planes.append(Hyperplane(u, random_offset(rng)))
            normals.append(u)
        while True:
            coeffs = rng.uniform(-1.5, 1.5, size=len(normals))
            combo = sum(c * u for c, u in zip(coeffs, normals))
            if np.linalg.norm(combo) >= 0.5:
                break
        planes.append(
            Hyperplane(combo, float(sum(c * p.eta for c, p in zip(coeffs, planes))))
        )
        x = random_point(rng, dim, 4.0)
        out = project_hyperplanes(planes, x)
        _perturbation_checks(planes, x, out.point, [], out.coefficients, failures)

    _report(7, "kkt certificates and perturbation sensitivity", failures)


def test_criterion_8_desk_examples():
    failures = []

    def close(actual, expected, label, tol=1e-12):
        if np.linalg.norm(np.asarray(actual, float) - np.asarray(expected, float)) > tol:
            failures.append(label)

    if inner((1, 2), (3, 4)) != 11.0:
        failures.append("inner product")
    if classify_pair((1, 2), (2, 4)).gamma != 1.0:
        failures.append("dependent cosine")
    close(solve_gram([(1.0, 0.0), (1.0, 1.0)], [1.0, 2.0]), [0.0, 1.0], "gram solve")
    subset = max_independent_subset([(1, 2), (2, 4), (0, 1)])
    if subset.indices != (0, 2):
        failures.append("independent subset indices")

    red = reduce_hyperplane_system([Hyperplane([1, 0], 1.0), Hyperplane([2, 0], 5.0)])
    if red.status is not Feasibility.INFEASIBLE:
        failures.append("parallel contradiction")

    close(project_hyperplane(Hyperplane([1, 1], 0.0), [1, 1]), [0, 0], "plane projection")
    close(project_halfspace(Halfspace([1, 0], 1.0), [2, 0]), [1, 0], "halfspace projection")

    close(
        project_hyperplanes([Hyperplane([1, 0], 1.0), Hyperplane([1, 1], 3.0)], [0, 0]).point,
        [1, 2],
        "two-line intersection",
    )

    out = project_halfspace_pair(Halfspace([1, 0], 0.0), Halfspace([0, 1], 0.0), [2, 3])
    close(out.point, [0, 0], "orthant clamp")
    close(out.coefficients, [2, 3], "orthant multipliers")
    if out.region is not Region.C3:
        failures.append("orthant region")

    pair = project_halfspace_pair(Halfspace([1, 0], 1.0), Halfspace([1, 1], 0.0), [2, 2])
    close(pair.point, [0, 0], "wedge projection")
    if pair.region is not Region.C2:
        failures.append("wedge region")

    close(
        project_halfspace_pair(Halfspace([1, 0], 1.0), Halfspace([-2, 0], 1.0), [-3, 0]).point,
        [-0.5, 0],
        "slab clamp",
    )

    corner = project_hyperplane_halfspace(Hyperplane([1, 0], 1.0), Halfspace([0, 1], 0.0), [3, 2])
    close(corner.point, [1, 0], "ray corner")
    close(corner.coefficients, [2, 2], "ray corner multipliers")
    if corner.region is not Region.IN_C:
        failures.append("ray corner region")

    free = project_hyperplane_halfspace(Hyperplane([1, 0], 1.0), Halfspace([0, 1], 0.0), [3, -5])
    close(free.point, [1, -5], "plane-only branch")
    close(free.coefficients, [2, 0], "plane-only multipliers")

    close(
        project_hyperplane_halfspace(Hyperplane([1, 0], 1.0), Halfspace([2, 0], 4.0), [9, 9]).point,
        [1, 9],
        "dependent containment",
    )

    trace = compose_iterate(
        [
            lambda p: project_onto(Hyperplane([1, 0], 1.0), p),
            lambda p: project_onto(Halfspace([1, 1], 0.0), p),
        ],
        [2, 2],
        max_k=1,
    )
    close(trace.iterates[1], [-0.5, 0.5], "plane-then-halfspace step")

    w1, w2 = Halfspace([1, 0], 1.0), Halfspace([1, 1], 0.0)
    close(project_halfspace_pair(w1, w2, [2, 2]).point, [0, 0], "wedge exact projection")
    close(
        project_halfspace(w2, project_halfspace(w1, [2.0, 2.0])),
        [-0.5, 0.5],
        "wedge one-step image",
    )

    point, cert = oracle_project([Hyperplane([1, 0], 1.0), Halfspace([0, 1], 0.0)], [3, 2])
    close(point, [1, 0], "oracle corner")
    close(cert.beta, [2], "oracle beta")
    close(cert.lam, [2], "oracle lambda")

    bad = kkt_check(
        [Hyperplane([1, 0], 1.0), Halfspace([0, 1], 0.0)], [3, 2], [1, 0], lam=[0.0], beta=[2.0]
    )
    if abs(bad.stationarity_residual - 2.0) > 1e-12:
        failures.append("stationarity residual of corrupted certificate")

    _report(8, "fixed desk examples at 1e-12", failures)
