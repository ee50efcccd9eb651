"""Closed-form projection of a triangle with all three vertices free.

Given an input triangle, a prescribed area ``A`` and an orientation ``s``,
``ottpao`` returns the least-squares-closest triangle whose signed area is
``s * A``, together with every candidate considered.  ``otppa`` drops the
orientation constraint by running both orientations.

The solver splits on the invertibility of the stationarity system:

* Case I (regular): eliminating the vertices yields a depressed quartic in
  the Lagrange multiplier; each real root maps back to a candidate triangle.
* Case II (degenerate system; exactly colocated or equilateral inputs): the
  candidate is drawn from the two-parameter family of equilateral triangles
  with the prescribed signed area, centred on the input centroid and rotated
  to best match the centred input.  This candidate meets the area constraint
  exactly for every rotation angle, so it also acts as an always-feasible
  fallback when roundoff starves Case I.

Both cases are always computed and the cheapest feasible candidate wins;
up-front rank tests on the input are unreliable under roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .poly import solve_depressed_quartic
from .trigeom import (
    ProjectionSpec,
    Triangle,
    centroid,
    displacement_cost,
    signed_area,
    sum_squared_deviation,
)

# multiplier magnitude at which the free-vertex stationarity system loses rank
SINGULAR_MULTIPLIER = 4.0 / math.sqrt(3.0)

_EPS = 2.220446049250313e-16
_TIE = 1e-12


@dataclass(frozen=True)
class CaseICandidate:
    """One regular-branch candidate: triangle, its multiplier and cost."""

    triangle: Triangle
    multiplier: float
    cost: float
    signed_area: float
    feasible: bool


@dataclass(frozen=True)
class CaseISolutionSet:
    """Feasible Case I candidates plus the ones rejected by the area check."""

    solutions: Tuple[CaseICandidate, ...]
    rejected: Tuple[CaseICandidate, ...]


@dataclass(frozen=True)
class CaseIISolution:
    """Degenerate-branch solution and the generator of its rotation family.

    Any triangle of the family is ``rotate(basis, theta) + translation``; all
    family members have the same displacement cost for exactly degenerate
    inputs, and all satisfy the signed-area constraint.  ``triangle`` is the
    best-aligned member.
    """

    triangle: Triangle
    basis: Triangle
    translation: Triangle
    scale: float
    branch: int
    cost: float
    signed_area: float
    feasible: bool


@dataclass(frozen=True)
class ProjectionOutcome:
    optimal: Triangle
    cost: float
    signed_area: float
    chosen_case: str  # "I" or "II"
    orientation: int
    case1: CaseISolutionSet
    case2: CaseIISolution


def feasibility_tolerance(spec_tol: float, prescribed_area: float, candidate_area: float) -> float:
    """Area-check tolerance, widened so exact solutions pass at any scale."""
    scale = max(1.0, abs(prescribed_area), abs(candidate_area))
    return max(spec_tol, 10.0 * _EPS * scale)


def _case1_raw(
    t: Triangle, ao: float, s: int, tol: float
) -> List[Tuple[Triangle, float, float, float, bool]]:
    """All four regular-branch candidates as (triangle, lam, cost, area, feasible)."""
    astar = signed_area(t)
    p = -16.0 * (2.0 * ao + s * astar) / (3.0 * ao)
    q = 32.0 * sum_squared_deviation(t) / (3.0 * ao)
    r = 256.0 * (ao - s * astar) / (9.0 * ao)
    xa, ya, xb, yb, xc, yc = t
    out = []
    for root in solve_depressed_quartic(p, q, r):
        lam = root.real
        delta = 3.0 * lam * lam - 16.0
        h = 1.0 / delta if delta != 0.0 else 0.0  # pseudo-inverse: 0 -> 0
        l2 = lam * lam
        m = l2 - 16.0
        f = 4.0 * s * lam
        v = (
            h * (m * xa + l2 * (xb + xc) + f * (yb - yc)),
            h * (m * ya + l2 * (yb + yc) + f * (xc - xb)),
            h * (m * xb + l2 * (xa + xc) + f * (yc - ya)),
            h * (m * yb + l2 * (ya + yc) + f * (xa - xc)),
            h * (m * xc + l2 * (xa + xb) + f * (ya - yb)),
            h * (m * yc + l2 * (ya + yb) + f * (xb - xa)),
        )
        va = signed_area(v)
        feasible = abs(s * va - ao) <= feasibility_tolerance(tol, ao, va)
        out.append((v, lam, displacement_cost(v, t), va, feasible))
    return out


def best_rotation_cosin(w00: float, w01: float, w10: float, w11: float) -> Tuple[float, float]:
    """(cos, sin) of the rotation maximising alignment for a 2x2 cross-covariance.

    Ties (zero covariance) resolve to the identity.
    """
    a = w00 + w11
    b = w01 - w10
    n = math.hypot(a, b)
    if n < 1e-300:
        return 1.0, 0.0
    return a / n, b / n


def _case2_raw(
    t: Triangle, ao: float, s: int
) -> Tuple[Triangle, Triangle, Triangle, float, float, float]:
    """Degenerate-branch candidate as (triangle, basis, translation, phi, cost, area).

    The candidate is the equilateral triangle of signed area ``s * ao``
    centred on the input centroid and rotated to best align with the centred
    input; its area constraint holds exactly for every family angle.
    """
    cx, cy = centroid(t)
    phi = math.sqrt(SINGULAR_MULTIPLIER * ao / 3.0)
    g = 2.0 / SINGULAR_MULTIPLIER  # sqrt(3)/2
    # family basis with signed area s * ao
    b0 = -phi / 2.0
    b1 = s * phi * g
    basis = (b0, b1, b0, -b1, phi, 0.0)
    x1, y1 = t[0] - cx, t[1] - cy
    x2, y2 = t[2] - cx, t[3] - cy
    x3, y3 = t[4] - cx, t[5] - cy
    w00 = basis[0] * x1 + basis[2] * x2 + basis[4] * x3
    w01 = basis[0] * y1 + basis[2] * y2 + basis[4] * y3
    w10 = basis[1] * x1 + basis[3] * x2 + basis[5] * x3
    w11 = basis[1] * y1 + basis[3] * y2 + basis[5] * y3
    c, sn = best_rotation_cosin(w00, w01, w10, w11)
    v = (
        c * basis[0] - sn * basis[1] + cx,
        sn * basis[0] + c * basis[1] + cy,
        c * basis[2] - sn * basis[3] + cx,
        sn * basis[2] + c * basis[3] + cy,
        c * basis[4] - sn * basis[5] + cx,
        sn * basis[4] + c * basis[5] + cy,
    )
    translation = (cx, cy, cx, cy, cx, cy)
    return v, basis, translation, phi, displacement_cost(v, t), signed_area(v)


def solve_case1(t: Triangle, spec: ProjectionSpec) -> CaseISolutionSet:
    """Regular-branch candidates, split into feasible and rejected."""
    raw = _case1_raw(t, spec.prescribed_area, spec.orientation, spec.area_tolerance)
    solutions = tuple(
        CaseICandidate(v, lam, cost, va, True) for v, lam, cost, va, ok in raw if ok
    )
    rejected = tuple(
        CaseICandidate(v, lam, cost, va, False) for v, lam, cost, va, ok in raw if not ok
    )
    return CaseISolutionSet(solutions, rejected)


def solve_case2(t: Triangle, spec: ProjectionSpec) -> CaseIISolution:
    """Degenerate-branch solution: best-aligned member of the equilateral family."""
    ao, s = spec.prescribed_area, spec.orientation
    v, basis, translation, phi, cost, va = _case2_raw(t, ao, s)
    feasible = abs(s * va - ao) <= feasibility_tolerance(spec.area_tolerance, ao, va)
    return CaseIISolution(v, basis, translation, phi, -1, cost, va, feasible)


def generate_case2(sol: CaseIISolution, theta: float) -> Triangle:
    """Member of the Case II family at rotation angle ``theta``."""
    c, sn = math.cos(theta), math.sin(theta)
    b, tr = sol.basis, sol.translation
    return (
        c * b[0] - sn * b[1] + tr[0],
        sn * b[0] + c * b[1] + tr[1],
        c * b[2] - sn * b[3] + tr[2],
        sn * b[2] + c * b[3] + tr[3],
        c * b[4] - sn * b[5] + tr[4],
        sn * b[4] + c * b[5] + tr[5],
    )


def optimal_rotation(source, target) -> np.ndarray:
    """Rotation matrix minimising ``||R @ source - target||`` over SO(2).

    ``source`` and ``target`` are 2xN coordinate arrays.  Computed from the
    SVD of the cross-covariance with a determinant guard against reflections;
    rank-deficient ties resolve to a valid minimiser.
    """
    src = np.asarray(source, dtype=float)
    tgt = np.asarray(target, dtype=float)
    w = src @ tgt.T
    u1, _, u2t = np.linalg.svd(w)
    u2 = u2t.T
    d = np.diag([1.0, np.sign(np.linalg.det(u2 @ u1.T)) or 1.0])
    return u2 @ d @ u1.T


def _select(
    candidates: Sequence[Tuple[Triangle, float, float, str]],
) -> Tuple[Triangle, float, float, str]:
    """Minimum-cost candidate; ties keep the earliest (Case I first)."""
    best = None
    for cand in candidates:
        if best is None or cand[1] < best[1] - _TIE * max(1.0, abs(best[1])):
            best = cand
    if best is None:
        raise RuntimeError("no feasible projection candidate; this cannot happen "
                           "because the degenerate branch is always feasible")
    return best


def ottpao(t: Triangle, spec: ProjectionSpec) -> ProjectionOutcome:
    """Optimal projection onto triangles with signed area ``s * A``.

    Runs both branches unconditionally and picks the cheapest candidate that
    satisfies the area constraint.
    """
    case1 = solve_case1(t, spec)
    case2 = solve_case2(t, spec)
    pool: List[Tuple[Triangle, float, float, str]] = [
        (c.triangle, c.cost, c.signed_area, "I") for c in case1.solutions
    ]
    if case2.feasible:
        pool.append((case2.triangle, case2.cost, case2.signed_area, "II"))
    tri, cost, va, case = _select(pool)
    return ProjectionOutcome(tri, cost, va, case, spec.orientation, case1, case2)


def otppa(t: Triangle, prescribed_area: float, area_tolerance: float = 1e-3) -> ProjectionOutcome:
    """Optimal projection with unsigned prescribed area.

    Solves the oriented problem for both orientations and returns the
    lower-cost outcome (the positive branch on ties).
    """
    pos = ottpao(t, ProjectionSpec(prescribed_area, 1, area_tolerance))
    neg = ottpao(t, ProjectionSpec(prescribed_area, -1, area_tolerance))
    if neg.cost < pos.cost - _TIE * max(1.0, abs(pos.cost)):
        return neg
    return pos


def project_free(t: Triangle, ao: float, s: int, tol: float) -> Triangle:
    """Lean path for the mesh solver: just the optimal triangle."""
    pool: List[Tuple[Triangle, float, float, str]] = [
        (v, cost, va, "I") for v, _, cost, va, ok in _case1_raw(t, ao, s, tol) if ok
    ]
    v, _, _, _, cost, va = _case2_raw(t, ao, s)
    if abs(s * va - ao) <= feasibility_tolerance(tol, ao, va):
        pool.append((v, cost, va, "II"))
    return _select(pool)[0]
