"""Projection variants where one or two triangle vertices are held fixed.

The one-fixed solver holds the third vertex in place; the two-fixed solver
holds the second and third.  ``canonicalize`` rotates the vertex labels of an
arbitrary pin pattern into those slots and back again.  Only cyclic label
rotations are used, so signed areas (and hence the requested orientation) are
unchanged by canonicalization.

The one-fixed problem mirrors the free one: a regular branch driven by a
depressed quartic in the multiplier, and a degenerate branch (fixed-origin
right-isosceles family plus a particular term) for exactly degenerate inputs.
The degenerate-branch candidate only satisfies the area constraint on such
inputs; elsewhere it is filtered out by the feasibility check and an exactly
feasible family fallback guards the empty-candidate corner.

With two fixed vertices the signed area is affine in the moving vertex, so
the projector is a single orthogonal step onto the constraint line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

from .poly import solve_depressed_quartic
from .project_free import (
    CaseICandidate,
    CaseISolutionSet,
    CaseIISolution,
    ProjectionOutcome,
    _select,
    best_rotation_cosin,
    feasibility_tolerance,
)
from .trigeom import (
    ProjectionSpec,
    Triangle,
    displacement_cost,
    fixed_edge_length_sq,
    fixed_vertex_spread,
    signed_area,
)

# cyclic label rotations: canonical slot i holds original vertex _PERMS[..][i]
_IDENT = (0, 1, 2)
_ONE_FIXED_PERM = {0: (1, 2, 0), 1: (2, 0, 1), 2: _IDENT}
_TWO_FIXED_PERM = {0: _IDENT, 1: (1, 2, 0), 2: (2, 0, 1)}  # keyed by the free vertex


@dataclass(frozen=True)
class FixedPattern:
    """Which vertices are pinned, and the label rotation that canonicalized them."""

    kind: str  # "none", "one" or "two"
    perm: Tuple[int, int, int]

    def apply(self, t: Triangle) -> Triangle:
        i, j, k = self.perm
        return (t[2 * i], t[2 * i + 1], t[2 * j], t[2 * j + 1], t[2 * k], t[2 * k + 1])

    def restore(self, t: Triangle) -> Triangle:
        i, j, k = self.perm
        out = [0.0] * 6
        out[2 * i], out[2 * i + 1] = t[0], t[1]
        out[2 * j], out[2 * j + 1] = t[2], t[3]
        out[2 * k], out[2 * k + 1] = t[4], t[5]
        return tuple(out)  # type: ignore[return-value]


def canonicalize(t: Triangle, fixed_flags: Tuple[bool, bool, bool]) -> Tuple[Triangle, FixedPattern]:
    """Rotate vertex labels so pinned vertices sit in the canonical slots.

    One pinned vertex goes to the third slot; two pinned vertices go to the
    second and third.  Three pinned vertices are rejected: a fully pinned
    triangle cannot be projected and must be skipped by the caller.
    """
    count = sum(bool(f) for f in fixed_flags)
    if count == 0:
        pattern = FixedPattern("none", _IDENT)
    elif count == 1:
        idx = next(i for i, f in enumerate(fixed_flags) if f)
        pattern = FixedPattern("one", _ONE_FIXED_PERM[idx])
    elif count == 2:
        free = next(i for i, f in enumerate(fixed_flags) if not f)
        pattern = FixedPattern("two", _TWO_FIXED_PERM[free])
    else:
        raise ValueError("all three vertices are fixed; nothing to project")
    return pattern.apply(t), pattern


def _case1_one_fixed_raw(
    t: Triangle, ao: float, s: int, tol: float
) -> List[Tuple[Triangle, float, float, float, bool]]:
    """Regular-branch candidates with the third vertex fixed."""
    astar = signed_area(t)
    do = fixed_vertex_spread(t)
    p = -16.0 * (2.0 * ao + s * astar) / ao
    q = 32.0 * do / ao
    r = 256.0 * (ao - s * astar) / ao
    xa, ya, xb, yb, xc, yc = t
    out = []
    for root in solve_depressed_quartic(p, q, r):
        lam = root.real
        den = lam * lam - 16.0
        h = 1.0 / den if den != 0.0 else 0.0  # pseudo-inverse: 0 -> 0
        l2 = lam * lam
        f = 4.0 * s * lam
        v = (
            h * (xc * l2 + f * (yb - yc) - 16.0 * xa),
            h * (yc * l2 + f * (xc - xb) - 16.0 * ya),
            h * (xc * l2 + f * (yc - ya) - 16.0 * xb),
            h * (yc * l2 + f * (xa - xc) - 16.0 * yb),
            xc,
            yc,
        )
        va = signed_area(v)
        feasible = abs(s * va - ao) <= feasibility_tolerance(tol, ao, va)
        out.append((v, lam, displacement_cost(v, t), va, feasible))
    return out


def _rotate_pair_candidate(
    uc: Tuple[float, float, float, float],
    up: Tuple[float, float, float, float],
    t: Triangle,
) -> Triangle:
    """Rotate the moving-pair basis to best match the shifted input pair."""
    xc, yc = t[4], t[5]
    x1, y1 = t[0] - xc, t[1] - yc
    x2, y2 = t[2] - xc, t[3] - yc
    w00 = uc[0] * x1 + uc[2] * x2
    w01 = uc[0] * y1 + uc[2] * y2
    w10 = uc[1] * x1 + uc[3] * x2
    w11 = uc[1] * y1 + uc[3] * y2
    c, sn = best_rotation_cosin(w00, w01, w10, w11)
    return (
        c * uc[0] - sn * uc[1] + up[0] + xc,
        sn * uc[0] + c * uc[1] + up[1] + yc,
        c * uc[2] - sn * uc[3] + up[2] + xc,
        sn * uc[2] + c * uc[3] + up[3] + yc,
        xc,
        yc,
    )


def _case2_one_fixed_raw(
    t: Triangle, ao: float, s: int, tol: float
) -> Tuple[Triangle, Triangle, Triangle, float, float, float, int]:
    """Degenerate-branch candidate with the third vertex fixed.

    Returns (triangle, basis6, translation6, rho, cost, area, k).  The basis
    and translation are padded to 6-vectors so the same family generator as
    the free case applies; the fixed vertex rides in the translation.
    """
    xc, yc = t[4], t[5]
    astar = signed_area(t)
    if abs(astar) > tol:
        k = s if astar > 0.0 else -s
    else:
        k = -1
    x1, y1 = t[0] - xc, t[1] - yc
    x2, y2 = t[2] - xc, t[3] - yc
    rad = (abs(astar) - 4.0 * k * ao) / 2.0
    rho = math.sqrt(rad) if rad > 0.0 else 0.0
    uc = (0.0, k * s * rho, rho, 0.0)
    sig = 0.0 if astar == 0.0 else math.copysign(1.0, astar)
    up = (
        (x1 + sig * y2) / 4.0,
        (y1 - sig * x2) / 4.0,
        (x2 - sig * y1) / 4.0,
        (y2 + sig * x1) / 4.0,
    )
    v = _rotate_pair_candidate(uc, up, t)
    basis = (uc[0], uc[1], uc[2], uc[3], 0.0, 0.0)
    translation = (up[0] + xc, up[1] + yc, up[2] + xc, up[3] + yc, xc, yc)
    return v, basis, translation, rho, displacement_cost(v, t), signed_area(v), k


def _family_fallback_one_fixed(t: Triangle, ao: float, s: int) -> Tuple[Triangle, float, float]:
    """Right-isosceles family member of exact signed area ``s*ao`` at the fixed vertex.

    Exactly feasible for any input; used only if every other candidate fails
    the area check.
    """
    rho = math.sqrt(2.0 * ao)
    uc = (0.0, -s * rho, rho, 0.0)  # k = -1 family, orientation s
    v = _rotate_pair_candidate(uc, (0.0, 0.0, 0.0, 0.0), t)
    return v, displacement_cost(v, t), signed_area(v)


def solve_case1_one_fixed(t: Triangle, spec: ProjectionSpec) -> CaseISolutionSet:
    """Regular-branch candidates (third vertex fixed), split by feasibility."""
    raw = _case1_one_fixed_raw(t, spec.prescribed_area, spec.orientation, spec.area_tolerance)
    solutions = tuple(
        CaseICandidate(v, lam, cost, va, True) for v, lam, cost, va, ok in raw if ok
    )
    rejected = tuple(
        CaseICandidate(v, lam, cost, va, False) for v, lam, cost, va, ok in raw if not ok
    )
    return CaseISolutionSet(solutions, rejected)


def solve_case2_one_fixed(t: Triangle, spec: ProjectionSpec) -> CaseIISolution:
    """Degenerate-branch solution with the third vertex fixed."""
    ao, s = spec.prescribed_area, spec.orientation
    v, basis, translation, rho, cost, va, k = _case2_one_fixed_raw(
        t, ao, s, spec.area_tolerance
    )
    feasible = abs(s * va - ao) <= feasibility_tolerance(spec.area_tolerance, ao, va)
    return CaseIISolution(v, basis, translation, rho, k, cost, va, feasible)


def ottpao_one_fixed(t: Triangle, spec: ProjectionSpec) -> ProjectionOutcome:
    """Optimal projection with the third vertex fixed.

    The fixed vertex of the result is bit-identical to the input's.
    """
    case1 = solve_case1_one_fixed(t, spec)
    case2 = solve_case2_one_fixed(t, spec)
    pool: List[Tuple[Triangle, float, float, str]] = [
        (c.triangle, c.cost, c.signed_area, "I") for c in case1.solutions
    ]
    if case2.feasible:
        pool.append((case2.triangle, case2.cost, case2.signed_area, "II"))
    if not pool:
        v, cost, va = _family_fallback_one_fixed(t, spec.prescribed_area, spec.orientation)
        pool.append((v, cost, va, "II"))
    tri, cost, va, case = _select(pool)
    return ProjectionOutcome(tri, cost, va, case, spec.orientation, case1, case2)


def project_one_fixed(t: Triangle, ao: float, s: int, tol: float) -> Triangle:
    """Lean path for the mesh solver: optimal triangle, third vertex fixed."""
    pool: List[Tuple[Triangle, float, float, str]] = [
        (v, cost, va, "I")
        for v, _, cost, va, ok in _case1_one_fixed_raw(t, ao, s, tol)
        if ok
    ]
    v, _, _, _, cost, va, _ = _case2_one_fixed_raw(t, ao, s, tol)
    if abs(s * va - ao) <= feasibility_tolerance(tol, ao, va):
        pool.append((v, cost, va, "II"))
    if not pool:
        v, cost, va = _family_fallback_one_fixed(t, ao, s)
        pool.append((v, cost, va, "II"))
    return _select(pool)[0]


def project_two_fixed(t: Triangle, spec: ProjectionSpec) -> Triangle:
    """Optimal projection moving only the first vertex.

    The signed area is affine in the moving vertex, so the optimum is the
    orthogonal projection onto the constraint line: a single step along the
    constraint gradient.  If the two fixed vertices coincide the area cannot
    be changed and the input is returned unchanged.
    """
    ao, s = spec.prescribed_area, spec.orientation
    po = fixed_edge_length_sq(t)
    if po <= spec.area_tolerance:
        return t
    astar = signed_area(t)
    step = 2.0 * (s * ao - astar) / po
    xa, ya, xb, yb, xc, yc = t
    return (xa + step * (yb - yc), ya + step * (xc - xb), xb, yb, xc, yc)
