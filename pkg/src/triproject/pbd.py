"""2D triangular mesh model and the two area relaxation engines.

``relax_opt`` sweeps the triangles Gauss-Seidel style, replacing each one by
its closed-form optimal projection onto the prescribed signed area (free,
one-fixed or two-fixed variant depending on how many of its vertices are
pinned).  ``relax_lin`` runs the same sweep with the classical first-order
step: every unpinned vertex moves against the constraint gradient by the
linearised correction, scaled by a stiffness factor.

Both engines mutate ``mesh.vertices`` in place and report a per-iteration
trace.  Convergence is declared when the average vertex displacement of a
sweep drops below the threshold.  Pinned vertices never move.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .project_fixed import project_one_fixed, project_two_fixed
from .project_free import project_free
from .trigeom import ProjectionSpec, Triangle, signed_area


@dataclass
class Mesh:
    """Triangle mesh with per-triangle area targets and per-vertex pin flags.

    ``boundary_groups`` lists chains of boundary vertex indices used by the
    benchmark to pick edit handles; it may be empty.
    """

    vertices: np.ndarray  # (N_p, 2) float
    triangles: np.ndarray  # (N_t, 3) int
    prescribed_areas: np.ndarray  # (N_t,) float, > 0
    orientations: np.ndarray  # (N_t,) int, +-1
    pinned: np.ndarray  # (N_p,) bool
    boundary_groups: List[List[int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.vertices = np.asarray(self.vertices, dtype=float)
        self.triangles = np.asarray(self.triangles, dtype=np.int64)
        self.prescribed_areas = np.asarray(self.prescribed_areas, dtype=float)
        self.orientations = np.asarray(self.orientations, dtype=np.int64)
        self.pinned = np.asarray(self.pinned, dtype=bool)

    def validate(self) -> None:
        n_p = len(self.vertices)
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 2:
            raise ValueError("vertices must be an (N, 2) array")
        if self.triangles.ndim != 2 or self.triangles.shape[1] != 3:
            raise ValueError("triangles must be an (M, 3) array")
        if self.triangles.size and (self.triangles.min() < 0 or self.triangles.max() >= n_p):
            raise ValueError("triangle indices out of range")
        if len(self.prescribed_areas) != len(self.triangles):
            raise ValueError("one prescribed area per triangle required")
        if np.any(self.prescribed_areas <= 0.0):
            raise ValueError("prescribed areas must be positive")
        if len(self.orientations) != len(self.triangles):
            raise ValueError("one orientation per triangle required")
        if not np.all(np.isin(self.orientations, (-1, 1))):
            raise ValueError("orientations must be -1 or +1")
        if len(self.pinned) != n_p:
            raise ValueError("one pin flag per vertex required")
        seen: set = set()
        for group in self.boundary_groups:
            for idx in group:
                if not 0 <= idx < n_p:
                    raise ValueError("boundary group index out of range")
                if idx in seen:
                    raise ValueError("boundary groups must be disjoint")
                seen.add(idx)

    def copy(self) -> "Mesh":
        return Mesh(
            self.vertices.copy(),
            self.triangles.copy(),
            self.prescribed_areas.copy(),
            self.orientations.copy(),
            self.pinned.copy(),
            [list(g) for g in self.boundary_groups],
        )

    def triangle_coords(self, t: int) -> Triangle:
        i, j, k = self.triangles[t]
        p = self.vertices
        return (p[i, 0], p[i, 1], p[j, 0], p[j, 1], p[k, 0], p[k, 1])

    def signed_areas(self) -> np.ndarray:
        p = self.vertices
        a = p[self.triangles[:, 0]]
        b = p[self.triangles[:, 1]]
        c = p[self.triangles[:, 2]]
        return ((a[:, 0] - c[:, 0]) * (b[:, 1] - a[:, 1])
                - (a[:, 0] - b[:, 0]) * (c[:, 1] - a[:, 1])) / 2.0


def make_mesh(
    vertices,
    triangles,
    prescribed_areas=None,
    orientations=None,
    pinned=None,
    boundary_groups=None,
) -> Mesh:
    """Build a mesh, defaulting areas/orientations from the geometry."""
    vertices = np.asarray(vertices, dtype=float)
    triangles = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    mesh = Mesh(
        vertices,
        triangles,
        np.ones(len(triangles)),
        np.ones(len(triangles), dtype=np.int64),
        np.zeros(len(vertices), dtype=bool) if pinned is None else np.asarray(pinned, dtype=bool),
        [] if boundary_groups is None else [list(g) for g in boundary_groups],
    )
    mesh.validate()  # catches bad indices before any geometry is evaluated
    areas = mesh.signed_areas()
    if orientations is None:
        orientations = np.where(areas >= 0.0, 1, -1)
    mesh.orientations = np.asarray(orientations, dtype=np.int64)
    if prescribed_areas is None:
        prescribed_areas = np.abs(areas)
    mesh.prescribed_areas = np.asarray(prescribed_areas, dtype=float)
    mesh.validate()
    return mesh


@dataclass
class RelaxTrace:
    """Per-iteration averages recorded by a relaxation run."""

    displacement: List[float]
    area_error: List[float]
    iterations: int
    converged: bool


def convergence_metric(before: np.ndarray, after: np.ndarray) -> float:
    """Mean Euclidean displacement between two equal-length vertex arrays."""
    before = np.asarray(before, dtype=float)
    after = np.asarray(after, dtype=float)
    if before.shape != after.shape:
        raise ValueError("vertex arrays must have identical shapes")
    return float(np.mean(np.hypot(after[:, 0] - before[:, 0], after[:, 1] - before[:, 1])))


def _sweep_plan(mesh: Mesh) -> List[Tuple[int, ...]]:
    """Per-triangle dispatch, precomputed: (kind, ordered vertex indices, t).

    Vertex order is rotated cyclically so pinned vertices occupy the slots the
    projectors expect; cyclic rotations leave the signed area unchanged.
    kind: 0 free, 1 one pinned (last slot), 2 two pinned (last two), 3 skip.
    """
    plan = []
    pinned = mesh.pinned
    for t, (i, j, k) in enumerate(mesh.triangles):
        flags = (bool(pinned[i]), bool(pinned[j]), bool(pinned[k]))
        n = sum(flags)
        if n == 0:
            order = (i, j, k)
        elif n == 1:
            if flags[0]:
                order = (j, k, i)
            elif flags[1]:
                order = (k, i, j)
            else:
                order = (i, j, k)
        elif n == 2:
            if not flags[0]:
                order = (i, j, k)
            elif not flags[1]:
                order = (j, k, i)
            else:
                order = (k, i, j)
        else:
            order = (i, j, k)
        plan.append((n, order[0], order[1], order[2], t))
    return plan


def _trace_area_error(xs: List[float], mesh: Mesh) -> float:
    total = 0.0
    tris = mesh.triangles
    areas = mesh.prescribed_areas
    for t in range(len(tris)):
        i, j, k = tris[t]
        a = (
            (xs[2 * i] - xs[2 * k]) * (xs[2 * j + 1] - xs[2 * i + 1])
            - (xs[2 * i] - xs[2 * j]) * (xs[2 * k + 1] - xs[2 * i + 1])
        ) / 2.0
        total += abs(abs(a) - areas[t])
    return total / max(1, len(tris))


def _run_sweeps(
    mesh: Mesh,
    displacement_threshold: float,
    max_iterations: int,
    step,
) -> RelaxTrace:
    """Shared Gauss-Seidel driver; ``step`` updates one triangle in place."""
    if displacement_threshold < 0.0:
        raise ValueError("displacement threshold must be >= 0")
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    mesh.validate()
    xs: List[float] = [float(v) for v in mesh.vertices.reshape(-1)]
    plan = _sweep_plan(mesh)
    n_p = len(mesh.vertices)
    displacement: List[float] = []
    area_error: List[float] = []
    converged = False
    for _ in range(max_iterations):
        prev = xs.copy()
        for item in plan:
            step(xs, item)
        total = 0.0
        for i in range(n_p):
            total += math.hypot(xs[2 * i] - prev[2 * i], xs[2 * i + 1] - prev[2 * i + 1])
        c = total / max(1, n_p)
        displacement.append(c)
        area_error.append(_trace_area_error(xs, mesh))
        if c < displacement_threshold:
            converged = True
            break
    mesh.vertices = np.array(xs, dtype=float).reshape(-1, 2)
    return RelaxTrace(displacement, area_error, len(displacement), converged)


def relax_opt(
    mesh: Mesh,
    displacement_threshold: float,
    max_iterations: int,
    area_tolerance: float = 1e-3,
) -> RelaxTrace:
    """Relax the mesh with the closed-form optimal projector per triangle."""
    areas = mesh.prescribed_areas
    orients = mesh.orientations

    def step(xs: List[float], item) -> None:
        n, i, j, k, t = item
        if n == 3:
            return
        tri = (xs[2 * i], xs[2 * i + 1], xs[2 * j], xs[2 * j + 1], xs[2 * k], xs[2 * k + 1])
        ao = areas[t]
        s = orients[t]
        if n == 0:
            v = project_free(tri, ao, s, area_tolerance)
            xs[2 * i], xs[2 * i + 1] = v[0], v[1]
            xs[2 * j], xs[2 * j + 1] = v[2], v[3]
            xs[2 * k], xs[2 * k + 1] = v[4], v[5]
        elif n == 1:
            v = project_one_fixed(tri, ao, s, area_tolerance)
            xs[2 * i], xs[2 * i + 1] = v[0], v[1]
            xs[2 * j], xs[2 * j + 1] = v[2], v[3]
        else:
            v = project_two_fixed(tri, ProjectionSpec(ao, int(s), area_tolerance))
            xs[2 * i], xs[2 * i + 1] = v[0], v[1]

    return _run_sweeps(mesh, displacement_threshold, max_iterations, step)


def relax_lin(
    mesh: Mesh,
    displacement_threshold: float,
    max_iterations: int,
    area_tolerance: float = 1e-3,
    stiffness: float = 0.35,
) -> RelaxTrace:
    """Relax the mesh with the linearised area constraint step.

    Each unpinned vertex of a triangle receives the first-order correction
    ``-stiffness * C * grad_i / sum_j |grad_j|^2`` for the signed constraint
    ``C = s * signed_area - prescribed``.  ``area_tolerance`` is unused by the
    step itself (kept for interface symmetry with ``relax_opt``).
    """
    del area_tolerance
    areas = mesh.prescribed_areas
    orients = mesh.orientations

    def step(xs: List[float], item) -> None:
        n, i, j, k, t = item
        if n == 3:
            return
        xa, ya = xs[2 * i], xs[2 * i + 1]
        xb, yb = xs[2 * j], xs[2 * j + 1]
        xc, yc = xs[2 * k], xs[2 * k + 1]
        s = orients[t]
        cval = s * ((xa - xc) * (yb - ya) - (xa - xb) * (yc - ya)) / 2.0 - areas[t]
        # shoelace gradient halves, per vertex; pinned slots are the trailing
        # ones thanks to the sweep-plan ordering
        gax, gay = s * (yb - yc) / 2.0, s * (xc - xb) / 2.0
        gbx, gby = s * (yc - ya) / 2.0, s * (xa - xc) / 2.0
        gcx, gcy = s * (ya - yb) / 2.0, s * (xb - xa) / 2.0
        if n == 0:
            denom = gax * gax + gay * gay + gbx * gbx + gby * gby + gcx * gcx + gcy * gcy
        elif n == 1:
            denom = gax * gax + gay * gay + gbx * gbx + gby * gby
        else:
            denom = gax * gax + gay * gay
        if denom < 1e-300:
            return
        f = stiffness * cval / denom
        xs[2 * i], xs[2 * i + 1] = xa - f * gax, ya - f * gay
        if n <= 1:
            xs[2 * j], xs[2 * j + 1] = xb - f * gbx, yb - f * gby
        if n == 0:
            xs[2 * k], xs[2 * k + 1] = xc - f * gcx, yc - f * gcy

    return _run_sweeps(mesh, displacement_threshold, max_iterations, step)
