"""Synthetic shape meshing, deformation sampling and the convergence benchmark.

The benchmark deforms a mesh by translating one boundary vertex group, pins
that group, relaxes the mesh with both engines from the same deformed state,
and records the number of sweeps each engine needs to converge.  Deformation
magnitudes and convergence thresholds are fractions of the mesh extent ``D``
(the major axis of the 95% confidence ellipse of the vertices).  A threshold
fraction is a budget on the *total* vertex motion of a sweep: the engines'
mean-displacement trace is compared against ``fraction * D / N_p``.  Dividing
the budget by the vertex count is what keeps iteration counts in the
tens-to-thousands regime where the two engines actually differ; comparing
the mean directly against ``fraction * D`` makes every run stop after one or
two sweeps regardless of engine.

Meshing is a plain jittered-lattice Delaunay construction: the mesher itself
is plumbing; the experiment only needs reasonably uniform triangles.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import shapely
from scipy.spatial import Delaunay
from shapely.geometry import Polygon

from .pbd import Mesh, RelaxTrace, make_mesh, relax_lin, relax_opt

CHI2_95_2DOF = 5.991464547107979  # 95% quantile of chi-square with 2 dof

COARSE_TRIANGLES = 100
FINE_TRIANGLES = 1000

SHAPES = ("disk", "square", "ring", "L", "cross", "star", "blob", "capsule")


# ---------------------------------------------------------------------------
# shape outlines

def _circle(r: float, n: int = 256, cx: float = 0.0, cy: float = 0.0) -> np.ndarray:
    th = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    return np.c_[cx + r * np.cos(th), cy + r * np.sin(th)]


def _shape_outline(shape: str) -> Tuple[np.ndarray, List[np.ndarray]]:
    """Outer ring (counter-clockwise) and hole rings for a named shape."""
    if shape == "disk":
        return _circle(1.0), []
    if shape == "square":
        return np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]]), []
    if shape == "ring":
        return _circle(1.0), [_circle(0.45)[::-1]]
    if shape == "L":
        return (
            np.array([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]], dtype=float),
            [],
        )
    if shape == "cross":
        w, l = 0.5, 1.5
        return (
            np.array(
                [
                    [-w, -l], [w, -l], [w, -w], [l, -w], [l, w], [w, w],
                    [w, l], [-w, l], [-w, w], [-l, w], [-l, -w], [-w, -w],
                ],
                dtype=float,
            ),
            [],
        )
    if shape == "star":
        pts = []
        for i in range(10):
            r = 1.0 if i % 2 == 0 else 0.48
            th = math.pi / 2.0 + i * math.pi / 5.0
            pts.append([r * math.cos(th), r * math.sin(th)])
        return np.array(pts, dtype=float), []
    if shape == "blob":
        th = np.linspace(0.0, 2.0 * math.pi, 256, endpoint=False)
        r = 1.0 + 0.18 * np.cos(3.0 * th + 0.8) + 0.1 * np.sin(5.0 * th)
        return np.c_[r * np.cos(th), r * np.sin(th)], []
    if shape == "capsule":
        n = 64
        th1 = np.linspace(-math.pi / 2.0, math.pi / 2.0, n)
        th2 = np.linspace(math.pi / 2.0, 3.0 * math.pi / 2.0, n)
        right = np.c_[1.0 + 0.5 * np.cos(th1), 0.5 * np.sin(th1)]
        left = np.c_[-1.0 + 0.5 * np.cos(th2), 0.5 * np.sin(th2)]
        return np.vstack([right, left]), []
    raise ValueError(f"unknown shape {shape!r}; expected one of {SHAPES}")


def _ring_corners(ring: np.ndarray, angle_deg: float = 25.0) -> List[int]:
    """Indices of vertices where the ring turns by more than ``angle_deg``."""
    n = len(ring)
    corners = []
    limit = math.radians(angle_deg)
    for i in range(n):
        a, b, c = ring[i - 1], ring[i], ring[(i + 1) % n]
        u = b - a
        v = c - b
        nu, nv = np.hypot(*u), np.hypot(*v)
        if nu < 1e-12 or nv < 1e-12:
            continue
        cross = u[0] * v[1] - u[1] * v[0]
        dot = u[0] * v[0] + u[1] * v[1]
        if abs(math.atan2(cross, dot)) > limit:
            corners.append(i)
    return corners


def _resample_ring(ring: np.ndarray, h: float) -> np.ndarray:
    """Resample a closed ring at spacing ~h, preserving sharp corners."""
    corners = _ring_corners(ring)
    if not corners:
        corners = [0]
    n = len(ring)
    out: List[np.ndarray] = []
    for ci in range(len(corners)):
        i0, i1 = corners[ci], corners[(ci + 1) % len(corners)]
        idx = [i0]
        j = i0
        while True:  # single corner: walk the whole ring back around
            j = (j + 1) % n
            idx.append(j)
            if j == i1:
                break
        arc = ring[idx]
        seg = np.hypot(*np.diff(arc, axis=0).T)
        total = float(seg.sum())
        pieces = max(1, int(round(total / h)))
        stations = np.linspace(0.0, total, pieces + 1)[:-1]
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        for s in stations:
            k = int(np.searchsorted(cum, s, side="right")) - 1
            k = min(k, len(seg) - 1)
            t = 0.0 if seg[k] == 0 else (s - cum[k]) / seg[k]
            out.append(arc[k] * (1.0 - t) + arc[k + 1] * t)
    return np.asarray(out)


def _interior_lattice(poly: Polygon, h: float, rng: np.random.Generator) -> np.ndarray:
    """Jittered triangular lattice of interior points kept clear of the boundary."""
    minx, miny, maxx, maxy = poly.bounds
    dy = h * math.sqrt(3.0) / 2.0
    rows = int((maxy - miny) / dy) + 2
    cols = int((maxx - minx) / h) + 2
    pts = []
    for r in range(rows):
        y = miny + r * dy
        off = 0.5 * h if r % 2 else 0.0
        for c in range(cols):
            pts.append((minx + off + c * h, y))
    pts = np.asarray(pts)
    pts = pts + rng.uniform(-0.06 * h, 0.06 * h, pts.shape)
    inside = shapely.contains_xy(poly, pts[:, 0], pts[:, 1])
    pts = pts[inside]
    if len(pts):
        dist = shapely.distance(poly.boundary, shapely.points(pts))
        pts = pts[dist >= 0.60 * h]
    return pts


def _triangle_quality(p: np.ndarray, tri: np.ndarray) -> np.ndarray:
    """2*sqrt(3)*|cross| / sum of squared edges; 1 for equilateral, 0 degenerate."""
    a, b, c = p[tri[:, 0]], p[tri[:, 1]], p[tri[:, 2]]
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    e = ((b - a) ** 2).sum(1) + ((c - b) ** 2).sum(1) + ((a - c) ** 2).sum(1)
    return np.where(e > 0, 2.0 * math.sqrt(3.0) * np.abs(cross) / (2.0 * e), 0.0)


def _peel_bad_boundary(points: np.ndarray, tris: np.ndarray, min_quality: float = 0.35) -> np.ndarray:
    """Remove low-quality triangles that own a boundary edge (one pass)."""
    if not len(tris):
        return tris
    edges: Dict[Tuple[int, int], int] = {}
    for i, j, k in tris:
        for e in ((i, j), (j, k), (k, i)):
            key = (min(e), max(e))
            edges[key] = edges.get(key, 0) + 1
    quality = _triangle_quality(points, tris)
    drop = []
    for t, (i, j, k) in enumerate(tris):
        if quality[t] >= min_quality:
            continue
        if any(edges[(min(e), max(e))] == 1 for e in ((i, j), (j, k), (k, i))):
            drop.append(t)
    return np.delete(tris, drop, axis=0) if drop else tris


def _drop_bowtie_fans(tris: np.ndarray) -> np.ndarray:
    """Remove the smaller fan wherever a vertex's triangle fan is disconnected."""
    incident: Dict[int, List[int]] = {}
    for t, (i, j, k) in enumerate(tris):
        for v in (i, j, k):
            incident.setdefault(int(v), []).append(t)
    drop: set = set()
    for v, ts in incident.items():
        if len(ts) < 2:
            continue
        # fan components: triangles sharing an edge through v are connected
        by_other: Dict[int, List[int]] = {}
        for t in ts:
            for w in tris[t]:
                if int(w) != v:
                    by_other.setdefault(int(w), []).append(t)
        parent = {t: t for t in ts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for group in by_other.values():
            for t in group[1:]:
                parent[find(t)] = find(group[0])
        comps: Dict[int, List[int]] = {}
        for t in ts:
            comps.setdefault(find(t), []).append(t)
        if len(comps) > 1:
            largest = max(comps.values(), key=len)
            for comp in comps.values():
                if comp is not largest:
                    drop.update(comp)
    return np.delete(tris, sorted(drop), axis=0) if drop else tris


def _largest_component(tris: np.ndarray) -> np.ndarray:
    """Keep only the largest edge-connected component of triangles."""
    if not len(tris):
        return tris
    by_edge: Dict[Tuple[int, int], List[int]] = {}
    for t, (i, j, k) in enumerate(tris):
        for e in ((i, j), (j, k), (k, i)):
            by_edge.setdefault((min(e), max(e)), []).append(t)
    parent = list(range(len(tris)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for group in by_edge.values():
        for t in group[1:]:
            parent[find(t)] = find(group[0])
    comps: Dict[int, List[int]] = {}
    for t in range(len(tris)):
        comps.setdefault(find(t), []).append(t)
    largest = max(comps.values(), key=len)
    return tris[sorted(largest)]


def _cleanup_triangulation(points: np.ndarray, tris: np.ndarray) -> np.ndarray:
    """Iterate peeling and manifold repairs until the triangulation is stable."""
    for _ in range(40):
        before = len(tris)
        tris = _peel_bad_boundary(points, tris)
        tris = _drop_bowtie_fans(tris)
        tris = _largest_component(tris)
        if len(tris) == before:
            break
    return tris


def _build_mesh(shape: str, h: float, rng: np.random.Generator) -> Mesh:
    outer, holes = _shape_outline(shape)
    poly = Polygon(outer, holes)
    boundary_pts = [_resample_ring(outer, h)]
    boundary_pts += [_resample_ring(hole, h) for hole in holes]
    interior = _interior_lattice(poly, h, rng)
    allpts = np.vstack(boundary_pts + ([interior] if len(interior) else []))
    tri = Delaunay(allpts)
    cent = allpts[tri.simplices].mean(axis=1)
    keep = shapely.contains_xy(poly, cent[:, 0], cent[:, 1])
    simplices = _cleanup_triangulation(allpts, tri.simplices[keep])
    if not len(simplices):
        raise ValueError(f"mesh generation produced no triangles for {shape!r}")
    used = np.unique(simplices)
    remap = -np.ones(len(allpts), dtype=np.int64)
    remap[used] = np.arange(len(used))
    points = allpts[used]
    simplices = remap[simplices]
    # consistent counter-clockwise orientation
    a, b, c = points[simplices[:, 0]], points[simplices[:, 1]], points[simplices[:, 2]]
    area2 = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    flip = area2 < 0.0
    simplices[flip] = simplices[flip][:, [0, 2, 1]]
    mesh = make_mesh(points, simplices)
    mesh.boundary_groups = extract_boundary_groups(mesh, 4 * (1 + len(holes)))
    return mesh


def generate_shape_mesh(shape: str, resolution: str = "coarse") -> Mesh:
    """Near-uniform triangulation of a named shape.

    ``resolution`` is ``"coarse"`` (~100 triangles) or ``"fine"`` (~1000);
    the realised count lands within +-30% of the target.  Deterministic.
    """
    if resolution not in ("coarse", "fine"):
        raise ValueError("resolution must be 'coarse' or 'fine'")
    target = COARSE_TRIANGLES if resolution == "coarse" else FINE_TRIANGLES
    outer, holes = _shape_outline(shape)
    poly = Polygon(outer, holes)
    h = math.sqrt(2.0 * poly.area / target)
    # str hash() is salted per process; derive the jitter seed stably instead
    seed = int.from_bytes(f"{shape}:{resolution}".encode(), "little") % (2 ** 31)
    mesh = None
    for _ in range(6):
        mesh = _build_mesh(shape, h, np.random.default_rng(seed))
        count = len(mesh.triangles)
        if abs(count - target) <= 0.3 * target:
            break
        h *= math.sqrt(count / target)
    return mesh


def extract_boundary_groups(mesh: Mesh, group_count: int) -> List[List[int]]:
    """Chain boundary vertices into rings and split them into contiguous groups.

    Groups are distributed over rings proportionally to ring length.  Raises
    if ``group_count`` exceeds the number of boundary vertices or leaves some
    ring without a group.
    """
    edges: Dict[Tuple[int, int], int] = {}
    for i, j, k in mesh.triangles:
        for e in ((i, j), (j, k), (k, i)):
            key = (min(e), max(e))
            edges[key] = edges.get(key, 0) + 1
    boundary_edges = [e for e, n in edges.items() if n == 1]
    if not boundary_edges:
        raise ValueError("mesh has no boundary")
    adj: Dict[int, List[int]] = {}
    for i, j in boundary_edges:
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    for v, nb in adj.items():
        if len(nb) != 2:
            raise ValueError(f"non-manifold boundary at vertex {v}")
    rings: List[List[int]] = []
    unvisited = set(adj)
    while unvisited:
        start = min(unvisited)
        ring = [start]
        prev, cur = None, start
        while True:
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            if nxt == start:
                break
            ring.append(nxt)
            prev, cur = cur, nxt
        unvisited -= set(ring)
        rings.append(ring)
    total = sum(len(r) for r in rings)
    if group_count > total:
        raise ValueError("more groups requested than boundary vertices")
    if group_count < len(rings):
        raise ValueError("need at least one group per boundary ring")
    pts = mesh.vertices

    def ring_corners(ring: List[int]) -> List[int]:
        n = len(ring)
        found = []
        for i in range(n):
            a, b, c = pts[ring[i - 1]], pts[ring[i]], pts[ring[(i + 1) % n]]
            u, v = b - a, c - b
            cross = u[0] * v[1] - u[1] * v[0]
            dot = u[0] * v[0] + u[1] * v[1]
            if abs(math.atan2(cross, dot)) > math.radians(25.0):
                found.append(i)
        return found

    # proportional allotment, one group minimum per ring
    counts = [1] * len(rings)
    for _ in range(group_count - len(rings)):
        scores = [len(r) / counts[i] for i, r in enumerate(rings)]
        counts[scores.index(max(scores))] += 1
    groups: List[List[int]] = []
    for ring, cnt in zip(rings, counts):
        n = len(ring)
        corners = ring_corners(ring)
        if len(corners) == cnt:
            # split exactly at the geometric corners (e.g. square sides)
            bounds = corners + [corners[0] + n]
            wrapped = ring + ring
            chunks = [wrapped[bounds[i]:bounds[i + 1]] for i in range(cnt)]
        else:
            start = corners[0] if corners else 0
            ring = ring[start:] + ring[:start]
            bounds = [round(i * n / cnt) for i in range(cnt + 1)]
            chunks = [ring[bounds[i]:bounds[i + 1]] for i in range(cnt)]
        for chunk in chunks:
            if chunk:
                groups.append(chunk)
    return groups


def max_extent(mesh: Mesh) -> float:
    """Mesh extent ``D``: major axis of the 95% confidence ellipse of the vertices."""
    pts = mesh.vertices
    if len(pts) < 3:
        raise ValueError("need at least 3 vertices")
    cov = np.cov(pts.T, ddof=0)
    eig = np.linalg.eigvalsh(cov)
    lam_max = float(eig[-1])
    if lam_max <= 1e-30:
        mins, maxs = pts.min(axis=0), pts.max(axis=0)
        return float(np.hypot(*(maxs - mins)))
    return 2.0 * math.sqrt(CHI2_95_2DOF * lam_max)


def _segments_properly_intersect(p1, p2, p3, p4) -> bool:
    """True if segment p1p2 intersects p3p4 (touching at endpoints included)."""

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    def on_seg(a, b, c):
        return (
            min(a[0], b[0]) - 1e-12 <= c[0] <= max(a[0], b[0]) + 1e-12
            and min(a[1], b[1]) - 1e-12 <= c[1] <= max(a[1], b[1]) + 1e-12
        )

    d1 = orient(p3, p4, p1)
    d2 = orient(p3, p4, p2)
    d3 = orient(p1, p2, p3)
    d4 = orient(p1, p2, p4)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and on_seg(p3, p4, p1):
        return True
    if d2 == 0 and on_seg(p3, p4, p2):
        return True
    if d3 == 0 and on_seg(p1, p2, p3):
        return True
    if d4 == 0 and on_seg(p1, p2, p4):
        return True
    return False


def _boundary_edge_list(mesh: Mesh) -> List[Tuple[int, int]]:
    edges: Dict[Tuple[int, int], int] = {}
    for i, j, k in mesh.triangles:
        for e in ((i, j), (j, k), (k, i)):
            key = (min(e), max(e))
            edges[key] = edges.get(key, 0) + 1
    return [e for e, n in edges.items() if n == 1]


def sample_deformation(
    mesh: Mesh, fraction: float, rng: np.random.Generator, max_tries: int = 64
) -> Optional[Tuple[int, Tuple[float, float]]]:
    """Pick a boundary group and a collision-free translation of it.

    The translation magnitude is ``fraction`` of the mesh extent; candidates
    whose displaced boundary segments cross the remaining boundary are
    rejected and resampled.  Returns ``None`` when ``max_tries`` candidates
    were all rejected.
    """
    if fraction < 0.0:
        raise ValueError("fraction must be >= 0")
    if not mesh.boundary_groups:
        raise ValueError("mesh has no boundary groups to deform")
    magnitude = fraction * max_extent(mesh)
    boundary = _boundary_edge_list(mesh)
    pts = mesh.vertices
    for _ in range(max_tries):
        g = int(rng.integers(len(mesh.boundary_groups)))
        theta = float(rng.uniform(0.0, 2.0 * math.pi))
        d = (magnitude * math.cos(theta), magnitude * math.sin(theta))
        moved = set(mesh.boundary_groups[g])

        def pos(v):
            if v in moved:
                return (pts[v, 0] + d[0], pts[v, 1] + d[1])
            return (pts[v, 0], pts[v, 1])

        changed = [e for e in boundary if e[0] in moved or e[1] in moved]
        ok = True
        for e1 in changed:
            a1, a2 = pos(e1[0]), pos(e1[1])
            for e2 in boundary:
                if e1 == e2 or e1[0] in e2 or e1[1] in e2:
                    continue
                if _segments_properly_intersect(a1, a2, pos(e2[0]), pos(e2[1])):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return g, d
    return None


# ---------------------------------------------------------------------------
# benchmark harness

@dataclass(frozen=True)
class BenchConfig:
    """Benchmark parameters; defaults are the desk-scale study."""

    shapes: Tuple[str, ...] = ("disk", "ring", "cross", "star")
    resolution: str = "coarse"
    deform_fractions: Tuple[float, ...] = (0.05, 0.10, 0.20)
    thresholds: Tuple[float, ...] = (0.05, 0.025, 0.01)
    runs_per_mesh: int = 50
    stopping_time: int = 10000
    seed: int = 0
    area_tolerance: float = 1e-3
    lin_stiffness: float = 0.35
    threads: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.shapes:
            raise ValueError("at least one shape required")
        for f in self.deform_fractions:
            if not 0.0 < f < 1.0:
                raise ValueError("deformation fractions must lie in (0, 1)")
        for t in self.thresholds:
            if not 0.0 < t < 1.0:
                raise ValueError("thresholds must lie in (0, 1)")
        if self.runs_per_mesh < 1:
            raise ValueError("runs_per_mesh must be >= 1")
        if self.stopping_time < 1:
            raise ValueError("stopping_time must be >= 1")


@dataclass(frozen=True)
class RunRecord:
    """One (run, method, threshold) outcome of the benchmark."""

    shape: str
    resolution: str
    method: str  # "opt" or "lin"
    seed: int
    deform_pct: float
    threshold_pct: float
    iterations: int
    converged: bool
    final_area_mad: float
    wall_ms: float
    skipped: bool = False


CSV_HEADER = "shape,class,method,seed,deform_pct,threshold_pct,iterations,converged,final_area_mad,wall_ms"


def write_csv(records: Sequence[RunRecord], path: Union[str, Path]) -> None:
    """One row per record; '.' decimal separator, UTF-8, LF line endings."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.shape},{r.resolution},{r.method},{r.seed},"
            f"{r.deform_pct:g},{r.threshold_pct:g},{r.iterations},"
            f"{'true' if r.converged else 'false'},{r.final_area_mad:.6e},{r.wall_ms:.3f}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _thread_limit(requested: Optional[int]) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get("TRIPROJECT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def _threshold_records(
    trace: RelaxTrace,
    thresholds: Sequence[float],
    budget_unit: float,
    base: dict,
) -> List[RunRecord]:
    records = []
    for pct in thresholds:
        limit = pct * budget_unit
        iters, converged = len(trace.displacement), False
        for i, c in enumerate(trace.displacement):
            if c < limit:
                iters, converged = i + 1, True
                break
        records.append(
            RunRecord(
                threshold_pct=pct,
                iterations=iters,
                converged=converged,
                final_area_mad=trace.area_error[-1] if trace.area_error else float("nan"),
                **base,
            )
        )
    return records


def _run_one(task) -> List[RunRecord]:
    (shape, resolution, mesh, extent, fraction, thresholds, stopping_time,
     area_tolerance, lin_stiffness, child_seed) = task
    rng = np.random.default_rng(np.random.SeedSequence(child_seed))
    choice = sample_deformation(mesh, fraction, rng)
    records: List[RunRecord] = []
    if choice is None:
        for method in ("opt", "lin"):
            base = dict(shape=shape, resolution=resolution, method=method,
                        seed=child_seed, deform_pct=fraction, wall_ms=0.0, skipped=True)
            for pct in thresholds:
                records.append(RunRecord(threshold_pct=pct, iterations=0,
                                         converged=False, final_area_mad=float("nan"), **base))
        return records
    group, (dx, dy) = choice
    deformed = mesh.copy()
    idx = np.asarray(mesh.boundary_groups[group], dtype=np.int64)
    deformed.vertices[idx, 0] += dx
    deformed.vertices[idx, 1] += dy
    deformed.pinned[idx] = True
    # threshold fractions budget the sweep's total motion; the engines track
    # the per-vertex mean, so scale the budget down by the vertex count
    budget_unit = extent / len(mesh.vertices)
    t_min = min(thresholds) * budget_unit
    for method in ("opt", "lin"):
        work = deformed.copy()
        t0 = time.perf_counter()
        if method == "opt":
            trace = relax_opt(work, t_min, stopping_time, area_tolerance)
        else:
            trace = relax_lin(work, t_min, stopping_time, area_tolerance, lin_stiffness)
        wall_ms = (time.perf_counter() - t0) * 1e3
        base = dict(shape=shape, resolution=resolution, method=method,
                    seed=child_seed, deform_pct=fraction, wall_ms=wall_ms, skipped=False)
        records.extend(_threshold_records(trace, thresholds, budget_unit, base))
    return records


def run_benchmark(config: BenchConfig) -> List[RunRecord]:
    """Run the full grid of (shape, deformation, repetition) relaxations.

    Deterministic for a given config and seed (wall times excepted): every
    run draws from its own stream derived from ``(config.seed, run_id)``, and
    record order is independent of scheduling.
    """
    meshes = {s: generate_shape_mesh(s, config.resolution) for s in config.shapes}
    extents = {s: max_extent(m) for s, m in meshes.items()}
    tasks = []
    run_id = 0
    for shape in config.shapes:
        for fraction in config.deform_fractions:
            for _ in range(config.runs_per_mesh):
                child_seed = int(
                    np.random.SeedSequence((config.seed, run_id)).generate_state(1)[0]
                )
                tasks.append(
                    (shape, config.resolution, meshes[shape], extents[shape],
                     fraction, tuple(config.thresholds), config.stopping_time,
                     config.area_tolerance, config.lin_stiffness, child_seed)
                )
                run_id += 1
    threads = _thread_limit(config.threads)
    records: List[RunRecord] = []
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for result in pool.map(_run_one, tasks, chunksize=4):
                records.extend(result)
    else:
        for task in tasks:
            records.extend(_run_one(task))
    return records


def classify_outliers(
    records: Sequence[RunRecord], stopping_time: int = 10000
) -> Dict[str, dict]:
    """Per-method slow-convergence statistics.

    Very slow convergence (VSC) runs hit the stopping time without crossing
    the threshold; slow convergence (SC) runs converged but needed more than
    Q3 + 1.5*IQR iterations.  Quartiles are linear-interpolated over the
    method's iteration counts (skipped runs excluded).
    """
    del stopping_time  # VSC is read off the converged flag
    out: Dict[str, dict] = {}
    for method in sorted({r.method for r in records}):
        rows = [r for r in records if r.method == method and not r.skipped]
        if len(rows) < 4:
            raise ValueError("need at least 4 records per method")
        iters = np.array([r.iterations for r in rows], dtype=float)
        q1, q2, q3 = np.percentile(iters, [25, 50, 75], method="linear")
        fence = q3 + 1.5 * (q3 - q1)
        vsc = sum(1 for r in rows if not r.converged)
        sc = sum(1 for r in rows if r.converged and r.iterations > fence)
        out[method] = {"sc": sc, "vsc": vsc, "quartiles": (float(q1), float(q2), float(q3))}
    return out
