"""Triangle coordinate type and the scalar measures consumed by the projectors.

A triangle is a flat 6-tuple ``(x_a, y_a, x_b, y_b, x_c, y_c)``.  All measures
are total functions: degenerate inputs (colinear or colocated vertices) are
legal and never raise.  Handling degeneracy is the projectors' job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

Triangle = Tuple[float, float, float, float, float, float]


def as_triangle(values: Iterable[float]) -> Triangle:
    """Coerce a length-6 iterable to a triangle tuple, checking finiteness."""
    coords = tuple(float(v) for v in values)
    if len(coords) != 6:
        raise ValueError(f"a triangle needs 6 coordinates, got {len(coords)}")
    if not all(math.isfinite(v) for v in coords):
        raise ValueError("triangle coordinates must be finite")
    return coords  # type: ignore[return-value]


@dataclass(frozen=True)
class ProjectionSpec:
    """Projection target: prescribed area, orientation and area tolerance.

    ``orientation`` is +1 for counter-clockwise output, -1 for clockwise.
    ``area_tolerance`` is the absolute tolerance used when checking candidate
    triangles against the signed-area constraint.
    """

    prescribed_area: float
    orientation: int = 1
    area_tolerance: float = 1e-3

    def __post_init__(self) -> None:
        if not (self.prescribed_area > 0.0 and math.isfinite(self.prescribed_area)):
            raise ValueError("prescribed_area must be positive and finite")
        if self.orientation not in (-1, 1):
            raise ValueError("orientation must be -1 or +1")
        if not (self.area_tolerance > 0.0):
            raise ValueError("area_tolerance must be positive")


def signed_area(t: Triangle) -> float:
    """Signed area by the shoelace formula; positive for counter-clockwise."""
    xa, ya, xb, yb, xc, yc = t
    return ((xa - xc) * (yb - ya) - (xa - xb) * (yc - ya)) / 2.0


def area(t: Triangle) -> float:
    return abs(signed_area(t))


def orientation_sign(t: Triangle) -> int:
    """+1, -1 or 0 according to the sign of the signed area."""
    a = signed_area(t)
    if a > 0.0:
        return 1
    if a < 0.0:
        return -1
    return 0


def displacement_cost(t: Triangle, ref: Triangle) -> float:
    """Sum of squared coordinate differences between two triangles."""
    return (
        (t[0] - ref[0]) ** 2
        + (t[1] - ref[1]) ** 2
        + (t[2] - ref[2]) ** 2
        + (t[3] - ref[3]) ** 2
        + (t[4] - ref[4]) ** 2
        + (t[5] - ref[5]) ** 2
    )


def centroid(t: Triangle) -> Tuple[float, float]:
    return ((t[0] + t[2] + t[4]) / 3.0, (t[1] + t[3] + t[5]) / 3.0)


def sum_squared_deviation(t: Triangle) -> float:
    """Sum over the three vertices of the squared distance to the centroid."""
    cx, cy = centroid(t)
    return (
        (t[0] - cx) ** 2
        + (t[1] - cy) ** 2
        + (t[2] - cx) ** 2
        + (t[3] - cy) ** 2
        + (t[4] - cx) ** 2
        + (t[5] - cy) ** 2
    )


def fixed_vertex_spread(t: Triangle) -> float:
    """Sum of squared distances of the first two vertices to the third.

    The third vertex is the one held fixed by the one-fixed-vertex projector.
    """
    xa, ya, xb, yb, xc, yc = t
    return (xa - xc) ** 2 + (ya - yc) ** 2 + (xb - xc) ** 2 + (yb - yc) ** 2


def fixed_edge_length_sq(t: Triangle) -> float:
    """Squared distance between the second and third vertices (the fixed pair)."""
    _, _, xb, yb, xc, yc = t
    return (xb - xc) ** 2 + (yb - yc) ** 2


def scale_of(t: Triangle) -> float:
    """Coordinate magnitude of a triangle, used to scale tolerances."""
    return max(1.0, max(abs(v) for v in t))
