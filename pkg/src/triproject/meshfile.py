"""Mesh JSON serialization.

Document layout::

    {
      "vertices": [[x, y], ...],
      "triangles": [[i, j, k], ...],          # 0-based
      "prescribed_areas": [...],              # optional, defaults to geometry
      "orientations": [1, -1, ...],           # optional, defaults to shoelace sign
      "pinned": [false, ...],                 # optional, defaults to all false
      "boundary_groups": [[...], ...]         # optional, defaults to none
    }
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from .pbd import Mesh, make_mesh


def mesh_to_dict(mesh: Mesh) -> dict:
    return {
        "vertices": mesh.vertices.tolist(),
        "triangles": mesh.triangles.tolist(),
        "prescribed_areas": mesh.prescribed_areas.tolist(),
        "orientations": mesh.orientations.tolist(),
        "pinned": mesh.pinned.tolist(),
        "boundary_groups": [list(map(int, g)) for g in mesh.boundary_groups],
    }


def mesh_from_dict(doc: dict) -> Mesh:
    try:
        vertices = doc["vertices"]
        triangles = doc["triangles"]
    except KeyError as exc:
        raise ValueError(f"mesh document missing required field {exc}") from exc
    mesh = make_mesh(
        np.asarray(vertices, dtype=float),
        np.asarray(triangles, dtype=np.int64),
        prescribed_areas=doc.get("prescribed_areas"),
        orientations=doc.get("orientations"),
        pinned=doc.get("pinned"),
        boundary_groups=doc.get("boundary_groups"),
    )
    return mesh


def save_mesh(mesh: Mesh, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(mesh_to_dict(mesh), indent=1), encoding="utf-8")


def load_mesh(path: Union[str, Path]) -> Mesh:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"not a valid mesh JSON document: {exc}") from exc
    return mesh_from_dict(doc)
