"""JSON I/O for lattice objects, operators and reports.

Layouts:

* edge: ``[x, y, "H"]`` or ``[x, y, "V"]``
* site: ``{"vertex": [x, y]}`` or ``{"face": [x, y]}``
* patch: ``{"kind": "patch", "edges": [edge, ...]}``
* path: ``{"kind": "path", "path_kind": "direct"|"dual", "edges": [...]}``
* operator: ``{"kind": "pauli", "phase": "1"|"i"|"-1"|"-i",
  "x": [edge, ...], "z": [edge, ...]}``

Edge lists are written in canonical order so output is reproducible.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Union

from toric_diagonal.formatters import render_json, render_markdown
from toric_diagonal.lattice import (
    Edge,
    Face,
    LatticePath,
    Orientation,
    PathKind,
    Patch,
    Site,
    Vertex,
    site_key,
)
from toric_diagonal.models import VerificationReport
from toric_diagonal.pauli import Phase, PauliOperator

LatticeObject = Union[Patch, LatticePath, PauliOperator]


def edge_to_json(e: Edge) -> List[Any]:
    return [e.base.x, e.base.y, e.orientation.value]


def edge_from_json(data: Any) -> Edge:
    """Parse ``[x, y, "H"|"V"]``.

    Raises:
        ValueError: On any other shape.
    """
    if (not isinstance(data, list) or len(data) != 3
            or not all(isinstance(v, int) for v in data[:2])):
        raise ValueError(f"Invalid edge: {data!r}")
    try:
        orientation = Orientation(data[2])
    except ValueError:
        raise ValueError(f"Invalid edge orientation: {data[2]!r}") from None
    return Edge(Vertex(data[0], data[1]), orientation)


def _edges_to_json(edges) -> List[List[Any]]:
    return [edge_to_json(e) for e in sorted(edges, key=site_key)]


def site_to_json(w: Site) -> Dict[str, List[int]]:
    if isinstance(w, Vertex):
        return {"vertex": [w.x, w.y]}
    return {"face": [w.x, w.y]}


def site_from_json(data: Any) -> Site:
    if isinstance(data, dict) and len(data) == 1:
        (kind, coords), = data.items()
        if isinstance(coords, list) and len(coords) == 2:
            if kind == "vertex":
                return Vertex(*coords)
            if kind == "face":
                return Face(Vertex(*coords))
    raise ValueError(f"Invalid site: {data!r}")


def to_json_dict(obj: LatticeObject) -> Dict[str, Any]:
    if isinstance(obj, Patch):
        return {"kind": "patch", "edges": _edges_to_json(obj.edges)}
    if isinstance(obj, LatticePath):
        return {
            "kind": "path",
            "path_kind": obj.kind.value,
            "edges": [edge_to_json(e) for e in obj.edges],
        }
    if isinstance(obj, PauliOperator):
        return {
            "kind": "pauli",
            "phase": obj.phase.label,
            "x": _edges_to_json(obj.x_support),
            "z": _edges_to_json(obj.z_support),
        }
    raise TypeError(f"Cannot serialize {type(obj).__name__}")


def from_json_dict(data: Any) -> LatticeObject:
    """Rebuild a patch, path or operator.

    Raises:
        ValueError: If the document is malformed or the path invalid.
    """
    if not isinstance(data, dict) or "kind" not in data:
        raise ValueError("Invalid lattice JSON: expected an object with a 'kind'")
    kind = data["kind"]
    if kind == "patch":
        return Patch(frozenset(edge_from_json(e) for e in data.get("edges", [])))
    if kind == "path":
        try:
            path_kind = PathKind(data.get("path_kind"))
        except ValueError:
            raise ValueError(f"Invalid path kind: {data.get('path_kind')!r}") from None
        return LatticePath(tuple(edge_from_json(e) for e in data.get("edges", [])), path_kind)
    if kind == "pauli":
        return PauliOperator(
            frozenset(edge_from_json(e) for e in data.get("x", [])),
            frozenset(edge_from_json(e) for e in data.get("z", [])),
            Phase.from_label(str(data.get("phase", "1"))),
        )
    raise ValueError(f"Invalid lattice JSON: unknown kind {kind!r}")


def save_object(obj: LatticeObject, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_object(path: Union[str, Path]) -> LatticeObject:
    """Load a serialized patch, path or operator.

    Raises:
        FileNotFoundError: If *path* does not exist.
        ValueError: If the file is not a valid document.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Lattice file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"Invalid lattice JSON: {exc}") from None
    return from_json_dict(data)


def save_report(
    report: VerificationReport,
    path: Union[str, Path],
    fmt: str = "json",
    include_timing: bool = False,
) -> None:
    """Write a report as JSON or markdown.

    Raises:
        ValueError: On an unknown format.
    """
    if fmt == "json":
        text = render_json(report, include_timing)
    elif fmt == "markdown":
        text = render_markdown(report, include_timing)
    else:
        raise ValueError(f"Unknown report format: {fmt!r}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
