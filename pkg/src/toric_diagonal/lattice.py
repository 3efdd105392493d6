"""Integer-coordinate model of the square lattice and its dual.

This module defines the geometric vocabulary shared by the whole
package: vertices, unoriented edges, faces (the vertices of the dual
lattice), finite edge patches, and direct or dual lattice paths.

Conventions:

* A horizontal edge ``H@(x, y)`` joins ``(x, y)`` and ``(x + 1, y)``;
  a vertical edge ``V@(x, y)`` joins ``(x, y)`` and ``(x, y + 1)``.
* A face is named by the lower-left corner of its unit square.
* A dual path is stored as the ordered list of direct edges it
  crosses; consecutive crossed edges share exactly one face.

All values are immutable and hashable.
"""

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union


class Orientation(str, enum.Enum):
    """Orientation of an unoriented lattice edge."""

    H = "H"
    V = "V"


class PathKind(str, enum.Enum):
    """Whether a path lives on the direct or the dual lattice."""

    DIRECT = "direct"
    DUAL = "dual"


class Routing(str, enum.Enum):
    """Leg order of an L-shaped path between two sites."""

    HORIZONTAL_FIRST = "horizontal-first"
    VERTICAL_FIRST = "vertical-first"


@dataclass(frozen=True, order=True)
class Vertex:
    """A vertex of the direct lattice."""

    x: int
    y: int

    def __str__(self) -> str:
        return f"v({self.x},{self.y})"


@dataclass(frozen=True, order=True)
class Face:
    """A face of the direct lattice, i.e. a vertex of the dual lattice.

    Attributes:
        corner: Lower-left corner of the unit square.
    """

    corner: Vertex

    @property
    def x(self) -> int:
        return self.corner.x

    @property
    def y(self) -> int:
        return self.corner.y

    def __str__(self) -> str:
        return f"f({self.x},{self.y})"


#: A site of ``W = V ∪ Ṽ``: a vertex or a face.
Site = Union[Vertex, Face]


@dataclass(frozen=True, order=True)
class Edge:
    """An unoriented edge, stored by its lower/left endpoint."""

    base: Vertex
    orientation: Orientation

    @property
    def endpoints(self) -> Tuple[Vertex, Vertex]:
        """The two vertices joined by the edge, base first."""
        if self.orientation is Orientation.H:
            return self.base, Vertex(self.base.x + 1, self.base.y)
        return self.base, Vertex(self.base.x, self.base.y + 1)

    @property
    def faces(self) -> Tuple[Face, Face]:
        """The two faces whose boundary contains the edge.

        Below/above for horizontal edges, left/right for vertical ones.
        """
        x, y = self.base.x, self.base.y
        if self.orientation is Orientation.H:
            return Face(Vertex(x, y - 1)), Face(Vertex(x, y))
        return Face(Vertex(x - 1, y)), Face(Vertex(x, y))

    def __str__(self) -> str:
        return f"{self.orientation.value}@({self.base.x},{self.base.y})"


def h_edge(x: int, y: int) -> Edge:
    """Shorthand for the horizontal edge based at ``(x, y)``."""
    return Edge(Vertex(x, y), Orientation.H)


def v_edge(x: int, y: int) -> Edge:
    """Shorthand for the vertical edge based at ``(x, y)``."""
    return Edge(Vertex(x, y), Orientation.V)


def site_key(item: Union[Site, Edge]) -> Tuple[int, int, int]:
    """Total ordering key over vertices, faces and edges.

    Vertices sort before faces, faces before edges; within a kind
    the order is lexicographic on coordinates (edges: H before V).
    """
    if isinstance(item, Vertex):
        return 0, item.x, item.y
    if isinstance(item, Face):
        return 1, item.x, item.y
    if isinstance(item, Edge):
        return 2 + (item.orientation is Orientation.V), item.base.x, item.base.y
    raise ValueError(f"Not a lattice site or edge: {item!r}")


def star_edges(v: Vertex) -> FrozenSet[Edge]:
    """Return the four edges incident to vertex *v*."""
    return frozenset((
        h_edge(v.x - 1, v.y),
        h_edge(v.x, v.y),
        v_edge(v.x, v.y - 1),
        v_edge(v.x, v.y),
    ))


def face_edges(f: Face) -> FrozenSet[Edge]:
    """Return the four boundary edges of face *f*."""
    return frozenset((
        h_edge(f.x, f.y),
        h_edge(f.x, f.y + 1),
        v_edge(f.x, f.y),
        v_edge(f.x + 1, f.y),
    ))


def site_edges(w: Site) -> FrozenSet[Edge]:
    """Return the support edges of the star or face operator at *w*."""
    if isinstance(w, Vertex):
        return star_edges(w)
    if isinstance(w, Face):
        return face_edges(w)
    raise ValueError(f"Not a lattice site: {w!r}")


def face_corners(f: Face) -> Tuple[Vertex, Vertex, Vertex, Vertex]:
    """The four corner vertices of face *f*, counterclockwise."""
    x, y = f.x, f.y
    return Vertex(x, y), Vertex(x + 1, y), Vertex(x + 1, y + 1), Vertex(x, y + 1)


# ---------------------------------------------------------------------------
# Patches
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Patch:
    """A finite set of edges ``Λ``.

    A site is *interior* to the patch when every edge of its star or
    face operator lies in the patch, i.e. when ``S_w`` is an element
    of the local algebra over ``Λ``.
    """

    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: object) -> bool:
        return edge in self.edges

    def issubset(self, other: "Patch") -> bool:
        return self.edges <= other.edges

    def union(self, other: "Patch") -> "Patch":
        return Patch(self.edges | other.edges)

    @cached_property
    def sorted_edges(self) -> Tuple[Edge, ...]:
        """Edges in canonical order; the dense index of each edge."""
        return tuple(sorted(self.edges, key=site_key))

    def vertices(self) -> FrozenSet[Vertex]:
        """All vertices touched by an edge of the patch."""
        return frozenset(v for e in self.edges for v in e.endpoints)

    def faces(self) -> FrozenSet[Face]:
        """All faces having at least one boundary edge in the patch."""
        return frozenset(f for e in self.edges for f in e.faces)

    def interior_vertices(self) -> Tuple[Vertex, ...]:
        return tuple(sorted(
            v for v in self.vertices() if star_edges(v) <= self.edges
        ))

    def interior_faces(self) -> Tuple[Face, ...]:
        return tuple(sorted(
            f for f in self.faces() if face_edges(f) <= self.edges
        ))

    def interior_sites(self) -> Tuple[Site, ...]:
        """Interior vertices followed by interior faces, each sorted."""
        return self.interior_vertices() + self.interior_faces()

    def bounding_box(self) -> Tuple[int, int, int, int]:
        """``(xmin, xmax, ymin, ymax)`` over the touched vertices.

        Raises:
            ValueError: If the patch is empty.
        """
        verts = self.vertices()
        if not verts:
            raise ValueError("Empty patch has no bounding box")
        xs = [v.x for v in verts]
        ys = [v.y for v in verts]
        return min(xs), max(xs), min(ys), max(ys)


def rectangle_patch(xmin: int, xmax: int, ymin: int, ymax: int) -> Patch:
    """All edges with both endpoints in ``[xmin, xmax] × [ymin, ymax]``.

    Raises:
        ValueError: If the rectangle is empty.
    """
    if xmax < xmin or ymax < ymin:
        raise ValueError(
            f"Empty rectangle [{xmin},{xmax}]x[{ymin},{ymax}]"
        )
    edges = set()
    for y in range(ymin, ymax + 1):
        for x in range(xmin, xmax):
            edges.add(h_edge(x, y))
    for x in range(xmin, xmax + 1):
        for y in range(ymin, ymax):
            edges.add(v_edge(x, y))
    return Patch(frozenset(edges))


def box_patch(center: Vertex, n: int) -> Patch:
    """All edges with both endpoints in ``{-n, …, n}² + center``.

    Raises:
        ValueError: If ``n < 1``.
    """
    if n < 1:
        raise ValueError(f"Box size must be >= 1, got {n}")
    return rectangle_patch(center.x - n, center.x + n,
                           center.y - n, center.y + n)


def box_parameters(patch: Patch) -> Optional[Tuple[Vertex, int]]:
    """Recognise a box patch.

    Returns:
        ``(center, n)`` if *patch* equals ``box_patch(center, n)``,
        else ``None``.
    """
    if not patch.edges:
        return None
    xmin, xmax, ymin, ymax = patch.bounding_box()
    width, height = xmax - xmin, ymax - ymin
    if width != height or width < 2 or width % 2:
        return None
    n = width // 2
    center = Vertex(xmin + n, ymin + n)
    if box_patch(center, n).edges != patch.edges:
        return None
    return center, n


def _require_box(patch: Patch) -> Tuple[Vertex, int]:
    params = box_parameters(patch)
    if params is None:
        raise ValueError(
            f"Closure is only defined for box patches; got a patch "
            f"of {len(patch)} edges that is not a box"
        )
    return params


def boundary_dual_path(patch: Patch) -> "LatticePath":
    """The closed dual path surrounding a box patch.

    The path runs through the ring of faces just outside the box,
    counterclockwise, starting from the lower-left corner face.  It
    crosses every edge with exactly one endpoint in the box, once.

    Raises:
        ValueError: If *patch* is not a box.
    """
    center, n = _require_box(patch)
    lo_x, hi_x = center.x - n - 1, center.x + n
    lo_y, hi_y = center.y - n - 1, center.y + n

    ring: List[Face] = []
    for x in range(lo_x, hi_x):
        ring.append(Face(Vertex(x, lo_y)))
    for y in range(lo_y, hi_y):
        ring.append(Face(Vertex(hi_x, y)))
    for x in range(hi_x, lo_x, -1):
        ring.append(Face(Vertex(x, hi_y)))
    for y in range(hi_y, lo_y, -1):
        ring.append(Face(Vertex(lo_x, y)))
    ring.append(ring[0])

    crossed = [_dual_step(a, b) for a, b in zip(ring, ring[1:])]
    return LatticePath(tuple(crossed), PathKind.DUAL)


def closure_patch(patch: Patch) -> Patch:
    """The box plus every edge crossed by its surrounding dual path.

    Raises:
        ValueError: If *patch* is not a box.
    """
    ring = boundary_dual_path(patch)
    return Patch(patch.edges | frozenset(ring.edges))


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------

def _dual_step(a: Face, b: Face) -> Edge:
    """The direct edge separating two adjacent faces."""
    dx, dy = b.x - a.x, b.y - a.y
    if (dx, dy) == (1, 0):
        return v_edge(b.x, b.y)
    if (dx, dy) == (-1, 0):
        return v_edge(a.x, a.y)
    if (dx, dy) == (0, 1):
        return h_edge(b.x, b.y)
    if (dx, dy) == (0, -1):
        return h_edge(a.x, a.y)
    raise ValueError(f"Faces {a} and {b} are not adjacent")


def _direct_step(a: Vertex, b: Vertex) -> Edge:
    """The edge joining two adjacent vertices."""
    dx, dy = b.x - a.x, b.y - a.y
    if (dx, dy) == (1, 0):
        return h_edge(a.x, a.y)
    if (dx, dy) == (-1, 0):
        return h_edge(b.x, b.y)
    if (dx, dy) == (0, 1):
        return v_edge(a.x, a.y)
    if (dx, dy) == (0, -1):
        return v_edge(b.x, b.y)
    raise ValueError(f"Vertices {a} and {b} are not adjacent")


def _incident(edge: Edge, kind: PathKind) -> Tuple[Site, Site]:
    return edge.endpoints if kind is PathKind.DIRECT else edge.faces


def _walk(edges: Sequence[Edge], kind: PathKind) -> Tuple[Site, ...]:
    """Site sequence visited by a path, or raise if it is not a path."""
    if len(edges) == 1:
        return _incident(edges[0], kind)

    first = set(_incident(edges[0], kind))
    second = set(_incident(edges[1], kind))
    shared = first & second
    if len(shared) != 1:
        raise ValueError(
            f"Edges {edges[0]} and {edges[1]} do not share exactly one "
            f"{'vertex' if kind is PathKind.DIRECT else 'face'}"
        )
    (start,) = first - shared
    sites: List[Site] = [start]
    current = start
    for edge in edges:
        a, b = _incident(edge, kind)
        if current == a:
            current = b
        elif current == b:
            current = a
        else:
            raise ValueError(f"Path is discontinuous at edge {edge}")
        sites.append(current)
    return tuple(sites)


@dataclass(frozen=True)
class LatticePath:
    """A finite, continuous, non self-intersecting path.

    Attributes:
        edges: Ordered edges of a direct path, or ordered crossed
            edges of a dual path.
        kind: :attr:`PathKind.DIRECT` or :attr:`PathKind.DUAL`.

    Raises:
        ValueError: On construction, if the edge list is empty,
            repeats an edge, is discontinuous or revisits a site
            other than by closing up at its start.
    """

    edges: Tuple[Edge, ...]
    kind: PathKind = PathKind.DIRECT

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple(self.edges))
        if not self.edges:
            raise ValueError("A lattice path needs at least one edge")
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("Lattice path repeats an edge")
        sites = _walk(self.edges, self.kind)
        body = sites[:-1] if sites[0] == sites[-1] else sites
        if len(set(body)) != len(body):
            raise ValueError("Lattice path is self-intersecting")
        object.__setattr__(self, "_sites", sites)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def sites(self) -> Tuple[Site, ...]:
        """Visited vertices (direct) or faces (dual), in order."""
        return self._sites  # type: ignore[attr-defined]

    @property
    def is_closed(self) -> bool:
        return len(self.edges) > 2 and self.sites[0] == self.sites[-1]

    @property
    def endpoints(self) -> FrozenSet[Site]:
        """``∂ρ``: the two end sites, empty for a closed path."""
        if self.is_closed:
            return frozenset()
        return frozenset((self.sites[0], self.sites[-1]))


def path_through(sites: Sequence[Site]) -> LatticePath:
    """Build a path from a sequence of adjacent vertices or faces."""
    if len(sites) < 2:
        raise ValueError("A path needs at least two sites")
    if all(isinstance(s, Vertex) for s in sites):
        steps = [_direct_step(a, b) for a, b in zip(sites, sites[1:])]
        return LatticePath(tuple(steps), PathKind.DIRECT)
    if all(isinstance(s, Face) for s in sites):
        steps = [_dual_step(a, b) for a, b in zip(sites, sites[1:])]
        return LatticePath(tuple(steps), PathKind.DUAL)
    raise ValueError("Path sites must be all vertices or all faces")


def straight_path(w: Site, n: int) -> LatticePath:
    """First *n* steps of the rightward straight path starting at *w*.

    A direct path for a vertex, a dual path for a face.

    Raises:
        ValueError: If ``n < 1``.
    """
    if n < 1:
        raise ValueError(f"Path length must be >= 1, got {n}")
    if isinstance(w, Vertex):
        return path_through([Vertex(w.x + i, w.y) for i in range(n + 1)])
    if isinstance(w, Face):
        return path_through(
            [Face(Vertex(w.x + i, w.y)) for i in range(n + 1)]
        )
    raise ValueError(f"Not a lattice site: {w!r}")


def _coords(s: Site) -> Tuple[int, int]:
    return s.x, s.y


def _make_site(template: Site, x: int, y: int) -> Site:
    return Vertex(x, y) if isinstance(template, Vertex) else Face(Vertex(x, y))


def _line(template: Site, start: Tuple[int, int],
          stop: Tuple[int, int]) -> List[Site]:
    (x0, y0), (x1, y1) = start, stop
    sx = (x1 > x0) - (x1 < x0)
    sy = (y1 > y0) - (y1 < y0)
    out = []
    x, y = x0, y0
    while (x, y) != (x1, y1):
        x, y = x + sx, y + sy
        out.append(_make_site(template, x, y))
    return out


def l_path(a: Site, b: Site,
           routing: Routing = Routing.HORIZONTAL_FIRST) -> LatticePath:
    """L-shaped path from *a* to *b* on the lattice matching their type.

    Raises:
        ValueError: If the sites coincide or have different types.
    """
    if type(a) is not type(b):
        raise ValueError(f"Cannot route between {a} and {b}")
    if a == b:
        raise ValueError(f"Cannot route from {a} to itself")
    (ax, ay), (bx, by) = _coords(a), _coords(b)
    corner = (bx, ay) if routing is Routing.HORIZONTAL_FIRST else (ax, by)
    sites = [a] + _line(a, (ax, ay), corner) + _line(a, corner, (bx, by))
    return path_through(sites)


def crossed_faces(edges: Iterable[Edge]) -> FrozenSet[Face]:
    """Faces adjacent to an odd number of the given edges."""
    out: set = set()
    for e in edges:
        out.symmetric_difference_update(e.faces)
    return frozenset(out)


def edge_boundary(edges: Iterable[Edge]) -> FrozenSet[Vertex]:
    """Vertices incident to an odd number of the given edges."""
    out: set = set()
    for e in edges:
        out.symmetric_difference_update(e.endpoints)
    return frozenset(out)
