"""Combinatorial triangulated spheres and disk patches with edge flips.

Vertices are integer ids. An edge is the sorted pair ``(u, v)``, ``u < v``; a
face is an oriented triple stored in the rotation that puts its smallest id
first, so two complexes are equal exactly when their oriented face sets are.
"""

from __future__ import annotations

import functools
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import BoundaryEdge, DegenerateQuad, DuplicateEdge, MissingEdge

Edge = tuple[int, int]
Face = tuple[int, int, int]


def edge_key(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"loop edge at vertex {u}")
    return (u, v) if u < v else (v, u)


def canonical_face(face: Iterable[int]) -> Face:
    a, b, c = face
    if b < a and b < c:
        return (b, c, a)
    if c < a and c < b:
        return (c, a, b)
    return (a, b, c)


def edge_str(e: Edge) -> str:
    return f"{e[0]}-{e[1]}"


def parse_edge(text: str) -> Edge:
    u, _, v = text.partition("-")
    return edge_key(int(u), int(v))


@functools.lru_cache(maxsize=4096)
def _structure(faces: frozenset):
    # shared by every complex with the same faces; treat the results as read-only
    apex: dict = {}
    for a, b, c in faces:
        for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
            apex.setdefault((u, v), []).append(w)
    adj = defaultdict(list)
    for f in sorted(faces):
        for i in range(3):
            adj[edge_key(f[i], f[(i + 1) % 3])].append(f)
    adj = dict(adj)
    edges = tuple(sorted(adj))
    return apex, adj, edges, frozenset(edges)


@dataclass(frozen=True)
class Triangulation:
    """A closed triangulated 2-sphere given by its oriented faces."""

    faces: frozenset

    def __init__(self, faces: Iterable[Iterable[int]]):
        object.__setattr__(self, "faces", frozenset(canonical_face(f) for f in faces))

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for f in self.faces for v in f}))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def _apex(self) -> dict:
        # directed edge (u, v) -> third vertex of the face containing u->v
        return _structure(self.faces)[0]

    @property
    def adjacency(self) -> dict:
        """Edge -> list of incident faces."""
        return _structure(self.faces)[1]

    @property
    def edges(self) -> tuple[Edge, ...]:
        return _structure(self.faces)[2]

    @property
    def edge_set(self) -> frozenset:
        return _structure(self.faces)[3]

    def relabel(self, mapping) -> "Triangulation":
        return type(self)([tuple(mapping[v] for v in f) for f in self.faces])

    def face_list(self) -> list[list[int]]:
        return [list(f) for f in sorted(self.faces)]


class Patch(Triangulation):
    """A triangulated disk; boundary edges lie in a single face."""

    @cached_property
    def boundary_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if len(self.adjacency[e]) == 1)

    @cached_property
    def diagonals(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if len(self.adjacency[e]) == 2)


@dataclass(frozen=True)
class Quad:
    """The two faces on either side of ``diagonal``.

    ``cycle`` lists the four corners in the orientation of the complex, starting
    at ``diagonal[0]``; ``boundary[i]`` joins ``cycle[i]`` and ``cycle[i + 1]``,
    so ``boundary[0]``/``boundary[2]`` and ``boundary[1]``/``boundary[3]`` are
    the opposite pairs.
    """

    diagonal: Edge
    cycle: tuple[int, int, int, int]
    boundary: tuple[Edge, Edge, Edge, Edge]
    opposite_vertices: Edge
    faces: tuple[Face, Face]


def _components(vertices, edges) -> int:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in vertices})


def _link_is_cycle(t: Triangulation, v: int) -> bool:
    # link edges of v as directed arcs b -> c from faces (v, b, c)
    succ = {}
    for f in t.faces:
        if v in f:
            i = f.index(v)
            b, c = f[(i + 1) % 3], f[(i + 2) % 3]
            if b in succ:
                return False
            succ[b] = c
    if not succ:
        return False
    start = next(iter(succ))
    cur, steps = start, 0
    while True:
        cur = succ.get(cur)
        steps += 1
        if cur is None:
            return False
        if cur == start:
            return steps == len(succ)
        if steps > len(succ):
            return False


def _orientation_violations(t: Triangulation) -> list[str]:
    out = []
    for f in sorted(t.faces):
        if len(set(f)) != 3:
            out.append(f"face with repeated vertex: {f}")
    for (u, v), ws in sorted(t._apex.items()):
        if len(ws) > 1:
            out.append(f"directed edge {u}->{v} in {len(ws)} faces (inconsistent orientation)")
    return out


def validate(t: Triangulation) -> list[str]:
    """List every violated invariant; an empty list means ``t`` is a valid complex.

    Closed spheres need every edge in exactly two faces, coherent orientation,
    ``E = 3n - 6``, ``F = 2n - 4``, a connected 1-skeleton and cyclic vertex links.
    Patches are checked as disks instead.
    """
    if isinstance(t, Patch):
        return _validate_patch(t)
    out = _orientation_violations(t)
    n, e, f = t.n, len(t.edges), len(t.faces)
    if n < 4:
        out.append(f"too few vertices: n = {n} < 4")
    for edge in t.edges:
        k = len(t.adjacency[edge])
        if k != 2:
            out.append(f"edge in {k} face{'s' if k != 1 else ''}: {edge}")
    if e != 3 * n - 6:
        out.append(f"edge count {e} != 3n-6 = {3 * n - 6}")
    if f != 2 * n - 4:
        out.append(f"face count {f} != 2n-4 = {2 * n - 4}")
    if n - e + f != 2:
        out.append(f"Euler characteristic {n - e + f} != 2")
    if t.vertices and _components(t.vertices, t.edges) != 1:
        out.append("complex is not connected")
    for v in t.vertices:
        if not _link_is_cycle(t, v):
            out.append(f"link of vertex {v} is not a single cycle")
    return out


def _validate_patch(p: Patch) -> list[str]:
    out = _orientation_violations(p)
    for edge in p.edges:
        k = len(p.adjacency[edge])
        if k not in (1, 2):
            out.append(f"edge in {k} faces: {edge}")
    n, e, f = p.n, len(p.edges), len(p.faces)
    if n - e + f != 1:
        out.append(f"Euler characteristic {n - e + f} != 1")
    if p.vertices and _components(p.vertices, p.edges) != 1:
        out.append("patch is not connected")
    # boundary must be one closed cycle through every boundary vertex once
    bverts = defaultdict(int)
    for u, v in p.boundary_edges:
        bverts[u] += 1
        bverts[v] += 1
    if any(k != 2 for k in bverts.values()):
        out.append("boundary is not a simple cycle")
    elif _components(list(bverts), p.boundary_edges) != 1:
        out.append("boundary has more than one component")
    return out


def edge_quad(t: Triangulation, e) -> Quad:
    """The quadrilateral formed by the two faces incident to ``e``."""
    u, v = edge_key(*e)
    if (u, v) not in t.edge_set:
        raise MissingEdge(f"edge {u}-{v} not in complex")
    fwd, back = t._apex.get((u, v)), t._apex.get((v, u))
    if not fwd or not back:
        raise BoundaryEdge(f"edge {u}-{v} lies on the boundary")
    w1, w2 = fwd[0], back[0]
    if w1 == w2:
        raise DegenerateQuad(f"faces on both sides of {u}-{v} share vertex {w1} as well")
    cycle = (u, w2, v, w1)
    boundary = tuple(edge_key(cycle[i], cycle[(i + 1) % 4]) for i in range(4))
    faces = (canonical_face((u, v, w1)), canonical_face((v, u, w2)))
    return Quad((u, v), cycle, boundary, edge_key(w1, w2), faces)


def apply_flip(t: Triangulation, e) -> tuple[Triangulation, Edge]:
    """Replace diagonal ``e`` by the opposite diagonal of its quadrilateral."""
    q = edge_quad(t, e)
    if q.opposite_vertices in t.edge_set:
        raise DuplicateEdge(
            f"flipping {edge_str(q.diagonal)} would duplicate edge {edge_str(q.opposite_vertices)}"
        )
    u, w2, v, w1 = q.cycle
    faces = (t.faces - set(q.faces)) | {canonical_face((u, w2, w1)), canonical_face((w2, v, w1))}
    return type(t)(faces), q.opposite_vertices


def are_far(t: Triangulation, e1, e2) -> bool:
    """True when the quads of ``e1`` and ``e2`` share no face.

    Neither flip may create an edge the other one touches (the other's
    diagonal or its new diagonal), otherwise one of the two orders would
    duplicate an edge.
    """
    if edge_key(*e1) == edge_key(*e2):
        return False
    q1, q2 = edge_quad(t, e1), edge_quad(t, e2)
    if set(q1.faces) & set(q2.faces):
        return False
    return q1.opposite_vertices not in (q2.opposite_vertices, q2.diagonal) and q2.opposite_vertices != q1.diagonal


def pentagon_patch() -> Patch:
    """Pentagon 1..5 triangulated by the fan at vertex 1 (diagonals 1-3, 1-4)."""
    return Patch([(1, 2, 3), (1, 3, 4), (1, 4, 5)])


def tetrahedron() -> Triangulation:
    return Triangulation([(1, 2, 4), (1, 3, 2), (1, 4, 3), (2, 3, 4)])


def bipyramid() -> Triangulation:
    """Double pyramid over the triangle 1-2-3 with apexes 4 (top) and 5 (bottom)."""
    return Triangulation([(1, 2, 4), (2, 3, 4), (3, 1, 4), (2, 1, 5), (3, 2, 5), (1, 3, 5)])


def is_flippable(t: Triangulation, e) -> bool:
    try:
        return edge_quad(t, e).opposite_vertices not in t.edge_set
    except (BoundaryEdge, DegenerateQuad):
        return False


def find_far_pair(t: Triangulation, rng=None):
    """Some pair of flippable far edges (random order when ``rng`` is given), or ``None``."""
    edges = [e for e in t.edges if is_flippable(t, e)]
    if rng is not None:
        rng.shuffle(edges)
    for i, e1 in enumerate(edges):
        for e2 in edges[i + 1:]:
            if are_far(t, e1, e2):
                return e1, e2
    return None
