"""Spherical Delaunay triangulation through the convex hull.

Four points of the unit sphere are cocircular exactly when they are coplanar,
and the spherical Delaunay triangulation is the boundary of the convex hull.
All predicates reduce to the sign of

    det[q - p, r - p, s - p]

evaluated in double precision, with a forward error filter; anything that the
filter cannot certify is recomputed exactly with :class:`fractions.Fraction`
(every double is an exact rational). ``eps`` thresholds are applied on top of
the certified value and only decide what counts as degenerate.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .complex import Triangulation
from .errors import DegenerateFace, GeneralPositionViolation

EPS_GEO = 1e-9
EPS_NORM = 1e-12
# relative forward error bound for a 3x3 determinant of float differences;
# about ten times looser than the classical orient3d constant
_ERR = 1e-14


@dataclass(frozen=True)
class Violation:
    kind: str  # "coincident", "great-circle", "cocircular"
    indices: tuple
    value: float

    def __str__(self):
        return f"{self.kind} {self.indices} (|det| = {abs(self.value):.3g})"


def as_points(points, eps_norm: float = EPS_NORM) -> np.ndarray:
    """Check an ``(n, 3)`` array of unit vectors and return it as float64."""
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[1] != 3:
        raise ValueError(f"expected an (n, 3) array of points, got shape {P.shape}")
    err = np.abs(np.linalg.norm(P, axis=1) - 1.0)
    if np.any(err > eps_norm):
        bad = int(np.argmax(err))
        raise ValueError(f"point {bad} is off the unit sphere by {err[bad]:.3g}")
    return P


def normalize(points) -> np.ndarray:
    P = np.asarray(points, dtype=float)
    return P / np.linalg.norm(P, axis=-1, keepdims=True)


def _exact_det3(rows) -> Fraction:
    (a, b, c), (d, e, f), (g, h, i) = [[Fraction(float(x)) for x in r] for r in rows]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def exact_coplanarity_det(p, q, r, s) -> Fraction:
    p, q, r, s = ([Fraction(float(x)) for x in v] for v in (p, q, r, s))
    rows = [[b - a for a, b in zip(p, v)] for v in (q, r, s)]
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def coplanarity_det(p, q, r, s) -> float:
    """``det[q - p, r - p, s - p]``; zero iff the four sphere points are cocircular.

    The sign is certified: when the float value is below its error bound the
    exact rational determinant is used instead.
    """
    (p0, p1, p2), (q0, q1, q2), (r0, r1, r2), (s0, s1, s2) = (map(float, v) for v in (p, q, r, s))
    a, b, c = q0 - p0, q1 - p1, q2 - p2
    d, e, f = r0 - p0, r1 - p1, r2 - p2
    g, h, i = s0 - p0, s1 - p1, s2 - p2
    det = g * (b * f - c * e) + h * (c * d - a * f) + i * (a * e - b * d)
    bound = abs(g) * (abs(b * f) + abs(c * e)) + abs(h) * (abs(c * d) + abs(a * f)) + abs(i) * (abs(a * e) + abs(b * d))
    if abs(det) <= _ERR * bound:
        return float(exact_coplanarity_det(p, q, r, s))
    return det


def _cross(u, v):
    # np.cross is several times slower on small stacks
    return np.stack(
        [u[..., 1] * v[..., 2] - u[..., 2] * v[..., 1],
         u[..., 2] * v[..., 0] - u[..., 0] * v[..., 2],
         u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]],
        axis=-1,
    )


def _abs_cross(u, v):
    # |u_y v_z| + |u_z v_y| etc.: a bound on the magnitude of every cross-product term
    u, v = np.abs(u), np.abs(v)
    return np.stack(
        [u[..., 1] * v[..., 2] + u[..., 2] * v[..., 1],
         u[..., 2] * v[..., 0] + u[..., 0] * v[..., 2],
         u[..., 0] * v[..., 1] + u[..., 1] * v[..., 0]],
        axis=-1,
    )


def orientation_det(p, q, r) -> float:
    """``det[p, q, r]``; zero iff the three sphere points lie on a great circle."""
    M = np.array([p, q, r], dtype=float)
    det = float(np.linalg.det(M))
    if abs(det) <= 1e-12:
        return float(_exact_det3(M))
    return det


def in_circumcircle(face, s, eps: float = EPS_GEO) -> int:
    """Which side of the circumcircle of ``face = (p, q, r)`` the point ``s`` is on.

    ``+1``: strictly inside the cap towards which ``(q - p) x (r - p)`` points
    (for an outward-oriented hull face, the empty cap); ``-1``: strictly on the
    other side; ``0``: within ``eps`` of the circle.
    """
    p, q, r = face
    if abs(orientation_det(p, q, r)) <= eps:
        raise DegenerateFace("face vertices lie on a common great circle")
    det = coplanarity_det(p, q, r, s)
    if abs(det) <= eps:
        return 0
    return 1 if det > 0 else -1


def _certified_dets(P, A, B, C, skip):
    """Vectorised det[B - A, C - A, P_s - A] for every triple and every point.

    Returns ``D`` of shape ``(m, n)``; entries the error filter cannot certify
    are replaced by their exact value, entries masked by ``skip`` are zeroed.
    """
    U, V = B - A, C - A
    N = _cross(U, V)
    W = P[None, :, :] - A[:, None, :]
    D = np.einsum("mnk,mk->mn", W, N)
    bound = _ERR * np.einsum("mnk,mk->mn", np.abs(W), _abs_cross(U, V))
    uncertain = (np.abs(D) <= bound) & ~skip
    D[skip] = 0.0
    for mi, si in zip(*np.nonzero(uncertain)):
        D[mi, si] = float(exact_coplanarity_det(A[mi], B[mi], C[mi], P[si]))
    return D


def is_general_position(points, eps: float = EPS_GEO) -> list[Violation]:
    """Coincident pairs, great-circle triples and cocircular quadruples within ``eps``."""
    P = np.asarray(points, dtype=float)
    n = len(P)
    out: list[Violation] = []
    for i, j in itertools.combinations(range(n), 2):
        dist = float(np.linalg.norm(P[i] - P[j]))
        if dist <= eps:
            out.append(Violation("coincident", (i, j), dist))
    if n >= 3:
        tri = np.array(list(itertools.combinations(range(n), 3)))
        dets = np.linalg.det(P[tri])
        for m in np.nonzero(np.abs(dets) <= max(eps, 1e-12))[0]:
            d = float(_exact_det3(P[tri[m]]))
            if abs(d) <= eps:
                out.append(Violation("great-circle", tuple(int(v) for v in tri[m]), d))
    if n >= 4:
        quad = np.array(list(itertools.combinations(range(n), 4)))
        A, B, C, S = (P[quad[:, c]] for c in range(4))
        U, V, W = B - A, C - A, S - A
        N = _cross(U, V)
        D = np.einsum("mk,mk->m", W, N)
        bound = _ERR * np.einsum("mk,mk->m", np.abs(W), _abs_cross(U, V))
        for m in np.nonzero(np.abs(D) <= np.maximum(bound, eps))[0]:
            d = float(exact_coplanarity_det(A[m], B[m], C[m], S[m]))
            if abs(d) <= eps:
                out.append(Violation("cocircular", tuple(int(v) for v in quad[m]), d))
    return out


@functools.lru_cache(maxsize=64)
def _triples(n: int):
    tri = np.array(list(itertools.combinations(range(n), 3)))
    own = np.zeros((len(tri), n), dtype=bool)
    rows = np.arange(len(tri))
    for c in range(3):
        own[rows, tri[:, c]] = True
    tri.flags.writeable = False
    own.flags.writeable = False
    return tri, own


def hull_faces(points, eps: float = 0.0) -> list[tuple[int, int, int]]:
    """Outward-oriented convex hull faces by brute force over all triples.

    A triple is a face iff every other point lies strictly on one side of its
    plane. Only degeneracies that make the hull ambiguous are reported: a
    candidate triple whose remaining points are on one side except for some
    within ``eps`` of the plane (``eps=0`` means exactly on it).
    """
    P = np.asarray(points, dtype=float)
    n = len(P)
    tri, own = _triples(n)
    A, B, C = P[tri[:, 0]], P[tri[:, 1]], P[tri[:, 2]]
    D = _certified_dets(P, A, B, C, own)
    near = (np.abs(D) <= eps) & ~own
    pos = (D > 0) & ~near & ~own
    neg = (D < 0) & ~near & ~own
    anypos, anyneg, anynear = pos.any(axis=1), neg.any(axis=1), near.any(axis=1)

    bad = np.nonzero(anynear & ~(anypos & anyneg))[0]
    if len(bad):
        viol = []
        for m in bad:
            for s in np.nonzero(near[m])[0]:
                idx = tuple(sorted((*map(int, tri[m]), int(s))))
                viol.append(Violation("cocircular", idx, float(D[m, s])))
        raise GeneralPositionViolation(sorted(set(viol), key=lambda v: v.indices))

    faces = []
    for m in np.nonzero(~anynear & ~anypos)[0]:
        i, j, k = map(int, tri[m])
        faces.append((i, j, k))
    for m in np.nonzero(~anynear & ~anyneg)[0]:
        i, j, k = map(int, tri[m])
        faces.append((i, k, j))
    if len(faces) != 2 * n - 4:
        raise GeneralPositionViolation([f"hull has {len(faces)} faces, expected {2 * n - 4}"])
    return faces


def delaunay(points, eps: float = EPS_GEO, general_position: bool = True) -> Triangulation:
    """Spherical Delaunay triangulation of ``points`` (vertex ids are row indices).

    With ``general_position=True`` the whole configuration must pass
    :func:`is_general_position`. Otherwise only degeneracies that make the
    triangulation itself ambiguous are rejected, which is what a moving
    configuration needs between sample times.
    """
    P = as_points(points)
    n = len(P)
    if n < 4:
        raise GeneralPositionViolation([f"need at least 4 points, got {n}"])
    if general_position:
        viol = is_general_position(P, eps)
        if viol:
            raise GeneralPositionViolation(viol)
    return Triangulation(hull_faces(P, eps))


def delaunay_oracle_violations(points, t: Triangulation, eps: float = EPS_GEO) -> list[str]:
    """Exhaustive empty-circumcircle check, one point and one face at a time."""
    P = np.asarray(points, dtype=float)
    out = []
    for f in sorted(t.faces):
        face = tuple(P[v] for v in f)
        for s in range(len(P)):
            if s in f:
                continue
            side = in_circumcircle(face, P[s], eps)
            if side != -1:
                out.append(f"face {f}: point {s} has side {side}")
    return out


def random_points(n: int, seed: int) -> np.ndarray:
    """``n`` uniform points on the sphere (normalised Gaussians)."""
    return normalize(np.random.default_rng(seed).normal(size=(n, 3)))
