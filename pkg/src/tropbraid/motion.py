"""Looped point motions on the sphere and the Delaunay flips they induce.

A :class:`MotionPlan` holds one keyframed :class:`Trajectory` per strand; between
keyframes a point travels along the great-circle arc. Flip events are found by
sampling the Delaunay triangulation on a regular grid and bisecting every grid
step across which it changes.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .complex import Edge, Triangulation, apply_flip, are_far, edge_quad, edge_str
from .errors import (
    GeneralPositionViolation,
    IndexOutOfRange,
    LayoutError,
    NonGenericMotion,
    ParseError,
)
from .sphere import _ERR, EPS_GEO, _abs_cross, _cross, coplanarity_det, delaunay, normalize

DT_INIT = 1e-3
DT_MIN = 1e-12


def slerp(p0: np.ndarray, p1: np.ndarray, s: float) -> np.ndarray:
    cos = float(np.clip(np.dot(p0, p1), -1.0, 1.0))
    theta = math.acos(cos)
    if theta < 1e-12:
        v = (1.0 - s) * p0 + s * p1
    else:
        v = (math.sin((1.0 - s) * theta) * p0 + math.sin(s * theta) * p1) / math.sin(theta)
    return v / np.linalg.norm(v)


def _dot3(U, V):
    # elementwise on purpose: batched and single evaluations agree bit for bit
    return U[..., 0] * V[..., 0] + U[..., 1] * V[..., 1] + U[..., 2] * V[..., 2]


def _slerp_rows(P0: np.ndarray, P1: np.ndarray, s) -> np.ndarray:
    """Great-circle interpolation of matching rows; ``s`` broadcasts against ``P0[..., 0]``."""
    s = np.asarray(s, dtype=float)
    theta = np.arccos(np.clip(_dot3(P0, P1), -1.0, 1.0))
    small = theta < 1e-12
    sin = np.where(small, 1.0, np.sin(theta))
    w0 = np.where(small, 1.0 - s, np.sin((1.0 - s) * theta) / sin)
    w1 = np.where(small, s, np.sin(s * theta) / sin)
    V = w0[..., None] * P0 + w1[..., None] * P1
    V = V / np.sqrt(_dot3(V, V))[..., None]
    # keyframes are hit exactly
    V = np.where((s == 0.0)[..., None], P0, V)
    return np.where((s == 1.0)[..., None], P1, V)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray  # (k,) strictly increasing, 0 ... 1
    points: np.ndarray  # (k, 3) unit vectors

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        points = normalize(np.asarray(self.points, dtype=float))
        if times.ndim != 1 or len(times) < 2 or points.shape != (len(times), 3):
            raise ValueError("a trajectory needs at least two (time, point) keyframes")
        if times[0] != 0.0 or times[-1] != 1.0 or np.any(np.diff(times) <= 0):
            raise ValueError("keyframe times must increase strictly from 0 to 1")
        if np.any(np.einsum("ij,ij->i", points[:-1], points[1:]) <= -1.0 + 1e-12):
            raise ValueError("consecutive keyframes are antipodal")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)

    def at(self, t: float) -> np.ndarray:
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"time {t} outside [0, 1]")
        k = int(np.searchsorted(self.times, t, side="right")) - 1
        if k >= len(self.times) - 1:
            return self.points[-1]
        t0, t1 = self.times[k], self.times[k + 1]
        return slerp(self.points[k], self.points[k + 1], (t - t0) / (t1 - t0))


@dataclass(frozen=True)
class MotionPlan:
    """``n`` trajectories forming a loop in the unordered configuration space.

    ``permutation[i]`` is the index of the starting point at whose position
    strand ``i`` ends; a pure braid has the identity permutation.
    """

    trajectories: tuple
    permutation: tuple = field(init=False)

    def __init__(self, trajectories: Sequence[Trajectory], eps: float = EPS_GEO):
        object.__setattr__(self, "trajectories", tuple(trajectories))
        start = np.array([tr.points[0] for tr in self.trajectories])
        end = np.array([tr.points[-1] for tr in self.trajectories])
        perm = []
        for i, p in enumerate(end):
            dist = np.linalg.norm(start - p, axis=1)
            j = int(np.argmin(dist))
            if dist[j] > eps:
                raise ValueError(f"strand {i} does not end on a starting point (off by {dist[j]:.3g})")
            perm.append(j)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError("end positions do not permute the start positions")
        object.__setattr__(self, "permutation", tuple(perm))
        groups: dict = {}
        for i, tr in enumerate(self.trajectories):
            groups.setdefault(tr.times.tobytes(), []).append(i)
        object.__setattr__(self, "_groups", [
            (self.trajectories[idx[0]].times, np.array(idx),
             np.stack([self.trajectories[i].points for i in idx], axis=1))
            for idx in groups.values()
        ])

    @property
    def n(self) -> int:
        return len(self.trajectories)

    @property
    def is_pure(self) -> bool:
        return self.permutation == tuple(range(self.n))

    def at(self, t: float) -> np.ndarray:
        """Configuration at time ``t`` as an ``(n, 3)`` array."""
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"time {t} outside [0, 1]")
        return self.at_many(np.array([t]))[0]

    def at_many(self, ts) -> np.ndarray:
        """Configurations at the times ``ts`` as a ``(len(ts), n, 3)`` array."""
        ts = np.asarray(ts, dtype=float)
        out = np.empty((len(ts), self.n, 3))
        # strands keyed at the same times are interpolated together
        for times, idx, frames in self._groups:
            k = np.minimum(np.searchsorted(times, ts, side="right") - 1, len(times) - 2)
            s = (ts - times[k]) / (times[k + 1] - times[k])
            out[:, idx] = _slerp_rows(frames[k], frames[k + 1], s[:, None])
        return out

    def keyframe_times(self) -> np.ndarray:
        return np.unique(np.concatenate([tr.times for tr in self.trajectories]))

    def with_common_keyframes(self) -> "MotionPlan":
        """Same motion, every trajectory keyed at the union of all keyframe times."""
        times = self.keyframe_times()
        return MotionPlan([Trajectory(times, [tr.at(t) for t in times]) for tr in self.trajectories])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "trajectories": [
                [[float(t), [float(c) for c in p]] for t, p in zip(tr.times, tr.points)]
                for tr in self.trajectories
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MotionPlan":
        trs = []
        for keys in data["trajectories"]:
            trs.append(Trajectory([k[0] for k in keys], [k[1] for k in keys]))
        if "n" in data and data["n"] != len(trs):
            raise ValueError(f"n = {data['n']} but {len(trs)} trajectories given")
        return cls(trs)


def eval_plan(plan: MotionPlan, t: float) -> np.ndarray:
    return plan.at(t)


def constant_plan(points) -> MotionPlan:
    P = normalize(points)
    return MotionPlan([Trajectory([0.0, 1.0], [p, p]) for p in P])


def reparametrize(plan: MotionPlan, inverse: Callable[[float], float]) -> MotionPlan:
    """Run the same path on a new clock.

    ``inverse`` maps an old time to the new time at which it is reached; for
    the reparametrisation ``t -> t**2`` pass ``math.sqrt``. Keyframes are first
    made common to all strands so every strand is warped identically.
    """
    common = plan.with_common_keyframes()
    times = np.array([inverse(float(t)) for t in common.keyframe_times()])
    times[0], times[-1] = 0.0, 1.0
    return MotionPlan([Trajectory(times, tr.points) for tr in common.trajectories])


def _random_tangent(rng, p: np.ndarray, magnitude: float) -> np.ndarray:
    d = rng.normal(size=3)
    d -= np.dot(d, p) * p
    return d / np.linalg.norm(d) * magnitude * rng.uniform(0.5, 1.0)


def jitter(plan: MotionPlan, magnitude: float, seed: int) -> MotionPlan:
    """Move every keyframe by at most ``magnitude``, keeping the loop closed."""
    rng = np.random.default_rng(seed)
    start_shift = [_random_tangent(rng, tr.points[0], magnitude) for tr in plan.trajectories]
    trs = []
    for i, tr in enumerate(plan.trajectories):
        shift = np.array([_random_tangent(rng, p, magnitude) for p in tr.points])
        shift[0] = start_shift[i]
        shift[-1] = start_shift[plan.permutation[i]]
        trs.append(Trajectory(tr.times, tr.points + shift))
    return MotionPlan(trs)


# --------------------------------------------------------------------------
# braid words


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple  # of (generator index 1..n-1, sign +1/-1)

    def __str__(self):
        return " ".join(f"s{i}" + ("" if e > 0 else "^-1") for i, e in self.letters)

    def permutation(self) -> tuple[int, ...]:
        """Final position of each strand (0-based)."""
        occ = list(range(self.n))
        for i, _ in self.letters:
            occ[i - 1], occ[i] = occ[i], occ[i - 1]
        perm = [0] * self.n
        for pos, strand in enumerate(occ):
            perm[strand] = pos
        return tuple(perm)


_LETTER = re.compile(r"s(\d+)(\^-1)?")


def parse_braid_word(text: str, n: int) -> BraidWord:
    """Parse ``"s1 s2^-1 s1"``: whitespace separated letters ``s<i>`` or ``s<i>^-1``."""
    letters = []
    for m in re.finditer(r"\S+", text):
        tok = _LETTER.fullmatch(m.group())
        if tok is None:
            raise ParseError(f"bad braid letter {m.group()!r}", m.start())
        i = int(tok.group(1))
        if not 1 <= i <= n - 1:
            raise IndexOutOfRange(f"generator s{i} out of range for n = {n} (1..{n - 1})")
        letters.append((i, -1 if tok.group(2) else 1))
    return BraidWord(n, tuple(letters))


def _rotate(v: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    # Rodrigues
    c, s = math.cos(angle), math.sin(angle)
    return v * c + np.cross(axis, v) * s + axis * np.dot(axis, v) * (1 - c)


def base_layout(n: int, seed: int = 0, latitude: float = 45.0) -> np.ndarray:
    """Base points near one circle of latitude, equally spaced in longitude.

    A seeded perturbation of latitude and longitude (a fraction of the
    spacing) breaks the cocircularity of the exact ring.
    """
    if n < 2:
        raise LayoutError("need at least two strands")
    rng = np.random.default_rng(seed)
    spacing = 2 * math.pi / n
    lat0 = math.radians(latitude)
    arc = spacing * math.cos(lat0)
    lat = lat0 + rng.uniform(-0.25, 0.25, n) * arc
    lon = np.arange(n) * spacing + rng.uniform(-0.1, 0.1, n) * spacing
    return np.stack([np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)], axis=1)


def _check_caps(P: np.ndarray, margin: float = 1.2) -> None:
    n = len(P)
    for i in range(n - 1):
        m = normalize(P[i] + P[i + 1])
        radius = math.acos(float(np.clip(np.dot(m, P[i]), -1, 1)))
        for j in range(n):
            if j in (i, i + 1):
                continue
            d = math.acos(float(np.clip(np.dot(m, P[j]), -1, 1)))
            if d <= margin * radius:
                raise LayoutError(f"swap cap of positions {i + 1},{i + 2} reaches point {j + 1}")


def word_to_motion(word: BraidWord, seed: int = 0, latitude: float = 45.0, steps: int = 12) -> MotionPlan:
    """Realise a braid word as a looped motion.

    Letter ``s_i^{+-1}`` rotates the points at positions ``i`` and ``i + 1`` by
    ``+-pi`` (right-hand rule about the outward axis) around their spherical
    midpoint; letters occupy consecutive equal time slots. Every strand is
    keyed at the same ``steps + 1`` times per slot.
    """
    P = base_layout(word.n, seed, latitude)
    _check_caps(P)
    n, L = word.n, len(word.letters)
    if L == 0:
        return MotionPlan([Trajectory([0.0, 1.0], [p, p]) for p in P])
    times = np.linspace(0.0, 1.0, L * steps + 1)
    frames = np.empty((len(times), n, 3))
    occ = list(range(n))  # occ[position] = strand
    pos_of = list(range(n))  # pos_of[strand] = position
    for k, (i, sign) in enumerate(word.letters):
        a, b = occ[i - 1], occ[i]
        axis = normalize(P[i - 1] + P[i])
        for s in range(steps + 1):
            row = k * steps + s
            for strand in range(n):
                frames[row, strand] = P[pos_of[strand]]
            angle = sign * math.pi * s / steps
            frames[row, a] = _rotate(P[i - 1], axis, angle)
            frames[row, b] = _rotate(P[i], axis, angle)
        # exact endpoints so the loop closes bit for bit
        frames[k * steps + steps, a] = P[i]
        frames[k * steps + steps, b] = P[i - 1]
        occ[i - 1], occ[i] = b, a
        pos_of[a], pos_of[b] = i, i - 1
    return MotionPlan([Trajectory(times, frames[:, s]) for s in range(n)])


# --------------------------------------------------------------------------
# pentagon plans


def pentagon_motion(seed: int = 0, spectators: int = 2, radius: float = 0.6,
                    amplitude: float = 0.02, steps: int = 64) -> MotionPlan:
    """Five points circling the codimension-two locus where all five are cocircular.

    The five points sit near a circle of angular radius ``radius`` about a
    random axis; their offsets from it sweep once around the two-dimensional
    space of perturbations that no circle absorbs, so each of the five
    quadruples becomes cocircular with an empty cap exactly once. Strands
    ``0..4`` are the pentagon in cyclic order; the remaining strands are fixed
    spectators far from the circle.
    """
    rng = np.random.default_rng(seed)
    axis = normalize(rng.normal(size=3))
    e1 = normalize(np.cross(axis, [0.3, 0.5, 0.8] if abs(axis[2]) < 0.9 else [1.0, 0.0, 0.0]))
    e2 = np.cross(axis, e1)
    gaps = rng.uniform(0.7, 1.3, 5)
    theta = np.cumsum(gaps / gaps.sum() * 2 * math.pi)
    # offsets orthogonal to those induced by moving the circle (1, cos, sin)
    circle_modes = np.stack([np.ones(5), np.cos(theta), np.sin(theta)], axis=1)
    q, _ = np.linalg.qr(np.concatenate([circle_modes, rng.normal(size=(5, 2))], axis=1))
    u, v = q[:, 3], q[:, 4]
    phase = rng.uniform(0, 2 * math.pi)

    times = np.linspace(0.0, 1.0, steps + 1)
    frames = []
    for t in times:
        phi = phase + 2 * math.pi * t
        r = radius + amplitude * (math.cos(phi) * u + math.sin(phi) * v)
        frames.append(np.cos(r)[:, None] * axis + np.sin(r)[:, None] * (
            np.cos(theta)[:, None] * e1 + np.sin(theta)[:, None] * e2))
    frames = np.array(frames)
    frames[-1] = frames[0]
    trs = [Trajectory(times, frames[:, i]) for i in range(5)]
    fixed: list[np.ndarray] = []
    while len(fixed) < spectators:
        p = normalize(rng.normal(size=3))
        # far side of the sphere, and no circle through a spectator may be
        # crossed by the moving points: every such quadruple keeps a clear sign
        if np.dot(p, axis) < -0.3 and _spectator_clear(frames, fixed + [p]):
            fixed.append(p)
    trs += [Trajectory([0.0, 1.0], [p, p]) for p in fixed]
    return MotionPlan(trs)


def _spectator_clear(frames: np.ndarray, fixed: list, margin: float = 1e-3) -> bool:
    """The newest spectator keeps every circle through it clear of the motion."""
    new = 5 + len(fixed) - 1
    signs: dict = {}
    for frame in frames:
        P = np.concatenate([frame, np.array(fixed)])
        for rest in itertools.combinations(range(new), 3):
            d = coplanarity_det(*P[list(rest)], P[new])
            if abs(d) < margin or signs.setdefault(rest, d > 0) != (d > 0):
                return False
    return True


# --------------------------------------------------------------------------
# flip events


@dataclass(frozen=True)
class FlipEvent:
    time: float
    bracket: tuple[float, float]
    flipped: Edge
    created: Edge
    quad: tuple[int, int, int, int]

    def to_json(self) -> dict:
        return {
            "time": self.time,
            "bracket": list(self.bracket),
            "flipped": edge_str(self.flipped),
            "created": edge_str(self.created),
            "quad": list(self.quad),
        }


@dataclass(frozen=True)
class FlipSequence:
    events: tuple
    triangulations: tuple  # T_1 ... T_{l+1}
    permutation: tuple

    def __len__(self):
        return len(self.events)

    @property
    def flipped_edges(self) -> list[Edge]:
        return [ev.flipped for ev in self.events]

    def to_json(self) -> dict:
        return {
            "n": self.triangulations[0].n,
            "events": [ev.to_json() for ev in self.events],
            "initial_faces": self.triangulations[0].face_list(),
            "final_faces": self.triangulations[-1].face_list(),
            "permutation": list(self.permutation),
        }


def _triangulate(plan: MotionPlan, t: float) -> Triangulation:
    try:
        return delaunay(plan.at(t), eps=0.0, general_position=False)
    except GeneralPositionViolation as exc:
        raise NonGenericMotion(f"exactly degenerate configuration at t = {t!r}: {exc}") from exc


_BLOCK = 64


def _still_delaunay(T: Triangulation, frames: np.ndarray) -> np.ndarray:
    """For each configuration in ``frames``, whether ``T`` is certainly its Delaunay triangulation.

    True when every other point lies strictly inside every face plane, with
    the sign certified by a forward error bound; undecided cases read False.
    """
    F = np.array(sorted(T.faces))
    own = np.zeros((len(F), frames.shape[1]), dtype=bool)
    for c in range(3):
        own[np.arange(len(F)), F[:, c]] = True
    A, B, C = frames[:, F[:, 0]], frames[:, F[:, 1]], frames[:, F[:, 2]]
    U, V = B - A, C - A
    N = _cross(U, V)
    W = frames[:, None, :, :] - A[:, :, None, :]
    D = np.einsum("bfnk,bfk->bfn", W, N)
    bound = _ERR * np.einsum("bfnk,bfk->bfn", np.abs(W), _abs_cross(U, V))
    return ((D < -bound) | own).all(axis=(1, 2))


def _single_flip(Ta: Triangulation, Tb: Triangulation):
    gone = Ta.edge_set - Tb.edge_set
    new = Tb.edge_set - Ta.edge_set
    if len(gone) != 1 or len(new) != 1:
        return None
    (e,) = gone
    try:
        flipped, created = apply_flip(Ta, e)
    except Exception:
        return None
    if flipped != Tb or created != next(iter(new)):
        return None
    return e, created


def detect_flip_events(plan: MotionPlan, eps: float = EPS_GEO, dt: float = DT_INIT,
                       dt_min: float = DT_MIN) -> FlipSequence:
    """Sample-and-bisect extraction of the Delaunay flip sequence of ``plan``.

    Endpoints must be in general position up to ``eps``. In between, the
    triangulation is taken with exact predicate signs; each change is bisected
    until its bracket is at most ``dt_min`` wide and must then be one flip
    whose quadruple changes coplanarity sign across the bracket.
    """
    if not dt_min < dt:
        raise ValueError("dt_min must be smaller than dt")
    T0 = delaunay(plan.at(0.0), eps)
    delaunay(plan.at(1.0), eps)

    brackets = []

    def refine(a, Ta, b, Tb):
        if b - a <= dt_min:
            brackets.append((a, Ta, b, Tb))
            return
        m = 0.5 * (a + b)
        if not a < m < b:
            brackets.append((a, Ta, b, Tb))
            return
        Tm = _triangulate(plan, m)
        if Tm != Ta:
            refine(a, Ta, m, Tm)
        if Tm != Tb:
            refine(m, Tm, b, Tb)

    steps = max(1, math.ceil(1.0 / dt - 1e-9))
    grid = [min(1.0, k * dt) for k in range(1, steps)] + [1.0]
    Ta, a, k = T0, 0.0, 0
    while k < len(grid):
        block = grid[k:k + _BLOCK]
        held = _still_delaunay(Ta, plan.at_many(block))
        j = int(np.argmin(held)) if not held.all() else len(block)
        if j:
            a, k = block[j - 1], k + j
            continue
        # the screen could not certify Ta at this sample: triangulate there
        b = block[0]
        Tb = _triangulate(plan, b)
        if Tb != Ta:
            refine(a, Ta, b, Tb)
        Ta, a, k = Tb, b, k + 1

    events = []
    tris = [T0]
    for a, Ta, b, Tb in brackets:
        flip = _single_flip(Ta, Tb)
        if flip is None:
            raise NonGenericMotion(
                f"simultaneous events in [{a!r}, {b!r}]: "
                f"removed {sorted(Ta.edge_set - Tb.edge_set)}, added {sorted(Tb.edge_set - Ta.edge_set)}"
            )
        e, created = flip
        quad = edge_quad(Ta, e).cycle
        Pa, Pb = plan.at(a), plan.at(b)
        da = coplanarity_det(*(Pa[v] for v in quad))
        db = coplanarity_det(*(Pb[v] for v in quad))
        if da * db > 0:
            raise NonGenericMotion(f"flip of {edge_str(e)} in [{a!r}, {b!r}] without a cocircularity crossing")
        events.append(FlipEvent(0.5 * (a + b), (a, b), e, created, quad))
        tris.append(Tb)
    return FlipSequence(tuple(events), tuple(tris), plan.permutation)


# --------------------------------------------------------------------------
# relation diagnostics


@dataclass
class SimplifyReport:
    length: int
    involution_pairs: list = field(default_factory=list)  # indices i: events i, i+1 cancel
    far_pairs: list = field(default_factory=list)  # indices i: events i, i+1 commute
    pentagons: list = field(default_factory=list)  # indices i: events i..i+4 form a pentagon cycle
    reduced_length: int = 0


def _is_pentagon(tris: Sequence[Triangulation], events: Sequence[FlipEvent]) -> bool:
    if len(events) != 5 or tris[0] != tris[5] or len(set(tris[:5])) != 5:
        return False
    verts = set()
    for ev in events:
        verts.update(ev.quad)
    return len(verts) == 5


def simplify_check(seq: FlipSequence) -> SimplifyReport:
    """Spot the local relations in a flip sequence.

    Reports adjacent flip/flip-back pairs, adjacent far-commuting pairs and
    5-event pentagon cycles, then the length left after cancelling flip-back
    pairs and pentagon cycles greedily with a stack.
    """
    ev, tris = seq.events, seq.triangulations
    rep = SimplifyReport(length=len(ev))
    for i in range(len(ev) - 1):
        if ev[i + 1].flipped == ev[i].created:
            rep.involution_pairs.append(i)
        elif are_far(tris[i], ev[i].flipped, ev[i + 1].flipped):
            rep.far_pairs.append(i)
    for i in range(len(ev) - 4):
        if _is_pentagon(tris[i:i + 6], ev[i:i + 5]):
            rep.pentagons.append(i)

    stack: list[int] = []
    for i in range(len(ev)):
        stack.append(i)
        if len(stack) >= 2 and ev[stack[-1]].flipped == ev[stack[-2]].created:
            del stack[-2:]
            continue
        if len(stack) >= 5:
            idx = stack[-5:]
            window = [tris[idx[0]]] + [tris[j + 1] for j in idx]
            if _is_pentagon(window, [ev[j] for j in idx]):
                del stack[-5:]
    rep.reduced_length = len(stack)
    return rep
