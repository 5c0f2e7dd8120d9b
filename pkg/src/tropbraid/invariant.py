"""Push a tropical labelling through a braid's flip sequence."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .complex import Edge, Triangulation, edge_str
from .errors import ShapeMismatch
from .labeling import LabeledTriangulation, labeled_flip
from .motion import DT_INIT, DT_MIN, FlipSequence, MotionPlan, detect_flip_events
from .sphere import EPS_GEO


@dataclass(frozen=True)
class InvariantVector:
    """Final labels in canonical edge order.

    Edges are named by starting positions: the final triangulation is
    relabelled through the strand permutation, which maps it back onto the
    initial one. ``initial`` keeps the starting labels so that only vectors
    computed from the same data get compared.
    """

    n: int
    edges: tuple[Edge, ...]
    labels: tuple[Fraction, ...]
    initial: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [edge_str(e) for e in self.edges],
            "labels": [str(v) for v in self.labels],
            "initial_labels": [str(v) for v in self.initial],
        }

    @classmethod
    def from_json(cls, data: dict) -> "InvariantVector":
        from .formats import parse_edge_list, parse_label_list

        edges = parse_edge_list(data["edges"])
        labels = parse_label_list(data["labels"])
        initial = parse_label_list(data.get("initial_labels", data["labels"]))
        if not len(edges) == len(labels) == len(initial):
            raise ShapeMismatch("edges and labels differ in length")
        return cls(int(data["n"]), edges, labels, initial)


def initial_labels(t: Triangulation, *, constant=None, seed: Optional[int] = None,
                   low: int = -10, high: int = 10,
                   labels: Optional[Mapping] = None) -> LabeledTriangulation:
    """The fixed starting labelling ``A_1``.

    Exactly one scheme: ``constant=v``, ``seed=s`` (integers drawn uniformly
    from ``[low, high]`` in lexicographic edge order) or an explicit
    ``labels`` mapping, e.g. from :func:`tropbraid.formats.load_labels`.
    """
    chosen = [constant is not None, seed is not None, labels is not None]
    if sum(chosen) != 1:
        raise ValueError("pick exactly one labelling scheme: constant, seed or labels")
    if constant is not None:
        return LabeledTriangulation(t, {e: constant for e in t.edges})
    if seed is not None:
        rng = random.Random(seed)
        return LabeledTriangulation(t, {e: rng.randint(low, high) for e in t.edges})
    return LabeledTriangulation(t, labels)


def replay(lt: LabeledTriangulation, flips) -> LabeledTriangulation:
    """Apply ``labeled_flip`` for each flipped edge in order."""
    for e in flips:
        lt = labeled_flip(lt, e)
    return lt


def compute_invariant(plan: MotionPlan, labels: LabeledTriangulation, eps: float = EPS_GEO,
                      dt: float = DT_INIT, dt_min: float = DT_MIN,
                      sequence: Optional[FlipSequence] = None) -> InvariantVector:
    """``f_n``: the final labelling after every flip the motion induces."""
    seq = sequence if sequence is not None else detect_flip_events(plan, eps, dt, dt_min)
    start = seq.triangulations[0]
    if labels.complex != start:
        raise ShapeMismatch("labels are not on the initial Delaunay triangulation of the plan")
    final = replay(labels, seq.flipped_edges)
    perm = seq.permutation
    relabelled = {tuple(sorted((perm[u], perm[v]))): x for (u, v), x in final.labels.items()}
    if set(relabelled) != start.edge_set:
        raise ShapeMismatch("final triangulation does not return to the initial one")
    return InvariantVector(
        n=start.n,
        edges=start.edges,
        labels=tuple(relabelled[e] for e in start.edges),
        initial=labels.vector(),
    )


def compare(v1: InvariantVector, v2: InvariantVector) -> bool:
    """Exact equality; vectors built from different data are not comparable."""
    if v1.n != v2.n or v1.edges != v2.edges:
        raise ShapeMismatch("invariants live on different edge sets")
    if v1.initial != v2.initial:
        raise ShapeMismatch("invariants start from different labellings")
    return v1.labels == v2.labels
