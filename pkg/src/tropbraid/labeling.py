"""Tropical edge labellings, flips on labels, and the three consistency checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .complex import Edge, Patch, Triangulation, apply_flip, are_far, edge_key, edge_quad, pentagon_patch
from .errors import MissingEdgeLabel, NotFar
from .tropical import QuadLabels, as_tropical, flip_label

FlipRule = Callable[[QuadLabels], Fraction]

# Edge order used when a pentagon labelling is given as two flat tuples.
PENTAGON_BOUNDARY: tuple[Edge, ...] = ((1, 2), (2, 3), (3, 4), (4, 5), (1, 5))
PENTAGON_DIAGONALS: tuple[Edge, ...] = ((1, 3), (1, 4))


@dataclass(frozen=True, eq=True)
class LabeledTriangulation:
    complex: Triangulation
    labels: Mapping[Edge, Fraction] = field(hash=False)

    def __post_init__(self):
        labels = {edge_key(*e): as_tropical(v) for e, v in dict(self.labels).items()}
        missing = [e for e in self.complex.edges if e not in labels]
        if missing:
            raise MissingEdgeLabel(missing)
        extra = set(labels) - self.complex.edge_set
        if extra:
            raise ValueError(f"labels given for edges not in the complex: {sorted(extra)}")
        object.__setattr__(self, "labels", labels)

    def __hash__(self):
        return hash((self.complex, tuple(sorted(self.labels.items()))))

    def vector(self) -> tuple[Fraction, ...]:
        """Labels in lexicographic edge order."""
        return tuple(self.labels[e] for e in self.complex.edges)

    def quad_labels(self, e) -> QuadLabels:
        q = edge_quad(self.complex, e)
        a, b, c, d = (self.labels[s] for s in q.boundary)
        return QuadLabels(a, b, c, d, self.labels[q.diagonal])


def labeled_flip(lt: LabeledTriangulation, e, rule: FlipRule = flip_label) -> LabeledTriangulation:
    """Flip ``e`` in the complex and relabel only the new diagonal."""
    e = edge_key(*e)
    y = rule(lt.quad_labels(e))
    t, new = apply_flip(lt.complex, e)
    labels = dict(lt.labels)
    del labels[e]
    labels[new] = y
    return LabeledTriangulation(t, labels)


def check_involution(lt: LabeledTriangulation, e, rule: FlipRule = flip_label) -> bool:
    once = labeled_flip(lt, e, rule)
    new = (set(once.complex.edges) - set(lt.complex.edges)).pop()
    return labeled_flip(once, new, rule) == lt


def check_far_commutativity(lt: LabeledTriangulation, e1, e2) -> bool:
    if not are_far(lt.complex, e1, e2):
        raise NotFar(f"quads of {e1} and {e2} overlap")
    first = labeled_flip(labeled_flip(lt, e1), e2)
    second = labeled_flip(labeled_flip(lt, e2), e1)
    return first == second


def pentagon_labeling(boundary: Sequence, diagonals: Sequence) -> LabeledTriangulation:
    """Label :func:`pentagon_patch`; boundary follows ``PENTAGON_BOUNDARY``."""
    if len(boundary) != 5 or len(diagonals) != 2:
        raise ValueError("a pentagon needs 5 boundary and 2 diagonal labels")
    labels = dict(zip(PENTAGON_BOUNDARY, boundary))
    labels.update(zip(PENTAGON_DIAGONALS, diagonals))
    return LabeledTriangulation(pentagon_patch(), labels)


def pentagon_walk(lt: LabeledTriangulation, first: Edge = (1, 3)) -> list[LabeledTriangulation]:
    """Five flips around the pentagon, always flipping the older diagonal.

    Returns the six labelled patches visited, start and end included.
    """
    if not isinstance(lt.complex, Patch) or len(lt.complex.diagonals) != 2:
        raise ValueError("pentagon_walk needs a pentagon patch")
    older = edge_key(*first)
    if older not in lt.complex.diagonals:
        raise ValueError(f"{first} is not a diagonal of the patch")
    states = [lt]
    for _ in range(5):
        keep = next(d for d in states[-1].complex.diagonals if d != older)
        states.append(labeled_flip(states[-1], older))
        older = keep
    return states


def check_pentagon(boundary: Sequence, diagonals: Sequence) -> bool:
    """Whether the 5-flip cycle on the labelled pentagon returns the starting labels."""
    states = pentagon_walk(pentagon_labeling(boundary, diagonals))
    return states[-1] == states[0]


def pentagon_chain(a, b, c, d, e, x, y, swapped: bool = False) -> tuple[Fraction, ...]:
    """The five label updates of the pentagon cycle written out as closed formulas.

    Symbols: ``y`` is flipped first, ``x`` second. On :func:`pentagon_patch`
    this is ``y = 1-3``, ``x = 1-4``, ``a = 4-5``, ``b = 1-5``, ``c = 3-4``,
    ``d = 2-3``, ``e = 1-2``. Returns ``(z, t, u, v, w)``; closure means
    ``v == y`` and ``w == x``.

    ``swapped=True`` uses a variant of the last three updates that
    interchanges ``c`` and ``e`` and does not close for generic labels.
    """
    a, b, c, d, e, x, y = map(as_tropical, (a, b, c, d, e, x, y))
    z = max(x + d, c + e) - y
    t = max(b + z, a + e) - x
    if swapped:
        u = max(a + d, t + e) - z
        v = max(b + d, c + u) - t
        w = max(a + y, e + b) - u
    else:
        u = max(a + d, t + c) - z
        v = max(b + d, e + u) - t
        w = max(a + y, c + b) - u
    return z, t, u, v, w


def pentagon_symbols(lt: LabeledTriangulation) -> dict[str, Fraction]:
    """Read ``a..e, x, y`` off a labelled :func:`pentagon_patch`."""
    L = lt.labels
    return dict(a=L[(4, 5)], b=L[(1, 5)], c=L[(3, 4)], d=L[(2, 3)], e=L[(1, 2)], x=L[(1, 4)], y=L[(1, 3)])


def pentagon_sweep(trials: int, seed: int, low: int = -10, high: int = 10) -> dict:
    """Random integer labellings pushed through :func:`check_pentagon`.

    Also counts how often the c/e-swapped closed formulas close, and whether the
    closed formulas agree with the flip walk step by step.
    """
    rng = random.Random(seed)
    closed = swapped_closed = formula_agrees = 0
    failures = []
    for _ in range(trials):
        vals = [rng.randint(low, high) for _ in range(7)]
        lt = pentagon_labeling(vals[:5], vals[5:])
        states = pentagon_walk(lt)
        ok = states[-1] == states[0]
        closed += ok
        if not ok and len(failures) < 10:
            failures.append(vals)
        s = pentagon_symbols(lt)
        z, t, u, v, w = pentagon_chain(**s)
        walked = (states[1].labels[(2, 4)], states[2].labels[(2, 5)], states[3].labels[(3, 5)],
                  states[4].labels[(1, 3)], states[5].labels[(1, 4)])
        formula_agrees += walked == (z, t, u, v, w)
        *_, vv, ww = pentagon_chain(**s, swapped=True)
        swapped_closed += (vv, ww) == (s["y"], s["x"])
    return {
        "trials": trials,
        "closed": closed,
        "formula_agrees": formula_agrees,
        "swapped_closed": swapped_closed,
        "failures": failures,
    }
