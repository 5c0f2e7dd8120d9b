import math
import random
from fractions import Fraction

import pytest

from tropbraid.complex import are_far, find_far_pair, is_flippable
from tropbraid.errors import MissingEdgeLabel, ShapeMismatch
from tropbraid.invariant import InvariantVector, compare, compute_invariant, initial_labels, replay
from tropbraid.labeling import LabeledTriangulation
from tropbraid.motion import (
    constant_plan,
    detect_flip_events,
    jitter,
    parse_braid_word,
    reparametrize,
    word_to_motion,
)
from tropbraid.sphere import random_points

from test_motion import cross_and_return

S1S1_EDGES = ((0, 1), (0, 3), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5))
S1S1_START = (10, -7, -10, -2, -3, -3, -6, -7, 7, -8, 8, 3)
S1S1_FINAL = (10, 50, 16, 41, 28, 54, 51, -7, 7, -8, 8, 3)


def oracle_replay(faces, labels, flips, perm):
    """Face-list replay with the flip rule written out by hand."""
    faces = [tuple(f) for f in faces]
    L = dict(labels)
    for u, v in flips:
        inc = [f for f in faces if u in f and v in f]
        assert len(inc) == 2
        w1, w2 = [next(x for x in f if x not in (u, v)) for f in inc]
        k = lambda a, b: (min(a, b), max(a, b))  # noqa: E731
        new = max(L[k(u, w1)] + L[k(v, w2)], L[k(v, w1)] + L[k(u, w2)]) - L.pop(k(u, v))
        L[k(w1, w2)] = new
        faces = [f for f in faces if f not in inc] + [(u, w1, w2), (v, w1, w2)]
    return {tuple(sorted((perm[a], perm[b]))): x for (a, b), x in L.items()}


@pytest.fixture(scope="module")
def s1s1():
    plan = word_to_motion(parse_braid_word("s1 s1", 6), seed=0)
    return plan, detect_flip_events(plan)


def test_s1_s1_frozen_vector(s1s1):
    plan, seq = s1s1
    lt = initial_labels(seq.triangulations[0], seed=42)
    v = compute_invariant(plan, lt, sequence=seq)
    assert v.edges == S1S1_EDGES and v.initial == S1S1_START
    assert v.labels == S1S1_FINAL and len(v.labels) == 3 * 6 - 6
    expected = oracle_replay(seq.triangulations[0].faces, lt.labels, seq.flipped_edges, seq.permutation)
    assert tuple(expected[e] for e in v.edges) == S1S1_FINAL


def test_constant_plan_identity():
    plan = constant_plan(random_points(7, 1))
    seq = detect_flip_events(plan)
    lt = initial_labels(seq.triangulations[0], seed=3)
    v = compute_invariant(plan, lt)
    assert v.labels == lt.vector() == v.initial


def test_flip_back_identity():
    plan = cross_and_return(5)
    seq = detect_flip_events(plan)
    lt = initial_labels(seq.triangulations[0], labels={e: Fraction(k, 3) for k, e in
                                                       enumerate(seq.triangulations[0].edges)})
    assert compute_invariant(plan, lt).labels == lt.vector()


def test_trivial_braid():
    plan = word_to_motion(parse_braid_word("", 6), seed=4)
    lt = initial_labels(detect_flip_events(plan).triangulations[0], seed=1)
    assert compute_invariant(plan, lt).labels == lt.vector()


def test_relations_leave_result_unchanged():
    t = detect_flip_events(constant_plan(random_points(12, 9))).triangulations[0]
    lt = initial_labels(t, seed=5, low=-50, high=50)
    rng = random.Random(0)
    e1, e2 = find_far_pair(t, rng)
    assert replay(lt, [e1, e2]) == replay(lt, [e2, e1])
    mid = replay(lt, [e1])
    e = next(x for x in mid.complex.edges if is_flippable(mid.complex, x) and x != e2)
    new = (set(replay(mid, [e]).complex.edges) - set(mid.complex.edges)).pop()
    assert replay(lt, [e1, e, new, e2]) == replay(lt, [e1, e2])


def test_s1_s1_reordered_replay(s1s1):
    plan, seq = s1s1
    lt = initial_labels(seq.triangulations[0], seed=42)
    flips = list(seq.flipped_edges)
    tris = seq.triangulations
    swaps = [i for i in range(len(flips) - 1)
             if flips[i + 1] in tris[i].edge_set and are_far(tris[i], flips[i], flips[i + 1])]
    assert swaps
    base = replay(lt, flips)
    for i in swaps:
        alt = flips[:i] + [flips[i + 1], flips[i]] + flips[i + 2:]
        assert replay(lt, alt) == base


def test_initial_labels_schemes():
    t = detect_flip_events(constant_plan(random_points(6, 2))).triangulations[0]
    assert set(initial_labels(t, constant=0).labels.values()) == {0}
    assert initial_labels(t, seed=42) == initial_labels(t, seed=42)
    assert all(-10 <= x <= 10 for x in initial_labels(t, seed=42).labels.values())
    with pytest.raises(MissingEdgeLabel):
        initial_labels(t, labels={e: 1 for e in t.edges[:-1]})
    with pytest.raises(ValueError):
        initial_labels(t, constant=0, seed=1)
    with pytest.raises(ValueError):
        initial_labels(t)


def test_labels_on_wrong_triangulation(s1s1):
    plan, _ = s1s1
    other = detect_flip_events(constant_plan(random_points(6, 2))).triangulations[0]
    with pytest.raises(ShapeMismatch):
        compute_invariant(plan, initial_labels(other, constant=0))


def test_compare(s1s1):
    plan, seq = s1s1
    T = seq.triangulations[0]
    v = compute_invariant(plan, initial_labels(T, seed=42), sequence=seq)
    assert compare(v, v)
    assert compare(v, InvariantVector.from_json(v.to_json()))
    w = compute_invariant(plan, initial_labels(T, seed=43), sequence=seq)
    with pytest.raises(ShapeMismatch):
        compare(v, w)
    other = InvariantVector(v.n, v.edges[:-1] + ((0, 2),), v.labels, v.initial)
    with pytest.raises(ShapeMismatch):
        compare(v, other)
    changed = InvariantVector(v.n, v.edges, (v.labels[0] + 1,) + v.labels[1:], v.initial)
    assert not compare(v, changed)


def test_json_field_order(s1s1):
    plan, seq = s1s1
    v = compute_invariant(plan, initial_labels(seq.triangulations[0], seed=42), sequence=seq)
    data = v.to_json()
    assert list(data) == ["n", "edges", "labels", "initial_labels"]
    assert data["edges"][0] == "0-1" and data["labels"][1] == "50"


def test_isotopy_invariance(s1s1):
    plan, seq = s1s1
    lt = initial_labels(seq.triangulations[0], seed=42)
    v = compute_invariant(plan, lt, sequence=seq)
    assert compare(v, compute_invariant(reparametrize(plan, math.sqrt), lt))
    assert compare(v, compute_invariant(jitter(plan, 1e-4, seed=11), lt))


def test_labeled_triangulation_rejects_extra_edges():
    t = detect_flip_events(constant_plan(random_points(5, 2))).triangulations[0]
    labels = {e: 0 for e in t.edges}
    labels[(0, 99)] = 1
    with pytest.raises(ValueError):
        LabeledTriangulation(t, labels)
