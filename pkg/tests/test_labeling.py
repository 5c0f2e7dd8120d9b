import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropbraid.complex import apply_flip, are_far, bipyramid, edge_key, edge_quad, find_far_pair, is_flippable
from tropbraid.errors import MissingEdgeLabel, NotFar
from tropbraid.invariant import initial_labels
from tropbraid.labeling import (
    LabeledTriangulation,
    check_far_commutativity,
    check_involution,
    check_pentagon,
    labeled_flip,
    pentagon_chain,
    pentagon_labeling,
    pentagon_sweep,
    pentagon_symbols,
    pentagon_walk,
)
from tropbraid.sphere import delaunay, random_points
from tropbraid.tropical import QuadLabels

from test_complex import spheres


def literal_rule(q: QuadLabels) -> Fraction:
    # max(x, y) = max(a, c) + max(b, d), solved for y; harness only
    return max(q.a, q.c) + max(q.b, q.d)


def labelled(t, seed, low=-10, high=10):
    return initial_labels(t, seed=seed, low=low, high=high)


def test_all_zero_flip():
    lt = initial_labels(bipyramid(), constant=0)
    out = labeled_flip(lt, (1, 2))
    assert out.labels[(4, 5)] == 0
    assert out.complex == apply_flip(bipyramid(), (1, 2))[0]


def test_embedded_quad_flip():
    t = bipyramid()
    q = edge_quad(t, (1, 2))
    labels = {e: Fraction(10 + i) for i, e in enumerate(t.edges)}
    labels.update(zip(q.boundary, (2, 0, 3, 1)))
    labels[(1, 2)] = 1
    lt = LabeledTriangulation(t, labels)
    out = labeled_flip(lt, (1, 2))
    assert out.labels[q.opposite_vertices] == 4
    others = {e: x for e, x in labels.items() if e != (1, 2)}
    assert {e: out.labels[e] for e in others} == others
    assert len(out.labels) == 9
    assert labeled_flip(out, q.opposite_vertices) == lt


def test_missing_label():
    t = bipyramid()
    with pytest.raises(MissingEdgeLabel):
        LabeledTriangulation(t, {e: 0 for e in t.edges[1:]})


def test_involution_rational_labels():
    t = bipyramid()
    lt = LabeledTriangulation(t, {e: Fraction(1, k + 2) for k, e in enumerate(t.edges)})
    assert all(check_involution(lt, e) for e in t.edges if is_flippable(t, e))


def test_literal_rule_breaks_involution():
    t = bipyramid()
    q = edge_quad(t, (1, 2))
    labels = {e: Fraction(0) for e in t.edges}
    labels.update(zip(q.boundary, (2, 0, 3, 1)))
    labels[(1, 2)] = 7
    lt = LabeledTriangulation(t, labels)
    assert check_involution(lt, (1, 2))
    assert not check_involution(lt, (1, 2), rule=literal_rule)
    # the literal rule ignores x, so it fails whenever x differs from its value
    assert literal_rule(lt.quad_labels((1, 2))) == 4


def test_far_commutativity_examples():
    t = delaunay(random_points(8, 8))
    e1, e2 = find_far_pair(t, random.Random(0))
    assert check_far_commutativity(labelled(t, 1), e1, e2)
    assert check_far_commutativity(initial_labels(t, constant=0), e1, e2)
    face = t.adjacency[e1][0]
    e3 = next(edge_key(face[i], face[(i + 1) % 3]) for i in range(3) if edge_key(face[i], face[(i + 1) % 3]) != e1)
    assert not are_far(t, e1, e3)
    with pytest.raises(NotFar):
        check_far_commutativity(labelled(t, 1), e1, e3)


@given(spheres, st.integers(0, 2**32), st.randoms(use_true_random=False))
def test_involution_property(t, seed, r):
    e = r.choice([e for e in t.edges if is_flippable(t, e)])
    assert check_involution(labelled(t, seed, -100, 100), e)


@given(spheres, st.integers(0, 2**32), st.randoms(use_true_random=False))
def test_far_commutativity_property(t, seed, r):
    pair = find_far_pair(t, r)
    if pair is not None:
        assert check_far_commutativity(labelled(t, seed, -100, 100), *pair)


# --- pentagon -------------------------------------------------------------


def ptolemy_walk(a, b, c, d, e, x, y):
    """Hand-written five flips on the convex pentagon 1..5 starting from the
    fan at 1; each step is (new label) = max over the two opposite side
    pairs minus the old diagonal."""
    L = {(4, 5): a, (1, 5): b, (3, 4): c, (2, 3): d, (1, 2): e, (1, 4): x, (1, 3): y}
    steps = [  # old diagonal, new diagonal, opposite pairs of the quad
        ((1, 3), (2, 4), [((1, 2), (3, 4)), ((2, 3), (1, 4))]),
        ((1, 4), (2, 5), [((1, 2), (4, 5)), ((2, 4), (1, 5))]),
        ((2, 4), (3, 5), [((2, 3), (4, 5)), ((3, 4), (2, 5))]),
        ((2, 5), (1, 3), [((1, 2), (3, 5)), ((2, 3), (1, 5))]),
        ((3, 5), (1, 4), [((1, 3), (4, 5)), ((3, 4), (1, 5))]),
    ]
    out = []
    for old, new, pairs in steps:
        L[new] = max(L[p] + L[q] for p, q in pairs) - L.pop(old)
        out.append(L[new])
    return tuple(out)


def test_pentagon_zero():
    assert check_pentagon([0] * 5, [0, 0])


def test_pentagon_example():
    rng = random.Random(5)
    x, y = rng.randint(-10, 10), rng.randint(-10, 10)
    assert check_pentagon([1, 2, 3, 4, 5], [y, x])


def test_pentagon_walk_states():
    states = pentagon_walk(pentagon_labeling([1, 2, 3, 4, 5], [6, 7]))
    assert len(states) == 6
    assert [s.complex.diagonals for s in states[:3]] == [((1, 3), (1, 4)), ((1, 4), (2, 4)), ((2, 4), (2, 5))]
    assert states[-1] == states[0]


def test_swapped_chain_counterexample():
    # a=b=c=d=0, e=1, x=0, y=1: the walk closes, the c/e-swapped updates end at w=-1
    s = dict(a=0, b=0, c=0, d=0, e=1, x=0, y=1)
    assert pentagon_chain(**s, swapped=True) == (0, 1, 2, 1, -1)
    assert pentagon_chain(**s) == (0, 1, 1, 1, 0)
    assert check_pentagon([0, 0, 0, 0, 1], [1, 0])


ints = st.integers(-50, 50)
labels7 = st.tuples(ints, ints, ints, ints, ints, ints, ints)


@given(labels7)
def test_walk_matches_oracles(vals):
    lt = pentagon_labeling(vals[:5], vals[5:])
    s = pentagon_symbols(lt)
    states = pentagon_walk(lt)
    new = tuple((set(b.labels) - set(a.labels)).pop() for a, b in zip(states, states[1:]))
    walked = tuple(b.labels[e] for b, e in zip(states[1:], new))
    assert walked == ptolemy_walk(**s) == pentagon_chain(**s)
    z, t, u, v, w = walked
    assert (v, w) == (s["y"], s["x"])
    assert states[-1] == states[0]


@given(st.tuples(*[st.fractions(Fraction(-5), Fraction(5), max_denominator=12)] * 7))
def test_pentagon_rational(vals):
    assert check_pentagon(vals[:5], vals[5:])


def test_pentagon_sweep_report():
    rep = pentagon_sweep(2000, seed=3)
    assert rep["trials"] == 2000
    assert rep["formula_agrees"] == 2000
    assert rep["closed"] == 2000 and rep["failures"] == []
    assert 0 < rep["swapped_closed"] < 2000


def test_edge_key_order_irrelevant():
    lt = initial_labels(bipyramid(), seed=4)
    assert labeled_flip(lt, (2, 1)) == labeled_flip(lt, edge_key(2, 1))
