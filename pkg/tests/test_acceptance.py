"""Acceptance gate: one test per criterion, each timed against its budget.

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import math
import random
import subprocess
import sys
import time
from dataclasses import dataclass

import pytest

from tropbraid.complex import apply_flip, find_far_pair
from tropbraid.invariant import compare, compute_invariant, initial_labels, replay
from tropbraid.labeling import check_far_commutativity, pentagon_sweep
from tropbraid.motion import (
    detect_flip_events,
    jitter,
    parse_braid_word,
    pentagon_motion,
    reparametrize,
    simplify_check,
    word_to_motion,
)
from tropbraid.sphere import EPS_GEO, delaunay, delaunay_oracle_violations, random_points
from tropbraid.tropical import QuadLabels, flip_label

PURE_WORDS = ("s1 s1", "s1 s2 s2 s1")


@dataclass
class Outcome:
    number: int
    name: str
    ok: bool
    seconds: float
    budget: float
    detail: str

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        budget = f" < {self.budget:g} s" if self.budget else ""
        return f"[{verdict}] {self.number}. {self.name}: {self.detail} ({self.seconds:.2f} s{budget})"


RESULTS: dict[int, Outcome] = {}


def timed(number, name, budget, body):
    t0 = time.perf_counter()
    ok, detail = body()
    seconds = time.perf_counter() - t0
    ok = ok and (budget is None or seconds < budget)
    RESULTS[number] = Outcome(number, name, ok, seconds, budget or 0, detail)
    return RESULTS[number]


def involution():
    rng = random.Random(1)
    good = 0
    for _ in range(10_000):
        q = QuadLabels(*(rng.randint(-100, 100) for _ in range(5)))
        good += flip_label(q.with_diagonal(flip_label(q))) == q.x
    return good == 10_000, f"{good}/10000 exact"


def pentagon():
    plans = closed = 0
    for seed in range(20):
        plan = pentagon_motion(seed)
        seq = detect_flip_events(plan)
        lt = initial_labels(seq.triangulations[0], seed=seed, low=-100, high=100)
        plans += len(seq) == 5 and simplify_check(seq).pentagons == [0]
        closed += replay(lt, seq.flipped_edges) == lt
    rep = pentagon_sweep(10_000, seed=0)
    detail = (f"{closed}/20 pentagon runs close ({plans}/20 clean 5-flip cycles); "
              f"sweep closes {rep['closed']}/10000, c/e-swapped formulas {rep['swapped_closed']}/10000")
    return plans == closed == 20 and rep["formula_agrees"] == 10_000, detail


def far_commutativity():
    rng = random.Random(3)
    good = 0
    for _ in range(1000):
        t = delaunay(random_points(rng.randint(8, 20), rng.randrange(2**32)))
        pair = find_far_pair(t, rng)
        if pair is not None:
            lt = initial_labels(t, seed=rng.randrange(2**32), low=-100, high=100)
            good += check_far_commutativity(lt, *pair)
    return good == 1000, f"{good}/1000 spheres commute exactly"


def euler():
    rng = random.Random(4)
    good = 0
    for _ in range(200):
        n = rng.randint(5, 40)
        t = delaunay(random_points(n, rng.randrange(2**32)))
        good += len(t.edges) == 3 * n - 6 and len(t.faces) == 2 * n - 4
    return good == 200, f"{good}/200 with E = 3n-6, F = 2n-4"


def oracle():
    rng = random.Random(5)
    good = 0
    for _ in range(50):
        P = random_points(rng.randint(4, 20), rng.randrange(2**32))
        good += not delaunay_oracle_violations(P, delaunay(P), EPS_GEO)
    return good == 50, f"{good}/50 pass the empty-circumcircle oracle"


def _well_formed(seq):
    steps = zip(seq.triangulations, seq.events, seq.triangulations[1:])
    one_edge = all(len(T.edge_set ^ T2.edge_set) == 2 and apply_flip(T, ev.flipped)[0] == T2
                   for T, ev, T2 in steps)
    return one_edge and seq.triangulations[-1] == seq.triangulations[0]


def well_formedness():
    notes, ok = [], True
    for word in PURE_WORDS:
        for seed in range(2):
            plan = word_to_motion(parse_braid_word(word, 6), seed=seed)
            seq = detect_flip_events(plan)
            half = detect_flip_events(plan, dt=0.5e-3)
            good = _well_formed(seq) and half.flipped_edges == seq.flipped_edges
            ok &= good
            notes.append(f"'{word}'/{seed}: {len(seq)} flips")
    return ok, "; ".join(notes)


def invariance():
    ok, notes = True, []
    for word in PURE_WORDS:
        for seed in range(2):
            plan = word_to_motion(parse_braid_word(word, 6), seed=seed)
            seq = detect_flip_events(plan)
            lt = initial_labels(seq.triangulations[0], seed=42)
            v = compute_invariant(plan, lt, sequence=seq)
            same = (compare(v, compute_invariant(reparametrize(plan, math.sqrt), lt))
                    and compare(v, compute_invariant(jitter(plan, 1e-4, seed=100 + seed), lt)))
            ok &= same
            notes.append(f"'{word}'/{seed} {'equal' if same else 'DIFFERENT'}")
    trivial = word_to_motion(parse_braid_word("", 6), seed=0)
    lt = initial_labels(detect_flip_events(trivial).triangulations[0], seed=42)
    identity = compute_invariant(trivial, lt).labels == lt.vector()
    notes.append(f"trivial braid {'= A_1' if identity else '!= A_1'}")
    return ok and identity, "; ".join(notes)


def determinism():
    runs = [
        ["trace", "--word", "s1 s1", "--n", "6", "--seed", "42"],
        ["invariant", "--word", "s1 s2 s2 s1", "--n", "6", "--seed", "42", "--labels", "random"],
    ]
    ok = True
    for argv in runs:
        outs = [subprocess.run([sys.executable, "-m", "tropbraid.cli", *argv], capture_output=True, check=True).stdout
                for _ in range(2)]
        ok &= outs[0] == outs[1] and len(outs[0]) > 0
    return ok, "trace and invariant reruns byte-identical" if ok else "reruns differ"


CRITERIA = [
    (1, "involution", 1.0, involution),
    (2, "pentagon closure", 10.0, pentagon),
    (3, "far-commutativity", 10.0, far_commutativity),
    (4, "Euler counts", 30.0, euler),
    (5, "Delaunay oracle", 60.0, oracle),
    (6, "flip-sequence well-formedness", 120.0, well_formedness),
    (7, "invariance", 120.0, invariance),
    (8, "determinism", None, determinism),
]


@pytest.mark.parametrize("number,name,budget,body", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, name, budget, body):
    out = timed(number, name, budget, body)
    print(out.line())
    assert out.ok, out.line()


if __name__ == "__main__":
    results = [timed(*c) for c in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.ok for r in results) else 1)
