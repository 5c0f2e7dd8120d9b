"""Command line front end: ``tropbraid {delaunay,trace,invariant,compare,verify}``.

Exit codes: 0 success / equal, 1 unequal or failed check, 2 geometric
degeneracy, 3 non-generic motion, 4 data mismatch, 64 usage.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import formats
from .complex import edge_str, find_far_pair
from .errors import DataError, GeometryError, LayoutError, MotionError, NonGenericMotion, TropBraidError
from .invariant import InvariantVector, compare, compute_invariant, initial_labels
from .labeling import check_far_commutativity, pentagon_sweep
from .motion import DT_INIT, DT_MIN, MotionPlan, detect_flip_events, parse_braid_word, word_to_motion
from .sphere import EPS_GEO, delaunay, delaunay_oracle_violations, random_points
from .tropical import QuadLabels, flip_label

EXIT_OK, EXIT_UNEQUAL, EXIT_GEOMETRY, EXIT_NONGENERIC, EXIT_DATA, EXIT_USAGE = 0, 1, 2, 3, 4, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    eps: float = EPS_GEO
    dt: float = DT_INIT
    dt_min: float = DT_MIN
    seed: int = 0
    output: Optional[Path] = None
    format: str = "json"

    def __post_init__(self):
        if not (self.eps > 0 and self.dt > 0 and self.dt_min > 0):
            raise UsageError("--eps, --dt and --dt-min must be positive")
        if not self.dt_min < self.dt:
            raise UsageError("--dt-min must be smaller than --dt")
        if self.format not in ("json", "tsv"):
            raise UsageError(f"unknown format {self.format!r}")


def _config(args) -> RunConfig:
    return RunConfig(args.eps, args.dt, args.dt_min, args.seed,
                     Path(args.output) if args.output else None, args.format)


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        cfg.output.write_text(text)


def _plan(args, cfg: RunConfig) -> MotionPlan:
    if args.word is not None:
        if args.n is None:
            raise UsageError("--word needs --n")
        return word_to_motion(parse_braid_word(args.word, args.n), seed=cfg.seed)
    if args.motion is None:
        raise UsageError("give a motion file or --word/--n")
    return formats.load_plan(args.motion)


def cmd_delaunay(args) -> int:
    cfg = _config(args)
    P = formats.load_points(args.points)
    t = delaunay(P, cfg.eps)
    if cfg.format == "tsv":
        _emit(cfg, formats.tsv(t.face_list()))
    else:
        _emit(cfg, formats.dumps({
            "n": t.n,
            "edge_count": len(t.edges),
            "face_count": len(t.faces),
            "faces": t.face_list(),
        }))
    print(f"{len(t.edges)} edges, {len(t.faces)} faces", file=sys.stderr)
    return EXIT_OK


def cmd_trace(args) -> int:
    cfg = _config(args)
    seq = detect_flip_events(_plan(args, cfg), cfg.eps, cfg.dt, cfg.dt_min)
    if cfg.format == "tsv":
        _emit(cfg, formats.tsv((repr(ev.time), edge_str(ev.flipped), edge_str(ev.created)) for ev in seq.events))
    else:
        _emit(cfg, formats.dumps(seq.to_json()))
    print(f"{len(seq)} flip events", file=sys.stderr)
    return EXIT_OK


def _labels(spec: str, t, seed: int):
    if spec == "random":
        return initial_labels(t, seed=seed)
    if spec.startswith("const:"):
        return initial_labels(t, constant=formats.parse_label(spec[len("const:"):]))
    return initial_labels(t, labels=formats.load_labels(spec))


def cmd_invariant(args) -> int:
    cfg = _config(args)
    if args.labels is None:
        raise UsageError("--labels is required (a file, 'random' or 'const:V')")
    plan = _plan(args, cfg)
    seq = detect_flip_events(plan, cfg.eps, cfg.dt, cfg.dt_min)
    lt = _labels(args.labels, seq.triangulations[0], cfg.seed)
    inv = compute_invariant(plan, lt, sequence=seq)
    if cfg.format == "tsv":
        _emit(cfg, formats.tsv((edge_str(e), str(x)) for e, x in zip(inv.edges, inv.labels)))
    else:
        _emit(cfg, formats.dumps(inv.to_json()))
    print(f"{len(seq)} flips applied", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args) -> int:
    v1 = InvariantVector.from_json(formats.read_json(args.first))
    v2 = InvariantVector.from_json(formats.read_json(args.second))
    equal = compare(v1, v2)
    print("equal" if equal else "different")
    return EXIT_OK if equal else EXIT_UNEQUAL


# --------------------------------------------------------------------------
# verification suites; each returns (passed, total, extra report lines)


def _suite_involution(trials, seed, eps):
    rng = random.Random(seed)
    ok = 0
    for _ in range(trials):
        q = QuadLabels(*(rng.randint(-100, 100) for _ in range(5)))
        ok += flip_label(q.with_diagonal(flip_label(q))) == q.x
    return ok, trials, []


def _suite_far(trials, seed, eps):
    rng = random.Random(seed)
    ok = 0
    for k in range(trials):
        n = rng.randint(8, 20)
        t = delaunay(random_points(n, rng.randrange(2**32)), eps)
        pair = find_far_pair(t, rng)
        if pair is None:
            continue
        lt = initial_labels(t, seed=rng.randrange(2**32), low=-100, high=100)
        ok += check_far_commutativity(lt, *pair)
    return ok, trials, []


def _suite_pentagon(trials, seed, eps):
    rep = pentagon_sweep(trials, seed)
    lines = [
        f"closed after five flips: {rep['closed']}/{trials}",
        f"closed formulas agree with the flip walk: {rep['formula_agrees']}/{trials}",
        f"c/e-swapped closed formulas close: {rep['swapped_closed']}/{trials}",
    ]
    lines += [f"non-closing labelling: {vals}" for vals in rep["failures"]]
    # closure is reported, not enforced; a disagreement between the two
    # routes is a real failure
    return rep["formula_agrees"], trials, lines


def _suite_euler(trials, seed, eps):
    rng = random.Random(seed)
    ok = 0
    for _ in range(trials):
        n = rng.randint(5, 40)
        t = delaunay(random_points(n, rng.randrange(2**32)), eps)
        ok += len(t.edges) == 3 * n - 6 and len(t.faces) == 2 * n - 4
    return ok, trials, []


def _suite_oracle(trials, seed, eps):
    rng = random.Random(seed)
    ok = 0
    for _ in range(trials):
        n = rng.randint(4, 20)
        P = random_points(n, rng.randrange(2**32))
        ok += not delaunay_oracle_violations(P, delaunay(P, eps), eps)
    return ok, trials, []


SUITES = {
    "involution": _suite_involution,
    "far": _suite_far,
    "pentagon": _suite_pentagon,
    "euler": _suite_euler,
    "oracle": _suite_oracle,
}


def cmd_verify(args) -> int:
    cfg = _config(args)
    passed, total, lines = SUITES[args.suite](args.trials, cfg.seed, cfg.eps)
    for line in lines:
        print(line)
    print(f"{args.suite}: {passed}/{total} passed")
    return EXIT_OK if passed == total else EXIT_UNEQUAL


def build_parser() -> argparse.ArgumentParser:
    default_seed = int(os.environ.get("TROPBRAID_SEED", "0"))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=EPS_GEO, help="degeneracy threshold for predicates")
    common.add_argument("--dt", type=float, default=DT_INIT, help="initial sampling step")
    common.add_argument("--dt-min", type=float, default=DT_MIN, help="event localisation width")
    common.add_argument("--seed", type=int, default=default_seed, help="seed (default $TROPBRAID_SEED or 0)")
    common.add_argument("--format", default="json", choices=["json", "tsv"])
    common.add_argument("-o", "--output", help="write here instead of stdout")

    parser = _Parser(prog="tropbraid", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("delaunay", parents=[common], help="triangulate a point file")
    p.add_argument("points")
    p.set_defaults(func=cmd_delaunay)

    for name, func, helptext in (("trace", cmd_trace, "list the flips a motion induces"),
                                 ("invariant", cmd_invariant, "compute the tropical invariant")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("motion", nargs="?")
        p.add_argument("--word", help="braid word such as 's1 s2^-1'")
        p.add_argument("--n", type=int, help="number of strands for --word")
        if name == "invariant":
            p.add_argument("--labels", help="label file, 'random' (uses --seed) or 'const:V'")
        p.set_defaults(func=func)

    p = sub.add_parser("compare", help="compare two invariant files")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", parents=[common], help="run a seeded property suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tropbraid: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonGenericMotion as exc:
        print(f"tropbraid: non-generic motion: {exc}", file=sys.stderr)
        return EXIT_NONGENERIC
    except (GeometryError, LayoutError) as exc:
        print(f"tropbraid: degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except MotionError as exc:  # parse errors in braid words
        print(f"tropbraid: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, TropBraidError) as exc:
        print(f"tropbraid: data mismatch: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
