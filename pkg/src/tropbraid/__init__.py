"""Tropical Ptolemy invariants of spherical braids.

Points moving on the 2-sphere induce a sequence of Delaunay flips; pushing a
max-plus edge labelling through those flips yields a label vector that does
not depend on the isotopy representative of a pure braid.
"""

from .complex import Patch, Quad, Triangulation, apply_flip, are_far, edge_quad, pentagon_patch, validate
from .errors import TropBraidError
from .invariant import InvariantVector, compare, compute_invariant, initial_labels
from .labeling import (
    LabeledTriangulation,
    check_far_commutativity,
    check_involution,
    check_pentagon,
    labeled_flip,
)
from .motion import (
    BraidWord,
    FlipEvent,
    FlipSequence,
    MotionPlan,
    Trajectory,
    detect_flip_events,
    parse_braid_word,
    simplify_check,
    word_to_motion,
)
from .sphere import coplanarity_det, delaunay, in_circumcircle, is_general_position
from .tropical import QuadLabels, flip_label, trop_add, trop_mul

__version__ = "0.1.0"
