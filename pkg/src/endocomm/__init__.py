"""Endomorphism rings, centers and endo-commutativity of finite modules."""
from ._kernels import BACKEND
from .abelian import (
    AbHom, FinAbGroup, Subgroup, abelian_groups_of_order, abelian_groups_up_to, count_subgroups, cyclic,
    direct_sum_group, enumerate_invariant_subgroups, enumerate_subgroups, group_from_presentation, hom_group,
    number_of_abelian_groups, quotient_map, smith_normal_form, socle_and_essential,
)
from .center import (
    CenterReport, center_of_fully_invariant_submodule_check, center_of_module, commutator_image,
    commutator_kernel, essential_center_lemma_check, is_endo_commutative, is_fully_invariant, main_theorem_report,
)
from .classify import ClassifierReport, classify
from .errors import (
    AmbientMismatch, BoundExceeded, CarrierMismatch, EndocommError, EquivalenceViolation, HypothesisUnmet,
    InfiniteQuotient, InternalInconsistency, InvalidModulus, NonScalarRing, RingMismatch, ShapeMismatch, SpecError,
)
from .io import action_to_spec, parse_spec
from .modules import (
    DEFAULT_BOUNDS, Bounds, HomSet, ModuleAction, annihilator_and_faithful, biend, direct_sum_action, end_ring,
    hom_module, is_balanced, regular_module, scalar_module, validate_action,
)
from .rings import FinRing, ScalarRing, opposite, ring_center, ring_validate
from .theorems import SUITE_NAMES, verify
from .tower import INFINITY, ecdim, endo_tower, tower_classification

__version__ = "0.1.0"
