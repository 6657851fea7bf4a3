"""Exact computation of framed-cord-algebra augmentations and simple
microlocal sheaves for braid closures, and brute-force verification of the
correspondence between them over small finite fields."""

from .braid import (BraidWord, ComponentMap, MeridianWord,
                    NonMonotoneComponentsError, artin_action, component_map,
                    longitude_word, permutation, relabel_for_components,
                    segment_word, wirtinger_relations)
from .cordaug import (AugCandidate, DilationParam, IndexSets, apply_dilation,
                      canonical_form, check_relations, degenerate_components,
                      eval_broken_cord, index_sets, is_generic, loop_matrix,
                      meridian_operator)
from .correspondence import (InvalidTrivializationError, LocalTrivialization,
                             NoTransverseVectorError, NotAnAugmentationError,
                             aug_to_sheaf, aug_to_subsheaf,
                             canonical_trivialization, choose_trivialization,
                             extend_by_constant, pure_cord_trace, roundtrip_aug,
                             roundtrip_sheaf, sheaf_to_aug)
from .field import FieldSpec, MixedFieldError, NotEnumerableError, Scalar, enumerate_scalars
from .linalg import Matrix, Subspace
from .moduli import (BudgetExceededError, ComparisonReport, ModuliReport, Orbit,
                     enumerate_augs, enumerate_sheaf_moduli,
                     enumerate_sheaves_direct, equivalent_in_moduli,
                     markov_compare, quotient_by_dilation, verify_bijection)
from .reports import DiffReport, ValidationReport
from .sheafmodel import (DegenerateSummand, SheafData, global_sections,
                         is_reduced, is_stable, isomorphic, once_stabilized,
                         stabilized_space, validate)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
