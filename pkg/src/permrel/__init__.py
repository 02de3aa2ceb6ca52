"""Simple permutation groups as symmetry groups of Boolean functions.

The package computes symmetry groups of relations (families of subsets),
orbit closures, regular sets and distinguishing numbers, builds defining
relations for sums of groups, and classifies simple groups by whether they
are symmetry groups of two-valued Boolean functions.
"""

from __future__ import annotations

from .bgr import (
    DistinguishingPartition,
    HypothesisError,
    binary_regular_set,
    find_defining_relation,
    in_bgr,
    in_bgr_k_bruteforce,
    orbit_closure,
    q_relation,
    relation_coset_regular,
    relation_distinguishing,
    relation_group_exhaustive,
    relation_injective_labelling,
    relation_parallel_sum,
    relation_sies,
)
from .builders import (
    CosetActionSpec,
    IsoMap,
    SubdirectSumSpec,
    coset_action,
    decompose_intransitive,
    direct_sum,
    parallel_multiple,
    parallel_sum,
    subdirect_sum,
)
from .catalog import UnknownGroupError, catalog_group, catalog_keys
from .classify import ClassificationVerdict, NotSimpleError, classify_simple
from .group import PermGroup
from .kernels import BACKEND
from .perm import Permutation, PointSet, from_cycles
from .regular import (
    BudgetExceededError,
    distinguishing_number,
    is_regular_set,
    orbit_census,
    regular_set_sizes,
)
from .relations import (
    Certificate,
    UnorderedRelation,
    certify_defining,
    orbit_of_set,
    symmetry_group_full,
    symmetry_group_in,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BudgetExceededError",
    "Certificate",
    "ClassificationVerdict",
    "CosetActionSpec",
    "DistinguishingPartition",
    "HypothesisError",
    "IsoMap",
    "NotSimpleError",
    "PermGroup",
    "Permutation",
    "PointSet",
    "SubdirectSumSpec",
    "UnknownGroupError",
    "UnorderedRelation",
    "binary_regular_set",
    "catalog_group",
    "catalog_keys",
    "certify_defining",
    "classify_simple",
    "coset_action",
    "decompose_intransitive",
    "direct_sum",
    "distinguishing_number",
    "find_defining_relation",
    "from_cycles",
    "in_bgr",
    "in_bgr_k_bruteforce",
    "is_regular_set",
    "orbit_census",
    "orbit_closure",
    "orbit_of_set",
    "parallel_multiple",
    "parallel_sum",
    "q_relation",
    "regular_set_sizes",
    "relation_coset_regular",
    "relation_distinguishing",
    "relation_group_exhaustive",
    "relation_injective_labelling",
    "relation_parallel_sum",
    "relation_sies",
    "subdirect_sum",
    "symmetry_group_full",
    "symmetry_group_in",
]
