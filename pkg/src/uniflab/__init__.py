"""Finite-scale laboratory for left and right uniformities on coset spaces of
permutation groups topologized by partition stabilizers."""

from .errors import (
    CapExceededError,
    InvalidInputError,
    NotASubgroupError,
    NotEquivalenceError,
    PartitionError,
    SizeMismatchError,
    UniflabError,
)
from .filters import PartitionFamily, close_family, minimum_subgroup, topology_axiom_report
from .partitions import Partition, meet, pullback, pushforward, refines, singletons, top, v_gamma
from .perms import Perm, PermSet, SubgroupSet, point_stabilizer, stabilizer_of_partition, symmetric_group
from .quotients import CosetSpace, build_cosets, finest_quotient_uniformity, image_left, image_right
from .relations import FiniteUniformity, Relation, transitive_closure, uniformity_from_base
from .uc import CarrierFunction, is_uniformly_continuous, itzkowitz_report, uc_class_compare

__version__ = "0.1.0"
