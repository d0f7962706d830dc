"""Exact-arithmetic workbench for partition and bilabelled-graph categories."""

__version__ = "0.1.0"

from .exactnum import Matrix, Scalar, gram, rank
from .partition import Partition, PartitionVector, compose, generators, hat, tensor
from .partition_tensor import Tensor, evaluate, evaluate_hat, permanent, permanent_vector
from .bigraph import BilabelledGraph, canonical_form, check_conditions, normalize
from .graph_functor import evaluate_Fpi, evaluate_TA
from .enumerator import GraphPool, Word, algorithm_A, boundary_word, brute_force_C

__all__ = [
    "Matrix",
    "Scalar",
    "gram",
    "rank",
    "Partition",
    "PartitionVector",
    "compose",
    "generators",
    "hat",
    "tensor",
    "Tensor",
    "evaluate",
    "evaluate_hat",
    "permanent",
    "permanent_vector",
    "BilabelledGraph",
    "canonical_form",
    "check_conditions",
    "normalize",
    "evaluate_Fpi",
    "evaluate_TA",
    "GraphPool",
    "Word",
    "algorithm_A",
    "boundary_word",
    "brute_force_C",
]
