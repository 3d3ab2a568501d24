"""Exact linear algebra over QQ and GF(p)."""

from .dense import Echelon, dense_rank, rref
from .fields import DEFAULT_PRIME, Field, is_prime
from .matrix import Matrix, rank
from .prng import PRNG_ID, ResidueStream
from .sparse import sparse_rank
from .subspace import (SubspaceBasis, contains, intersect, kernel_basis, random_subspace,
                       subspace_sum)

__all__ = [
    "DEFAULT_PRIME", "Echelon", "Field", "Matrix", "PRNG_ID", "ResidueStream",
    "SubspaceBasis", "contains", "dense_rank", "intersect", "is_prime", "kernel_basis",
    "random_subspace", "rank", "rref", "sparse_rank", "subspace_sum",
]
