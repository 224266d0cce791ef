"""toepkit: computable checks for Toeplitz subshifts of finite rank."""

from .words import (
    Alphabet,
    BlockCode,
    Building,
    DistinguishedAffix,
    Word,
    buildings,
    coincidence_set,
    distinguished_prefix,
    distinguished_suffix,
    is_euclidean_pair,
    is_uniquely_built,
    occurrences,
    primitive_root,
)

__version__ = "0.1.0"
