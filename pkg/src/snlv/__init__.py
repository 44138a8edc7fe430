"""Succinct index for range min/max, q-th min/max and nearest smaller/larger values.

Build with ``QueryIndex.build(values)``; positions are 1-based and the
sentinels 0 and n+1 stand for "none" in psv/plv and nsv/nlv.
"""

from .bitvec import BitVector, build_bitvector
from .bp import BpTree
from .codec import CombinedEncoding, VirtualBp, encode, encode_array, encode_general
from .heap import ColoredHeap, build_colored_heap, extract_color_array
from .oracle import (NaiveOracle, UnsupportedInstance, baxter_permutations, enumerate_An,
                     is_baxter, reconstruct_from_queries)
from .query import KINDS, QueryIndex

__version__ = "0.1.0"

__all__ = [
    "BitVector", "BpTree", "ColoredHeap", "CombinedEncoding", "KINDS", "NaiveOracle",
    "QueryIndex", "UnsupportedInstance", "VirtualBp", "baxter_permutations",
    "build_bitvector", "build_colored_heap", "encode", "encode_array", "encode_general",
    "enumerate_An", "extract_color_array", "is_baxter", "reconstruct_from_queries",
]
