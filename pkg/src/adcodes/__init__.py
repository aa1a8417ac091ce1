"""Exact synthesis and numerical verification of permutation-invariant
constant-excitation codes correcting photon loss."""

from . import exact, oracle, partitions, synthesis
from .synthesis import CodeSpec, SynthesisFailure, SynthesisParams, synthesize

__all__ = [
    "CodeSpec",
    "SynthesisFailure",
    "SynthesisParams",
    "exact",
    "oracle",
    "partitions",
    "synthesis",
    "synthesize",
]
