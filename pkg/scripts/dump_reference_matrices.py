#!/usr/bin/env python3
"""Print the constraint matrices of the six reference constructions,
row-labeled by loss partition, for eyeball comparison.

Usage: python scripts/dump_reference_matrices.py
"""

from adcodes.cli import _matrix_dump
from adcodes.synthesis import SynthesisParams, build_matrix

CASES = [
    ("t=1, w=1, u=3 (n=3)", SynthesisParams.create(1, w=1, u=3)),
    ("t=2, w=2, u=3 (n=6)", SynthesisParams.create(2)),
    ("t=3, w=3, u=4 (n=12)", SynthesisParams.create(3)),
    ("t=4, w=4, u=5 (n=20)", SynthesisParams.create(4)),
    ("t=5, w=5, u=6 (n=30)", SynthesisParams.create(5)),
    ("t=3, w=4, u=4 (n=16)", SynthesisParams.create(3, w=4, u=4)),
]


def main() -> None:
    for title, params in CASES:
        print(f"== {title} ==")
        print(_matrix_dump(build_matrix(params)))


if __name__ == "__main__":
    main()
