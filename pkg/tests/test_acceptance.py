"""Acceptance suite: every exit criterion, one test and one printed line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS lines.
"""

import math
import time
from fractions import Fraction

import pytest

import reference_data
from adcodes import oracle
from adcodes.cli import _table_rows
from adcodes.exact import matrix_from_strings, matvec, nullspace, rank, same_span
from adcodes.partitions import (
    cumulative_partition_count,
    enumerate_weight_vectors,
    error_labels,
    orbit_size,
    partition_count,
)
from adcodes.synthesis import (
    build_matrix,
    dicke_expectation_bruteforce,
    fidelity_lower_bound,
    matrix_element,
    min_distance,
    min_distance_bruteforce,
    row_dependence_check,
)

F = Fraction


def _announce(number: int, name: str) -> None:
    print(f"ACCEPTANCE {number} {name}: PASS")


def test_criterion_1_matrix_reproduction():
    start = time.perf_counter()
    built = {
        name: build_matrix(reference_data.make_params(name))
        for name in reference_data.CASE_NAMES
    }
    elapsed = time.perf_counter() - start
    for name, cm in built.items():
        expected = matrix_from_strings(reference_data.MATRIX_ROWS[name])
        assert cm.matrix == expected, f"{name}: entry mismatch"

    # The circulated transcription of the t5 matrix differs in exactly two
    # rows of its weight-5 block; demonstrate that the corrected rows, not the
    # circulated ones, are the consistent ones.
    corrected = matrix_from_strings(reference_data.MATRIX_ROWS["t5_n30"])
    circulated = matrix_from_strings(reference_data.T5_ROWS_AS_CIRCULATED)
    differing = [
        i for i in range(18) if corrected.row(i) != circulated.row(i)
    ]
    assert differing == [13, 14]
    assert circulated.row(13) == circulated.row(8)  # duplicate of the (2,2) row
    assert circulated.row(14) == corrected.row(13)  # the (3,2) row, one slot late

    n = 30
    labels = error_labels(5)
    basis_labels = built["t5_n30"].basis.labels
    # no weight-5 loss class reproduces the circulated row 14
    weight5 = [l for l in labels if l.weight == 5]
    for label in weight5:
        row = tuple(matrix_element(label, q, n) for q in basis_labels)
        assert row != circulated.row(13)
    # the circulated variant breaks the weighted block row-sum identity ...
    col = 1
    circulated_sum = sum(
        (orbit_size(l.padded(n)) * circulated[l.index - 1, col] for l in weight5), F(0)
    )
    assert circulated_sum != math.comb(n, 5)
    # ... which the corrected matrix satisfies in every column
    for column in range(corrected.cols):
        corrected_sum = sum(
            (orbit_size(l.padded(n)) * corrected[l.index - 1, column] for l in weight5),
            F(0),
        )
        assert corrected_sum == math.comb(n, 5)
    # the corrected rows re-derive by the independent orbit-average oracle
    for row_index in (13, 14):
        tau = labels[row_index].partition
        for column, q in enumerate(basis_labels):
            assert dicke_expectation_bruteforce(tau, q) == corrected[row_index, column]
    # and the known nullspace vector annihilates the corrected matrix exactly
    vector = reference_data.NULLSPACE_SPANS["t5_n30"][0]
    assert matvec(corrected, vector) == (F(0),) * 18

    assert elapsed < 5.0, f"matrix construction took {elapsed:.2f}s"
    _announce(1, "matrix-reproduction")


def test_criterion_2_rank_and_nullspace(constraint_matrices):
    for name, cm in constraint_matrices.items():
        basis = nullspace(cm.matrix)
        assert rank(cm.matrix) == reference_data.RANKS[name], name
        assert len(basis.vectors) == reference_data.NULLITIES[name], name
        assert same_span(basis.vectors, reference_data.NULLSPACE_SPANS[name]), name
    _announce(2, "nullspace-reproduction")


def test_criterion_3_code_reproduction(code_specs):
    # the three-mode code: a single unit weight on each side
    t1 = code_specs["t1_n3"]
    assert sorted(t1.zero_weights.values()) == [F(1)]
    assert sorted(t1.one_weights.values()) == [F(1)]
    assert set(t1.zero_weights) | set(t1.one_weights) == {(3, 0, 0), (1, 1, 1)}
    for name in ("t2_n6", "t3_n12", "t4_n20", "t5_n30"):
        spec = code_specs[name]
        assert dict(spec.zero_weights) == reference_data.ZERO_WEIGHTS[name], name
        assert dict(spec.one_weights) == reference_data.ONE_WEIGHTS[name], name
    assert all(w.denominator == 1342629 or 1342629 % w.denominator == 0
               for w in code_specs["t5_n30"].zero_weights.values())
    _announce(3, "code-reproduction")


def test_criterion_4_distances(constraint_matrices):
    expected = {"t1_n3": 4, "t2_n6": 6, "t3_n12": 8, "t3_n16": 8}
    for name, value in expected.items():
        assert min_distance(constraint_matrices[name].basis) == value, name
    for name in ("t1_n3", "t2_n6", "t3_n12", "t3_n16", "t4_n20"):
        basis = constraint_matrices[name].basis
        assert min_distance(basis) == min_distance_bruteforce(basis), name
    with pytest.raises(ValueError, match="cap"):
        min_distance_bruteforce(constraint_matrices["t5_n30"].basis)
    _announce(4, "distance-values")


def test_criterion_5_parameter_table():
    start = time.perf_counter()
    rows = _table_rows(10, "auto", 5)
    elapsed = time.perf_counter() - start
    by_t = {row["t"]: row for row in rows}
    for t, expected in reference_data.TABLE_EXACT_N.items():
        assert by_t[t]["mode"] == "exact"
        assert by_t[t]["N"] == expected, t
    for t, expected in reference_data.TABLE_INEQUALITY_N.items():
        assert by_t[t]["mode"] == "inequality"
        assert by_t[t]["N"] == expected, t
    assert all(row["ratio"] <= 1.3 for row in rows)
    assert elapsed < 60.0, f"table took {elapsed:.2f}s"
    _announce(5, "parameter-table")


def test_criterion_6_kl_bruteforce(code_specs):
    start = time.perf_counter()
    for name in ("t1_n3", "t2_n6"):
        for gamma in (0.01, 0.1, 0.3):
            report = oracle.kl_verify(code_specs[name], gamma, scope="full")
            assert report.max_nondeformation_violation < 1e-10, (name, gamma)
            assert report.max_offdiag_violation < 1e-10, (name, gamma)
            assert report.max_ortho_violation < 1e-10, (name, gamma)
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0, f"KL verification took {elapsed:.2f}s"
    _announce(6, "kl-bruteforce")


def test_criterion_7_entanglement_fidelity(code_specs):
    assert oracle.entanglement_fidelity(code_specs["t1_n3"], 0.1) >= 0.972 - 1e-9
    bound = fidelity_lower_bound(6, 2, 0.05)
    assert oracle.entanglement_fidelity(code_specs["t2_n6"], 0.05) >= bound - 1e-9
    _announce(7, "entanglement-fidelity")


def test_criterion_8_property_suites(constraint_matrices, code_specs):
    # weighted block row-sum identity, exact, on every built matrix
    for name, cm in constraint_matrices.items():
        n = cm.n
        for k in range(1, cm.t + 1):
            block = [l for l in cm.row_labels if l.weight == k]
            for col in range(cm.matrix.cols):
                total = sum(
                    (orbit_size(l.padded(n)) * cm.matrix[l.index - 1, col] for l in block),
                    F(0),
                )
                assert total == math.comb(n, k), (name, k)

    # elementary-symmetric row dependence for every (h, w_err) pair
    for name in ("t2_n6", "t3_n12", "t4_n20", "t5_n30", "t3_n16"):
        cm = constraint_matrices[name]
        for h in range(1, cm.t):
            for w_err in range(h + 1, cm.t + 1):
                assert row_dependence_check(cm, h, w_err), (name, h, w_err)

    # weight-resolved loss identity, brute force, every x with n <= 6
    gamma = 0.25
    for n in range(1, 7):
        for weight in range(7):
            for x in enumerate_weight_vectors(weight, n):
                for kappa in range(4):
                    assert oracle.prop_identity_check(x, kappa, gamma) < 1e-13, (x, kappa)

    # permutation invariance of every synthesized code
    for name, spec in code_specs.items():
        samples = 6 if name == "t5_n30" else 20
        assert oracle.permutation_invariance_check(spec, sample_size=samples), name

    # counting lower bound on the nullity of every built matrix
    for name, cm in constraint_matrices.items():
        t, w = cm.t, reference_data.make_params(name).w
        computed = len(nullspace(cm.matrix).vectors)
        bound = partition_count(w) + 1 - (cumulative_partition_count(t) - math.comb(t, 2))
        assert computed >= bound, name

    _announce(8, "property-suites")
