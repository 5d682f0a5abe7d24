"""One test per numbered self-check criterion, in order.

Criteria 08 and 09 document known limits of the construction/decoder
pair (their detail strings name the exact counterexamples).  They
currently fail and will keep failing until the underlying behavior
changes; they are asserted at full strength anyway, because a red test
is the honest record of the gap.

Later criteria reuse artifacts cached by earlier ones (the randomized
distance searches and the threshold sweep), so running the whole module
is much cheaper than the sum of the individual budgets.
"""

from __future__ import annotations

from tgre import acceptance


def _check(number: int) -> None:
    result = acceptance.run([number]).results[0]
    assert result.ok, f"criterion {number:02d}: {result.detail} ({result.seconds:.1f}s)"


def test_criterion_01_reference_builds_rate_half():
    _check(1)


def test_criterion_02_reference_build_n20():
    _check(2)


def test_criterion_03_structural_validation_all_sizes():
    _check(3)


def test_criterion_04_parameter_table_and_rate_schedule():
    _check(4)


def test_criterion_05_exact_distances_small_codes():
    _check(5)


def test_criterion_06_randomized_distances_large_codes():
    _check(6)


def test_criterion_07_logical_x_minimum_weights():
    _check(7)


def test_criterion_08_type2_weights_irreducible():
    _check(8)


def test_criterion_09_single_qubit_errors_decode():
    _check(9)


def test_criterion_10_threshold_sweep():
    _check(10)


def test_criterion_11_rate_table():
    _check(11)


def test_criterion_12_artifacts_worker_independent():
    _check(12)
