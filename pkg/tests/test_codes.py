"""Construction and validation tests for both code families."""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import pytest

from tgre.codes import (
    PauliOperator,
    StabilizerCode,
    a_schedule,
    build_xztgre,
    build_ztgre,
    code_params,
    validate_code,
)

# (L, a, N, k, rate) that the larger family is expected to hit
XZ_PARAMS = [
    (2, 1, 10, 2, Fraction(1, 5)),
    (3, 1, 20, 4, Fraction(1, 5)),
    (4, 1, 40, 8, Fraction(1, 5)),
    (5, 1, 80, 16, Fraction(1, 5)),
    (6, 2, 144, 16, Fraction(1, 9)),
    (7, 2, 288, 32, Fraction(1, 9)),
    (8, 2, 576, 64, Fraction(1, 9)),
    (9, 2, 1152, 128, Fraction(1, 9)),
]


def zop(*labels):
    return PauliOperator.z_type(labels)


def xop(*labels):
    return PauliOperator.x_type(labels)


class TestPauliOperator:
    def test_weight_counts_union(self):
        op = PauliOperator(x_support=frozenset({1, 2}), z_support=frozenset({2, 3}))
        assert op.weight == 3

    def test_commutation(self):
        assert not xop(1).commutes_with(zop(1))
        assert xop(1).commutes_with(zop(2))
        assert xop(1, 2).commutes_with(zop(1, 2))


class TestBuildZtgre:
    def test_level2_full(self):
        code = build_ztgre(2)
        assert code.stabilizers == (zop(1, 2, 3), zop(1, 3, 4))
        assert code.logical_x == (xop(1, 2, 4), xop(2, 3, 4))
        assert code.logical_z == (zop(1), zop(3))
        assert code.qubit_labels == (1, 2, 3, 4)

    def test_level3_full(self):
        code = build_ztgre(3)
        assert code.stabilizers == (
            zop(1, 2, 3, 5),
            zop(1, 3, 4, 7),
            zop(1, 5, 6, 7),
            zop(3, 5, 7, 8),
        )
        # odd level: logical X supports coincide with the stabilizer supports
        assert [set(p.x_support) for p in code.logical_x] == [
            set(s.z_support) for s in code.stabilizers
        ]
        assert code.logical_z == (zop(2), zop(4), zop(6), zop(8))

    def test_level4_logicals(self):
        code = build_ztgre(4)
        expected_x = [
            {1, 2, 4, 6, 10},
            {2, 3, 4, 8, 12},
            {2, 5, 6, 8, 14},
            {4, 6, 7, 8, 16},
            {2, 9, 10, 12, 14},
            {4, 10, 11, 12, 16},
            {6, 10, 13, 14, 16},
            {8, 12, 14, 15, 16},
        ]
        assert [set(p.x_support) for p in code.logical_x] == expected_x
        assert [p.z_support for p in code.logical_z] == [
            frozenset({2 * i - 1}) for i in range(1, 9)
        ]

    def test_level5_spot(self):
        code = build_ztgre(5)
        assert code.stabilizers[0] == zop(1, 2, 3, 5, 9, 17)
        assert code.logical_x[0] == xop(1, 2, 3, 5, 9, 17)
        assert code.logical_z[0] == zop(2)
        assert code.logical_z[15] == zop(32)

    @pytest.mark.parametrize("L", [2, 3, 4, 5, 6])
    def test_validates(self, L):
        report = validate_code(build_ztgre(L))
        assert report.ok, report.failures()

    def test_rejects_level_below_two(self):
        with pytest.raises(ValueError):
            build_ztgre(1)


class TestBuildXztgre:
    def test_31_stabilizers_full(self):
        code = build_xztgre(3, 1)
        z_expected = [
            {1, 3, 5, 9} | {2, 4, 6},
            {1, 5, 7, 13} | {2, 6, 8},
            {1, 9, 11, 13} | {2, 4, 6},
            {5, 9, 13, 15} | {2, 6, 8},
            {17, 19, 21, 25} | {2, 4, 6},
            {17, 21, 23, 29} | {2, 6, 8},
            {17, 25, 27, 29} | {2, 4, 6},
            {21, 25, 29, 31} | {2, 6, 8},
        ]
        x_expected = [
            {1, 3, 7, 11} | {2, 4, 8},
            {3, 5, 7, 15} | {4, 6, 8},
            {3, 9, 11, 15} | {2, 4, 8},
            {7, 11, 13, 15} | {4, 6, 8},
            {17, 19, 23, 27} | {2, 4, 8},
            {19, 21, 23, 31} | {4, 6, 8},
            {19, 25, 27, 31} | {2, 4, 8},
            {23, 27, 29, 31} | {4, 6, 8},
        ]
        assert [set(s.z_support) for s in code.stabilizers[:8]] == z_expected
        assert [set(s.x_support) for s in code.stabilizers[8:]] == x_expected
        assert all(not s.x_support for s in code.stabilizers[:8])
        assert all(not s.z_support for s in code.stabilizers[8:])

    def test_31_logicals_full(self):
        code = build_xztgre(3, 1)
        assert code.logical_x == (
            xop(2, 4, 8),
            xop(4, 6, 8),
            xop(3, 4, 11, 19, 27),
            xop(7, 8, 15, 23, 31),
        )
        assert code.logical_z == (
            zop(1, 2, 9, 17, 25),
            zop(5, 6, 13, 21, 29),
            zop(2, 4, 6),
            zop(2, 6, 8),
        )

    def test_31_qubit_labels(self):
        code = build_xztgre(3, 1)
        assert len(code.qubit_labels) == 20
        assert set(code.qubit_labels) == set(range(1, 32, 2)) | {2, 4, 6, 8}

    def test_21_full(self):
        code = build_xztgre(2, 1)
        assert code.n == 10 and code.k == 2
        assert code.logical_x == (xop(2, 4), xop(3, 4, 7, 11, 15))
        assert code.logical_z == (zop(1, 2, 5, 9, 13), zop(2, 4))

    @pytest.mark.parametrize("L,a,n,k,rate", XZ_PARAMS[:5])
    def test_validates_small(self, L, a, n, k, rate):
        code = build_xztgre(L, a)
        assert (code.n, code.k) == (n, k)
        report = validate_code(code)
        assert report.ok, report.failures()
        assert report.stabilizer_rank == len(code.stabilizers)

    @pytest.mark.parametrize("L,a", [(2, 2), (3, 0), (3, 3), (1, 1)])
    def test_rejects_bad_parameters(self, L, a):
        with pytest.raises(ValueError):
            build_xztgre(L, a)

    @pytest.mark.parametrize("L,a", [(3, 1), (4, 1), (5, 2), (6, 2)])
    def test_unique_labels_per_stabilizer(self, L, a):
        code = build_xztgre(L, a)
        half = 2 ** (L - 1)
        z_stabs = code.stabilizers[: 2**L]
        x_stabs = code.stabilizers[2**L :]
        for i, stab in enumerate(z_stabs):
            block, j = divmod(i, half)
            label = 4 * (j + 1) - 1 + block * 2 ** (L + 1)
            assert label in stab.z_support
            assert sum(label in s.z_support for s in z_stabs) == 1
        for i, stab in enumerate(x_stabs):
            block, j = divmod(i, half)
            label = 4 * (j + 1) - 3 + block * 2 ** (L + 1)
            assert label in stab.x_support
            assert sum(label in s.x_support for s in x_stabs) == 1

    @pytest.mark.parametrize("L,a", [(2, 1), (3, 1), (4, 1), (5, 1), (6, 2)])
    def test_logical_weights_and_pairing(self, L, a):
        code = build_xztgre(L, a)
        half = code.k // 2
        type2_weight = 1 + 2 ** (a + 1)
        type1_weight = L - a + 1
        type2_supports = []
        for i in range(half):
            assert code.logical_x[i].weight == type1_weight
            assert code.logical_z[i].weight == type2_weight
            shared = code.logical_x[i].x_support & code.logical_z[i].z_support
            assert shared == {4 * (i + 1) - 2}
            type2_supports.append(code.logical_z[i].z_support)
        for j in range(half):
            assert code.logical_z[half + j].weight == type1_weight
            assert code.logical_x[half + j].weight == type2_weight
            shared = code.logical_x[half + j].x_support & code.logical_z[half + j].z_support
            assert shared == {4 * (j + 1)}
            type2_supports.append(code.logical_x[half + j].x_support)
        for s in range(len(type2_supports)):
            for t in range(s + 1, len(type2_supports)):
                assert not (type2_supports[s] & type2_supports[t])

    def test_stabilizer_weights(self):
        for L, a, *_ in XZ_PARAMS[:4]:
            code = build_xztgre(L, a)
            expected = (L + 1) + (L - a + 1)
            assert {s.weight for s in code.stabilizers} == {expected}


class TestASchedule:
    @pytest.mark.parametrize(
        "L,a", [(2, 1), (3, 1), (4, 1), (5, 1), (6, 2), (7, 2), (8, 2), (9, 2), (10, 2), (11, 3)]
    )
    def test_values(self, L, a):
        assert a_schedule(L) == a

    def test_rejects_small_level(self):
        with pytest.raises(ValueError):
            a_schedule(1)


class TestCodeParams:
    def test_ztgre(self):
        assert code_params("ztgre", 2) == (4, 2, Fraction(1, 2), 3)
        assert code_params("ztgre", 5) == (32, 16, Fraction(1, 2), 6)

    @pytest.mark.parametrize("L,a,n,k,rate", XZ_PARAMS)
    def test_xztgre_table(self, L, a, n, k, rate):
        got_n, got_k, got_r, got_w = code_params("xztgre", L, a)
        assert (got_n, got_k, got_r) == (n, k, rate)
        assert got_w == (L + 1) + (L - a + 1)

    def test_invalid(self):
        with pytest.raises(ValueError):
            code_params("xztgre", 3)
        with pytest.raises(ValueError):
            code_params("surface", 3)
        with pytest.raises(ValueError):
            code_params("xztgre", 3, 3)


class TestValidateCode:
    def test_duplicate_stabilizer_fails_rank(self):
        code = build_ztgre(3)
        broken = replace(code, stabilizers=code.stabilizers[:3] + (code.stabilizers[0],))
        report = validate_code(broken)
        assert not report.ok
        assert "stabilizers_independent" in report.failures()
        assert "logical_count_matches_rank" in report.failures()

    def test_anticommuting_stabilizer_fails_commute(self):
        # swap in the (commutation-breaking) variant of the second X-type row
        code = build_xztgre(3, 1)
        bad = PauliOperator.x_type({3, 5, 7, 11, 4, 6, 8})
        stabs = list(code.stabilizers)
        stabs[9] = bad
        report = validate_code(replace(code, stabilizers=tuple(stabs)))
        assert not report.stabilizers_commute

    def test_logical_inside_span_detected(self):
        code = build_ztgre(3)
        # replace a logical X with a stabilizer (Z-type, commutes with everything)
        broken = replace(code, logical_x=code.logical_x[:3] + (code.stabilizers[0],))
        report = validate_code(broken)
        assert not report.logicals_outside_stabilizer_span
        assert not report.logical_pairs_symplectic


class TestMatrixViews:
    def test_css_split_31(self):
        code = build_xztgre(3, 1)
        assert code.is_css
        assert code.z_stabilizer_rows == tuple(range(8))
        assert code.x_stabilizer_rows == tuple(range(8, 16))
        assert code.z_check_matrix.rows == 8 and code.z_check_matrix.cols == 20
        assert code.x_check_matrix.rows == 8

    def test_ztgre_is_css_with_no_x_checks(self):
        code = build_ztgre(3)
        assert code.is_css
        assert code.x_check_matrix.rows == 0
        assert code.z_check_matrix.rows == 4

    def test_support_cols_roundtrip(self):
        code = build_xztgre(3, 1)
        xcols, zcols = code.support_cols(code.logical_z[0])
        assert xcols.size == 0
        assert [code.qubit_labels[c] for c in zcols] == [1, 2, 9, 17, 25]
