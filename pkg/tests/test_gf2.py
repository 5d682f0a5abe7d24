"""Tests for bit-packed GF(2) linear algebra."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from tgre.gf2 import (
    BitMatrix,
    SymplecticVector,
    in_row_space,
    pack_bits,
    rank,
    row_reduce,
    solve,
    symplectic_product,
    unpack_bits,
)

# Stabilizer supports of the N=8 recursive code, 1-indexed labels.
N8_STABS = [(1, 2, 3, 5), (1, 3, 4, 7), (1, 5, 6, 7), (3, 5, 7, 8)]


def from_supports(supports, n):
    """1-indexed label tuples -> BitMatrix with 0-indexed columns."""
    return BitMatrix.from_rows([[c - 1 for c in row] for row in supports], n)


def test_pack_unpack_roundtrip():
    rng = np.random.default_rng(7)
    for n in (1, 5, 63, 64, 65, 130, 200):
        v = rng.integers(0, 2, size=n, dtype=np.uint8)
        assert np.array_equal(unpack_bits(pack_bits(v), n), v)


def test_pack_bit_order():
    # bit 0 is the lowest bit of word 0
    w = pack_bits([1, 0, 0, 0])
    assert w.shape == (1,) and int(w[0]) == 1
    w = pack_bits([0, 1] + [0] * 62 + [1])  # bits 1 and 64
    assert int(w[0]) == 2 and int(w[1]) == 1


def test_from_rows_and_support():
    m = from_supports(N8_STABS, 8)
    assert m.rows == 4 and m.cols == 8
    assert m.row_support(0) == [0, 1, 2, 4]
    assert m.row_support(3) == [2, 4, 6, 7]
    assert [m.row_weight(r) for r in range(4)] == [4, 4, 4, 4]


def test_identity_and_get_set():
    m = BitMatrix.identity(70)
    assert m.get(69, 69) == 1 and m.get(69, 68) == 0
    m.set(0, 69, 1)
    assert m.get(0, 69) == 1
    m.set(0, 69, 0)
    assert m.get(0, 69) == 0


def test_rank_known_values():
    assert rank(BitMatrix.identity(64)) == 64
    assert rank(BitMatrix(5, 9)) == 0
    # the four N=8 stabilizer rows are independent
    assert rank(from_supports(N8_STABS, 8)) == 4
    # duplicating a row and adding the sum of two rows adds nothing
    m = from_supports(N8_STABS + [N8_STABS[0], (2, 4, 5, 7)], 8)
    assert rank(m) == 4


def test_row_reduce_shape_and_pivots():
    m = from_supports(N8_STABS, 8)
    red, pivots = row_reduce(m)
    assert pivots == sorted(pivots) and len(pivots) == len(set(pivots))
    dense = red.to_dense()
    for i, c in enumerate(pivots):
        col = dense[:, c]
        assert col[i] == 1 and col.sum() == 1
    # reduction is idempotent
    red2, pivots2 = row_reduce(red)
    assert red2 == red and pivots2 == pivots


def test_in_row_space_exhaustive_small():
    rng = np.random.default_rng(11)
    for _ in range(20):
        nrows, ncols = rng.integers(1, 7), int(rng.integers(1, 13))
        m = BitMatrix.from_dense(rng.integers(0, 2, size=(int(nrows), ncols), dtype=np.uint8))
        dense = m.to_dense()
        span = set()
        for combo in itertools.product((0, 1), repeat=m.rows):
            acc = np.zeros(ncols, dtype=np.uint8)
            for i, take in enumerate(combo):
                if take:
                    acc ^= dense[i]
            span.add(tuple(acc))
        for vec in itertools.product((0, 1), repeat=ncols):
            assert in_row_space(m, np.array(vec, dtype=np.uint8)) == (vec in span)


def test_rank_matches_float_free_reference():
    # compare against an independent dense elimination
    def dense_rank(a):
        a = a.copy()
        r = 0
        for c in range(a.shape[1]):
            rows = np.flatnonzero(a[r:, c])
            if rows.size == 0:
                continue
            a[[r, r + rows[0]]] = a[[r + rows[0], r]]
            for rr in range(a.shape[0]):
                if rr != r and a[rr, c]:
                    a[rr] ^= a[r]
            r += 1
            if r == a.shape[0]:
                break
        return r

    rng = np.random.default_rng(23)
    for _ in range(30):
        shape = (int(rng.integers(1, 65)), int(rng.integers(1, 65)))
        dense = rng.integers(0, 2, size=shape, dtype=np.uint8)
        assert rank(BitMatrix.from_dense(dense)) == dense_rank(dense)


def test_solve_consistent_and_inconsistent():
    rng = np.random.default_rng(41)
    for _ in range(40):
        nrows, ncols = int(rng.integers(1, 40)), int(rng.integers(1, 40))
        m = BitMatrix.from_dense(rng.integers(0, 2, size=(nrows, ncols), dtype=np.uint8))
        x_true = rng.integers(0, 2, size=ncols, dtype=np.uint8)
        b = m.mul_vector(x_true)
        x = solve(m, b)
        assert x is not None
        assert np.array_equal(m.mul_vector(x), b)
    # x1 + x2 = 0 and x1 + x2 = 1 cannot both hold
    m = BitMatrix.from_dense(np.array([[1, 1], [1, 1]], dtype=np.uint8))
    assert solve(m, np.array([0, 1], dtype=np.uint8)) is None


def test_mul_vector_matches_dense():
    rng = np.random.default_rng(3)
    for _ in range(20):
        nrows, ncols = int(rng.integers(1, 30)), int(rng.integers(1, 200))
        dense = rng.integers(0, 2, size=(nrows, ncols), dtype=np.uint8)
        v = rng.integers(0, 2, size=ncols, dtype=np.uint8)
        expect = (dense @ v) % 2
        got = BitMatrix.from_dense(dense).mul_vector(v)
        assert np.array_equal(got, expect.astype(np.uint8))


def test_symplectic_product_basics():
    x0 = SymplecticVector(2, (0,), ())
    z0 = SymplecticVector(2, (), (0,))
    z1 = SymplecticVector(2, (), (1,))
    y0 = SymplecticVector(2, (0,), (0,))
    assert symplectic_product(x0, z0) == 1  # X and Z on the same qubit anticommute
    assert symplectic_product(x0, z1) == 0
    assert symplectic_product(x0, x0) == 0
    assert symplectic_product(y0, x0) == 1
    assert symplectic_product(y0, z0) == 1
    assert symplectic_product(y0, y0) == 0


def test_symplectic_product_symmetric_and_bilinear():
    rng = np.random.default_rng(99)

    def random_vec(n):
        return SymplecticVector(
            n,
            tuple(sorted(rng.choice(n, size=rng.integers(0, n), replace=False).tolist())),
            tuple(sorted(rng.choice(n, size=rng.integers(0, n), replace=False).tolist())),
        )

    def xor_vec(u, v):
        return SymplecticVector(
            u.n,
            tuple(sorted(set(u.x_part) ^ set(v.x_part))),
            tuple(sorted(set(u.z_part) ^ set(v.z_part))),
        )

    for _ in range(50):
        n = int(rng.integers(2, 12))
        u, v, w = random_vec(n), random_vec(n), random_vec(n)
        assert symplectic_product(u, v) == symplectic_product(v, u)
        assert symplectic_product(xor_vec(u, w), v) == (
            symplectic_product(u, v) ^ symplectic_product(w, v)
        )


def test_symplectic_product_length_mismatch():
    with pytest.raises(ValueError):
        symplectic_product(SymplecticVector(2, (0,), ()), SymplecticVector(3, (0,), ()))


def test_stabilizers_commute_pairwise():
    # all four N=8 Z-type stabilizer generators commute (even overlaps)
    vecs = [SymplecticVector(8, (), tuple(c - 1 for c in s)) for s in N8_STABS]
    for u, v in itertools.combinations(vecs, 2):
        assert symplectic_product(u, v) == 0
