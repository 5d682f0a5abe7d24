"""Stabilizer-code assembly for the two recursive Tanner-graph families.

`build_ztgre` produces the rate-1/2 family whose stabilizers are all Z-type;
`build_xztgre` produces the CSS family with rate 1/(1+2^{a+1}) built from two
odd-labeled diagonal blocks glued to cyclically repeated even-labeled blocks.
`validate_code` checks the full symplectic contract of any code object.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .gf2 import BitMatrix, pack_bits, row_reduce
from .tanner import expand_g, expand_gprime, relabel_even, relabel_odd

FAMILIES = ("ztgre", "xztgre")


@dataclass(frozen=True)
class PauliOperator:
    """A Pauli product up to phase: labels carrying X and labels carrying Z.

    A label in both supports carries Y.  Weight is the size of the union.
    """

    x_support: frozenset[int] = frozenset()
    z_support: frozenset[int] = frozenset()

    @classmethod
    def x_type(cls, labels: Iterable[int]) -> "PauliOperator":
        return cls(x_support=frozenset(labels))

    @classmethod
    def z_type(cls, labels: Iterable[int]) -> "PauliOperator":
        return cls(z_support=frozenset(labels))

    @property
    def weight(self) -> int:
        return len(self.x_support | self.z_support)

    def commutes_with(self, other: "PauliOperator") -> bool:
        """Parity of the symplectic product; label-set based, no indexing needed."""
        cross = len(self.x_support & other.z_support) + len(self.z_support & other.x_support)
        return cross % 2 == 0


@dataclass(frozen=True)
class StabilizerCode:
    """An assembled code: stabilizer generators plus matched logical pairs.

    Columns of all matrix views are dense indices in ascending label order
    (labels can be gapped); `qubit_labels[col]` recovers the label.
    """

    family: str
    L: int
    a: int | None
    qubit_labels: tuple[int, ...]
    stabilizers: tuple[PauliOperator, ...]
    logical_x: tuple[PauliOperator, ...]
    logical_z: tuple[PauliOperator, ...]

    @property
    def n(self) -> int:
        return len(self.qubit_labels)

    @property
    def k(self) -> int:
        return len(self.logical_x)

    @cached_property
    def label_index(self) -> dict[int, int]:
        return {lab: i for i, lab in enumerate(self.qubit_labels)}

    def _bits(self, ops: Sequence[PauliOperator], part: str) -> BitMatrix:
        idx = self.label_index
        supports = [
            [idx[u] for u in (op.x_support if part == "x" else op.z_support)] for op in ops
        ]
        return BitMatrix.from_rows(supports, self.n)

    @cached_property
    def stab_x(self) -> BitMatrix:
        """X components of all stabilizers, one row each."""
        return self._bits(self.stabilizers, "x")

    @cached_property
    def stab_z(self) -> BitMatrix:
        """Z components of all stabilizers, one row each."""
        return self._bits(self.stabilizers, "z")

    @cached_property
    def z_stabilizer_rows(self) -> tuple[int, ...]:
        """Indices of pure-Z stabilizers (these detect X-type errors)."""
        return tuple(i for i, s in enumerate(self.stabilizers) if not s.x_support)

    @cached_property
    def x_stabilizer_rows(self) -> tuple[int, ...]:
        """Indices of pure-X stabilizers (these detect Z-type errors)."""
        return tuple(i for i, s in enumerate(self.stabilizers) if not s.z_support)

    @cached_property
    def z_check_matrix(self) -> BitMatrix:
        """Supports of the pure-Z stabilizers as parity checks (on X errors)."""
        return BitMatrix(
            len(self.z_stabilizer_rows),
            self.n,
            self.stab_z.data[list(self.z_stabilizer_rows)].copy()
            if self.z_stabilizer_rows
            else None,
        )

    @cached_property
    def x_check_matrix(self) -> BitMatrix:
        """Supports of the pure-X stabilizers as parity checks (on Z errors)."""
        return BitMatrix(
            len(self.x_stabilizer_rows),
            self.n,
            self.stab_x.data[list(self.x_stabilizer_rows)].copy()
            if self.x_stabilizer_rows
            else None,
        )

    @property
    def is_css(self) -> bool:
        return len(self.z_stabilizer_rows) + len(self.x_stabilizer_rows) == len(
            self.stabilizers
        )

    def support_cols(self, op: PauliOperator) -> tuple[np.ndarray, np.ndarray]:
        """Dense (x_cols, z_cols) index arrays for an operator."""
        idx = self.label_index
        return (
            np.array(sorted(idx[u] for u in op.x_support), dtype=np.int64),
            np.array(sorted(idx[u] for u in op.z_support), dtype=np.int64),
        )


def a_schedule(L: int) -> int:
    """Smallest a >= 1 keeping the Type-2 logical weight 1+2^{a+1} above L-a."""
    if L < 2:
        raise ValueError(f"L must be >= 2, got {L}")
    a = 1
    while not L < 1 + 2 ** (a + 1) + a:
        a += 1
    return a


def code_params(
    family: str, L: int, a: int | None = None
) -> tuple[int, int, Fraction, int]:
    """(N, k, rate, stabilizer generator weight) for the given family/level."""
    if family == "ztgre":
        if L < 2:
            raise ValueError(f"ztgre needs L >= 2, got {L}")
        n = 2**L
        return n, n // 2, Fraction(1, 2), L + 1
    if family == "xztgre":
        if a is None:
            raise ValueError("xztgre needs the rate parameter a")
        if not (L >= 2 and 1 <= a < L):
            raise ValueError(f"need 1 <= a < L with L >= 2, got L={L}, a={a}")
        n = 2 ** (L - a) + 2 ** (L + 1)
        k = 2 ** (L - a)
        return n, k, Fraction(1, 1 + 2 ** (a + 1)), (L + 1) + (L - a + 1)
    raise ValueError(f"unknown family {family!r}")


def build_ztgre(L: int) -> StabilizerCode:
    """Rate-1/2 code on 2^L qubits; stabilizers are the plain-graph checks as Z products."""
    if L < 2:
        raise ValueError(f"L must be >= 2, got {L}")
    n = 2**L
    graph = expand_g(L)
    stabilizers = tuple(PauliOperator.z_type(c) for c in graph.checks)

    logical_x: list[PauliOperator] = []
    logical_z: list[PauliOperator] = []
    for i, check in enumerate(graph.checks, start=1):
        if L % 2 == 1:
            x_support = frozenset(check)
            anchor = 2 * i
        else:
            x_support = frozenset(u - 1 if u % 2 == 0 else u + 1 for u in check)
            anchor = 2 * i - 1
        logical_x.append(PauliOperator.x_type(x_support))
        logical_z.append(PauliOperator.z_type({anchor}))

    return StabilizerCode(
        family="ztgre",
        L=L,
        a=None,
        qubit_labels=tuple(range(1, n + 1)),
        stabilizers=stabilizers,
        logical_x=tuple(logical_x),
        logical_z=tuple(logical_z),
    )


def _xz_stabilizers(L: int, a: int, odd_graph, even_graph) -> list[frozenset[int]]:
    """Glue odd diagonal-block checks to cyclically repeated even checks."""
    odd_blocks = [relabel_odd(odd_graph, block, L_total=L) for block in (0, 1)]
    even_checks = relabel_even(even_graph).checks
    half = 2 ** (L - 1)
    period = 2 ** (L - a - 1)
    out = []
    for i in range(1, 2**L + 1):
        odd_part = odd_blocks[(i - 1) // half].checks[(i - 1) % half]
        even_part = even_checks[(i - 1) % period]
        out.append(odd_part | even_part)
    return out


def build_xztgre(L: int, a: int) -> StabilizerCode:
    """CSS code of rate 1/(1+2^{a+1}): 2^L Z-type then 2^L X-type stabilizers."""
    if not (L >= 2 and 1 <= a < L):
        raise ValueError(f"need 1 <= a < L with L >= 2, got L={L}, a={a}")

    odd_labels = range(1, 2 ** (L + 2), 2)
    even_labels = range(2, 2 ** (L - a + 1) + 1, 2)
    qubit_labels = tuple(sorted([*odd_labels, *even_labels]))

    z_stabs = [
        PauliOperator.z_type(s) for s in _xz_stabilizers(L, a, expand_g(L), expand_g(L - a))
    ]
    x_stabs = [
        PauliOperator.x_type(s)
        for s in _xz_stabilizers(L, a, expand_gprime(L), expand_gprime(L - a))
    ]

    half_k = 2 ** (L - a - 1)
    copies = 2 ** (a + 1)
    stride = 2 ** (L - a + 1)
    even_x_checks = relabel_even(expand_gprime(L - a)).checks
    even_z_checks = relabel_even(expand_g(L - a)).checks

    logical_x: list[PauliOperator] = []
    logical_z: list[PauliOperator] = []
    for i in range(1, half_k + 1):
        logical_x.append(PauliOperator.x_type(even_x_checks[i - 1]))
        support = {4 * i - 2, 4 * i - 3}
        support.update(4 * i - 3 + m * stride for m in range(1, copies))
        logical_z.append(PauliOperator.z_type(support))
    for j in range(1, half_k + 1):
        support = {4 * j, 4 * j - 1}
        support.update(4 * j - 1 + m * stride for m in range(1, copies))
        logical_x.append(PauliOperator.x_type(support))
        logical_z.append(PauliOperator.z_type(even_z_checks[j - 1]))

    return StabilizerCode(
        family="xztgre",
        L=L,
        a=a,
        qubit_labels=qubit_labels,
        stabilizers=tuple(z_stabs + x_stabs),
        logical_x=tuple(logical_x),
        logical_z=tuple(logical_z),
    )


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the six structural checks on a StabilizerCode."""

    stabilizers_commute: bool
    stabilizers_independent: bool
    logicals_commute_with_stabilizers: bool
    logical_pairs_symplectic: bool
    logicals_outside_stabilizer_span: bool
    logical_count_matches_rank: bool
    stabilizer_rank: int = field(compare=False)

    CHECK_NAMES = (
        "stabilizers_commute",
        "stabilizers_independent",
        "logicals_commute_with_stabilizers",
        "logical_pairs_symplectic",
        "logicals_outside_stabilizer_span",
        "logical_count_matches_rank",
    )

    @property
    def ok(self) -> bool:
        return all(getattr(self, name) for name in self.CHECK_NAMES)

    def failures(self) -> list[str]:
        return [name for name in self.CHECK_NAMES if not getattr(self, name)]


def _gram_mod2(ax: np.ndarray, az: np.ndarray, bx: np.ndarray, bz: np.ndarray) -> np.ndarray:
    """Pairwise symplectic products between two operator sets, mod 2.

    Dense uint8 inputs; float32 matmul keeps counts exact (inner dim < 2^24)
    while routing through BLAS, which matters at the 1024x1152 sizes here.
    """
    axf, azf = ax.astype(np.float32), az.astype(np.float32)
    bxf, bzf = bx.astype(np.float32), bz.astype(np.float32)
    cross = axf @ bzf.T + azf @ bxf.T
    return cross.astype(np.int64) & 1


def validate_code(code: StabilizerCode) -> ValidationReport:
    """Run the six symplectic/rank checks; failures land in the report, not raises."""
    sx, sz = code.stab_x.to_dense(), code.stab_z.to_dense()
    lx_x = code._bits(code.logical_x, "x").to_dense()
    lx_z = code._bits(code.logical_x, "z").to_dense()
    lz_x = code._bits(code.logical_z, "x").to_dense()
    lz_z = code._bits(code.logical_z, "z").to_dense()

    commute = not _gram_mod2(sx, sz, sx, sz).any()

    # one reduction of the (x|z) stabilizer matrix serves checks (ii), (v), (vi)
    sym = BitMatrix.from_dense(np.concatenate([sx, sz], axis=1).astype(np.uint8))
    reduced, pivots = row_reduce(sym)
    stab_rank = len(pivots)
    independent = stab_rank == len(code.stabilizers)

    log_vs_stab = not (
        _gram_mod2(lx_x, lx_z, sx, sz).any() or _gram_mod2(lz_x, lz_z, sx, sz).any()
    )

    k = code.k
    pair_gram = _gram_mod2(lx_x, lx_z, lz_x, lz_z)
    pairs_ok = (
        len(code.logical_z) == k
        and np.array_equal(pair_gram, np.eye(k, dtype=np.int64))
        and not _gram_mod2(lx_x, lx_z, lx_x, lx_z).any()
        and not _gram_mod2(lz_x, lz_z, lz_x, lz_z).any()
    )

    outside = True
    for dense_x, dense_z in ((lx_x, lx_z), (lz_x, lz_z)):
        for row in range(dense_x.shape[0]):
            residual = pack_bits(np.concatenate([dense_x[row], dense_z[row]]))
            for i, c in enumerate(pivots):
                if (residual[c >> 6] >> np.uint64(c & 63)) & np.uint64(1):
                    residual ^= reduced.data[i]
            if not residual.any():
                outside = False

    count_ok = k == code.n - stab_rank

    return ValidationReport(
        stabilizers_commute=commute,
        stabilizers_independent=independent,
        logicals_commute_with_stabilizers=log_vs_stab,
        logical_pairs_symplectic=pairs_ok,
        logicals_outside_stabilizer_span=outside,
        logical_count_matches_rank=count_ok,
        stabilizer_rank=stab_rank,
    )


def anticommuting_stabilizer_pairs(
    code: StabilizerCode, limit: int = 10
) -> list[tuple[int, int]]:
    """Indices (i, j), i < j, of stabilizer pairs that fail to commute.

    Empty for a valid code; used to point at the offending rows when
    validation reports a commutation failure.
    """
    sx, sz = code.stab_x.to_dense(), code.stab_z.to_dense()
    gram = _gram_mod2(sx, sz, sx, sz)
    pairs = []
    for i, j in zip(*np.nonzero(np.triu(gram, k=1))):
        pairs.append((int(i), int(j)))
        if len(pairs) >= limit:
            break
    return pairs
