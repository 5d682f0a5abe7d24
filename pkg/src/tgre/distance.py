"""Minimum logical-operator weights: exact search, randomized search, and
the two structural weight checks.

Exact mode enumerates kernel codewords per Pauli class by increasing weight
(meet-in-the-middle on syndrome halves).  Estimated mode runs a randomized
information-set search: row-reduce the class generator matrix under a random
pivot order and harvest low-weight rows.  Both report per-class minima with
verifiable certificates.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .codes import PauliOperator, StabilizerCode, build_ztgre
from .gf2 import BitMatrix, row_reduce, unpack_bits

DEFAULT_BUDGET = 10**9


class BudgetExceeded(RuntimeError):
    """Raised when a search would exceed its enumeration budget."""


@dataclass(frozen=True)
class DistanceResult:
    """Per-class minimum weights; None means nothing found within the bound."""

    wt_min_x: int | None
    wt_min_z: int | None
    wt_min_y: int | None
    mode: str  # "exact" or "estimated"
    max_weight: int | None
    certificates: dict = field(compare=False)
    search_effort: dict = field(compare=False)

    @property
    def d(self) -> int | None:
        """Least known class minimum (unknown classes exceed the bound searched)."""
        known = [w for w in (self.wt_min_x, self.wt_min_z, self.wt_min_y) if w is not None]
        return min(known) if known else None


# ── shared GF(2) helpers on Python ints ──────────────────────────────────


def _support_int(cols: Iterable[int]) -> int:
    v = 0
    for c in cols:
        v |= 1 << c
    return v


def _words_to_int(words: np.ndarray) -> int:
    return int.from_bytes(words.tobytes(), "little")


def _reduced_int_rows(m: BitMatrix) -> tuple[list[int], list[int]]:
    """(rows-as-ints, pivot columns) of the RREF, zero rows dropped."""
    reduced, pivots = row_reduce(m)
    rows = [_words_to_int(reduced.data[i]) for i in range(len(pivots))]
    return rows, pivots


def _outside_span(v: int, rows: Sequence[int], pivots: Sequence[int]) -> bool:
    for row, c in zip(rows, pivots):
        if (v >> c) & 1:
            v ^= row
    return v != 0


def _op_from_parts(code: StabilizerCode, x_int: int, z_int: int) -> PauliOperator:
    labels = code.qubit_labels
    xs = frozenset(labels[c] for c in _int_bits(x_int))
    zs = frozenset(labels[c] for c in _int_bits(z_int))
    return PauliOperator(x_support=xs, z_support=zs)


def _int_bits(v: int) -> list[int]:
    out = []
    c = 0
    while v:
        if v & 1:
            out.append(c)
        v >>= 1
        c += 1
    return out


# ── exact enumeration ────────────────────────────────────────────────────


class _Effort:
    __slots__ = ("count", "budget")

    def __init__(self, budget: int):
        self.count = 0
        self.budget = budget

    def spend(self, amount: int) -> None:
        self.count += amount
        if self.count > self.budget:
            raise BudgetExceeded(
                f"enumeration exceeded budget ({self.count} > {self.budget} candidate checks)"
            )


def _column_syndromes(m: BitMatrix) -> list[int]:
    """Syndrome of each unit vector as a Python int (one bit per check row)."""
    dense = m.to_dense()
    return [_support_int(np.flatnonzero(dense[:, c])) for c in range(m.cols)]


def _kernel_supports(
    cols: list[int], n: int, w: int, effort: _Effort
) -> set[tuple[int, ...]]:
    """All weight-w supports whose column syndromes XOR to zero (meet in the middle)."""
    w1, w2 = w // 2, w - w // 2
    effort.spend(comb(n, w1) + comb(n, w2))
    table: dict[int, list[tuple[int, ...]]] = {}
    for combo in itertools.combinations(range(n), w1):
        s = 0
        for c in combo:
            s ^= cols[c]
        table.setdefault(s, []).append(combo)
    found: set[tuple[int, ...]] = set()
    for combo in itertools.combinations(range(n), w2):
        s = 0
        for c in combo:
            s ^= cols[c]
        for other in table.get(s, ()):
            effort.spend(1)
            merged = set(combo) | set(other)
            if len(merged) == w:
                found.add(tuple(sorted(merged)))
    return found


def _min_weight_no_checks(
    n: int, max_weight: int, rows: list[int], pivots: list[int], effort: _Effort
) -> tuple[int | None, tuple[int, ...] | None]:
    """Minimum-weight support outside a row space when every support is a codeword."""
    for w in range(1, max_weight + 1):
        for combo in itertools.combinations(range(n), w):
            effort.spend(1)
            if _outside_span(_support_int(combo), rows, pivots):
                return w, combo
    return None, None


def exact_distance(
    code: StabilizerCode, max_weight: int, budget: int = DEFAULT_BUDGET
) -> DistanceResult:
    """Exact per-class minima up to max_weight by exhaustive kernel enumeration."""
    if not code.is_css:
        raise ValueError("exact search requires a CSS code (pure X/Z stabilizers)")
    if max_weight < 1:
        raise ValueError("max_weight must be >= 1")
    n = code.n
    projected = 3 * sum(comb(n, w) for w in range(1, max_weight + 1))
    if projected > budget:
        raise BudgetExceeded(
            f"feasibility guard: {projected} projected candidates > budget {budget}"
        )
    effort = _Effort(budget)

    mz, mx = code.z_check_matrix, code.x_check_matrix
    rs_x = _reduced_int_rows(mx)  # pure-X stabilizer span
    rs_z = _reduced_int_rows(mz)  # pure-Z stabilizer span
    cols_z = _column_syndromes(mz)
    cols_x = _column_syndromes(mx)

    # per class: kernel vectors by weight, split into logical / stabilizer-span
    def search_class(check_cols, check_rows, span):
        """-> (min weight, certificate, per-weight kernel entries [(support, logical)])."""
        by_weight: dict[int, list[tuple[tuple[int, ...], bool]]] = {}
        best: tuple[int, tuple[int, ...]] | None = None
        for w in range(1, max_weight + 1):
            if check_rows == 0:
                supports = None  # every support is in the kernel; handled separately
            else:
                supports = sorted(_kernel_supports(check_cols, n, w, effort))
            entries = []
            if supports is not None:
                for supp in supports:
                    logical = _outside_span(_support_int(supp), *span)
                    entries.append((supp, logical))
                    if logical and best is None:
                        best = (w, supp)
            by_weight[w] = entries
        if check_rows == 0:
            w, supp = _min_weight_no_checks(n, max_weight, *span, effort)
            if supp is not None:
                best = (w, supp)
        return best, by_weight

    best_x, kernel_x = search_class(cols_z, mz.rows, rs_x)
    best_z, kernel_z = search_class(cols_x, mx.rows, rs_z)

    certificates: dict[str, PauliOperator] = {}
    wt_x = wt_z = wt_y = None
    if best_x:
        wt_x = best_x[0]
        certificates["x"] = _op_from_parts(code, _support_int(best_x[1]), 0)
    if best_z:
        wt_z = best_z[0]
        certificates["z"] = _op_from_parts(code, 0, _support_int(best_z[1]))

    # mixed class: x-part from the Z-check kernel, z-part from the X-check kernel;
    # logical unless both parts sit in their stabilizer spans
    best_y: tuple[int, tuple[int, ...], tuple[int, ...]] | None = None
    if mx.rows == 0:
        if best_x:
            w, supp = best_x
            best_y = (w, supp, supp[:1])
    else:
        xs = sorted(
            (len(s), s, logical) for w, lst in kernel_x.items() for s, logical in lst
        )
        zs = sorted(
            (len(s), s, logical) for w, lst in kernel_z.items() for s, logical in lst
        )
        for wa, sa, la in xs:
            if best_y is not None and wa > best_y[0]:
                break
            set_a = set(sa)
            for wb, sb, lb in zs:
                if best_y is not None and max(wa, wb) > best_y[0]:
                    break
                effort.spend(1)
                if not (la or lb):
                    continue
                u = len(set_a | set(sb))
                if u > max_weight:
                    continue
                cand = (u, sa, sb)
                if best_y is None or cand < best_y:
                    best_y = cand
    if best_y:
        wt_y = best_y[0]
        certificates["y"] = _op_from_parts(
            code, _support_int(best_y[1]), _support_int(best_y[2])
        )

    return DistanceResult(
        wt_min_x=wt_x,
        wt_min_z=wt_z,
        wt_min_y=wt_y,
        mode="exact",
        max_weight=max_weight,
        certificates=certificates,
        search_effort={"candidate_checks": effort.count},
    )


# ── randomized information-set search ────────────────────────────────────


@njit(inline="always")
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + (
        (x >> np.uint64(2)) & np.uint64(0x3333333333333333)
    )
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def _isd_chunk(gen, perms, threshold, out_weights, out_rows, out_counts):
    """Row-reduce `gen` under each trial's pivot order; harvest light rows.

    gen: (R, W) packed uint64; perms: (T, ncols) pivot orders; rows with
    0 < weight <= threshold land in out_rows (capped per trial).
    """
    nrows, nwords = gen.shape
    ntrials, ncols = perms.shape
    cap = out_rows.shape[1]
    m = np.empty((nrows, nwords), dtype=np.uint64)
    for t in range(ntrials):
        for i in range(nrows):
            for j in range(nwords):
                m[i, j] = gen[i, j]
        r = 0
        for ci in range(ncols):
            c = perms[t, ci]
            w = c >> 6
            sh = np.uint64(c & 63)
            piv = -1
            for rr in range(r, nrows):
                if (m[rr, w] >> sh) & np.uint64(1):
                    piv = rr
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(nwords):
                    tmp = m[r, j]
                    m[r, j] = m[piv, j]
                    m[piv, j] = tmp
            for rr in range(nrows):
                if rr != r and ((m[rr, w] >> sh) & np.uint64(1)):
                    for j in range(nwords):
                        m[rr, j] ^= m[r, j]
            r += 1
            if r == nrows:
                break
        cnt = 0
        for rr in range(nrows):
            wt = 0
            for j in range(nwords):
                wt += _popcount64(m[rr, j])
            if 0 < wt <= threshold and cnt < cap:
                out_weights[t, cnt] = wt
                for j in range(nwords):
                    out_rows[t, cnt, j] = m[rr, j]
                cnt += 1
        out_counts[t] = cnt
    return 0


_POOL_CAP = 64
_ROW_CAP = 64
_CHUNK = 256


def _trial_perm(subkey: np.ndarray, trial: int, n: int) -> np.ndarray:
    bits = np.random.Philox(key=subkey, counter=[0, 0, 0, trial])
    return np.random.Generator(bits).permutation(n).astype(np.int64)


def _run_isd_range(
    gen_data: np.ndarray,
    n: int,
    subkey: np.ndarray,
    start: int,
    stop: int,
    threshold: int,
    span_rows: list[int],
    span_pivots: list[int],
) -> set[tuple[int, tuple[int, ...], bool]]:
    """ISD over one trial range -> entries (weight, support, is_logical)."""
    entries: set[tuple[int, tuple[int, ...], bool]] = set()
    seen: set[tuple[int, ...]] = set()
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        perms = np.empty((hi - lo, n), dtype=np.int64)
        for i, t in enumerate(range(lo, hi)):
            perms[i] = _trial_perm(subkey, t, n)
        out_w = np.zeros((hi - lo, _ROW_CAP), dtype=np.int64)
        out_rows = np.zeros((hi - lo, _ROW_CAP, gen_data.shape[1]), dtype=np.uint64)
        out_counts = np.zeros(hi - lo, dtype=np.int64)
        _isd_chunk(gen_data, perms, threshold, out_w, out_rows, out_counts)
        for i in range(hi - lo):
            for j in range(int(out_counts[i])):
                support = tuple(int(c) for c in np.flatnonzero(unpack_bits(out_rows[i, j], n)))
                if support in seen:
                    continue
                seen.add(support)
                logical = _outside_span(_support_int(support), span_rows, span_pivots)
                entries.add((int(out_w[i, j]), support, logical))
    return entries


def _truncate_pool(entries: Iterable[tuple[int, tuple[int, ...], bool]]):
    return sorted(entries)[:_POOL_CAP]


def _class_generator(code: StabilizerCode, which: str) -> BitMatrix:
    """Stack stabilizer checks of one type with the matching logical supports."""
    if which == "x":
        checks = code.x_check_matrix
        extra = [code.support_cols(op)[0] for op in code.logical_x]
    else:
        checks = code.z_check_matrix
        extra = [code.support_cols(op)[1] for op in code.logical_z]
    logical_rows = BitMatrix.from_rows([list(map(int, e)) for e in extra], code.n)
    gen = BitMatrix(checks.rows + logical_rows.rows, code.n)
    if checks.rows:
        gen.data[: checks.rows] = checks.data
    if logical_rows.rows:
        gen.data[checks.rows :] = logical_rows.data
    return gen


def estimate_distance(
    code: StabilizerCode,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> DistanceResult:
    """Randomized upper bounds per class; deterministic for (code, trials, seed).

    Bounds start at the provided logical weights, so trials=0 reports those.
    The trial space is partitioned across workers; results are merged with
    order-independent set unions, keeping outputs identical for any count.
    """
    if not code.is_css:
        raise ValueError("information-set search requires a CSS code")
    if workers is None:
        workers = int(os.environ.get("TGRE_WORKERS", "1"))
    workers = max(1, workers)

    rs_x = _reduced_int_rows(code.x_check_matrix)
    rs_z = _reduced_int_rows(code.z_check_matrix)

    def init_entries(ops: Sequence[PauliOperator], part: str, span):
        out = set()
        for op in ops:
            cols = code.support_cols(op)[0 if part == "x" else 1]
            support = tuple(int(c) for c in cols)
            out.add((len(support), support, _outside_span(_support_int(support), *span)))
        return out

    pool_x = init_entries(code.logical_x, "x", rs_x)
    pool_z = init_entries(code.logical_z, "z", rs_z)

    # fixed harvest threshold: the best mixed-class weight the initial pairs give
    init_y = min(
        len(set(ex.x_support) | set(ez.z_support))
        for ex, ez in zip(code.logical_x, code.logical_z)
    )
    logical_x_weights = [w for w, _, logical in pool_x if logical] or [code.n]
    logical_z_weights = [w for w, _, logical in pool_z if logical] or [code.n]
    threshold = max(init_y, min(logical_x_weights), min(logical_z_weights))

    effort = {"trials_per_class": trials}
    if trials > 0:
        jobs = []
        for class_id, (gen, span) in enumerate(
            ((_class_generator(code, "x"), rs_x), (_class_generator(code, "z"), rs_z))
        ):
            subkey = np.random.SeedSequence(
                entropy=[seed, code.n, class_id]
            ).generate_state(2, np.uint64)
            jobs.append((gen.data, code.n, subkey, trials, threshold, span))
        results = _run_jobs(jobs, workers)
        pool_x |= results[0]
        pool_z |= results[1]

    pool_x = _truncate_pool(pool_x)
    pool_z = _truncate_pool(pool_z)
    effort["pool_x"] = len(pool_x)
    effort["pool_z"] = len(pool_z)

    best_x = next(((w, s) for w, s, logical in pool_x if logical), None)
    best_z = next(((w, s) for w, s, logical in pool_z if logical), None)

    best_y: tuple[int, tuple[int, ...], tuple[int, ...]] | None = None
    if code.x_check_matrix.rows == 0:
        if best_x:
            best_y = (best_x[0], best_x[1], best_x[1][:1])
    else:
        for wa, sa, la in pool_x:
            if best_y is not None and wa > best_y[0]:
                break
            set_a = set(sa)
            for wb, sb, lb in pool_z:
                if best_y is not None and max(wa, wb) > best_y[0]:
                    break
                if not (la or lb):
                    continue
                cand = (len(set_a | set(sb)), sa, sb)
                if best_y is None or cand < best_y:
                    best_y = cand

    certificates: dict[str, PauliOperator] = {}
    if best_x:
        certificates["x"] = _op_from_parts(code, _support_int(best_x[1]), 0)
    if best_z:
        certificates["z"] = _op_from_parts(code, 0, _support_int(best_z[1]))
    if best_y:
        certificates["y"] = _op_from_parts(
            code, _support_int(best_y[1]), _support_int(best_y[2])
        )

    return DistanceResult(
        wt_min_x=best_x[0] if best_x else None,
        wt_min_z=best_z[0] if best_z else None,
        wt_min_y=best_y[0] if best_y else None,
        mode="estimated",
        max_weight=None,
        certificates=certificates,
        search_effort=effort,
    )


def _isd_job(args):
    gen_data, n, subkey, lo, hi, threshold, span = args
    return _run_isd_range(gen_data, n, subkey, lo, hi, threshold, span[0], span[1])


def _run_jobs(jobs, workers: int):
    """Run each class job, splitting its trial range across workers."""
    tasks = []
    for gen_data, n, subkey, trials, threshold, span in jobs:
        cuts = np.linspace(0, trials, workers + 1).astype(int)
        tasks.append(
            [
                (gen_data, n, subkey, int(lo), int(hi), threshold, span)
                for lo, hi in zip(cuts[:-1], cuts[1:])
                if hi > lo
            ]
        )
    flat = [t for group in tasks for t in group]
    if workers == 1 or len(flat) <= 1:
        outputs = [_isd_job(t) for t in flat]
    else:
        import multiprocessing as mp

        with mp.get_context("fork").Pool(processes=workers) as pool:
            outputs = pool.map(_isd_job, flat)
    results = []
    at = 0
    for group in tasks:
        merged: set = set()
        for _ in group:
            merged |= outputs[at]
            at += 1
        results.append(merged)
    return results


# ── structural weight checks ─────────────────────────────────────────────


def check_theorem1(L: int) -> tuple[int, int, bool]:
    """Brute-force the minimum pure-X logical weight of the rate-1/2 family.

    Enumerates all 2^{N/2}-1 nonempty products of the logical X generators
    (a basis of the pure-X normalizer sector) and compares the measured
    minimum against L (even L) or L+1 (odd L).
    """
    if not 2 <= L <= 5:
        raise ValueError("brute-force check budgeted for 2 <= L <= 5 only")
    code = build_ztgre(L)
    gens = [
        _support_int(code.support_cols(op)[0].tolist()) for op in code.logical_x
    ]
    best = None
    current = 0
    for i in range(1, 1 << len(gens)):
        current ^= gens[(i & -i).bit_length() - 1]
        w = current.bit_count()
        if best is None or w < best:
            best = w
    expected = L if L % 2 == 0 else L + 1
    return expected, best, expected == best


def check_prop2(code: StabilizerCode, budget: int = DEFAULT_BUDGET) -> bool:
    """True iff every Type-2 logical is minimum-weight within its coset.

    Exhausts the full stabilizer group (X-span x Z-span) and verifies no
    equivalent operator drops below weight 1+2^{a+1}.  Feasible only for
    small instances; guarded by the budget.
    """
    if code.family != "xztgre":
        raise ValueError("the fixed-weight property applies to the xztgre family")
    x_rows = [_words_to_int(code.x_check_matrix.data[i]) for i in range(code.x_check_matrix.rows)]
    z_rows = [_words_to_int(code.z_check_matrix.data[i]) for i in range(code.z_check_matrix.rows)]
    half = code.k // 2
    cost = (1 << len(x_rows)) * (1 << len(z_rows)) * (2 * half)
    if cost > budget:
        raise BudgetExceeded(f"coset enumeration cost {cost} exceeds budget {budget}")

    def span(rows: list[int]) -> list[int]:
        out = [0]
        for r in rows:
            out += [s ^ r for s in out]
        return out

    x_span, z_span = span(x_rows), span(z_rows)
    threshold = 1 + 2 ** (code.a + 1)

    type2 = [("z", code.logical_z[i]) for i in range(half)]
    type2 += [("x", code.logical_x[half + j]) for j in range(half)]
    for kind, op in type2:
        xcols, zcols = code.support_cols(op)
        base = _support_int(zcols.tolist()) if kind == "z" else _support_int(xcols.tolist())
        for sx in x_span:
            for sz in z_span:
                if kind == "z":
                    weight = (sx | (base ^ sz)).bit_count()
                else:
                    weight = ((base ^ sx) | sz).bit_count()
                if weight < threshold:
                    return False
    return True
