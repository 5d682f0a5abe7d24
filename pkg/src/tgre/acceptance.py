"""End-to-end self-checks behind ``tgre selftest``.

Twelve numbered criteria exercise the public surface -- CLI subcommands
and library entry points -- against frozen reference data and fixed
seeds.  Each criterion yields one PASS/FAIL line with a short detail and
its runtime; stated time budgets are enforced on top of correctness.

Two criteria document known limits and fail by design until the
underlying behavior changes: criterion 08 (the smallest high-rate code
has a Type-2 logical that is reducible below its nominal weight) and
criterion 09 (the two-stage decoder cannot separate a handful of
single-qubit errors on the N=20 code whose check matrices carry
duplicate columns).  Their details name the exact counterexamples.

Expensive artifacts -- the randomized distance searches and the
threshold sweep -- are cached in-process, so the determinism criterion
compares reruns under a different worker count against the cached
single-worker output instead of paying for the first pass twice.
"""

from __future__ import annotations

import contextlib
import io
import json
import os
import re
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import cli
from .codes import (
    PauliOperator,
    StabilizerCode,
    a_schedule,
    anticommuting_stabilizer_pairs,
    build_xztgre,
    code_params,
    validate_code,
)
from .decoder import BPDecoder, DecoderConfig, syndrome
from .distance import check_prop2, check_theorem1, exact_distance
from .gf2 import in_row_space

_SEED = 42

# ---------------------------------------------------------------------------
# frozen reference data (hand-transcribed, never derived from the builders)
# ---------------------------------------------------------------------------

# Rate-1/2 family, N = 4..32: stabilizer supports (all Z type), logical X
# supports, and single-qubit logical Z positions.  At odd L the reference
# lists the logical X operators with exactly the stabilizer supports; they
# are written out here in full anyway so a transcription slip on either
# side is caught.
_Z_REFERENCE: dict[int, dict[str, list[list[int]]]] = {
    2: {
        "stabilizers": [[1, 2, 3], [1, 3, 4]],
        "logical_x": [[1, 2, 4], [2, 3, 4]],
        "logical_z": [[1], [3]],
    },
    3: {
        "stabilizers": [[1, 2, 3, 5], [1, 3, 4, 7], [1, 5, 6, 7], [3, 5, 7, 8]],
        "logical_x": [[1, 2, 3, 5], [1, 3, 4, 7], [1, 5, 6, 7], [3, 5, 7, 8]],
        "logical_z": [[2], [4], [6], [8]],
    },
    4: {
        "stabilizers": [
            [1, 2, 3, 5, 9],
            [1, 3, 4, 7, 11],
            [1, 5, 6, 7, 13],
            [3, 5, 7, 8, 15],
            [1, 9, 10, 11, 13],
            [3, 9, 11, 12, 15],
            [5, 9, 13, 14, 15],
            [7, 11, 13, 15, 16],
        ],
        "logical_x": [
            [1, 2, 4, 6, 10],
            [2, 3, 4, 8, 12],
            [2, 5, 6, 8, 14],
            [4, 6, 7, 8, 16],
            [2, 9, 10, 12, 14],
            [4, 10, 11, 12, 16],
            [6, 10, 13, 14, 16],
            [8, 12, 14, 15, 16],
        ],
        "logical_z": [[1], [3], [5], [7], [9], [11], [13], [15]],
    },
    5: {
        "stabilizers": [
            [1, 2, 3, 5, 9, 17],
            [1, 3, 4, 7, 11, 19],
            [1, 5, 6, 7, 13, 21],
            [3, 5, 7, 8, 15, 23],
            [1, 9, 10, 11, 13, 25],
            [3, 9, 11, 12, 15, 27],
            [5, 9, 13, 14, 15, 29],
            [7, 11, 13, 15, 16, 31],
            [1, 17, 18, 19, 21, 25],
            [3, 17, 19, 20, 23, 27],
            [5, 17, 21, 22, 23, 29],
            [7, 19, 21, 23, 24, 31],
            [9, 17, 25, 26, 27, 29],
            [11, 19, 25, 27, 28, 31],
            [13, 21, 25, 29, 30, 31],
            [15, 23, 27, 29, 31, 32],
        ],
        "logical_x": [
            [1, 2, 3, 5, 9, 17],
            [1, 3, 4, 7, 11, 19],
            [1, 5, 6, 7, 13, 21],
            [3, 5, 7, 8, 15, 23],
            [1, 9, 10, 11, 13, 25],
            [3, 9, 11, 12, 15, 27],
            [5, 9, 13, 14, 15, 29],
            [7, 11, 13, 15, 16, 31],
            [1, 17, 18, 19, 21, 25],
            [3, 17, 19, 20, 23, 27],
            [5, 17, 21, 22, 23, 29],
            [7, 19, 21, 23, 24, 31],
            [9, 17, 25, 26, 27, 29],
            [11, 19, 25, 27, 28, 31],
            [13, 21, 25, 29, 30, 31],
            [15, 23, 27, 29, 31, 32],
        ],
        "logical_z": [
            [2], [4], [6], [8], [10], [12], [14], [16],
            [18], [20], [22], [24], [26], [28], [30], [32],
        ],
    },
}

# Mixed-family N=20 code (L=3, a=1) as printed in the reference listing:
# each stabilizer is an (odd part, even part) support pair; the second
# X-type generator is the known misprint (11 where the construction --
# and commutation with the Z side -- requires 15).
_XZ31_REFERENCE = {
    "z_stabilizers": [
        ([1, 3, 5, 9], [2, 4, 6]),
        ([1, 5, 7, 13], [2, 6, 8]),
        ([1, 9, 11, 13], [2, 4, 6]),
        ([5, 9, 13, 15], [2, 6, 8]),
        ([17, 19, 21, 25], [2, 4, 6]),
        ([17, 21, 23, 29], [2, 6, 8]),
        ([17, 25, 27, 29], [2, 4, 6]),
        ([21, 25, 29, 31], [2, 6, 8]),
    ],
    "x_stabilizers": [
        ([1, 3, 7, 11], [2, 4, 8]),
        ([3, 5, 7, 11], [4, 6, 8]),
        ([3, 9, 11, 15], [2, 4, 8]),
        ([7, 11, 13, 15], [4, 6, 8]),
        ([17, 19, 23, 27], [2, 4, 8]),
        ([19, 21, 23, 31], [4, 6, 8]),
        ([19, 25, 27, 31], [2, 4, 8]),
        ([23, 27, 29, 31], [4, 6, 8]),
    ],
    "logical_x": [[2, 4, 8], [4, 6, 8], [3, 4, 11, 19, 27], [7, 8, 15, 23, 31]],
    "logical_z": [[1, 2, 9, 17, 25], [5, 6, 13, 21, 29], [2, 4, 6], [2, 6, 8]],
}

# Mixed family parameter table: (L, a, N, k, rate) for every published size.
_FAMILY_ROWS = (
    (2, 1, 10, 2, Fraction(1, 5)),
    (3, 1, 20, 4, Fraction(1, 5)),
    (4, 1, 40, 8, Fraction(1, 5)),
    (5, 1, 80, 16, Fraction(1, 5)),
    (6, 2, 144, 16, Fraction(1, 9)),
    (7, 2, 288, 32, Fraction(1, 9)),
    (8, 2, 576, 64, Fraction(1, 9)),
    (9, 2, 1152, 128, Fraction(1, 9)),
)

# Exhaustive per-class minima (wt_x, wt_z, wt_y) for the four smallest codes.
_EXACT_MINIMA = (
    (2, 1, (2, 2, 2)),
    (3, 1, (2, 2, 3)),
    (4, 1, (4, 4, 4)),
    (5, 1, (4, 4, 5)),
)

# Randomized-search targets for the four larger codes: the distance each
# run must reach (and must never undercut in any error class).
_ESTIMATE_CODES = (("xz:6:2", 4), ("xz:7:2", 6), ("xz:8:2", 6), ("xz:9:2", 8))
_ESTIMATE_TRIALS = 100_000

# Brute-forced minimum logical X weight of the rate-1/2 family, L = 2..5.
_LOGICAL_X_MINIMA = ((2, 2), (3, 4), (4, 4), (5, 6))

# Threshold sweep: four codes spanning both rate bands, scanned across the
# crossing region; the median pairwise crossing must land in this band.
_SWEEP_CODES = "xz:3:1,xz:4:1,xz:5:1,xz:6:2"
_SWEEP_P = "0.04:0.11:0.005"
_SWEEP_TRIALS = 10_000
_THRESHOLD_BAND = (0.06, 0.095)

# Rate-per-qubit advantage t over the best planar surface code of equal or
# smaller length, exact fractions for L = 2..9.
_RATE_ADVANTAGE = {
    2: Fraction(1),
    3: Fraction(13, 5),
    4: Fraction(5),
    5: Fraction(61, 5),
    6: Fraction(113, 9),
    7: Fraction(265, 9),
    8: Fraction(545, 9),
    9: Fraction(1105, 9),
}

# ---------------------------------------------------------------------------
# plumbing
# ---------------------------------------------------------------------------

# artifacts shared between criteria within one process (bytes, never paths)
_CACHE: dict[tuple, object] = {}


@dataclass(frozen=True)
class CriterionResult:
    number: int
    ok: bool
    detail: str
    seconds: float


@dataclass(frozen=True)
class SelftestSummary:
    results: tuple[CriterionResult, ...]

    @property
    def lines(self) -> list[str]:
        return [
            f"criterion {r.number:02d} {'PASS' if r.ok else 'FAIL'} "
            f"{r.detail} ({r.seconds:.1f}s)"
            for r in self.results
        ]

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.ok)

    @property
    def total(self) -> int:
        return len(self.results)


_CRITERIA: dict[int, tuple[Callable[[], tuple[bool, str]], float]] = {}


def _criterion(number: int, budget: float):
    def register(fn: Callable[[], tuple[bool, str]]):
        _CRITERIA[number] = (fn, budget)
        return fn

    return register


def _run_cli(argv: list[str]) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        rc = cli.main(argv)
    return rc, buf.getvalue()


def _estimate_artifacts(workers: int) -> list[tuple[str, bytes]]:
    """JSON bytes of the randomized distance search for each large code."""
    key = ("estimate", workers)
    if key not in _CACHE:
        artifacts = []
        with tempfile.TemporaryDirectory() as tmp:
            for spec, _ in _ESTIMATE_CODES:
                path = os.path.join(tmp, spec.replace(":", "_") + ".json")
                rc, _ = _run_cli(
                    [
                        "distance", spec, "--mode", "estimate",
                        "--trials", str(_ESTIMATE_TRIALS), "--seed", str(_SEED),
                        "--workers", str(workers), "--json", path,
                    ]
                )
                if rc != 0:
                    raise RuntimeError(f"distance CLI exited {rc} for {spec}")
                with open(path, "rb") as fh:
                    artifacts.append((spec, fh.read()))
        _CACHE[key] = artifacts
    return _CACHE[key]  # type: ignore[return-value]


def _sweep_artifacts(workers: int) -> tuple[bytes, bytes]:
    """(main CSV bytes, per-logical-qubit CSV bytes) of the threshold sweep."""
    key = ("sweep", workers)
    if key not in _CACHE:
        with tempfile.TemporaryDirectory() as tmp:
            out = os.path.join(tmp, "sweep.csv")
            rc, _ = _run_cli(
                [
                    "simulate", "--code", _SWEEP_CODES, "--p", _SWEEP_P,
                    "--trials", str(_SWEEP_TRIALS), "--seed", str(_SEED),
                    "--workers", str(workers), "--out", out,
                ]
            )
            if rc != 0:
                raise RuntimeError(f"simulate CLI exited {rc}")
            with open(out, "rb") as fh:
                main_bytes = fh.read()
            with open(os.path.splitext(out)[0] + ".slq.csv", "rb") as fh:
                slq_bytes = fh.read()
        _CACHE[key] = (main_bytes, slq_bytes)
    return _CACHE[key]  # type: ignore[return-value]


def _single_error_failures(code: StabilizerCode, config: DecoderConfig) -> list[str]:
    """Decode all 3N single-qubit errors; list those left with a logical residual."""
    dec = BPDecoder(code, config)
    failures = []
    for lab in code.qubit_labels:
        for kind, op in (
            ("X", PauliOperator.x_type([lab])),
            ("Z", PauliOperator.z_type([lab])),
            ("Y", PauliOperator(frozenset([lab]), frozenset([lab]))),
        ):
            corr = dec.decode(syndrome(code, op)).correction
            rx, rz = op.x_support ^ corr.x_support, op.z_support ^ corr.z_support
            ex = np.zeros(code.n, np.uint8)
            ez = np.zeros(code.n, np.uint8)
            for u in rx:
                ex[code.label_index[u]] = 1
            for u in rz:
                ez[code.label_index[u]] = 1
            trivial = in_row_space(code.x_check_matrix, ex) and in_row_space(
                code.z_check_matrix, ez
            )
            if not trivial:
                failures.append(f"{kind}{lab}")
    return failures


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


@_criterion(1, budget=1.0)
def _reference_builds_rate_half() -> tuple[bool, str]:
    for L, ref in sorted(_Z_REFERENCE.items()):
        rc, out = _run_cli(["build", "--family", "z", "--L", str(L)])
        if rc != 0:
            return False, f"build exited {rc} for L={L}"
        data = json.loads(out)
        n = 2**L
        same = (
            data["family"] == "z"
            and data["L"] == L
            and data["a"] is None
            and data["n"] == n
            and data["k"] == n // 2
            and data["qubit_labels"] == list(range(1, n + 1))
            and data["stabilizers"] == [{"x": [], "z": s} for s in ref["stabilizers"]]
            and data["logical_x"] == [{"x": s, "z": []} for s in ref["logical_x"]]
            and data["logical_z"] == [{"x": [], "z": s} for s in ref["logical_z"]]
        )
        if not same:
            return False, f"L={L} build differs from the reference listing"
    return True, "builds for L=2,3,4,5 match the reference listing exactly"


@_criterion(2, budget=1.0)
def _reference_build_n20() -> tuple[bool, str]:
    rc, out = _run_cli(["build", "--family", "xz", "--L", "3", "--a", "1"])
    if rc != 0:
        return False, f"build exited {rc}"
    data = json.loads(out)

    printed_stabs = [
        {"x": [], "z": sorted(odd + even)} for odd, even in _XZ31_REFERENCE["z_stabilizers"]
    ]
    printed_stabs += [
        {"x": sorted(odd + even), "z": []} for odd, even in _XZ31_REFERENCE["x_stabilizers"]
    ]
    printed_lx = [{"x": sorted(s), "z": []} for s in _XZ31_REFERENCE["logical_x"]]
    printed_lz = [{"x": [], "z": sorted(s)} for s in _XZ31_REFERENCE["logical_z"]]

    names = [f"S_{i}" for i in range(1, 9)] + [f"S'_{i}" for i in range(1, 9)]
    mismatches = [
        name for name, got, want in zip(names, data["stabilizers"], printed_stabs)
        if got != want
    ]
    mismatches += [
        f"Xbar_{i}" for i, (got, want) in enumerate(zip(data["logical_x"], printed_lx), 1)
        if got != want
    ]
    mismatches += [
        f"Zbar_{i}" for i, (got, want) in enumerate(zip(data["logical_z"], printed_lz), 1)
        if got != want
    ]
    if mismatches != ["S'_2"]:
        return False, f"unexpected differences from the listing: {mismatches or 'none'}"
    built_x = set(data["stabilizers"][9]["x"])
    printed_x = set(printed_stabs[9]["x"])
    if built_x ^ printed_x != {11, 15} or 15 not in built_x:
        return False, f"S'_2 differs in an unexpected way: built {sorted(built_x)}"

    if not validate_code(cli.parse_code(data)).ok:
        return False, "the built code fails validation"
    printed_code = StabilizerCode(
        family="xztgre",
        L=3,
        a=1,
        qubit_labels=tuple(data["qubit_labels"]),
        stabilizers=tuple(
            [PauliOperator.z_type(o + e) for o, e in _XZ31_REFERENCE["z_stabilizers"]]
            + [PauliOperator.x_type(o + e) for o, e in _XZ31_REFERENCE["x_stabilizers"]]
        ),
        logical_x=tuple(PauliOperator.x_type(s) for s in _XZ31_REFERENCE["logical_x"]),
        logical_z=tuple(PauliOperator.z_type(s) for s in _XZ31_REFERENCE["logical_z"]),
    )
    report = validate_code(printed_code)
    if report.ok or report.stabilizers_commute:
        return False, "the printed listing unexpectedly validates"
    if anticommuting_stabilizer_pairs(printed_code) != [(2, 9), (3, 9)]:
        return False, "printed listing breaks commutation beyond S'_2 vs S_3/S_4"
    return True, (
        "only S'_2 differs from the listing (15 for 11); the build validates, "
        "the listing does not"
    )


@_criterion(3, budget=30.0)
def _structural_validation_all_sizes() -> tuple[bool, str]:
    bad = []
    for L, a, *_ in _FAMILY_ROWS:
        report = validate_code(build_xztgre(L, a))
        if not report.ok:
            failing = [n for n in report.CHECK_NAMES if not getattr(report, n)]
            bad.append(f"xz:{L}:{a} fails {','.join(failing)}")
    if bad:
        return False, "; ".join(bad)
    return True, "all 8 builds (N=10..1152) pass every structural check"


@_criterion(4, budget=10.0)
def _parameter_table_and_rate_schedule() -> tuple[bool, str]:
    for L, a, n, k, rate in _FAMILY_ROWS:
        if a_schedule(L) != a:
            return False, f"a_schedule({L}) = {a_schedule(L)}, reference says {a}"
        got = code_params("xztgre", L, a)[:3]
        if got != (n, k, rate):
            return False, f"params for L={L},a={a}: {got} != {(n, k, rate)}"
    return True, "(N, k, rate) and the rate schedule match the table for L=2..9"


@_criterion(5, budget=600.0)
def _exact_distances_small_codes() -> tuple[bool, str]:
    for L, a, want in _EXACT_MINIMA:
        code = build_xztgre(L, a)
        res = exact_distance(code, cli._default_max_weight(code.n))
        got = (res.wt_min_x, res.wt_min_z, res.wt_min_y)
        if got != want or res.d != min(want):
            return False, f"N={code.n}: class minima {got}, reference {want}"
    return True, "exact class minima match for N=10,20,40,80"


@_criterion(6, budget=1800.0)
def _randomized_distances_large_codes() -> tuple[bool, str]:
    found = []
    for (spec, want_d), (_, blob) in zip(_ESTIMATE_CODES, _estimate_artifacts(workers=1)):
        payload = json.loads(blob)
        wts = (payload["wt_min_x"], payload["wt_min_z"], payload["wt_min_y"])
        if payload["d"] != want_d:
            return False, f"{spec}: reached d={payload['d']}, reference {want_d}"
        if any(w is not None and w < want_d for w in wts):
            return False, f"{spec}: class minima {wts} undercut the distance {want_d}"
        found.append(payload["d"])
    return True, (
        f"search ({_ESTIMATE_TRIALS} trials, seed {_SEED}) reaches d={found} "
        "for N=144,288,576,1152 and never undercuts"
    )


@_criterion(7, budget=120.0)
def _logical_x_minimum_weights() -> tuple[bool, str]:
    for L, want in _LOGICAL_X_MINIMA:
        expected, measured, ok = check_theorem1(L)
        if not ok or expected != want or measured != want:
            return False, f"L={L}: predicted {expected}, measured {measured}, want {want}"
    return True, "brute-forced logical X minima are 2,4,4,6 for L=2..5"


@_criterion(8, budget=300.0)
def _type2_weights_irreducible() -> tuple[bool, str]:
    parts = []
    ok = True
    for L, a in ((2, 1), (3, 1)):
        holds = check_prop2(build_xztgre(L, a))
        ok = ok and holds
        floor = 1 + 2 ** (a + 1)
        parts.append(
            f"xz:{L}:{a} holds"
            if holds
            else f"xz:{L}:{a} has a Type-2 logical reducible below weight {floor}"
        )
    return ok, "; ".join(parts)


@_criterion(9, budget=60.0)
def _single_qubit_errors_decode() -> tuple[bool, str]:
    config = DecoderConfig(prior_p=0.01)
    parts = []
    ok = True
    for L, a in ((3, 1), (4, 1)):
        code = build_xztgre(L, a)
        fails = _single_error_failures(code, config)
        total = 3 * code.n
        note = f" (logical residual on {','.join(fails)})" if fails else ""
        parts.append(f"xz:{L}:{a} {total - len(fails)}/{total}{note}")
        ok = ok and not fails
    return ok, "; ".join(parts)


@_criterion(10, budget=3600.0)
def _threshold_sweep() -> tuple[bool, str]:
    main_bytes, _ = _sweep_artifacts(workers=1)
    match = re.search(rb"^# threshold median=(\S+) ", main_bytes, re.MULTILINE)
    if match is None:
        return False, "sweep CSV carries no threshold line"
    text = match.group(1).decode()
    if text == "none":
        return False, "no pairwise crossing found in the sweep"
    median = float(text)
    lo, hi = _THRESHOLD_BAND
    if not lo <= median <= hi:
        return False, f"threshold median {median} outside [{lo}, {hi}]"
    return True, (
        f"threshold median {median:.5f} in [{lo}, {hi}] "
        f"({_SWEEP_TRIALS} trials/point, seed {_SEED})"
    )


@_criterion(11, budget=10.0)
def _rate_table() -> tuple[bool, str]:
    rc, out = _run_cli(["rate", "--max-L", "12"])
    if rc != 0:
        return False, f"rate exited {rc}"
    rows = {}
    for line in out.strip().splitlines()[1:]:
        fields = line.split()
        rows[int(fields[0])] = (Fraction(fields[4]), Fraction(fields[8]))
    for L in range(2, 13):
        if L not in rows:
            return False, f"rate table is missing L={L}"
    for L, a, _, _, rate in _FAMILY_ROWS:
        if rows[L][0] != rate:
            return False, f"L={L}: rate {rows[L][0]} != {rate}"
        if rows[L][1] != _RATE_ADVANTAGE[L]:
            return False, f"L={L}: advantage {rows[L][1]} != {_RATE_ADVANTAGE[L]}"
    increasing = all(rows[L][1] > rows[L - 1][1] for L in range(4, 13))
    if not increasing:
        return False, "advantage over the surface code is not strictly increasing"
    return True, "rates match for L=2..9 and the advantage rises strictly over L=3..12"


@_criterion(12, budget=5400.0)
def _artifacts_worker_independent() -> tuple[bool, str]:
    for (spec, _), (_, one), (_, two) in zip(
        _ESTIMATE_CODES, _estimate_artifacts(workers=1), _estimate_artifacts(workers=2)
    ):
        if one != two:
            return False, f"distance JSON for {spec} differs between 1 and 2 workers"
    main_one, slq_one = _sweep_artifacts(workers=1)
    main_two, slq_two = _sweep_artifacts(workers=2)
    if main_one != main_two:
        return False, "sweep CSV differs between 1 and 2 workers"
    if slq_one != slq_two:
        return False, "per-logical-qubit CSV differs between 1 and 2 workers"
    return True, "distance JSON and both sweep CSVs are byte-identical for 1 vs 2 workers"


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------


def run(wanted: Sequence[int] | None = None) -> SelftestSummary:
    """Run the requested criteria (all twelve when None), in ascending order."""
    numbers = sorted(_CRITERIA) if wanted is None else sorted(set(wanted))
    unknown = [n for n in numbers if n not in _CRITERIA]
    if unknown:
        raise ValueError(f"unknown criteria {unknown}; available: 1..{max(_CRITERIA)}")
    results = []
    for number in numbers:
        fn, budget = _CRITERIA[number]
        start = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        seconds = time.perf_counter() - start
        if ok and seconds > budget:
            ok = False
            detail = f"{detail}; over budget ({seconds:.1f}s > {budget:.0f}s)"
        results.append(CriterionResult(number, ok, detail, seconds))
    return SelftestSummary(tuple(results))
