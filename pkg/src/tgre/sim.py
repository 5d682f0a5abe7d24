"""Monte Carlo evaluation of logical error rates under depolarizing noise.

Each trial samples an i.i.d. depolarizing error, decodes its syndrome with
the two-stage BP decoder, and classifies the residual (error times
correction): a trial fails the block if the residual is a logical operator
or the decoder left the syndrome unsatisfied; per-logical-qubit failures are
the residuals anticommuting with that qubit's X-bar or Z-bar, and an
unsatisfied syndrome counts against every logical qubit (the block is lost
wholesale when the decoder gives up).  Encoding, measurement, and recovery
are treated as perfect (code-capacity noise).

Randomness is counter-based: trial t draws from Philox keyed by
(seed, p, code identity) with counter (0,0,0,t), so results are bit-identical
for a fixed seed no matter how trials are split across workers.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from multiprocessing import get_context
from statistics import median

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from .codes import PauliOperator, StabilizerCode
from .decoder import BPDecoder, DecoderConfig
from .gf2 import BitMatrix

WILSON_Z = 1.959963984540054  # two-sided 95%

_FAMILY_IDS = {"ztgre": 0, "xztgre": 1}


@dataclass(frozen=True)
class NoiseModel:
    kind: str = "depolarizing"
    p: float = 0.0

    def __post_init__(self):
        if self.kind != "depolarizing":
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {self.p}")


def wilson_interval(failures: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """95% Wilson score interval for a binomial rate."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = failures / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials)) / denom
    low = 0.0 if failures == 0 else max(0.0, center - half)
    high = 1.0 if failures == trials else min(1.0, center + half)
    return (low, high)


def _sample_bits(n: int, p: float, rng: Generator) -> tuple[np.ndarray, np.ndarray]:
    """Per-qubit (x, z) error indicators: I, X, Y, Z with probs 1-p, p/3 each."""
    u = rng.random(n)
    ex = (u < 2.0 * p / 3.0).astype(np.uint8)
    ez = ((p / 3.0 <= u) & (u < p)).astype(np.uint8)
    return ex, ez


def sample_error(
    n: int,
    model: NoiseModel,
    rng: Generator,
    labels: tuple[int, ...] | None = None,
) -> PauliOperator:
    """Draw one depolarizing error on n qubits (labels default to 1..n)."""
    if labels is None:
        labels = tuple(range(1, n + 1))
    elif len(labels) != n:
        raise ValueError("labels length must equal n")
    ex, ez = _sample_bits(n, model.p, rng)
    return PauliOperator(
        x_support=frozenset(labels[v] for v in np.flatnonzero(ex)),
        z_support=frozenset(labels[v] for v in np.flatnonzero(ez)),
    )


def _logical_bits(code: StabilizerCode) -> tuple[BitMatrix, BitMatrix]:
    """(X-bar x-supports, Z-bar z-supports) as k x n bit matrices."""
    lx = BitMatrix.from_rows(
        [sorted(code.label_index[u] for u in op.x_support) for op in code.logical_x], code.n
    )
    lz = BitMatrix.from_rows(
        [sorted(code.label_index[u] for u in op.z_support) for op in code.logical_z], code.n
    )
    return lx, lz


def classify_residual(
    code: StabilizerCode, residual: PauliOperator
) -> tuple[bool, list[bool]]:
    """(block_fail, per-qubit fails) for a residual that commutes with all stabilizers.

    Per-qubit failure i means the residual anticommutes with X-bar_i or
    Z-bar_i; the block fails exactly when any logical qubit does.  A residual
    that anticommutes with a stabilizer indicates a bookkeeping bug upstream
    and raises.
    """
    for stab in code.stabilizers:
        if not residual.commutes_with(stab):
            raise ValueError("residual anticommutes with a stabilizer")
    per_qubit = [
        not (residual.commutes_with(xbar) and residual.commutes_with(zbar))
        for xbar, zbar in zip(code.logical_x, code.logical_z)
    ]
    return any(per_qubit), per_qubit


def _trial_key(seed: int, p: float, code: StabilizerCode) -> np.ndarray:
    """Philox key shared by all trials of one (seed, p, code) run."""
    p_bits = int(np.float64(p).view(np.uint64))
    entropy = [seed, p_bits, code.n, _FAMILY_IDS[code.family], code.L, code.a or 0]
    return SeedSequence(entropy=entropy).generate_state(2, np.uint64)


def _run_range(
    code: StabilizerCode,
    model: NoiseModel,
    config: DecoderConfig,
    lo: int,
    hi: int,
    key: np.ndarray,
) -> tuple[int, int, np.ndarray]:
    """Simulate trials [lo, hi); returns (block fails, unsat fails, per-qubit fails)."""
    decoder = BPDecoder(code, config)
    zc, xc = code.z_check_matrix, code.x_check_matrix
    lx, lz = _logical_bits(code)
    n, p = code.n, model.p
    failures_block = 0
    failures_unsat = 0
    per_qubit = np.zeros(code.k, dtype=np.int64)
    for trial in range(lo, hi):
        rng = Generator(Philox(counter=[0, 0, 0, trial], key=key))
        ex, ez = _sample_bits(n, p, rng)
        s_z = zc.mul_vector(ex)
        s_x = xc.mul_vector(ez)
        if not (s_z.any() or s_x.any()):
            continue
        x_hat, z_hat, _, converged = decoder.decode_bits(s_z, s_x)
        if not converged:
            # the decoder gave up on the block, so every logical qubit is lost
            failures_block += 1
            failures_unsat += 1
            per_qubit += 1
            continue
        rx = ex ^ x_hat
        rz = ez ^ z_hat
        # residual anticommutes with X-bar_i (pure X) iff <rz, xbar_i> is odd,
        # and with Z-bar_i (pure Z) iff <rx, zbar_i> is odd
        fails = lx.mul_vector(rz) | lz.mul_vector(rx)
        if fails.any():
            failures_block += 1
            per_qubit += fails
    return failures_block, failures_unsat, per_qubit


def _range_worker(args) -> tuple[int, int, np.ndarray]:
    return _run_range(*args)


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("TGRE_WORKERS", "0")) or (os.cpu_count() or 1)
    return max(1, workers)


@dataclass(frozen=True)
class SimReport:
    family: str
    L: int
    a: int | None
    n: int
    k: int
    p: float
    trials: int
    failures_block: int
    failures_unsat: int
    per_qubit_failures: tuple[int, ...]
    seed: int

    @property
    def ler_block(self) -> float:
        return self.failures_block / self.trials

    @property
    def ler_slq(self) -> tuple[float, ...]:
        return tuple(f / self.trials for f in self.per_qubit_failures)

    @property
    def ler_slq_avg(self) -> float:
        return sum(self.per_qubit_failures) / (self.k * self.trials)

    @property
    def ci_block(self) -> tuple[float, float]:
        return wilson_interval(self.failures_block, self.trials)

    @property
    def ci_slq_avg(self) -> tuple[float, float]:
        """Wilson interval for the pooled per-qubit rate (k x trials Bernoullis)."""
        return wilson_interval(sum(self.per_qubit_failures), self.k * self.trials)


def run_trials(
    code: StabilizerCode,
    model: NoiseModel,
    config: DecoderConfig,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> SimReport:
    """Monte Carlo logical-error-rate estimate; bit-identical for equal seed."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    workers = _resolve_workers(workers)
    key = _trial_key(seed, model.p, code)
    cuts = np.linspace(0, trials, min(workers, trials) + 1).astype(np.int64)
    tasks = [
        (code, model, config, int(lo), int(hi), key)
        for lo, hi in zip(cuts[:-1], cuts[1:])
        if hi > lo
    ]
    if len(tasks) > 1 and workers > 1:
        with get_context("fork").Pool(len(tasks)) as pool:
            parts = pool.map(_range_worker, tasks)
    else:
        parts = [_run_range(*task) for task in tasks]
    failures_block = sum(p_[0] for p_ in parts)
    failures_unsat = sum(p_[1] for p_ in parts)
    per_qubit = np.zeros(code.k, dtype=np.int64)
    for p_ in parts:
        per_qubit += p_[2]
    return SimReport(
        family=code.family,
        L=code.L,
        a=code.a,
        n=code.n,
        k=code.k,
        p=model.p,
        trials=trials,
        failures_block=failures_block,
        failures_unsat=failures_unsat,
        per_qubit_failures=tuple(int(f) for f in per_qubit),
        seed=seed,
    )


def code_spec(code: StabilizerCode) -> str:
    """Short code identifier: z:<L> or xz:<L>:<a>."""
    if code.family == "ztgre":
        return f"z:{code.L}"
    return f"xz:{code.L}:{code.a}"


def prior_for(p: float) -> float:
    """Decoder prior matched to the channel, clamped into BP's open domain."""
    return min(max(p, 1e-3), 0.499)


@dataclass(frozen=True)
class ThresholdReport:
    """Curves over a shared p grid plus pairwise crossing estimates."""

    specs: tuple[str, ...]
    p_grid: tuple[float, ...]
    curves: tuple[tuple[SimReport, ...], ...]  # aligned with specs
    crossings: tuple[tuple[str, str, float | None], ...]
    threshold: float | None  # median of the pairwise crossings found
    crossing_range: tuple[float, float] | None


def _usable(report: SimReport) -> bool:
    """Usable for crossing estimation: CI half-width under 20% of the value."""
    avg = report.ler_slq_avg
    if avg <= 0.0:
        return False
    low, high = report.ci_slq_avg
    return (high - low) / 2.0 < 0.2 * avg


def _pair_crossing(
    p_grid: tuple[float, ...],
    small: tuple[SimReport, ...],
    big: tuple[SimReport, ...],
) -> float | None:
    """First p where the larger code's LER_slq-avg curve overtakes the smaller's.

    Log-linear interpolation between the nearest usable grid points; below
    threshold the larger code sits lower, so the crossing is the sign change
    of log(big) - log(small).
    """
    usable = [
        t for t in range(len(p_grid)) if _usable(small[t]) and _usable(big[t])
    ]
    diffs = {
        t: math.log(big[t].ler_slq_avg) - math.log(small[t].ler_slq_avg)
        for t in usable
    }
    for t, t2 in zip(usable, usable[1:]):
        d1, d2 = diffs[t], diffs[t2]
        if d1 == 0.0:
            return p_grid[t]
        if d1 < 0.0 <= d2 or d2 < 0.0 <= d1:
            return p_grid[t] + (p_grid[t2] - p_grid[t]) * (-d1) / (d2 - d1)
    if usable and diffs[usable[-1]] == 0.0:
        return p_grid[usable[-1]]
    return None


def threshold_from_curves(
    specs: tuple[str, ...],
    p_grid: tuple[float, ...],
    curves: tuple[tuple[SimReport, ...], ...],
) -> ThresholdReport:
    """Estimate pairwise crossings from curves that were already simulated."""
    ns = [curve[0].n for curve in curves]
    order = sorted(range(len(specs)), key=lambda i: ns[i])
    crossings = []
    for ii, i in enumerate(order):
        for j in order[ii + 1 :]:
            crossings.append(
                (specs[i], specs[j], _pair_crossing(p_grid, curves[i], curves[j]))
            )
    found = [c for _, _, c in crossings if c is not None]
    return ThresholdReport(
        specs=specs,
        p_grid=p_grid,
        curves=curves,
        crossings=tuple(crossings),
        threshold=median(found) if found else None,
        crossing_range=(min(found), max(found)) if found else None,
    )


def sweep_threshold(
    codes: list[StabilizerCode],
    p_grid: list[float],
    config: DecoderConfig | None,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> ThresholdReport:
    """Run every code over the grid and estimate the mutual crossing point.

    The decoder prior tracks each grid point (clamped into (0, 0.5)); pass a
    config to choose schedule/damping/stage order.  Pairs whose curves never
    cross get a None crossing; the threshold is the median of the ones found,
    or None when there are none (reported, not fatal).
    """
    if len(codes) < 2:
        raise ValueError("sweep_threshold needs at least two codes")
    if len(p_grid) < 2:
        raise ValueError("sweep_threshold needs at least two grid points")
    specs = tuple(code_spec(c) for c in codes)
    if len(set(specs)) != len(specs):
        raise ValueError("duplicate codes make the crossing undefined")
    base = config if config is not None else DecoderConfig(prior_p=0.05)
    curves = []
    for code in codes:
        row = []
        for p in p_grid:
            cfg = replace(base, prior_p=prior_for(p))
            row.append(run_trials(code, NoiseModel(p=p), cfg, trials, seed, workers))
        curves.append(tuple(row))
    return threshold_from_curves(specs, tuple(p_grid), tuple(curves))
