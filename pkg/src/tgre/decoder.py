"""Two-stage decoupled belief-propagation decoding for CSS-form codes.

Stage one runs binary sum-product BP on the Z-type checks to estimate the
X-components of the error; stage two decodes the Z-components on the X-type
checks with priors conditioned on the stage-one estimate, which is how the
X/Z correlation of depolarizing noise (through Y) enters.  Messages live in
the log domain, clamped to +/-25; the serial (check-major) schedule is the
default, with flooding available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .codes import PauliOperator, StabilizerCode
from .gf2 import BitMatrix

LLR_CLAMP = 25.0
_TANH_CAP = 1.0 - 1e-12


@dataclass(frozen=True)
class DecoderConfig:
    prior_p: float
    max_iterations: int = 100
    schedule: str = "serial"  # or "flooding"
    damping: float = 0.0
    stage_order: str = "xz"  # "zx" decodes Z-components first instead

    def __post_init__(self):
        if not 0.0 < self.prior_p < 0.5:
            raise ValueError(f"prior_p must be in (0, 0.5), got {self.prior_p}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.schedule not in ("serial", "flooding"):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if not 0.0 <= self.damping < 1.0:
            raise ValueError(f"damping must be in [0, 1), got {self.damping}")
        if self.stage_order not in ("xz", "zx"):
            raise ValueError(f"stage_order must be 'xz' or 'zx', got {self.stage_order!r}")


@dataclass(frozen=True)
class DecodeOutcome:
    correction: PauliOperator
    converged: bool
    iterations_used: int


def syndrome(code: StabilizerCode, error: PauliOperator) -> np.ndarray:
    """Symplectic product of each stabilizer with the error, in stabilizer order."""
    unknown = (error.x_support | error.z_support) - set(code.qubit_labels)
    if unknown:
        raise ValueError(f"error touches labels outside the code: {sorted(unknown)}")
    xcols, zcols = code.support_cols(error)
    ex = np.zeros(code.n, dtype=np.uint8)
    ez = np.zeros(code.n, dtype=np.uint8)
    ex[xcols] = 1
    ez[zcols] = 1
    return code.stab_x.mul_vector(ez) ^ code.stab_z.mul_vector(ex)


@njit(cache=True)
def _bp_run(ptr, idx, synd, lam, max_iter, damping, serial):
    """Binary sum-product BP; returns (hard decisions, iterations, converged).

    Posterior-tracking form: per-edge check messages R are subtracted from a
    running posterior to recover variable messages, so the serial schedule
    propagates updates within a sweep.  Iteration 0 is the prior-only hard
    decision, so an all-zero syndrome never iterates.
    """
    nchecks = ptr.size - 1
    nvars = lam.size
    nedges = idx.size
    posterior = lam.copy()
    r_msg = np.zeros(nedges, dtype=np.float64)
    hard = np.zeros(nvars, dtype=np.uint8)

    max_deg = 0
    for c in range(nchecks):
        deg = ptr[c + 1] - ptr[c]
        if deg > max_deg:
            max_deg = deg
    tanh_buf = np.empty(max_deg, dtype=np.float64)
    prefix = np.empty(max_deg + 1, dtype=np.float64)
    suffix = np.empty(max_deg + 1, dtype=np.float64)

    for v in range(nvars):
        hard[v] = 1 if posterior[v] < 0.0 else 0
    ok = True
    for c in range(nchecks):
        parity = 0
        for e in range(ptr[c], ptr[c + 1]):
            parity ^= hard[idx[e]]
        if parity != synd[c]:
            ok = False
            break
    if ok:
        return hard, 0, True

    new_post = np.empty(nvars, dtype=np.float64)
    for it in range(1, max_iter + 1):
        if serial:
            for c in range(nchecks):
                start, stop = ptr[c], ptr[c + 1]
                deg = stop - start
                for j in range(deg):
                    q = posterior[idx[start + j]] - r_msg[start + j]
                    if q > LLR_CLAMP:
                        q = LLR_CLAMP
                    elif q < -LLR_CLAMP:
                        q = -LLR_CLAMP
                    tanh_buf[j] = math.tanh(0.5 * q)
                prefix[0] = 1.0
                for j in range(deg):
                    prefix[j + 1] = prefix[j] * tanh_buf[j]
                suffix[deg] = 1.0
                for j in range(deg - 1, -1, -1):
                    suffix[j] = suffix[j + 1] * tanh_buf[j]
                sign = -1.0 if synd[c] else 1.0
                for j in range(deg):
                    excl = prefix[j] * suffix[j + 1]
                    if excl > _TANH_CAP:
                        excl = _TANH_CAP
                    elif excl < -_TANH_CAP:
                        excl = -_TANH_CAP
                    r_new = sign * 2.0 * math.atanh(excl)
                    if r_new > LLR_CLAMP:
                        r_new = LLR_CLAMP
                    elif r_new < -LLR_CLAMP:
                        r_new = -LLR_CLAMP
                    e = start + j
                    if damping > 0.0:
                        r_new = (1.0 - damping) * r_new + damping * r_msg[e]
                    posterior[idx[e]] += r_new - r_msg[e]
                    r_msg[e] = r_new
        else:
            for c in range(nchecks):
                start, stop = ptr[c], ptr[c + 1]
                deg = stop - start
                for j in range(deg):
                    q = posterior[idx[start + j]] - r_msg[start + j]
                    if q > LLR_CLAMP:
                        q = LLR_CLAMP
                    elif q < -LLR_CLAMP:
                        q = -LLR_CLAMP
                    tanh_buf[j] = math.tanh(0.5 * q)
                prefix[0] = 1.0
                for j in range(deg):
                    prefix[j + 1] = prefix[j] * tanh_buf[j]
                suffix[deg] = 1.0
                for j in range(deg - 1, -1, -1):
                    suffix[j] = suffix[j + 1] * tanh_buf[j]
                sign = -1.0 if synd[c] else 1.0
                for j in range(deg):
                    excl = prefix[j] * suffix[j + 1]
                    if excl > _TANH_CAP:
                        excl = _TANH_CAP
                    elif excl < -_TANH_CAP:
                        excl = -_TANH_CAP
                    r_new = sign * 2.0 * math.atanh(excl)
                    if r_new > LLR_CLAMP:
                        r_new = LLR_CLAMP
                    elif r_new < -LLR_CLAMP:
                        r_new = -LLR_CLAMP
                    e = start + j
                    if damping > 0.0:
                        r_new = (1.0 - damping) * r_new + damping * r_msg[e]
                    r_msg[e] = r_new
            for v in range(nvars):
                new_post[v] = lam[v]
            for c in range(nchecks):
                for e in range(ptr[c], ptr[c + 1]):
                    new_post[idx[e]] += r_msg[e]
            for v in range(nvars):
                posterior[v] = new_post[v]

        for v in range(nvars):
            hard[v] = 1 if posterior[v] < 0.0 else 0
        ok = True
        for c in range(nchecks):
            parity = 0
            for e in range(ptr[c], ptr[c + 1]):
                parity ^= hard[idx[e]]
            if parity != synd[c]:
                ok = False
                break
        if ok:
            return hard, it, True
    return hard, max_iter, False


def _csr(matrix: BitMatrix) -> tuple[np.ndarray, np.ndarray]:
    dense = matrix.to_dense()
    ptr = np.zeros(matrix.rows + 1, dtype=np.int64)
    cols: list[np.ndarray] = []
    for r in range(matrix.rows):
        nz = np.flatnonzero(dense[r])
        ptr[r + 1] = ptr[r] + nz.size
        cols.append(nz)
    idx = np.concatenate(cols).astype(np.int64) if cols else np.zeros(0, dtype=np.int64)
    return ptr, idx


def stage_priors(p: float) -> tuple[float, float]:
    """(first-stage LLR, second-stage LLR given a clean first-stage bit).

    First stage sees marginal P(flip)=2p/3; a second-stage bit under a set
    first-stage bit has P=1/2 (LLR 0), otherwise P=(p/3)/(1-2p/3).
    """
    lam1 = math.log((1.0 - 2.0 * p / 3.0) / (2.0 * p / 3.0))
    lam2 = math.log((1.0 - p) / (p / 3.0))
    return lam1, lam2


class BPDecoder:
    """Reusable decoder bound to one code and one config (mutable buffers inside)."""

    def __init__(self, code: StabilizerCode, config: DecoderConfig):
        if not code.is_css:
            raise ValueError("the decoupled decoder requires a CSS code")
        self.code = code
        self.config = config
        self.z_rows = np.array(code.z_stabilizer_rows, dtype=np.int64)
        self.x_rows = np.array(code.x_stabilizer_rows, dtype=np.int64)
        self.zc_ptr, self.zc_idx = _csr(code.z_check_matrix)
        self.xc_ptr, self.xc_idx = _csr(code.x_check_matrix)
        self.lam1, self.lam2 = stage_priors(config.prior_p)

    def decode_bits(
        self, s_z: np.ndarray, s_x: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, int, bool]:
        """Decode from the (Z-check, X-check) sub-syndromes.

        Returns (x_hat, z_hat, iterations_used, converged) with the estimates
        as uint8 vectors over qubit positions.  This is the hot path used by
        the Monte Carlo loop; `decode` wraps it in labelled operators.
        """
        cfg = self.config
        serial = cfg.schedule == "serial"
        n = self.code.n

        def run(ptr, idx, sub_synd, lam):
            return _bp_run(
                ptr, idx, sub_synd, lam, cfg.max_iterations, cfg.damping, serial
            )

        first_on_z_checks = cfg.stage_order == "xz"
        if first_on_z_checks:
            s1, s2 = s_z, s_x
            ptr1, idx1, ptr2, idx2 = self.zc_ptr, self.zc_idx, self.xc_ptr, self.xc_idx
        else:
            s1, s2 = s_x, s_z
            ptr1, idx1, ptr2, idx2 = self.xc_ptr, self.xc_idx, self.zc_ptr, self.zc_idx

        lam_stage1 = np.full(n, self.lam1, dtype=np.float64)
        hat1, it1, conv1 = run(ptr1, idx1, s1, lam_stage1)
        lam_stage2 = np.where(hat1 == 1, 0.0, self.lam2).astype(np.float64)
        hat2, it2, conv2 = run(ptr2, idx2, s2, lam_stage2)

        x_hat, z_hat = (hat1, hat2) if first_on_z_checks else (hat2, hat1)
        return x_hat, z_hat, int(max(it1, it2)), bool(conv1 and conv2)

    def decode(self, synd: np.ndarray) -> DecodeOutcome:
        synd = np.asarray(synd, dtype=np.uint8)
        if synd.shape != (len(self.code.stabilizers),):
            raise ValueError(f"syndrome length {synd.shape} != {len(self.code.stabilizers)}")
        x_hat, z_hat, iterations, converged = self.decode_bits(
            synd[self.z_rows], synd[self.x_rows]
        )
        labels = self.code.qubit_labels
        correction = PauliOperator(
            x_support=frozenset(labels[v] for v in np.flatnonzero(x_hat)),
            z_support=frozenset(labels[v] for v in np.flatnonzero(z_hat)),
        )
        return DecodeOutcome(
            correction=correction,
            converged=converged,
            iterations_used=iterations,
        )


def decode(code: StabilizerCode, synd: np.ndarray, config: DecoderConfig) -> DecodeOutcome:
    """One-shot convenience wrapper around BPDecoder."""
    return BPDecoder(code, config).decode(synd)
