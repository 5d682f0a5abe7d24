"""Command-line front end: build, validate, distance, logicals, simulate, rate, selftest.

File formats: JSON is the canonical interchange for codes (round-trip
stable); alist pairs are emitted for interoperability with external
belief-propagation tooling.  Simulation results land in CSV with a fixed
header plus a per-logical-qubit companion file; outputs carry no timestamps,
so equal arguments and seeds reproduce byte-identical files.

Exit codes: 0 success, 1 validation/acceptance failure, 2 usage or parse
error, 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import replace
from fractions import Fraction

import numpy as np

from .codes import (
    PauliOperator,
    StabilizerCode,
    a_schedule,
    anticommuting_stabilizer_pairs,
    build_xztgre,
    build_ztgre,
    code_params,
    validate_code,
)
from .decoder import DecoderConfig
from .distance import DEFAULT_BUDGET, BudgetExceeded, estimate_distance, exact_distance
from .sim import (
    NoiseModel,
    code_spec,
    prior_for,
    run_trials,
    threshold_from_curves,
)

FORMAT_VERSION = 1
CSV_HEADER = "family,L,a,N,k,p,trials,failures_block,ler_block,ler_slq_avg,ci_low,ci_high,seed"

_SHORT_FAMILY = {"ztgre": "z", "xztgre": "xz"}
_LONG_FAMILY = {"z": "ztgre", "xz": "xztgre"}

_SPEC_Z = re.compile(r"^z:(\d+)$")
_SPEC_XZ = re.compile(r"^xz:(\d+):(\d+)$")


class UsageError(Exception):
    """Bad arguments or unparseable input files (exit code 2)."""


# ---------------------------------------------------------------------------
# code serialization
# ---------------------------------------------------------------------------


def _op_dict(op: PauliOperator) -> dict:
    return {"x": sorted(op.x_support), "z": sorted(op.z_support)}


def _op_from_dict(data: dict) -> PauliOperator:
    return PauliOperator(frozenset(data["x"]), frozenset(data["z"]))


def serialize_code(code: StabilizerCode) -> dict:
    n, k, rate, weight = code_params(code.family, code.L, code.a)
    return {
        "format_version": FORMAT_VERSION,
        "family": _SHORT_FAMILY[code.family],
        "L": code.L,
        "a": code.a,
        "n": code.n,
        "k": code.k,
        "qubit_labels": list(code.qubit_labels),
        "stabilizers": [_op_dict(op) for op in code.stabilizers],
        "logical_x": [_op_dict(op) for op in code.logical_x],
        "logical_z": [_op_dict(op) for op in code.logical_z],
        "metadata": {"generator_weight": weight, "rate": str(rate)},
    }


def parse_code(data: dict) -> StabilizerCode:
    try:
        if data["format_version"] != FORMAT_VERSION:
            raise UsageError(f"unsupported format_version {data['format_version']!r}")
        family = _LONG_FAMILY.get(data["family"])
        if family is None:
            raise UsageError(f"unknown family {data['family']!r}")
        code = StabilizerCode(
            family=family,
            L=int(data["L"]),
            a=None if data["a"] is None else int(data["a"]),
            qubit_labels=tuple(data["qubit_labels"]),
            stabilizers=tuple(_op_from_dict(d) for d in data["stabilizers"]),
            logical_x=tuple(_op_from_dict(d) for d in data["logical_x"]),
            logical_z=tuple(_op_from_dict(d) for d in data["logical_z"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed code file: {exc}") from exc
    if code.n != int(data["n"]) or code.k != int(data["k"]):
        raise UsageError("code file n/k fields disagree with its contents")
    return code


def load_code(path: str) -> StabilizerCode:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse {path}: {exc}") from exc
    return parse_code(data)


def resolve_code(text: str) -> StabilizerCode:
    """Accept z:<L>, xz:<L>:<a>, or a path to a JSON code file."""
    m = _SPEC_Z.match(text)
    if m:
        return build_ztgre(int(m.group(1)))
    m = _SPEC_XZ.match(text)
    if m:
        return build_xztgre(int(m.group(1)), int(m.group(2)))
    if os.path.exists(text):
        return load_code(text)
    raise UsageError(
        f"{text!r} is neither a code spec (z:<L> or xz:<L>:<a>) nor an existing file"
    )


# ---------------------------------------------------------------------------
# alist
# ---------------------------------------------------------------------------


def write_alist(matrix: np.ndarray, path: str) -> None:
    """Write a binary check matrix (rows = checks) in alist form, 1-indexed."""
    m, n = matrix.shape
    col_deg = matrix.sum(axis=0, dtype=np.int64)
    row_deg = matrix.sum(axis=1, dtype=np.int64)
    lines = [
        f"{n} {m}",
        f"{int(col_deg.max(initial=0))} {int(row_deg.max(initial=0))}",
        " ".join(str(int(d)) for d in col_deg),
        " ".join(str(int(d)) for d in row_deg),
    ]
    for j in range(n):
        lines.append(" ".join(str(int(i) + 1) for i in np.flatnonzero(matrix[:, j])))
    for i in range(m):
        lines.append(" ".join(str(int(j) + 1) for j in np.flatnonzero(matrix[i])))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_alist(path: str) -> np.ndarray:
    """Read an alist file back into a dense uint8 matrix (rows = checks)."""
    with open(path) as fh:
        rows = [line.split() for line in fh if line.strip()]
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        matrix = np.zeros((m, n), dtype=np.uint8)
        for i, entries in enumerate(rows[4 + n : 4 + n + m]):
            for j in entries:
                if int(j) > 0:  # some writers pad with zeros
                    matrix[i, int(j) - 1] = 1
    except (IndexError, ValueError) as exc:
        raise UsageError(f"malformed alist file {path}: {exc}") from exc
    return matrix


def _alist_stem(out: str) -> str:
    return out[: -len(".alist")] if out.endswith(".alist") else out


# ---------------------------------------------------------------------------
# shared output helpers
# ---------------------------------------------------------------------------


def _op_text(op: PauliOperator) -> str:
    xs, zs = sorted(op.x_support), sorted(op.z_support)
    if xs and not zs:
        return "X " + " ".join(map(str, xs))
    if zs and not xs:
        return "Z " + " ".join(map(str, zs))
    if not xs and not zs:
        return "I"
    return "X " + " ".join(map(str, xs)) + " | Z " + " ".join(map(str, zs))


def _p_values(text: str) -> list[float]:
    """Parse '0.04:0.11:0.005' (inclusive range) or a comma list of values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("p range must be start:stop:step")
        try:
            start, stop, step = (float(t) for t in parts)
        except ValueError as exc:
            raise UsageError(f"bad p range {text!r}") from exc
        if step <= 0 or stop < start:
            raise UsageError("p range needs step > 0 and stop >= start")
        values = []
        i = 0
        while True:
            v = round(start + i * step, 10)
            if v > stop + 1e-12:
                break
            values.append(v)
            i += 1
        return values
    try:
        values = [round(float(t), 10) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad p list {text!r}") from exc
    if not values:
        raise UsageError("empty p list")
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise UsageError(f"p={v} outside [0, 1]")
    return values


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_build(args) -> int:
    family = _LONG_FAMILY[args.family]
    if family == "ztgre":
        if args.a is not None:
            raise UsageError("--a applies only to the xz family")
        code = build_ztgre(args.L)
    else:
        if args.a is None:
            raise UsageError("the xz family requires --a")
        code = build_xztgre(args.L, args.a)
    if args.format == "json":
        text = json.dumps(serialize_code(code), indent=2) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
            print(f"wrote {args.out}")
        else:
            sys.stdout.write(text)
        return 0
    if not args.out:
        raise UsageError("--format alist requires --out")
    stem = _alist_stem(args.out)
    write_alist(code.z_check_matrix.to_dense(), stem + "_z.alist")
    write_alist(code.x_check_matrix.to_dense(), stem + "_x.alist")
    print(f"wrote {stem}_z.alist")
    print(f"wrote {stem}_x.alist")
    return 0


def cmd_validate(args) -> int:
    code = resolve_code(args.code)
    report = validate_code(code)
    for name in report.CHECK_NAMES:
        print(f"{'PASS' if getattr(report, name) else 'FAIL'} {name.replace('_', ' ')}")
    if not report.stabilizers_commute:
        for i, j in anticommuting_stabilizer_pairs(code):
            print(f"  anticommuting stabilizer pair: index {i} vs {j}")
    print(f"stabilizer rank {report.stabilizer_rank}")
    return 0 if report.ok else 1


def cmd_logicals(args) -> int:
    code = resolve_code(args.code)
    short = _SHORT_FAMILY[code.family]
    a_txt = "" if code.a is None else f" a={code.a}"
    print(f"family={short} L={code.L}{a_txt} n={code.n} k={code.k}")
    z_rows = set(code.z_stabilizer_rows)
    z_seen = x_seen = 0
    for i, stab in enumerate(code.stabilizers):
        if i in z_rows:
            z_seen += 1
            print(f"S_{z_seen}: {_op_text(stab)}")
        else:
            x_seen += 1
            print(f"S'_{x_seen}: {_op_text(stab)}")
    for i, (xbar, zbar) in enumerate(zip(code.logical_x, code.logical_z), start=1):
        print(f"Xbar_{i}: {_op_text(xbar)}")
        print(f"Zbar_{i}: {_op_text(zbar)}")
    return 0


def _default_max_weight(n: int) -> int:
    return 8 if n <= 40 else 6


def cmd_distance(args) -> int:
    code = resolve_code(args.code)
    if args.mode == "exact":
        max_weight = args.max_weight or _default_max_weight(code.n)
        result = exact_distance(code, max_weight, budget=args.budget)
    else:
        if args.seed is None:
            raise UsageError("--seed is required for estimate mode")
        result = estimate_distance(
            code, trials=args.trials, seed=args.seed, workers=args.workers
        )
    print(f"mode {result.mode}")
    for cls in ("x", "z", "y"):
        wt = getattr(result, f"wt_min_{cls}")
        print(f"wt_min_{cls} {'unknown' if wt is None else wt}")
    print(f"d {'unknown' if result.d is None else result.d}")
    for cls, op in sorted(result.certificates.items()):
        print(f"certificate {cls}: {_op_text(op)}")
    effort = " ".join(f"{k}={v}" for k, v in sorted(result.search_effort.items()))
    print(f"effort {effort}")
    if args.json:
        payload = {
            "mode": result.mode,
            "wt_min_x": result.wt_min_x,
            "wt_min_z": result.wt_min_z,
            "wt_min_y": result.wt_min_y,
            "d": result.d,
            "max_weight": result.max_weight,
            "certificates": {cls: _op_dict(op) for cls, op in result.certificates.items()},
            "search_effort": dict(result.search_effort),
        }
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.json}")
    return 0


def cmd_simulate(args) -> int:
    specs_text = []
    for chunk in args.code:
        specs_text.extend(t.strip() for t in chunk.split(",") if t.strip())
    if not specs_text:
        raise UsageError("no codes given")
    codes = [resolve_code(t) for t in specs_text]
    specs = [code_spec(c) for c in codes]
    if len(set(specs)) != len(specs):
        raise UsageError("duplicate codes in --code")
    p_values = _p_values(args.p)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    base = DecoderConfig(
        prior_p=0.05,
        max_iterations=args.max_iterations,
        schedule=args.schedule,
        damping=args.damping,
        stage_order=args.stage_order,
    )
    curves = []
    for code in codes:
        row = []
        for p in p_values:
            cfg = replace(base, prior_p=prior_for(p))
            row.append(
                run_trials(code, NoiseModel(p=p), cfg, args.trials, args.seed, args.workers)
            )
        curves.append(tuple(row))

    main_lines = [CSV_HEADER]
    for spec, code, row in zip(specs, codes, curves):
        fam = spec.split(":")[0]
        for rep in row:
            low, high = rep.ci_slq_avg
            main_lines.append(
                ",".join(
                    [
                        fam,
                        str(rep.L),
                        "" if rep.a is None else str(rep.a),
                        str(rep.n),
                        str(rep.k),
                        _fmt(rep.p),
                        str(rep.trials),
                        str(rep.failures_block),
                        _fmt(rep.ler_block),
                        _fmt(rep.ler_slq_avg),
                        _fmt(low),
                        _fmt(high),
                        str(rep.seed),
                    ]
                )
            )
    if len(codes) >= 2:
        threshold = threshold_from_curves(tuple(specs), tuple(p_values), tuple(curves))
        cross_txt = ";".join(
            f"{a}~{b}={'none' if c is None else _fmt(c)}" for a, b, c in threshold.crossings
        )
        med = "none" if threshold.threshold is None else _fmt(threshold.threshold)
        if threshold.crossing_range is None:
            rng = "none"
        else:
            rng = f"{_fmt(threshold.crossing_range[0])}:{_fmt(threshold.crossing_range[1])}"
        main_lines.append(f"# threshold median={med} range={rng} crossings={cross_txt}")
    with open(args.out, "w") as fh:
        fh.write("\n".join(main_lines) + "\n")

    max_k = max(code.k for code in codes)
    slq_header = "family,L,a,N,k,p,trials,seed," + ",".join(
        f"ler_slq_{i}" for i in range(1, max_k + 1)
    )
    slq_lines = [slq_header]
    for spec, code, row in zip(specs, codes, curves):
        fam = spec.split(":")[0]
        for rep in row:
            rates = [_fmt(r) for r in rep.ler_slq]
            rates += [""] * (max_k - len(rates))
            slq_lines.append(
                ",".join(
                    [
                        fam,
                        str(rep.L),
                        "" if rep.a is None else str(rep.a),
                        str(rep.n),
                        str(rep.k),
                        _fmt(rep.p),
                        str(rep.trials),
                        str(rep.seed),
                    ]
                    + rates
                )
            )
    slq_path = os.path.splitext(args.out)[0] + ".slq.csv"
    with open(slq_path, "w") as fh:
        fh.write("\n".join(slq_lines) + "\n")
    print(f"wrote {args.out}")
    print(f"wrote {slq_path}")
    return 0


def surface_comparator(n: int) -> tuple[int, int, Fraction]:
    """Largest planar surface code [[d^2+(d-1)^2, 1, d]] fitting in n qubits."""
    d = 1
    while (d + 1) ** 2 + d * d <= n:
        d += 1
    size = d * d + (d - 1) * (d - 1)
    return d, size, Fraction(1, size)


def cmd_rate(args) -> int:
    if args.max_L < 2:
        raise UsageError("--max-L must be >= 2")
    if args.compare == "surface":
        print("L a N k rate surface_d surface_N surface_rate t")
    else:
        print("L a N k rate")
    for L in range(2, args.max_L + 1):
        a = a_schedule(L)
        n, k, rate, _ = code_params("xztgre", L, a)
        if args.compare == "surface":
            d, size, srate = surface_comparator(n)
            t = rate / srate
            print(f"{L} {a} {n} {k} {rate} {d} {size} {srate} {t}")
        else:
            print(f"{L} {a} {n} {k} {rate}")
    return 0


def cmd_selftest(args) -> int:
    from . import acceptance

    wanted = None
    if args.criteria:
        try:
            wanted = sorted({int(t) for t in args.criteria.split(",")})
        except ValueError as exc:
            raise UsageError(f"bad criteria list {args.criteria!r}") from exc
    results = acceptance.run(wanted)
    for line in results.lines:
        print(line)
    print(f"{results.passed}/{results.total} criteria passed")
    return 0 if results.passed == results.total else 1


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tgre",
        description="Tanner-graph recursive-expansion stabilizer codes: "
        "construction, validation, distance, decoding simulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct a code and write JSON or alist files")
    p_build.add_argument("--family", choices=("z", "xz"), required=True)
    p_build.add_argument("--L", type=int, required=True)
    p_build.add_argument("--a", type=int, default=None)
    p_build.add_argument("--out", default=None, help="output path (stdout for json if omitted)")
    p_build.add_argument("--format", choices=("json", "alist"), default="json")
    p_build.set_defaults(func=cmd_build)

    p_val = sub.add_parser("validate", help="run the structural checks on a code")
    p_val.add_argument("code", help="code spec (z:<L>, xz:<L>:<a>) or JSON file path")
    p_val.set_defaults(func=cmd_validate)

    p_log = sub.add_parser("logicals", help="print stabilizers and logical operators")
    p_log.add_argument("code", help="code spec or JSON file path")
    p_log.set_defaults(func=cmd_logicals)

    p_dist = sub.add_parser("distance", help="exact or randomized minimum logical weights")
    p_dist.add_argument("code", help="code spec or JSON file path")
    p_dist.add_argument("--mode", choices=("exact", "estimate"), default="exact")
    p_dist.add_argument("--max-weight", type=int, default=None, help="exact-mode search cap")
    p_dist.add_argument("--trials", type=int, default=100_000, help="estimate-mode trials")
    p_dist.add_argument("--seed", type=int, default=None, help="required for estimate mode")
    p_dist.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p_dist.add_argument("--workers", type=int, default=None)
    p_dist.add_argument("--json", default=None, help="also write the result as JSON here")
    p_dist.set_defaults(func=cmd_distance)

    p_sim = sub.add_parser("simulate", help="Monte Carlo logical error rates to CSV")
    p_sim.add_argument(
        "--code", action="append", required=True, help="code spec or path; repeat or comma-join"
    )
    p_sim.add_argument("--p", required=True, help="start:stop:step (inclusive) or comma list")
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--out", required=True, help="CSV path; per-qubit rates land in *.slq.csv")
    p_sim.add_argument("--max-iterations", type=int, default=100)
    p_sim.add_argument("--schedule", choices=("serial", "flooding"), default="serial")
    p_sim.add_argument("--damping", type=float, default=0.0)
    p_sim.add_argument("--stage-order", choices=("xz", "zx"), default="xz")
    p_sim.add_argument(
        "--workers",
        type=int,
        default=None,
        help="trial-level processes (default: TGRE_WORKERS or all cores)",
    )
    p_sim.set_defaults(func=cmd_simulate)

    p_rate = sub.add_parser("rate", help="coding-rate table, optionally vs planar surface codes")
    p_rate.add_argument("--max-L", type=int, required=True)
    p_rate.add_argument("--compare", choices=("surface", "none"), default="surface")
    p_rate.set_defaults(func=cmd_rate)

    p_self = sub.add_parser("selftest", help="run the acceptance criteria")
    p_self.add_argument("--criteria", default=None, help="comma list, e.g. 1,2,4 (default all)")
    p_self.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
