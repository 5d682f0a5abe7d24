"""Build one code from each family and walk through what comes out.

Run:  python3 demos/build_and_inspect.py
CLI equivalents:  tgre build --family z --L 3
                  tgre build --family xz --L 3 --a 1
                  tgre validate xz:3:1
"""

from __future__ import annotations

from tgre import build_xztgre, build_ztgre, code_params, validate_code


def op_text(op):
    terms = [(lab, "Y" if lab in op.z_support else "X") for lab in op.x_support]
    terms += [(lab, "Z") for lab in op.z_support - op.x_support]
    return " ".join(f"{kind}{lab}" for lab, kind in sorted(terms)) or "I"


def describe(code):
    n, k, rate, gen_weight = code_params(code.family, code.L, code.a)
    print(f"family={code.family} L={code.L} a={code.a}")
    print(f"  n={n} qubits, k={k} logical qubits, rate {rate}, generator weight {gen_weight}")
    print(f"  qubit labels: {code.qubit_labels[:8]}{' ...' if code.n > 8 else ''}")
    for i, stab in enumerate(code.stabilizers[:4], 1):
        print(f"  generator {i}: {op_text(stab)}")
    if len(code.stabilizers) > 4:
        print(f"  ... {len(code.stabilizers) - 4} more generators")
    report = validate_code(code)
    print(f"  validation: {'ok' if report.ok else 'FAILED'} "
          f"(stabilizer rank {report.stabilizer_rank})")
    print()


def main():
    # The pure-Z family: N = 2^L qubits, N/2 generators, rate 1/2.  Only
    # X and Y errors are detectable -- there are no X-type generators.
    describe(build_ztgre(3))

    # The mixed family adds X-type generators (and a rate knob a), so all
    # three Pauli errors are detectable.  N = 2^(L-a) + 2^(L+1).
    describe(build_xztgre(3, 1))

    # The rate knob trades logical qubits for distance at fixed structure:
    # same L, larger a => fewer logical qubits, same qubit count scale.
    for a in (1, 2, 3):
        n, k, rate, _ = code_params("xztgre", 4, a)
        print(f"xz L=4 a={a}: n={n:4d} k={k:3d} rate={rate}")


if __name__ == "__main__":
    main()
