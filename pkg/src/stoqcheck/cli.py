"""Command-line front end.

Exit codes are uniform across subcommands: 0 for a positive decision,
1 for a negative one, 2 for malformed input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from .pauli import Hamiltonian, ModelError, SearchCapError, extract_edge_data
from .two_qubit import (
    SpecialCase,
    decide_stoquastic_2q,
    is_real_locally,
    region_scan,
    scan_to_csv,
    standard_form,
    triple_invariants,
)
from .decompose import Decomposition, cone_membership
from .xyz import decide_xyz, solution_wire
from .oracle import brute_force_clifford
from .rxc3 import hamiltonian_from_rxc3, parse_rxc3


def parse_coefficient(text):
    """Decimal float or exact rational ``p/q`` mapped to the nearest double."""
    if "/" in text:
        num, den = text.split("/", 1)
        return float(Fraction(int(num), int(den)))
    return float(text)


def parse_hamiltonian(text):
    """Hamiltonian file: ``qubits <n>`` then ``term <coeff> P@q [P@q]``
    lines; ``#`` comments, blank lines ignored, duplicate keys summed.
    Returns the Hamiltonian and the original coefficient strings."""
    n = None
    terms = []
    originals = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "qubits":
            if n is not None:
                raise ValueError(f"line {ln}: duplicate qubits line")
            if len(parts) != 2:
                raise ValueError(f"line {ln}: expected 'qubits <n>'")
            n = int(parts[1])
            if n < 1:
                raise ValueError(f"line {ln}: qubit count must be positive")
        elif parts[0] == "term":
            if n is None:
                raise ValueError(f"line {ln}: term before qubits line")
            if len(parts) not in (3, 4):
                raise ValueError(f"line {ln}: expected 'term <coeff> P@q [P@q]'")
            coeff = parse_coefficient(parts[1])
            ops = []
            for tok in parts[2:]:
                if "@" not in tok:
                    raise ValueError(f"line {ln}: malformed operator {tok!r}")
                p, q = tok.split("@", 1)
                if p not in ("X", "Y", "Z"):
                    raise ValueError(f"line {ln}: unknown Pauli {p!r}")
                ops.append((p, int(q)))
            if len(ops) == 2 and ops[0][1] == ops[1][1]:
                raise ValueError(f"line {ln}: two-local term needs distinct qubits")
            terms.append((coeff, tuple(ops)))
            originals.append((parts[1], tuple(ops)))
        else:
            raise ValueError(f"line {ln}: unknown directive {parts[0]!r}")
    if n is None:
        raise ValueError("missing 'qubits' line")
    return Hamiltonian.from_terms(n, terms), originals


def serialize_hamiltonian(h):
    """Deterministic text form: qubits line, then terms in storage order."""
    lines = [f"qubits {h.n_qubits}"]
    for coeff, ops in h.terms():
        body = " ".join(f"{p}@{q}" for p, q in ops)
        lines.append(f"term {coeff} {body}")
    return "\n".join(lines) + "\n"


def _read(path):
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _write(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)


def _fmt_perm(sp):
    perm = " ".join(f"{i + 1}->{sp.perm[i] + 1}" for i in range(3))
    signs = " ".join(f"{s:+d}" for s in sp.signs)
    return f"perm [{perm}]  signs [{signs}]"


def cmd_check_xyz(args):
    h, _ = parse_hamiltonian(_read(args.file))
    decision = decide_xyz(h)
    if args.trace:
        payload = {
            "steps": list(decision.trace),
            "stoquastic": decision.stoquastic,
            "solution": solution_wire(decision.solution)
            if decision.solution else None,
        }
        _write(args.trace, json.dumps(payload, indent=2) + "\n")
    if decision.stoquastic:
        print("STOQUASTIC")
        for v in sorted(decision.solution):
            print(f"  qubit {v}: {_fmt_perm(decision.solution[v])}")
        return 0
    last = decision.trace[-1]
    print("NOT STOQUASTIC")
    print(f"  rejected at step {last['step_id']}: "
          f"{last['detail'].get('reason', last['action'])}")
    return 1


def cmd_check_2q(args):
    h, _ = parse_hamiltonian(_read(args.file))
    if h.n_qubits != 2:
        raise ValueError("check-2q needs a 2-qubit Hamiltonian")
    e = extract_edge_data(h, 0, 1)
    inv = triple_invariants(e)
    if not is_real_locally(e):
        print("NOT REAL UNDER LOCAL ROTATIONS")
        print("  invariants:", ", ".join(f"{x:.6g}" for x in inv.as_tuple()))
        print("NOT STOQUASTIC")
        return 1
    print("REAL UNDER LOCAL ROTATIONS")
    sf = standard_form(e)
    print(f"  standard form: beta=diag{tuple(round(x, 12) for x in sf.beta_diag)}"
          f" S={tuple(round(x, 12) for x in sf.s_vec)}"
          f" P={tuple(round(x, 12) for x in sf.p_vec)}")
    print(f"  normalization={sf.normalization:.12g} "
          f"special_case={sf.special_case.value}")
    d = decide_stoquastic_2q(e)
    if d.stoquastic:
        w = d.witness
        print("STOQUASTIC")
        print(f"  {d.certificate_note}")
        if w.theta_l is not None:
            print(f"  witness: theta_l={w.theta_l:.12g} theta_r={w.theta_r:.12g}"
                  f" gamma_l={w.gamma_l} gamma_r={w.gamma_r} case={w.case_id}")
        return 0
    print("NOT STOQUASTIC")
    print(f"  {d.certificate_note}")
    return 1


def cmd_decompose(args):
    h, _ = parse_hamiltonian(_read(args.file))
    result = cone_membership(h)
    if isinstance(result, Decomposition):
        print("IN CONE")
        for (u, v), e in result.terms:
            print(f"  edge ({u},{v}): beta_diag=({e.beta[0,0]},{e.beta[1,1]},"
                  f"{e.beta[2,2]}) xz={e.beta[0,2]} zx={e.beta[2,0]} "
                  f"x_u={e.s_vec[0]} x_v={e.p_vec[0]}")
        for v in sorted(result.leftovers):
            left = result.leftovers[v]
            body = " ".join(f"{p}={float(c)}" for p, c in sorted(left.items()))
            print(f"  leftover qubit {v}: {body}")
        return 0
    print("NOT IN CONE")
    where = []
    if result.edge is not None:
        where.append(f"edge {result.edge}")
    if result.vertex is not None:
        where.append(f"qubit {result.vertex}")
    print(f"  {result.reason}" + (f" ({', '.join(where)})" if where else ""))
    return 1


def cmd_realness(args):
    h, _ = parse_hamiltonian(_read(args.file))
    if h.n_qubits != 2:
        raise ValueError("realness needs a 2-qubit Hamiltonian")
    e = extract_edge_data(h, 0, 1)
    inv = triple_invariants(e)
    print("invariants:", ", ".join(f"{x:.6g}" for x in inv.as_tuple()))
    if is_real_locally(e):
        print("REAL UNDER LOCAL ROTATIONS")
        return 0
    print("NOT REAL UNDER LOCAL ROTATIONS")
    return 1


def cmd_oracle(args):
    h, _ = parse_hamiltonian(_read(args.file))
    witness = brute_force_clifford(h, mode=args.mode, cap=args.cap)
    if witness is None:
        print("NO WITNESS")
        return 1
    print("WITNESS")
    for v in sorted(witness):
        print(f"  qubit {v}: {_fmt_perm(witness[v])}")
    return 0


def cmd_gen_rxc3(args):
    inst = parse_rxc3(_read(args.file))
    h = hamiltonian_from_rxc3(inst)
    _write(args.out, serialize_hamiltonian(h))
    return 0


def _axis_spec(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"axis spec {text!r} must be lo:hi:steps")
    return float(parts[0]), float(parts[1]), int(parts[2])


def cmd_region_scan(args):
    rows = region_scan(_axis_spec(args.ax), _axis_spec(args.az),
                       _axis_spec(args.axx))
    _write(args.out, scan_to_csv(rows))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stoqcheck",
        description="decide stoquasticity of 2-local qubit Hamiltonians "
                    "under local basis changes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-xyz", help="decide an XYZ Heisenberg model")
    p.add_argument("file")
    p.add_argument("--trace", metavar="OUT", help="write a JSON step trace")
    p.set_defaults(func=cmd_check_xyz)

    p = sub.add_parser("check-2q", help="full two-qubit analysis")
    p.add_argument("file")
    p.set_defaults(func=cmd_check_2q)

    p = sub.add_parser("decompose", help="fixed-basis cone membership")
    p.add_argument("file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("realness", help="two-qubit realness via invariants")
    p.add_argument("file")
    p.set_defaults(func=cmd_realness)

    p = sub.add_parser("oracle", help="brute-force Clifford search")
    p.add_argument("file")
    p.add_argument("--mode", choices=("z_matrix", "realness"),
                   default="z_matrix")
    p.add_argument("--cap", type=int, default=6)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen-rxc3", help="Hamiltonian from an exact-cover instance")
    p.add_argument("file")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen_rxc3)

    p = sub.add_parser("region-scan", help="scan the field Ising pair family")
    p.add_argument("--ax", default="0:2:20")
    p.add_argument("--az", default="0:2:20")
    p.add_argument("--axx", default="0:1:10")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_region_scan)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (ValueError, ModelError, SearchCapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
