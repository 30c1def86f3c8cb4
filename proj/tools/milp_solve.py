#!/usr/bin/env python3
"""Reference MILP backend: solves a CPLEX-LP file with HiGHS via scipy.

Usage: milp_solve.py LP_PATH SOL_PATH [TIME_LIMIT_S] [SEED]

Reads the LP dialect produced by the accompanying library (Minimize /
Maximize, Subject To, Bounds, Binaries, End; one constraint per line) and
writes a solution file:

    status <optimal|feasible|infeasible|unbounded|limit>
    objective <value>
    <name> <value>        one line per variable

The seed argument is accepted for interface stability; HiGHS through
scipy does not expose a random-seed knob, and these models are solved to
proven optimality anyway.
"""

import re
import sys

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

NUMBER_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")


def is_number(tok):
    return NUMBER_RE.match(tok) is not None


def parse_expr(tokens):
    """Returns (dict name -> coefficient, constant)."""
    coeffs = {}
    const = 0.0
    sign = 1.0
    num = None
    for tok in tokens:
        if tok == "+" or tok == "-":
            if num is not None:
                const += sign * num
                num = None
            sign = 1.0 if tok == "+" else -1.0
        elif is_number(tok):
            if num is not None:
                const += sign * num
            num = float(tok)
        else:
            coeffs[tok] = coeffs.get(tok, 0.0) + sign * (1.0 if num is None else num)
            num = None
            sign = 1.0
    if num is not None:
        const += sign * num
    return coeffs, const


def parse_lp(text):
    sense = 1.0  # 1 minimize, -1 maximize
    objective = ({}, 0.0)
    constraints = []  # (name, coeffs, op, rhs)
    binaries = []
    section = None

    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low == "minimize":
            sense, section = 1.0, "objective"
            continue
        if low == "maximize":
            sense, section = -1.0, "objective"
            continue
        if low in ("subject to", "such that", "st", "s.t."):
            section = "constraints"
            continue
        if low == "bounds":
            section = "bounds"
            continue
        if low in ("binaries", "binary", "bin", "generals", "general"):
            section = "binaries"
            continue
        if low == "end":
            break

        if section == "objective":
            body = line.split(":", 1)[1] if ":" in line else line
            objective = parse_expr(body.split())
        elif section == "constraints":
            if ":" not in line:
                raise ValueError("constraint line without a name: " + line)
            name, body = line.split(":", 1)
            tokens = body.split()
            op_idx = next(i for i, t in enumerate(tokens) if t in ("<=", ">=", "=", "=<", "=>"))
            op = tokens[op_idx].replace("=<", "<=").replace("=>", ">=")
            coeffs, const = parse_expr(tokens[:op_idx])
            rhs = float(tokens[op_idx + 1]) - const
            constraints.append((name.strip(), coeffs, op, rhs))
        elif section == "binaries":
            binaries.extend(line.split())
        # Bounds lines are redundant for pure-binary models; the Binaries
        # section fixes the domain.

    return sense, objective, constraints, binaries


def main():
    if len(sys.argv) < 3:
        sys.stderr.write(__doc__)
        return 2
    lp_path, sol_path = sys.argv[1], sys.argv[2]
    time_limit = float(sys.argv[3]) if len(sys.argv) > 3 else 100.0

    with open(lp_path) as f:
        sense, (obj_coeffs, obj_const), constraints, binaries = parse_lp(f.read())

    index = {name: i for i, name in enumerate(binaries)}
    for name in obj_coeffs:
        if name not in index:
            raise ValueError("objective references unknown variable " + name)
    nvars = len(binaries)

    if nvars == 0:
        # Degenerate model: only constant rows to check.
        ok = all(
            (op == "<=" and 0.0 <= rhs + 1e-9)
            or (op == ">=" and 0.0 >= rhs - 1e-9)
            or (op == "=" and abs(rhs) <= 1e-9)
            for (_, coeffs, op, rhs) in constraints
            if not coeffs
        )
        with open(sol_path, "w") as f:
            if ok:
                f.write("status optimal\n")
                f.write("objective %.9g\n" % obj_const)
            else:
                f.write("status infeasible\n")
        return 0

    c = np.zeros(nvars)
    for name, coeff in obj_coeffs.items():
        c[index[name]] = sense * coeff

    rows, cols, vals = [], [], []
    lo, hi = [], []
    row_id = 0
    for name, coeffs, op, rhs in constraints:
        for var, coeff in coeffs.items():
            if var not in index:
                raise ValueError("constraint %s references unknown variable %s" % (name, var))
            rows.append(row_id)
            cols.append(index[var])
            vals.append(coeff)
        if op == "<=":
            lo.append(-np.inf)
            hi.append(rhs)
        elif op == ">=":
            lo.append(rhs)
            hi.append(np.inf)
        else:
            lo.append(rhs)
            hi.append(rhs)
        row_id += 1

    kwargs = {}
    if row_id > 0:
        a = sparse.csr_matrix((vals, (rows, cols)), shape=(row_id, nvars))
        kwargs["constraints"] = LinearConstraint(a, np.array(lo), np.array(hi))

    res = milp(
        c=c,
        integrality=np.ones(nvars),
        bounds=Bounds(0, 1),
        options={"time_limit": time_limit, "mip_rel_gap": 0.0},
        **kwargs,
    )

    with open(sol_path, "w") as f:
        if res.status == 0:
            f.write("status optimal\n")
        elif res.status == 1:
            f.write("status limit\n")
        elif res.status == 2:
            f.write("status infeasible\n")
        elif res.status == 3:
            f.write("status unbounded\n")
        else:
            sys.stderr.write("solver failure: %s\n" % res.message)
            return 1
        if res.x is not None:
            value = float(np.dot(sense * c, res.x)) + obj_const
            f.write("objective %.9g\n" % value)
            for name, i in index.items():
                f.write("%s %.9g\n" % (name, res.x[i]))
    return 0


if __name__ == "__main__":
    sys.exit(main())
