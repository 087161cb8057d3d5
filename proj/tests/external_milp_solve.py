#!/usr/bin/env python3
"""Independent MILP cross-check: parse an exported MPS model and solve it
with scipy's HiGHS backend.

Usage: external_milp_solve.py MODEL.mps OUT.json

Writes {"status", "objective", "binaries"} where objective is reported in the
model's maximization sense and binaries maps variable names to 0/1.
"""

import json
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import lil_matrix


def parse_mps(path):
    rows = {}        # name -> sense ('N', 'L', 'G', 'E')
    row_order = []
    cols = {}        # var -> list[(row, coef)]
    col_order = []
    integer_vars = set()
    rhs = {}
    maximize = False

    section = None
    in_integer = False
    expect_objsense = False
    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            head = line.split()
            if line[0] not in " \t":
                tag = head[0]
                if tag in ("NAME", "ROWS", "COLUMNS", "RHS", "BOUNDS", "RANGES", "ENDATA"):
                    section = tag
                    expect_objsense = False
                    continue
                if tag == "OBJSENSE":
                    expect_objsense = True
                    continue
            if expect_objsense:
                maximize = head[0].upper() == "MAX"
                expect_objsense = False
                continue
            if section == "ROWS":
                sense, name = head[0], head[1]
                rows[name] = sense
                if sense != "N":
                    row_order.append(name)
            elif section == "COLUMNS":
                if len(head) >= 3 and head[1] == "'MARKER'":
                    in_integer = head[2] == "'INTORG'"
                    continue
                var, row, coef = head[0], head[1], float(head[2])
                if var not in cols:
                    cols[var] = []
                    col_order.append(var)
                    if in_integer:
                        integer_vars.add(var)
                cols[var].append((row, coef))
            elif section == "RHS":
                rhs[head[1]] = float(head[2])
            elif section == "BOUNDS":
                pass  # only BV entries are emitted; handled via integer_vars
    return rows, row_order, cols, col_order, integer_vars, rhs, maximize


def main():
    model_path, out_path = sys.argv[1], sys.argv[2]
    rows, row_order, cols, col_order, integer_vars, rhs, maximize = parse_mps(model_path)

    nvar = len(col_order)
    var_index = {v: i for i, v in enumerate(col_order)}
    row_index = {r: i for i, r in enumerate(row_order)}

    c = np.zeros(nvar)
    A = lil_matrix((len(row_order), nvar))
    for var, entries in cols.items():
        j = var_index[var]
        for row, coef in entries:
            if rows[row] == "N":
                c[j] += coef
            else:
                A[row_index[row], j] += coef

    lb = np.full(len(row_order), -np.inf)
    ub = np.full(len(row_order), np.inf)
    for r, i in row_index.items():
        b = rhs.get(r, 0.0)
        sense = rows[r]
        if sense == "L":
            ub[i] = b
        elif sense == "G":
            lb[i] = b
        else:
            lb[i] = ub[i] = b

    integrality = np.array([1 if v in integer_vars else 0 for v in col_order])
    upper = np.array([1.0 if v in integer_vars else np.inf for v in col_order])
    bounds = (np.zeros(nvar), upper)

    res = milp(
        c=-c if maximize else c,
        constraints=LinearConstraint(A.tocsr(), lb, ub),
        integrality=integrality,
        bounds=Bounds(*bounds),
    )

    out = {"status": int(res.status), "message": res.message}
    if res.status == 0:
        val = float(res.fun)
        out["objective"] = -val if maximize else val
        out["binaries"] = {
            v: int(round(res.x[var_index[v]])) for v in col_order if v in integer_vars
        }
    with open(out_path, "w") as fh:
        json.dump(out, fh, indent=2, sort_keys=True)
    print(json.dumps({"status": out["status"], "objective": out.get("objective")}))


if __name__ == "__main__":
    main()
