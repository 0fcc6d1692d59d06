#!/usr/bin/env python3
"""Write the worked-example matrices as JSON fixtures in the scalar text grammar.

Every entry is an element of Q(sqrt 5), optionally multiplied by one radical that is
shared by a whole row or column (declared in "scaled_rows"/"scaled_cols").  Each
decomposition is checked exactly with sympy before it is written.

Usage: python3 scripts/gen_fixtures.py [output_dir]
"""
import json
import sys
from pathlib import Path

import mpmath
import sympy as sp

S5 = sp.sqrt(5)
TAN36 = sp.sqrt(5 - 2 * S5)  # tan(pi/5)
Z = sp.Symbol("z")
T_QB = sp.sqrt((5 + S5) / 8)  # shared radical of the rebit state row


def split_q5(expr):
    """Return rationals (a, b) with expr == a + b*sqrt(5), verified exactly."""
    mpmath.mp.dps = 120
    val = mpmath.mpf(sp.N(expr, 120))
    if abs(val) < mpmath.mpf(10) ** -100:
        rel = [1, 0, 0]
    else:
        rel = mpmath.pslq([val, mpmath.mpf(1), mpmath.sqrt(5)], maxcoeff=10**15, maxsteps=10**6)
    if rel is None or rel[0] == 0:
        raise ValueError(f"no Q(sqrt5) relation for {expr}")
    aa = sp.Rational(-rel[1], rel[0])
    bb = sp.Rational(-rel[2], rel[0])
    diff = sp.expand(expr - (aa + bb * S5))
    if diff != 0 and sp.minimal_polynomial(diff, Z) != Z:
        raise ValueError(f"{expr} is not {aa} + {bb} sqrt5")
    return aa, bb


def fmt_rat(q):
    q = sp.Rational(q)
    return str(q.p) if q.q == 1 else f"{q.p}/{q.q}"


def fmt(expr):
    a, b = split_q5(expr)
    if b == 0:
        return fmt_rat(a)
    return f"({fmt_rat(a)})+({fmt_rat(b)})*sqrt(5)"


def scaled_entries(mat, rows=None, cols=None):
    """Divide the named rows/cols by their radicals; result must lie in Q(sqrt5)."""
    rows = rows or {}
    cols = cols or {}
    out = []
    for i in range(mat.rows):
        line = []
        for j in range(mat.cols):
            e = mat[i, j]
            if i in rows:
                e = e / rows[i]
            if j in cols:
                e = e / cols[j]
            line.append(fmt(e))
        out.append(line)
    return out


def radical_text(r):
    # r = sqrt(w); store w in the scalar grammar
    return fmt(sp.expand(r**2))


def doc(mat, description, rows=None, cols=None, l=None, blocks=None):
    d = {"description": description, "radicand": 5}
    if l is not None:
        d["l"] = l
        d["block_heights"] = blocks
    d["entries"] = scaled_entries(mat, rows, cols)
    if rows:
        d["scaled_rows"] = [{"index": i, "radical": radical_text(r)} for i, r in sorted(rows.items())]
    if cols:
        d["scaled_cols"] = [{"index": j, "radical": radical_text(r)} for j, r in sorted(cols.items())]
    return d


def pentagon_c1():
    first = [2 * (S5 - 1), 8 - 2 * S5, 2 * (S5 - 1), 3 - S5, 3 - S5]
    cols = []
    col = first
    for _ in range(5):
        cols.append(col)
        col = col[1:] + col[:1]
    return sp.Matrix(5, 5, lambda i, j: cols[j][i] / 10)


def pentagon_factors():
    k = sp.Matrix(5, 2, lambda i, j: [sp.sin, sp.cos][j](2 * sp.pi * (i + 1) / 5))
    x = [
        (S5 - 1) / 10 * sp.Matrix([
            sp.cos(2 * sp.pi * i / 5) * sp.tan(2 * sp.pi / 10) + sp.sin(2 * sp.pi * i / 5),
            sp.sin(2 * sp.pi * i / 5) * sp.tan(2 * sp.pi / 10) - sp.cos(2 * sp.pi * i / 5),
        ])
        for i in range(5)  # x^0 = x^5; this labelling makes A_U B_I equal C1 column by column
    ]
    a_u = sp.Matrix(5, 3, lambda i, j: 2 / (5 - S5) if j == 0 else k[i, j - 1])
    b_i = sp.Matrix(3, 5, lambda i, j: (5 - S5) / 10 if i == 0 else x[j][i - 1])
    p = (S5 - 1) / 10 * sp.ones(5, 1)
    y = sp.Matrix.hstack(*[sp.Rational(2, 5) * (k * xi + p) for xi in x])
    return a_u, b_i, y


def cut_corner_example():
    g2 = sp.Matrix([
        [TAN36, sp.Rational(1, 2) * sp.sqrt((S5 + 5) / 2), sp.Rational(1, 4) * sp.sqrt(10 - 2 * S5), 0,
         -sp.sqrt((5 - S5) / 2), -TAN36],
        [-1, (1 - S5) / 4, (S5 + 1) / 4, S5 - 1, (3 - S5) / 2, -1],
        [(5 - S5) / 10] * 6,
    ])
    b = sp.Matrix([
        [sp.sqrt((25 - 11 * S5) / 2), TAN36, 0, -TAN36, -sp.sqrt((25 - 11 * S5) / 2)],
        [(1 - S5) / 2, S5 - 2, 3 - S5, S5 - 2, (1 - S5) / 2],
        [(5 - S5) / 10] * 5,
    ])
    ebar_t = sp.Matrix([
        [3 * (632 * S5 - 463) / 7676, (11425 - 7 * S5) / 38380, (11805 - 3427 * S5) / 38380,
         (528 * S5 - 1237) / 7676, (5400 - 2443 * S5) / 38380, (4576 - 6243 / S5) / 7676],
        [(42 - 11 * S5) / 76, sp.Rational(3, 380) * (11 * S5 + 15), sp.Rational(3, 380) * (11 * S5 + 15),
         (42 - 11 * S5) / 76, (22 * S5 - 65) / 380, (22 * S5 - 65) / 380],
        [(528 * S5 - 1237) / 7676, (11805 - 3427 * S5) / 38380, (11425 - 7 * S5) / 38380,
         3 * (632 * S5 - 463) / 7676, (4576 - 6243 / S5) / 7676, (5400 - 2443 * S5) / 38380],
        [(-24 * S5 - 31) / 7676, 9 * (27 * S5 - 205) / 38380, (6895 - 1657 * S5) / 38380,
         7 * (495 - 112 * S5) / 7676, 13 * (619 * S5 - 80) / 38380, (3440 - 2593 / S5) / 7676],
        [7 * (495 - 112 * S5) / 7676, (6895 - 1657 * S5) / 38380, 9 * (27 * S5 - 205) / 38380,
         (-24 * S5 - 31) / 7676, (3440 - 2593 / S5) / 7676, 13 * (619 * S5 - 80) / 38380],
    ])
    h = sp.Rational(1, 2)
    q = (3 - S5) / 4
    ystar_t = sp.Matrix([
        [0, 0, 0, 5 - 2 * S5, h * (S5 - 1), 0],
        [0, 0, 0, 0, 1, 1],
        [5 - 2 * S5, 0, 0, 0, 0, h * (S5 - 1)],
        [3 - S5, 1, q, 0, 0, 0],
        [0, q, 1, 3 - S5, 0, 0],
    ])
    return g2, b, ebar_t.T, ystar_t.T


def pentagon_models():
    r = S5
    a1 = sp.Matrix([
        [5 - r, 2 * r, 5 - r, 0, 0],
        [0, 5 - r, 2 * r, 5 - r, 0],
        [0, 0, 5 - r, 2 * r, 5 - r],
        [5 - r, 0, 0, 5 - r, 2 * r],
        [2 * r, 5 - r, 0, 0, 5 - r],
    ]) / 10
    b1 = sp.Matrix([
        [0, 5 - r, 2 * r, 5 - r, 0],
        [5 - r, 2 * r, 5 - r, 0, 0],
        [2 * r, 5 - r, 0, 0, 5 - r],
        [5 - r, 0, 0, 5 - r, 2 * r],
        [0, 0, 5 - r, 2 * r, 5 - r],
    ]) / 10
    qa = sp.Matrix([
        [TAN36 / 5, 1 / r - sp.Rational(2, 5), sp.Rational(1, 5)],
        [0, sp.Rational(3, 5) - 1 / r, sp.Rational(1, 5)],
        [-TAN36 / 5, 1 / r - sp.Rational(2, 5), sp.Rational(1, 5)],
        [-sp.sqrt(50 - 22 * r) / 10, (1 - r) / 10, sp.Rational(1, 5)],
        [sp.sqrt(50 - 22 * r) / 10, (1 - r) / 10, sp.Rational(1, 5)],
    ])
    qb = sp.Matrix([
        [0, sp.sqrt(r / 8 + sp.Rational(5, 8)), sp.sqrt(sp.Rational(5, 8) - r / 8),
         -sp.sqrt(sp.Rational(5, 8) - r / 8), -sp.sqrt(r / 8 + sp.Rational(5, 8))],
        [1, (r - 1) / 4, (-r - 1) / 4, (-r - 1) / 4, (r - 1) / 4],
        [1, 1, 1, 1, 1],
    ])
    a2 = sp.Matrix([
        [0, 1 - 1 / r, 0, (5 - r) / 10],
        [1 / r, 1 / r, 0, 0],
        [1 - 1 / r, 0, (5 - r) / 10, 0],
        [0, 0, 1 - 1 / r, (3 * r - 5) / 10],
        [0, 0, (3 * r - 5) / 10, 1 - 1 / r],
    ])
    b2 = sp.Matrix([
        [20 * (2 / r - h2()), 5 - r, 0, 2 * (3 * r - 5), 3 * (5 - r)],
        [20 * (2 / r - h2()), 3 * (5 - r), 2 * (3 * r - 5), 0, 5 - r],
        [20 * (1 - 2 / r), 0, 2 * (5 - r), 20 * (1 - 1 / r), 4 * r],
        [20 * (1 - 2 / r), 4 * r, 20 * (1 - 1 / r), 2 * (5 - r), 0],
    ]) / 20
    return a1, b1, qa, qb, a2, b2


def h2():
    return sp.Rational(1, 2)


def dump(d):
    lines = ["{"]
    items = list(d.items())
    for n, (key, val) in enumerate(items):
        sep = "," if n + 1 < len(items) else ""
        if key == "entries":
            rows = [" " * 4 + json.dumps(r) for r in val]
            lines.append(f'  "entries": [\n' + ",\n".join(rows) + f"\n  ]{sep}")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(val)}{sep}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "crates/core/fixtures"
    out.mkdir(parents=True, exist_ok=True)
    c1 = pentagon_c1()
    a_u, b_i, y = pentagon_factors()
    g2, bd, ebar, ystar = cut_corner_example()
    a1, b1, qa, qb, a2, b2 = pentagon_models()

    # sanity: the identities the fixtures are meant to carry
    assert sp.simplify(a_u * b_i - c1) == sp.zeros(5, 5)
    assert sp.simplify(a1 * b1 - c1) == sp.zeros(5, 5)
    assert sp.simplify(a2 * b2 - c1) == sp.zeros(5, 5)
    assert sp.simplify(qa * qb - c1) == sp.zeros(5, 5)
    pinv = g2.T * (g2 * g2.T).inv()
    assert sp.N(pinv * bd - ebar, 50).norm() < 1e-40
    assert sp.N(g2 * ebar - bd, 50).norm() < 1e-40

    box = sp.Matrix([[1, 1, 0, 0], [0, 0, 1, 1], [1, 0, 1, 0], [0, 1, 0, 1]])
    files = {
        "pentagon.json": doc(c1, "pentagon COPE C1 (rank 3, one measurement)", l=1, blocks=[5]),
        "boxworld.json": doc(box, "box-world COPE (two dichotomic measurements)", l=2, blocks=[2, 2]),
        "identity4.json": doc(sp.eye(4), "4x4 identity COPE", l=1, blocks=[4]),
        "pentagon_a1.json": doc(a1, "noncontextual size-5 model: response functions"),
        "pentagon_b1.json": doc(b1, "noncontextual size-5 model: epistemic states"),
        "pentagon_a2.json": doc(a2, "size-4 ontological model: response functions"),
        "pentagon_b2.json": doc(b2, "size-4 ontological model: epistemic states"),
        "pentagon_quantum_a.json": doc(qa, "rebit model effects (5x3)", cols={0: TAN36}),
        "pentagon_quantum_b.json": doc(qb, "rebit model states (3x5)", rows={0: T_QB}),
        "pentagon_outer_effects.json": doc(a_u, "outer pentagon effects A_U (5x3)", cols={1: TAN36}),
        "pentagon_inner_states.json": doc(b_i, "inner pentagon states B_I (3x5)", rows={1: TAN36}),
        "pentagon_embedded_inner.json": doc(y, "inner pentagon I embedded in R^5 (vertices as columns)"),
        "pentagon_embedded_outer.json": doc((S5 - 1) / 5 * sp.eye(5), "simplex U (vertices as columns)"),
        "cut_corner_g2.json": doc(g2, "cut-corner hexagon G2 (vertices as columns)", rows={0: TAN36}),
        "cut_corner_inner.json": doc(bd, "inner pentagon in the cut-corner frame", rows={0: TAN36}),
        "cut_corner_ebar.json": doc(ebar, "pseudoinverse coefficients G2^+ B (6x5)"),
        "cut_corner_dual.json": doc(ystar, "dual certificate Y* (6x5)"),
    }
    for name, d in files.items():
        (out / name).write_text(dump(d))
        print("wrote", out / name)


if __name__ == "__main__":
    main()
