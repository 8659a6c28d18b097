"""Independent brute-force oracles used to pin expected values in the tests.

Everything here is deliberately naive: plain-Python Gaussian elimination,
characteristic polynomials via exact Faddeev-LeVerrier over the
rationals, and intertwiner spaces cut out by every basis element of the
acting algebra.  None of it shares code with the library paths it
checks.
"""

from fractions import Fraction

import numpy as np


def naive_rref(rows, p):
    """Reduced row echelon form over GF(p) on plain lists."""
    m = [list(int(x) % p for x in row) for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def naive_rank(rows, p):
    return len(naive_rref(rows, p)[1])


def naive_nullity(rows, p):
    ncols = len(rows[0]) if rows else 0
    return ncols - naive_rank(rows, p)


def charpoly_fractions(mat):
    """Coefficients [1, c1, ..., cn] of det(lambda*I - mat), exactly."""
    n = len(mat)
    a = [[Fraction(int(x)) for x in row] for row in mat]
    coeffs = [Fraction(1)]
    m = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        am = [[sum(a[i][l] * m[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        ck = -sum(am[i][i] for i in range(n)) / k
        coeffs.append(ck)
        m = [[am[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


def charpoly_mod(mat, p):
    coeffs = charpoly_fractions(mat)
    out = []
    for c in coeffs:
        assert c.denominator == 1
        out.append(c.numerator % p)
    return out


def intertwiner_dimension(dims_x, acts_x, dims_y, acts_y, p):
    """dim Hom for two modules given by the SAME indexed family of acting maps.

    acts_x[k] is a list of (s, t, matrix) triples; the unknown blocks
    F_i must satisfy X_k F_t = F_s Y_k for every k.  Solved by plain
    elimination on the stacked linear system.
    """
    nblocks = len(dims_x)
    offsets = []
    total = 0
    for i in range(nblocks):
        offsets.append(total)
        total += dims_x[i] * dims_y[i]
    equations = []
    for (s, t, mx), (_, _, my) in zip(acts_x, acts_y):
        ax, ay = dims_x[s], dims_y[t]
        for r in range(ax):
            for c in range(ay):
                row = [0] * total
                # (X F_t)[r, c] = sum_k X[r, k] F_t[k, c]
                for k in range(dims_x[t]):
                    row[offsets[t] + k * dims_y[t] + c] = (row[offsets[t] + k * dims_y[t] + c] + int(mx[r][k])) % p
                # -(F_s Y)[r, c] = -sum_k F_s[r, k] Y[k, c]
                for k in range(dims_y[s]):
                    row[offsets[s] + r * dims_y[s] + k] = (row[offsets[s] + r * dims_y[s] + k] - int(my[k][c])) % p
                equations.append(row)
    if not equations:
        return total
    return naive_nullity(equations, p)
