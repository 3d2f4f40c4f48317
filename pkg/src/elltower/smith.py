"""Smith normal form of integer matrices, exact arithmetic only.

Matrices are lists of lists of Python ints.  The decomposition returns
(S, U, V) with U * A * V = S, U and V unimodular and S diagonal with
s_1 | s_2 | ... .  Small and naive on purpose: every caller in this
package works at desk scale (a few hundred rows at most).
"""

from __future__ import annotations


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m, dst, src, c):
    m[dst] = [a + c * b for a, b in zip(m[dst], m[src])]


def _add_col(m, dst, src, c):
    for row in m:
        row[dst] += c * row[src]


def _negate_row(m, i):
    m[i] = [-a for a in m[i]]


def smith_normal_form(a):
    """Return (S, U, V) with U*A*V = S in Smith normal form."""
    s = [list(map(int, row)) for row in a]
    nr = len(s)
    nc = len(s[0]) if nr else 0
    u = _identity(nr)
    v = _identity(nc)
    t = 0
    while t < min(nr, nc):
        # find pivot: nonzero entry of least absolute value in s[t:, t:]
        piv = None
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                val = abs(s[i][j])
                if val and (best is None or val < best):
                    best = val
                    piv = (i, j)
        if piv is None:
            break
        pi, pj = piv
        if pi != t:
            _swap_rows(s, t, pi)
            _swap_rows(u, t, pi)
        if pj != t:
            _swap_cols(s, t, pj)
            _swap_cols(v, t, pj)
        if s[t][t] < 0:
            _negate_row(s, t)
            _negate_row(u, t)
        # clear the rest of row/column t
        dirty = False
        for i in range(t + 1, nr):
            if s[i][t]:
                q = s[i][t] // s[t][t]
                _add_row(s, i, t, -q)
                _add_row(u, i, t, -q)
                if s[i][t]:
                    dirty = True
        for j in range(t + 1, nc):
            if s[t][j]:
                q = s[t][j] // s[t][t]
                _add_col(s, j, t, -q)
                _add_col(v, j, t, -q)
                if s[t][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility s[t][t] | s[i][j]
        d = s[t][t]
        bad = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if s[i][j] % d:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            _add_row(s, t, bad, 1)
            _add_row(u, t, bad, 1)
            continue
        t += 1
    return s, u, v


def elementary_divisors(a):
    """Nonzero diagonal entries of the Smith form of A, in order."""
    s, _, _ = smith_normal_form(a)
    out = []
    for i in range(min(len(s), len(s[0]) if s else 0)):
        if s[i][i]:
            out.append(s[i][i])
    return out


def kernel_count_mod(a, modulus):
    """Count solutions v in (Z/modulus)^ncols of A v = 0, with structure.

    Returns (count, factors) where factors are the orders of the cyclic
    summands of the solution module, largest first, 1s dropped.
    """
    from math import gcd

    nc = len(a[0]) if a else 0
    if nc == 0:
        return 1, []
    s, _, _ = smith_normal_form(a)
    diag = [s[i][i] if i < len(s) else 0 for i in range(nc)]
    factors = []
    count = 1
    for d in diag:
        # solutions of d*w = 0 mod m form a cyclic group of order gcd(d, m)
        g = gcd(abs(d), modulus) if d else modulus
        count *= g
        if g > 1:
            factors.append(g)
    factors.sort(reverse=True)
    return count, factors
