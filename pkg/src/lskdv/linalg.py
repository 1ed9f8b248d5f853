"""Exact linear algebra over the rationals (row reduction, nullspace)."""

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form of a list of rational rows.

    Returns ``(matrix, pivot_columns)``; the input is not modified.
    """
    a = [[Fraction(v) for v in row] for row in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(rows, ncols=None):
    """Basis of the right nullspace, one vector per free column.

    Each basis vector has a 1 in its free column and zeros in the other free
    columns, so the basis is canonical for a given column order.
    """
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve_exact(rows, rhs):
    """Least-structure exact solve of ``A x = b``; raises ValueError if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    n = len(rows[0])
    if n in pivots:
        raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * n
    for row, pc in zip(red, pivots):
        x[pc] = row[n]
    return x
