"""Dense Gaussian elimination over the finite fields of :mod:`exactfield`."""

from __future__ import annotations

from .exactfield import FieldElem, field


def rref(rows, ncols, p):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    F = field(p, 1)
    zero = F.element(0)
    mat = [[c if isinstance(c, FieldElem) else F(c) for c in row] for row in rows]
    for row in mat:
        row.extend([zero] * (ncols - len(row)))
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col].value != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][col].inverse()
        mat[r] = [c * inv for c in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col].value != 0:
                fac = mat[i][col]
                mat[i] = [a - fac * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def nullspace(rows, ncols, p):
    """Basis of {v : rows * v = 0}, one vector per free column, in column order.

    The basis is read off the reduced echelon form, so it is canonical:
    a solution space stable under Frobenius gets a basis over F_p.
    """
    F = field(p, 1)
    if not rows:
        return [[F(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows, ncols, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [F(0)] * ncols
        v[fc] = F(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def rank(rows, ncols, p):
    return len(rref(rows, ncols, p)[1]) if rows else 0
