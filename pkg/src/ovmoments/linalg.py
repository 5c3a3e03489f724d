"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .series import normalize


class InconsistentSystem(ValueError):
    def __init__(self, equation: int):
        super().__init__(f"linear system is inconsistent at equation {equation}")
        self.equation = equation


class SingularSystem(ValueError):
    def __init__(self, witness: list[Fraction]):
        super().__init__("columns are linearly dependent")
        self.witness = witness


def _size(x: Fraction) -> int:
    return abs(x.numerator) * x.denominator


def row_reduce(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(reduced, pivots, origin)`` where ``origin[i]`` is the index of
    the input row that ended up as row ``i``.  Pivots are chosen as the
    entry of smallest ``|numerator| * denominator`` in the column.
    """
    M = [[Fraction(x) for x in r] for r in rows]
    ncols = len(M[0]) if ncols is None and M else (ncols or 0)
    origin = list(range(len(M)))
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        best = None
        for i in range(r, len(M)):
            if M[i][col] and (best is None or _size(M[i][col]) < _size(M[best][col])):
                best = i
        if best is None:
            continue
        M[r], M[best] = M[best], M[r]
        origin[r], origin[best] = origin[best], origin[r]
        inv = 1 / M[r][col]
        M[r] = [x * inv for x in M[r]]
        pr = M[r]
        for i in range(len(M)):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], pr)]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M, pivots, origin


def rank(vectors: Sequence[Sequence]) -> int:
    return len(row_reduce(vectors)[1]) if vectors else 0


def dependency(vectors: Sequence[Sequence]) -> list[Fraction] | None:
    """A nonzero ``c`` with ``sum c_i vectors[i] == 0``, or ``None`` if independent."""
    if not vectors:
        return None
    n = len(vectors)
    length = len(vectors[0])
    cols = [[vectors[i][j] for i in range(n)] for j in range(length)]
    R, pivots, _ = row_reduce(cols, n)
    free = [j for j in range(n) if j not in pivots]
    if not free:
        return None
    f = free[0]
    c = [Fraction(0)] * n
    c[f] = Fraction(1)
    for row, p in zip(R, pivots):
        c[p] = -row[f]
    return c


def solve(columns: Sequence[Sequence], target: Sequence) -> list:
    """Solve ``sum_i x_i columns[i] == target`` exactly.

    Equations (coordinates) are absorbed in order, so an inconsistency is
    reported at the first coordinate that cannot be met.  Raises
    :class:`InconsistentSystem` or, for dependent columns,
    :class:`SingularSystem`.
    """
    n = len(columns)
    basis: dict[int, list[Fraction]] = {}  # pivot column -> normalised row
    for j in range(len(target)):
        row = [Fraction(columns[i][j]) for i in range(n)] + [Fraction(target[j])]
        for p, prow in basis.items():
            if row[p]:
                f = row[p]
                row = [a - f * b for a, b in zip(row, prow)]
        nz = [i for i in range(n) if row[i]]
        if not nz:
            if row[n]:
                raise InconsistentSystem(j)
            continue
        p = min(nz, key=lambda i: _size(row[i]))
        inv = 1 / row[p]
        row = [x * inv for x in row]
        for q, qrow in basis.items():
            if qrow[p]:
                f = qrow[p]
                basis[q] = [a - f * b for a, b in zip(qrow, row)]
        basis[p] = row
    if len(basis) < n:
        raise SingularSystem(dependency(columns) or [])
    return [normalize(basis[i][n]) for i in range(n)]
