"""Sparse exact Gaussian elimination over Q or Q(q).

Vectors are dicts from hashable column keys to field elements.  Rows are
kept in fully reduced echelon form: each pivot column is zero in every other
row, so reduction is a single pass in any order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Tuple

from .coeff import RatFunc, is_zero

Vector = Dict[Hashable, object]


def _size(c) -> int:
    if isinstance(c, RatFunc):
        return len(c.num.coeffs) + len(c.den.coeffs)
    return 1


def inverse(c):
    return Fraction(1, c) if isinstance(c, int) else 1 / c


def axpy(v: Vector, a, w: Vector) -> None:
    """v += a * w, in place, dropping zeros."""
    for k, c in w.items():
        x = v.get(k)
        x = a * c if x is None else x + a * c
        if is_zero(x):
            v.pop(k, None)
        else:
            v[k] = x


class Echelon:
    """Reduced row echelon basis of a subspace.

    Each row optionally carries a ``tag`` vector that is transformed along
    with it; this records how rows were combined from inserted vectors.
    """

    def __init__(self, order=None):
        self.rows: Dict[Hashable, Vector] = {}
        self.tags: Dict[Hashable, Vector] = {}
        # Column ordering only breaks ties between equally small pivots.
        self._order = order or (lambda k: k)

    def __len__(self):
        return len(self.rows)

    def copy(self) -> "Echelon":
        e = Echelon(self._order)
        e.rows = {p: dict(r) for p, r in self.rows.items()}
        e.tags = {p: dict(t) for p, t in self.tags.items()}
        return e

    def reduce(self, v: Vector, tag: Optional[Vector] = None) -> Tuple[Vector, Vector]:
        v = dict(v)
        tag = dict(tag) if tag is not None else {}
        for p, row in self.rows.items():
            c = v.get(p)
            if c is not None:
                axpy(v, -c, row)
                if self.tags.get(p):
                    axpy(tag, -c, self.tags[p])
        return v, tag

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)[0]

    def insert(self, v: Vector, tag: Optional[Vector] = None) -> Tuple[bool, Vector]:
        """Add ``v``; return (added, residual tag when v was dependent)."""
        r, t = self.reduce(v, tag)
        if not r:
            return False, t
        p = min(r, key=lambda k: (_size(r[k]), self._order(k)))
        inv = inverse(r[p])
        r = {k: c * inv for k, c in r.items()}
        t = {k: c * inv for k, c in t.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c is not None:
                axpy(row, -c, r)
                if t:
                    qt = self.tags.setdefault(q, {})
                    axpy(qt, -c, t)
        self.rows[p] = r
        self.tags[p] = t
        return True, {}

    def basis(self) -> List[Vector]:
        return [dict(r) for r in self.rows.values()]


def rank(vectors: Iterable[Vector]) -> int:
    e = Echelon()
    for v in vectors:
        e.insert(v)
    return len(e)


def kernel(vectors: List[Vector]) -> List[Vector]:
    """Basis of linear relations among ``vectors``; each relation maps index -> coefficient."""
    e = Echelon()
    out = []
    for i, v in enumerate(vectors):
        added, t = e.insert(v, {i: Fraction(1)})
        if not added:
            out.append({k: c for k, c in t.items() if not is_zero(c)})
    return out


def invert(matrix: List[List[object]]) -> List[List[object]]:
    """Inverse of a square matrix by Gauss-Jordan elimination.

    Raises ``ZeroDivisionError`` when the matrix is singular.
    """
    n = len(matrix)
    a = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not is_zero(a[r][col])), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = inverse(a[col][col])
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and not is_zero(a[r][col]):
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def matrix_rank(matrix: List[List[object]]) -> int:
    return rank({j: c for j, c in enumerate(row) if not is_zero(c)} for row in matrix)
