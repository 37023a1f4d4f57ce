"""Sparse exact Gaussian elimination over Q.

Vectors are dicts ``{column: mpq}`` with no zero values.  Columns may be any
mutually comparable hashables; elimination proceeds in increasing column order.
"""

from __future__ import annotations

import heapq
from typing import Hashable, Iterable, Sequence

from gmpy2 import mpq

ZERO = mpq(0)


class Echelon:
    """Incrementally built row echelon form.

    Each stored row is normalised so that its smallest column (the pivot) has
    coefficient 1.  With ``track=True`` every stored row also remembers which
    combination of inserted vectors produced it, so dependencies can be read off.
    """

    def __init__(self, track: bool = False):
        self.pivots: dict = {}
        self.track = track
        self.history: dict = {}
        self._count = 0

    def __len__(self):
        return len(self.pivots)

    def reduce(self, v: dict, hist: dict | None = None):
        """Reduce v against the stored rows; returns (remainder, history)."""
        v = dict(v)
        pivots = self.pivots
        heap = list(v)
        heapq.heapify(heap)
        seen = set(heap)
        while heap:
            c = heapq.heappop(heap)
            seen.discard(c)
            f = v.get(c)
            if f is None:
                continue
            row = pivots.get(c)
            if row is None:
                continue
            for col, x in row.items():
                nv = v.get(col, ZERO) - f * x
                if nv:
                    if col not in v and col not in seen:
                        heapq.heappush(heap, col)
                        seen.add(col)
                    v[col] = nv
                else:
                    v.pop(col, None)
            if hist is not None:
                for k, x in self.history[c].items():
                    nv = hist.get(k, ZERO) - f * x
                    if nv:
                        hist[k] = nv
                    else:
                        hist.pop(k, None)
        return v, hist

    def add(self, v: dict, label: Hashable | None = None) -> bool:
        """Insert v; returns False (and stores nothing) if v is dependent."""
        hist = None
        if self.track:
            label = self._count if label is None else label
            hist = {label: mpq(1)}
        self._count += 1
        r, hist = self.reduce(v, hist)
        if not r:
            self.last_dependency = hist
            return False
        p = min(r)
        f = r[p]
        if f != 1:
            inv = 1 / f
            r = {c: x * inv for c, x in r.items()}
            if hist is not None:
                hist = {k: x * inv for k, x in hist.items()}
        self.pivots[p] = r
        if hist is not None:
            self.history[p] = hist
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)[0]


def rank(rows: Iterable[dict]) -> int:
    e = Echelon()
    for r in rows:
        e.add(r)
    return len(e)


def dense_to_sparse(rows: Sequence[Sequence]) -> list[dict]:
    return [{j: mpq(x) for j, x in enumerate(r) if x} for r in rows]


def rref(rows: Iterable[dict]) -> tuple[list, dict]:
    """Reduced row echelon form; returns (sorted pivot columns, {pivot: row})."""
    e = Echelon()
    for r in rows:
        e.add(r)
    piv = sorted(e.pivots)
    out = {p: dict(e.pivots[p]) for p in piv}
    for p in reversed(piv):
        row = out[p]
        for q in piv:
            if q >= p:
                break
            other = out[q]
            f = other.get(p)
            if f:
                for c, x in row.items():
                    nv = other.get(c, ZERO) - f * x
                    if nv:
                        other[c] = nv
                    else:
                        other.pop(c, None)
    return piv, out


def nullspace(rows: Iterable[dict], columns: Sequence, with_free: bool = False):
    """Basis of {x : row . x = 0 for all rows}, one vector per free column.

    Each basis vector has coefficient 1 at its free column and 0 at the other
    free columns; ``columns`` lists the full column set in elimination order.
    """
    piv, out = rref(rows)
    pivset = set(piv)
    basis = []
    free = []
    for f in columns:
        if f in pivset:
            continue
        free.append(f)
        vec = {f: mpq(1)}
        for p in piv:
            x = out[p].get(f)
            if x:
                vec[p] = -x
        basis.append(vec)
    return (basis, free) if with_free else basis


def dense_rank(matrix: Sequence[Sequence]) -> int:
    return rank(dense_to_sparse(matrix))


def mat_mul_dense(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [
        [sum((a[i][k] * b[k][j] for k in range(inner)), ZERO) for j in range(cols)]
        for i in range(len(a))
    ]
