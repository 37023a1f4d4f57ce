"""Operator matrices over D = Q[d1..dn]: composition, adjoint, rank, CC."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .groebner import (
    ModuleElement,
    buchberger,
    module_equal,
    module_membership,
    prune_generators,
    syzygies,
)
from .linalg import rank as sparse_rank
from .polycore import (
    DEFAULT_ORDER,
    Poly,
    TermOrder,
    negate_variables,
    poly_divexact,
    poly_from_json,
    poly_to_json,
)


class MatrixFormatError(ValueError):
    """Raised for malformed OpMatrix JSON; ``path`` locates the first problem."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.message = message
        self.path = path


class OpMatrix:
    """p x m matrix of polynomials; rows are equations, columns are unknowns."""

    __slots__ = ("n", "rows", "cols", "entries")

    def __init__(self, n: int, entries: Sequence[Sequence[Poly]], cols: int | None = None):
        self.n = n
        self.entries = tuple(tuple(r) for r in entries)
        self.rows = len(self.entries)
        if cols is None:
            if not self.entries:
                raise ValueError("cols must be given for an empty matrix")
            cols = len(self.entries[0])
        self.cols = cols
        for r in self.entries:
            if len(r) != cols:
                raise ValueError("ragged matrix")
            for p in r:
                if p.n != n:
                    raise ValueError("entry dimension mismatch")

    # constructors
    @classmethod
    def zeros(cls, n: int, rows: int, cols: int) -> "OpMatrix":
        return cls(n, [[Poly.zero(n)] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int, size: int) -> "OpMatrix":
        return cls(
            n,
            [[Poly.constant(n, 1 if i == j else 0) for j in range(size)] for i in range(size)],
            size,
        )

    @classmethod
    def from_module_elements(cls, elems: Sequence[ModuleElement], m: int, n: int) -> "OpMatrix":
        return cls(n, [e.components() for e in elems], m)

    def row_elements(self) -> list[ModuleElement]:
        return [ModuleElement.from_polys(r, self.n) for r in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, OpMatrix):
            return NotImplemented
        return (self.n, self.rows, self.cols, self.entries) == (
            other.n,
            other.rows,
            other.cols,
            other.entries,
        )

    def __hash__(self):
        return hash((self.n, self.rows, self.cols, self.entries))

    def is_zero(self) -> bool:
        return all(p.is_zero() for r in self.entries for p in r)

    def order(self) -> int:
        """Maximal total degree of an entry (0 for the zero matrix)."""
        degs = [p.degree() for r in self.entries for p in r if p]
        return int(max(degs)) if degs else 0

    def row_orders(self) -> list[int]:
        out = []
        for r in self.entries:
            degs = [p.degree() for p in r if p]
            out.append(int(max(degs)) if degs else 0)
        return out

    def select_rows(self, idx: Sequence[int]) -> "OpMatrix":
        return OpMatrix(self.n, [self.entries[i] for i in idx], self.cols)

    def stack(self, other: "OpMatrix") -> "OpMatrix":
        if other.cols != self.cols or other.n != self.n:
            raise ValueError("shape mismatch for stacking")
        return OpMatrix(self.n, self.entries + other.entries, self.cols)

    def is_row_homogeneous(self) -> bool:
        """Each row's nonzero entries share one total degree."""
        for r in self.entries:
            degs = set()
            for p in r:
                for e in p.terms:
                    degs.add(sum(e))
            if len(degs) > 1:
                return False
        return True

    def __repr__(self):
        return f"OpMatrix(n={self.n}, {self.rows}x{self.cols})"

    def to_text(self) -> str:
        return "\n".join("[" + ", ".join(str(p) for p in r) + "]" for r in self.entries)

    # JSON
    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[poly_to_json(p) for p in r] for r in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj) -> "OpMatrix":
        if not isinstance(obj, dict):
            raise MatrixFormatError("expected an object", "$")
        for k in ("n", "rows", "cols", "entries"):
            if k not in obj:
                raise MatrixFormatError(f"missing key {k!r}", "$")
        n, rows, cols = obj["n"], obj["rows"], obj["cols"]
        for k, v in (("n", n), ("rows", rows), ("cols", cols)):
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise MatrixFormatError("expected a non-negative integer", f"$.{k}")
        ent = obj["entries"]
        if not isinstance(ent, list) or len(ent) != rows:
            raise MatrixFormatError(f"expected {rows} rows", "$.entries")
        out = []
        for i, r in enumerate(ent):
            if not isinstance(r, list) or len(r) != cols:
                raise MatrixFormatError(f"expected {cols} entries", f"$.entries[{i}]")
            row = []
            for j, p in enumerate(r):
                path = f"$.entries[{i}][{j}]"
                if not isinstance(p, list):
                    raise MatrixFormatError("expected a list of terms", path)
                for t, term in enumerate(p):
                    if (
                        not isinstance(term, list)
                        or len(term) != 2
                        or not isinstance(term[0], list)
                        or len(term[0]) != 2
                        or not all(isinstance(x, int) for x in term[0])
                        or not isinstance(term[1], list)
                        or not all(isinstance(x, int) and x >= 0 for x in term[1])
                    ):
                        raise MatrixFormatError(
                            "term must be [[num, den], [e1, ..., en]]", f"{path}[{t}]"
                        )
                    if term[0][1] == 0:
                        raise MatrixFormatError("zero denominator", f"{path}[{t}]")
                    if len(term[1]) != n:
                        raise MatrixFormatError(f"exponent must have length {n}", f"{path}[{t}]")
                row.append(poly_from_json(p, n))
            out.append(row)
        return cls(n, out, cols)

    @classmethod
    def from_json(cls, text: str) -> "OpMatrix":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
        return cls.from_json_obj(obj)


def _check_same_n(A: OpMatrix, B: OpMatrix):
    if A.n != B.n:
        raise ValueError(f"dimension mismatch: {A.n} vs {B.n}")


def compose(A: OpMatrix, B: OpMatrix) -> OpMatrix:
    """Matrix product A*B (apply B first, then A)."""
    _check_same_n(A, B)
    if A.cols != B.rows:
        raise ValueError(f"shape mismatch: {A.rows}x{A.cols} times {B.rows}x{B.cols}")
    n = A.n
    out = []
    for i in range(A.rows):
        row = []
        for j in range(B.cols):
            acc = Poly.zero(n)
            for k in range(A.cols):
                a = A.entries[i][k]
                if a:
                    b = B.entries[k][j]
                    if b:
                        acc = acc + a * b
            row.append(acc)
        out.append(row)
    return OpMatrix(n, out, B.cols)


def adjoint(A: OpMatrix) -> OpMatrix:
    """Formal adjoint: transpose and substitute d -> -d."""
    return OpMatrix(
        A.n,
        [[negate_variables(A.entries[t][k]) for t in range(A.rows)] for k in range(A.cols)],
        A.rows,
    )


# --- generic rank ----------------------------------------------------------

@dataclass
class RankReport:
    rank: int
    witness_point: list
    confirmed_by_groebner: bool = False
    method: str = "evaluation"


def _rank_at(A: OpMatrix, point) -> int:
    rows = []
    for r in A.entries:
        v = {}
        for j, p in enumerate(r):
            x = p.evaluate(point)
            if x:
                v[j] = x
        rows.append(v)
    return sparse_rank(rows)


def fraction_field_rank(A: OpMatrix) -> int:
    """Rank over Q(d) by fraction-free (Bareiss) elimination with Poly entries."""
    M = [list(r) for r in A.entries]
    rows, cols = A.rows, A.cols
    n = A.n
    prev = Poly.constant(n, 1)
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if M[i][c]:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                num = M[r][c] * M[i][j] - M[i][c] * M[r][j]
                M[i][j] = poly_divexact(num, prev)
            M[i][c] = Poly.zero(n)
        prev = M[r][c]
        r += 1
        if r == rows:
            break
    return r


def generic_rank(A: OpMatrix, seed: int = 0, confirm_with_groebner: bool = False) -> RankReport:
    """Rank of A over Q(d1..dn).

    Evaluates at two seeded random rational points; if they disagree the rank
    is recomputed by fraction-free elimination over D.
    """
    rng = random.Random(seed)
    n = A.n

    def point():
        return [mpq(rng.randint(-1000, 1000), rng.randint(1, 97)) for _ in range(n)]

    p1, p2 = point(), point()
    r1, r2 = _rank_at(A, p1), _rank_at(A, p2)
    if r1 == r2:
        report = RankReport(r1, p1)
    else:
        report = RankReport(fraction_field_rank(A), max((p1, r1), (p2, r2), key=lambda t: t[1])[0], method="fraction-field")
    if confirm_with_groebner:
        report.confirmed_by_groebner = fraction_field_rank(A) == report.rank
    return report


# --- trimming and compatibility conditions ---------------------------------

@dataclass
class TrimResult:
    matrix: OpMatrix
    kept: list[int]
    dropped: list[int]
    certified: bool


def trim_rows_report(A: OpMatrix, certify: bool = True) -> TrimResult:
    """Forward-greedy scan keeping a row iff it is not generated by the rows kept so far."""
    elems = A.row_elements()
    kept = prune_generators(elems, sort_by_degree=False)
    dropped = [i for i in range(A.rows) if i not in set(kept)]
    out = A.select_rows(kept)
    certified = module_equal(out.row_elements(), elems) if certify else False
    return TrimResult(out, kept, dropped, certified)


def trim_rows(A: OpMatrix) -> OpMatrix:
    return trim_rows_report(A, certify=False).matrix


def compatibility_conditions(
    A: OpMatrix, order: TermOrder = DEFAULT_ORDER, prune: bool = True
) -> OpMatrix:
    """Generating CC of A: rows λ with λ·A = 0 generating the whole left kernel.

    The Schreyer syzygies are pruned to an irredundant generating set (minimal
    when A is homogeneous).
    """
    elems = A.row_elements()
    syz = syzygies(elems, order) if A.rows else []
    if prune and syz:
        syz = [syz[i] for i in prune_generators(syz)]
    return OpMatrix.from_module_elements(syz, A.rows, A.n)


def row_module_equal(A: OpMatrix, B: OpMatrix) -> bool:
    if A.cols != B.cols:
        raise ValueError(f"width mismatch: {A.cols} vs {B.cols}")
    return module_equal(A.row_elements(), B.row_elements())


def row_in_module(row: Sequence[Poly], A: OpMatrix) -> bool:
    e = ModuleElement.from_polys(row, A.n)
    return module_membership(e, buchberger(A.row_elements()))
