"""Symbols, prolongations, Spencer δ-cohomology and Janet boards.

Columns of a symbol matrix are pairs (k, μ): the unknown index k (0-based)
and a multi-index μ; the layout is k-major with μ in descending degrevlex
order.  Exterior forms use strictly increasing 0-based index tuples I and
tensor bases are (form index)-major.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from gmpy2 import mpq

from .diffop import OpMatrix
from .linalg import Echelon, nullspace, rank
from .polycore import Poly, monomials_of_degree


class SymbolError(ValueError):
    pass


def symbol_columns(n: int, m: int, q: int) -> list[tuple]:
    if q < 0:
        return []
    mus = monomials_of_degree(n, q)
    return [(k, mu) for k in range(m) for mu in mus]


def exterior_basis(n: int, s: int) -> list[tuple]:
    if s < 0 or s > n:
        return []
    return list(combinations(range(n), s))


@dataclass
class SymbolSystem:
    """Linear equations Σ a^{τμ}_k v^k_μ = 0 with |μ| = q; eqns[τ] = {(k, μ): a}."""

    n: int
    m: int
    q: int
    eqns: list[dict]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def columns(self, level: int | None = None) -> list[tuple]:
        return symbol_columns(self.n, self.m, self.q if level is None else level)

    def as_polys(self) -> list[list[Poly]]:
        """Each equation as a row of homogeneous polynomials, one per unknown."""
        out = []
        for eq in self.eqns:
            row: list[dict] = [{} for _ in range(self.m)]
            for (k, mu), c in eq.items():
                row[k][mu] = c
            out.append([Poly(self.n, t) for t in row])
        return out

    def dense(self) -> list[list[mpq]]:
        cols = self.columns()
        return [[eq.get(c, mpq(0)) for c in cols] for eq in self.eqns]


def symbol_of(op: OpMatrix, q: int | None = None) -> SymbolSystem:
    """Top-order part of an operator: degree-q parts of every entry."""
    order = op.order()
    if q is None:
        q = order
    if q != order:
        raise SymbolError(f"q={q} does not match the operator order {order}")
    eqns = []
    for row in op.entries:
        eq = {}
        for k, p in enumerate(row):
            for mu, c in p.terms.items():
                if sum(mu) == q:
                    eq[(k, mu)] = c
        eqns.append(eq)
    return SymbolSystem(op.n, op.cols, q, eqns)


def symbol_from_polys(n: int, m: int, q: int, rows: Sequence[Sequence[Poly]]) -> SymbolSystem:
    eqns = []
    for row in rows:
        eq = {}
        for k, p in enumerate(row):
            for mu, c in p.terms.items():
                if sum(mu) != q:
                    raise SymbolError("symbol rows must be homogeneous of degree q")
                eq[(k, mu)] = c
        eqns.append(eq)
    return SymbolSystem(n, m, q, eqns)


# --- prolongation ----------------------------------------------------------

@dataclass
class SymbolBasis:
    r: int
    dim: int
    basis: list[dict]
    columns: list[tuple]
    free_columns: list[tuple] = field(default_factory=list)

    def coordinates(self, w: dict) -> list[mpq]:
        """Coordinates of w ∈ g in this basis (read off at the free columns)."""
        return [w.get(c, mpq(0)) for c in self.free_columns]


def prolonged_equations(sys: SymbolSystem, r: int) -> list[dict]:
    if r < 0:
        return []
    out = []
    for eq in sys.eqns:
        for nu in monomials_of_degree(sys.n, r):
            out.append({(k, tuple(a + b for a, b in zip(mu, nu))): c for (k, mu), c in eq.items()})
    return out


def prolong(sys: SymbolSystem, r: int) -> SymbolBasis:
    """Basis of g_{q+r}; for q+r < q the full space S_{q+r}T*⊗E is returned."""
    key = ("prolong", r)
    if key in sys._cache:
        return sys._cache[key]
    level = sys.q + r
    cols = symbol_columns(sys.n, sys.m, level)
    if r < 0:
        basis = [{c: mpq(1)} for c in cols]
        free = list(cols)
    else:
        eqs = prolonged_equations(sys, r)
        order = {c: i for i, c in enumerate(cols)}
        idx_eqs = [{order[c]: v for c, v in e.items()} for e in eqs]
        ns, free_idx = nullspace(idx_eqs, list(range(len(cols))), with_free=True)
        basis = [{cols[i]: v for i, v in vec.items()} for vec in ns]
        free = [cols[i] for i in free_idx]
    sb = SymbolBasis(r, len(basis), basis, cols, free)
    sys._cache[key] = sb
    return sb


# --- δ-maps ----------------------------------------------------------------

def _wedge_sign(i: int, I: tuple):
    """dx^i ∧ dx^I = sign · dx^J; returns (sign, J) or (0, None)."""
    if i in I:
        return 0, None
    pos = sum(1 for x in I if x < i)
    J = tuple(sorted(I + (i,)))
    return (-1) ** pos, J


def _delta_image(n: int, I: tuple, vec: dict) -> dict:
    """δ(dx^I ⊗ v) in ambient coordinates {(J, k, ν): c}."""
    out: dict = {}
    for (k, lam), c in vec.items():
        for i in range(n):
            if lam[i] == 0:
                continue
            sign, J = _wedge_sign(i, I)
            if not sign:
                continue
            nu = lam[:i] + (lam[i] - 1,) + lam[i + 1:]
            key = (J, k, nu)
            v = out.get(key, mpq(0)) + sign * c
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def _delta_images(sys: SymbolSystem, s: int, r: int) -> list[dict]:
    """Images of the basis of Λ^s⊗g_{q+r+1} under δ, in ambient coordinates."""
    src = prolong(sys, r + 1)
    return [_delta_image(sys.n, I, b) for I in exterior_basis(sys.n, s) for b in src.basis]


@dataclass
class DeltaMap:
    s: int
    r: int
    matrix: list[list[mpq]]  # rows: target basis, columns: source basis
    source_dim: int
    target_dim: int


def delta_map(sys: SymbolSystem, s: int, r: int) -> DeltaMap:
    """Matrix of δ: Λ^s⊗g_{q+r+1} -> Λ^{s+1}⊗g_{q+r} in the tensor bases."""
    if s < 0 or s > sys.n:
        raise SymbolError("form degree out of range")
    tgt = prolong(sys, r)
    tforms = exterior_basis(sys.n, s + 1)
    images = _delta_images(sys, s, r)
    rows = []
    for J in tforms:
        for c in tgt.free_columns:
            rows.append([img.get((J, c[0], c[1]), mpq(0)) for img in images])
    return DeltaMap(s, r, rows, len(images), len(tforms) * tgt.dim)


def compose_delta(a: DeltaMap, b: DeltaMap) -> list[list[mpq]]:
    """Matrix product a·b (apply b first)."""
    if not b.matrix or not a.matrix:
        return [[mpq(0)] * b.source_dim for _ in range(a.target_dim)]
    inner = len(b.matrix)
    return [
        [sum((a.matrix[i][k] * b.matrix[k][j] for k in range(inner)), mpq(0)) for j in range(b.source_dim)]
        for i in range(a.target_dim)
    ]


def _delta_rank(sys: SymbolSystem, s: int, r: int) -> int:
    """rank of δ on Λ^s⊗g_{q+r+1}."""
    if s < 0 or s >= sys.n:
        return 0
    key = ("rank", s, r)
    if key not in sys._cache:
        sys._cache[key] = rank(_delta_images(sys, s, r))
    return sys._cache[key]


@dataclass
class CohomologyReport:
    s: int
    r: int
    dim_B: int
    dim_Z: int
    dim_H: int
    dim_C: int

    def to_json_obj(self) -> dict:
        return {"s": self.s, "r": self.r, "dim_C": self.dim_C, "dim_B": self.dim_B, "dim_Z": self.dim_Z, "dim_H": self.dim_H}


def cohomology(sys: SymbolSystem, s: int, r: int) -> CohomologyReport:
    """δ-cohomology at Λ^s⊗g_{q+r}."""
    if s < 0 or s > sys.n:
        raise SymbolError("form degree out of range")
    dim_c = comb(sys.n, s) * prolong(sys, r).dim
    B = _delta_rank(sys, s - 1, r) if s >= 1 else 0
    Z = dim_c - _delta_rank(sys, s, r - 1)
    return CohomologyReport(s, r, B, Z, Z - B, dim_c)


def vanishing_level(sys: SymbolSystem, r_max: int) -> int | None:
    for r in range(r_max + 1):
        if prolong(sys, r).dim == 0:
            return r
    return None


def is_s_acyclic(sys: SymbolSystem, s: int, r_max: int, start: int = 0) -> bool:
    """H^j at Λ^j⊗g_{q+start+r} vanishes for 1 <= j <= s and 0 <= r <= r_max.

    Raises SymbolError unless g_{q+start+r_max} = 0, since the statement
    "for all r" is only decidable once the symbol has vanished.
    """
    if prolong(sys, start + r_max).dim != 0:
        raise SymbolError(
            f"g_{sys.q + start + r_max} is not zero; cannot certify acyclicity for all r"
        )
    for r in range(r_max + 1):
        for j in range(1, s + 1):
            if j > sys.n:
                break
            if cohomology(sys, j, start + r).dim_H:
                return False
    return True


# --- Janet boards ----------------------------------------------------------

def mu_class(mu: tuple) -> int:
    """1-based index of the first nonzero entry."""
    for i, x in enumerate(mu):
        if x:
            return i + 1
    return len(mu)


@dataclass
class JanetBoard:
    n: int
    m: int
    q: int
    solved_equations: list[tuple]  # (class, (k, μ))
    beta: list[int]  # beta[i-1] = β^i_q
    alpha: list[int]
    coordinate_change: list[list[mpq]]
    involutive: bool
    attempts_used: int
    dim_next: int

    def render(self) -> str:
        lines = []
        for cls, _ in self.solved_equations:
            cells = [str(i) if i <= cls else "." for i in range(1, self.n + 1)]
            lines.append(" ".join(cells))
        return "\n".join(lines)

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "q": self.q,
            "solved_equations": [
                {"class": c, "unknown": k + 1, "mu": list(mu)} for c, (k, mu) in self.solved_equations
            ],
            "beta": self.beta,
            "alpha": self.alpha,
            "coordinate_change": [[str(x) for x in row] for row in self.coordinate_change],
            "involutive": self.involutive,
            "attempts_used": self.attempts_used,
            "dim_g_q_plus_1": self.dim_next,
            "board": self.render(),
        }


def change_coordinates(sys: SymbolSystem, A: Sequence[Sequence]) -> SymbolSystem:
    """Substitute d_i -> Σ_j A[j][i] d̄_j in every symbol polynomial."""
    n = sys.n
    lin = [
        sum((Poly.var(n, j + 1) * mpq(A[j][i]) for j in range(n)), Poly.zero(n)) for i in range(n)
    ]
    rows = []
    for row in sys.as_polys():
        new = []
        for p in row:
            acc = Poly.zero(n)
            for mu, c in p.terms.items():
                term = Poly.constant(n, c)
                for i, e in enumerate(mu):
                    if e:
                        term = term * lin[i] ** e
                acc = acc + term
            new.append(acc)
        rows.append(new)
    return symbol_from_polys(n, sys.m, sys.q, rows)


def _board_data(sys: SymbolSystem):
    n = sys.n
    cols = sys.columns()
    # class-n columns first
    order = sorted(cols, key=lambda c: (-mu_class(c[1]), cols.index(c)))
    index = {c: i for i, c in enumerate(order)}
    ech = Echelon()
    for eq in sys.eqns:
        ech.add({index[c]: v for c, v in eq.items()})
    pivots = sorted(ech.pivots)
    solved = [(mu_class(order[p][1]), order[p]) for p in pivots]
    beta = [0] * n
    for cls, _ in solved:
        beta[cls - 1] += 1
    return solved, beta


def _random_gl(n: int, rng: random.Random) -> list[list[mpq]]:
    while True:
        A = [[mpq(rng.randint(-5, 5)) for _ in range(n)] for _ in range(n)]
        if rank([{j: x for j, x in enumerate(r) if x} for r in A]) == n:
            return A


def janet_board(sys: SymbolSystem, attempts: int = 10, seed: int = 0) -> JanetBoard:
    """Janet board in coordinates maximising (β^n, ..., β^1) lexicographically.

    The identity is tried first, then seeded random GL(n, Q) changes; the
    search stops after 3 consecutive attempts that do not improve the best
    board, or after ``attempts`` random trials.
    """
    if attempts < 1:
        raise ValueError("attempts must be >= 1")
    n = sys.n
    rng = random.Random(seed)
    ident = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
    best_A = ident
    best_solved, best_beta = _board_data(sys)
    stale = 0
    used = 0
    for _ in range(attempts):
        if stale >= 3:
            break
        used += 1
        A = _random_gl(n, rng)
        solved, beta = _board_data(change_coordinates(sys, A))
        if beta[::-1] > best_beta[::-1]:
            best_A, best_solved, best_beta = A, solved, beta
            stale = 0
        else:
            stale += 1
    q, m = sys.q, sys.m
    alpha = [m * comb(q + n - i - 1, n - i) - best_beta[i - 1] for i in range(1, n + 1)]
    dim_next = prolong(sys, 1).dim
    involutive = dim_next == sum(i * alpha[i - 1] for i in range(1, n + 1))
    solved_sorted = sorted(best_solved, key=lambda t: -t[0])
    return JanetBoard(n, m, q, solved_sorted, best_beta, alpha, best_A, involutive, used, dim_next)


def dim_prediction(sys: SymbolSystem, board: JanetBoard, r: int) -> int:
    """Σ_i C(r+i-1, r) α^i; only valid for involutive symbols."""
    if not board.involutive:
        raise SymbolError("dimension formula requires an involutive symbol")
    return sum(comb(r + i - 1, r) * board.alpha[i - 1] for i in range(1, sys.n + 1))


def janet_sequence_ranks(board: JanetBoard) -> list[int]:
    """Fiber dimensions [m, F_0, F_1, ...] of the Janet sequence of an involutive operator."""
    nm = [board.n - cls for cls, _ in board.solved_equations]
    out = [board.m]
    for r in range(board.n):
        v = sum(comb(x, r) for x in nm)
        if v == 0:
            break
        out.append(v)
    return out
