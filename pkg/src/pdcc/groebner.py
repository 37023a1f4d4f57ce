"""Gröbner bases, normal forms and syzygies for submodules of D^(1 x m).

Internally a module element is a dict ``{(pos, exp): coeff}``; the public
:class:`ModuleElement` wraps such a dict together with its width ``m`` and the
number of symbols ``n``.
"""

from __future__ import annotations

import heapq
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .linalg import Echelon
from .polycore import (
    DEFAULT_ORDER,
    ONE,
    ZERO,
    Poly,
    TermOrder,
    exp_add,
    exp_divides,
    exp_lcm,
    exp_sub,
    monomials_of_degree,
)


class ModuleElement:
    """A row vector in D^(1 x m), stored sparsely."""

    __slots__ = ("m", "n", "terms")

    def __init__(self, m: int, n: int, terms: dict | None = None):
        self.m = m
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def from_polys(cls, polys: Sequence[Poly], n: int | None = None) -> "ModuleElement":
        if n is None:
            if not polys:
                raise ValueError("cannot infer n from an empty row")
            n = polys[0].n
        terms = {}
        for pos, p in enumerate(polys):
            if p.n != n:
                raise ValueError("all components must share n")
            for e, c in p.terms.items():
                terms[(pos, e)] = c
        return cls(len(polys), n, terms)

    def components(self) -> list[Poly]:
        comps: list[dict] = [{} for _ in range(self.m)]
        for (pos, e), c in self.terms.items():
            comps[pos][e] = c
        return [Poly._raw(self.n, t) for t in comps]

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> float:
        if not self.terms:
            return float("-inf")
        return max(sum(e) for _, e in self.terms)

    def __eq__(self, other):
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self.m == other.m and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, self.n, frozenset(self.terms.items())))

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        _check_width(self, other)
        return ModuleElement(self.m, self.n, _add(self.terms, other.terms))

    def __neg__(self):
        return ModuleElement(self.m, self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, p: Poly) -> "ModuleElement":
        out: dict = {}
        for e2, c2 in p.terms.items():
            _axpy(out, self.terms, c2, e2)
        return ModuleElement(self.m, self.n, out)

    def __repr__(self):
        return "ModuleElement([" + ", ".join(str(p) for p in self.components()) + "])"


def _check_width(a: ModuleElement, b: ModuleElement):
    if a.m != b.m:
        raise ValueError(f"width mismatch: {a.m} vs {b.m}")
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} vs {b.n}")


# --- low-level dict arithmetic ---------------------------------------------

def _add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, ZERO) + v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def _axpy(acc: dict, x: dict, c, mono) -> None:
    """acc += c * d^mono * x, for module dicts x."""
    for (p, e), v in x.items():
        k = (p, tuple(a + b for a, b in zip(e, mono)))
        nv = acc.get(k, ZERO) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def _paxpy(acc: dict, x: dict, c, mono) -> None:
    """acc += c * d^mono * x, for polynomial dicts x."""
    for e, v in x.items():
        k = tuple(a + b for a, b in zip(e, mono))
        nv = acc.get(k, ZERO) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)


def _trace_combine(coeffs: dict, trans: Sequence[dict]) -> dict:
    """Sum_k coeffs[k] * trans[k] where coeffs[k] is a poly dict and trans[k]
    maps an original index to a poly dict."""
    out: dict = defaultdict(dict)
    for k, q in coeffs.items():
        for i, t in trans[k].items():
            acc = out[i]
            for e1, c1 in q.items():
                _paxpy(acc, t, c1, e1)
    return {i: p for i, p in out.items() if p}


def _rowvec_to_terms(vec: dict) -> dict:
    """{index: polydict} -> module dict {(index, exp): c}."""
    return {(i, e): c for i, p in vec.items() for e, c in p.items()}


def _terms_to_rowvec(terms: dict) -> dict:
    out: dict = defaultdict(dict)
    for (i, e), c in terms.items():
        out[i][e] = c
    return dict(out)


# --- the Buchberger engine -------------------------------------------------

class _Engine:
    """Buchberger's algorithm with optional transformation and syzygy traces."""

    def __init__(self, order: TermOrder, n: int, track: bool, shifts=None):
        self.order = order
        self.n = n
        self.track = track
        self.shifts = shifts
        key = order.key_function()
        cache: dict = {}

        def negkey(t):
            k = cache.get(t)
            if k is None:
                k = cache[t] = tuple(-x for x in key(t))
            return k

        self.key = key
        self.negkey = negkey
        self.G: list[dict] = []
        self.leads: list[tuple] = []
        self.T: list[dict] = []
        self.by_pos: dict = defaultdict(list)
        self.gsyz: list[dict] = []  # syzygies among G, {k: polydict}
        self.osyz: list[dict] = []  # syzygies among the inputs, {i: polydict}

    def lead(self, h: dict):
        return max(h, key=self.key)

    def _shift(self, pos):
        return self.shifts[pos] if self.shifts else 0

    def reduce(self, h: dict, quot: dict | None = None) -> dict:
        """Full reduction of h modulo G; quotients accumulate into quot."""
        h = dict(h)
        negkey = self.negkey
        heap = [(negkey(t), t) for t in h]
        heapq.heapify(heap)
        inheap = set(h)
        rem: dict = {}
        by_pos = self.by_pos
        G = self.G
        leads = self.leads
        while heap:
            _, t = heapq.heappop(heap)
            inheap.discard(t)
            c = h.pop(t, None)
            if c is None:
                continue
            pos, e = t
            k = -1
            for le, idx in by_pos.get(pos, ()):
                if all(a <= b for a, b in zip(le, e)):
                    k = idx
                    break
            if k < 0:
                rem[t] = c
                continue
            lt = leads[k]
            m = tuple(a - b for a, b in zip(e, lt[1]))
            for (gp, ge), gc in G[k].items():
                if (gp, ge) == lt:
                    continue
                tt = (gp, tuple(a + b for a, b in zip(ge, m)))
                v = h.get(tt, ZERO) - c * gc
                if v:
                    h[tt] = v
                    if tt not in inheap:
                        inheap.add(tt)
                        heapq.heappush(heap, (negkey(tt), tt))
                else:
                    h.pop(tt, None)
            if quot is not None:
                qk = quot.setdefault(k, {})
                v = qk.get(m, ZERO) + c
                if v:
                    qk[m] = v
                else:
                    del qk[m]
        return rem

    def _insert(self, r: dict, trans: dict | None) -> int:
        lt = self.lead(r)
        lc = r[lt]
        if lc != 1:
            inv = ONE / lc
            r = {k: v * inv for k, v in r.items()}
            if trans is not None:
                trans = {i: {e: c * inv for e, c in p.items()} for i, p in trans.items()}
        idx = len(self.G)
        self.G.append(r)
        self.leads.append(lt)
        if self.track:
            self.T.append(trans)
        self.by_pos[lt[0]].append((lt[1], idx))
        return idx, lc

    def run(self, gens: list[dict]):
        pairs: list = []
        self._pairs = pairs
        for i, g in enumerate(gens):
            quot = {} if self.track else None
            r = self.reduce(g, quot)
            if self.track:
                rel = {i: {(0,) * self.n: ONE}}
                neg = _trace_combine(quot, self.T) if quot else {}
                for j, p in neg.items():
                    acc = rel.setdefault(j, {})
                    for e, c in p.items():
                        v = acc.get(e, ZERO) - c
                        if v:
                            acc[e] = v
                        else:
                            acc.pop(e, None)
                rel = {j: p for j, p in rel.items() if p}
            if not r:
                if self.track and rel:
                    self.osyz.append(rel)
                continue
            idx, _ = self._insert(r, rel if self.track else None)
            self._add_pairs(idx)
        while pairs:
            _, _, i, j = heapq.heappop(pairs)
            self._process(i, j)
        return self

    def _add_pairs(self, j: int):
        pos, lj = self.leads[j]
        for le, i in self.by_pos[pos]:
            if i == j:
                continue
            L = exp_lcm(le, lj)
            gi, gj = self.G[i], self.G[j]
            if (
                self._single_pos(gi, pos)
                and self._single_pos(gj, pos)
                and all(not (a and b) for a, b in zip(le, lj))
            ):
                # product criterion: the pair reduces to zero, and its syzygy is
                # the Koszul relation
                if self.track:
                    fi = {e: c for (_, e), c in gi.items()}
                    fj = {e: c for (_, e), c in gj.items()}
                    self.gsyz.append({i: fj, j: {e: -c for e, c in fi.items()}})
                continue
            deg = sum(L) + self._shift(pos)
            heapq.heappush(self._pairs, (deg, self.negkey((pos, L)), i, j))

    @staticmethod
    def _single_pos(g: dict, pos: int) -> bool:
        return all(p == pos for p, _ in g)

    def _chain_skip(self, i: int, j: int, pos, L) -> bool:
        li, lj = self.leads[i][1], self.leads[j][1]
        for le, k in self.by_pos[pos]:
            if k == i or k == j:
                continue
            if exp_divides(le, L) and exp_lcm(li, le) != L and exp_lcm(lj, le) != L:
                return True
        return False

    def _process(self, i: int, j: int):
        pos, li = self.leads[i]
        lj = self.leads[j][1]
        L = exp_lcm(li, lj)
        if self._chain_skip(i, j, pos, L):
            return
        ai, aj = exp_sub(L, li), exp_sub(L, lj)
        s: dict = {}
        _axpy(s, self.G[i], ONE, ai)
        _axpy(s, self.G[j], -ONE, aj)
        quot = {} if self.track else None
        r = self.reduce(s, quot)
        if not self.track:
            if r:
                idx, _ = self._insert(r, None)
                self._add_pairs(idx)
            return
        syz = {i: {ai: ONE}}
        syz.setdefault(j, {})
        v = syz[j].get(aj, ZERO) - ONE
        syz[j][aj] = v
        for k, q in quot.items():
            acc = syz.setdefault(k, {})
            for e, c in q.items():
                v = acc.get(e, ZERO) - c
                if v:
                    acc[e] = v
                else:
                    acc.pop(e, None)
        if r:
            trans = {}
            for idx_, coeff, mono in ((i, ONE, ai), (j, -ONE, aj)):
                for o, p in self.T[idx_].items():
                    _paxpy(trans.setdefault(o, {}), p, coeff, mono)
            neg = _trace_combine(quot, self.T)
            for o, p in neg.items():
                _paxpy(trans.setdefault(o, {}), p, -ONE, (0,) * self.n)
            trans = {o: p for o, p in trans.items() if p}
            idx, lc = self._insert(r, trans)
            syz[idx] = {(0,) * self.n: -lc}
            self._add_pairs(idx)
        self.gsyz.append({k: p for k, p in syz.items() if p})

    def input_syzygies(self) -> list[dict]:
        """Generators of the syzygy module of the original inputs."""
        out = list(self.osyz)
        for s in self.gsyz:
            v = _trace_combine(s, self.T)
            if v:
                out.append(v)
        return out


# --- public Gröbner API ----------------------------------------------------

@dataclass
class GroebnerBasis:
    order: TermOrder
    generators: list[ModuleElement]
    reduced: bool
    m: int
    n: int
    num_inputs: int = 0
    _engine: _Engine | None = field(default=None, repr=False)
    _reduced_engine: _Engine | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.generators)


def _common_shape(gens: Sequence[ModuleElement], m: int | None = None, n: int | None = None):
    for g in gens:
        if m is None:
            m, n = g.m, g.n
        elif g.m != m or g.n != n:
            raise ValueError("generators must share width and dimension")
    return m, n


def _run(gens: Sequence[ModuleElement], order: TermOrder, track: bool) -> _Engine:
    m, n = _common_shape(gens)
    terms = [g.terms for g in gens]
    shifts = None
    inferred = infer_shifts(terms, m or 0)
    if inferred is not None:
        shifts = inferred[0]
    return _Engine(order, n or 0, track, shifts).run(terms)


def _reduced_from(engine: _Engine) -> list[dict]:
    """Minimal, tail-reduced, monic basis from a (non-reduced) Gröbner basis."""
    G, leads = engine.G, engine.leads
    keep = []
    for i, (p, e) in enumerate(leads):
        redundant = False
        for j, (q, f) in enumerate(leads):
            if j == i or q != p or not exp_divides(f, e):
                continue
            if f != e or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(i)
    mini = _Engine(engine.order, engine.n, False, engine.shifts)
    for i in keep:
        mini.G.append(G[i])
        mini.leads.append(leads[i])
        mini.by_pos[leads[i][0]].append((leads[i][1], len(mini.G) - 1))
    out = []
    for k in range(len(mini.G)):
        g = mini.G[k]
        lt = mini.leads[k]
        tail = {t: c for t, c in g.items() if t != lt}
        # reduce the tail against all the other elements only
        saved = mini.by_pos[lt[0]]
        mini.by_pos[lt[0]] = [(e, idx) for e, idx in saved if idx != k]
        red = mini.reduce(tail)
        mini.by_pos[lt[0]] = saved
        red[lt] = ONE
        out.append(red)
    out.sort(key=lambda h: engine.key(max(h, key=engine.key)))
    return out


def buchberger(gens: Sequence[ModuleElement], order: TermOrder = DEFAULT_ORDER) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule generated by ``gens``."""
    gens = [g for g in gens]
    m, n = _common_shape(gens)
    if m is None:
        return GroebnerBasis(order, [], True, 0, 0)
    engine = _run(gens, order, track=True)
    red = _reduced_from(engine)
    elems = [ModuleElement(m, n, h) for h in red]
    re = _Engine(order, n, False, engine.shifts)
    for h in red:
        re._insert(h, None)
    return GroebnerBasis(order, elems, True, m, n, len(gens), engine, re)


def normal_form(e: ModuleElement, gb: GroebnerBasis) -> ModuleElement:
    if gb.generators and e.m != gb.m:
        raise ValueError(f"width mismatch: {e.m} vs {gb.m}")
    if not gb.generators:
        return e
    return ModuleElement(e.m, e.n, gb._reduced_engine.reduce(e.terms))


def module_membership(e: ModuleElement, gb: GroebnerBasis) -> bool:
    return normal_form(e, gb).is_zero()


def lift(e: ModuleElement, gb: GroebnerBasis) -> list[Poly] | None:
    """Coefficients λ with e = Σ λ_i gens_i over the original generators, or None."""
    if e.is_zero():
        return [Poly.zero(e.n)] * gb.num_inputs
    if not gb.generators:
        return None
    quot: dict = {}
    r = gb._engine.reduce(e.terms, quot)
    if r:
        return None
    vec = _trace_combine(quot, gb._engine.T)
    return [Poly._raw(e.n, vec.get(i, {})) for i in range(gb.num_inputs)]


def spair_check(gb: GroebnerBasis) -> bool:
    """Re-verify post hoc that every S-pair of the basis reduces to zero."""
    eng = gb._reduced_engine
    if eng is None:
        return True
    for j in range(len(eng.G)):
        pos, lj = eng.leads[j]
        for le, i in eng.by_pos[pos]:
            if i >= j:
                continue
            L = exp_lcm(le, lj)
            s: dict = {}
            _axpy(s, eng.G[i], ONE, exp_sub(L, le))
            _axpy(s, eng.G[j], -ONE, exp_sub(L, lj))
            if eng.reduce(s):
                return False
    return True


def _normalize(h: dict, key) -> dict:
    lt = max(h, key=key)
    lc = h[lt]
    if lc == 1:
        return h
    inv = ONE / lc
    return {k: v * inv for k, v in h.items()}


def syzygies(gens: Sequence[ModuleElement], order: TermOrder = DEFAULT_ORDER) -> list[ModuleElement]:
    """Generators of {λ | Σ λ_i gens_i = 0} via the Schreyer construction.

    The output is made monic and free of zeros and duplicates; it is not
    minimal in general.
    """
    gens = list(gens)
    p = len(gens)
    if p == 0:
        return []
    m, n = _common_shape(gens)
    engine = _run(gens, order, track=True)
    key = DEFAULT_ORDER.key_function()
    seen = set()
    out = []
    for vec in engine.input_syzygies():
        t = _rowvec_to_terms(vec)
        if not t:
            continue
        t = _normalize(t, key)
        h = frozenset(t.items())
        if h in seen:
            continue
        seen.add(h)
        out.append(ModuleElement(p, n, t))
    return out


# --- graded linear algebra -------------------------------------------------

def infer_shifts(rows: Sequence[dict], m: int):
    """Column shifts c and row degrees r with |exp| + c[pos] == r[row] for
    every term, if such a grading exists; otherwise None."""
    cols: list = [None] * m
    rdeg: list = [None] * len(rows)
    col_rows: dict = defaultdict(list)
    for i, r in enumerate(rows):
        for (pos, _) in r:
            col_rows[pos].append(i)
    for start in range(len(rows)):
        if rdeg[start] is not None or not rows[start]:
            continue
        rdeg[start] = 0
        queue = deque([("r", start)])
        while queue:
            kind, idx = queue.popleft()
            if kind == "r":
                for (pos, e) in rows[idx]:
                    want = rdeg[idx] - sum(e)
                    if cols[pos] is None:
                        cols[pos] = want
                        queue.append(("c", pos))
                    elif cols[pos] != want:
                        return None
            else:
                for i in col_rows[idx]:
                    for (pos, e) in rows[i]:
                        if pos != idx:
                            continue
                        want = cols[idx] + sum(e)
                        if rdeg[i] is None:
                            rdeg[i] = want
                            queue.append(("r", i))
                        elif rdeg[i] != want:
                            return None
    # normalise each connected piece so the smallest column shift is 0
    base = min((c for c in cols if c is not None), default=0)
    cols = [0 if c is None else c - base for c in cols]
    rdeg = [None if d is None else d - base for d in rdeg]
    return cols, rdeg


def _homogeneous_degree(terms: dict, shifts) -> int | None:
    degs = {sum(e) + shifts[p] for p, e in terms}
    if len(degs) != 1:
        return None
    return degs.pop()


class GradedSpan:
    """Degree-by-degree linear span of {d^β g} for a homogeneous generating set."""

    def __init__(self, gens: Sequence[dict], shifts, n: int, track: bool = False):
        self.shifts = shifts
        self.n = n
        self.track = track
        self.gens: list[tuple[int, dict]] = []
        self._ech: dict = {}
        self._fed: dict = {}
        for g in gens:
            self.add_generator(g)

    def add_generator(self, g: dict) -> None:
        if not g:
            return
        d = _homogeneous_degree(g, self.shifts)
        if d is None:
            raise ValueError("generator is not homogeneous")
        self.gens.append((d, g))

    def echelon(self, d: int) -> Echelon:
        ech = self._ech.get(d)
        if ech is None:
            ech = self._ech[d] = Echelon(track=self.track)
            self._fed[d] = 0
        for gi in range(self._fed[d], len(self.gens)):
            gd, g = self.gens[gi]
            if gd > d:
                continue
            for beta in monomials_of_degree(self.n, d - gd):
                v: dict = {}
                _axpy(v, g, ONE, beta)
                ech.add(v, label=(gi, beta))
        self._fed[d] = len(self.gens)
        return ech

    def contains(self, v: dict) -> bool:
        if not v:
            return True
        d = _homogeneous_degree(v, self.shifts)
        if d is None:
            raise ValueError("element is not homogeneous for this grading")
        return self.echelon(d).contains(v)

    def express(self, v: dict) -> dict | None:
        """Coefficients {generator index: polydict} with v = Σ c_i g_i, or None."""
        if not v:
            return {}
        d = _homogeneous_degree(v, self.shifts)
        ech = self.echelon(d)
        r, hist = ech.reduce(v, {})
        if r:
            return None
        out: dict = defaultdict(dict)
        for (gi, beta), c in hist.items():
            acc = out[gi]
            nv = acc.get(beta, ZERO) - c
            if nv:
                acc[beta] = nv
            else:
                acc.pop(beta, None)
        return {i: p for i, p in out.items() if p}


def _graded_setup(groups: Sequence[Sequence[dict]], m: int):
    allrows = [r for g in groups for r in g if r]
    inferred = infer_shifts(allrows, m)
    if inferred is None:
        return None
    return inferred[0]


def is_homogeneous_set(*groups: Sequence[ModuleElement]) -> bool:
    m = None
    for g in groups:
        for e in g:
            m = e.m
    if m is None:
        return True
    return _graded_setup([[e.terms for e in g] for g in groups], m) is not None


def _shape_of(*groups):
    m = n = None
    for g in groups:
        for e in g:
            if m is None:
                m, n = e.m, e.n
            elif e.m != m:
                raise ValueError(f"width mismatch: {e.m} vs {m}")
            elif e.n != n:
                raise ValueError(f"dimension mismatch: {e.n} vs {n}")
    return m, n


def contained_in(A: Sequence[ModuleElement], B: Sequence[ModuleElement], method: str = "auto") -> bool:
    """True if every element of A lies in the module generated by B."""
    m, n = _shape_of(A, B)
    if m is None or all(a.is_zero() for a in A):
        return True
    if method in ("auto", "graded"):
        shifts = _graded_setup([[a.terms for a in A], [b.terms for b in B]], m)
        if shifts is not None:
            span = GradedSpan([b.terms for b in B], shifts, n)
            return all(span.contains(a.terms) for a in A)
        if method == "graded":
            raise ValueError("inputs are not homogeneous for a common grading")
    gb = buchberger([b for b in B if not b.is_zero()])
    return all(module_membership(a, gb) for a in A)


def module_equal(A: Sequence[ModuleElement], B: Sequence[ModuleElement], method: str = "auto") -> bool:
    """Mutual membership of generators.

    ``method`` is "groebner", "graded" (exact degree-wise linear algebra, only
    for inputs homogeneous under a common grading) or "auto".
    """
    return contained_in(A, B, method) and contained_in(B, A, method)


def prune_generators(gens: Sequence[ModuleElement], sort_by_degree: bool = True) -> list[int]:
    """Indices of a forward-greedy irredundant subset generating the same module.

    With ``sort_by_degree`` candidates are scanned by increasing degree, which
    for homogeneous input yields a minimal generating set.
    """
    idx = [i for i, g in enumerate(gens) if not g.is_zero()]
    if not idx:
        return []
    m, n = gens[idx[0]].m, gens[idx[0]].n
    shifts = _graded_setup([[g.terms for g in gens]], m)
    if shifts is not None:
        degs = {i: _homogeneous_degree(gens[i].terms, shifts) for i in idx}
        if sort_by_degree:
            idx.sort(key=lambda i: (degs[i], i))
        span = GradedSpan([], shifts, n)
        kept = []
        for i in idx:
            if not span.contains(gens[i].terms):
                kept.append(i)
                span.add_generator(gens[i].terms)
        return sorted(kept)
    if sort_by_degree:
        idx.sort(key=lambda i: (gens[i].degree(), i))
    kept: list[int] = []
    gb = None
    for i in idx:
        if gb is not None and module_membership(gens[i], gb):
            continue
        kept.append(i)
        gb = buchberger([gens[k] for k in kept])
    return sorted(kept)
