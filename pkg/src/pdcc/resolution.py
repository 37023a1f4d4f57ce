"""Free resolutions by iterated compatibility conditions, with graded minimization."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .diffop import OpMatrix, compose, trim_rows_report
from .groebner import (
    GradedSpan,
    ModuleElement,
    _graded_setup,
    buchberger,
    contained_in,
    lift,
    module_equal,
    prune_generators,
    syzygies,
)
from .polycore import DEFAULT_ORDER, Poly, TermOrder

log = logging.getLogger(__name__)


class ResolutionError(RuntimeError):
    pass


@dataclass
class JunctionCertificate:
    """Exactness witness at one junction.

    ``syzygies`` generate the syzygy module of ``step`` rows (Schreyer);
    ``syz_in_next[k]`` expresses syzygy k in the rows of the next step and
    ``next_in_syz[k]`` expresses row k of the next step in the syzygies.
    """

    index: int
    syzygies: OpMatrix
    syz_in_next: OpMatrix
    next_in_syz: OpMatrix


@dataclass
class FreeResolution:
    steps: list[OpMatrix]
    betti: list[int]
    orders: list[int]
    minimized: bool
    certificates: list[JunctionCertificate] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_json_obj(self, certificates: bool = False) -> dict:
        out = {
            "steps": [s.to_json_obj() for s in self.steps],
            "betti": list(self.betti),
            "orders": list(self.orders),
            "minimized": self.minimized,
        }
        if certificates:
            out["certificates"] = [
                {
                    "junction": c.index,
                    "syzygies": c.syzygies.to_json_obj(),
                    "syz_in_next": c.syz_in_next.to_json_obj(),
                    "next_in_syz": c.next_in_syz.to_json_obj(),
                }
                for c in self.certificates
            ]
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def lead_term(e: ModuleElement, order: TermOrder):
    key = order.key_function()
    return max(e.terms, key=key)


def schreyer_order(rows: Sequence[ModuleElement], base: TermOrder) -> TermOrder:
    leads = tuple(lead_term(r, base) for r in rows)
    return TermOrder(base.kind, "schreyer", leads, base)


def _is_graded(A: OpMatrix) -> bool:
    return _graded_setup([[e.terms for e in A.row_elements()]], A.cols) is not None


# --- minimization ----------------------------------------------------------

class MinimizeResult(NamedTuple):
    prev: OpMatrix | None
    step: OpMatrix
    next: OpMatrix | None
    minimized: bool


def _find_unit(M: OpMatrix):
    zero = (0,) * M.n
    for i, row in enumerate(M.entries):
        for j, p in enumerate(row):
            if p and len(p.terms) == 1 and zero in p.terms:
                return i, j
    # a constant term inside a longer entry also counts once all else fails
    for i, row in enumerate(M.entries):
        for j, p in enumerate(row):
            if zero in p.terms:
                return i, j
    return None


def _split_unit(prev, step: OpMatrix, nxt, i: int, j: int):
    """Cancel the trivial summand D -> D carried by the unit step[i][j]."""
    n = step.n
    u = step.entries[i][j]
    zero = (0,) * n
    if not (len(u.terms) == 1 and zero in u.terms):
        raise ValueError("pivot is not a nonzero constant")
    inv = 1 / u.terms[zero]
    pivot_row = step.entries[i]
    rows = []
    for r, row in enumerate(step.entries):
        if r == i:
            continue
        f = row[j] * inv
        if f:
            row = [a - f * b for a, b in zip(row, pivot_row)]
        rows.append([p for c, p in enumerate(row) if c != j])
    new_step = OpMatrix(n, rows, step.cols - 1)
    new_prev = None
    if prev is not None:
        new_prev = OpMatrix(n, [r for k, r in enumerate(prev.entries) if k != j], prev.cols)
    new_next = None
    if nxt is not None:
        new_next = OpMatrix(
            n, [[p for c, p in enumerate(r) if c != i] for r in nxt.entries], nxt.cols - 1
        )
    return new_prev, new_step, new_next


def minimize_step(prev: OpMatrix | None, step: OpMatrix, next: OpMatrix | None = None) -> MinimizeResult:
    """Remove unit (degree-0) pivots from ``step`` and ``next``.

    A unit in ``step`` shrinks the ranks on both sides of ``step``; a unit in
    ``next`` marks a redundant row of ``step``.  Without ``next``, redundant
    rows of ``step`` are pruned by graded linear algebra instead.  Rows must be
    homogeneous; otherwise the input is returned with ``minimized=False``.
    """
    mats = [m for m in (prev, step, next) if m is not None]
    if not all(_is_graded(m) for m in mats):
        return MinimizeResult(prev, step, next, False)
    while True:
        hit = _find_unit(step)
        if hit is None:
            break
        prev, step, next = _split_unit(prev, step, next, *hit)
    if next is not None:
        while True:
            hit = _find_unit(next)
            if hit is None:
                break
            step, next, _ = _split_unit(step, next, None, *hit)
    else:
        keep = prune_generators(step.row_elements())
        step = step.select_rows(keep)
    return MinimizeResult(prev, step, next, True)


# --- resolve ---------------------------------------------------------------

def _express(targets: Sequence[ModuleElement], gens: Sequence[ModuleElement], n: int) -> OpMatrix:
    """Matrix whose row k writes targets[k] in terms of gens."""
    p = len(gens)
    m = gens[0].m if gens else (targets[0].m if targets else 0)
    shifts = _graded_setup([[g.terms for g in gens], [t.terms for t in targets]], m)
    rows = []
    if shifts is not None:
        span = GradedSpan([g.terms for g in gens], shifts, n, track=True)
        for t in targets:
            coeffs = span.express(t.terms)
            if coeffs is None:
                raise ResolutionError("certificate: element not in module")
            rows.append([Poly._raw(n, coeffs.get(i, {})) for i in range(p)])
    else:
        gb = buchberger(gens)
        for t in targets:
            lam = lift(t, gb)
            if lam is None:
                raise ResolutionError("certificate: element not in module")
            rows.append(lam)
    return OpMatrix(n, rows, p)


def resolve(
    A: OpMatrix,
    minimize: bool = True,
    order: TermOrder = DEFAULT_ORDER,
    max_length: int | None = None,
    certificates: bool = False,
) -> FreeResolution:
    """Free resolution of the row module presentation D^(1 x m) / D^(1 x p) A."""
    n = A.n
    guard = max_length if max_length is not None else n + 2
    warnings: list[str] = []
    graded = _is_graded(A)
    if minimize and not graded:
        warnings.append("input is not homogeneous; resolution is not minimized")
        log.warning(warnings[-1])
    minimized = minimize and graded
    first = trim_rows_report(A, certify=False).matrix
    steps = [first] if first.rows else []
    certs: list[JunctionCertificate] = []
    cur_order = order
    while steps:
        cur = steps[-1]
        rows = cur.row_elements()
        raw = syzygies(rows, cur_order)
        if not raw:
            break
        if len(steps) >= guard:
            raise ResolutionError(
                f"resolution exceeded {guard} steps; the syzygy computation is not terminating"
            )
        if minimize:
            nxt = [raw[i] for i in prune_generators(raw)]
        else:
            nxt = raw
        nxt_m = OpMatrix.from_module_elements(nxt, cur.rows, n)
        if certificates:
            certs.append(
                JunctionCertificate(
                    len(steps),
                    OpMatrix.from_module_elements(raw, cur.rows, n),
                    _express(raw, nxt, n),
                    _express(nxt, raw, n),
                )
            )
        steps.append(nxt_m)
        # the next syzygy computation runs in the order induced by these rows
        cur_order = schreyer_order(rows, cur_order)
    if minimized:
        # prune already removed redundant generators; clear any remaining units
        for k in range(len(steps)):
            prev = steps[k - 1] if k > 0 else None
            nx = steps[k + 1] if k + 1 < len(steps) else None
            if _find_unit(steps[k]) is not None:
                if certificates:
                    warnings.append("unit pivots removed after certificates were recorded")
                p2, s2, n2, _ = minimize_step(prev, steps[k], nx)
                if prev is not None:
                    steps[k - 1] = p2
                steps[k] = s2
                if nx is not None:
                    steps[k + 1] = n2
    betti = [A.cols] + [s.rows for s in steps]
    orders = [s.order() for s in steps]
    return FreeResolution(steps, betti, orders, minimized, certs, warnings)


def euler_characteristic(r: FreeResolution) -> int:
    return sum((-1) ** k * b for k, b in enumerate(r.betti))


@dataclass
class JunctionReport:
    index: int
    composition_zero: bool
    exact: bool | None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.composition_zero and self.exact is not False


@dataclass
class ChainReport:
    junctions: list[JunctionReport]

    @property
    def ok(self) -> bool:
        return all(j.ok for j in self.junctions)


def verify_chain(r: FreeResolution | Sequence[OpMatrix], recompute: bool = True) -> ChainReport:
    """Check every composition and exactness at every junction.

    Stored certificates are checked by plain matrix products; otherwise (or in
    addition, with ``recompute``) exactness is re-derived by comparing freshly
    computed syzygies with the next step.
    """
    steps = list(r.steps) if isinstance(r, FreeResolution) else list(r)
    certs = {c.index: c for c in r.certificates} if isinstance(r, FreeResolution) else {}
    out = []
    for k in range(len(steps)):
        cur = steps[k]
        nxt = steps[k + 1] if k + 1 < len(steps) else None
        if nxt is None:
            if recompute:
                exact = not syzygies(cur.row_elements())
                out.append(JunctionReport(k + 1, True, exact, "last step has full row rank" if exact else "last step has syzygies"))
            continue
        try:
            zero = compose(nxt, cur).is_zero()
        except ValueError as exc:
            out.append(JunctionReport(k + 1, False, False, str(exc)))
            continue
        exact = None
        detail = ""
        c = certs.get(k + 1)
        if c is not None:
            ok1 = compose(c.syzygies, cur).is_zero()
            ok2 = compose(c.syz_in_next, nxt) == c.syzygies
            ok3 = compose(c.next_in_syz, c.syzygies) == nxt
            exact = ok1 and ok2 and ok3
            detail = "certificate"
        if recompute and zero:
            syz = syzygies(cur.row_elements())
            e2 = contained_in(syz, nxt.row_elements())
            exact = e2 if exact is None else (exact and e2)
            detail = (detail + "+recomputed").lstrip("+")
        out.append(JunctionReport(k + 1, zero, exact if zero else False, detail))
    return ChainReport(out)
