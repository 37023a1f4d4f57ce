"""Adjoint sequences and the double-duality parametrizability test."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .diffop import OpMatrix, adjoint, compatibility_conditions, compose
from .groebner import ModuleElement, buchberger, contained_in, module_equal, module_membership, syzygies
from .resolution import FreeResolution, resolve
from .systems import Metric, killing_operator


@dataclass
class DualityReport:
    input: OpMatrix
    adjoint_cc: OpMatrix
    candidate: OpMatrix
    cc_of_candidate: OpMatrix
    exact: bool
    parametrization: OpMatrix | None = None
    torsion_witnesses: list[ModuleElement] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "input": self.input.to_json_obj(),
            "adjoint_cc": self.adjoint_cc.to_json_obj(),
            "candidate": self.candidate.to_json_obj(),
            "cc_of_candidate": self.cc_of_candidate.to_json_obj(),
            "exact": self.exact,
            "parametrization": self.parametrization.to_json_obj() if self.parametrization else None,
            "torsion_witnesses": [
                OpMatrix.from_module_elements([w], w.m, w.n).to_json_obj()["entries"][0]
                for w in self.torsion_witnesses
            ],
        }


def double_duality_test(D1: OpMatrix) -> DualityReport:
    """Decide whether D1 generates the CC of ad(CC(ad(D1))).

    When it does, that operator parametrizes D1; otherwise the rows of its CC
    that D1 does not generate are returned as torsion witnesses.
    """
    B = compatibility_conditions(adjoint(D1))
    D = adjoint(B)
    if D.cols == 0:
        # ad(D1) has no CC: the only candidate is the zero operator
        C = OpMatrix.identity(D1.n, D1.cols)
    else:
        C = compatibility_conditions(D)
    d1_rows = D1.row_elements()
    c_rows = C.row_elements()
    exact = module_equal(c_rows, d1_rows)
    report = DualityReport(D1, B, D, C, exact)
    if exact:
        report.parametrization = D
    else:
        if d1_rows and any(not r.is_zero() for r in d1_rows):
            gb = buchberger([r for r in d1_rows if not r.is_zero()])
            report.torsion_witnesses = [c for c in c_rows if not module_membership(c, gb)]
        else:
            report.torsion_witnesses = [c for c in c_rows if not c.is_zero()]
    return report


@dataclass
class AdjointSequence:
    steps: list[OpMatrix]
    exact: list[bool]

    def to_json_obj(self) -> dict:
        return {"steps": [s.to_json_obj() for s in self.steps], "exact": list(self.exact)}


def adjoint_sequence(r: FreeResolution | Sequence[OpMatrix]) -> AdjointSequence:
    """Adjoint every step in reverse order and test each junction.

    For steps d_1, ..., d_k the result is ad(d_k), ..., ad(d_1); the flag for
    the junction between ad(d_{i+1}) and ad(d_i) is true iff the rows of
    ad(d_i) generate all syzygies of the rows of ad(d_{i+1}).
    """
    steps = list(r.steps) if isinstance(r, FreeResolution) else list(r)
    ads = [adjoint(s) for s in reversed(steps)]
    flags = []
    for a, b in zip(ads, ads[1:]):
        if not compose(b, a).is_zero():
            flags.append(False)
            continue
        syz = syzygies(a.row_elements())
        flags.append(contained_in(syz, b.row_elements()))
    return AdjointSequence(ads, flags)


def lanczos_check(metric: Metric) -> bool:
    """CC(ad(Bianchi)) equals the row module of ad(Riemann) for the Killing resolution."""
    res = resolve(killing_operator(metric))
    if len(res.steps) < 3:
        raise ValueError("the Killing resolution has no Bianchi step in this dimension")
    riemann, bianchi = res.steps[1], res.steps[2]
    cc = compatibility_conditions(adjoint(bianchi))
    return module_equal(cc.row_elements(), adjoint(riemann).row_elements())
