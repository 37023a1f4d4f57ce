"""Named operators: Killing and conformal Killing systems, worked examples,
dimension formulas and the shipped reference fixtures."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from math import comb
from typing import Sequence

from gmpy2 import mpq

from .diffop import OpMatrix
from .polycore import Poly, parse_poly


@dataclass(frozen=True)
class Metric:
    n: int
    diag: tuple
    description: str = "custom"

    def __post_init__(self):
        if len(self.diag) != self.n:
            raise ValueError("metric signature must have length n")
        if any(x not in (1, -1) for x in self.diag):
            raise ValueError("metric entries must be +1 or -1")

    @classmethod
    def euclidean(cls, n: int) -> "Metric":
        return cls(n, (1,) * n, "euclidean")

    @classmethod
    def minkowski(cls, n: int) -> "Metric":
        """diag(1, ..., 1, -1)."""
        return cls(n, (1,) * (n - 1) + (-1,), "minkowski")

    @classmethod
    def named(cls, name: str, n: int) -> "Metric":
        if name == "euclidean":
            return cls.euclidean(n)
        if name == "minkowski":
            return cls.minkowski(n)
        raise ValueError(f"unknown metric {name!r}")


def _pairs(n: int):
    return [(i, j) for i in range(n) for j in range(i, n)]


def killing_operator(metric: Metric) -> OpMatrix:
    """Rows (i, j), i <= j: ω_jj d_i in column j plus ω_ii d_j in column i."""
    n = metric.n
    w = metric.diag
    rows = []
    for i, j in _pairs(n):
        row = [Poly.zero(n) for _ in range(n)]
        row[j] = row[j] + Poly.var(n, i + 1) * w[j]
        row[i] = row[i] + Poly.var(n, j + 1) * w[i]
        rows.append(row)
    return OpMatrix(n, rows, n)


def conformal_killing_operator(metric: Metric) -> OpMatrix:
    """Rows (i, j), i <= j: ω_rj ξ^r_i + ω_ir ξ^r_j - (2/n) ω_ij ξ^r_r."""
    n = metric.n
    w = metric.diag
    two_n = mpq(2, n)
    rows = []
    for i, j in _pairs(n):
        row = [Poly.zero(n) for _ in range(n)]
        row[j] = row[j] + Poly.var(n, i + 1) * w[j]
        row[i] = row[i] + Poly.var(n, j + 1) * w[i]
        if i == j:
            for r in range(n):
                row[r] = row[r] - Poly.var(n, r + 1) * (two_n * w[i])
        rows.append(row)
    return OpMatrix(n, rows, n)


def gradient(n: int) -> OpMatrix:
    return OpMatrix(n, [[Poly.var(n, i + 1)] for i in range(n)], 1)


def _column(n: int, texts: Sequence[str]) -> OpMatrix:
    return OpMatrix(n, [[parse_poly(t, n)] for t in texts], 1)


def _matrix(n: int, rows: Sequence[Sequence[str]]) -> OpMatrix:
    return OpMatrix(n, [[parse_poly(t, n) for t in r] for r in rows])


P_FT, Q_FT, R_FT = "d2^2", "d2*d3 - d1^2", "d3^2"

BUILTINS = {
    # y33 = 0, y23 - y11 = 0, y22 = 0
    "finite_type_column": lambda: _column(3, [R_FT, Q_FT, P_FT]),
    # y11 = 0, y13 - y2 = 0
    "mixed_pair": lambda: _column(3, ["d1^2", "d1*d3 - d2"]),
    # completed system after the coordinate permutation (1,2,3) -> (3,2,1)
    "mixed_pair_completed": lambda: _column(3, ["d3^2", "d2*d3", "d2^2", "d1*d3 - d2"]),
    "torsion_column": lambda: _column(2, ["d1*d2", "d2^2"]),
    # second-order CC of finite_type_column, in the row order (Φ3, Φ2, Φ1)
    "finite_type_cc": lambda: _matrix(
        3,
        [
            [Q_FT, "-" + R_FT, "0"],
            ["-" + P_FT, "0", R_FT],
            ["0", P_FT, "-d2*d3 + d1^2"],
        ],
    ),
    # stress equations div σ = 0 for a symmetric 2x2 tensor (σ11, σ12, σ22)
    "cauchy_2": lambda: _matrix(2, [["d1", "d2", "0"], ["0", "d1", "d2"]]),
}

SYSTEM_NAMES = (
    "killing",
    "conformal_killing",
    "finite_type_column",
    "mixed_pair",
    "mixed_pair_completed",
    "torsion_column",
    "gradient",
    "finite_type_cc",
    "cauchy_2",
)


def builtin_system(name: str, n: int | None = None, metric: Metric | str | None = None) -> OpMatrix:
    """Look up a catalog operator; ``-`` and ``_`` are interchangeable in names."""
    key = name.replace("-", "_")
    if key in ("killing", "conformal_killing"):
        if n is None and isinstance(metric, Metric):
            n = metric.n
        if n is None:
            raise ValueError(f"{name} needs a dimension")
        if metric is None:
            metric = Metric.euclidean(n)
        elif isinstance(metric, str):
            metric = Metric.named(metric, n)
        if metric.n != n:
            raise ValueError("metric dimension does not match n")
        return killing_operator(metric) if key == "killing" else conformal_killing_operator(metric)
    if key == "gradient":
        if n is None:
            raise ValueError("gradient needs a dimension")
        return gradient(n)
    if key in BUILTINS:
        return BUILTINS[key]()
    raise ValueError(f"unknown system {name!r}")


def dimension_formulas(n: int) -> dict:
    if n < 2:
        raise ValueError("n must be at least 2")
    return {
        "riemann_dim": n * n * (n * n - 1) // 12,
        "riemann_bianchi_dim": n * n * (n * n - 1) * (n - 2) // 24,
        "conformal_F0_dim": (n - 1) * (n + 2) // 2,
        "weyl_dim": n * (n + 1) * (n + 2) * (n - 3) // 12,
        "weyl_bianchi_dim": n * (n * n - 1) * (n + 2) * (n - 4) // 24,
        "conformal_Z3_dim": n * (n - 1) * (n - 2) * (n * n + n + 4) // 24,
        "conformal_B3_dim": n * n * (n - 1) // 2,
        "killing_g1_dim": comb(n, 2),
        "conformal_g1_dim": comb(n, 2) + 1,
    }


FIXTURE_NAMES = (
    "W2", "W3", "W4", "W5",
    "R2", "R3", "R4", "R5",
    "S3", "S4", "S4p", "F4", "S5",
    "T3", "T4", "T5",
    "U4", "U5", "V5",
    "lambda2", "lambda3", "lambda4", "lambda5",
)


def load_fixture(name: str) -> OpMatrix:
    if name not in FIXTURE_NAMES:
        raise ValueError(f"unknown fixture {name!r}")
    text = resources.files("pdcc.fixtures").joinpath(f"{name}.json").read_text()
    return OpMatrix.from_json(text)
