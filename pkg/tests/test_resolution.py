import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdcc.diffop import OpMatrix, compose
from pdcc.polycore import TermOrder, parse_poly
from pdcc.resolution import (
    ResolutionError,
    euler_characteristic,
    minimize_step,
    resolve,
    verify_chain,
)
from pdcc.systems import builtin_system, load_fixture
from strategies import homogeneous_rows


def mat(n, rows):
    return OpMatrix(n, [[parse_poly(t, n) for t in r] for r in rows])


def test_gradient_resolves_to_koszul_complex():
    r = resolve(builtin_system("gradient", 3), minimize=True)
    assert r.betti == [1, 3, 3, 1]
    assert r.orders == [1, 1, 1]
    assert euler_characteristic(r) == 0
    assert verify_chain(r).ok


@pytest.mark.parametrize(
    "name, n, betti, orders",
    [
        ("killing", 2, [2, 3, 1], [1, 2]),
        ("killing", 3, [3, 6, 6, 3], [1, 2, 1]),
        ("conformal_killing", 3, [3, 5, 5, 3], [1, 3, 1]),
        ("finite_type_column", 3, [1, 3, 3, 1], [2, 2, 2]),
    ],
)
def test_small_resolutions(name, n, betti, orders):
    r = resolve(builtin_system(name, n), minimize=True)
    assert r.betti == betti
    assert r.orders == orders
    for a, b in zip(r.steps, r.steps[1:]):
        assert compose(b, a).is_zero()


def test_certificates_verify():
    r = resolve(builtin_system("killing", 3), minimize=True, certificates=True)
    assert len(r.certificates) == len(r.steps) - 1
    rep = verify_chain(r, recompute=False)
    assert rep.ok
    assert all(j.detail == "certificate" for j in rep.junctions)
    obj = r.to_json_obj(certificates=True)
    assert {"junction", "syzygies", "syz_in_next", "next_in_syz"} <= set(obj["certificates"][0])


def test_verify_chain_detects_inexact_junction():
    # d1 then (d1): composition is d1^2 != 0
    rep = verify_chain([mat(2, [["d1"]]), mat(2, [["d1"]])])
    assert not rep.ok
    # (d1, d2) column followed by d2^2*(-d2, d1): composes to zero but is not all syzygies
    rep = verify_chain([mat(2, [["d1"], ["d2"]]), mat(2, [["-d2^3", "d1*d2^2"]])])
    assert rep.junctions[0].composition_zero
    assert rep.junctions[0].exact is False


def test_fixture_chain_is_exact():
    assert verify_chain([load_fixture(x) for x in ("R3", "S3", "T3")]).ok


def test_max_length_guard():
    with pytest.raises(ResolutionError):
        resolve(builtin_system("gradient", 3), max_length=2)


def test_unminimized_resolution_is_still_exact():
    r = resolve(builtin_system("killing", 2), minimize=False)
    assert not r.minimized
    assert verify_chain(r).ok
    assert r.betti[:2] == [2, 3]


def test_non_homogeneous_input_warns():
    r = resolve(mat(2, [["d1 - 1"], ["d2"]]))
    assert not r.minimized
    assert r.warnings
    assert verify_chain(r).ok


def test_minimize_step_cancels_units():
    step = mat(2, [["1", "0"], ["0", "d1"]])
    prev = mat(2, [["d2"], ["d1"]])
    res = minimize_step(prev, step)
    assert res.minimized
    assert res.step.rows == 1 and res.step.cols == 1
    assert res.prev.rows == 1


@given(homogeneous_rows(n=2, max_rows=3, max_cols=2), st.sampled_from(["degrevlex", "lex"]))
def test_resolution_length_bounded(A, kind):
    r = resolve(A, minimize=True, order=TermOrder(kind))
    assert len(r.steps) <= A.n + 1


@given(homogeneous_rows(n=3, max_rows=3, max_cols=2))
def test_betti_numbers_independent_of_order(A):
    a = resolve(A, minimize=True, order=TermOrder("degrevlex"))
    b = resolve(A, minimize=True, order=TermOrder("lex"))
    assert a.betti == b.betti
