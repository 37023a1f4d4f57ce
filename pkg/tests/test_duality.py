from pdcc.diffop import OpMatrix, adjoint, compatibility_conditions, compose, row_module_equal
from pdcc.duality import adjoint_sequence, double_duality_test, lanczos_check
from pdcc.polycore import parse_poly
from pdcc.resolution import resolve
from pdcc.systems import Metric, builtin_system


def mat(n, rows):
    return OpMatrix(n, [[parse_poly(t, n) for t in r] for r in rows])


def test_stress_equations_are_parametrizable():
    rep = double_duality_test(builtin_system("cauchy_2"))
    assert rep.exact
    airy = mat(2, [["d2^2"], ["-d1*d2"], ["d1^2"]])
    assert row_module_equal(adjoint(rep.parametrization), adjoint(airy))
    assert compose(builtin_system("cauchy_2"), rep.parametrization).is_zero()
    assert rep.torsion_witnesses == []


def test_curl_is_parametrized_by_gradient():
    rep = double_duality_test(mat(2, [["-d2", "d1"]]))
    assert rep.exact
    assert row_module_equal(adjoint(rep.parametrization), adjoint(builtin_system("gradient", 2)))


def test_torsion_witness():
    rep = double_duality_test(mat(2, [["d1*d2", "d2^2"]]))
    assert not rep.exact
    assert rep.parametrization is None
    assert [w.components() for w in rep.torsion_witnesses] == [[parse_poly("d1", 2), parse_poly("d2", 2)]]
    obj = rep.to_json_obj()
    assert obj["exact"] is False
    assert obj["torsion_witnesses"] == [[[[[1, 1], [1, 0]]], [[[1, 1], [0, 1]]]]]


def test_adjoint_sequence_of_non_parametrizable_operator():
    D = builtin_system("torsion_column")
    seq = adjoint_sequence([D, compatibility_conditions(D)])
    assert seq.exact == [False]


def test_adjoint_sequence_of_killing_resolution():
    seq = adjoint_sequence(resolve(builtin_system("killing", 3)))
    assert seq.exact == [True, True]
    assert [s.rows for s in seq.steps] == [6, 6, 3]


def test_lanczos_direction():
    assert lanczos_check(Metric.euclidean(3))
