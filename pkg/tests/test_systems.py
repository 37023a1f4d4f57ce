import pytest

from pdcc.diffop import compose
from pdcc.systems import (
    FIXTURE_NAMES,
    SYSTEM_NAMES,
    Metric,
    builtin_system,
    conformal_killing_operator,
    dimension_formulas,
    killing_operator,
    load_fixture,
)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_conformal_operator_matches_fixture(n):
    metric = Metric.minkowski(n) if n == 4 else Metric.euclidean(n)
    W = conformal_killing_operator(metric)
    assert W == load_fixture(f"W{n}")
    assert compose(load_fixture(f"lambda{n}"), W).is_zero()


def test_killing_shape():
    K = killing_operator(Metric.euclidean(3))
    assert (K.rows, K.cols, K.order()) == (6, 3, 1)
    # the diagonal rows carry a factor 2
    assert str(K.entries[0][0]) == "2*d1"


def test_minkowski_signature():
    assert Metric.minkowski(4).diag[-1] == -1
    assert Metric.named("euclidean", 3).diag == Metric.euclidean(3).diag
    with pytest.raises(ValueError):
        Metric.named("lorentz", 4)


def test_builtin_names_accept_dashes():
    assert builtin_system("conformal-killing", 3) == builtin_system("conformal_killing", 3)
    for name in SYSTEM_NAMES:
        assert builtin_system(name, 3).n >= 2


def test_builtin_errors():
    with pytest.raises(ValueError):
        builtin_system("killing")
    with pytest.raises(ValueError):
        builtin_system("nope", 3)
    with pytest.raises(ValueError):
        builtin_system("killing", 3, Metric.euclidean(4))
    with pytest.raises(ValueError):
        load_fixture("Z9")


def test_fixture_catalog_complete():
    for name in FIXTURE_NAMES:
        assert load_fixture(name).rows > 0


def test_dimension_formulas():
    assert dimension_formulas(3)["riemann_dim"] == 6
    assert dimension_formulas(4)["riemann_bianchi_dim"] == 20
    assert dimension_formulas(5)["weyl_dim"] == 35
    assert dimension_formulas(5)["weyl_bianchi_dim"] == 35
    assert dimension_formulas(4)["conformal_g1_dim"] == 7
    with pytest.raises(ValueError):
        dimension_formulas(1)
