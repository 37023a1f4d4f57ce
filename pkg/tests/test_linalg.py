from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from pdcc.linalg import Echelon, dense_rank, dense_to_sparse, mat_mul_dense, nullspace, rank, rref


def test_rank_of_singular_matrix():
    assert dense_rank([[1, 2, 3], [2, 4, 6], [1, 0, 1]]) == 2
    assert dense_rank([]) == 0


def test_rref_pivots():
    piv, rows = rref(dense_to_sparse([[0, 2, 4], [1, 1, 1]]))
    assert piv == [0, 1]
    assert rows[0] == {0: 1, 2: -1}
    assert rows[1] == {1: 1, 2: 2}


def test_nullspace_free_coordinates():
    basis, free = nullspace(dense_to_sparse([[1, 1, 0]]), [0, 1, 2], with_free=True)
    assert free == [1, 2]
    assert basis == [{1: 1, 0: -1}, {2: 1}]


def test_echelon_tracks_dependency():
    e = Echelon(track=True)
    assert e.add({0: mpq(1), 1: mpq(2)}, "a")
    assert e.add({1: mpq(1)}, "b")
    assert not e.add({0: mpq(1), 1: mpq(5)}, "c")
    # c - a - 3b = 0
    assert e.last_dependency == {"c": 1, "a": -1, "b": -3}


matrices = st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=1, max_size=4)
)


@given(matrices)
def test_rank_nullity(m):
    cols = len(m[0])
    basis = nullspace(dense_to_sparse(m), list(range(cols)))
    assert dense_rank(m) + len(basis) == cols
    dense = [[v.get(j, 0) for j in range(cols)] for v in basis]
    for vec in dense:
        assert all(x == 0 for row in mat_mul_dense(m, [[x] for x in vec]) for x in row)


@given(matrices)
def test_rank_of_transpose(m):
    assert dense_rank(m) == dense_rank([list(c) for c in zip(*m)])
    assert rank(dense_to_sparse(m)) == dense_rank(m)
