import random

from hypothesis import given, strategies as st

from cmstickel.linalg import (det, hnf, hnf_with_transform, in_lattice, left_kernel, mat_inverse,
                              mat_mul, smith_normal_form, vec_mat)

ints = st.integers(min_value=-30, max_value=30)


@st.composite
def matrices(draw, max_rows=6, max_cols=5):
    n = draw(st.integers(1, max_cols))
    m = draw(st.integers(0, max_rows))
    return [draw(st.lists(ints, min_size=n, max_size=n)) for _ in range(m)], n


def _is_hnf(H):
    last = -1
    for k, r in enumerate(H):
        j = next(c for c, x in enumerate(r) if x)
        assert j > last and r[j] > 0
        for m in range(k):
            assert 0 <= H[m][j] < r[j]
        last = j


@given(matrices())
def test_hnf_shape_and_idempotence(mat):
    rows, n = mat
    H = hnf(rows, n)
    _is_hnf(H)
    assert hnf(H, n) == H


@given(matrices())
def test_hnf_spans_same_lattice(mat):
    rows, n = mat
    H = hnf(rows, n)
    for r in rows:
        assert in_lattice(r, H)
    # every basis row is an integer combination: the transform route agrees
    assert H == hnf_with_transform(rows, n)[0]


@given(matrices())
def test_hnf_invariant_under_row_operations(mat):
    rows, n = mat
    rnd = random.Random(len(rows) * 7 + n)
    shuffled = [list(r) for r in rows]
    rnd.shuffle(shuffled)
    if len(shuffled) >= 2:
        k = rnd.randint(-3, 3)
        shuffled[0] = [a + k * b for a, b in zip(shuffled[0], shuffled[1])]
    assert hnf(shuffled, n) == hnf(rows, n)


def test_hnf_modular_path_matches_reference():
    # enough rows to reach full rank early, so the reduction modulo D is used
    rnd = random.Random(5)
    for _ in range(20):
        rows = [[rnd.randint(-50, 50) for _ in range(5)] for _ in range(25)]
        assert hnf(rows, 5) == hnf_with_transform(rows, 5)[0]


def test_hnf_many_large_rows():
    rnd = random.Random(7)
    rows = [[rnd.randint(-10 ** 6, 10 ** 6) for _ in range(12)] for _ in range(150)]
    H = hnf(rows, 12)
    _is_hnf(H)
    assert all(in_lattice(r, H) for r in rows)


@given(matrices())
def test_left_kernel(mat):
    rows, n = mat
    K = left_kernel(rows)
    for c in K:
        assert all(sum(ci * r[j] for ci, r in zip(c, rows)) == 0 for j in range(n))
    rank = len(hnf(rows, n))
    assert len(K) == len(rows) - rank


@given(matrices(max_rows=5, max_cols=5))
def test_smith_normal_form(mat):
    rows, n = mat
    if not rows:
        return
    diag, U, V = smith_normal_form(rows)
    D = mat_mul(mat_mul(U, rows), V)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert abs(det(U)) == 1 and abs(det(V)) == 1


def test_det_and_inverse():
    A = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    assert det(A) == 18
    Ai = mat_inverse(A)
    I = mat_mul(A, Ai)
    assert I == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert vec_mat([1, 1, 1], A) == [3, 5, 5]


def test_in_lattice():
    H = hnf([[2, 0], [0, 3]], 2)
    assert in_lattice([4, 9], H)
    assert not in_lattice([1, 0], H)
