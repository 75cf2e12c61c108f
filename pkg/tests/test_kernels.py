import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eo_theta import _accel, kernels
from eo_theta import semilinear as sl
from eo_theta.field import GF

from conftest import FIELDS

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")


def leibniz_det(F, M):
    """Sum over permutations; only for tiny matrices."""
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i, j in itertools.combinations(range(n), 2) if perm[i] > perm[j])
        term = 1
        for i in range(n):
            term = F.mul(term, int(M[i][perm[i]]))
        total = F.add(total, F.neg(term) if inv % 2 else term)
    return total


def naive_matmul(F, A, B):
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for i, j in itertools.product(range(A.shape[0]), range(B.shape[1])):
        acc = 0
        for k in range(A.shape[1]):
            acc = F.add(acc, F.mul(int(A[i, k]), int(B[k, j])))
        out[i, j] = acc
    return out


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    if request.param == "numba" and not _accel.HAVE_NUMBA:
        pytest.skip("numba not installed")
    old = kernels.backend()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(old)


def test_det_against_permutation_sum(backend, field, rng):
    for n in range(1, 5):
        for _ in range(5):
            M = field.random_matrix(rng, n, n)
            assert sl.det(field, M) == leibniz_det(field, M)


def test_matmul_against_naive(backend, field, rng):
    A = field.random_matrix(rng, 3, 4)
    B = field.random_matrix(rng, 4, 2)
    assert np.array_equal(sl.matmul(field, A, B), naive_matmul(field, A, B))


def test_rref_is_reduced_and_same_rowspace(backend, field, rng):
    for shape in [(3, 5), (5, 3), (4, 4), (0, 3), (2, 0)]:
        M = field.random_matrix(rng, *shape)
        R, piv = kernels.rref(M, field.tables)
        r = len(piv)
        assert not R[r:].any()
        for i, c in enumerate(piv):
            assert R[i, c] == 1
            assert not np.delete(R[:, c], i).any()
            assert not R[i, :c].any()
        # same row space: M's rows are combinations of R's nonzero rows
        if r:
            assert sl.rank(field, np.vstack([R[:r], M])) == r


@needs_numba
@given(st.sampled_from(FIELDS), st.integers(0, 6), st.integers(0, 6), st.integers(0, 2**32 - 1))
def test_backends_agree(pk, rows, cols, seed):
    F = GF(*pk)
    g = np.random.default_rng(seed)
    M = F.random_matrix(g, rows, cols)
    N = F.random_matrix(g, cols, 3)
    out = {}
    old = kernels.backend()
    try:
        for name in ("numba", "numpy"):
            kernels.set_backend(name)
            R, piv = kernels.rref(M, F.tables)
            d = kernels.det(M[:, :rows], F.tables) if rows <= cols else None
            out[name] = (R.tolist(), list(piv), kernels.matmul(M, N, F.tables).tolist(), d)
    finally:
        kernels.set_backend(old)
    assert out["numba"] == out["numpy"]


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv("EO_THETA_NUMBA", "0")
    assert not _accel.numba_requested()
    monkeypatch.setenv("EO_THETA_NUMBA", "1")
    assert _accel.numba_requested()


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.set_backend("cuda")
