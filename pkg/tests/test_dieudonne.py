import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from eo_theta import dieudonne as dd
from eo_theta import io
from eo_theta import semilinear as sl
from eo_theta.field import GF


def basis_span(F, D, labels):
    """Span of named basis vectors like ("e", 1), ("f", 3)."""
    S = sl.zeros(len(labels), D.rank)
    for row, (kind, i) in enumerate(labels):
        S[row, i - 1 if kind == "e" else D.n + i - 1] = 1
    return sl.span(F, S, D.rank)


@pytest.mark.parametrize("q", [(2, 1), (3, 1), (5, 1), (2, 2)])
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_kernels_of_standard_modules(q, n):
    # D[F] = <e_1..e_{r-1}, f_r, e_{r+1}..e_n>,  D[V] = <e_1, f_2..f_n>
    F = GF(*q)
    for r in range(1, n + 1):
        D = dd.standard_module(n, r, F)
        kerF = [("e", i) for i in range(1, n + 1) if i != r] + [("f", r)]
        kerV = [("e", 1)] + [("f", i) for i in range(2, n + 1)]
        assert sl.same_space(F, D.F.kernel(), basis_span(F, D, kerF))
        assert sl.same_space(F, D.V.kernel(), basis_span(F, D, kerV))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_p_ranks_of_standard_modules(n):
    for r in range(1, n + 1):
        total, sbar = dd.p_rank(dd.standard_module(n, r, GF(3)))
        if r == 1:
            assert (total, sbar) == (n, n - 1)
        else:
            assert (total, sbar) == (n - r, n - r)


@pytest.mark.parametrize("q", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)])
def test_standard_modules_are_bt1(q):
    F = GF(*q)
    for n in range(2, 6):
        for r in range(1, n + 1):
            rep = dd.verify_bt1(dd.standard_module(n, r, F))
            assert rep.ok, rep.failure
            assert dd.eo_class(dd.standard_module(n, r, F)).r == r


def test_eo_class_fields():
    c = dd.eo_class(dd.standard_module(3, 2, GF(2)))
    assert c.as_dict() == {"r": 2, "w_r": [1, 3, 2], "length": 1,
                           "p_ranks": {"total": 1, "sigmabar": 1}}


@given(st.sampled_from([(2, 1), (3, 1), (5, 1), (2, 2)]), st.integers(2, 4), st.data())
def test_conjugates_keep_class_and_structure(q, n, data):
    F = GF(*q)
    r = data.draw(st.integers(1, n))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    D = dd.standard_module(n, r, F)
    C, g = dd.random_conjugate(D, rng)
    assert dd.verify_bt1(C).ok
    assert dd.eo_class(C).r == r
    assert dd.p_rank(C) == dd.p_rank(D)
    assert dd.delta_torsion_ranks(C) == (1, n - 1)
    # g carries F-kernels onto F-kernels
    img = sl.span(F, sl.matmul(F, g, D.F.kernel().T).T, 2 * n)
    assert sl.same_space(F, img, C.F.kernel())


def test_bt1_detects_broken_module():
    D = dd.standard_module(3, 2, GF(3))
    MF = np.array(D.F_matrix)
    MF[0, 0] = 1
    bad = dd.DieudonneModule(D.field, 3, MF, D.V_matrix, D.pairing)
    rep = dd.verify_bt1(bad)
    assert not rep.ok and rep.failure == "ker F = im V"
    P = np.array(D.pairing)
    P[0, 3] = 0
    rep = dd.verify_bt1(dd.DieudonneModule(D.field, 3, D.F_matrix, D.V_matrix, P))
    assert not rep.ok


def test_mixed_base_change_rejected(rng):
    D = dd.standard_module(2, 1, GF(3))
    g = sl.identity(4)
    g[0, 2] = 1
    with pytest.raises(dd.ModuleError):
        dd.transport(D, g)


@pytest.mark.parametrize("n,r,dims", [
    (3, 1, [0, 3, 6]),
    (3, 2, [0, 1, 3, 5, 6]),
    (3, 3, [0, 1, 2, 3, 4, 5, 6]),
    (2, 1, [0, 2, 4]),
])
def test_canonical_filtration_dims(n, r, dims):
    # derived from iterating F(.) and V^{-1}(.) by hand on the standard basis
    flag = dd.canonical_filtration(dd.standard_module(n, r, GF(2)))
    assert [s.shape[0] for s in flag.steps] == dims


def test_canonical_filtration_is_conjugation_invariant(rng):
    F = GF(5)
    for n in (3, 4):
        for r in range(1, n + 1):
            D = dd.standard_module(n, r, F)
            a = dd.canonical_filtration(D)
            b = dd.canonical_filtration(dd.random_conjugate(D, rng)[0])
            assert a.as_dict() == b.as_dict()


def test_torsion_ranks_standard():
    for n in range(2, 7):
        for r in range(1, n + 1):
            assert dd.delta_torsion_ranks(dd.standard_module(n, r, GF(2))) == (1, n - 1)


def test_brute_force_classes_n3():
    for q in (2, 3):
        F = GF(q)
        mods = [dd.standard_module(3, r, F) for r in (1, 2, 3)]
        for i, a in enumerate(mods):
            for j, b in enumerate(mods):
                assert dd.brute_force_isomorphic(a, b) == (i == j)


def test_brute_force_finds_conjugate(rng):
    D = dd.standard_module(3, 2, GF(3))
    C, _ = dd.random_conjugate(D, rng)
    assert dd.brute_force_isomorphic(D, C)


def test_brute_force_budget(monkeypatch):
    monkeypatch.setenv("EO_THETA_BUDGET", "iso=100")
    D = dd.standard_module(3, 1, GF(2))
    with pytest.raises(dd.BudgetError):
        dd.brute_force_isomorphic(D, D)


def test_brute_force_default_budget_stops_at_n4():
    D = dd.standard_module(4, 1, GF(2))
    with pytest.raises(dd.BudgetError):
        dd.brute_force_isomorphic(D, D)


def test_json_round_trip_and_schema(rng):
    D, _ = dd.random_conjugate(dd.standard_module(3, 2, GF(3, 2)), rng)
    obj = json.loads(io.dumps(dd.module_to_json(D)))
    io.validate(obj, "module")
    E = dd.module_from_json(obj)
    assert np.array_equal(E.F_matrix, D.F_matrix) and np.array_equal(E.V_matrix, D.V_matrix)
    assert dd.eo_class(E).r == 2


@pytest.mark.parametrize("name", ["standard_3_2.json", "conjugated_3_2.json", "conjugated_3_2_f4.json"])
def test_fixtures_classify(name):
    obj = io.validate(io.load_fixture(name), "module")
    D = dd.module_from_json(obj)
    assert dd.verify_bt1(D).ok
    assert dd.eo_class(D).r == 2


def test_signature_mismatch_raises():
    D = dd.standard_module(3, 1, GF(2))
    swapped = dd.DieudonneModule(D.field, 3, D.F_matrix, D.V_matrix, D.pairing,
                                 sigma=D.sigmabar, sigmabar=D.sigma)
    with pytest.raises(dd.ModuleError):
        dd.eo_class(swapped)


def test_bad_parameters():
    with pytest.raises(dd.ModuleError):
        dd.standard_module(1, 1)
    with pytest.raises(dd.ModuleError):
        dd.standard_module(3, 4)
