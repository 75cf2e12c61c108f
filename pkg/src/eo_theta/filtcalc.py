"""Finite descending filtrations on explicit vector spaces over F_q.

A :class:`FilteredModule` stores ``F^0 = ambient ⊇ F^1 ⊇ ... ⊇ F^top = 0``
as reduced row-basis matrices.  Tensor products, duals, exterior and
symmetric powers are built by spanning sets in the natural bases:

* ``A ⊗ B``: index ``i * dim B + j`` for ``a_i ⊗ b_j``;
* ``∧^j``: increasing index tuples, coordinates are j x j minors;
* ``Sym^j``: exponent vectors from :func:`eo_theta.weylcomb.monomials`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from . import semilinear as sl
from .field import ExtField
from .weylcomb import monomials


class FiltrationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FilteredModule:
    field: ExtField
    dim: int
    steps: tuple

    def __post_init__(self):
        F = self.field
        steps = [sl.span(F, np.asarray(S, dtype=np.int64).reshape(-1, self.dim), self.dim)
                 for S in self.steps]
        if not steps or steps[0].shape[0] != self.dim:
            raise FiltrationError("F^0 must be the whole space")
        if steps[-1].shape[0] != 0:
            steps.append(sl.zeros(0, self.dim))
        while len(steps) > 1 and steps[-2].shape[0] == 0:
            steps.pop()
        for big, small in zip(steps, steps[1:]):
            if not sl.contains(F, big, small):
                raise FiltrationError("steps are not descending")
        object.__setattr__(self, "steps", tuple(steps))

    @classmethod
    def trivial(cls, field, dim):
        return cls(field, dim, (sl.identity(dim),))

    @classmethod
    def coordinate(cls, field, dims):
        """``F^i`` spanned by the first ``dims[i]`` basis vectors."""
        n = dims[0]
        return cls(field, n, tuple(sl.identity(n)[:d] for d in dims))

    @classmethod
    def random(cls, field, dims, rng):
        """Nested subspaces of the given dimensions in a random basis."""
        n = dims[0]
        while True:
            g = field.random_matrix(rng, n, n)
            if sl.rank(field, g) == n:
                break
        return cls(field, n, tuple(g[:d] for d in dims))

    @property
    def top(self):
        """Index of the first zero step."""
        return len(self.steps) - 1

    def step(self, i):
        if i <= 0:
            return self.steps[0]
        if i >= self.top:
            return sl.zeros(0, self.dim)
        return self.steps[i]

    def step_dims(self):
        return [S.shape[0] for S in self.steps]

    def graded_dims(self):
        d = self.step_dims()
        return [a - b for a, b in zip(d, d[1:])]

    def graded_basis(self, i):
        """Vectors of ``F^i`` completing a basis of ``F^{i+1}``."""
        F = self.field
        lower = self.step(i + 1)
        out = []
        cur = lower
        for v in self.step(i):
            if not sl.contains(F, cur, v[None, :]):
                out.append(v)
                cur = np.vstack([cur, v[None, :]])
        return np.array(out, dtype=np.int64).reshape(-1, self.dim)

    def as_dict(self):
        return {"dim": self.dim, "step_dims": self.step_dims(), "graded_dims": self.graded_dims()}


def _same_field(*mods):
    if any(m.field != mods[0].field for m in mods):
        raise FiltrationError("field mismatch")
    return mods[0].field


# ------------------------------------------------------------------- tensor

def kron_span(F, A, B):
    """Row basis of span{a ⊗ b} for rows a of A, b of B."""
    dim = A.shape[1] * B.shape[1]
    if A.shape[0] == 0 or B.shape[0] == 0:
        return sl.zeros(0, dim)
    rows = [np.array([F.mul(int(x), int(y)) for x in a for y in b], dtype=np.int64)
            for a in A for b in B]
    return sl.span(F, np.array(rows), dim)


def tensor_filtration(A, B):
    F = _same_field(A, B)
    dim = A.dim * B.dim
    steps = []
    for k in range(A.top + B.top - 1):
        parts = [kron_span(F, A.step(i), B.step(k - i)) for i in range(k + 1)]
        steps.append(sl.space_sum(F, *parts) if parts else sl.zeros(0, dim))
    return FilteredModule(F, dim, tuple(steps))


def tensor_graded_formula(gA, gB):
    """``dim gr^k = sum_{i+j=k} dim gr^i(A) dim gr^j(B)``."""
    out = [0] * (len(gA) + len(gB) - 1)
    for i, a in enumerate(gA):
        for j, b in enumerate(gB):
            out[i + j] += a * b
    return out


def multi_tensor_graded_formula(graded):
    """Sum over multi-indices with ``|j| = k`` of the products of graded dims."""
    top = sum(len(g) - 1 for g in graded)
    out = [0] * (top + 1)
    for idx in itertools.product(*(range(len(g)) for g in graded)):
        term = 1
        for g, i in zip(graded, idx):
            term *= g[i]
        out[sum(idx)] += term
    return out


# --------------------------------------------------------------------- dual

def dual_filtration(A):
    """``F^i(A^∨) = (A / F^{r-i+1})^∨``, i.e. the annihilator of ``F^{r-i+1}``."""
    F = A.field
    r = A.top - 1
    steps = tuple(sl.annihilator(F, A.step(r - i + 1), A.dim) for i in range(r + 1))
    return FilteredModule(F, A.dim, steps)


# ------------------------------------------------------------------ Koszul

def wedge_basis(m, j):
    return list(itertools.combinations(range(m), j))


def wedge_vectors(F, vecs, m):
    """Coordinates of ``v_1 ∧ ... ∧ v_j`` in the basis :func:`wedge_basis`."""
    j = len(vecs)
    M = np.array(vecs, dtype=np.int64).reshape(j, m)
    return np.array([sl.det(F, M[:, list(c)]) for c in wedge_basis(m, j)], dtype=np.int64)


def wedge_product(F, m, x, j, y, jj):
    """Product ``∧^j × ∧^jj -> ∧^(j+jj)`` on coordinate vectors."""
    target = {c: i for i, c in enumerate(wedge_basis(m, j + jj))}
    out = np.zeros(len(target), dtype=np.int64)
    for a, xa in zip(wedge_basis(m, j), x):
        if not xa:
            continue
        for b, yb in zip(wedge_basis(m, jj), y):
            if not yb or set(a) & set(b):
                continue
            merged = a + b
            sign = sum(1 for s in a for t in b if s > t) % 2
            c = F.mul(int(xa), int(yb))
            pos = target[tuple(sorted(merged))]
            out[pos] = F.add(int(out[pos]), F.neg(c) if sign else c)
    return out


def koszul_filtration(F, sub, m, j):
    """``K^i(∧^j) = image of ∧^i F' ⊗ ∧^(j-i) F`` for a subspace F' of F_q^m."""
    if not 0 <= j <= m:
        raise FiltrationError(f"j={j} outside [0, {m}]")
    sub = sl.span(F, np.asarray(sub, dtype=np.int64).reshape(-1, m), m)
    full = sl.identity(m)
    dim = comb(m, j)
    steps = []
    for i in range(min(j, sub.shape[0]) + 1):
        rows = [wedge_vectors(F, [*a, *b], m)
                for a in itertools.combinations(sub, i)
                for b in itertools.combinations(full, j - i)]
        steps.append(sl.span(F, np.array(rows, dtype=np.int64).reshape(-1, dim), dim))
    return FilteredModule(F, dim, tuple(steps))


def koszul_graded_formula(m, d, j):
    return [comb(d, i) * comb(m - d, j - i) for i in range(min(j, d) + 1)]


def koszul_product_compatible(F, sub, m, j, jj):
    """Check ``K^i ∧ K^i' ⊆ K^(i+i')`` on spanning vectors."""
    Kj = koszul_filtration(F, sub, m, j)
    Kjj = koszul_filtration(F, sub, m, jj)
    Kt = koszul_filtration(F, sub, m, j + jj)
    for i in range(Kj.top):
        for ii in range(Kjj.top):
            target = Kt.step(i + ii)
            for x in Kj.step(i):
                for y in Kjj.step(ii):
                    z = wedge_product(F, m, x, j, y, jj)
                    if z.any() and not sl.contains(F, target, z[None, :]):
                        return False
    return True


# --------------------------------------------------------------------- Sym

def _poly_mul(F, a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = F.add(out.get(e, 0), F.mul(ca, cb))
    return {e: c for e, c in out.items() if c}


def sym_product(F, vecs, m):
    """Coordinates of ``v_1 ... v_j`` in the monomial basis of ``Sym^j``."""
    j = len(vecs)
    poly = {(0,) * m: 1}
    for v in vecs:
        lin = {tuple(int(s == i) for s in range(m)): int(c) for i, c in enumerate(v) if c}
        poly = _poly_mul(F, poly, lin)
    basis = monomials(m, j)
    return np.array([poly.get(e, 0) for e in basis], dtype=np.int64)


def weight_multisets(r, j, k):
    """Lambda(k): non-decreasing index tuples in [0, r] of length j summing to k."""
    return [c for c in itertools.combinations_with_replacement(range(r + 1), j) if sum(c) == k]


def adapted_basis(A):
    """Basis vectors with their levels: ``F^i`` is spanned by those of level >= i."""
    out = []
    for i in range(A.top):
        out.extend((i, v) for v in A.graded_basis(i))
    return out


def sym_filtration(A, j):
    """``F^k(Sym^j)``: products from steps ``F^{i_1}, ..., F^{i_j}`` with sum of i equal to k.

    With an adapted basis this is the span of the products of j basis
    vectors whose levels add up to at least k.
    """
    if j < 0:
        raise FiltrationError("j must be >= 0")
    F, m = A.field, A.dim
    dim = comb(m + j - 1, j)
    r = A.top - 1
    basis = adapted_basis(A)
    prods = []
    for pick in itertools.combinations_with_replacement(range(len(basis)), j):
        level = sum(basis[i][0] for i in pick)
        prods.append((level, sym_product(F, [basis[i][1] for i in pick], m)))
    steps = []
    for k in range(j * r + 1):
        rows = [v for level, v in prods if level >= k]
        steps.append(sl.span(F, np.array(rows, dtype=np.int64).reshape(-1, dim), dim))
    return FilteredModule(F, dim, tuple(steps))


def sym_filtration_direct(A, j):
    """Same filtration from the definition: spanning products over Lambda(k)."""
    F, m = A.field, A.dim
    dim = comb(m + j - 1, j)
    r = A.top - 1
    steps = []
    for k in range(j * r + 1):
        rows = []
        for lam in weight_multisets(r, j, k):
            groups = [(i, lam.count(i)) for i in sorted(set(lam))]
            choices = [list(itertools.combinations_with_replacement(A.step(i), e)) for i, e in groups]
            for pick in itertools.product(*choices):
                rows.append(sym_product(F, [v for part in pick for v in part], m))
        steps.append(sl.span(F, np.array(rows, dtype=np.int64).reshape(-1, dim), dim))
    return FilteredModule(F, dim, tuple(steps))


def sym_graded_formula(graded, j):
    """``dim gr^k = sum over Lambda(k) of prod_i dim Sym^(e_i)(gr^i)``."""
    r = len(graded) - 1
    out = []
    for k in range(j * r + 1):
        total = 0
        for lam in weight_multisets(r, j, k):
            term = 1
            for i in set(lam):
                e = lam.count(i)
                term *= comb(graded[i] + e - 1, e)
            total += term
        out.append(total)
    return out
