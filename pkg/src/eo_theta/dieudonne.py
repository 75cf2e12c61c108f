"""Dieudonne modules of BT_1's with O_E-action of signature (n-1, 1).

A module ``D = D_sigma + D_sigmabar`` of rank 2n over F_q carries

* Frobenius as a sigma-semilinear endomorphism ``x -> M_F x^(p)``;
* Verschiebung as a linear map ``D -> D^(p)``, ``x -> M_V x``.  Its
  sigma^{-1}-semilinear avatar on D is ``x -> M_V^(1/p) x^(1/p)``, which is
  what :attr:`DieudonneModule.V` returns so that powers compose with
  :func:`eo_theta.semilinear.compose`;
* an alternating pairing ``<x, y> = x^T P y``.

Coordinates are ``e_1..e_n`` (the sigma block) followed by ``f_1..f_n``
unless ``blocks`` says otherwise.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import semilinear as sl
from .config import budgets
from .field import ExtField, GF
from .semilinear import SemilinearMap
from .weylcomb import shuffle, length

class ModuleError(ValueError):
    pass


class BudgetError(RuntimeError):
    pass


def iso_budget():
    """Largest number of candidate matrices the isomorphism search may scan."""
    return budgets()["iso"]


@dataclass(frozen=True, eq=False)
class DieudonneModule:
    field: ExtField
    n: int
    F_matrix: np.ndarray
    V_matrix: np.ndarray
    pairing: np.ndarray
    sigma: tuple = None
    sigmabar: tuple = None

    def __post_init__(self):
        for name in ("F_matrix", "V_matrix", "pairing"):
            M = np.array(getattr(self, name), dtype=np.int64, copy=True)
            if M.shape != (2 * self.n, 2 * self.n):
                raise ModuleError(f"{name} must be {2 * self.n}x{2 * self.n}, got {M.shape}")
            M.setflags(write=False)
            object.__setattr__(self, name, M)
        if self.sigma is None:
            object.__setattr__(self, "sigma", tuple(range(self.n)))
        if self.sigmabar is None:
            object.__setattr__(self, "sigmabar", tuple(range(self.n, 2 * self.n)))
        object.__setattr__(self, "sigma", tuple(int(i) for i in self.sigma))
        object.__setattr__(self, "sigmabar", tuple(int(i) for i in self.sigmabar))
        if sorted(self.sigma + self.sigmabar) != list(range(2 * self.n)) or len(self.sigma) != self.n:
            raise ModuleError("blocks must split the 2n coordinates into two halves")

    @property
    def rank(self):
        return 2 * self.n

    @property
    def F(self):
        return SemilinearMap(self.field, self.F_matrix, 1)

    @property
    def V(self):
        return SemilinearMap(self.field, self.field.frobenius_array(self.V_matrix, -1), -1)

    def block_space(self, which):
        idx = self.sigma if which == "sigma" else self.sigmabar
        S = sl.zeros(self.n, self.rank)
        for row, i in enumerate(idx):
            S[row, i] = 1
        return sl.span(self.field, S, self.rank)

    def cm_dims(self, S):
        """(dim S cap D_sigma, dim S cap D_sigmabar) of a row-basis subspace."""
        F = self.field
        return (sl.intersect(F, S, self.block_space("sigma")).shape[0],
                sl.intersect(F, S, self.block_space("sigmabar")).shape[0])


# ------------------------------------------------------------ construction

def standard_module(n, r, field=None):
    """The standard object for the EO stratum of ``w_r``."""
    if n < 2:
        raise ModuleError("n must be >= 2")
    if not 1 <= r <= n:
        raise ModuleError(f"r={r} outside [1, {n}]")
    F = field if field is not None else GF(2)
    e = lambda i: i - 1          # noqa: E731
    f = lambda i: n + i - 1      # noqa: E731
    MF = sl.zeros(2 * n, 2 * n)
    MV = sl.zeros(2 * n, 2 * n)
    # columns are images of basis vectors
    MF[e(1), e(r)] = 1
    for i in range(1, r):
        MF[f(i + 1), f(i)] = 1
    for i in range(r + 1, n + 1):
        MF[f(i), f(i)] = 1
    for i in range(2, r + 1):
        MV[e(i - 1), e(i)] = 1
    for i in range(r + 1, n + 1):
        MV[e(i), e(i)] = 1
    MV[f(r), f(1)] = 1
    P = sl.zeros(2 * n, 2 * n)
    for i in range(1, n + 1):
        P[e(i), f(i)] = 1
        P[f(i), e(i)] = F.neg(1)
    return DieudonneModule(F, n, MF, MV, P)


def random_invertible(F, n, rng):
    while True:
        g = F.random_matrix(rng, n, n)
        if sl.det(F, g) != 0:
            return g


def transport(D, g):
    """The module with coordinates ``x' = g x``; ``g`` must respect blocks."""
    F = D.field
    g = np.asarray(g, dtype=np.int64)
    for a in D.sigma:
        for b in D.sigmabar:
            if g[a, b] or g[b, a]:
                raise ModuleError("base change does not preserve the CM decomposition")
    gp = F.frobenius_array(g, 1)
    g_inv = sl.inverse(F, g)
    MF = sl.matmul(F, sl.matmul(F, g, D.F_matrix), sl.inverse(F, gp))
    MV = sl.matmul(F, sl.matmul(F, gp, D.V_matrix), g_inv)
    P = sl.matmul(F, sl.matmul(F, g_inv.T, D.pairing), g_inv)
    return DieudonneModule(F, D.n, MF, MV, P, D.sigma, D.sigmabar)


def block_diag(D, g_sigma, g_sigmabar):
    g = sl.zeros(D.rank, D.rank)
    for a, i in enumerate(D.sigma):
        for b, j in enumerate(D.sigma):
            g[i, j] = g_sigma[a][b]
    for a, i in enumerate(D.sigmabar):
        for b, j in enumerate(D.sigmabar):
            g[i, j] = g_sigmabar[a][b]
    return g


def random_conjugate(D, rng):
    """Random equivariant base change; returns ``(module, g)``."""
    F = D.field
    g = block_diag(D, random_invertible(F, D.n, rng), random_invertible(F, D.n, rng))
    return transport(D, g), g


# ------------------------------------------------------------ verification

@dataclass
class BT1Report:
    ok: bool
    checks: dict = dc_field(default_factory=dict)
    failure: str = None

    def as_dict(self):
        return {"ok": self.ok, "checks": dict(self.checks), "failure": self.failure}


def _block_preserving(D, M):
    for a in D.sigma:
        for b in D.sigmabar:
            if M[a, b] or M[b, a]:
                return False
    return True


def verify_bt1(D):
    """Check the BT_1 identities, CM block structure and the pairing."""
    F = D.field
    Fm, Vm = D.F, D.V
    kerF, imF = Fm.kernel(), Fm.image()
    kerV, imV = Vm.kernel(), Vm.image()
    P = D.pairing
    checks = {}
    checks["ker F = im V"] = sl.same_space(F, kerF, imV)
    checks["ker V = im F"] = sl.same_space(F, kerV, imF)
    checks["F preserves CM blocks"] = _block_preserving(D, D.F_matrix)
    checks["V preserves CM blocks"] = _block_preserving(D, D.V_matrix)
    checks["pairing perfect"] = sl.det(F, P) != 0
    checks["pairing alternating"] = (
        np.array_equal(P.T, sl.mat_neg(F, P)) and not np.any(np.diag(P)))
    # <F x, y> = <x, V y>^p  <=>  M_F^T P = P^(p) M_V
    checks["F, V adjoint under pairing"] = np.array_equal(
        sl.matmul(F, D.F_matrix.T, P), sl.matmul(F, F.frobenius_array(P, 1), D.V_matrix))
    failure = next((name for name, ok in checks.items() if not ok), None)
    return BT1Report(failure is None, checks, failure)


# -------------------------------------------------------------- invariants

def p_rank(D):
    """(total, sigmabar) stable ranks of Frobenius."""
    Fn = sl.power(D.F, 2 * D.n)
    total = Fn.rank()
    idx = list(D.sigmabar)
    block = SemilinearMap(D.field, Fn.matrix[np.ix_(idx, idx)], Fn.twist)
    return total, block.rank()


def hodge_signature(D):
    """CM dimensions of ``D[F] = ker F``, i.e. of the Hodge filtration."""
    return D.cm_dims(D.F.kernel())


@dataclass(frozen=True)
class EOClass:
    r: int
    shuffle: tuple
    length: int
    p_ranks: tuple

    def as_dict(self):
        return {"r": self.r, "w_r": list(self.shuffle), "length": self.length,
                "p_ranks": {"total": self.p_ranks[0], "sigmabar": self.p_ranks[1]}}


def eo_class(D):
    sig = hodge_signature(D)
    if sig != (D.n - 1, 1):
        raise ModuleError(f"signature of ker F is {sig}, expected ({D.n - 1}, 1)")
    total, sbar = p_rank(D)
    r = D.n - sbar
    w = shuffle(D.n, r)
    return EOClass(r, w, length(w), (total, sbar))


def delta_torsion_ranks(D):
    """(dim im F cap D_sigma, dim im V cap D_sigma)."""
    S = D.block_space("sigma")
    F = D.field
    return (sl.intersect(F, D.F.image(), S).shape[0],
            sl.intersect(F, D.V.image(), S).shape[0])


# ------------------------------------------------------ canonical filtration

@dataclass
class Flag:
    steps: list            # row-basis subspaces, increasing
    cm_dims: list          # (sigma, sigmabar) dims of each step
    graded_cm_dims: list   # dims of successive quotients

    def as_dict(self):
        return {"dims": [s.shape[0] for s in self.steps],
                "cm_dims": [list(t) for t in self.cm_dims],
                "graded_cm_dims": [list(t) for t in self.graded_cm_dims]}


def apply_F(D, S):
    F = D.field
    return sl.image(F, D.F_matrix, sl.frobenius_rows(F, S, 1))


def V_preimage(D, S):
    """``{x : V x in S}`` with V read as the sigma^{-1}-linear endomorphism."""
    F = D.field
    return sl.preimage(F, D.V_matrix, sl.frobenius_rows(F, S, 1))


def canonical_filtration(D):
    """Coarsest flag containing 0 and D stable under F(.) and V^{-1}(.)."""
    F = D.field
    dim = D.rank
    key = lambda S: (S.shape[0], S.tobytes())   # noqa: E731
    found = {}
    todo = [sl.zeros(0, dim), sl.identity(dim)]
    while todo:
        S = sl.span(F, todo.pop(), dim)
        if key(S) in found:
            continue
        found[key(S)] = S
        if len(found) > dim + 1:
            raise ModuleError("closure exceeded 2n+1 subspaces; not a BT_1")
        todo.append(apply_F(D, S))
        todo.append(V_preimage(D, S))
    steps = sorted(found.values(), key=lambda S: S.shape[0])
    for a, b in zip(steps, steps[1:]):
        if a.shape[0] == b.shape[0] or not sl.contains(F, b, a):
            raise ModuleError("closure is not a chain of subspaces")
    cm = [D.cm_dims(S) for S in steps]
    graded = [(b[0] - a[0], b[1] - a[1]) for a, b in zip(cm, cm[1:])]
    return Flag(steps, cm, graded)


# ------------------------------------------------------ isomorphism oracle

@lru_cache(maxsize=8)
def _all_invertible(p, n):
    mats = np.array(list(itertools.product(range(p), repeat=n * n)), dtype=np.int64).reshape(-1, n, n)
    # determinants of these small integer matrices are exact in double precision
    dets = np.rint(np.linalg.det(mats)).astype(np.int64) % p
    return mats[dets != 0]


def _block(M, rows, cols):
    return np.asarray(M)[np.ix_(rows, cols)]


def _commuting(mats, A1, A2, p):
    """Indices of g with ``g A1 = A2 g`` (prime field, so g^(p) = g)."""
    lhs = np.einsum("gij,jk->gik", mats, A1) % p
    rhs = np.einsum("ij,gjk->gik", A2, mats) % p
    return np.all((lhs == rhs).reshape(len(mats), -1), axis=1)


def brute_force_isomorphic(D1, D2):
    """Exhaustive search for an equivariant isomorphism ``D1 -> D2``.

    Scans every pair ``(g_sigma, g_sigmabar)`` of invertible matrices for
    one intertwining F and V and carrying one pairing to a nonzero multiple
    of the other.  Only prime fields, and only while ``q^(n^2)`` fits in
    the budget (``EO_THETA_BUDGET``, default 20000).
    """
    if D1.n != D2.n or D1.field != D2.field:
        return False
    F, n = D1.field, D1.n
    if F.k != 1:
        raise BudgetError("isomorphism search is implemented over prime fields only")
    budget = iso_budget()
    if F.q ** (n * n) > budget:
        raise BudgetError(f"search space {F.q}^{n * n} exceeds budget {budget}; set EO_THETA_BUDGET")
    p = F.p
    mats = _all_invertible(p, n)
    s1, b1, s2, b2 = list(D1.sigma), list(D1.sigmabar), list(D2.sigma), list(D2.sigmabar)
    ok_s = np.ones(len(mats), bool)
    ok_b = np.ones(len(mats), bool)
    for M1, M2 in ((D1.F_matrix, D2.F_matrix), (D1.V_matrix, D2.V_matrix)):
        ok_s &= _commuting(mats, _block(M1, s1, s1), _block(M2, s2, s2), p)
        ok_b &= _commuting(mats, _block(M1, b1, b1), _block(M2, b2, b2), p)
    gs, gb = mats[ok_s], mats[ok_b]
    if not len(gs) or not len(gb):
        return False
    P1, P2 = D1.pairing % p, D2.pairing % p
    blocks = [(s1, s2, gs), (b1, b2, gb)]
    # pulled-back pairing g^T P2 g, block by block, must equal c * P1
    for i_s in range(len(gs)):
        pulled = {}
        for (r1, r2, gr), (c1, c2, gc) in itertools.product(blocks, repeat=2):
            left = gs[i_s] if gr is gs else None
            right = gs[i_s] if gc is gs else None
            P2blk = _block(P2, r2, c2)
            lhs = (left.T @ P2blk) if left is not None else np.einsum("bji,jk->bik", gb, P2blk)
            if right is not None:
                val = lhs @ right
            else:
                val = (np.einsum("ik,bkl->bil", lhs, gb) if lhs.ndim == 2
                       else np.einsum("bik,bkl->bil", lhs, gb))
            pulled[(id(gr), id(gc))] = (val % p, _block(P1, r1, c1))
        for c in range(1, p):
            good = np.ones(len(gb), bool)
            for val, target in pulled.values():
                t = (c * target) % p
                if val.ndim == 2:
                    good &= bool(np.array_equal(val, t))
                else:
                    good &= np.all((val == t).reshape(len(gb), -1), axis=1)
            if good.any():
                return True
    return False


# ---------------------------------------------------------------- JSON I/O

def module_to_json(D):
    F = D.field
    return {
        "p": F.p, "k": F.k, "n": D.n,
        "F": sl.matrix_to_json(F, D.F_matrix, 1),
        "V": sl.matrix_to_json(F, D.V_matrix, 1),
        "pairing": sl.matrix_to_json(F, D.pairing, 0),
        "blocks": {"sigma": list(D.sigma), "sigmabar": list(D.sigmabar)},
    }


def module_from_json(obj):
    F = ExtField(int(obj["p"]), int(obj.get("k", 1)), obj["F"].get("modulus"))
    _, MF, _ = sl.matrix_from_json(obj["F"], F)
    _, MV, _ = sl.matrix_from_json(obj["V"], F)
    _, P, _ = sl.matrix_from_json(obj["pairing"], F)
    blocks = obj.get("blocks", {})
    return DieudonneModule(F, int(obj["n"]), MF, MV, P, blocks.get("sigma"), blocks.get("sigmabar"))
