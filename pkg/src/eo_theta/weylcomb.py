"""Shuffles, lengths and weight bookkeeping for signature (n-1, 1).

Weights ``k`` are dominant integer vectors of length n-1 (the rank of the
Hodge bundle), paired with an integer exponent ``w`` of the determinant
factor.  ``lambda`` coordinates record consecutive differences.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod

import numpy as np


class WeightError(ValueError):
    pass


# ------------------------------------------------------------------ shuffles

def shuffle(n, r):
    """One-line form of ``w_r``: r -> n, i -> i for i < r, i -> i-1 for i > r."""
    if not 1 <= r <= n:
        raise WeightError(f"r={r} outside [1, {n}]")
    return tuple(i if i < r else (n if i == r else i - 1) for i in range(1, n + 1))


def shuffles(n):
    """``[w_1, ..., w_n]``, in decreasing EO order (w_n is the identity)."""
    if n < 2:
        raise WeightError("n must be >= 2")
    return [shuffle(n, r) for r in range(1, n + 1)]


def inverse(w):
    inv = [0] * len(w)
    for i, wi in enumerate(w, start=1):
        inv[wi - 1] = i
    return tuple(inv)


def is_shuffle(w):
    inv = inverse(w)
    return all(inv[i] < inv[i + 1] for i in range(len(w) - 2))


def length(w):
    """Sum of ``w^{-1}(i) - i`` over i < n."""
    if not is_shuffle(w):
        raise WeightError(f"{list(w)} is not a shuffle")
    inv = inverse(w)
    return sum(inv[i - 1] - i for i in range(1, len(w)))


def inversions(w):
    return sum(1 for i, j in itertools.combinations(range(len(w)), 2) if w[i] > w[j])


def stratum_index(w):
    """The r with ``w = w_r``."""
    n = len(w)
    for r in range(1, n + 1):
        if tuple(w) == shuffle(n, r):
            return r
    raise WeightError(f"{list(w)} is not one of the w_r")


def closure_chain(n, r):
    """Strata in the closure of the w_r stratum, largest first."""
    return [shuffle(n, s) for s in range(r, n + 1)]


def sigmabar_p_rank(n, r):
    return n - 1 if r == 1 else n - r


def total_p_rank(n, r):
    return n if r == 1 else n - r


# ------------------------------------------------------------------ weights

def is_dominant(k):
    return all(a >= b for a, b in zip(k, k[1:]))


@dataclass(frozen=True)
class AutomorphicWeight:
    k: tuple
    w: int = 0

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(x) for x in self.k))
        object.__setattr__(self, "w", int(self.w))
        if not is_dominant(self.k):
            raise WeightError(f"k={list(self.k)} is not dominant")

    @property
    def rank(self):
        return len(self.k)

    def applicable(self):
        """Operators need the last entry non-negative."""
        return not self.k or self.k[-1] >= 0

    def shift(self, dk, dw=0):
        return AutomorphicWeight(tuple(a + b for a, b in zip(self.k, dk)), self.w + dw)

    def reduce_w(self, p):
        """Exponent of the determinant factor taken mod p-1."""
        return AutomorphicWeight(self.k, self.w % (p - 1) if p > 2 else 0)

    def as_dict(self):
        return {"k": list(self.k), "w": self.w}


def lambda_coords(k):
    k = tuple(int(x) for x in k)
    if not is_dominant(k):
        raise WeightError(f"k={list(k)} is not dominant")
    if not k:
        return ()
    return tuple(a - b for a, b in zip(k, k[1:])) + (k[-1],)


def from_lambda(lam):
    lam = tuple(int(x) for x in lam)
    if any(x < 0 for x in lam[:-1]):
        raise WeightError("all but the last lambda coordinate must be >= 0")
    return tuple(sum(lam[i:]) for i in range(len(lam)))


def _check_r(n, r):
    if n < 2 or not 1 <= r <= n - 1:
        raise WeightError(f"r={r} outside [1, {n - 1}]")


def delta_shift(r, p, n):
    """Weight shift of the theta operator on the w_r stratum."""
    _check_r(n, r)
    return (p + 1,) + (p,) * (n - r - 1) + (1,) * (r - 1)


def hasse_weight(r, p, n):
    """Weight of the partial Hasse invariant: p-1 on the first n-r entries."""
    _check_r(n, r)
    return (p - 1,) * (n - r) + (0,) * (r - 1)


def ks_weight(r, n):
    """Difference between the theta shift and the Hasse weight."""
    _check_r(n, r)
    return (2,) + (1,) * (n - 2)


# -------------------------------------------------------- S^k dimensions

def _sym_dim(rank, a):
    # dual convention for negative exponents
    a = abs(a)
    return comb(rank + a - 1, a) if rank else int(a == 0)


def s_construction_dim(k, m=None):
    """Dimension of the tensor construction ``S^k`` on an m-dimensional space."""
    k = tuple(k)
    m = len(k) if m is None else m
    if len(k) != m or not is_dominant(k):
        raise WeightError(f"k={list(k)} is not a dominant weight of length {m}")
    steps = [k[j] - (k[j + 1] if j + 1 < m else 0) for j in range(m)]
    return prod(_sym_dim(comb(m, j + 1), a) for j, a in enumerate(steps))


def weyl_product_dim(k, m=None):
    """Weyl's dimension formula for GL_m, computed with exact rationals."""
    k = tuple(k)
    m = len(k) if m is None else m
    if len(k) != m or not is_dominant(k):
        raise WeightError(f"k={list(k)} is not a dominant weight of length {m}")
    val = prod((Fraction(k[i] - k[j] + j - i, j - i) for i, j in itertools.combinations(range(m), 2)),
               start=Fraction(1))
    if val.denominator != 1:
        raise ArithmeticError("product formula did not give an integer")
    return int(val)


def dimension_crosscheck(k, m=None):
    s, wd = s_construction_dim(k, m), weyl_product_dim(k, m)
    return {"k": list(k), "s_construction_dim": s, "weyl_product_dim": wd, "mismatch": s != wd}


# ------------------------------------------------ Frobenius twist inside Sym^p

def monomials(m, d):
    """Exponent vectors of degree d in m variables, lexicographically decreasing."""
    out = [a for a in itertools.product(range(d, -1, -1), repeat=m) if sum(a) == d]
    return out


def _poly_mul(a, b, p):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % p
    return {e: c for e, c in out.items() if c}


def sym_power_matrix(g, d, p):
    """Matrix of ``Sym^d(g)`` on the monomial basis, g acting by substitution."""
    g = np.asarray(g, dtype=np.int64) % p
    m = g.shape[0]
    basis = monomials(m, d)
    pos = {e: i for i, e in enumerate(basis)}
    images = []
    for j in range(m):
        images.append({tuple(int(i == s) for s in range(m)): int(g[i, j]) for i in range(m) if g[i, j]})
    out = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for col, alpha in enumerate(basis):
        poly = {(0,) * m: 1}
        for j, a in enumerate(alpha):
            for _ in range(a):
                poly = _poly_mul(poly, images[j], p)
        for e, c in poly.items():
            out[pos[e], col] = c
    return out


@dataclass
class ReducibilityWitness:
    p: int
    m: int
    basis: list
    matrix: np.ndarray
    image_dim: int
    ambient_dim: int
    injective: bool
    equivariant: dict

    @property
    def ok(self):
        return self.injective and all(self.equivariant.values()) and self.image_dim < self.ambient_dim


def _generators(m, p):
    gens = {}
    for i in range(m - 1):
        up = np.eye(m, dtype=np.int64)
        up[i, i + 1] = 1
        down = np.eye(m, dtype=np.int64)
        down[i + 1, i] = 1
        gens[f"E{i + 1}{i + 2}(1)"] = up
        gens[f"E{i + 2}{i + 1}(1)"] = down
    gen = next(a for a in range(1, p) if len({pow(a, e, p) for e in range(p - 1)}) == p - 1)
    diag = np.eye(m, dtype=np.int64)
    diag[0, 0] = gen
    gens[f"diag({gen},1)"] = diag
    return gens


def symp_reducibility_witness(p, m=2):
    """The embedding of the Frobenius twist of the standard rep into Sym^p.

    Sends ``e_i`` to ``e_i^p`` and checks injectivity and equivariance
    under elementary and diagonal generators of GL_m(F_p).
    """
    from .field import GF
    from . import semilinear as sl
    basis = monomials(m, p)
    W = np.zeros((len(basis), m), dtype=np.int64)
    for i in range(m):
        W[basis.index(tuple(p * int(s == i) for s in range(m))), i] = 1
    F = GF(p)
    injective = sl.rank(F, W) == m
    equivariant = {}
    for name, g in _generators(m, p).items():
        # g acts on the twist through g^(p) = g over F_p
        lhs = sl.matmul(F, sym_power_matrix(g, p, p), W)
        rhs = sl.matmul(F, W, g % p)
        equivariant[name] = bool(np.array_equal(lhs, rhs))
    return ReducibilityWitness(p, m, basis, W, sl.rank(F, W), len(basis), injective, equivariant)


# ------------------------------------------------------------- strata table

def strata_rows(n, p):
    """One record per stratum; feeds the ``strata`` command."""
    rows = []
    for r in range(1, n + 1):
        w = shuffle(n, r)
        row = {
            "r": r,
            "w_r": list(w),
            "length": length(w),
            "p_rank_total": total_p_rank(n, r),
            "p_rank_sigmabar": sigmabar_p_rank(n, r),
            "closure": [list(v) for v in closure_chain(n, r)],
        }
        if r <= n - 1:
            d = delta_shift(r, p, n)
            h = hasse_weight(r, p, n)
            row.update(delta=list(d), hasse_weight=list(h),
                       lambda_shift=list(lambda_coords(d)), hasse_lambda=list(lambda_coords(h)))
        else:
            row.update(delta=None, hasse_weight=None, lambda_shift=None, hasse_lambda=None)
        rows.append(row)
    return rows
