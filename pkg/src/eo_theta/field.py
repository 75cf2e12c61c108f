"""Finite fields F_{p^k} with table-driven arithmetic.

An element of F_q, q = p^k, is encoded as the integer ``c_0 + c_1 p + ...
+ c_{k-1} p^{k-1}`` where ``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` is its
residue modulo the defining polynomial.  Multiplication and addition go
through exp/log/Zech tables, so every operation is a table lookup and the
same tables feed the compiled matrix kernels in :mod:`eo_theta.kernels`.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import kernels

# Monic primitive polynomials [c_0, ..., c_{k-1}, 1] over F_p, chosen as the
# first primitive polynomial in lexicographic order of (c_{k-1}, ..., c_0).
DEFAULT_MODULI = {
    (2, 1): (1, 1), (2, 2): (1, 1, 1), (2, 3): (1, 1, 0, 1), (2, 4): (1, 1, 0, 0, 1),
    (3, 1): (1, 1), (3, 2): (2, 1, 1), (3, 3): (1, 2, 0, 1), (3, 4): (2, 1, 0, 0, 1),
    (5, 1): (2, 1), (5, 2): (2, 1, 1), (5, 3): (2, 3, 0, 1), (5, 4): (2, 2, 1, 0, 1),
    (7, 1): (2, 1), (7, 2): (3, 1, 1), (7, 3): (2, 3, 0, 1), (7, 4): (5, 3, 1, 0, 1),
    (11, 1): (3, 1), (11, 2): (7, 1, 1), (11, 3): (4, 1, 0, 1), (11, 4): (2, 1, 0, 0, 1),
    (13, 1): (2, 1), (13, 2): (2, 1, 1), (13, 3): (6, 1, 0, 1), (13, 4): (2, 1, 1, 0, 1),
}

MAX_ORDER = 30_000


class FieldError(ValueError):
    pass


def is_prime(p):
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p ** 0.5) + 1))


def _poly_rem(a, m, p):
    """Remainder of ``a`` by monic ``m`` over F_p (lists, low degree first)."""
    a = [c % p for c in a]
    dm = len(m) - 1
    for d in range(len(a) - 1, dm - 1, -1):
        c = a[d]
        if c:
            for j in range(dm + 1):
                a[d - dm + j] = (a[d - dm + j] - c * m[j]) % p
    return a[:dm] if dm else []


def _monic_polys(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def is_irreducible(modulus, p):
    """No roots and no monic factor of degree <= k/2."""
    k = len(modulus) - 1
    if k < 1 or modulus[-1] % p != 1:
        return False
    if k == 1:
        return True
    if any(sum(c * pow(x, i, p) for i, c in enumerate(modulus)) % p == 0 for x in range(p)):
        return False
    for deg in range(2, k // 2 + 1):
        for f in _monic_polys(p, deg):
            if not any(_poly_rem(list(modulus), f, p)):
                return False
    return True


class ExtField:
    """The field F_{p^k} = F_p[x]/(modulus).

    Parameters
    ----------
    p : int
        Prime characteristic.
    k : int
        Extension degree.
    modulus : sequence of int, optional
        Monic irreducible ``[c_0, ..., c_{k-1}, 1]``.  Defaults to the
        built-in table for p <= 13, k <= 4.
    """

    def __init__(self, p, k=1, modulus=None):
        if not is_prime(p):
            raise FieldError(f"p={p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        if p ** k > MAX_ORDER:
            raise FieldError(f"field order {p}^{k} exceeds {MAX_ORDER}")
        if modulus is None:
            if (p, k) in DEFAULT_MODULI:
                modulus = DEFAULT_MODULI[(p, k)]
            else:
                modulus = next(m for m in _monic_polys(p, k) if m[0] and is_irreducible(m, p))
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or not is_irreducible(modulus, p):
            raise FieldError(f"modulus {list(modulus)} is not a monic irreducible of degree {k} over F_{p}")
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = modulus
        self._build_tables()

    def _poly_of(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _int_of(self, coeffs):
        return sum((c % self.p) * self.p ** i for i, c in enumerate(coeffs))

    def _slow_mul(self, a, b):
        pa, pb = self._poly_of(a), self._poly_of(b)
        prod = [0] * (2 * self.k)
        for i, x in enumerate(pa):
            if x:
                for j, y in enumerate(pb):
                    prod[i + j] += x * y
        return self._int_of(_poly_rem(prod, list(self.modulus), self.p))

    def _build_tables(self):
        q = self.q
        order = q - 1
        gen = None
        first = [self.p] if self.k > 1 else []
        for cand in first + list(range(1, q)):
            x, seen = 1, 0
            for e in range(1, order + 1):
                x = self._slow_mul(x, cand)
                if x == 1:
                    seen = e
                    break
            if seen == order:
                gen = cand
                break
        self.generator = gen
        exp = np.zeros(2 * order + 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for e in range(order):
            exp[e] = x
            log[x] = e
            x = self._slow_mul(x, gen)
        exp[order:2 * order] = exp[:order]
        exp[2 * order] = exp[0]
        one_plus = np.zeros(order, dtype=np.int64)
        for e in range(order):
            c = self._poly_of(int(exp[e]))
            c[0] = (c[0] + 1) % self.p
            one_plus[e] = self._int_of(c)
        zech = np.where(one_plus == 0, -1, log[one_plus])
        neg = np.zeros(q, dtype=np.int64)
        for a in range(q):
            neg[a] = self._int_of([-c for c in self._poly_of(a)])
        self.tables = kernels.FieldTables(q, order, exp, log, zech, neg)
        # plain lists: scalar indexing on numpy arrays is slow from Python
        self._order = order
        self._exp = exp.tolist()
        self._log = log.tolist()
        self._zech = zech.tolist()
        self._neg = neg.tolist()

    # -- scalar arithmetic -------------------------------------------------
    def __call__(self, value):
        """Embed an integer of F_p, or a coefficient list, as an element."""
        if isinstance(value, (list, tuple)):
            return self._int_of(value)
        return int(value) % self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self._order]
        return 0 if z < 0 else self._exp[(la + z) % self._order]

    def neg(self, a):
        return (-a) % self.p if self.k == 1 else self._neg[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % self._order]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero is not invertible")
        return self._exp[(self._order - self._log[a]) % self._order]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero is not invertible")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self._order]

    def frobenius(self, a, power=1):
        """``a^(p^power)``; negative powers give the inverse Frobenius."""
        if a == 0:
            return 0
        if self.k == 1:
            return a
        shift = pow(self.p, power % self.k, self._order)
        return self._exp[(self._log[a] * shift) % self._order]

    def from_int(self, n):
        """Image of an integer under Z -> F_p -> F_q."""
        return int(n) % self.p

    def elements(self):
        return range(self.q)

    def coeffs(self, a):
        return self._poly_of(a)

    # -- array arithmetic ---------------------------------------------------
    def array(self, rows):
        return np.array(rows, dtype=np.int64).reshape(np.shape(rows)) % self.q if np.size(rows) else np.zeros(np.shape(rows), dtype=np.int64)

    def frobenius_array(self, A, power=1):
        A = np.asarray(A, dtype=np.int64)
        if power % self.k == 0 or A.size == 0:
            return A.copy()
        t = self.tables
        shift = pow(self.p, power % self.k, t.order)
        out = np.zeros_like(A)
        nz = A != 0
        out[nz] = t.exp[(t.log[A[nz]] * shift) % t.order]
        return out

    def random_element(self, rng):
        return int(rng.integers(self.q))

    def random_matrix(self, rng, rows, cols):
        return rng.integers(0, self.q, size=(rows, cols), dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, ExtField) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"ExtField(p={self.p}, k={self.k}, modulus={list(self.modulus)})"


@lru_cache(maxsize=None)
def GF(p, k=1):
    """Cached field with the default modulus."""
    return ExtField(p, k)


def frobenius(F, x, a=1):
    return F.frobenius(x, a)
