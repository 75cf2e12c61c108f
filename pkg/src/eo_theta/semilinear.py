"""Matrices over F_q and Frobenius-semilinear maps between coordinate spaces.

Subspaces are carried as matrices whose *rows* form a basis, kept in
reduced row echelon form so that equality of subspaces is equality of
arrays.  Maps act on column vectors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .field import ExtField, GF


# ------------------------------------------------------------ plain matrices

def zeros(rows, cols):
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n):
    return np.eye(n, dtype=np.int64)


def matmul(F, A, B):
    return kernels.matmul(A, B, F.tables)


def mat_add(F, A, B):
    return kernels.add_np(A, B, F.tables)


def mat_neg(F, A):
    return F.tables.neg[np.asarray(A, dtype=np.int64)]


def mat_sub(F, A, B):
    return mat_add(F, A, mat_neg(F, B))


def mat_scale(F, c, A):
    return kernels.mul_np(c, A, F.tables)


def rref(F, M):
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2:
        raise ValueError("expected a 2-d array")
    R, piv = kernels.rref(M, F.tables)
    return R[:len(piv)], piv


def rank(F, M):
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def det(F, M):
    """Determinant by elimination (used as an oracle for :func:`adjugate`)."""
    M = np.asarray(M, dtype=np.int64)
    if M.shape[0] != M.shape[1]:
        raise ValueError("determinant of a non-square matrix")
    return kernels.det(M, F.tables)


def inverse(F, M):
    n = M.shape[0]
    R, piv = rref(F, np.hstack([M, identity(n)]))
    if len(piv) < n or piv[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def nullspace(F, M):
    """Row basis of ``{v : M v = 0}``."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return identity(cols)
    R, piv = rref(F, M)
    free = [c for c in range(cols) if c not in set(piv.tolist())]
    basis = zeros(len(free), cols)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, c in enumerate(piv):
            basis[i, c] = F.neg(int(R[r, f]))
    return basis


# ------------------------------------------------------------- subspaces

def span(F, rows, dim=None):
    """Reduced row basis of the span of ``rows``."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return zeros(0, dim if dim is not None else (rows.shape[1] if rows.ndim == 2 else 0))
    return rref(F, rows)[0]


def column_space(F, M):
    return span(F, np.asarray(M, dtype=np.int64).T, M.shape[0])


def space_sum(F, *spaces):
    dim = spaces[0].shape[1]
    return span(F, np.vstack([s.reshape(-1, dim) for s in spaces]), dim)


def contains(F, big, small):
    if small.shape[0] == 0:
        return True
    return rank(F, np.vstack([big, small])) == rank(F, big)


def same_space(F, A, B):
    return A.shape == B.shape and np.array_equal(span(F, A, A.shape[1]), span(F, B, B.shape[1]))


def annihilator(F, S, dim):
    """Row basis of ``{u : u . s = 0 for all s in S}``."""
    if S.shape[0] == 0:
        return identity(dim)
    return nullspace(F, S)


def intersect(F, A, B):
    dim = A.shape[1]
    if A.shape[0] == 0 or B.shape[0] == 0:
        return zeros(0, dim)
    ann = np.vstack([annihilator(F, A, dim), annihilator(F, B, dim)])
    return annihilator(F, span(F, ann, dim), dim) if ann.shape[0] else identity(dim)


def image(F, M, S):
    """Image of the row-basis subspace ``S`` under ``v -> M v``."""
    if S.shape[0] == 0:
        return zeros(0, M.shape[0])
    return span(F, matmul(F, S, M.T), M.shape[0])


def preimage(F, M, S):
    """``{v : M v in span(S)}``."""
    U = annihilator(F, S, M.shape[0])
    if U.shape[0] == 0:
        return identity(M.shape[1])
    return nullspace(F, matmul(F, U, M))


def frobenius_rows(F, S, power):
    """Entrywise Frobenius of a subspace basis, re-reduced."""
    return span(F, F.frobenius_array(S, power), S.shape[1])


# ------------------------------------------------ division-free determinants

def det_generic(R, M):
    """Determinant over any commutative ring ``R`` by Laplace expansion.

    ``R`` provides ``add``, ``mul``, ``neg``, ``zero`` and ``one``.  No
    division is performed, so this is valid where the matrix is singular
    or the ring has zero divisors.  Cost is O(n 2^n) via memoised minors.
    """
    n = len(M)
    if n == 0:
        return R.one
    # minors[cols] = det of rows 0..len(cols)-1 restricted to ``cols``
    minors = {(): R.one}
    for size in range(1, n + 1):
        row = M[size - 1]
        new = {}
        for cols in _combinations(n, size):
            acc = R.zero
            for pos, c in enumerate(cols):
                entry = row[c]
                if _is_zero(R, entry):
                    continue
                rest = cols[:pos] + cols[pos + 1:]
                term = R.mul(entry, minors[rest])
                if (size - 1 - pos) % 2:
                    term = R.neg(term)
                acc = R.add(acc, term)
            new[cols] = acc
        minors = new
    return minors[tuple(range(n))]


def _combinations(n, size):
    from itertools import combinations
    return combinations(range(n), size)


def _is_zero(R, x):
    return x == R.zero if not hasattr(R, "is_zero") else R.is_zero(x)


def adjugate_generic(R, M):
    """Classical adjoint: transpose of the cofactor matrix."""
    n = len(M)
    if n == 1:
        return [[R.one]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            d = det_generic(R, minor)
            adj[j][i] = R.neg(d) if (i + j) % 2 else d
    return adj


def adjugate(F, M):
    """Adjugate of a square matrix over F_q, by cofactors."""
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("adjugate of a non-square matrix")
    return np.array(adjugate_generic(F, M.tolist()), dtype=np.int64).reshape(M.shape)


# --------------------------------------------------------- semilinear maps

@dataclass(frozen=True, eq=False)
class SemilinearMap:
    """``v -> matrix . v^(p^twist)`` from F_q^domain_dim to F_q^codomain_dim."""

    field: ExtField
    matrix: np.ndarray
    twist: int = 0

    def __post_init__(self):
        M = np.array(self.matrix, dtype=np.int64, copy=True)
        if M.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def domain_dim(self):
        return self.matrix.shape[1]

    @property
    def codomain_dim(self):
        return self.matrix.shape[0]

    def __call__(self, v):
        v = np.asarray(v, dtype=np.int64).reshape(-1, 1)
        return matmul(self.field, self.matrix, self.field.frobenius_array(v, self.twist)).ravel()

    def __eq__(self, other):
        return (isinstance(other, SemilinearMap) and self.field == other.field
                and self.twist == other.twist and np.array_equal(self.matrix, other.matrix))

    def __repr__(self):
        return f"SemilinearMap(twist={self.twist}, matrix={self.matrix.tolist()})"

    def rank(self):
        return semilinear_rank(self)

    def kernel(self):
        return semilinear_kernel(self)

    def image(self):
        return semilinear_image(self)


def compose(phi, psi):
    """``phi o psi``: twists add, matrix ``M_phi . M_psi^(p^twist_phi)``."""
    if psi.codomain_dim != phi.domain_dim:
        raise ValueError(f"cannot compose: codomain {psi.codomain_dim} != domain {phi.domain_dim}")
    if phi.field != psi.field:
        raise ValueError("field mismatch")
    F = phi.field
    M = matmul(F, phi.matrix, F.frobenius_array(psi.matrix, phi.twist))
    return SemilinearMap(F, M, phi.twist + psi.twist)


def power(phi, e):
    if phi.domain_dim != phi.codomain_dim:
        raise ValueError("power of a non-endomorphism")
    out = SemilinearMap(phi.field, identity(phi.domain_dim), 0)
    for _ in range(e):
        out = compose(phi, out)
    return out


def _fp_basis(F):
    return [F.p ** s for s in range(F.k)]


def linearize(phi):
    """Matrix over F_p of ``phi`` seen as an F_p-linear map.

    Coordinates are ordered (vector index, F_p-basis index) with the F_p
    basis 1, x, ..., x^{k-1} of F_q.  Entries are integers in [0, p).
    """
    F = phi.field
    k = F.k
    if k == 1:
        # Frobenius is the identity on F_p
        return np.array(phi.matrix, dtype=np.int64)
    basis = _fp_basis(F)
    out = zeros(phi.codomain_dim * k, phi.domain_dim * k)
    for j in range(phi.domain_dim):
        for s, b in enumerate(basis):
            v = zeros(phi.domain_dim, 1)
            v[j, 0] = b
            w = phi(v)
            for i, wi in enumerate(w):
                out[i * k:(i + 1) * k, j * k + s] = F.coeffs(int(wi))
    return out


def _fp_to_fq(F, rows):
    """Regroup F_p-coordinate row vectors into F_q vectors."""
    k = F.k
    rows = np.asarray(rows, dtype=np.int64)
    if rows.shape[0] == 0:
        return zeros(0, rows.shape[1] // k)
    out = zeros(rows.shape[0], rows.shape[1] // k)
    for r in range(rows.shape[0]):
        for i in range(out.shape[1]):
            out[r, i] = F(list(rows[r, i * k:(i + 1) * k]))
    return out


def semilinear_rank(phi):
    L = linearize(phi)
    r = rank(GF(phi.field.p), L)
    if r % phi.field.k:
        raise ArithmeticError("linearised rank is not a multiple of the degree")
    return r // phi.field.k


def semilinear_kernel(phi):
    """F_q row basis of the kernel, computed through the F_p linearisation."""
    F = phi.field
    if F.k == 1:
        return span(F, nullspace(F, phi.matrix), phi.domain_dim)
    ker = nullspace(GF(F.p), linearize(phi))
    return span(F, _fp_to_fq(F, ker), phi.domain_dim)


def semilinear_image(phi):
    F = phi.field
    if F.k == 1:
        return column_space(F, phi.matrix)
    L = linearize(phi)
    img = span(GF(F.p), L.T, L.shape[0])
    return span(F, _fp_to_fq(F, img), phi.codomain_dim)


def kernel_direct(phi):
    """Same as :func:`semilinear_kernel`, via ``ker(M)`` pulled back by Frobenius."""
    F = phi.field
    return frobenius_rows(F, nullspace(F, phi.matrix), -phi.twist)


# ------------------------------------------------------------ JSON codec

def matrix_to_json(F, M, twist=0):
    M = np.asarray(M, dtype=np.int64)
    return {
        "p": F.p,
        "k": F.k,
        "modulus": list(F.modulus),
        "twist": int(twist),
        "rows": [[F.coeffs(int(x)) for x in row] for row in M],
    }


def field_from_json(obj):
    return ExtField(int(obj["p"]), int(obj.get("k", 1)), obj.get("modulus"))


def matrix_from_json(obj, F=None):
    """Decode ``{"p","k","modulus","twist","rows"}``; returns (field, matrix, twist)."""
    if F is None:
        F = field_from_json(obj)
    rows = obj["rows"]
    M = zeros(len(rows), len(rows[0]) if rows else 0)
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            if isinstance(entry, int):
                entry = [entry]
            if len(entry) > F.k:
                raise ValueError(f"entry {entry} has more than k={F.k} coefficients")
            M[i, j] = F(list(entry))
    return F, M, int(obj.get("twist", 0))
