"""Formal local models of H_sigma near a point of an EO stratum, and theta.

A model lives over ``R = F_q[t_1..t_d]`` truncated at degree N, with
``d = n - r`` coordinates.  The basis ``e_1..e_n`` of H_sigma is ordered

* ``e_1..e_{r-1}``: the subbundle omega_0 (killed by a power of V);
* ``e_r..e_{n-1}``: lifts of the multiplicative part omega_mu;
* ``e_n``: a complement of the Hodge bundle.

At the origin this is the sigma-half of the standard module with its
basis permuted so that the Hodge bundle comes first (see
:func:`standard_sigma_fiber`).

Verschiebung is the R-linear map ``H -> H^(p)`` with
``V(e_j) = sum_i V[i][j] e_i^(p)``; the connection is
``nabla(e_j) = sum_i e_i (x) Gamma[i][j]`` with Gamma a matrix of 1-forms,
each 1-form a list of d ring elements (coefficients of dt_1..dt_d).

Sections of ``omega^{k,w}`` are polynomials in symbols ``x_I`` (one per
increasing index tuple I inside 1..n-1, standing for ``e_I = e_{i_1} ∧
...``) with coefficients in R.  A factor ``x_I`` with ``|I| = j`` sits in
``Sym(∧^j)``, so the multidegree fixes the weight ``k``.  Because the
basis is adapted to omega_0 these monomials also form a basis of every
graded piece, and all maps below are written on the graded object.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import semilinear as sl
from .field import GF
from .truncring import TruncatedRing
from .weylcomb import WeightError, delta_shift, hasse_weight, is_dominant


class ModelError(ValueError):
    pass


class SectionError(ValueError):
    pass


# ------------------------------------------------------------ index helpers

def _replace(I, s, l):
    """``e_I`` with ``e_s`` replaced by ``e_l``: (sign, sorted tuple) or None."""
    if l != s and l in I:
        return None
    pos = I.index(s)
    rest = I[:pos] + I[pos + 1:]
    # number of entries l has to pass to reach its sorted place
    below = sum(1 for x in rest if x < l)
    new = rest[:below] + (l,) + rest[below:]
    return (-1 if (pos - below) % 2 else 1), new


def _mono_mul(a, b):
    return tuple(sorted(a + b))


def mono_weight(mono, m):
    """Weight k (length m) of a monomial in the symbols x_I."""
    a = [0] * (m + 1)
    for I in mono:
        a[len(I)] += 1
    return tuple(sum(a[j:]) for j in range(1, m + 1))


# ------------------------------------------------------------------- models

@dataclass(frozen=True, eq=False)
class FormalModel:
    ring: TruncatedRing
    n: int
    r: int
    V: tuple          # n x n nested tuples of ring elements, columns are images
    Gamma: dict       # (i, j) -> 1-form; 1-based indices, zero entries omitted
    horizontal_required: bool = True

    def __post_init__(self):
        n, r, R = self.n, self.r, self.ring
        if n < 2 or not 1 <= r <= n - 1:
            raise ModelError(f"need n >= 2 and 1 <= r <= n-1, got n={n}, r={r}")
        if R.nvars != n - r:
            raise ModelError("ring must have n - r variables")
        if len(self.V) != n or any(len(row) != n for row in self.V):
            raise ModelError("V must be n x n")
        for (i, j), form in self.Gamma.items():
            if len(form) != R.nvars:
                raise ModelError(f"Gamma[{i},{j}] must have {R.nvars} components")
        # omega_0 is stable under nabla and V
        for (i, j), form in self.Gamma.items():
            if j in self.omega0 and i not in self.omega0 and any(form):
                raise ModelError("connection does not preserve omega_0")
        for j in self.omega0:
            for i in range(1, n + 1):
                if i not in self.omega0 and self.V[i - 1][j - 1]:
                    raise ModelError("V does not preserve omega_0")
        if any(self.V[n - 1][j] for j in range(n)):
            raise ModelError("image of V must lie in the Hodge bundle")
        # ks normalisation: nabla(e_mu_s) has e_n-component dt_s
        for s, j in enumerate(self.mu):
            form = self.Gamma.get((n, j), [R.zero] * R.nvars)
            want = [R.one if i == s else R.zero for i in range(R.nvars)]
            if list(form) != want:
                raise ModelError("Kodaira-Spencer component is not the coordinate identity")
        object.__setattr__(self, "_cache", {})

    # -- index sets -------------------------------------------------------
    @property
    def field(self):
        return self.ring.field

    @property
    def p(self):
        return self.ring.field.p

    @property
    def d(self):
        return self.n - self.r

    @property
    def m(self):
        return self.n - 1

    @property
    def omega0(self):
        return tuple(range(1, self.r))

    @property
    def mu(self):
        return tuple(range(self.r, self.n))

    @property
    def top(self):
        return self.n

    @property
    def hodge(self):
        return tuple(range(1, self.n))

    # -- derived data -----------------------------------------------------
    def B(self):
        """Verschiebung on omega_mu, in the mu-basis."""
        return [[self.V[i - 1][j - 1] for j in self.mu] for i in self.mu]

    def c(self):
        """mu-components of ``V(e_n)``, i.e. V on H_mu = H/omega_0 beyond omega_mu."""
        return [self.V[i - 1][self.n - 1] for i in self.mu]

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def hasse(self):
        return self._cached("hasse", lambda: sl.det_generic(self.ring, self.B()))

    def adj_c(self):
        """``adj(B) c``: the division-free image of e_n under A_r p_ur."""
        def build():
            R = self.ring
            adj = sl.adjugate_generic(R, self.B())
            c = self.c()
            return [R.sum(R.mul(adj[i][j], c[j]) for j in range(self.d)) for i in range(self.d)]
        return self._cached("adjc", build)

    def connection_from(self, s, graded=True):
        """Pairs (l, 1-form) with ``nabla(e_s) = sum_l e_l (x) form``.

        On the graded object a mu-index cannot move into omega_0.
        """
        def build():
            out = []
            for (i, j), form in sorted(self.Gamma.items()):
                if j != s or not any(form):
                    continue
                if graded and s in self.mu and i in self.omega0:
                    continue
                out.append((i, form))
            return out
        return self._cached(("conn", s, graded), build)


def formal_model(n, r, p, N=3, *, ext_degree=1, c=None, noise=None, nabla_top=None, field=None):
    """Horizontal model of the w_r stratum.

    ``c`` (length n-r, field codes) and ``noise`` (an (n-r) x (n-r) array
    of ring elements without constant term) deform V on omega_mu to
    ``B = I + c t^T + noise^(p)``, with ``V(e_n) = c`` modulo omega_0.  Any
    such choice keeps V horizontal.  ``nabla_top`` is the 1-form ``eta``
    in ``nabla(e_n) = e_n (x) eta`` (default 0).
    """
    F = field if field is not None else GF(p, ext_degree)
    if F.p != p:
        raise ModelError("field characteristic does not match p")
    if n < 2 or not 1 <= r <= n - 1:
        raise ModelError(f"need n >= 2 and 1 <= r <= n-1, got n={n}, r={r}")
    d = n - r
    R = TruncatedRing(F, d, N)
    c = [0] * d if c is None else [int(x) for x in c]
    if len(c) != d:
        raise ModelError(f"c must have {d} entries")
    V = [[R.zero for _ in range(n)] for _ in range(n)]
    for i in range(2, r):
        V[i - 2][i - 1] = R.one
    mu = list(range(r, n))
    for s, j in enumerate(mu):
        for li, l in enumerate(mu):
            entry = R.add(R.const(1 if l == j else 0), R.var(s, c[li]))
            if noise is not None:
                entry = R.add(entry, R.frobenius(noise[li][s]))
            V[l - 1][j - 1] = entry
        if r >= 2:
            V[r - 2][j - 1] = R.var(s)
    for li, l in enumerate(mu):
        V[l - 1][n - 1] = R.const(c[li])
    if r >= 2:
        V[r - 2][n - 1] = R.one
    Gamma = {}
    for s, j in enumerate(mu):
        Gamma[(n, j)] = [R.one if i == s else R.zero for i in range(d)]
    if nabla_top is not None:
        eta = [R.const(x) if isinstance(x, int) else dict(x) for x in nabla_top]
        if len(eta) != d:
            raise ModelError(f"nabla_top must have {d} components")
        Gamma[(n, n)] = eta
    return FormalModel(R, n, r, tuple(tuple(row) for row in V), Gamma)


def igusa_model(n, p, N=3, **kw):
    """Model on the ordinary locus: ``V(e_i) = e_i^(p)`` for i < n, ``V(e_n) = 0``."""
    return formal_model(n, 1, p, N, **kw)


def stratum_model(n, r, p, N=3, **kw):
    if not 2 <= r <= n - 1:
        raise ModelError(f"stratum models need 2 <= r <= n-1, got r={r}")
    return formal_model(n, r, p, N, **kw)


def random_twist(n, r, p, rng, N=3, ext_degree=1, noise_deg=1):
    """Parameters ``(c, noise)`` for a random horizontal deformation."""
    F = GF(p, ext_degree)
    d = n - r
    R = TruncatedRing(F, d, N)
    c = [F.random_element(rng) for _ in range(d)]
    noise = [[{e: v for e, v in R.random(rng, noise_deg).items() if sum(e) > 0}
              for _ in range(d)] for _ in range(d)]
    return c, noise


def with_mu_scaled(M, factors):
    """Model with the i-th row of V's mu-block multiplied by ``factors[i]``.

    Such a model is generally no longer horizontal; it is used to probe
    the boundary of the stratum, where the Hasse invariant vanishes.
    """
    R = M.ring
    V = [list(row) for row in M.V]
    for f, i in zip(factors, M.mu):
        for j in M.mu:
            V[i - 1][j - 1] = R.mul(f, V[i - 1][j - 1])
    return FormalModel(R, M.n, M.r, tuple(tuple(row) for row in V), dict(M.Gamma), False)


def boundary_model(M):
    """Scale the whole mu-block by t_1."""
    return with_mu_scaled(M, [M.ring.var(0)] * M.d)


def perturbed_model(M):
    """Negative control: add ``t_1`` to the first diagonal entry of V."""
    R = M.ring
    V = [list(row) for row in M.V]
    j = M.mu[0]
    V[j - 1][j - 1] = R.add(V[j - 1][j - 1], R.var(0))
    return FormalModel(R, M.n, M.r, tuple(tuple(row) for row in V), dict(M.Gamma), False)


# --------------------------------------------------------------- structure

def fiber_at_origin(M):
    return np.array([[M.ring.at_origin(x) for x in row] for row in M.V], dtype=np.int64)


def standard_sigma_fiber(n, r, field):
    """V on the sigma-half of the standard module, in the Hodge-first basis."""
    from .dieudonne import standard_module
    D = standard_module(n, r, field)
    perm = list(range(1, r)) + list(range(r + 1, n + 1)) + [r]
    Vs = D.V_matrix[np.ix_(list(D.sigma), list(D.sigma))]
    idx = [i - 1 for i in perm]
    return Vs[np.ix_(idx, idx)]


def horizontality_defect(M, columns=None):
    """Entries (i, j, s) where ``dV`` and ``V Gamma`` differ.

    Horizontality of V means ``V(nabla e_j) = nabla^(p)(V e_j)``; since
    the pulled-back connection kills every ``e_i^(p)`` this reads
    ``d V[i][j] = sum_l V[i][l] Gamma[l][j]``.
    """
    R, n = M.ring, M.n
    cols = M.hodge if columns is None else columns
    bad = []
    for j in cols:
        incoming = M.connection_from(j, graded=False)
        for i in range(1, n + 1):
            lhs = R.d(M.V[i - 1][j - 1])
            for s in range(R.nvars):
                rhs = R.sum(R.mul(M.V[i - 1][l - 1], form[s]) for l, form in incoming)
                if not R.eq_upto(lhs[s], rhs, R.cutoff - 1):
                    bad.append((i, j, s + 1))
    return bad


def curvature(M):
    """Nonzero entries of ``d Gamma + Gamma ∧ Gamma`` on ``dt_a ∧ dt_b``, a < b."""
    R, n = M.ring, M.n

    def G(a, i, j):
        form = M.Gamma.get((i, j))
        return form[a] if form else R.zero

    out = {}
    for a, b in itertools.combinations(range(R.nvars), 2):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                val = R.sub(R.deriv(G(b, i, j), a), R.deriv(G(a, i, j), b))
                for l in range(1, n + 1):
                    val = R.add(val, R.sub(R.mul(G(a, i, l), G(b, l, j)), R.mul(G(b, i, l), G(a, l, j))))
                val = R.truncate(val, R.cutoff - 1)
                if val:
                    out[(a + 1, b + 1, i, j)] = val
    return out


def hasse_section_value(M):
    """A_r: the determinant of V on omega_mu."""
    return M.hasse()


# ----------------------------------------------------------------- sections

@dataclass(frozen=True, eq=False)
class Section:
    ring: TruncatedRing
    n: int
    k: tuple
    w: int
    terms: dict

    def __post_init__(self):
        m = self.n - 1
        k = tuple(int(x) for x in self.k)
        if len(k) != m or not is_dominant(k):
            raise SectionError(f"weight {list(k)} is not dominant of length {m}")
        object.__setattr__(self, "k", k)
        clean = {}
        for mono, coef in self.terms.items():
            mono = tuple(sorted(tuple(I) for I in mono))
            for I in mono:
                if not I or list(I) != sorted(set(I)) or I[0] < 1 or I[-1] > m:
                    raise SectionError(f"bad index set {list(I)}")
            if mono_weight(mono, m) != k:
                raise SectionError(f"monomial {mono} does not have weight {list(k)}")
            if coef:
                clean[mono] = self.ring.add(clean.get(mono, {}), coef)
        object.__setattr__(self, "terms", {a: b for a, b in clean.items() if b})

    @property
    def weight(self):
        return self.k, self.w

    def __add__(self, other):
        if (self.k, self.w) != (other.k, other.w):
            raise SectionError("cannot add sections of different weights")
        R = self.ring
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = R.add(terms.get(mono, {}), c)
        return Section(R, self.n, self.k, self.w, terms)

    def __mul__(self, other):
        R = self.ring
        terms = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                mono = _mono_mul(ma, mb)
                terms[mono] = R.add(terms.get(mono, {}), R.mul(ca, cb))
        k = tuple(a + b for a, b in zip(self.k, other.k))
        return Section(R, self.n, k, self.w + other.w, terms)

    def scale(self, f):
        R = self.ring
        return Section(R, self.n, self.k, self.w, {mo: R.mul(f, c) for mo, c in self.terms.items()})

    def truncate(self, deg):
        R = self.ring
        return Section(R, self.n, self.k, self.w, {mo: R.truncate(c, deg) for mo, c in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def eq_upto(self, other, deg):
        if (self.k, self.w) != (other.k, other.w):
            return False
        return self.truncate(deg).terms == other.truncate(deg).terms

    def to_json(self):
        R = self.ring
        return {"k": list(self.k), "w": self.w,
                "terms": [{"x": [list(I) for I in mono], "coeff": R.to_json(c)}
                          for mono, c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, ring, n, obj):
        terms = {}
        for t in obj["terms"]:
            mono = tuple(sorted(tuple(int(i) for i in I) for I in t["x"]))
            terms[mono] = ring.add(terms.get(mono, {}), ring.from_json(t["coeff"]))
        return cls(ring, n, tuple(obj["k"]), int(obj.get("w", 0)), terms)


def zero_section(M, k, w=0):
    return Section(M.ring, M.n, tuple(k), w, {})


def constant_section(M, f, w=0):
    """A function on the chart, viewed in weight (0, w)."""
    return Section(M.ring, M.n, (0,) * M.m, w, {(): f})


def monomial_section(M, exp, mono, coeff=1, w=0):
    mono = tuple(sorted(tuple(I) for I in mono))
    return Section(M.ring, M.n, mono_weight(mono, M.m), w, {mono: M.ring.monomial(exp, coeff)})


def hasse_form(M):
    """A_r as a section of weight (hasse weight, 0)."""
    J = M.mu
    mono = (J,) * (M.p - 1)
    return Section(M.ring, M.n, mono_weight(mono, M.m), 0, {mono: M.hasse()})


def x_monomials(m, max_factors):
    """All monomials in the symbols x_I (I inside 1..m) with at most ``max_factors`` factors."""
    symbols = [I for j in range(1, m + 1) for I in itertools.combinations(range(1, m + 1), j)]
    out = []
    for f in range(max_factors + 1):
        out.extend(itertools.combinations_with_replacement(symbols, f))
    return out


def monomial_sections(M, max_degree):
    """Sections ``t^e x_I...`` whose t-degree plus number of factors is <= max_degree."""
    R = M.ring
    out = []
    for mono in x_monomials(M.m, max_degree):
        for e in R.monomials(max_degree - len(mono)):
            out.append(monomial_section(M, e, mono))
    return out


# ---------------------------------------------------------------- operators

def nabla_components(M, section):
    """``nabla`` of a section, split along ``dt_1..dt_d``.

    Returns one dict ``{monomial: coefficient}`` per coordinate; monomials
    may contain the index n in at most one factor (one step down the
    filtration from omega towards H).
    """
    R, F = M.ring, M.field
    out = [dict() for _ in range(R.nvars)]

    def put(i, mono, val):
        if val:
            v = R.add(out[i].get(mono, {}), val)
            if v:
                out[i][mono] = v
            else:
                out[i].pop(mono, None)

    for mono, coef in section.terms.items():
        for i, dc in enumerate(R.d(coef)):
            put(i, mono, dc)
        counts = Counter(mono)
        for I, mult in counts.items():
            mult_f = F.from_int(mult)
            if not mult_f:
                continue
            rest = list(mono)
            rest.remove(I)
            rest = tuple(rest)
            for s in I:
                for l, form in M.connection_from(s):
                    rep = _replace(I, s, l)
                    if rep is None:
                        continue
                    sign, I2 = rep
                    factor = mult_f if sign > 0 else F.neg(mult_f)
                    new = _mono_mul(rest, (I2,))
                    scaled = R.scale(factor, coef)
                    for i, g in enumerate(form):
                        if g:
                            put(i, new, R.mul(scaled, g))
    return out


def _project_terms(M, terms):
    """``A_r`` times the unit-root projection, applied to a dict of monomials."""
    R, top = M.ring, M.top
    detB, adjc = M.hasse(), M.adj_c()
    out = {}

    def put(mono, val):
        if val:
            v = R.add(out.get(mono, {}), val)
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)

    for mono, coef in terms.items():
        tops = [idx for idx, I in enumerate(mono) if top in I]
        if not tops:
            put(mono, R.mul(detB, coef))
            continue
        if len(tops) > 1:
            raise SectionError("term lies outside the penultimate filtration step")
        I = mono[tops[0]]
        rest = mono[:tops[0]] + mono[tops[0] + 1:]
        for jj, j in enumerate(M.mu):
            if not adjc[jj]:
                continue
            rep = _replace(I, top, j)
            if rep is None:
                continue
            sign, I2 = rep
            val = R.mul(coef, adjc[jj])
            put(_mono_mul(rest, (I2,)), val if sign > 0 else R.neg(val))
    return out


def theta(M, section):
    """theta_r on a graded section; output has weight ``(k + Delta_r, w - 1)``.

    ``nabla``, then ``A_r`` times the unit-root projection, then the
    inverse of the normalised Kodaira-Spencer map ``dt_s -> e_mu_s (x)
    e_1∧...∧e_{n-1} (x) delta^{-1}``, then multiplication.  Coefficients
    are returned modulo degree N (one derivative is spent).
    """
    if section.n != M.n or section.ring != M.ring:
        raise SectionError("section does not belong to this model")
    R, m = M.ring, M.m
    hasse_part = (M.mu,) * (M.p - 1)
    det_part = (tuple(range(1, m + 1)),)
    shift = delta_shift(M.r, M.p, M.n)
    k_out = tuple(a + b for a, b in zip(section.k, shift))
    terms = {}
    for s, comp in enumerate(nabla_components(M, section)):
        extra = _mono_mul(_mono_mul(hasse_part, det_part), ((M.mu[s],),))
        for mono, coef in _project_terms(M, comp).items():
            new = _mono_mul(mono, extra)
            terms[new] = R.add(terms.get(new, {}), R.truncate(coef, R.cutoff - 1))
    return Section(R, M.n, k_out, section.w - 1, terms)


def leibniz_check(M, f, g):
    """``theta(fg) = f theta(g) + theta(f) g`` modulo degree N."""
    deg = M.ring.cutoff - 1
    lhs = theta(M, f * g)
    rhs = f * theta(M, g) + theta(M, f) * g
    return lhs.eq_upto(rhs, deg)


# ---------------------------------------------------- unit-root projection

@dataclass
class UnitRootProjection:
    model: FormalModel
    k: tuple
    domain: list       # monomials with at most one factor containing n
    codomain: list     # monomials free of n
    entries: dict      # domain monomial -> {codomain monomial: ring element}

    def is_polynomial(self):
        R = self.model.ring
        return all(R.is_polynomial(v) for col in self.entries.values() for v in col.values())

    def restricts_to_hasse(self):
        """On omega-sections the map is multiplication by A_r."""
        a = self.model.hasse()
        return all(self.entries[mono] == ({mono: a} if a else {})
                   for mono in self.domain if self.model.top not in itertools.chain(*mono))

    def as_dict(self):
        R = self.model.ring
        return {"k": list(self.k), "domain_size": len(self.domain), "codomain_size": len(self.codomain),
                "nonzero_entries": sum(len(v) for v in self.entries.values()),
                "polynomial": self.is_polynomial(),
                "entries_sample": [
                    {"from": [list(I) for I in src], "to": [list(I) for I in dst], "coeff": R.to_json(v)}
                    for src, col in sorted(self.entries.items())[:4] for dst, v in sorted(col.items())]}


def _sym_monomials(symbols, a):
    return list(itertools.combinations_with_replacement(symbols, a))


def penultimate_monomials(n, k):
    """Basis of the step of ``S^k(H)`` with at most one factor involving e_n."""
    m = n - 1
    a = [k[j] - (k[j + 1] if j + 1 < m else 0) for j in range(m)]
    per_j = []
    for j, aj in enumerate(a, start=1):
        symbols = list(itertools.combinations(range(1, n + 1), j))
        per_j.append(_sym_monomials(symbols, aj))
    out = []
    for pick in itertools.product(*per_j):
        mono = tuple(sorted(I for part in pick for I in part))
        if sum(1 for I in mono if n in I) <= 1:
            out.append(mono)
    return out


def unit_root_projection(M, k):
    """Matrix of ``A_r S^k(p_ur)`` on the penultimate filtration step.

    Built entirely from ``det B`` and ``adj(B) c``, so no division occurs
    and every entry is a polynomial even where ``A_r`` vanishes.
    """
    k = tuple(int(x) for x in k)
    if len(k) != M.m or not is_dominant(k):
        raise WeightError(f"k={list(k)} is not dominant of length {M.m}")
    if k and k[-1] < 0:
        raise WeightError("unit-root projection needs k_{n-1} >= 0")
    R = M.ring
    domain = penultimate_monomials(M.n, k)
    entries = {mono: _project_terms(M, {mono: R.one}) for mono in domain}
    codomain = [mono for mono in domain if M.top not in itertools.chain(*mono)]
    return UnitRootProjection(M, k, domain, codomain, entries)


def _series_solve(M):
    """``B^{-1} c`` by fixed-point iteration, when ``B(0)`` is invertible."""
    R, F, d = M.ring, M.field, M.d
    B, c = M.B(), M.c()
    B0 = np.array([[R.at_origin(x) for x in row] for row in B], dtype=np.int64)
    B0inv = sl.inverse(F, B0).tolist()
    Bn = [[R.sub(B[i][j], R.const(int(B0[i, j]))) for j in range(d)] for i in range(d)]
    y = [R.zero] * d
    for _ in range(R.cutoff + 1):
        rhs = [R.sub(c[i], R.sum(R.mul(Bn[i][j], y[j]) for j in range(d))) for i in range(d)]
        y = [R.sum(R.scale(B0inv[i][j], rhs[j]) for j in range(d)) for i in range(d)]
    return y


def dual_route_check(M):
    """Compare ``adj(B) c`` with ``det(B) B^{-1} c`` computed as a power series."""
    R = M.ring
    B0 = np.array([[R.at_origin(x) for x in row] for row in M.B()], dtype=np.int64)
    if sl.det(M.field, B0) == 0:
        return None
    y = _series_solve(M)
    return all(R.eq(R.mul(M.hasse(), yi), ai) for yi, ai in zip(y, M.adj_c()))


# --------------------------------------------------------- Frobenius checks

def wedge_of_V(M):
    """Coordinates of ``V e_1 ∧ ... ∧ V e_{n-1}`` over the (n-1)-subsets of rows."""
    R = M.ring
    cols = [j - 1 for j in M.hodge]
    out = {}
    for rows in itertools.combinations(range(M.n), M.m):
        minor = [[M.V[i][j] for j in cols] for i in rows]
        val = sl.det_generic(R, minor)
        if val:
            out[tuple(i + 1 for i in rows)] = val
    return out


def frobenius_kill_check(M):
    """The three facts behind ``theta_1(A_1) = 0``.

    * ``(∧V)(A_1) = A_1^p``: with ``A_1 = a (e_1∧...∧e_{n-1})^{p-1}`` and
      ``∧V (e_1∧...∧e_{n-1}) = a (e_1∧...)^(p)`` the image is
      ``a * a^{p-1}``, compared with the p-th power taken coefficientwise;
    * ``d(f^p) = 0`` for every ring monomial ``f``;
    * V is horizontal, so ``nabla(V e_i) = V(nabla e_i)``.
    """
    if M.r != 1:
        raise ModelError("the Frobenius-kill check is stated on ordinary models")
    R, p = M.ring, M.p
    wedge = wedge_of_V(M)
    a = M.hasse()
    rows = M.hodge
    lands_in_hodge = set(wedge) <= {rows}
    minor = wedge.get(rows, R.zero)
    lhs = R.mul(a, R.pow(minor, p - 1))
    wedge_ok = lands_in_hodge and R.eq(minor, a) and R.eq(lhs, R.frobenius(a))
    frob_ok = all(not any(R.d(R.frobenius(R.monomial(e))))
                  and R.eq(R.frobenius(R.monomial(e)), R.pow(R.monomial(e), p))
                  for e in R.monomials())
    horizontal = not horizontality_defect(M)
    return {"wedge_power": wedge_ok, "d_of_pth_power": frob_ok, "horizontal": horizontal,
            "ok": wedge_ok and frob_ok and horizontal}


# --------------------------------------------------------------- model I/O

def model_summary(M):
    R = M.ring
    return {"n": M.n, "r": M.r, "p": M.p, "k": M.field.k, "trunc": R.cutoff,
            "hasse": R.to_json(M.hasse()),
            "hasse_weight": list(hasse_weight(M.r, M.p, M.n)),
            "delta": list(delta_shift(M.r, M.p, M.n))}
