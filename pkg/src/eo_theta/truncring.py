"""Polynomials over F_q in t_1..t_d with all terms of degree > N dropped.

Elements are plain dicts ``{exponent tuple: field code}`` without zero
coefficients; the ring object supplies the arithmetic so that the same
division-free routines (determinants, adjugates) run over F_q and here.
"""
from __future__ import annotations

import itertools

from .field import ExtField


class TruncatedRing:
    def __init__(self, field: ExtField, nvars, cutoff):
        if nvars < 0 or cutoff < 0:
            raise ValueError("need nvars >= 0 and cutoff >= 0")
        self.field = field
        self.nvars = nvars
        self.cutoff = cutoff
        self._origin = (0,) * nvars

    def __repr__(self):
        return f"TruncatedRing(q={self.field.q}, d={self.nvars}, N={self.cutoff})"

    def __eq__(self, other):
        return (isinstance(other, TruncatedRing) and self.field == other.field
                and (self.nvars, self.cutoff) == (other.nvars, other.cutoff))

    def __hash__(self):
        return hash((self.field, self.nvars, self.cutoff))

    # -- constructors -------------------------------------------------------
    @property
    def zero(self):
        return {}

    @property
    def one(self):
        return {self._origin: 1}

    def const(self, c):
        c = int(c)
        return {self._origin: c} if c else {}

    def var(self, i, coeff=1):
        e = [0] * self.nvars
        e[i] = 1
        return {tuple(e): coeff} if self.cutoff >= 1 and coeff else {}

    def monomial(self, exp, coeff=1):
        exp = tuple(exp)
        return {exp: coeff} if coeff and sum(exp) <= self.cutoff else {}

    def monomials(self, max_deg=None):
        top = self.cutoff if max_deg is None else min(max_deg, self.cutoff)
        out = []
        for deg in range(top + 1):
            for c in itertools.combinations_with_replacement(range(self.nvars), deg):
                e = [0] * self.nvars
                for i in c:
                    e[i] += 1
                out.append(tuple(e))
        return out

    def random(self, rng, max_deg=None, density=0.5):
        F = self.field
        out = {}
        for e in self.monomials(max_deg):
            if rng.random() < density:
                c = F.random_element(rng)
                if c:
                    out[e] = c
        return out

    # -- arithmetic ---------------------------------------------------------
    def is_zero(self, f):
        return not f

    def eq(self, f, g):
        return f == g

    def add(self, f, g):
        F = self.field
        out = dict(f)
        for e, c in g.items():
            v = F.add(out.get(e, 0), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return out

    def neg(self, f):
        F = self.field
        return {e: F.neg(c) for e, c in f.items()}

    def sub(self, f, g):
        return self.add(f, self.neg(g))

    def scale(self, c, f):
        F = self.field
        if not c:
            return {}
        return {e: F.mul(c, v) for e, v in f.items()}

    def mul(self, f, g):
        if not f or not g:
            return {}
        F, N = self.field, self.cutoff
        out = {}
        for ea, ca in f.items():
            da = sum(ea)
            for eb, cb in g.items():
                if da + sum(eb) > N:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                v = F.add(out.get(e, 0), F.mul(ca, cb))
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return out

    def pow(self, f, e):
        out = self.one
        for _ in range(e):
            out = self.mul(out, f)
        return out

    def sum(self, items):
        out = {}
        for f in items:
            out = self.add(out, f)
        return out

    def frobenius(self, f):
        """``f^p``, computed coefficientwise: (sum c t^e)^p = sum c^p t^(pe)."""
        F, p = self.field, self.field.p
        return {tuple(p * x for x in e): F.frobenius(c, 1)
                for e, c in f.items() if p * sum(e) <= self.cutoff}

    def inverse(self, f):
        """Inverse of an element with invertible constant term."""
        F = self.field
        c0 = f.get(self._origin, 0)
        if not c0:
            raise ZeroDivisionError("constant term is not a unit")
        u = F.inv(c0)
        nil = self.scale(u, self.sub(f, self.const(c0)))   # f = c0 (1 + nil)
        out, power = self.one, self.one
        for _ in range(self.cutoff):
            power = self.neg(self.mul(power, nil))
            out = self.add(out, power)
        return self.scale(u, out)

    # -- calculus -----------------------------------------------------------
    def deriv(self, f, i):
        F = self.field
        out = {}
        for e, c in f.items():
            if e[i]:
                v = F.mul(F.from_int(e[i]), c)
                if v:
                    ne = list(e)
                    ne[i] -= 1
                    out[tuple(ne)] = v
        return out

    def d(self, f):
        """Coefficients of ``df`` on ``dt_1, ..., dt_d``."""
        return [self.deriv(f, i) for i in range(self.nvars)]

    # -- inspection ---------------------------------------------------------
    def truncate(self, f, deg):
        return {e: c for e, c in f.items() if sum(e) <= deg}

    def eq_upto(self, f, g, deg):
        return self.truncate(f, deg) == self.truncate(g, deg)

    def degree(self, f):
        return max((sum(e) for e in f), default=-1)

    def at_origin(self, f):
        return f.get(self._origin, 0)

    def is_polynomial(self, f):
        """Structural check: integer exponents >= 0 within the cutoff, codes in F_q."""
        q = self.field.q
        return all(len(e) == self.nvars and all(isinstance(x, int) and x >= 0 for x in e)
                   and sum(e) <= self.cutoff and isinstance(c, int) and 0 < c < q
                   for e, c in f.items())

    # -- JSON ---------------------------------------------------------------
    def to_json(self, f):
        F = self.field
        return [{"exp": list(e), "c": F.coeffs(c)} for e, c in sorted(f.items())]

    def from_json(self, terms):
        F = self.field
        out = {}
        for t in terms:
            e = tuple(int(x) for x in t["exp"])
            if len(e) != self.nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {list(e)} for {self.nvars} variables")
            c = t["c"]
            c = F(list(c)) if isinstance(c, list) else F(c)
            out = self.add(out, self.monomial(e, c))
        return out

    def format(self, f):
        if not f:
            return "0"
        parts = []
        for e, c in sorted(f.items()):
            mono = "*".join(f"t{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)
