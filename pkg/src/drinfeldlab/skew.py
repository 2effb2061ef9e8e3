"""The twisted polynomial ring K{tau}, tau*c = c^q*tau.

A SkewPoly is a coefficient list u_0..u_n over one of two coefficient
rings: a finite field (raw FieldCtx values) or the fraction field F_q(T)
(RatFun values).  Both share this implementation; only the q-power map on
coefficients differs.  Evaluated as a map, f(x) = sum u_i x^(q^i) is
F_q-linear, and multiplication is composition of these maps.

String form: "u0; u1; ...; un".
"""

from __future__ import annotations

import numpy as np

from . import ffield
from .apoly import RatFun


class FieldCoeffs:
    """Coefficients in a finite field context."""

    kind = "field"

    def __init__(self, ctx):
        self.ctx = ctx

    def zero(self):
        return self.ctx.zero_val

    def one(self):
        return self.ctx.one_val

    def is_zero(self, c):
        return c == self.ctx.zero_val

    def add(self, a, b):
        return self.ctx.vadd(a, b)

    def sub(self, a, b):
        return self.ctx.vsub(a, b)

    def neg(self, a):
        return self.ctx.vneg(a)

    def mul(self, a, b):
        return self.ctx.vmul(a, b)

    def qpow(self, c, i):
        return self.ctx.frobq(c, i)

    def render(self, c):
        return ffield._render_val(self.ctx.to_qvec(c))

    def __eq__(self, other):
        return isinstance(other, FieldCoeffs) and other.ctx is self.ctx

    def __hash__(self):
        return hash(("fc", self.ctx.key))


class RatCoeffs:
    """Coefficients in F_q(T); the q-power map is exponent dilation."""

    kind = "ratfun"

    def __init__(self, ground):
        self.ground = ground

    def zero(self):
        from .apoly import APoly
        return RatFun(APoly.zero(self.ground))

    def one(self):
        from .apoly import APoly
        return RatFun(APoly.one(self.ground))

    def is_zero(self, c):
        return c.is_zero()

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def qpow(self, c, i):
        return c.qpow(i)

    def render(self, c):
        return c.to_string()

    def __eq__(self, other):
        return isinstance(other, RatCoeffs) and other.ground is self.ground

    def __hash__(self):
        return hash(("rc", self.ground.key))


class SkewPoly:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        n = len(coeffs)
        while n > 0 and ring.is_zero(coeffs[n - 1]):
            n -= 1
        self.ring = ring
        self.coeffs = tuple(coeffs[:n])

    @staticmethod
    def zero(ring):
        return SkewPoly(ring, ())

    @staticmethod
    def constant(ring, c):
        return SkewPoly(ring, (c,))

    @staticmethod
    def tau(ring, i=1):
        return SkewPoly(ring, (ring.zero(),) * i + (ring.one(),))

    @property
    def tau_degree(self):
        return len(self.coeffs) - 1

    def coeff(self, i):
        return self.coeffs[i] if i <= self.tau_degree else self.ring.zero()

    def _check(self, other):
        if not isinstance(other, SkewPoly):
            raise TypeError("expected a SkewPoly")
        if other.ring != self.ring:
            raise ValueError("mixed coefficient fields")

    def __add__(self, other):
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = self.ring.add(out[i], c)
        return SkewPoly(self.ring, out)

    def __sub__(self, other):
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return SkewPoly(self.ring, [self.ring.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self):
        return SkewPoly(self.ring, [self.ring.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        self._check(other)
        r = self.ring
        if not self.coeffs or not other.coeffs:
            return SkewPoly.zero(r)
        out = [r.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if r.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if not r.is_zero(b):
                    out[i + j] = r.add(out[i + j], r.mul(a, r.qpow(b, i)))
        return SkewPoly(r, out)

    def scale(self, c):
        return SkewPoly(self.ring, [self.ring.mul(c, u) for u in self.coeffs])

    def __eq__(self, other):
        return (isinstance(other, SkewPoly) and other.ring == self.ring
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        return "; ".join(self.ring.render(c) for c in self.coeffs)

    def __repr__(self):
        return f"SkewPoly({self})"


def skew_mul(f, g):
    return f * g


def eval_map(f, x):
    """Evaluate f = sum u_i tau^i at a field element: sum u_i x^(q^i)."""
    if f.ring.kind != "field":
        raise ValueError("evaluation needs finite-field coefficients")
    ctx = f.ring.ctx
    if isinstance(x, ffield.FFElem):
        if x.ctx is not ctx:
            raise ValueError("element from a different field")
        xv = x.val
        wrap = True
    else:
        xv = x
        wrap = False
    acc = ctx.zero_val
    power = xv
    for i, u in enumerate(f.coeffs):
        if i > 0:
            power = ctx.frobq(power, 1)
        if u != ctx.zero_val:
            acc = ctx.vadd(acc, ctx.vmul(u, power))
    return ffield.FFElem(ctx, acc) if wrap else acc


def operator_matrix(f):
    """Matrix over F_q (column convention) of x -> f(x) on the coefficient field."""
    if f.ring.kind != "field":
        raise ValueError("operator matrix needs finite-field coefficients")
    ctx = f.ring.ctx
    ground = ctx.ground
    n = ctx.qdim
    if ground.kind == "prime":
        acc = np.zeros((n, n), dtype=np.int64)
        for i, u in enumerate(f.coeffs):
            if u == ctx.zero_val:
                continue
            term = ctx.mult_matrix(u)
            if i % ctx.qdim:
                term = ffield.qmat_mul(ground, term, ctx.qpow_matrix(i))
            acc = (acc + term) % ground.p
        return acc
    acc = tuple(tuple(ground.zero_val for _ in range(n)) for _ in range(n))
    for i, u in enumerate(f.coeffs):
        if u == ctx.zero_val:
            continue
        term = ctx.mult_matrix(u)
        if i % ctx.qdim:
            term = ffield.qmat_mul(ground, term, ctx.qpow_matrix(i))
        acc = tuple(tuple(ground.vadd(acc[r][c], term[r][c]) for c in range(n)) for r in range(n))
    return acc


def specialize(f, ctx, tbar):
    """Map a rational-coefficient skew polynomial into a field, T -> tbar."""
    if f.ring.kind != "ratfun":
        raise ValueError("specialize expects rational-function coefficients")
    ring = FieldCoeffs(ctx)
    return SkewPoly(ring, [c.reduce_in(ctx, tbar) for c in f.coeffs])
