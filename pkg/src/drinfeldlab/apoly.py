"""The coefficient ring A = F_q[T] and its fraction field.

APoly is a dense polynomial over a ground FieldCtx; PrimeIdeal wraps a
monic irreducible together with its residue field A/p; RatFun is a reduced
fraction of APolys.  Also here: prime enumeration, Smith normal form over
F_q[x], residue (Legendre) symbols, and CRT reconstruction.

Serialization: comma-separated coefficients, lowest degree first, e.g.
T^2 + 3 over F_5 is "3,0,1".
"""

from __future__ import annotations

import functools
import itertools

from . import _poly, ffield


class APoly:
    """Polynomial in T over the ground field F_q."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx, coeffs):
        self.ctx = ctx
        self.coeffs = _poly.trim(coeffs)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(ctx):
        return APoly(ctx, ())

    @staticmethod
    def one(ctx):
        return APoly(ctx, (ctx.one_val,))

    @staticmethod
    def T(ctx):
        return APoly(ctx, (ctx.zero_val, ctx.one_val))

    @staticmethod
    def const(ctx, k):
        return APoly(ctx, (ctx.embed_int(k) if isinstance(k, int) else k,))

    @staticmethod
    def from_string(ctx, s):
        """Parse either comma-coefficients ("3,0,1") or a tiny expression ("T^2+3")."""
        s = s.strip()
        if not s:
            raise ValueError("empty polynomial string")
        if all(part.strip().lstrip("-").isdigit() for part in s.split(",")):
            return APoly(ctx, tuple(ctx.embed_int(int(part)) for part in s.split(",")))
        return _parse_expr(ctx, s)

    def to_string(self):
        if not self.coeffs:
            return "0"
        g = self.ctx
        return ",".join(ffield._render_val(c) for c in self.coeffs)

    # -- basic structure ------------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return self.coeffs == (self.ctx.one_val,)

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.ctx.one_val

    def monic(self):
        return APoly(self.ctx, _poly.monic(self.ctx, self.coeffs))

    def lex_key(self):
        """(degree, coefficient tuple): the deterministic total order used everywhere."""
        return (self.degree, self.coeffs)

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, APoly):
            if other.ctx is not self.ctx:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return APoly.const(self.ctx, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else APoly(self.ctx, _poly.padd(self.ctx, self.coeffs, o.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else APoly(self.ctx, _poly.psub(self.ctx, self.coeffs, o.coeffs))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else APoly(self.ctx, _poly.psub(self.ctx, o.coeffs, self.coeffs))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else APoly(self.ctx, _poly.pmul(self.ctx, self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return APoly(self.ctx, _poly.pneg(self.ctx, self.coeffs))

    def __pow__(self, k):
        result = APoly.one(self.ctx)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        q, r = _poly.pdivmod(self.ctx, self.coeffs, o.coeffs)
        return APoly(self.ctx, q), APoly(self.ctx, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        o = self._coerce(other) if isinstance(other, (APoly, int)) else None
        return NotImplemented if o is None else self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.ctx.key, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def qpow(self, i=1):
        """self ** (q**i), via exponent dilation (coefficients are Frobenius-fixed)."""
        return APoly(self.ctx, _poly.pdilate(self.ctx, self.coeffs, self.ctx.order ** i))

    def eval_ground(self, val):
        return _poly.peval(self.ctx, self.coeffs, val)

    def eval_in(self, ctx, x):
        """Evaluate at x in an extension of the ground field (T -> x)."""
        acc = ctx.zero_val
        for c in reversed(self.coeffs):
            acc = ctx.vadd(ctx.vmul(acc, x), ctx.embed_ground(c))
        return acc

    def divides(self, other):
        return (other % self).is_zero()

    def __repr__(self):
        return f"APoly({self.pretty()})"

    def pretty(self, var="T"):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == self.ctx.zero_val:
                continue
            cs = ffield._render_val(c)
            if i == 0:
                parts.append(cs)
            else:
                head = "" if cs == "1" else f"{cs}*"
                parts.append(f"{head}{var}" + (f"^{i}" if i > 1 else ""))
        return "+".join(parts)


def _parse_expr(ctx, s):
    """Parse sums of monomials like '2*T^3 - T + 4' (and 'x' as a synonym)."""
    s = s.replace(" ", "").replace("x", "T").replace("-", "+-")
    total = APoly.zero(ctx)
    for term in s.split("+"):
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign = -1
            term = term[1:]
        if "T" in term:
            head, _, tail = term.partition("T")
            coef = int(head.rstrip("*")) if head.rstrip("*") else 1
            exp = int(tail[1:]) if tail.startswith("^") else (1 if not tail else None)
            if exp is None:
                raise ValueError(f"cannot parse term {term!r}")
        else:
            coef = int(term)
            exp = 0
        mono = [ctx.zero_val] * exp + [ctx.embed_int(sign * coef)]
        total = total + APoly(ctx, tuple(mono))
    return total


def gcd(a, b):
    return APoly(a.ctx, _poly.pgcd(a.ctx, a.coeffs, b.coeffs))


def ext_gcd(a, b):
    g, u, v = _poly.pext_gcd(a.ctx, a.coeffs, b.coeffs)
    return APoly(a.ctx, g), APoly(a.ctx, u), APoly(a.ctx, v)


def crt(residues, moduli):
    """Unique r mod prod(moduli) with r = residues[i] mod moduli[i] (coprime moduli)."""
    ctx = moduli[0].ctx
    r, m = residues[0] % moduli[0], moduli[0]
    for res, mod in zip(residues[1:], moduli[1:]):
        g, u, v = ext_gcd(m, mod)
        if not g.is_one():
            raise ValueError("moduli are not coprime")
        # r' = r + m*u*(res - r) mod m*mod
        mm = m * mod
        r = (r + m * u * (res - r)) % mm
        m = mm
    return r, m


class PrimeIdeal:
    """Monic irreducible element of A; also carries its residue field A/p."""

    __slots__ = ("poly", "_residue")

    def __init__(self, poly, _trusted=False):
        poly = poly.monic()
        if not _trusted and not _is_prime_poly(poly):
            raise ValueError(f"{poly.pretty()} is not irreducible")
        self.poly = poly
        self._residue = None

    @property
    def ctx(self):
        return self.poly.ctx

    @property
    def degree(self):
        return self.poly.degree

    def residue_field(self):
        """A/p as a FieldCtx whose generator is the class of T."""
        if self._residue is None:
            self._residue = ffield.ext_field_with_modulus(self.ctx, self.poly.coeffs, verified=True)
        return self._residue

    def divides(self, a):
        return (a % self.poly).is_zero()

    def lex_key(self):
        return self.poly.lex_key()

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and self.poly == other.poly

    def __hash__(self):
        return hash(("prime", self.poly.ctx.key, self.poly.coeffs))

    def __repr__(self):
        return f"PrimeIdeal({self.poly.pretty()})"

    def to_string(self):
        return self.poly.to_string()


def _is_prime_poly(f):
    """Trial division by all monic primes of degree <= deg(f)/2."""
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    if f.coeffs[0] == f.ctx.zero_val:
        return False
    for e in range(1, d // 2 + 1):
        for p in primes_of_degree(f.ctx, e):
            if p.divides(f):
                return False
    return True


@functools.lru_cache(maxsize=None)
def _primes_cache(ctx_key, d):
    ctx = ffield._CTX_CACHE[ctx_key]
    out = []
    for coeffs in _poly.monic_lex_iter(ctx, d):
        f = APoly(ctx, coeffs)
        if f.degree == d and _is_prime_poly(f):
            out.append(PrimeIdeal(f, _trusted=True))
    return tuple(out)


def primes_of_degree(ctx, d):
    """All monic irreducibles of degree d, lexicographically ordered."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return list(_primes_cache(ctx.key, d))


def primes_up_to_degree(ctx, dmax):
    out = []
    for d in range(1, dmax + 1):
        out.extend(primes_of_degree(ctx, d))
    return out


def legendre_symbol(c, prime):
    """Quadratic residue symbol of c modulo prime: +1, -1, or 0."""
    ctx = c.ctx
    r = c % prime.poly
    if r.is_zero():
        return 0
    exp = (ctx.order ** prime.degree - 1) // 2
    val = _poly.ppow_mod(ctx, r.coeffs, exp, prime.poly.coeffs)
    if val == (ctx.one_val,):
        return 1
    if val == (ctx.vneg(ctx.one_val),):
        return -1
    raise ArithmeticError("residue symbol did not land in {+1,-1}")


class SNFResult:
    """Invariant factors f_1 | f_2 | ... | f_k, all monic."""

    __slots__ = ("factors",)

    def __init__(self, factors):
        self.factors = tuple(factors)

    def nontrivial(self):
        return tuple(f for f in self.factors if not f.is_one())

    def product(self):
        out = APoly.one(self.factors[0].ctx)
        for f in self.factors:
            out = out * f
        return out

    def __repr__(self):
        return f"SNFResult({[f.pretty() for f in self.factors]})"


def smith_normal_form(mat):
    """Smith normal form of a square nonsingular matrix over F_q[x]."""
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("matrix must be square")
    ctx = mat[0][0].ctx
    work = [[e for e in row] for row in mat]
    factors = []
    for k in range(n):
        while True:
            best = None
            for i in range(k, n):
                for j in range(k, n):
                    e = work[i][j]
                    if not e.is_zero() and (best is None or e.degree < best[2]):
                        best = (i, j, e.degree)
            if best is None:
                raise ValueError("singular matrix has no Smith form here")
            bi, bj, _ = best
            if bi != k:
                work[k], work[bi] = work[bi], work[k]
            if bj != k:
                for row in work:
                    row[k], row[bj] = row[bj], row[k]
            piv = work[k][k]
            dirty = False
            for i in range(k + 1, n):
                if not work[i][k].is_zero():
                    q, _ = divmod(work[i][k], piv)
                    if not q.is_zero():
                        work[i] = [a - q * b for a, b in zip(work[i], work[k])]
                    if not work[i][k].is_zero():
                        dirty = True
            if dirty:
                continue
            for j in range(k + 1, n):
                if not work[k][j].is_zero():
                    q, _ = divmod(work[k][j], piv)
                    if not q.is_zero():
                        for row in work:
                            row[j] = row[j] - q * row[k]
                    if not work[k][j].is_zero():
                        dirty = True
            if dirty:
                continue
            offender = None
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    if not (work[i][j] % piv).is_zero():
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            work[k] = [a + b for a, b in zip(work[k], work[offender])]
        factors.append(work[k][k].monic())
    for a, b in zip(factors, factors[1:]):
        if not (b % a).is_zero():
            raise AssertionError("invariant factor chain violated")
    return SNFResult(factors)


class RatFun:
    """Reduced fraction num/den of APolys, den monic (1 for ring elements)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = APoly.one(num.ctx)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not den.is_one():
            g = gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.coeffs[-1]
            if lead != den.ctx.one_val:
                inv = den.ctx.vinv(lead)
                num = APoly(num.ctx, _poly.pscalar(num.ctx, num.coeffs, inv))
                den = APoly(den.ctx, _poly.pscalar(den.ctx, den.coeffs, inv))
        self.num = num
        self.den = den

    @property
    def ctx(self):
        return self.num.ctx

    @staticmethod
    def of(a):
        return a if isinstance(a, RatFun) else RatFun(a)

    def is_zero(self):
        return self.num.is_zero()

    def is_integral(self):
        return self.den.is_one()

    def _coerce(self, other):
        if isinstance(other, RatFun):
            return other
        if isinstance(other, APoly):
            return RatFun(other)
        if isinstance(other, int):
            return RatFun(APoly.const(self.ctx, other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.den - o.num * self.den, self.den * o.den)

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFun(self.num * o.den, self.den * o.num)

    def __pow__(self, k):
        if k < 0:
            return RatFun(self.den, self.num) ** (-k)
        out = RatFun(APoly.one(self.ctx))
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        o = self._coerce(other) if isinstance(other, (RatFun, APoly, int)) else None
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    def qpow(self, i=1):
        return RatFun(self.num.qpow(i), self.den.qpow(i))

    def integral_at(self, prime):
        return not prime.divides(self.den)

    def unit_at(self, prime):
        return not prime.divides(self.den) and not prime.divides(self.num)

    def reduce_in(self, ctx, tbar):
        """Image in a residue field, T -> tbar; denominator must be a unit there."""
        nv = self.num.eval_in(ctx, tbar)
        if self.den.is_one():
            return nv
        dv = self.den.eval_in(ctx, tbar)
        if dv == ctx.zero_val:
            raise ZeroDivisionError("denominator vanishes at this prime")
        return ctx.vmul(nv, ctx.vinv(dv))

    def to_string(self):
        if self.den.is_one():
            return self.num.to_string()
        return f"{self.num.to_string()}/{self.den.to_string()}"

    @staticmethod
    def from_string(ctx, s):
        num, _, den = s.partition("/")
        if den:
            return RatFun(APoly.from_string(ctx, num), APoly.from_string(ctx, den))
        return RatFun(APoly.from_string(ctx, num))

    def __repr__(self):
        if self.den.is_one():
            return f"RatFun({self.num.pretty()})"
        return f"RatFun(({self.num.pretty()})/({self.den.pretty()}))"


def necklace_count(q, d):
    """Number of monic irreducibles of degree d over F_q (Moebius sum)."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _moebius(e) * q ** (d // e)
    return total // d


def _moebius(n):
    if n == 1:
        return 1
    out = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            out = -out
        d += 1
    if n > 1:
        out = -out
    return out
