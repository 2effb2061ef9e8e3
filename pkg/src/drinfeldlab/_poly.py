"""Dense univariate polynomial arithmetic over a coefficient context.

Polynomials are trimmed tuples of raw coefficient values, lowest degree
first; the zero polynomial is the empty tuple.  The coefficient context is
any object exposing the scalar protocol used below (FieldCtx does).  A
numpy fast path kicks in for prime contexts, where values are plain ints.

Lexicographic order on monic polynomials of fixed degree compares the
coefficient tuple (c0, c1, ..., c_{deg-1}) ascending, c0 most significant.
All deterministic choices (moduli, prime enumeration) use this order.
"""

from __future__ import annotations

import itertools

import numpy as np

_NP_MUL_THRESHOLD = 24  # below this, pure-python convolution wins


def trim(coeffs):
    n = len(coeffs)
    while n > 0 and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


def deg(a):
    return len(a) - 1  # -1 for the zero polynomial


def padd(ctx, a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = ctx.vadd(out[i], c)
    return trim(out)


def pneg(ctx, a):
    return tuple(ctx.vneg(c) for c in a)


def psub(ctx, a, b):
    return padd(ctx, a, pneg(ctx, b))


def pscalar(ctx, a, s):
    if not s:
        return ()
    return trim(tuple(ctx.vmul(c, s) for c in a))


def pmul(ctx, a, b):
    if not a or not b:
        return ()
    if ctx.kind == "prime":
        if min(len(a), len(b)) >= _NP_MUL_THRESHOLD:
            return tuple(
                int(v) for v in np.convolve(np.asarray(a, dtype=np.int64),
                                            np.asarray(b, dtype=np.int64)) % ctx.p
            )
        # accumulate plain ints, reduce once; products stay tiny
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        p = ctx.p
        return trim([c % p for c in out])
    out = [ctx.zero_val] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == ctx.zero_val:
            continue
        for j, bj in enumerate(b):
            out[i + j] = ctx.vadd(out[i + j], ctx.vmul(ai, bj))
    return trim(out)


def pdivmod(ctx, a, b):
    """Quotient and remainder; b need not be monic."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = trim(a)
    if len(a) < len(b):
        return (), a
    lead_inv = ctx.vinv(b[-1])
    rem = list(a)
    quo = [ctx.zero_val] * (len(a) - len(b) + 1)
    for shift in range(len(a) - len(b), -1, -1):
        c = rem[shift + len(b) - 1]
        if not c == ctx.zero_val:
            c = ctx.vmul(c, lead_inv)
            quo[shift] = c
            for j, bj in enumerate(b):
                rem[shift + j] = ctx.vsub(rem[shift + j], ctx.vmul(c, bj))
    return trim(quo), trim(rem)


def pmod(ctx, a, b):
    return pdivmod(ctx, a, b)[1]


def monic(ctx, a):
    a = trim(a)
    if not a:
        return a
    if a[-1] == ctx.one_val:
        return a
    return pscalar(ctx, a, ctx.vinv(a[-1]))


def pgcd(ctx, a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pmod(ctx, a, b)
    return monic(ctx, a)


def pext_gcd(ctx, a, b):
    """Return (g, u, v) with g = u*a + v*b and g monic (or zero)."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = (ctx.one_val,), ()
    t0, t1 = (), (ctx.one_val,)
    while r1:
        q, r = pdivmod(ctx, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(ctx, s0, pmul(ctx, q, s1))
        t0, t1 = t1, psub(ctx, t0, pmul(ctx, q, t1))
    if r0 and r0[-1] != ctx.one_val:
        inv = ctx.vinv(r0[-1])
        r0 = pscalar(ctx, r0, inv)
        s0 = pscalar(ctx, s0, inv)
        t0 = pscalar(ctx, t0, inv)
    return r0, s0, t0


def peval(ctx, a, x):
    acc = ctx.zero_val
    for c in reversed(a):
        acc = ctx.vadd(ctx.vmul(acc, x), c)
    return acc


def pdilate(ctx, a, k):
    """Substitute T -> T^k (exponent dilation); exact q-th powers over F_q."""
    if k == 1 or not a:
        return tuple(a)
    out = [ctx.zero_val] * ((len(a) - 1) * k + 1)
    for i, c in enumerate(a):
        out[i * k] = c
    return trim(out)


class PolyMod:
    """Reduction kit modulo a fixed monic polynomial over a prime field.

    Precomputes the rows y^(n+j) mod f so that reducing a product is a
    single matrix multiply.  Exact: entries < p and p <= 11 in practice,
    so float64 matmul never rounds.
    """

    def __init__(self, p, f):
        f = trim(f)
        if not f or f[-1] != 1:
            raise ValueError("modulus must be monic")
        self.p = p
        self.f = f
        self.n = len(f) - 1
        n = self.n
        rows = np.zeros((max(n - 1, 0), n), dtype=np.int64)
        # y^n mod f
        cur = [(-c) % p for c in f[:-1]]
        prev = list(cur)
        for j in range(n - 1):
            rows[j] = prev
            # multiply by y, reduce
            carry = prev[-1]
            nxt = [0] + prev[:-1]
            if carry:
                for i in range(n):
                    nxt[i] = (nxt[i] + carry * cur[i]) % p
            prev = nxt
        self.red = rows.astype(np.float64)

    def reduce(self, arr):
        n = self.n
        if len(arr) <= n:
            out = np.zeros(n, dtype=np.int64)
            out[: len(arr)] = arr
            return out
        lo = np.zeros(n, dtype=np.int64)
        lo[: min(n, len(arr))] = arr[:n]
        hi = arr[n:]
        folded = hi.astype(np.float64) @ self.red[: len(hi)]
        return (lo + folded.astype(np.int64)) % self.p

    def mulmod(self, a, b):
        return self.reduce(np.convolve(a, b) % self.p)

    def powmod(self, a, e):
        n = self.n
        result = np.zeros(n, dtype=np.int64)
        result[0] = 1
        base = self.reduce(np.asarray(a, dtype=np.int64))
        while e:
            if e & 1:
                result = self.mulmod(result, base)
            e >>= 1
            if e:
                base = self.mulmod(base, base)
        return result


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(ctx, f):
    """Irreducibility over the context field (Rabin's test with screens)."""
    f = trim(f)
    n = deg(f)
    if n <= 0:
        return False
    if n == 1:
        return True
    if f[0] == ctx.zero_val:
        return False
    q = ctx.order
    if q <= 32:
        for c in ctx.enumerate_vals():
            if peval(ctx, f, c) == ctx.zero_val:
                return False
        if n <= 3:
            return True  # no root and degree <= 3
    checkpoints = {n // t for t in _prime_factors(n)}
    early = set(range(2, min(3, n // 2) + 1))
    y = (ctx.zero_val, ctx.one_val)
    if ctx.kind == "prime":
        km = PolyMod(ctx.p, f)
        u = np.zeros(km.n, dtype=np.int64)
        u[1] = 1
        yarr = u.copy()
        for k in range(1, n + 1):
            u = km.powmod(u, q)
            if k < n and (k in checkpoints or k in early):
                diff = trim(tuple(int(v) for v in (u - yarr) % ctx.p))
                if deg(pgcd(ctx, diff, f)) > 0:
                    return False
        return bool(np.array_equal(u, yarr))
    fm = monic(ctx, f)
    u = y
    for k in range(1, n + 1):
        u = ppow_mod(ctx, u, q, fm)
        if k < n and (k in checkpoints or k in early):
            if deg(pgcd(ctx, psub(ctx, u, y), fm)) > 0:
                return False
    return u == y


def ppow_mod(ctx, a, e, f):
    result = (ctx.one_val,)
    base = pmod(ctx, a, f)
    while e:
        if e & 1:
            result = pmod(ctx, pmul(ctx, result, base), f)
        e >>= 1
        if e:
            base = pmod(ctx, pmul(ctx, base, base), f)
    return result


def monic_lex_iter(ctx, degree):
    """All monic polynomials of the given degree, lexicographically ascending."""
    vals = list(ctx.enumerate_vals())
    for lower in itertools.product(vals, repeat=degree):
        yield trim(lower + (ctx.one_val,)) if degree else (ctx.one_val,)


def least_irreducible(ctx, degree):
    """Lexicographically least monic irreducible of the given degree.

    Candidates with zero constant term are divisible by y, so the whole
    leading block of the lex order is skipped wholesale.
    """
    if degree == 1:
        return (ctx.zero_val, ctx.one_val)  # y itself
    vals = list(ctx.enumerate_vals())
    for c0 in vals[1:]:
        for rest in itertools.product(vals, repeat=degree - 1):
            f = trim((c0,) + rest + (ctx.one_val,))
            if is_irreducible(ctx, f):
                return f
    raise RuntimeError("no irreducible polynomial found (impossible)")
