"""Small exact matrices over a FieldCtx.

Matrices are immutable row-major tuples of raw context values, so they can
be dictionary keys during group enumeration.  Sizes stay tiny (n <= 4, and
n < p so Faddeev-LeVerrier divisions are safe); nothing here is vectorized.
"""

from __future__ import annotations


def from_int_rows(ctx, rows):
    return tuple(tuple(ctx.embed_int(e) if isinstance(e, int) else e for e in row) for row in rows)


def identity(ctx, n):
    return tuple(tuple(ctx.one_val if i == j else ctx.zero_val for j in range(n)) for i in range(n))


def scalar(ctx, n, c):
    return tuple(tuple(c if i == j else ctx.zero_val for j in range(n)) for i in range(n))


def mat_add(ctx, a, b):
    return tuple(tuple(ctx.vadd(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(ctx, a, b):
    return tuple(tuple(ctx.vsub(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(ctx, c, a):
    return tuple(tuple(ctx.vmul(c, x) for x in row) for row in a)


def mat_mul(ctx, a, b):
    n, k = len(a), len(b)
    m = len(b[0])
    bt = tuple(zip(*b))
    out = []
    for i in range(n):
        row = a[i]
        out.append(tuple(_dot(ctx, row, bt[j]) for j in range(m)))
    return tuple(out)


def _dot(ctx, u, v):
    acc = ctx.zero_val
    for x, y in zip(u, v):
        acc = ctx.vadd(acc, ctx.vmul(x, y))
    return acc


def mat_vec(ctx, a, v):
    return tuple(_dot(ctx, row, v) for row in a)


def transpose(a):
    return tuple(zip(*a))


def trace(ctx, a):
    acc = ctx.zero_val
    for i in range(len(a)):
        acc = ctx.vadd(acc, a[i][i])
    return acc


def mat_pow(ctx, a, k):
    n = len(a)
    out = identity(ctx, n)
    base = a
    while k:
        if k & 1:
            out = mat_mul(ctx, out, base)
        k >>= 1
        if k:
            base = mat_mul(ctx, base, base)
    return out


def charpoly(ctx, a):
    """Monic characteristic polynomial det(xI - A), coefficients low degree first.

    Faddeev-LeVerrier; needs n < char(ctx), which holds for every use here
    (n <= 4, p >= 5).
    """
    n = len(a)
    if n >= ctx.p:
        raise ValueError("matrix too large for this characteristic")
    cs = [ctx.one_val]  # top coefficient
    m = a
    c = ctx.vneg(trace(ctx, m))
    cs.append(c)
    for k in range(2, n + 1):
        m = mat_mul(ctx, a, mat_add(ctx, m, scalar(ctx, n, c)))
        c = ctx.vneg(ctx.vmul(trace(ctx, m), ctx.vinv(ctx.embed_int(k))))
        cs.append(c)
    return tuple(reversed(cs))


def det(ctx, a):
    cp = charpoly(ctx, a)
    d = cp[0]  # det(xI - A) at x=0 is (-1)^n det(A)
    return d if len(a) % 2 == 0 else ctx.vneg(d)


def mat_inv(ctx, a):
    n = len(a)
    work = [list(a[i]) + [ctx.one_val if i == j else ctx.zero_val for j in range(n)]
            for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if work[i][col] != ctx.zero_val), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        inv = ctx.vinv(work[col][col])
        work[col] = [ctx.vmul(inv, x) for x in work[col]]
        for i in range(n):
            if i != col and work[i][col] != ctx.zero_val:
                f = work[i][col]
                work[i] = [ctx.vsub(x, ctx.vmul(f, y)) for x, y in zip(work[i], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def is_identity(ctx, a):
    n = len(a)
    for i in range(n):
        for j in range(n):
            want = ctx.one_val if i == j else ctx.zero_val
            if a[i][j] != want:
                return False
    return True


def eval_poly_at_one(ctx, coeffs):
    acc = ctx.zero_val
    for c in coeffs:
        acc = ctx.vadd(acc, c)
    return acc
