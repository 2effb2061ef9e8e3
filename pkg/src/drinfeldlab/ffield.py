"""Finite fields F_{q^m} presented as explicit F_q-vector spaces.

A FieldCtx fixes one field: either a prime field F_p (p >= 5) or an
extension of another context by a monic irreducible modulus.  One context
in each tower is the *ground* field F_q; q-power Frobenius maps, vector
coordinates and operator matrices are all taken relative to it.

Raw element values are ints (prime contexts) or fixed-length tuples of
base values (extensions), always reduced; FFElem is a thin arithmetic
wrapper around (ctx, value).  Contexts are interned, so identity equality
is safe and values are hashable dictionary keys.

Extensions of a prime ground field get numpy-backed kernels (convolution
products, tabulated modular reduction, float64 matrix products -- exact
because entries stay far below 2**53).  Everything else runs a generic
pure-python path; the two are cross-checked in the test suite.
"""

from __future__ import annotations

import itertools
import json
from importlib import resources

import numpy as np

from . import _poly

_CTX_CACHE: dict = {}
_MODULI_TABLE: dict | None = None
_SUBFIELD_ENUM_CAP = 20000


def _small_is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _moduli_table():
    global _MODULI_TABLE
    if _MODULI_TABLE is None:
        try:
            text = resources.files("drinfeldlab").joinpath("data/moduli.json").read_text()
            _MODULI_TABLE = json.loads(text)
        except (FileNotFoundError, OSError):
            _MODULI_TABLE = {}
    return _MODULI_TABLE


class FieldCtx:
    """One finite field; construct via prime_field / ground_field / make_ext_field."""

    def __init__(self, kind, p, base, modulus, is_ground, _intern_token=None):
        if _intern_token is not _TOKEN:
            raise TypeError("use the module constructors, not FieldCtx directly")
        self.kind = kind
        self.p = p
        self.base = base
        self.modulus = modulus  # tuple of base values, monic, len m+1 (ext only)
        if kind == "prime":
            self.m = 1
            self.flat_degree = 1
            self.ground = self
        else:
            self.m = len(modulus) - 1
            self.flat_degree = base.flat_degree * self.m
            self.ground = self if is_ground else base.ground
        self.order = p ** self.flat_degree
        self.zero_val = 0 if kind == "prime" else (base.zero_val,) * self.m
        self.one_val = 1 if kind == "prime" else ((base.one_val,) + (base.zero_val,) * (self.m - 1))
        self.key = ("p", p) if kind == "prime" else ("e", base.key, modulus, is_ground)
        self._kit = None
        self._red_rows = None
        self._qpow_mats = {}
        if kind == "ext" and base.kind == "prime":
            self._kit = _poly.PolyMod(p, modulus)

    # -- scalar protocol ---------------------------------------------------

    @property
    def q(self):
        return self.ground.order

    @property
    def qdim(self):
        return self.flat_degree // self.ground.flat_degree

    def vadd(self, a, b):
        if self.kind == "prime":
            return (a + b) % self.p
        return tuple(self.base.vadd(x, y) for x, y in zip(a, b))

    def vsub(self, a, b):
        if self.kind == "prime":
            return (a - b) % self.p
        return tuple(self.base.vsub(x, y) for x, y in zip(a, b))

    def vneg(self, a):
        if self.kind == "prime":
            return (-a) % self.p
        return tuple(self.base.vneg(x) for x in a)

    def vmul(self, a, b):
        if self.kind == "prime":
            return (a * b) % self.p
        kit = self._kit
        if kit is not None and self.m >= 8:
            arr = kit.mulmod(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
            return tuple(int(v) for v in arr)
        prod = _poly.pmul(self.base, _poly.trim(a), _poly.trim(b))
        return self._pad(self._reduce_gen(prod))

    def vinv(self, a):
        if self.kind == "prime":
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(a, self.p - 2, self.p)
        at = _poly.trim(a)
        if not at:
            raise ZeroDivisionError("inverse of zero")
        g, u, _ = _poly.pext_gcd(self.base, at, self.modulus)
        if _poly.deg(g) != 0:
            raise ArithmeticError("modulus not irreducible")
        u = _poly.pscalar(self.base, u, self.base.vinv(g[0]))
        return self._pad(_poly.pmod(self.base, u, self.modulus))

    def vpow(self, a, k):
        if k < 0:
            return self.vpow(self.vinv(a), -k)
        result = self.one_val
        base = a
        while k:
            if k & 1:
                result = self.vmul(result, base)
            k >>= 1
            if k:
                base = self.vmul(base, base)
        return result

    def frobq(self, a, i=1):
        """a ** (q**i); the i-fold q-power Frobenius over the ground field."""
        i = i % self.qdim
        if i == 0:
            return a
        if self.ground.kind == "prime" and self.base is self.ground:
            mat = self.qpow_matrix(i)
            vec = (mat @ np.asarray(a, dtype=np.float64)).astype(np.int64) % self.p
            return tuple(int(v) for v in vec)
        return self.vpow(a, self.q ** i)

    # -- structure ---------------------------------------------------------

    def _pad(self, coeffs):
        if self.kind == "prime":
            return coeffs
        return tuple(coeffs) + (self.base.zero_val,) * (self.m - len(coeffs))

    def _reduce_gen(self, prod):
        if len(prod) <= self.m:
            return prod
        if self._red_rows is None:
            self._red_rows = self._build_red_rows()
        base = self.base
        out = list(prod[: self.m]) + [base.zero_val] * (self.m - min(self.m, len(prod)))
        for j in range(len(prod) - self.m):
            c = prod[self.m + j]
            if c != base.zero_val:
                row = self._red_rows[j]
                for i in range(self.m):
                    out[i] = base.vadd(out[i], base.vmul(c, row[i]))
        return _poly.trim(out)

    def _build_red_rows(self):
        base, m = self.base, self.m
        top = tuple(base.vneg(c) for c in self.modulus[:-1])  # y^m mod f
        rows = []
        prev = top
        for _ in range(m):  # y^(m+j) for j = 0..m-1 (products have degree <= 2m-2)
            rows.append(prev)
            carry = prev[-1]
            nxt = [base.zero_val] + list(prev[:-1])
            if carry != base.zero_val:
                for i in range(m):
                    nxt[i] = base.vadd(nxt[i], base.vmul(carry, top[i]))
            prev = tuple(nxt)
        return rows

    def generator(self):
        """Residue class of y (of T, for residue fields A/p)."""
        if self.kind == "prime":
            raise ValueError("prime field has no extension generator")
        if self.m == 1:
            return (self.base.vneg(self.modulus[0]),)
        return self._pad((self.base.zero_val, self.base.one_val))

    def embed_ground(self, gval):
        if self is self.ground:
            return gval
        inner = self.base.embed_ground(gval) if self.base is not self.ground else gval
        return self._pad((inner,))

    def embed_int(self, k):
        if self.kind == "prime":
            return k % self.p
        return self._pad((self.base.embed_int(k),))

    def to_qvec(self, val):
        if self is self.ground:
            return (val,)
        if self.base is self.ground:
            return tuple(val)
        out = []
        for c in val:
            out.extend(self.base.to_qvec(c))
        return tuple(out)

    def from_qvec(self, vec):
        if self is self.ground:
            return vec[0]
        if self.base is self.ground:
            return tuple(vec)
        step = self.base.qdim
        return tuple(self.base.from_qvec(tuple(vec[i * step:(i + 1) * step])) for i in range(self.m))

    def enumerate_vals(self):
        if self.kind == "prime":
            return iter(range(self.p))
        return (tuple(t) for t in itertools.product(list(self.base.enumerate_vals()), repeat=self.m))

    def describe(self):
        g = self.ground
        head = f"{self.p}^{g.flat_degree}"
        if self is g:
            return f"{head}:1:0,1"
        coeffs = ";".join(_render_val(c) for c in self.modulus)
        return f"{head}:{self.qdim}:{coeffs}"

    def __repr__(self):
        return f"FieldCtx(order={self.order}, q={self.q}, qdim={self.qdim})"

    # -- ground-field operator matrices -------------------------------------

    def qpow_matrix(self, i=1):
        """Matrix (column convention) of x -> x**(q**i) in qvec coordinates."""
        i = i % self.qdim
        if i in self._qpow_mats:
            return self._qpow_mats[i]
        n = self.qdim
        if self.ground.kind == "prime":
            if i == 0:
                mat = np.eye(n, dtype=np.int64)
            else:
                f1 = self._qpow_mats.get(1)
                if f1 is None:
                    f1 = self._build_qpow1()
                    self._qpow_mats[1] = f1
                mat = f1
                for _ in range(i - 1):
                    mat = qmat_mul(self.ground, f1, mat)
            self._qpow_mats[i] = mat
            return mat
        # generic path
        cols = []
        for k in range(n):
            e = tuple(self.ground.one_val if j == k else self.ground.zero_val for j in range(n))
            cols.append(self.to_qvec(self.frobq(self.from_qvec(e), i)) if i else e)
        mat = tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))
        self._qpow_mats[i] = mat
        return mat

    def _build_qpow1(self):
        n = self.qdim
        if self is self.ground or n == 1:
            return np.eye(n, dtype=np.int64)
        if self.base is self.ground:
            kit = self._kit
            y = np.zeros(n, dtype=np.int64)
            y[1] = 1
            w = kit.powmod(y, self.q)
            cols = np.zeros((n, n), dtype=np.int64)
            col = np.zeros(n, dtype=np.int64)
            col[0] = 1
            for k in range(n):
                cols[:, k] = col
                if k < n - 1:
                    col = kit.mulmod(col, w)
            return cols
        # tower over a prime ground: fall back to element ops
        cols = np.zeros((n, n), dtype=np.int64)
        for k in range(n):
            e = tuple(1 if j == k else 0 for j in range(n))
            cols[:, k] = self.to_qvec(self.frobq(self.from_qvec(e), 1))
        return cols

    def mult_matrix(self, val):
        """Matrix (column convention) of x -> val * x in qvec coordinates."""
        n = self.qdim
        if self.ground.kind == "prime" and self.base is self.ground and self.kind == "ext":
            p = self.p
            kit = self._kit
            top = kit.red[0].astype(np.int64) if n > 1 else None  # y^n mod f
            cols = np.zeros((n, n), dtype=np.int64)
            col = np.asarray(val, dtype=np.int64)
            for k in range(n):
                cols[:, k] = col
                if k < n - 1:
                    carry = int(col[n - 1])
                    col = np.concatenate(([0], col[:-1]))
                    if carry:
                        col = (col + carry * top) % p
            return cols
        ground = self.ground
        cols = []
        for k in range(n):
            e = tuple(ground.one_val if j == k else ground.zero_val for j in range(n))
            cols.append(self.to_qvec(self.vmul(val, self.from_qvec(e))))
        if ground.kind == "prime":
            return np.array(cols, dtype=np.int64).T
        return tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))


def _render_val(v):
    if isinstance(v, int):
        return str(v)
    return ",".join(_render_val(c) for c in v)


_TOKEN = object()


def _intern(key, maker):
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = maker()
        _CTX_CACHE[key] = ctx
    return ctx


def prime_field(p):
    """The prime field F_p, p >= 5."""
    if not _small_is_prime(p) or p < 5:
        raise ValueError(f"characteristic must be a prime >= 5, got {p}")
    return _intern(("p", p), lambda: FieldCtx("prime", p, None, None, True, _TOKEN))


def ground_field(p, e=1):
    """The ground field F_q, q = p^e; Frobenius and coordinates refer to it."""
    if e == 1:
        return prime_field(p)
    fp = prime_field(p)
    modulus = _chosen_modulus(fp, e)
    key = ("e", fp.key, modulus, True)
    return _intern(key, lambda: FieldCtx("ext", p, fp, modulus, True, _TOKEN))


def ground_field_from_order(q):
    p = min(d for d in range(2, q + 1) if q % d == 0 and _small_is_prime(d))
    e = 0
    n = q
    while n > 1:
        if n % p:
            raise ValueError(f"{q} is not a prime power")
        n //= p
        e += 1
    return ground_field(p, e)


def _chosen_modulus(base, m):
    """Lex-least monic irreducible of degree m over base (table-assisted)."""
    if base.kind == "prime":
        entry = _moduli_table().get(str(base.p), {}).get(str(m))
        if entry is not None:
            return tuple(int(c) for c in entry)
    return _poly.least_irreducible(base, m)


def make_ext_field(base, m):
    """F_{q^m} over base, modulus the lex-least monic irreducible of degree m."""
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    modulus = _chosen_modulus(base, m)
    return ext_field_with_modulus(base, modulus)


def ext_field_with_modulus(base, modulus, verified=False):
    """Extension of base by an explicit monic irreducible modulus."""
    modulus = _poly.trim(modulus)
    if _poly.deg(modulus) < 1 or modulus[-1] != base.one_val:
        raise ValueError("modulus must be monic of degree >= 1")
    key = ("e", base.key, modulus, False)
    if key in _CTX_CACHE:
        return _CTX_CACHE[key]
    if not verified and not _poly.is_irreducible(base, modulus):
        raise ValueError("modulus is not irreducible")
    return _intern(key, lambda: FieldCtx("ext", base.p, base, modulus, False, _TOKEN))


class FFElem:
    """Element of a FieldCtx; thin immutable wrapper with field arithmetic."""

    __slots__ = ("ctx", "val")

    def __init__(self, ctx, val):
        self.ctx = ctx
        self.val = val

    def _coerce(self, other):
        if isinstance(other, FFElem):
            if other.ctx is not self.ctx:
                raise ValueError("elements from different fields")
            return other.val
        if isinstance(other, int):
            return self.ctx.embed_int(other)
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FFElem(self.ctx, self.ctx.vadd(self.val, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FFElem(self.ctx, self.ctx.vsub(self.val, v))

    def __rsub__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FFElem(self.ctx, self.ctx.vsub(v, self.val))

    def __mul__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FFElem(self.ctx, self.ctx.vmul(self.val, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else FFElem(self.ctx, self.ctx.vmul(self.val, self.ctx.vinv(v)))

    def __neg__(self):
        return FFElem(self.ctx, self.ctx.vneg(self.val))

    def __pow__(self, k):
        return FFElem(self.ctx, self.ctx.vpow(self.val, k))

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.ctx is other.ctx and self.val == other.val
        if isinstance(other, int):
            v = self._coerce(other)
            return self.val == v
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.key, self.val))

    def __bool__(self):
        return self.val != self.ctx.zero_val

    def qvec(self):
        return self.ctx.to_qvec(self.val)

    def __repr__(self):
        return f"FFElem({self.val!r})"


def frob_q(x, i=1):
    """x ** (q**i): the q-power Frobenius of the ground field, iterated i times."""
    return FFElem(x.ctx, x.ctx.frobq(x.val, i))


# -- linear algebra over the ground field -----------------------------------


def qmat_mul(ground, a, b):
    if ground.kind == "prime":
        prod = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
        return prod.astype(np.int64) % ground.p
    n, k, m2 = len(a), len(b), len(b[0])
    return tuple(
        tuple(_gdot(ground, a[i], tuple(b[t][j] for t in range(k))) for j in range(m2))
        for i in range(n)
    )


def _gdot(ground, row, col):
    acc = ground.zero_val
    for x, y in zip(row, col):
        acc = ground.vadd(acc, ground.vmul(x, y))
    return acc


def rref(ground, mat):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    if ground.kind == "prime":
        m = np.array(mat, dtype=np.int64) % ground.p
        p = ground.p
        rows, cols = m.shape
        pivots = []
        r = 0
        for c in range(cols):
            sub = m[r:, c]
            nz = np.nonzero(sub)[0]
            if len(nz) == 0:
                continue
            piv = r + int(nz[0])
            if piv != r:
                m[[r, piv]] = m[[piv, r]]
            inv = pow(int(m[r, c]), p - 2, p)
            m[r] = (m[r] * inv) % p
            col = m[:, c].copy()
            col[r] = 0
            if np.any(col):
                m = (m - np.outer(col, m[r])) % p
            pivots.append(c)
            r += 1
            if r == rows:
                break
        return m, pivots
    m = [list(row) for row in mat]
    rows, cols = len(m), len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != ground.zero_val), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ground.vinv(m[r][c])
        m[r] = [ground.vmul(inv, x) for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != ground.zero_val:
                f = m[i][c]
                m[i] = [ground.vsub(x, ground.vmul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return tuple(tuple(row) for row in m), pivots


def kernel_qvecs(ground, mat, ncols=None):
    """Echelonized kernel basis of a matrix over the ground field, as qvec tuples."""
    if ground.kind == "prime":
        arr = np.asarray(mat, dtype=np.int64)
        rows, cols = arr.shape
    else:
        rows = len(mat)
        cols = len(mat[0]) if rows else (ncols or 0)
    red, pivots = rref(ground, mat)
    free = [c for c in range(cols) if c not in pivots]
    out = []
    for fc in free:
        if ground.kind == "prime":
            vec = np.zeros(cols, dtype=np.int64)
            vec[fc] = 1
            for r_i, pc in enumerate(pivots):
                vec[pc] = (-int(red[r_i, fc])) % ground.p
            out.append(tuple(int(v) for v in vec))
        else:
            vec = [ground.zero_val] * cols
            vec[fc] = ground.one_val
            for r_i, pc in enumerate(pivots):
                vec[pc] = ground.vneg(red[r_i][fc])
            out.append(tuple(vec))
    return out


def kernel_basis(ctx, mat):
    """Kernel of an F_q-linear operator on ctx, given as a qdim x qdim matrix.

    The basis is the canonical echelon one (free coordinates ascending),
    returned as field elements of ctx.
    """
    n = ctx.qdim
    if ctx.ground.kind == "prime":
        arr = np.asarray(mat, dtype=np.int64)
        if arr.shape != (n, n):
            raise ValueError(f"operator matrix must be {n}x{n}, got {arr.shape}")
        vecs = kernel_qvecs(ctx.ground, arr)
    else:
        if len(mat) != n or any(len(row) != n for row in mat):
            raise ValueError(f"operator matrix must be {n}x{n}")
        vecs = kernel_qvecs(ctx.ground, mat, ncols=n)
    return [FFElem(ctx, ctx.from_qvec(v)) for v in vecs]


def solve_columns(ground, basis_cols, targets):
    """Solve S x = t for each target column; S has full column rank.

    basis_cols: sequence of qvec tuples (the columns of S).
    targets: sequence of qvec tuples.
    Returns a list of coefficient tuples, one per target.
    """
    k = len(basis_cols)
    n = len(basis_cols[0])
    t = len(targets)
    if ground.kind == "prime":
        aug = np.zeros((n, k + t), dtype=np.int64)
        for j, col in enumerate(basis_cols):
            aug[:, j] = col
        for j, col in enumerate(targets):
            aug[:, k + j] = col
        red, pivots = rref(ground, aug)
        if any(p_ >= k for p_ in pivots) or len(pivots) != k:
            raise ArithmeticError("inconsistent or rank-deficient solve")
        return [tuple(int(red[r, k + j]) for r in range(k)) for j in range(t)]
    aug = tuple(
        tuple(basis_cols[j][i] for j in range(k)) + tuple(targets[j][i] for j in range(t))
        for i in range(n)
    )
    red, pivots = rref(ground, aug)
    if any(p_ >= k for p_ in pivots) or len(pivots) != k:
        raise ArithmeticError("inconsistent or rank-deficient solve")
    return [tuple(red[r][k + j] for r in range(k)) for j in range(t)]


def subfield_root(ctx, coeffs, d, cap=_SUBFIELD_ENUM_CAP):
    """Lex-least root in ctx of a ground-coefficient polynomial splitting in F_{q^d}.

    Scans the fixed field of Frobenius^d (which requires d | ctx.qdim); used
    to embed residue fields into their torsion extensions deterministically.
    """
    ground = ctx.ground
    n = ctx.qdim
    if n % d:
        raise ValueError("subfield degree does not divide extension degree")
    if ground.order ** d > cap:
        raise ValueError("subfield too large to enumerate")
    fd = ctx.qpow_matrix(d % n if n > 1 else 0)
    if ground.kind == "prime":
        mat = (np.asarray(fd, dtype=np.int64) - np.eye(n, dtype=np.int64)) % ground.p
        vecs = kernel_qvecs(ground, mat)
    else:
        mat = tuple(
            tuple(ground.vsub(fd[i][j], ground.one_val if i == j else ground.zero_val)
                  for j in range(n))
            for i in range(n)
        )
        vecs = kernel_qvecs(ground, mat, ncols=n)
    if len(vecs) != d:
        raise ArithmeticError("fixed field has unexpected dimension")
    embedded = [ctx.embed_ground(c) for c in coeffs]
    roots = []
    gvals = list(ground.enumerate_vals())
    for combo in itertools.product(gvals, repeat=d):
        vec = None
        if ground.kind == "prime":
            acc = np.zeros(n, dtype=np.int64)
            for c, bv in zip(combo, vecs):
                if c:
                    acc = (acc + c * np.asarray(bv, dtype=np.int64)) % ground.p
            vec = tuple(int(v) for v in acc)
        else:
            acc = [ground.zero_val] * n
            for c, bv in zip(combo, vecs):
                if c != ground.zero_val:
                    for i in range(n):
                        acc[i] = ground.vadd(acc[i], ground.vmul(c, bv[i]))
            vec = tuple(acc)
        x = ctx.from_qvec(vec)
        acc_val = ctx.zero_val
        for c in reversed(embedded):
            acc_val = ctx.vadd(ctx.vmul(acc_val, x), c)
        if acc_val == ctx.zero_val:
            roots.append((vec, x))
    if not roots:
        raise ArithmeticError("polynomial has no root in the designated subfield")
    roots.sort(key=lambda rv: rv[0])
    return roots[0][1]
