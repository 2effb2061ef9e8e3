"""Drinfeld F_q[T]-modules: construction, reduction, twists, torsion.

A module of rank r is determined by phi_T = T + g_1 tau + ... + g_r tau^r
with coefficients in F_q(T) (plain modules have ring coefficients; quadratic
twists introduce denominators).  Reduction at a good prime p gives a module
over the residue field A/p, whose l-torsion is computed as the kernel of
the linearized polynomial phi_l over the splitting extension F_{q^{dm}}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _poly, ffield
from .apoly import APoly, PrimeIdeal, RatFun, smith_normal_form, SNFResult
from .errors import BadReductionError, EnumerationCapError, SplittingCapError
from .skew import FieldCoeffs, RatCoeffs, SkewPoly, operator_matrix, specialize

DEFAULT_M_CAP = 2000
_QUOTIENT_FLAT_CAP = 4300  # Q*d bound for the tabulated reduction matrix


class DrinfeldModule:
    """phi_T = T + g_1 tau + ... + g_r tau^r over F_q(T), gamma(T) = T."""

    def __init__(self, ground, coeffs):
        coeffs = tuple(RatFun.of(c) for c in coeffs)
        if not coeffs or coeffs[-1].is_zero():
            raise ValueError("leading coefficient g_r must be nonzero")
        self.ground = ground
        self.coeffs = coeffs
        self._ring = RatCoeffs(ground)
        self._phi_powers = None

    @property
    def rank(self):
        return len(self.coeffs)

    def phi_t(self):
        t = RatFun(APoly.T(self.ground))
        return SkewPoly(self._ring, (t,) + self.coeffs)

    def phi(self, a):
        """The image phi_a of a nonzero ring element; tau-degree r*deg(a)."""
        if not isinstance(a, APoly) or a.ctx is not self.ground:
            raise ValueError("expected a nonzero element of A over the same ground field")
        if a.is_zero():
            raise ValueError("phi_a is only defined for nonzero a")
        if self._phi_powers is None:
            self._phi_powers = [SkewPoly.constant(self._ring, self._ring.one()), self.phi_t()]
        powers = self._phi_powers
        while len(powers) <= a.degree:
            powers.append(powers[1] * powers[-1])
        out = SkewPoly.zero(self._ring)
        for k, c in enumerate(a.coeffs):
            if c != self.ground.zero_val:
                out = out + powers[k].scale(RatFun(APoly(self.ground, (c,))))
        assert out.tau_degree == self.rank * a.degree
        assert out.coeffs[0] == RatFun(a)
        return out

    def describe(self):
        gs = "; ".join(f"g{i + 1}={g.to_string()}" for i, g in enumerate(self.coeffs))
        return f"rank:{self.rank}; {gs}"

    def __eq__(self, other):
        return (isinstance(other, DrinfeldModule) and other.ground is self.ground
                and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.ground.key, self.coeffs))

    def __repr__(self):
        return f"DrinfeldModule({self.describe()})"


def phi_a(module, a):
    return module.phi(a)


def carlitz(ground):
    """phi_T = T + tau."""
    return DrinfeldModule(ground, (APoly.one(ground),))


def rank1_det(ground):
    """psi_T = T - T^q tau; the determinant companion of rank2_sl2."""
    return DrinfeldModule(ground, (-(APoly.T(ground).qpow()),))


def rank2_sl2(ground):
    """phi_T = T + T tau + T^q tau^2; mod-(T) image inside SL_2(F_q)."""
    t = APoly.T(ground)
    return DrinfeldModule(ground, (t, t.qpow()))


def rank2_split(ground):
    """phi_T = (tau - 1)(tau - T): every good reduction has a rational T-torsion point."""
    t = APoly.T(ground)
    return DrinfeldModule(ground, (-(t.qpow() + 1), APoly.one(ground)))


MODULE_ALIASES = {
    "carlitz": carlitz,
    "rank1-det": rank1_det,
    "rank2-sl2": rank2_sl2,
    "rank2-split": rank2_split,
}


def parse_module(ground, text):
    """Module from an alias or a 'rank:r; g1=...; ...; gr=...' description."""
    text = text.strip()
    if text in MODULE_ALIASES:
        return MODULE_ALIASES[text](ground)
    parts = [p.strip() for p in text.split(";") if p.strip()]
    if not parts or not parts[0].startswith("rank:"):
        raise ValueError(f"cannot parse module description {text!r}")
    r = int(parts[0][5:])
    coeffs = [None] * r
    for part in parts[1:]:
        name, _, val = part.partition("=")
        i = int(name.strip()[1:])
        coeffs[i - 1] = RatFun.from_string(ground, val.strip())
    if any(c is None for c in coeffs):
        raise ValueError("missing coefficient in module description")
    return DrinfeldModule(ground, tuple(coeffs))


# -- reduction ----------------------------------------------------------------


def has_good_reduction(module, prime):
    """True iff every g_i is integral at the prime and g_r is a unit there."""
    return (all(g.integral_at(prime) for g in module.coeffs)
            and module.coeffs[-1].unit_at(prime))


class ReducedModule:
    """A Drinfeld module with coefficients in the residue field A/p."""

    def __init__(self, ctx, prime, tbar, gbars, description):
        self.ctx = ctx
        self.prime = prime
        self.tbar = tbar
        self.gbars = tuple(gbars)
        self.description = description
        self._ring = FieldCoeffs(ctx)
        self._phi_powers = None

    @property
    def rank(self):
        return len(self.gbars)

    @property
    def degree(self):
        return self.prime.degree

    def phi_t(self):
        return SkewPoly(self._ring, (self.tbar,) + self.gbars)

    def phi(self, a):
        if a.is_zero():
            raise ValueError("phi_a is only defined for nonzero a")
        if self._phi_powers is None:
            self._phi_powers = [SkewPoly.constant(self._ring, self.ctx.one_val), self.phi_t()]
        powers = self._phi_powers
        while len(powers) <= a.degree:
            powers.append(powers[1] * powers[-1])
        out = SkewPoly.zero(self._ring)
        for k, c in enumerate(a.coeffs):
            if c != self.ctx.ground.zero_val:
                out = out + powers[k].scale(self.ctx.embed_ground(c))
        return out

    def __repr__(self):
        return f"ReducedModule({self.description} mod {self.prime.poly.pretty()})"


def reduce(module, prime):
    if not has_good_reduction(module, prime):
        raise BadReductionError(f"bad reduction at {prime.poly.pretty()}")
    ctx = prime.residue_field()
    tbar = ctx.generator()
    gbars = tuple(g.reduce_in(ctx, tbar) for g in module.coeffs)
    return ReducedModule(ctx, prime, tbar, gbars, module.describe())


# -- quadratic twists ----------------------------------------------------------


def _monic_sqrt(m):
    """Monic square root of a monic even-degree polynomial, or None."""
    n = m.degree
    if n % 2:
        return None
    k = n // 2
    ctx = m.ctx
    h = [ctx.zero_val] * k + [ctx.one_val]
    inv2 = ctx.vinv(ctx.embed_int(2))
    for j in range(k - 1, -1, -1):
        # coefficient of y^(k+j) in h^2, with h_j still zero
        acc = ctx.zero_val
        for a in range(j + 1, k + 1):
            b = k + j - a
            if 0 <= b <= k and b != j:
                acc = ctx.vadd(acc, ctx.vmul(h[a], h[b]))
        target = m.coeffs[k + j] if k + j <= m.degree else ctx.zero_val
        h[j] = ctx.vmul(ctx.vsub(target, acc), inv2)
    cand = APoly(ctx, h)
    return cand if cand * cand == m else None


def is_unit_square(c):
    """True iff c = u * h^2 for a unit u (the twist by such c is rejected)."""
    if c.is_zero():
        raise ValueError("twist parameter must be nonzero")
    if c.degree % 2:
        return False
    return _monic_sqrt(c.monic()) is not None


def scale_conjugate(module, u):
    """The isomorphic module u * phi_T * u^-1: g_i -> g_i * u^(1-q^i)."""
    u = RatFun.of(u)
    if u.is_zero():
        raise ValueError("conjugating unit must be nonzero")
    q = module.ground.order
    new = []
    for i, g in enumerate(module.coeffs, start=1):
        new.append(g * u ** (1 - q ** i))
    return DrinfeldModule(module.ground, tuple(new))


def quadratic_twist(module, c):
    """Conjugate phi_T by sqrt(c): g_i -> g_i * c^((1-q^i)/2).

    c must not be a unit times a square, so that the attached quadratic
    character is a genuinely ramified one.  Twisting twice by the same c
    yields scale_conjugate(module, c), an isomorphic model of the module.
    """
    if is_unit_square(c):
        raise ValueError("twist parameter is a unit times a square; twist would be trivial")
    ground = module.ground
    q = ground.order
    new = []
    for i, g in enumerate(module.coeffs, start=1):
        e = (q ** i - 1) // 2
        new.append(g / RatFun(c ** e))
    return DrinfeldModule(ground, tuple(new))


# -- torsion -------------------------------------------------------------------


@dataclass
class TorsionSpace:
    """Full l-torsion of a reduced module over its splitting extension.

    basis is an F_l-basis; struct_cols are the F_q-coordinates of
    phi_{T^j}(v_i) for j < deg(l), the product basis used for coordinates.
    """

    ell: PrimeIdeal
    m: int
    field: object
    basis: list
    struct_cols: list
    t_action: object
    embed_t: object
    red: object

    @property
    def fq_dimension(self):
        return len(self.struct_cols)

    @property
    def ell_dimension(self):
        return len(self.basis)

    def ell_coords(self, qvecs):
        """Coordinates of torsion vectors in the F_l-basis (values of A/l)."""
        ground = self.field.ground
        sols = ffield.solve_columns(ground, self.struct_cols, qvecs)
        dl = self.ell.degree
        out = []
        for mu in sols:
            out.append(tuple(tuple(mu[i * dl + j] for j in range(dl))
                             for i in range(len(self.basis))))
        return out


def _embed_res(res_ctx, big_ctx, t0, val):
    """Map a residue-field value (coefficients of powers of Tbar) through T -> t0."""
    if big_ctx is res_ctx:
        return val
    acc = big_ctx.zero_val
    for c in reversed(val):
        acc = big_ctx.vadd(big_ctx.vmul(acc, t0), big_ctx.embed_ground(c))
    return acc


class _SpanTracker:
    """Incremental row-echelon span of qvec tuples over the ground field."""

    def __init__(self, ground, width):
        self.ground = ground
        self.width = width
        self.rows = []  # (pivot index, normalized row)

    def _reduce(self, vec):
        g = self.ground
        if g.kind == "prime":
            v = np.asarray(vec, dtype=np.int64) % g.p
            for piv, row in self.rows:
                c = int(v[piv])
                if c:
                    v = (v - c * row) % g.p
            return v
        v = list(vec)
        for piv, row in self.rows:
            c = v[piv]
            if c != g.zero_val:
                for i in range(self.width):
                    v[i] = g.vsub(v[i], g.vmul(c, row[i]))
        return v

    def contains(self, vec):
        v = self._reduce(vec)
        if self.ground.kind == "prime":
            return not np.any(v)
        return all(c == self.ground.zero_val for c in v)

    def add(self, vec):
        """Add vec to the span; returns False if it was already inside."""
        g = self.ground
        v = self._reduce(vec)
        if g.kind == "prime":
            nz = np.nonzero(v)[0]
            if len(nz) == 0:
                return False
            piv = int(nz[0])
            row = (v * pow(int(v[piv]), g.p - 2, g.p)) % g.p
        else:
            piv = next((i for i, c in enumerate(v) if c != g.zero_val), None)
            if piv is None:
                return False
            inv = g.vinv(v[piv])
            row = tuple(g.vmul(inv, c) for c in v)
        self.rows.append((piv, row))
        return True

    def dimension(self):
        return len(self.rows)


def _apply_qmat(ground, mat, vec):
    if ground.kind == "prime":
        out = (np.asarray(mat, dtype=np.float64) @ np.asarray(vec, dtype=np.float64))
        return tuple(int(x) for x in (out.astype(np.int64) % ground.p))
    n = len(mat)
    return tuple(ffield._gdot(ground, mat[i], vec) for i in range(n))


def _linearized_xpoly(red, skewpoly):
    """Dense x-polynomial (monic) whose roots are the kernel of the skew map."""
    ctx = red.ctx
    coeffs = skewpoly.coeffs
    q = ctx.q
    top_inv = ctx.vinv(coeffs[-1])
    out = [ctx.zero_val] * (q ** (len(coeffs) - 1) + 1)
    for i, u in enumerate(coeffs):  # exponents q^i are pairwise distinct
        out[q ** i] = ctx.vmul(u, top_inv)
    return out


class _LinQuotient:
    """F_p[x]/(L) for a monic linearized L over a prime-ground residue field.

    Elements are (deg_x < Q) polynomials with residue-field coefficients,
    stored as int arrays of shape (Q, d).  Products reduce through two
    tabulated matrices (one for the residue modulus, one for L), so a
    multiplication is a handful of convolutions plus two matmuls.
    """

    def __init__(self, res_ctx, xpoly):
        self.ctx = res_ctx
        self.p = res_ctx.p
        self.d = res_ctx.qdim
        self.Q = len(xpoly) - 1
        if self.Q * self.d > _QUOTIENT_FLAT_CAP:
            raise EnumerationCapError(
                f"torsion order search needs a {self.Q}x{self.d} quotient; too large")
        p, d, Q = self.p, self.d, self.Q
        self.pred = res_ctx._kit.red  # (d-1, d) float64 rows for the residue modulus
        arr = np.array([list(v) for v in xpoly], dtype=np.int64)
        row0 = (-arr[:Q]) % p  # x^Q mod L
        rows = np.zeros((Q - 1, Q, d), dtype=np.int64)
        cur = row0
        for j in range(Q - 1):
            rows[j] = cur
            carry = cur[Q - 1].copy()
            nxt = np.vstack([np.zeros((1, d), dtype=np.int64), cur[:-1]])
            if carry.any():
                nxt = (nxt + self._smul(carry, row0)) % p
            cur = nxt
        # flattened reduction: s^k * x^(Q+j) for j < Q-1, k < d
        flat = np.zeros(((Q - 1) * d, Q * d), dtype=np.float64)
        for j in range(Q - 1):
            poly = rows[j]
            for k in range(d):
                if k == 0:
                    shifted = poly
                else:
                    unit = np.zeros(d, dtype=np.int64)
                    unit[k] = 1
                    shifted = self._smul(unit, poly)
                flat[j * d + k] = shifted.reshape(-1)
        self.xred = flat
        self.x_elem = self._x()

    def _smul(self, c, poly):
        """Residue-field scalar times a coefficient array (N, d)."""
        p, d = self.p, self.d
        n = poly.shape[0]
        full = np.zeros((n, 2 * d - 1), dtype=np.int64)
        for k in range(d):
            if c[k]:
                full[:, k:k + d] += int(c[k]) * poly
        full %= p
        lo = full[:, :d]
        hi = full[:, d:]
        if hi.shape[1]:
            lo = (lo + (hi.astype(np.float64) @ self.pred[: hi.shape[1]]).astype(np.int64)) % p
        return lo % p

    def _x(self):
        out = np.zeros((self.Q, self.d), dtype=np.int64)
        out[1, 0] = 1
        return out

    def mulmod(self, a, b):
        p, d, Q = self.p, self.d, self.Q
        full = np.zeros((2 * Q - 1, 2 * d - 1), dtype=np.int64)
        for i in range(d):
            ai = a[:, i]
            if not ai.any():
                continue
            for j in range(d):
                bj = b[:, j]
                if bj.any():
                    full[:, i + j] += np.convolve(ai, bj)
        full %= p
        lo = full[:, :d]
        hi = full[:, d:]
        if hi.shape[1]:
            lo = (lo + (hi.astype(np.float64) @ self.pred[: hi.shape[1]]).astype(np.int64)) % p
        upper = lo[Q:]
        result = lo[:Q].copy()
        if upper.shape[0]:
            folded = upper.reshape(1, -1).astype(np.float64) @ self.xred[: upper.shape[0] * d].reshape(upper.shape[0] * d, Q * d)
            result = (result + folded.reshape(Q, d).astype(np.int64)) % p
        return result % p

    def powmod(self, a, e):
        result = np.zeros((self.Q, self.d), dtype=np.int64)
        result[0, 0] = 1
        base = a
        while e:
            if e & 1:
                result = self.mulmod(result, base)
            e >>= 1
            if e:
                base = self.mulmod(base, base)
        return result


def _splitting_order(red, xpoly, m_cap):
    """Smallest m with all roots of the linearized poly rational over F_{q^{dm}}.

    Computed as the order of the q^d-power map in F_p[x]/(L): the kernel is
    fully rational over the degree-m extension iff x^(q^(dm)) = x mod L.
    """
    ctx = red.ctx
    qd = ctx.order
    if ctx.ground.kind == "prime" and ctx.base is ctx.ground:
        ring = _LinQuotient(ctx, xpoly)
        s = ring.x_elem
        for m in range(1, m_cap + 1):
            s = ring.powmod(s, qd)
            if np.array_equal(s, ring.x_elem):
                return m
        raise SplittingCapError(f"splitting degree exceeds m_cap={m_cap}")
    # generic path: same computation with tuple polynomials
    lpoly = _poly.trim(xpoly)
    s = (ctx.zero_val, ctx.one_val)
    x = s
    for m in range(1, m_cap + 1):
        s = _poly.ppow_mod(ctx, s, qd, lpoly)
        if s == x:
            return m
    raise SplittingCapError(f"splitting degree exceeds m_cap={m_cap}")


def torsion_space(red, ell, m_cap=DEFAULT_M_CAP, kernel_permutation=None):
    """The full l-torsion of a reduced module, with its greedy F_l-basis.

    Finds the smallest m <= m_cap with dim_Fq ker(phi_l on F_{q^{dm}}) equal
    to r*deg(l), then builds the basis greedily: the first kernel vector in
    echelon order spans (with its phi_{T^j} images, j < deg l) the first
    F_l-line; repeat with the first kernel vector outside the running span.
    """
    if ell.poly == red.prime.poly:
        raise ValueError("l must differ from the characteristic prime of the residue field")
    ground = red.ctx.ground
    r, dl, d = red.rank, ell.degree, red.degree
    phil = red.phi(ell.poly)
    xpoly = _linearized_xpoly(red, phil)
    m = _splitting_order(red, xpoly, m_cap)
    if m == 1:
        big = red.ctx
        t0 = red.ctx.generator()
    else:
        big = ffield.make_ext_field(ground, d * m)
        t0 = ffield.subfield_root(big, red.prime.poly.coeffs, d)
    ring = FieldCoeffs(big)
    phil_big = SkewPoly(ring, [_embed_res(red.ctx, big, t0, c) for c in phil.coeffs])
    kernel = ffield.kernel_basis(big, operator_matrix(phil_big))
    if len(kernel) != r * dl:
        raise ArithmeticError("kernel dimension disagrees with the splitting order")
    if kernel_permutation is not None:
        kernel = [kernel[i] for i in kernel_permutation]
    phit_big = SkewPoly(ring, [_embed_res(red.ctx, big, t0, c)
                               for c in (red.tbar,) + red.gbars])
    t_op = operator_matrix(phit_big)
    span = _SpanTracker(ground, big.qdim)
    basis = []
    struct_cols = []
    for v in kernel:
        vec = v.qvec()
        if span.contains(vec):
            continue
        chain = [vec]
        for _ in range(1, dl):
            chain.append(_apply_qmat(ground, t_op, chain[-1]))
        for w in chain:
            if not span.add(w):
                raise ArithmeticError("greedy torsion basis failed to extend the span")
        basis.append(v)
        struct_cols.extend(chain)
        if len(basis) == r:
            break
    if len(basis) != r or span.dimension() != r * dl:
        raise ArithmeticError("torsion space has unexpected F_l-dimension")
    t_targets = [_apply_qmat(ground, t_op, col) for col in struct_cols]
    t_cols = ffield.solve_columns(ground, struct_cols, t_targets)
    n = len(struct_cols)
    t_action = tuple(tuple(t_cols[j][i] for j in range(n)) for i in range(n))
    return TorsionSpace(ell=ell, m=m, field=big, basis=basis, struct_cols=struct_cols,
                        t_action=t_action, embed_t=t0, red=red)


# -- the A-module structure of the residue field -------------------------------


def t_action_matrix(red):
    """Matrix over F_q of x -> phi_T(x) on the residue field itself."""
    return operator_matrix(red.phi_t())


def invariant_factors(red):
    """Nontrivial invariant factors b_1 | ... | b_s of the residue field as an A-module."""
    ground = red.ctx.ground
    mat = t_action_matrix(red)
    dd = red.ctx.qdim
    entries = []
    for i in range(dd):
        row = []
        for j in range(dd):
            val = int(mat[i, j]) % ground.p if ground.kind == "prime" else mat[i][j]
            neg = ground.vneg(val)
            coeffs = (neg, ground.one_val) if i == j else (neg,)
            row.append(APoly(ground, coeffs))
        entries.append(row)
    snf = smith_normal_form(entries)
    return SNFResult(snf.nontrivial())


def has_rational_torsion(red, ell):
    """Does the reduced module have a nonzero l-torsion point over A/p itself?

    Computed both as ker(phi_l) over the residue field and as l | b_s; the
    two detectors are asserted to agree.
    """
    if ell.poly == red.prime.poly:
        raise ValueError("l must differ from the characteristic prime of the residue field")
    ground = red.ctx.ground
    op = operator_matrix(red.phi(ell.poly))
    if ground.kind == "prime":
        kernel_dim = len(ffield.kernel_qvecs(ground, op))
    else:
        kernel_dim = len(ffield.kernel_qvecs(ground, op, ncols=red.ctx.qdim))
    by_kernel = kernel_dim > 0
    factors = invariant_factors(red).factors
    by_factor = ell.poly.divides(factors[-1])
    if by_kernel != by_factor:
        raise AssertionError("rational-torsion detectors disagree; bug")
    return by_kernel
