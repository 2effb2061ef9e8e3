"""Frobenius characteristic polynomials of reduced Drinfeld modules.

Per (module, p, l): the matrix of x -> x^(q^d) on the l-torsion in its
F_l-basis, its characteristic polynomial mod l, the monic point-count
generator prod(b_i), and the exact charpoly P(x) in A[x] recovered by CRT
across several l.  P(x) is never trusted blind: each reconstruction must
pass the degree bounds and reproduce the point count.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import matrices
from .apoly import APoly, PrimeIdeal, crt, primes_of_degree
from .drinfeld import invariant_factors, reduce, torsion_space
from .errors import CRTInconsistencyError

# deg a_i <= ceil(d (r-i) / r): the eigenvalue size bound; validated, not trusted.


def frobenius_on_torsion(ts):
    """Matrix over F_l of the q^d-power map in the torsion basis (column convention)."""
    big = ts.field
    ground = big.ground
    d = ts.red.degree
    targets = []
    for v in ts.basis:
        targets.append(big.to_qvec(big.frobq(v.val, d)))
    coords = ts.ell_coords(targets)
    r = len(ts.basis)
    return tuple(tuple(coords[j][i] for j in range(r)) for i in range(r))


def frobenius_matrix(red, ell, m_cap=None, kernel_permutation=None):
    """Frobenius matrix mod l; well-defined up to conjugation (charpoly canonical)."""
    kwargs = {}
    if m_cap is not None:
        kwargs["m_cap"] = m_cap
    ts = torsion_space(red, ell, kernel_permutation=kernel_permutation, **kwargs)
    return frobenius_on_torsion(ts)


def charpoly_mod_ell(red, ell, **kwargs):
    mat = frobenius_matrix(red, ell, **kwargs)
    ellctx = ell.residue_field()
    cp = matrices.charpoly(ellctx, mat)
    if matrices.det(ellctx, mat) == ellctx.zero_val:
        raise ArithmeticError("Frobenius matrix is singular; l = p slipped through")
    return cp


def point_count(red):
    """Monic generator of the point-count ideal: the product of the b_i."""
    out = APoly.one(red.ctx.ground)
    for f in invariant_factors(red).factors:
        out = out * f
    return out.monic()


def _lift_to_apoly(ground, ell, val):
    """A/l value -> its canonical representative of degree < deg l."""
    return APoly(ground, tuple(val))


def _crt_primes(ground, avoid, total_needed):
    """Smallest-degree primes != avoid in lex order, until degrees sum past the bound."""
    out = []
    got = 0
    d = 1
    while got < total_needed:
        for cand in primes_of_degree(ground, d):
            if cand.poly == avoid.poly:
                continue
            out.append(cand)
            got += cand.degree
            if got >= total_needed:
                break
        d += 1
    return out


def charpoly_exact(module, prime, ells=None, m_cap=None):
    """P(x) = x^r + a_{r-1} x^{r-1} + ... + a_0 with coefficients in A.

    Reconstructed by CRT from the charpoly mod l over enough primes l != p;
    cross-checked against the independent invariant-factor point count.
    """
    ground = module.ground
    red = reduce(module, prime)
    r = red.rank
    d = prime.degree
    bounds = [-((-d * (r - i)) // r) for i in range(r)]  # ceil(d(r-i)/r)
    need = max(bounds) + 1
    if ells is None:
        ells = _crt_primes(ground, prime, need)
    elif sum(e.degree for e in ells) < need:
        raise ValueError("supplied CRT primes do not reach the degree bound")
    residues = []  # per ell: list of APoly residues for a_0..a_{r-1}
    for ell in ells:
        kwargs = {"m_cap": m_cap} if m_cap is not None else {}
        cp = charpoly_mod_ell(red, ell, **kwargs)
        residues.append([_lift_to_apoly(ground, ell, cp[i]) for i in range(r)])
    moduli = [e.poly for e in ells]
    coeffs = []
    for i in range(r):
        a_i, _ = crt([res[i] for res in residues], moduli)
        if a_i.degree > bounds[i]:
            raise CRTInconsistencyError(
                f"coefficient a_{i} violates its degree bound {bounds[i]}: {a_i.pretty()}")
        coeffs.append(a_i)
    p_at_one = APoly.one(ground)
    for a_i in coeffs:
        p_at_one = p_at_one + a_i
    if p_at_one.is_zero() or p_at_one.monic() != point_count(red):
        raise CRTInconsistencyError("P(1) disagrees with the invariant-factor point count")
    return tuple(coeffs) + (APoly.one(ground),)


def charpoly_eval_at_one(coeffs):
    out = APoly.zero(coeffs[0].ctx)
    for c in coeffs:
        out = out + c
    return out


def reduce_charpoly_mod(coeffs, ell):
    """Exact charpoly coefficients -> their images in A/l."""
    ctx = ell.residue_field()
    tbar = ctx.generator()
    return tuple(c.eval_in(ctx, tbar) for c in coeffs)


def valuation(a, prime):
    """Multiplicity of prime in a (v_p); a must be nonzero."""
    if a.is_zero():
        raise ValueError("valuation of zero")
    v = 0
    while True:
        q, rem = divmod(a, prime.poly)
        if not rem.is_zero():
            return v
        a = q
        v += 1


@dataclass
class FrobeniusRecord:
    """One (module, p, l) row of Frobenius data."""

    module: str
    q: int
    prime: str
    d: int
    ell: str
    m_split: int
    frobenius: tuple
    charpoly: tuple  # values of A/l, low degree first, monic
    point_count: str
    invariant_factors: tuple
    divisible: bool
    rational_torsion: bool
    exact: tuple | None = None  # APoly strings if computed
    a0_valuation: int | None = None

    def to_json_dict(self):
        charpoly = [",".join(str(x) for x in c) for c in self.charpoly]
        out = {
            "module": self.module,
            "q": self.q,
            "prime": self.prime,
            "d": self.d,
            "ell": self.ell,
            "m_split": self.m_split,
            "charpoly_mod_ell": charpoly,
            "point_count": self.point_count,
            "invariant_factors": list(self.invariant_factors),
            "divisible": self.divisible,
            "rational_torsion": self.rational_torsion,
        }
        if self.exact is not None:
            out["charpoly_exact"] = list(self.exact)
        if self.a0_valuation is not None:
            out["a0_valuation"] = self.a0_valuation
        return out


def build_record(module, prime, ell, with_exact=False, m_cap=None):
    """Assemble the full Frobenius record for one (module, p, l)."""
    from .drinfeld import has_rational_torsion

    red = reduce(module, prime)
    kwargs = {"m_cap": m_cap} if m_cap is not None else {}
    ts = torsion_space(red, ell, **kwargs)
    mat = frobenius_on_torsion(ts)
    ellctx = ell.residue_field()
    cp = matrices.charpoly(ellctx, mat)
    if matrices.det(ellctx, mat) == ellctx.zero_val:
        raise ArithmeticError("Frobenius matrix is singular")
    pc = point_count(red)
    invf = invariant_factors(red)
    divisible = matrices.eval_poly_at_one(ellctx, cp) == ellctx.zero_val
    rational = has_rational_torsion(red, ell)
    if divisible != rational:
        raise AssertionError("P(1) = 0 mod l must agree with rational l-torsion")
    exact = None
    a0v = None
    if with_exact:
        coeffs = charpoly_exact(module, prime, m_cap=m_cap)
        exact = tuple(c.to_string() for c in coeffs)
        a0v = valuation(coeffs[0], prime) if not coeffs[0].is_zero() else None
        got = reduce_charpoly_mod(coeffs, ell)
        if tuple(got) != tuple(cp):
            raise CRTInconsistencyError("exact charpoly does not reduce to the mod-l charpoly")
    return FrobeniusRecord(
        module=module.describe(),
        q=module.ground.order,
        prime=prime.to_string(),
        d=prime.degree,
        ell=ell.to_string(),
        m_split=ts.m,
        frobenius=mat,
        charpoly=cp,
        point_count=pc.to_string(),
        invariant_factors=tuple(f.to_string() for f in invf.factors),
        divisible=divisible,
        rational_torsion=rational,
        exact=exact,
        a0_valuation=a0v,
    )
