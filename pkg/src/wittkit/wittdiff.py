"""Witt differential operators: lifted divided powers restricted through w-tilde.

An operator here is a divided-power differential operator over Z/p^L acting on
(Z/p^L)[z...]; its restriction to W_L(A) is computed by conjugation with the
injection w-tilde, i.e. as wtilde^-1 o lift o wtilde.  The section-3 relations
with R, Phi and V are checked sample-wise and exactly.
"""

from __future__ import annotations

from .rings import LaurentElem
from .weyl import RangeError, WeylElement, apply as weyl_apply, gen_binom
from .witt import (
    LiftedElem,
    NotInImage,
    WittVector,
    restrict,
    teichmuller,
    tilde_w,
    tilde_w_inverse,
    verschiebung,
    witt_phi,
    witt_scalar_mul,
)


def v_p(m, p):
    if m == 0:
        return None  # +infinity
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def legendre_factorial_valuation(m, p):
    """v_p(m!) = sum_i floor(m / p^i)."""
    total = 0
    q = p
    while q <= m:
        total += m // q
        q *= p
    return total


def valuation_binom(w, z, p):
    """Exact v_p(binom(w, z)) together with the lower bound v_p(w) - v_p(z).

    The inequality v_p(binom(w,z)) >= v_p(w) - v_p(z) is asserted.
    """
    if not (0 < z <= w):
        raise RangeError("need 0 < z <= w")
    val = (
        legendre_factorial_valuation(w, p)
        - legendre_factorial_valuation(z, p)
        - legendre_factorial_valuation(w - z, p)
    )
    bound = v_p(w, p) - v_p(z, p)
    if val < bound:
        raise ArithmeticError("valuation lemma violated")
    return val, bound


class WittDiffOp:
    """A lift over Z/p^L of a char-p divided-power operator.

    ``lift`` is a WeylElement over Z/p^L (realized on A_L = (Z/p^L)[z...]);
    ``provenance`` is the char-p operator it lifts.  The restriction to
    W_L(A) exists by the factorization theorem and is evaluated by
    w-tilde conjugation in :func:`apply_witt`.
    """

    __slots__ = ("p", "length", "lift", "provenance")

    def __init__(self, p, length, lift, provenance):
        if lift.p != p or lift.n != length:
            raise ValueError("lift modulus mismatch")
        self.p = p
        self.length = length
        self.lift = lift
        self.provenance = provenance


def lift_operator(base, length):
    """Coefficientwise integer lift of a char-p operator to Z/p^length."""
    terms = {}
    for (e, r), c in base.terms.items():
        terms[(e, r)] = c  # residues 0..p-1 are their own integer lifts
    lift = WeylElement(base.p, length, base.num_vars, terms,
                       base.allowed_negative)
    return WittDiffOp(base.p, length, lift, base)


def teichmuller_lift_op(base, length):
    """The Teichmuller lift [sum b_r d^[r]] = sum [b_r] d^[r].

    The Witt scalar [b_r] acts through w-tilde as the p^(length-1)-th power
    of a coefficient lift, so the realized operator has coefficients
    lift(b_r)^(p^(length-1)).
    """
    p = base.p
    by_order = {}
    for (e, r), c in base.terms.items():
        by_order.setdefault(r, {})[e] = c
    terms = {}
    for r, coeff_terms in by_order.items():
        poly = LaurentElem(p, length, base.num_vars, coeff_terms,
                           base.allowed_negative)
        realized = poly ** (p ** (length - 1))
        for e, c in realized.terms.items():
            key = (e, r)
            terms[key] = (terms.get(key, 0) + c) % (p ** length)
    lift = WeylElement(p, length, base.num_vars, terms, base.allowed_negative)
    return WittDiffOp(p, length, lift, base)


def partial_op(p, num_vars, j, r, length):
    """The canonical lift of d_j^[r] over Z/p^length."""
    rr = [0] * num_vars
    rr[j] = r
    base = WeylElement.monomial(p, 1, num_vars, (0,) * num_vars, rr)
    return lift_operator(base, length)


def i_star(op):
    """Reduce a Witt differential operator back to characteristic p.

    Inverts the Teichmuller-lift presentation: the realized coefficient of
    d^[r] is the p^(L-1)-th power of a coefficient lift, so reducing mod p
    and extracting p^(L-1)-th roots of the exponents recovers the char-p
    coefficients.  For Teichmuller lifts this satisfies i_star([op]) = op.
    """
    p, L = op.p, op.length
    step = p ** (L - 1)
    by_order = {}
    for (e, r), c in op.lift.terms.items():
        if c % p == 0:
            continue
        if any(v % step for v in e):
            raise NotInImage("coefficient is not a Teichmuller realization")
        root = tuple(v // step for v in e)
        key = (root, r)
        by_order[key] = (by_order.get(key, 0) + c) % p
    terms = {k: v for k, v in by_order.items() if v}
    return WeylElement(p, 1, op.lift.num_vars, terms,
                       op.lift.allowed_negative)


def apply_witt(op, x):
    """Evaluate the restriction of op to W_L(A) by w-tilde conjugation."""
    if x.n != op.length:
        raise ValueError("vector length disagrees with operator level")
    y = tilde_w(x)
    z = weyl_apply(op.lift, y.value)
    return tilde_w_inverse(LiftedElem(op.p, op.length, z))


def monomial_case_split(p, length, j, r, level, scalar, u):
    """The explicit case formula on scalar * V^level([z^u]).

    With k = length-1-level, the image monomial
    p^level * binom(u_j p^k, r) z^(u p^k - r e_j) reenters the Witt vectors
    at layer length-1-v_p(r) when v_p(r) <= k, and at the original layer
    otherwise.  Returns (layer, unit, root exponent vector) or None when the
    image vanishes.
    """
    k = length - 1 - level
    n_coef = scalar * (p ** level) * gen_binom(u[j] * (p ** k), r)
    n_coef %= p ** length
    if n_coef == 0:
        return None
    exps = tuple(
        u[s] * (p ** k) - (r if s == j else 0) for s in range(len(u))
    )
    vr = v_p(r, p) if r else 0
    layer = length - 1 - vr if vr <= k else level
    step = p ** (length - 1 - layer)
    if any(e % step for e in exps):
        raise NotInImage("case formula produced a non-split monomial")
    if n_coef % (p ** layer):
        raise NotInImage("case formula coefficient valuation too small")
    unit = n_coef // (p ** layer)
    root = tuple(e // step for e in exps)
    return (layer, unit, root)


def apply_witt_monomial(p, length, j, r, level, scalar, u, num_vars):
    """Second-route evaluation returning an honest WittVector."""
    res = monomial_case_split(p, length, j, r, level, scalar, u)
    if res is None:
        zero = LaurentElem.zero(p, 1, num_vars,
                                allowed_negative=range(num_vars))
        return WittVector(p, length, [zero] * length)
    layer, unit, root = res
    mono = LaurentElem.monomial(p, 1, num_vars, root, 1,
                                allowed_negative=range(num_vars))
    out = witt_scalar_mul(unit, teichmuller(mono, length - layer))
    for _ in range(layer):
        out = verschiebung(out)
    return out


# ----------------------------------------------------------------------
# relation checks (restriction / Frobenius / Verschiebung / filtration)
# ----------------------------------------------------------------------

def check_relation(which, p, n, d, r, samples, rng, j=0):
    """Exact sample checks of the section-3 relations for d_j^[r].

    ``n`` follows the text's convention: operators live over Z/p^(n+1) and
    act on W_(n+1)(A).  d^[r/p] is the zero operator when p does not
    divide r.
    """
    L = n + 1
    op_hi = partial_op(p, d, j, r, L)
    failures = []
    cases = 0
    for _ in range(samples):
        cases += 1
        if which == "restriction":
            x = random_witt_vector(p, L, d, rng)
            lhs = restrict(apply_witt(op_hi, x))
            if r % p == 0:
                op_lo = partial_op(p, d, j, r // p, L - 1)
                rhs = apply_witt(op_lo, restrict(x))
            else:
                rhs = witt_scalar_mul(0, restrict(x))
            if lhs != rhs:
                failures.append(x.to_json())
        elif which == "frobenius":
            x = random_witt_vector(p, L, d, rng)
            lhs = apply_witt(op_hi, witt_phi(x))
            if r % p == 0:
                op_lo = partial_op(p, d, j, r // p, L)
                rhs = witt_phi(apply_witt(op_lo, x))
            else:
                rhs = witt_scalar_mul(0, x)
            if lhs != rhs:
                failures.append(x.to_json())
        elif which == "verschiebung":
            x = random_witt_vector(p, L - 1, d, rng)
            op_lo = partial_op(p, d, j, r, L - 1)
            lhs = apply_witt(op_hi, verschiebung(x))
            rhs = verschiebung(apply_witt(op_lo, x))
            if lhs != rhs:
                failures.append(x.to_json())
        elif which == "filtration":
            i = rng.randrange(1, L)
            x = random_witt_vector(p, L, d, rng, first_zero=i)
            out = apply_witt(op_hi, x)
            if any(not out.coords[s].is_zero() for s in range(i)):
                failures.append(x.to_json())
        else:
            raise ValueError("unknown relation %r" % (which,))
    return {"relation": which, "p": p, "n": n, "d": d, "r": r,
            "cases": cases, "failures": failures}


def image_valuation_check(p, n, d, q_order, samples, rng, j=0):
    """Images of an order-q operator land in V^(n - v_p(q)) W_(n+1)(A)."""
    L = n + 1
    vq = v_p(q_order, p)
    if vq is None or vq > n:
        raise ValueError("need v_p(q) <= n")
    op = partial_op(p, d, j, q_order, L)
    failures = []
    for _ in range(samples):
        x = random_witt_vector(p, L, d, rng)
        out = apply_witt(op, x)
        if any(not out.coords[s].is_zero() for s in range(n - vq)):
            failures.append(x.to_json())
    return {"order": q_order, "cases": samples, "failures": failures}


def random_witt_vector(p, length, d, rng, first_zero=0, poly_only=False):
    """A sparse random Witt vector with small monomial Laurent coordinates."""
    coords = []
    neg = () if poly_only else tuple(range(d))
    for idx in range(length):
        if idx < first_zero:
            coords.append(LaurentElem.zero(p, 1, d, neg))
            continue
        terms = {}
        for _ in range(rng.randrange(0, 3)):
            e = tuple(
                rng.randrange(0, 4) if poly_only else rng.randrange(-2, 4)
                for _ in range(d)
            )
            terms[e] = rng.randrange(1, p)
        coords.append(LaurentElem(p, 1, d, terms, neg))
    return WittVector(p, length, coords)


def lift_independence_check(p, n, d, r, pairs, rng, j=0):
    """Restrictions of two lifts differing by p^(v_p(r)+1) g d^[r] agree."""
    L = n + 1
    vq = v_p(r, p) or 0
    base = partial_op(p, d, j, r, L)
    failures = []
    for _ in range(pairs):
        e = tuple(rng.randrange(0, 3) for _ in range(d))
        g = rng.randrange(1, p)
        rr = [0] * d
        rr[j] = r
        extra = WeylElement.monomial(
            p, L, d, e, rr, coeff=g * (p ** (vq + 1))
        )
        other = WittDiffOp(p, L, base.lift + extra, base.provenance)
        x = random_witt_vector(p, L, d, rng)
        if apply_witt(base, x) != apply_witt(other, x):
            failures.append(x.to_json())
    return {"pairs": pairs, "failures": failures}
