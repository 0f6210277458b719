"""The crystalline Weyl algebra: divided-power differential operators.

Elements are kept in normal form sum c * z^e d^[r] with all z's on the left.
Divided powers d^[r] are primitive symbols; composition goes through the
integral rewrite rules

    d^[r] d^[s] = binom(r+s, r) d^[r+s]
    d^[r] z^e  = sum_k binom(e, k) z^(e-k) d^[r-k]

so the char-p collapse (d^p = 0 while d^[p] != 0) is automatic.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .rings import LaurentElem, NegativeExponentViolation, VariableMismatch


class RangeError(ValueError):
    pass


def gen_binom(m, k):
    """binom(m, k) = m(m-1)...(m-k+1)/k! for any integer m, k >= 0."""
    if k < 0:
        return 0
    if m >= 0:
        return comb(m, k)
    return (-1) ** k * comb(k - m - 1, k)


class WeylElement:
    """A normal-form element of S_m over Z/p^n.

    ``terms`` maps (exponent tuple e in Z^m, multi-order r in N^m) to a nonzero
    residue; negative z-exponents are allowed only at ``allowed_negative``
    indices.
    """

    __slots__ = ("p", "n", "num_vars", "allowed_negative", "terms")

    def __init__(self, p, n, num_vars, terms, allowed_negative=()):
        self.p = p
        self.n = n
        self.num_vars = num_vars
        self.allowed_negative = frozenset(allowed_negative)
        q = p ** n
        clean = {}
        for (e, r), c in terms.items():
            e = tuple(e)
            r = tuple(r)
            if len(e) != num_vars or len(r) != num_vars:
                raise VariableMismatch("term arity mismatch")
            if any(v < 0 for v in r):
                raise RangeError("negative divided-power order")
            for i, v in enumerate(e):
                if v < 0 and i not in self.allowed_negative:
                    raise NegativeExponentViolation(
                        "negative exponent at variable %d" % i
                    )
            c %= q
            if c:
                clean[(e, r)] = c
        self.terms = clean

    @classmethod
    def zero(cls, p, n, num_vars, allowed_negative=()):
        return cls(p, n, num_vars, {}, allowed_negative)

    @classmethod
    def one(cls, p, n, num_vars, allowed_negative=()):
        z = (0,) * num_vars
        return cls(p, n, num_vars, {(z, z): 1}, allowed_negative)

    @classmethod
    def monomial(cls, p, n, num_vars, e, r, coeff=1, allowed_negative=()):
        return cls(p, n, num_vars, {(tuple(e), tuple(r)): coeff}, allowed_negative)

    def _check(self, other):
        if (
            self.p != other.p
            or self.n != other.n
            or self.num_vars != other.num_vars
            or self.allowed_negative != other.allowed_negative
        ):
            raise VariableMismatch("incompatible Weyl elements")

    def __add__(self, other):
        self._check(other)
        q = self.p ** self.n
        terms = dict(self.terms)
        for k, c in other.terms.items():
            v = (terms.get(k, 0) + c) % q
            if v:
                terms[k] = v
            else:
                terms.pop(k, None)
        return WeylElement(self.p, self.n, self.num_vars, terms,
                           self.allowed_negative)

    def scalar_mul(self, c):
        terms = {k: v * c for k, v in self.terms.items()}
        return WeylElement(self.p, self.n, self.num_vars, terms,
                           self.allowed_negative)

    def __neg__(self):
        return self.scalar_mul(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Composition self o other, renormalized."""
        if isinstance(other, int):
            return self.scalar_mul(other)
        self._check(other)
        q = self.p ** self.n
        out = {}
        for (e1, r1), c1 in self.terms.items():
            for (e2, r2), c2 in other.terms.items():
                # commute d^[r1] past z^e2, one variable at a time
                base = c1 * c2
                choices = []
                for i in range(self.num_vars):
                    ch = []
                    top = min(r1[i], e2[i]) if e2[i] >= 0 else r1[i]
                    for k in range(0, top + 1):
                        b = gen_binom(e2[i], k) % q
                        if b:
                            ch.append((k, b))
                    choices.append(ch)
                stack = [((), 1)]
                for ch in choices:
                    stack = [
                        (ks + (k,), cc * b) for ks, cc in stack for k, b in ch
                    ]
                for ks, cc in stack:
                    e = tuple(a + b - k for a, b, k in zip(e1, e2, ks))
                    coeff = base * cc
                    rr = []
                    for i in range(self.num_vars):
                        ra = r1[i] - ks[i]
                        coeff = (coeff * comb(ra + r2[i], ra)) % q
                        rr.append(ra + r2[i])
                    if not coeff:
                        continue
                    key = (e, tuple(rr))
                    v = (out.get(key, 0) + coeff) % q
                    if v:
                        out[key] = v
                    else:
                        out.pop(key, None)
        return WeylElement(self.p, self.n, self.num_vars, out,
                           self.allowed_negative)

    def __rmul__(self, other):
        return self.scalar_mul(other)

    def __pow__(self, k):
        out = WeylElement.one(self.p, self.n, self.num_vars,
                              self.allowed_negative)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, WeylElement)
            and self.p == other.p
            and self.n == other.n
            and self.num_vars == other.num_vars
            and self.allowed_negative == other.allowed_negative
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.p, self.n, self.num_vars,
                     tuple(sorted(self.terms.items()))))

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        return sorted(self.terms.items())

    def order(self):
        """Maximal total divided-power order among the terms."""
        return max((sum(r) for (_, r) in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (e, r), c in self.sorted_terms():
            mon = "".join("z%d^%d" % (i, v) for i, v in enumerate(e) if v)
            dd = "".join("D%d[%d]" % (i, v) for i, v in enumerate(r) if v)
            bits.append("%d%s%s" % (c, mon, dd))
        return " + ".join(bits)

    def to_json(self):
        return {
            "p": self.p,
            "n": self.n,
            "vars": self.num_vars,
            "neg": sorted(self.allowed_negative),
            "terms": [
                {"e": list(e), "order": list(r), "c": c}
                for (e, r), c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, obj):
        terms = {
            (tuple(t["e"]), tuple(t["order"])): t["c"] for t in obj["terms"]
        }
        return cls(obj["p"], obj["n"], obj["vars"], terms, obj.get("neg", ()))


def normal_form(word, p, n, num_vars, allowed_negative=()):
    """Fold a generator word into normal form.

    Tokens are ("z", i, k) for z_i^k and ("d", i, r) for d_i^[r].
    """
    acc = WeylElement.one(p, n, num_vars, allowed_negative)
    for tok in word:
        kind, i, k = tok
        e = [0] * num_vars
        r = [0] * num_vars
        if kind == "z":
            e[i] = k
        elif kind == "d":
            r[i] = k
        else:
            raise ValueError("unknown token %r" % (tok,))
        acc = acc * WeylElement.monomial(p, n, num_vars, e, r,
                                         allowed_negative=allowed_negative)
    return acc


def apply_word(word, f):
    """Apply a generator word to f right-to-left (the sequential oracle)."""
    out = f
    for tok in reversed(word):
        kind, i, k = tok
        if kind == "z":
            mono = LaurentElem.monomial(f.p, f.n, f.num_vars,
                                        tuple(k if j == i else 0
                                              for j in range(f.num_vars)),
                                        1, f.allowed_negative)
            out = mono * out
        else:
            terms = {}
            q = f.p ** f.n
            for e, c in out.terms.items():
                b = gen_binom(e[i], k) % q
                if not b:
                    continue
                e2 = tuple(v - k if j == i else v for j, v in enumerate(e))
                v = (terms.get(e2, 0) + c * b) % q
                if v:
                    terms[e2] = v
            out = LaurentElem(f.p, f.n, f.num_vars, terms, f.allowed_negative)
    return out


def apply(op, f):
    """Evaluate a normal-form operator on a Laurent polynomial.

    The divided action is d^[r](z^u) = binom(u, r) z^(u-r) with the
    generalized binomial, reduced in Z/p^n.
    """
    if op.num_vars != f.num_vars or op.p != f.p or op.n != f.n:
        raise VariableMismatch("operator/function ring mismatch")
    q = f.p ** f.n
    terms = {}
    for (e, r), c in op.terms.items():
        for u, cu in f.terms.items():
            coeff = c * cu
            ok = True
            for i in range(op.num_vars):
                b = gen_binom(u[i], r[i])
                if b % q == 0:
                    ok = False
                    break
                coeff *= b
            if not ok:
                continue
            tgt = tuple(u[i] - r[i] + e[i] for i in range(op.num_vars))
            v = (terms.get(tgt, 0) + coeff) % q
            if v:
                terms[tgt] = v
            else:
                terms.pop(tgt, None)
    return LaurentElem(f.p, f.n, f.num_vars, terms, f.allowed_negative)


def theta(p, level, i, j, num_vars=None):
    """The matrix-unit endomorphism z^i d^[p^level-1] z^(p^level-1-j) over F_p."""
    if num_vars is None:
        num_vars = len(i)
    i = tuple(i)
    j = tuple(j)
    top = p ** level
    if len(i) != num_vars or len(j) != num_vars:
        raise RangeError("index arity mismatch")
    if any(not (0 <= v < top) for v in i + j):
        raise RangeError("theta indices must lie in [0, p^level)")
    full = tuple(top - 1 for _ in range(num_vars))
    word = (
        [("z", k, i[k]) for k in range(num_vars) if i[k]]
        + [("d", k, full[k]) for k in range(num_vars)]
        + [("z", k, full[k] - j[k]) for k in range(num_vars) if full[k] - j[k]]
    )
    return normal_form(word, p, 1, num_vars)


def z2d_divided_power(p, n, s, var=0, num_vars=1, allowed_negative=()):
    """(z^2 d)^[s] = sum_i binom(s-1, i) z^(2s-i) d^[s-i] in one variable."""
    terms = {}
    q = p ** n
    for i in range(s):
        c = comb(s - 1, i) % q
        if not c:
            continue
        e = [0] * num_vars
        r = [0] * num_vars
        e[var] = 2 * s - i
        r[var] = s - i
        terms[(tuple(e), tuple(r))] = c
    if s == 0:
        return WeylElement.one(p, n, num_vars, allowed_negative)
    return WeylElement(p, n, num_vars, terms, allowed_negative)


def rational_z2d_power(s, m):
    """Oracle: coefficient of (1/s!)(z^2 d/dz)^s on z^m, over Q.

    Returns (coefficient, exponent) of the single resulting monomial.
    """
    coeff = Fraction(1)
    e = m
    for _ in range(s):
        coeff *= e
        e += 1
    return coeff / factorial(s), m + s


# ----------------------------------------------------------------------
# charts on P^d and the y-operators
# ----------------------------------------------------------------------

class ChartOperator:
    """A Weyl element expressed in the coordinates of one standard chart."""

    __slots__ = ("chart", "weyl")

    def __init__(self, chart, weyl):
        self.chart = chart
        self.weyl = weyl

    def __repr__(self):
        return "ChartOperator(chart=%d, %r)" % (self.chart, self.weyl)


class ChartAtlas:
    """The d+1 standard charts of P^d with monomial transition maps.

    Degree-zero monomials in the homogeneous coordinates z_0..z_d are the
    common currency: chart V_c sees the monomial z^u as the chart-coordinate
    exponent vector (u_s)_{s != c}.
    """

    def __init__(self, d):
        self.d = d

    def chart_vars(self, c):
        return [s for s in range(self.d + 1) if s != c]

    def to_chart(self, c, u):
        """Ambient degree-0 exponent vector -> chart exponents."""
        if sum(u) != 0:
            raise VariableMismatch("ambient monomials must have degree 0")
        return tuple(u[s] for s in self.chart_vars(c))

    def from_chart(self, c, e):
        u = [0] * (self.d + 1)
        for slot, s in enumerate(self.chart_vars(c)):
            u[s] = e[slot]
        u[c] = -sum(u)
        return tuple(u)

    def transition_check(self, samples):
        """Round-trip sampled monomials through chart triples."""
        for u in samples:
            for a in range(self.d + 1):
                for b in range(self.d + 1):
                    for c in range(self.d + 1):
                        v = self.from_chart(b, self.to_chart(b, u))
                        v = self.from_chart(c, self.to_chart(c, v))
                        v = self.from_chart(a, self.to_chart(a, v))
                        if v != tuple(u):
                            return False
        return True

    def apply_ambient(self, op, u):
        """Apply a ChartOperator to the ambient monomial z^u.

        Returns a dict ambient-exponent-vector -> coefficient (mod p^n).
        """
        c = op.chart
        w = op.weyl
        q = w.p ** w.n
        e_in = self.to_chart(c, u)
        out = {}
        for (e, r), coeff in w.terms.items():
            val = coeff
            ok = True
            for i in range(w.num_vars):
                b = gen_binom(e_in[i], r[i])
                if b % q == 0:
                    ok = False
                    break
                val *= b
            if not ok:
                continue
            tgt = tuple(e_in[i] - r[i] + e[i] for i in range(w.num_vars))
            amb = self.from_chart(c, tgt)
            v = (out.get(amb, 0) + val) % q
            if v:
                out[amb] = v
            else:
                out.pop(amb, None)
        return out


def y_operator(i, j, r, d, p, n=1):
    """The divided power y_{ij}^[r], raising z_i and lowering z_j.

    Expressed as the plain divided derivative d^[r] with respect to the
    coordinate z_{j,i} of the chart V_i, where its action on monomials is
    z^u -> binom(u_j, r) z^(u + r e_i - r e_j).
    """
    if not (0 <= i <= d and 0 <= j <= d) or i == j:
        raise RangeError("invalid root indices")
    atlas = ChartAtlas(d)
    slot = atlas.chart_vars(i).index(j)
    rr = [0] * d
    rr[slot] = r
    return ChartOperator(i, WeylElement.monomial(p, n, d, (0,) * d, rr))


def y_operator_dual(i, j, r, p, n=1):
    """y_{ij}^[r] written in the chart V_j of the (i, j)-line (P^1 picture).

    For r = 1 this is -z^2 d/dz in the coordinate z_{ij}; higher divided
    powers expand through (z^2 d)^[s].
    """
    return ChartOperator(
        j, z2d_divided_power(p, n, r).scalar_mul((-1) ** r)
    )


def monomial_y_action(p, i, j, r, u):
    """Direct binomial formula for y_{ij}^[r] on z^u over F_p."""
    b = gen_binom(u[j], r) % p
    if b == 0:
        return 0, None
    v = list(u)
    v[i] += r
    v[j] -= r
    return b, tuple(v)


def is_global(op, atlas, degree_bound=8):
    """Chart-preservation test for a ChartOperator on P^d.

    True iff the operator maps every chart's polynomial monomials (total
    chart degree up to the bound, plus one extra stabilization level) into
    that chart's polynomial ring.
    """
    d = atlas.d
    for extra in (0, 1, 2):
        bound = degree_bound + extra
        for c in range(d + 1):
            for e in _chart_monomials(d, bound):
                u = atlas.from_chart(c, e)
                img = atlas.apply_ambient(op, u)
                for v in img:
                    if any(v[s] < 0 for s in range(d + 1) if s != c):
                        return False
    return True


def _chart_monomials(d, bound):
    if d == 0:
        yield ()
        return
    for first in range(bound + 1):
        for rest in _chart_monomials(d - 1, bound - first):
            yield (first,) + rest
