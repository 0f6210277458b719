"""Truncated p-typical Witt vectors with exact arithmetic.

Arithmetic is performed by lifting coordinates to a torsion-free cover (Z or
Z[z^{+-1}]), transporting through ghost components, and inverting the ghost map
with exact integer divisions.  The values so produced coincide with
specializations of the universal addition/multiplication polynomials, which are
also constructed explicitly (and cross-checked in the test suite).

Conventions: a vector of length n has coordinates (a_1, ..., a_n); ghost
components are w_i = sum_{j<=i} p^j a_{j+1}^{p^(i-j)} for 0 <= i < n.
"""

from __future__ import annotations


from .rings import LaurentElem, PrimeFieldElem, VariableMismatch, is_prime


class IntegralityFailure(ArithmeticError):
    pass


class TorsionRing(TypeError):
    pass


class NotInImage(ValueError):
    pass


class LengthUnderflow(ValueError):
    pass


class CharTwoUnsupported(ValueError):
    pass


class DuplicateSummand(ValueError):
    pass


Mismatch = VariableMismatch


# ----------------------------------------------------------------------
# integer covers: plain ints for scalars, exponent->int dicts for Laurent
# ----------------------------------------------------------------------

def _lift(c):
    if isinstance(c, int):
        return c
    if isinstance(c, PrimeFieldElem):
        return c.value
    if isinstance(c, LaurentElem):
        return dict(c.terms)
    raise TypeError("unsupported coordinate type %r" % type(c))


def _reduce_like(cover, template, p):
    if isinstance(template, int):
        return cover
    if isinstance(template, PrimeFieldElem):
        return PrimeFieldElem(p, cover % p)
    if isinstance(template, LaurentElem):
        if isinstance(cover, int):
            cover = {(0,) * template.num_vars: cover}
        return LaurentElem(
            p, 1, template.num_vars, cover, template.allowed_negative
        )
    raise TypeError("unsupported coordinate type %r" % type(template))


def _cadd(a, b):
    if isinstance(a, int):
        return a + b
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _cneg(a):
    if isinstance(a, int):
        return -a
    return {e: -c for e, c in a.items()}


def _cmul(a, b):
    if isinstance(a, int):
        return a * b
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _cscale(k, a):
    if isinstance(a, int):
        return k * a
    if k == 0:
        return {}
    return {e: k * c for e, c in a.items()}


def _cpow(a, k):
    if isinstance(a, int):
        return a ** k
    if k < 1:
        raise ValueError("dict covers only support positive powers")
    out = None
    base = a
    while k:
        if k & 1:
            out = base if out is None else _cmul(out, base)
        k >>= 1
        if k:
            base = _cmul(base, base)
    return out


def _cdivexact(a, k):
    if isinstance(a, int):
        q, r = divmod(a, k)
        if r:
            raise IntegralityFailure("non-exact division by %d" % k)
        return q
    out = {}
    for e, c in a.items():
        q, r = divmod(c, k)
        if r:
            raise IntegralityFailure("non-exact division by %d" % k)
        out[e] = q
    return out


def _ghost_from_covers(covers, p):
    """Ghost components of a lifted coordinate tuple."""
    n = len(covers)
    ws = []
    for i in range(n):
        acc = None
        for j in range(i + 1):
            t = _cscale(p ** j, _cpow(covers[j], p ** (i - j)))
            acc = t if acc is None else _cadd(acc, t)
        ws.append(acc)
    return ws


def _ghost_inverse(ws, p):
    """Recover Witt coordinates over a torsion-free ring from ghost values."""
    n = len(ws)
    coords = []
    for i in range(n):
        acc = ws[i]
        for j in range(i):
            acc = _cadd(acc, _cneg(_cscale(p ** j, _cpow(coords[j], p ** (i - j)))))
        coords.append(_cdivexact(acc, p ** i))
    return coords


# ----------------------------------------------------------------------
# universal polynomials
# ----------------------------------------------------------------------

def _poly_ghost(var_offset, nvars, p, i):
    """Ghost polynomial w_i in variables var_offset..var_offset+i as a dict."""
    out = {}
    for j in range(i + 1):
        e = [0] * nvars
        e[var_offset + j] = p ** (i - j)
        out[tuple(e)] = p ** j
    return out


class UniversalWittPolys:
    """Sum/product/negation polynomials for W_n, built by ghost recursion.

    The recursion solves p^i * S_i = w_i(X) + w_i(Y) - sum_{j<i} p^j S_j^(p^(i-j))
    over Z with a hard exactness assertion, so ghost compatibility holds by
    construction and all coefficients are certified integers.
    """

    def __init__(self, p, n):
        if not is_prime(p) or n < 1:
            raise ValueError("need prime p and n >= 1")
        self.p = p
        self.n = n
        nv = 2 * n
        gx = [_poly_ghost(0, nv, p, i) for i in range(n)]
        gy = [_poly_ghost(n, nv, p, i) for i in range(n)]
        self.sum_polys = self._solve(
            [(_cadd(gx[i], gy[i])) for i in range(n)], p
        )
        self.prod_polys = self._solve(
            [_cmul(gx[i], gy[i]) for i in range(n)], p
        )
        gneg = [_poly_ghost(0, n, p, i) for i in range(n)]
        self.neg_polys = self._solve([_cneg(g) for g in gneg], p)

    @staticmethod
    def _solve(target_ghosts, p):
        # ghost inversion with p-th-power chaining across levels
        n = len(target_ghosts)
        coords = []
        powers = {}
        for i in range(n):
            acc = target_ghosts[i]
            for j in range(i):
                powers[j] = _cpow(powers[j], p) if j in powers \
                    else _cpow(coords[j], p)
                acc = _cadd(acc, _cneg(_cscale(p ** j, powers[j])))
            coords.append(_cdivexact(acc, p ** i))
        return coords

    def check_ghost_compat(self):
        """Recompute ghosts of S, P, I symbolically and compare with targets.

        Powers are chained across ghost levels: at level i the j-th summand
        needs polys[j]^(p^(i-j)), one p-th power beyond its level-(i-1) form.
        """
        p, n = self.p, self.n
        nv = 2 * n
        gx = [_poly_ghost(0, nv, p, i) for i in range(n)]
        gy = [_poly_ghost(n, nv, p, i) for i in range(n)]
        gneg = [_poly_ghost(0, n, p, i) for i in range(n)]
        jobs = (
            ("sum", self.sum_polys, [_cadd(a, b) for a, b in zip(gx, gy)]),
            ("product", self.prod_polys, [_cmul(a, b) for a, b in zip(gx, gy)]),
            ("negation", self.neg_polys, [_cneg(g) for g in gneg]),
        )
        for name, polys, targets in jobs:
            powers = {}
            for i in range(n):
                acc = None
                for j in range(i + 1):
                    powers[j] = polys[j] if j == i else _cpow(powers[j], p)
                    term = _cscale(p ** j, powers[j])
                    acc = term if acc is None else _cadd(acc, term)
                if acc != targets[i]:
                    raise IntegralityFailure(
                        "%s polynomial ghost mismatch at %d" % (name, i)
                    )
        return True

    def specialize(self, poly, values):
        """Evaluate one stored polynomial at integer-cover values.

        The universal polynomials have no constant term, so every monomial
        touches at least one variable.
        """
        powcache = [dict() for _ in values]

        def vpow(i, k):
            cache = powcache[i]
            if k not in cache:
                cache[k] = _cpow(values[i], k)
            return cache[k]

        acc = None
        for exps, c in poly.items():
            term = None
            for i, e in enumerate(exps):
                if e:
                    f = vpow(i, e)
                    term = f if term is None else _cmul(term, f)
            if term is None:
                raise IntegralityFailure("unexpected constant monomial")
            term = _cscale(c, term)
            acc = term if acc is None else _cadd(acc, term)
        if acc is None:
            return 0 if isinstance(values[0], int) else {}
        return acc


_POLY_CACHE = {}


def build_universal_polys(p, n):
    key = (p, n)
    if key not in _POLY_CACHE:
        _POLY_CACHE[key] = UniversalWittPolys(p, n)
    return _POLY_CACHE[key]


# ----------------------------------------------------------------------
# Witt vectors
# ----------------------------------------------------------------------

class WittVector:
    """A length-n p-typical Witt vector with exact coordinates.

    Coordinates are all plain ints (ring Z), all PrimeFieldElem, or all
    LaurentElem over F_p; mixing is rejected.
    """

    __slots__ = ("p", "n", "coords")

    def __init__(self, p, n, coords):
        coords = tuple(coords)
        if len(coords) != n:
            raise Mismatch("coordinate count != n")
        self.p = p
        self.n = n
        self.coords = coords
        for c in coords:
            if isinstance(c, (PrimeFieldElem, LaurentElem)) and c.p != p:
                raise Mismatch("coordinate characteristic mismatch")
            if isinstance(c, LaurentElem) and c.n != 1:
                raise Mismatch("Laurent coordinates must live over F_p")

    # -- helpers --------------------------------------------------------

    def _check(self, other):
        if self.p != other.p or self.n != other.n:
            raise Mismatch("incompatible Witt vectors")

    def _is_char_p(self):
        return not self.coords or not isinstance(self.coords[0], int)

    def zero_coord(self):
        c = self.coords[0]
        if isinstance(c, int):
            return 0
        if isinstance(c, PrimeFieldElem):
            return PrimeFieldElem(self.p, 0)
        return LaurentElem.zero(self.p, 1, c.num_vars, c.allowed_negative)

    def is_zero(self):
        return all(not _lift(c) for c in self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, WittVector)
            and self.p == other.p
            and self.n == other.n
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash((self.p, self.n, self.coords))

    def __repr__(self):
        return "WittVector(p=%d, %r)" % (self.p, list(self.coords))

    def to_json(self):
        return {
            "p": self.p,
            "n": self.n,
            "coords": [
                c.to_json() if isinstance(c, LaurentElem)
                else (c.value if isinstance(c, PrimeFieldElem) else c)
                for c in self.coords
            ],
        }

    @classmethod
    def from_json(cls, obj):
        coords = []
        for c in obj["coords"]:
            if isinstance(c, dict):
                coords.append(LaurentElem.from_json(c))
            else:
                coords.append(PrimeFieldElem(obj["p"], c))
        return cls(obj["p"], obj["n"], coords)


def _binop(x, y, combine):
    x._check(y)
    cx = [_lift(c) for c in x.coords]
    cy = [_lift(c) for c in y.coords]
    gx = _ghost_from_covers(cx, x.p)
    gy = _ghost_from_covers(cy, x.p)
    gz = [combine(a, b) for a, b in zip(gx, gy)]
    cz = _ghost_inverse(gz, x.p)
    return WittVector(
        x.p, x.n, [_reduce_like(c, t, x.p) for c, t in zip(cz, x.coords)]
    )


def witt_add(x, y):
    return _binop(x, y, _cadd)


def witt_mul(x, y):
    return _binop(x, y, _cmul)


def witt_neg(x):
    cx = [_lift(c) for c in x.coords]
    gx = _ghost_from_covers(cx, x.p)
    cz = _ghost_inverse([_cneg(g) for g in gx], x.p)
    return WittVector(
        x.p, x.n, [_reduce_like(c, t, x.p) for c, t in zip(cz, x.coords)]
    )


def witt_sub(x, y):
    return witt_add(x, witt_neg(y))


def witt_add_via_polys(x, y):
    """Addition by direct specialization of the universal sum polynomials."""
    x._check(y)
    upw = build_universal_polys(x.p, x.n)
    vals = [_lift(c) for c in x.coords] + [_lift(c) for c in y.coords]
    out = [upw.specialize(s, vals) for s in upw.sum_polys]
    return WittVector(
        x.p, x.n, [_reduce_like(c, t, x.p) for c, t in zip(out, x.coords)]
    )


def witt_mul_via_polys(x, y):
    x._check(y)
    upw = build_universal_polys(x.p, x.n)
    vals = [_lift(c) for c in x.coords] + [_lift(c) for c in y.coords]
    out = [upw.specialize(s, vals) for s in upw.prod_polys]
    return WittVector(
        x.p, x.n, [_reduce_like(c, t, x.p) for c, t in zip(out, x.coords)]
    )


def witt_neg_via_polys(x):
    upw = build_universal_polys(x.p, x.n)
    vals = [_lift(c) for c in x.coords]
    out = [upw.specialize(s, vals) for s in upw.neg_polys]
    return WittVector(
        x.p, x.n, [_reduce_like(c, t, x.p) for c, t in zip(out, x.coords)]
    )


def ghost(x):
    """Ghost components; only defined over torsion-free coordinate rings."""
    if x._is_char_p():
        raise TorsionRing("ghost components need a ring where p is regular")
    return tuple(_ghost_from_covers(list(x.coords), x.p))


def teichmuller(a, n):
    """[a] = (a, 0, ..., 0)."""
    if isinstance(a, PrimeFieldElem):
        p = a.p
        zero = PrimeFieldElem(p, 0)
    elif isinstance(a, LaurentElem):
        p = a.p
        zero = LaurentElem.zero(p, 1, a.num_vars, a.allowed_negative)
    else:
        raise TypeError("teichmuller needs a char-p coordinate")
    return WittVector(p, n, [a] + [zero] * (n - 1))


def verschiebung(x):
    return WittVector(x.p, x.n + 1, (x.zero_coord(),) + x.coords)


def restrict(x):
    if x.n < 1:
        raise LengthUnderflow("cannot restrict a length-0 vector")
    if x.n == 1:
        raise LengthUnderflow("restriction would produce length 0")
    return WittVector(x.p, x.n - 1, x.coords[:-1])


def _coord_pow_p(c, p):
    if isinstance(c, PrimeFieldElem):
        return c  # a^p = a in F_p
    if isinstance(c, LaurentElem):
        return c.frobenius()
    raise TorsionRing("char-p Frobenius formula needs char-p coordinates")


def frobenius(x):
    """F: W_n -> W_{n-1}; over char-p coordinate rings F = R o Phi."""
    if x.n == 1:
        raise LengthUnderflow("Frobenius would produce length 0")
    if x._is_char_p():
        return WittVector(
            x.p, x.n - 1, [_coord_pow_p(c, x.p) for c in x.coords[: x.n - 1]]
        )
    cx = [_lift(c) for c in x.coords]
    g = _ghost_from_covers(cx, x.p)
    cz = _ghost_inverse(g[1:], x.p)
    return WittVector(x.p, x.n - 1, cz)


def witt_phi(x):
    """Phi_A = W_n(sigma): coordinatewise absolute Frobenius."""
    return WittVector(x.p, x.n, [_coord_pow_p(c, x.p) for c in x.coords])


def witt_from_int(c, p, n, like=None):
    """Image of the integer c in W_n(F_p) (or the like-typed constant ring)."""
    cz = _ghost_inverse([c] * n, p)
    if like is None:
        template = PrimeFieldElem(p, 0)
    else:
        template = like
    return WittVector(p, n, [_reduce_like(v, template, p) for v in cz])


def witt_scalar_mul(c, x):
    """Multiplication by the scalar image of an integer c."""
    return witt_mul(witt_from_int(c, x.p, x.n, like=x.coords[0]), x)


def decompose(x):
    """Coordinates of x, so that x = sum_l V^l([x_{l+1}])."""
    return list(x.coords)


def witt_zero(p, n, like=None):
    return witt_from_int(0, p, n, like=like)


def witt_sum(vectors, p=None, n=None, like=None):
    it = list(vectors)
    if not it:
        return witt_zero(p, n, like=like)
    acc = it[0]
    for v in it[1:]:
        acc = witt_add(acc, v)
    return acc


# ----------------------------------------------------------------------
# the maps w-tilde and F-tilde
# ----------------------------------------------------------------------

class LiftedElem:
    """An element of (Z/p^level)[z...], the target of the w-tilde map."""

    __slots__ = ("p", "level", "value")

    def __init__(self, p, level, value):
        if value.p != p or value.n != level:
            raise Mismatch("value modulus disagrees with level")
        self.p = p
        self.level = level
        self.value = value

    def __eq__(self, other):
        return (
            isinstance(other, LiftedElem)
            and self.p == other.p
            and self.level == other.level
            and self.value == other.value
        )

    def __repr__(self):
        return "LiftedElem(p=%d, level=%d, %r)" % (self.p, self.level, self.value)


def _laurent_cover_to_mod(cover, p, level, template):
    return LaurentElem(p, level, template.num_vars, cover, template.allowed_negative)


def tilde_w(x):
    """w-tilde: W_L(A) -> (Z/p^L)[z...], (f_1..f_L) -> sum p^i f_i+1^(p^(L-1-i)).

    Defined on Laurent-coordinate vectors; the value does not depend on the
    choice of coordinate lifts.
    """
    if not isinstance(x.coords[0], LaurentElem):
        raise Mismatch("tilde_w needs Laurent coordinates")
    L = x.n
    acc = None
    for i, c in enumerate(x.coords):
        t = _cscale(x.p ** i, _cpow(_lift(c), x.p ** (L - 1 - i)))
        acc = t if acc is None else _cadd(acc, t)
    template = x.coords[0]
    return LiftedElem(x.p, L, _laurent_cover_to_mod(acc, x.p, L, template))


def tilde_w_inverse(y):
    """Invert w-tilde by layer peeling; raises NotInImage when impossible."""
    p, L = y.p, y.level
    template = LaurentElem.zero(p, 1, y.value.num_vars, y.value.allowed_negative)
    rem = {e: c % (p ** L) for e, c in y.value.terms.items() if c % (p ** L)}
    coords = []
    for i in range(L):
        k = p ** (L - 1 - i)
        pi = p ** i
        layer = {}
        for e, c in rem.items():
            q, r = divmod(c, pi)
            if r:
                raise NotInImage("stray low p-valuation at layer %d" % i)
            if q % p:
                layer[e] = q % p
        root = {}
        for e, c in layer.items():
            if any(v % k for v in e):
                raise NotInImage("layer %d is not a p^%d-th power" % (i, k))
            root[tuple(v // k for v in e)] = c
        coords.append(
            LaurentElem(p, 1, y.value.num_vars, root, y.value.allowed_negative)
        )
        sub = _cscale(pi, _cpow(root, k))
        rem = _cadd(rem, _cneg(sub))
        rem = {e: c % (p ** L) for e, c in rem.items() if c % (p ** L)}
    if rem:
        raise NotInImage("nonzero remainder after peeling")
    return WittVector(p, L, coords)


def tilde_F(x):
    """F-tilde^n: W_n(A) -> (Z/p^n)[z...], (x_1..x_n) -> sum p^i x_i+1^(p^(n-i))."""
    if not isinstance(x.coords[0], LaurentElem):
        raise Mismatch("tilde_F needs Laurent coordinates")
    n = x.n
    acc = None
    for i, c in enumerate(x.coords):
        t = _cscale(x.p ** i, _cpow(_lift(c), x.p ** (n - i)))
        acc = t if acc is None else _cadd(acc, t)
    template = x.coords[0]
    return LiftedElem(x.p, n, _laurent_cover_to_mod(acc, x.p, n, template))


# ----------------------------------------------------------------------
# Teichmuller powers of sums (the section-6 expansion machine)
# ----------------------------------------------------------------------

_EXPAND2_CACHE = {}


def teich_scalar(c, p, m):
    """Integer representative of the Teichmuller scalar [c] in W_m(F_p) = Z/p^m."""
    return pow(c % p, p ** (m - 1), p ** m)


def _expand2(p, i, n):
    """Universal expansion of [A+B]^i in W_n over F_p[A,B].

    Returns a dict (level l, (e1, e2)) -> coefficient mod p^(n-l) with
    e1 + e2 = p^l * i, produced by the recursive layer-peeling argument.
    Coefficients act as integer scalars through W_m(F_p) = Z/p^m.
    """
    key = (p, i, n)
    if key in _EXPAND2_CACHE:
        return _EXPAND2_CACHE[key]

    def expand_poly(q, m, degree):
        # q: LaurentElem (2 vars, F_p), homogeneous of the given degree
        out = {}
        if q.is_zero():
            return out
        head_vectors = []
        for (e1, e2), c in q.sorted_terms():
            assert e1 + e2 == degree, "inhomogeneous layer in Teichmuller peel"
            k = (0, (e1, e2))
            out[k] = (out.get(k, 0) + teich_scalar(c, p, m)) % (p ** m)
            mono = LaurentElem.monomial(p, 1, 2, (e1, e2), c)
            head_vectors.append(teichmuller(mono, m))
        head = witt_sum(head_vectors)
        tail = witt_sub(teichmuller(q, m), head)
        assert tail.coords[0].is_zero(), "head does not match the top layer"
        for idx in range(1, m):
            t = tail.coords[idx]
            if t.is_zero():
                continue
            sub = expand_poly(t, m - idx, degree * (p ** idx))
            for (l2, exps), c2 in sub.items():
                lev = idx + l2
                k = (lev, exps)
                out[k] = (out.get(k, 0) + c2) % (p ** (m - lev))
        return out

    a_plus_b = LaurentElem(p, 1, 2, {(1, 0): 1, (0, 1): 1})
    raw = expand_poly(a_plus_b ** i, n, i)
    out = {}
    for (l, exps), c in raw.items():
        c %= p ** (n - l)
        if c:
            out[(l, exps)] = c
    _EXPAND2_CACHE[key] = out
    return out


def teichmuller_sum_power(summands, i, n):
    """Expand [a_1 + ... + a_r]^i as a combination of V^l(prod [a_j]^(m_j)).

    Input summands are pairwise distinct LaurentElems over F_p.  The result is
    a dict (level l, exponent tuple m) -> integer coefficient mod p^(n-l),
    with sum(m) = p^l * i for every term.  More than two summands require
    p != 2.
    """
    if not summands:
        raise ValueError("need at least one summand")
    p = summands[0].p
    r = len(summands)
    for s in summands:
        if s.p != p or s.n != 1:
            raise Mismatch("summands must share an F_p coefficient ring")
    if len({tuple(s.sorted_terms()) for s in summands}) != r:
        raise DuplicateSummand("summands must be pairwise distinct")
    if r > 2 and p == 2:
        raise CharTwoUnsupported(
            "more than two summands need odd characteristic"
        )
    if i == 0:
        return {(0, (0,) * r): 1}
    if r == 1:
        return {(0, (i,)): 1}

    def expand_multi(count, power, depth):
        if power == 0:
            return {(0, (0,) * count): 1}
        if count == 1:
            return {(0, (power,)): 1}
        out = {}
        for (l, (e_head, e_last)), c in _expand2(p, power, depth).items():
            if e_head == 0:
                k = (l, (0,) * (count - 1) + (e_last,))
                out[k] = (out.get(k, 0) + c) % (p ** (depth - l))
                continue
            sub = expand_multi(count - 1, e_head, depth - l)
            for (l2, exps), c2 in sub.items():
                lev = l + l2
                exps_full = tuple(exps) + (e_last * (p ** l2),)
                k = (lev, exps_full)
                v = (out.get(k, 0) + c * c2) % (p ** (depth - lev))
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return out

    raw = expand_multi(r, i, n)
    out = {}
    for (l, exps), c in raw.items():
        c %= p ** (n - l)
        if c:
            assert sum(exps) == (p ** l) * i
            out[(l, exps)] = c
    return out


def evaluate_teich_expansion(expansion, summands, n):
    """Oracle evaluation of a teichmuller_sum_power result via Witt arithmetic."""
    p = summands[0].p
    acc = None
    for (l, exps), c in sorted(expansion.items()):
        prod = None
        for a, m in zip(summands, exps):
            if m == 0:
                continue
            t = teichmuller(a, n - l)
            f = t
            for _ in range(m - 1):
                f = witt_mul(f, t)
            prod = f if prod is None else witt_mul(prod, f)
        if prod is None:
            prod = witt_from_int(1, p, n - l, like=summands[0])
        prod = witt_scalar_mul(c, prod)
        for _ in range(l):
            prod = verschiebung(prod)
        acc = prod if acc is None else witt_add(acc, prod)
    return acc


def v_product_normalize(p, factors):
    """Collapse prod_i V^(s_i)([a]^(d_i)) to (power of p, s_max, exponent vector).

    Returns (t, s, dd) so that the product equals p^t * V^s([a]^dd), with
    s = max(s_i), t the sum of the remaining s_i and dd = sum p^(s-s_i) d_i.
    """
    if not factors:
        raise ValueError("need at least one factor")
    m = len(factors[0][1])
    for _, d in factors:
        if len(d) != m:
            raise Mismatch("exponent vectors of unequal length")
    ss = [s for s, _ in factors]
    s_max = max(ss)
    t = sum(ss) - s_max
    dd = [0] * m
    for s, d in factors:
        scale = p ** (s_max - s)
        for j in range(m):
            dd[j] += scale * d[j]
    return (t, s_max, tuple(dd))
