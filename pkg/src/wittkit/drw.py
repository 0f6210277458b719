"""The de Rham-Witt complex of affine space in the symbolic weight basis.

Degree-i elements at level n are combinations of basis symbols e_n(1, r, P)
where r is a weight (finitely many fractional exponents r_j = u_j p^{v_j})
with p^{n-1} r integral, and P = (I_0, ..., I_i) an admissible partition of
the support.  F, V and d act by exact case formulas; the ring structure is
out of scope.
"""

from __future__ import annotations



class Inadmissible(ValueError):
    pass


class SupportTooSmall(ValueError):
    pass


class Weight:
    """A weight function j -> r_j = u_j * p^(v_j) with p not dividing u_j.

    ``entries`` maps variable index (0-based) to the pair (u, v); absent
    indices carry r_j = 0.  The support order sorts by (v_j, j): ascending
    valuation, ties broken by variable index, which is stable under
    multiplication by powers of p.
    """

    __slots__ = ("p", "d", "entries")

    def __init__(self, p, d, entries):
        self.p = p
        self.d = d
        clean = {}
        for j, (u, v) in entries.items():
            if not (0 <= j < d):
                raise ValueError("variable index out of range")
            if u == 0:
                continue
            if u < 0 or u % p == 0:
                raise ValueError("numerator must be positive and prime to p")
            clean[j] = (u, v)
        self.entries = clean

    def key(self):
        return tuple(sorted((j, u, v) for j, (u, v) in self.entries.items()))

    def support(self):
        """Support in the canonical order (valuation, then index)."""
        return sorted(self.entries, key=lambda j: (self.entries[j][1], j))

    def is_zero(self):
        return not self.entries

    def scale_p(self, k):
        """The weight p^k * r."""
        return Weight(
            self.p, self.d, {j: (u, v + k) for j, (u, v) in self.entries.items()}
        )

    def min_valuation(self):
        return min(v for (_, v) in self.entries.values())

    def integral(self):
        return self.is_zero() or self.min_valuation() >= 0

    def admissible(self, n):
        """p^(n-1) r integral."""
        return self.is_zero() or self.min_valuation() >= -(n - 1)

    def restrict(self, subset):
        return Weight(
            self.p, self.d,
            {j: uv for j, uv in self.entries.items() if j in subset},
        )

    def __eq__(self, other):
        return (
            isinstance(other, Weight)
            and self.p == other.p
            and self.d == other.d
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.p, self.d, self.key()))

    def __repr__(self):
        return "Weight(p=%d, %r)" % (
            self.p,
            {j: "%d*p^%d" % (u, v) for j, (u, v) in sorted(self.entries.items())},
        )


def t_and_u(weight, subset=None):
    """t(I) = -min valuation over I (0 for the zero weight); u = max(0, t)."""
    w = weight if subset is None else weight.restrict(subset)
    if w.is_zero():
        return 0, 0
    t = -w.min_valuation()
    return t, max(0, t)


def enumerate_partitions(weight, i):
    """All partitions (I_0, ..., I_i) of supp(r) in P^(i)_r.

    These correspond to ordered compositions of |supp(r)| into i positive
    parts (I_0 empty) plus compositions into i+1 positive parts.
    """
    supp = weight.support()
    L = len(supp)
    if L < i:
        raise SupportTooSmall("support smaller than the target degree")
    out = []

    def compos(total, parts):
        if parts == 0:
            if total == 0:
                yield ()
            return
        for first in range(1, total - parts + 2):
            for rest in compos(total - first, parts - 1):
                yield (first,) + rest

    def cut(sizes, with_empty_head):
        blocks = []
        pos = 0
        if with_empty_head:
            blocks.append(())
        for s in sizes:
            blocks.append(tuple(supp[pos:pos + s]))
            pos += s
        return tuple(blocks)

    if i == 0:
        return [(tuple(supp),)]
    for sizes in compos(L, i):
        out.append(cut(sizes, True))
    for sizes in compos(L, i + 1):
        out.append(cut(sizes, False))
    return out


def partition_valid(weight, parts):
    """Check conditions i)-iv) for a candidate partition."""
    supp = weight.support()
    flat = [j for blk in parts for j in blk]
    if sorted(flat) != sorted(supp):
        return False
    if any(len(blk) == 0 for blk in parts[1:]):
        return False
    order = {j: k for k, j in enumerate(supp)}
    pos = [order[j] for j in flat]
    return pos == sorted(pos) and pos == list(range(len(supp)))


class DRWElement:
    """A W_n(k)-combination of basis symbols at one level and degree.

    A symbol whose weight needs u = u(r) Verschiebung layers is annihilated
    by p^(n-u): eta * V^u(x) = V^u(F^u(eta) x) and F^u kills p^(n-u) W_n(k).
    Coefficients are therefore stored modulo p^(n-u), which makes the stored
    expression the canonical one.
    """

    __slots__ = ("p", "n", "d", "degree", "terms")

    _u_cache = {}

    def __init__(self, p, n, d, degree, terms):
        self.p = p
        self.n = n
        self.d = d
        self.degree = degree
        clean = {}
        ucache = DRWElement._u_cache
        for (wkey, parts), c in terms.items():
            u = ucache.get(wkey)
            if u is None:
                u = max([0] + [-v for (_, _, v) in wkey])
                ucache[wkey] = u
            q = p ** (n - u) if n > u else 1
            c %= q
            if c:
                clean[(wkey, parts)] = c
        self.terms = clean

    @classmethod
    def basis(cls, p, n, d, weight, parts, coeff=1):
        if not weight.admissible(n):
            raise Inadmissible("p^(n-1) r is not integral")
        if not partition_valid(weight, parts):
            raise Inadmissible("invalid partition")
        # the degree equals the number of e^1 factors, i.e. len(parts) - 1
        return cls(p, n, d, len(parts) - 1, {(weight.key(), parts): coeff})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if (self.p, self.n, self.d, self.degree) != (
            other.p, other.n, other.d, other.degree,
        ):
            raise Inadmissible("cannot add across levels or degrees")
        q = self.p ** self.n
        terms = dict(self.terms)
        for k, c in other.terms.items():
            v = (terms.get(k, 0) + c) % q
            if v:
                terms[k] = v
            else:
                terms.pop(k, None)
        return DRWElement(self.p, self.n, self.d, self.degree, terms)

    def scalar_mul(self, c):
        return DRWElement(
            self.p, self.n, self.d, self.degree,
            {k: v * c for k, v in self.terms.items()},
        )

    def __sub__(self, other):
        return self + other.scalar_mul(-1)

    def __eq__(self, other):
        return (
            isinstance(other, DRWElement)
            and (self.p, self.n, self.d, self.degree) ==
            (other.p, other.n, other.d, other.degree)
            and self.terms == other.terms
        )

    def __repr__(self):
        return "DRWElement(n=%d, deg=%d, %d terms)" % (
            self.n, self.degree, len(self.terms)
        )


def _weight_from_key(p, d, key):
    return Weight(p, d, {j: (u, v) for (j, u, v) in key})


_ACT_CACHE = {}


def act_basis(which, p, n, d, wkey, parts):
    """Apply F, V or d to one basis symbol.

    Returns (scalar, new_n, new_degree, new_wkey, new_parts) or None for a
    genuinely zero image (d with empty I_0, or F into level 0).
    """
    key = (which, p, n, wkey, parts)
    if key in _ACT_CACHE:
        return _ACT_CACHE[key]
    i0_nonempty = bool(parts[0])
    min_v = min((v for (_, _, v) in wkey), default=0)
    integral = not wkey or min_v >= 0
    if which == "F":
        if n <= 1:
            out = None  # W_0 Omega = 0
        else:
            scalar = p if (i0_nonempty and not integral) else 1
            nw = tuple((j, u, v + 1) for (j, u, v) in wkey)
            if wkey and min_v + 1 < -(n - 2):
                raise Inadmissible("F image fails admissibility")
            out = (scalar, n - 1, len(parts) - 1, nw, parts)
    elif which == "V":
        # scalar p exactly when the Verschiebung is absorbed through VF = p:
        # with an empty I_0 the whole symbol is F of a deeper one, and for
        # p^-1 r integral the e^0 factor satisfies V(T^r) = V(F(T^(r/p))).
        # (This orientation is the one forced by FV = VF = p.)
        nw = tuple((j, u, v - 1) for (j, u, v) in wkey)
        new_integral = not wkey or min_v - 1 >= 0
        scalar = p if ((not i0_nonempty) or new_integral) else 1
        if wkey and min_v - 1 < -n:
            raise Inadmissible("V image fails admissibility")
        out = (scalar, n + 1, len(parts) - 1, nw, parts)
    elif which == "d":
        if not i0_nonempty:
            out = None
        else:
            scalar = p ** min_v if integral and wkey else 1
            out = (scalar, n, len(parts), wkey, ((),) + parts)
    else:
        raise ValueError("unknown operator %r" % (which,))
    _ACT_CACHE[key] = out
    return out


def act(which, elem):
    """Linear extension of the F/V/d case formulas.

    F is semilinear through the residue map Z/p^n -> Z/p^(n-1); V lifts
    coefficients along any integer representative; d is linear.
    """
    p, d = elem.p, elem.d
    out_terms = {}
    out_n = {"F": elem.n - 1, "V": elem.n + 1, "d": elem.n}[which]
    out_deg = elem.degree + (1 if which == "d" else 0)
    if which == "F" and out_n == 0:
        return DRWElement(p, 0, d, out_deg, {})
    for (wkey, parts), c in elem.terms.items():
        res = act_basis(which, p, elem.n, d, wkey, parts)
        if res is None:
            continue
        scalar, _nn, _deg, nw, np_ = res
        key = (nw, np_)
        out_terms[key] = out_terms.get(key, 0) + c * scalar
    return DRWElement(p, out_n, d, out_deg, out_terms)


def enumerate_basis(p, n, d, i, bound):
    """All (weight, partition) pairs at level n and degree i within the bound.

    Weights are parametrized by a = p^(n-1) r with componentwise numerators
    0 <= a_j <= bound; the pairs are returned as DRWElement basis keys.
    """
    if i > d:
        return []
    out = []
    seen = set()

    def vectors(j, acc):
        if j == d:
            yield tuple(acc)
            return
        for a in range(bound + 1):
            acc.append(a)
            yield from vectors(j + 1, acc)
            acc.pop()

    for avec in vectors(0, []):
        entries = {}
        for j, a in enumerate(avec):
            if a == 0:
                continue
            v = 0
            while a % p == 0:
                a //= p
                v += 1
            entries[j] = (a, v - (n - 1))
        w = Weight(p, d, entries)
        if len(w.support()) < i:
            continue
        for parts in enumerate_partitions(w, i):
            key = (w.key(), parts)
            if key in seen:
                raise Inadmissible("duplicate basis key generated")
            seen.add(key)
            out.append(key)
    return out


def basis_element(p, n, d, wkey, parts):
    return DRWElement.basis(p, n, d, _weight_from_key(p, d, wkey), parts)


def weight_to_json(p, d, wkey):
    w = _weight_from_key(p, d, wkey)
    full = []
    for j in range(d):
        if j in w.entries:
            full.append(list(w.entries[j]))
        else:
            full.append([0, 0])
    return full


def weight_from_json(p, d, data):
    entries = {}
    for j, (u, v) in enumerate(data):
        if u:
            entries[j] = (u, v)
    return Weight(p, d, entries)
