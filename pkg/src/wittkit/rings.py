"""Exact base-ring arithmetic: prime fields, Z/p^n residues, sparse Laurent algebras.

Everything here is immutable after construction and exact (no floats anywhere).
Coefficients live in F_p or Z/p^n; exponent vectors live in Z^m with negative
exponents allowed only for explicitly inverted variables.
"""

from __future__ import annotations

import json
from math import comb


class VariableMismatch(ValueError):
    pass


class NegativeExponentViolation(ValueError):
    pass


class ScaleExceeded(ValueError):
    pass


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeFieldElem:
    """An element of F_p, stored as a reduced residue."""

    __slots__ = ("p", "value")

    def __init__(self, p, value):
        if not is_prime(p):
            raise ValueError("modulus %r is not prime" % (p,))
        self.p = p
        self.value = value % p

    def _check(self, other):
        if not isinstance(other, PrimeFieldElem) or other.p != self.p:
            raise VariableMismatch("incompatible prime field elements")

    def __add__(self, other):
        self._check(other)
        return PrimeFieldElem(self.p, self.value + other.value)

    def __sub__(self, other):
        self._check(other)
        return PrimeFieldElem(self.p, self.value - other.value)

    def __neg__(self):
        return PrimeFieldElem(self.p, -self.value)

    def __mul__(self, other):
        if isinstance(other, int):
            return PrimeFieldElem(self.p, self.value * other)
        self._check(other)
        return PrimeFieldElem(self.p, self.value * other.value)

    __rmul__ = __mul__

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.p)
        return PrimeFieldElem(self.p, pow(self.value, -1, self.p))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        return PrimeFieldElem(self.p, pow(self.value, k, self.p))

    def __eq__(self, other):
        return (
            isinstance(other, PrimeFieldElem)
            and self.p == other.p
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.p, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return "PrimeFieldElem(%d, %d)" % (self.p, self.value)


class LaurentElem:
    """A sparse Laurent polynomial over Z/p^n.

    ``terms`` maps exponent tuples (length ``num_vars``) to nonzero residues in
    [1, p^n).  Indices in ``allowed_negative`` are the only variables permitted
    to carry negative exponents; products that would leave the allowed region
    raise ``NegativeExponentViolation``.
    """

    __slots__ = ("p", "n", "num_vars", "allowed_negative", "terms")

    def __init__(self, p, n, num_vars, terms, allowed_negative=()):
        if not is_prime(p):
            raise ValueError("modulus %r is not prime" % (p,))
        if n < 1:
            raise ValueError("need n >= 1")
        self.p = p
        self.n = n
        self.num_vars = num_vars
        self.allowed_negative = frozenset(allowed_negative)
        q = p ** n
        clean = {}
        for exps, c in terms.items():
            exps = tuple(exps)
            if len(exps) != num_vars:
                raise VariableMismatch("exponent tuple of wrong length")
            for i, e in enumerate(exps):
                if e < 0 and i not in self.allowed_negative:
                    raise NegativeExponentViolation(
                        "negative exponent at variable %d" % i
                    )
            c %= q
            if c:
                clean[exps] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, p, n, num_vars, allowed_negative=()):
        return cls(p, n, num_vars, {}, allowed_negative)

    @classmethod
    def one(cls, p, n, num_vars, allowed_negative=()):
        return cls(p, n, num_vars, {(0,) * num_vars: 1}, allowed_negative)

    @classmethod
    def monomial(cls, p, n, num_vars, exps, coeff=1, allowed_negative=()):
        return cls(p, n, num_vars, {tuple(exps): coeff}, allowed_negative)

    @classmethod
    def constant(cls, p, n, num_vars, c, allowed_negative=()):
        return cls(p, n, num_vars, {(0,) * num_vars: c}, allowed_negative)

    # -- ring structure -----------------------------------------------

    def _check(self, other):
        if (
            not isinstance(other, LaurentElem)
            or other.p != self.p
            or other.n != self.n
            or other.num_vars != self.num_vars
            or other.allowed_negative != self.allowed_negative
        ):
            raise VariableMismatch("incompatible Laurent elements")

    def __add__(self, other):
        self._check(other)
        q = self.p ** self.n
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = (terms.get(e, 0) + c) % q
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return LaurentElem(self.p, self.n, self.num_vars, terms, self.allowed_negative)

    def __neg__(self):
        return self.scalar_mul(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scalar_mul(other)
        self._check(other)
        q = self.p ** self.n
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = (terms.get(e, 0) + c1 * c2) % q
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return LaurentElem(self.p, self.n, self.num_vars, terms, self.allowed_negative)

    __rmul__ = __mul__

    def scalar_mul(self, c):
        q = self.p ** self.n
        c %= q
        terms = {}
        for e, c0 in self.terms.items():
            v = (c0 * c) % q
            if v:
                terms[e] = v
        return LaurentElem(self.p, self.n, self.num_vars, terms, self.allowed_negative)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers of general elements unsupported")
        out = LaurentElem.one(self.p, self.n, self.num_vars, self.allowed_negative)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def frobenius(self):
        """Coefficientwise-trivial Frobenius x -> x^p (exact for n = 1)."""
        if self.n != 1:
            return self ** self.p
        terms = {}
        for e, c in self.terms.items():
            terms[tuple(v * self.p for v in e)] = c
        return LaurentElem(self.p, 1, self.num_vars, terms, self.allowed_negative)

    # -- predicates and views ------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def sorted_terms(self):
        return sorted(self.terms.items())

    def total_degrees(self):
        return {sum(e) for e in self.terms}

    def __eq__(self, other):
        return (
            isinstance(other, LaurentElem)
            and self.p == other.p
            and self.n == other.n
            and self.num_vars == other.num_vars
            and self.allowed_negative == other.allowed_negative
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(
            (self.p, self.n, self.num_vars, self.allowed_negative,
             tuple(self.sorted_terms()))
        )

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                "z%d^%d" % (i, v) for i, v in enumerate(e) if v
            )
            bits.append("%d%s" % (c, "*" + mon if mon else ""))
        return " + ".join(bits)

    # -- JSON wire format ----------------------------------------------

    def to_json(self):
        return {
            "p": self.p,
            "n": self.n,
            "vars": self.num_vars,
            "neg": sorted(self.allowed_negative),
            "terms": [{"e": list(e), "c": c} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj):
        terms = {tuple(t["e"]): t["c"] for t in obj["terms"]}
        return cls(obj["p"], obj["n"], obj["vars"], terms, obj.get("neg", ()))

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def laurent_arith(a, b, op):
    """Functional front end over the arithmetic dunders ('add'/'mul'/'scalar')."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scalar":
        return a.scalar_mul(b)
    raise ValueError("unknown op %r" % (op,))


class GradedSlice:
    """All exponent vectors of a fixed total degree inside a finite box."""

    __slots__ = ("degree", "box", "basis")

    def __init__(self, degree, box, basis):
        self.degree = degree
        self.box = tuple(tuple(b) for b in box)
        self.basis = list(basis)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)


def graded_basis(d, m, box):
    """Exponent vectors in Z^d with total degree m, inside per-variable bounds.

    ``box`` is a sequence of (lo, hi) pairs, one per variable; the result is
    lexicographically sorted.
    """
    box = [tuple(b) for b in box]
    if len(box) != d:
        raise VariableMismatch("box must give one bound pair per variable")
    out = []

    def rec(i, rest, prefix):
        if i == d:
            if rest == 0:
                out.append(tuple(prefix))
            return
        lo, hi = box[i]
        tail_lo = sum(box[j][0] for j in range(i + 1, d))
        tail_hi = sum(box[j][1] for j in range(i + 1, d))
        for e in range(lo, hi + 1):
            if tail_lo <= rest - e <= tail_hi:
                rec(i + 1, rest - e, prefix + [e])

    rec(0, m, [])
    out.sort()
    return GradedSlice(m, box, out)


def stars_and_bars(d, m):
    """Number of e in N^d with sum m (0 when m < 0)."""
    if m < 0:
        return 0
    return comb(m + d - 1, d - 1)
