"""Generalized Steinberg modules for small GL_(d+1)(F_q).

The parabolic-induction complex

    0 -> Z -> (+)_(|J|=d-1) Ind_(P_J)^G 1 -> ... -> Ind_(P_I)^G 1 -> v -> 0

is built on explicit coset spaces (cosets are enumerated as flags), with the
simplicial Koszul sign on the subsets S = Delta \\ J of removed simple roots;
exactness is certified by Smith normal form over Z and by elementary-divisor
layer counts over Z/p^n.
"""

from __future__ import annotations

from itertools import combinations, product

from .rings import ScaleExceeded


# ----------------------------------------------------------------------
# Smith normal form
# ----------------------------------------------------------------------

def smith_normal_form(mat):
    """Elementary divisors of an integer matrix (no transforms kept)."""
    m = [list(r) for r in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    divisors = []
    top = 0
    while top < min(rows, cols):
        # find a nonzero pivot of minimal absolute value
        piv = None
        best = None
        for i in range(top, rows):
            for jj in range(top, cols):
                v = m[i][jj]
                if v and (best is None or abs(v) < best):
                    best = abs(v)
                    piv = (i, jj)
        if piv is None:
            break
        i0, j0 = piv
        m[top], m[i0] = m[i0], m[top]
        for r in m:
            r[top], r[j0] = r[j0], r[top]
        again = True
        while again:
            again = False
            for i in range(top + 1, rows):
                if m[i][top]:
                    q = m[i][top] // m[top][top]
                    if q:
                        for jj in range(top, cols):
                            m[i][jj] -= q * m[top][jj]
                    if m[i][top]:
                        m[top], m[i] = m[i], m[top]
                        again = True
            for jj in range(top + 1, cols):
                if m[top][jj]:
                    q = m[top][jj] // m[top][top]
                    if q:
                        for i in range(top, rows):
                            m[i][jj] -= q * m[i][top]
                    if m[top][jj]:
                        for i in range(rows):
                            m[i][top], m[i][jj] = m[i][jj], m[i][top]
                        again = True
        # clear any residue divisibility failure
        pivval = m[top][top]
        bad = None
        for i in range(top + 1, rows):
            for jj in range(top + 1, cols):
                if m[i][jj] % pivval:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            for jj in range(top, cols):
                m[top][jj] += m[bad][jj]
            continue
        divisors.append(abs(pivval))
        top += 1
    return divisors


def integer_rank(mat):
    return len([d for d in smith_normal_form(mat) if d])


# ----------------------------------------------------------------------
# the finite groups and their parabolic coset spaces
# ----------------------------------------------------------------------

def _matmul(a, b, q):
    size = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(size)) % q
              for j in range(size))
        for i in range(size)
    )


def _det(mat, q):
    size = len(mat)
    m = [list(r) for r in mat]
    det = 1
    for c in range(size):
        piv = None
        for r in range(c, size):
            if m[r][c] % q:
                piv = r
                break
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = (det * m[c][c]) % q
        inv = pow(m[c][c], -1, q)
        for r in range(c + 1, size):
            f = (m[r][c] * inv) % q
            if f:
                m[r] = [(x - f * y) % q for x, y in zip(m[r], m[c])]
    return det % q


class FiniteGL:
    """GL_size(F_q) by exhaustive enumeration (desk scale only)."""

    def __init__(self, q, size):
        if q ** (size * size) > 3 ** 9 + 1:
            if (size, q) not in ((2, 2), (2, 3), (3, 2)):
                raise ScaleExceeded("group too large to enumerate")
        self.q = q
        self.size = size
        self.elements = [
            mat for mat in product(
                *(product(range(q), repeat=size) for _ in range(size))
            )
            if _det(mat, q)
        ]

    def order(self):
        return len(self.elements)

    def expected_order(self):
        n, q = self.size, self.q
        out = 1
        for i in range(n):
            out *= q ** n - q ** i
        return out


def gaussian_flag_count(q, size, dims):
    """Number of flags with the given subspace dimensions in F_q^size."""
    def gauss_binom(n, k):
        num = den = 1
        for i in range(k):
            num *= q ** (n - i) - 1
            den *= q ** (k - i) - 1
        return num // den

    count = 1
    prev = 0
    for dim in dims:
        count *= gauss_binom(size - prev, dim - prev)
        prev = dim
    return count


def _rref_key(vectors, q):
    """Canonical key for the span of row vectors over F_q."""
    m = [list(v) for v in vectors]
    rows = len(m)
    cols = len(m[0])
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if m[i][c] % q:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, q)
        m[r] = [(x * inv) % q for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] % q:
                f = m[i][c]
                m[i] = [(x - f * y) % q for x, y in zip(m[i], m[r])]
        r += 1
    return tuple(tuple(row) for row in m[:r])


def flag_of(g, dims, q):
    """The flag (span of the first dim columns of g) for each dim."""
    size = len(g)
    cols = [tuple(g[i][jj] for i in range(size)) for jj in range(size)]
    return tuple(_rref_key(cols[:dim], q) for dim in dims)


class ParabolicCosets:
    """Cosets G/P_J enumerated as flags of the dimension profile of J.

    ``removed`` is the set S = Delta \\ J of removed simple roots alpha_i
    (0-based); the flag dimensions are {i+1 : alpha_i in S}.
    """

    def __init__(self, group, removed):
        self.group = group
        self.removed = frozenset(removed)
        self.dims = tuple(sorted(i + 1 for i in self.removed))
        seen = {}
        for g in group.elements:
            fl = flag_of(g, self.dims, group.q)
            seen.setdefault(fl, 0)
            seen[fl] += 1
        sizes = set(seen.values())
        if len(sizes) > 1:
            raise ArithmeticError("cosets of unequal size")
        self.flags = sorted(seen)
        self.index = {fl: k for k, fl in enumerate(self.flags)}

    def __len__(self):
        return len(self.flags)

    def coarsen(self, flag, keep_dims):
        """Drop subspaces to land in a coarser flag space."""
        pos = {dim: k for k, dim in enumerate(self.dims)}
        return tuple(flag[pos[dim]] for dim in keep_dims)


# ----------------------------------------------------------------------
# the induction complex
# ----------------------------------------------------------------------

class InductionComplex:
    """The augmented parabolic-induction complex for a subset I of Delta.

    Terms are indexed by the size of S = Delta \\ J, from the augmentation Z
    at S-size 0 through S = Delta \\ I; differentials pull functions back
    along coset projections with the simplicial sign.
    """

    def __init__(self, q, d, removed_target, ring="Z", n=1, p=None):
        if (d + 1, q) not in ((2, 2), (2, 3), (3, 2)):
            raise ScaleExceeded("desk scale: GL_2(F_2), GL_2(F_3), GL_3(F_2)")
        self.q = q
        self.d = d
        self.ring = ring
        self.n = n
        self.p = p if p is not None else q
        self.target = tuple(sorted(removed_target))  # S(I) = Delta \ I
        self.group = FiniteGL(q, d + 1)
        self.levels = []  # list of dicts S -> ParabolicCosets
        for size in range(1, len(self.target) + 1):
            level = {}
            for S in combinations(self.target, size):
                level[S] = ParabolicCosets(self.group, S)
            self.levels.append(level)
        self.matrices = self._build_matrices()

    def _offsets(self, level):
        offs = {}
        total = 0
        for S in sorted(level):
            offs[S] = total
            total += len(level[S])
        return offs, total

    def _build_matrices(self):
        mats = []
        # augmentation: Z -> level 0 terms (constant functions)
        offs0, total0 = self._offsets(self.levels[0])
        aug = [[1] for _ in range(total0)]
        mats.append(aug)
        for k in range(len(self.levels) - 1):
            src_level = self.levels[k]
            tgt_level = self.levels[k + 1]
            offs_s, tot_s = self._offsets(src_level)
            offs_t, tot_t = self._offsets(tgt_level)
            mat = [[0] * tot_s for _ in range(tot_t)]
            for S_t, cos_t in tgt_level.items():
                for pos, beta in enumerate(sorted(S_t)):
                    S_s = tuple(x for x in S_t if x != beta)
                    if S_s not in src_level:
                        continue
                    cos_s = src_level[S_s]
                    sign = (-1) ** pos
                    keep = tuple(sorted(i + 1 for i in S_s))
                    for fl in cos_t.flags:
                        row = offs_t[S_t] + cos_t.index[fl]
                        coarse = cos_t.coarsen(fl, keep)
                        col = offs_s[S_s] + cos_s.index[coarse]
                        mat[row][col] += sign
            mats.append(mat)
        return mats

    def d_squared_is_zero(self):
        for a, b in zip(self.matrices, self.matrices[1:]):
            for col in range(len(a[0])):
                for row in range(len(b)):
                    v = sum(b[row][k] * a[k][col] for k in range(len(a)))
                    if v:
                        return False
        return True

    def term_ranks(self):
        out = [1]
        for level in self.levels:
            out.append(sum(len(c) for c in level.values()))
        return out


def _zpn_divisor_profile(mat, p, n):
    """Elementary divisor exponents of a matrix over Z/p^n (capped at n)."""
    divisors = smith_normal_form(mat)
    out = []
    for dv in divisors:
        e = 0
        while dv % p == 0:
            dv //= p
            e += 1
        out.append(min(e, n))
    return out


def homology_lengths(cx):
    """Length of the homology at each interior node of the complex.

    Over Z the length is the free rank plus the number of nontrivial torsion
    divisors; over Z/p^n it is the module length, computed from elementary
    divisor profiles (ker/im comparisons reduce to length counting once the
    composite is zero, which d_squared_is_zero certifies).
    """
    if not cx.d_squared_is_zero():
        raise ArithmeticError("d o d != 0")
    mats = cx.matrices
    dims = cx.term_ranks()
    out = []
    for node in range(1, len(dims) - 1):
        a = mats[node - 1]  # incoming
        b = mats[node]      # outgoing
        dim = dims[node]
        if cx.ring == "Z":
            da = smith_normal_form(a)
            db = smith_normal_form(b)
            rank_a = len([x for x in da if x])
            rank_b = len([x for x in db if x])
            free_defect = dim - rank_a - rank_b
            # ker(b) is saturated, so the torsion of ker(b)/im(a) equals the
            # torsion of Z^dim/im(a): the divisors of a beyond 1
            torsion = len([x for x in da if x not in (0, 1)])
            out.append((free_defect, torsion, da, db))
        else:
            n, p = cx.n, cx.p
            prof_a = _zpn_divisor_profile(a, p, n)
            prof_b = _zpn_divisor_profile(b, p, n)
            len_im_a = sum(n - e for e in prof_a)
            len_ker_b = sum(e for e in prof_b) + (dim - len(prof_b)) * n
            out.append((len_ker_b - len_im_a, 0, prof_a, prof_b))
    return out


def acyclicity_check(q, d, removed_target, ring="Z", n=1, p=None):
    """Homology vanishing at every interior node, plus cokernel data."""
    cx = InductionComplex(q, d, removed_target, ring=ring, n=n, p=p)
    hom = homology_lengths(cx)
    exact = all(h[0] == 0 and h[1] == 0 for h in hom)
    last = cx.matrices[-1]
    divisors = smith_normal_form(last)
    rank_last_src = len(last[0]) if last else 0
    coker_rank = len(last) - len([x for x in divisors if x])
    torsion_free = all(x in (0, 1) for x in divisors)
    return {
        "q": q,
        "d": d,
        "ring": ring if ring == "Z" else "Z/p^%d" % n,
        "terms": cx.term_ranks(),
        "homology": [(h[0], h[1]) for h in hom],
        "exact": exact,
        "cokernel_rank": coker_rank,
        "cokernel_torsion_free": torsion_free,
        "d_squared_zero": True,
    }


def steinberg_rank(q, d, removed_target=None):
    """Rank and freeness of the generalized Steinberg cokernel.

    The rank equals the alternating sum of the coset counts, forced by the
    acyclic complex; freeness comes out of the Smith normal form of the last
    differential.
    """
    if removed_target is None:
        removed_target = tuple(range(d))  # I = empty set
    rep = acyclicity_check(q, d, removed_target, ring="Z")
    terms = rep["terms"]
    alt = 0
    for k, t in enumerate(terms):
        alt += ((-1) ** (len(terms) - 1 - k)) * t
    return {
        "rank": rep["cokernel_rank"],
        "alternating_sum": alt,
        "free": rep["cokernel_torsion_free"],
        "exact": rep["exact"],
        "terms": terms,
    }
