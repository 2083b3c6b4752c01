"""Tw Gerst and Tw BV through free Gerstenhaber algebras.

Tw Gerst(n) is the part of the free Gerstenhaber algebra on x_1..x_n (degree
0) and alpha (degree -2) that is linear in every x_i; Tw BV(n) is the same
for the free BV algebra, i.e. the free Gerstenhaber algebra on x_i, Dx_i,
alpha, D alpha in which each i occurs once, as x_i or as Dx_i.

A free Gerstenhaber algebra is Sym(s^-1 L) with L the free Lie superalgebra on
the suspended generators, realised inside the tensor algebra T.  Letters and
their degrees in T:
    x_j  1 (odd),  Dx_j  2 (even),  a = s alpha  -1 (odd),  b = s D alpha  0 (even).
A factor (an element of s^-1 L) is
    ('c', y, w): the left-normed bracket [..[y, w_1], .., w_m] with y the letter
                 of the least label occurring; these form a basis of the part
                 linear in that label, and the coefficient of [y, w] in a Lie
                 element is the coefficient of the monomial y w;
    ('p', w):    a left-normed bracket of letters a, b chosen into a basis of the
                 pure part by elimination (for Gerst: a and [a, a]).
A word (basis element) is a sorted tuple of factors, with the Koszul sign of
the desuspended degrees; an odd factor cannot repeat.

Operations on factors:
    bracket  lambda(u, v) = (-1)^{|u|} s^-1 [su, sv],
    BV       D(s^-1 l) = s^-1 delta(l), delta the odd derivation a -> b, x_j -> Dx_j,
    twisted differential d(s^-1 l) = s^-1 Dtw(l), Dtw the odd derivation with
             a -> a a (so d alpha = 1/2 lambda(alpha, alpha)) and Dx_j -> [b, x_j]
             (so d(Dx) = -lambda(D alpha, x)), zero on x_j and b.
They extend to words as derivations (Leibniz), with lambda(u, -) of degree
|u| + 1 and the BV operator of second order.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from math import factorial

from .base import Complex, normalize

A_ = ("a", 0)
B_ = ("b", 0)
TDEG = {"x": 1, "X": 2, "a": -1, "b": 0}


def x_(j):
    return ("x", j)


def X_(j):
    return ("X", j)


# tensor algebra ---------------------------------------------------------------


def t_parity(word) -> int:
    return sum(1 for l in word if l[0] in "xa") % 2


def t_add(out: dict, w, c):
    v = out.get(w, 0) + c
    if v:
        out[w] = v
    else:
        out.pop(w, None)


def t_bracket(u: dict, v: dict) -> dict:
    if not u or not v:
        return {}
    pu = t_parity(next(iter(u)))
    pv = t_parity(next(iter(v)))
    s = -1 if pu * pv % 2 else 1
    out: dict = {}
    for w1, c1 in u.items():
        for w2, c2 in v.items():
            t_add(out, w1 + w2, c1 * c2)
            t_add(out, w2 + w1, -s * c1 * c2)
    return out


def t_derive(u: dict, rule) -> dict:
    """Odd derivation of T given on letters by rule(letter) -> T element."""
    out: dict = {}
    for w, c in u.items():
        pre = 0
        for i, l in enumerate(w):
            img = rule(l)
            if img:
                s = -c if pre else c
                for m, e in img.items():
                    t_add(out, w[:i] + m + w[i + 1 :], s * e)
            if l[0] in "xa":
                pre ^= 1
        # nothing else
    return out


def left_normed(letters) -> dict:
    cur = {(letters[0],): Fraction(1)}
    for l in letters[1:]:
        cur = t_bracket(cur, {(l,): Fraction(1)})
    return cur


def multiset_permutations(items) -> list:
    return sorted(set(permutations(items)))


# the model --------------------------------------------------------------------


class FreeGerstModel:
    """Free Gerstenhaber (bv=False) or BV (bv=True) algebra in the letters above."""

    def __init__(self, bv: bool = False):
        self.bv = bv
        self._expand: dict = {}
        self._pure: dict = {}
        self._dfac: dict = {}
        self._d0fac: dict = {}
        self._deltafac: dict = {}

    # factors ------------------------------------------------------------------
    @staticmethod
    def letters(f) -> tuple:
        return (f[1],) + f[2] if f[0] == "c" else f[1]

    def fdeg(self, f) -> int:
        return sum(TDEG[l[0]] for l in self.letters(f)) - 1

    def fpar(self, f) -> int:
        return self.fdeg(f) % 2

    def expand(self, f) -> dict:
        e = self._expand.get(f)
        if e is None:
            e = self._expand[f] = left_normed(self.letters(f))
        return e

    def pure_basis(self, na: int, nb: int):
        """(basis words, elimination rows) for the pure part with na letters a and nb letters b."""
        key = (na, nb)
        if key in self._pure:
            return self._pure[key]
        basis, rows = [], []
        if na + nb >= 1 and (self.bv or nb == 0):
            for w in multiset_permutations([A_] * na + [B_] * nb):
                v = dict(left_normed(w))
                combo = {w: Fraction(1)}
                for p, rv, rc in rows:
                    if p in v:
                        c = v[p] / rv[p]
                        for m, e in rv.items():
                            t_add(v, m, -c * e)
                        for m, e in rc.items():
                            t_add(combo, m, -c * e)
                if v:
                    basis.append(w)
                    rows.append((min(v), v, combo))
        self._pure[key] = (basis, rows)
        return basis, rows

    def to_factors(self, l: dict) -> dict:
        """Express a Lie element of T (linear in its least label, if any) in factors."""
        if not l:
            return {}
        labels = [x[1] for w in l for x in w if x[0] in "xX"]
        out: dict = {}
        if labels:
            j = min(labels)
            for w, c in l.items():
                if w[0] in (x_(j), X_(j)):
                    t_add(out, ("c", w[0], w[1:]), c)
            return out
        w0 = next(iter(l))
        na = sum(1 for x in w0 if x == A_)
        basis, rows = self.pure_basis(na, len(w0) - na)
        v = dict(l)
        for p, rv, rc in rows:
            if p in v:
                c = v[p] / rv[p]
                for m, e in rv.items():
                    t_add(v, m, -c * e)
                for m, e in rc.items():
                    t_add(out, m, c * e)
        if v:
            raise ValueError("not a Lie element")
        return {("p", w): c for w, c in out.items() if c}

    # words ----------------------------------------------------------------------
    def sort_word(self, factors):
        """(sorted tuple, Koszul sign) or (None, 0) if an odd factor repeats."""
        fs = list(factors)
        sign = 1
        for i in range(1, len(fs)):
            j = i
            while j > 0 and fs[j - 1] > fs[j]:
                if self.fpar(fs[j - 1]) and self.fpar(fs[j]):
                    sign = -sign
                fs[j - 1], fs[j] = fs[j], fs[j - 1]
                j -= 1
        for a, b in zip(fs, fs[1:]):
            if a == b and self.fpar(a):
                return None, 0
        return tuple(fs), sign

    def wdeg(self, w) -> int:
        return sum(self.fdeg(f) for f in w)

    def black(self, w) -> int:
        return sum(1 for f in w for l in self.letters(f) if l[0] in "ab")

    def replace(self, w, i: int, lc: dict, coeff=1) -> dict:
        """Replace factor i of word w by the linear combination lc of words (in place)."""
        out: dict = {}
        for g, c in lc.items():
            h, s = self.sort_word(w[:i] + g + w[i + 1 :])
            if h is not None:
                t_add(out, h, coeff * c * s)
        return out

    def _derivation(self, w, fac_rule) -> dict:
        """Odd derivation of the word algebra given on factors by fac_rule(f) -> LinComb of factors."""
        out: dict = {}
        pre = 0
        for i, f in enumerate(w):
            img = fac_rule(f)
            if img:
                for h, c in self.replace(w, i, {(g,): e for g, e in img.items()}, -1 if pre else 1).items():
                    t_add(out, h, c)
            pre ^= self.fpar(f)
        return out

    # twisted differential, route A ------------------------------------------------
    @staticmethod
    def _tw_rule(l):
        if l == A_:
            return {(A_, A_): Fraction(1)}
        if l[0] == "X":
            return {(B_, x_(l[1])): Fraction(1), (x_(l[1]), B_): Fraction(-1)}
        return None

    def dfactor(self, f) -> dict:
        r = self._dfac.get(f)
        if r is None:
            r = self._dfac[f] = self.to_factors(t_derive(self.expand(f), self._tw_rule))
        return r

    def d(self, w) -> dict:
        return self._derivation(w, self.dfactor)

    # structure operations on linear combinations of words --------------------------
    def mu(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for u, a in x.items():
            for v, b in y.items():
                h, s = self.sort_word(u + v)
                if h is not None:
                    t_add(out, h, a * b * s)
        return out

    def lam_factor(self, f, g) -> dict:
        s = -1 if self.fpar(f) else 1
        fl = self.to_factors(t_bracket(self.expand(f), self.expand(g)))
        return {(h,): s * c for h, c in fl.items()}

    def _wpar(self, w) -> int:
        return sum(self.fpar(f) for f in w) % 2

    def _lam_word_factor(self, u, g) -> dict:
        """lambda(u, g) for a word u and a single factor g."""
        if len(u) == 1:
            return self.lam_factor(u[0], g)
        s = -1 if self._wpar(u) * self.fpar(g) % 2 else 1
        return {h: s * c for h, c in self._lam_words((g,), u).items()}

    def _lam_words(self, u, v) -> dict:
        """lambda(u, -) is a derivation of degree |u| + 1 of the word algebra."""
        out: dict = {}
        pre = 0
        shift = (self._wpar(u) + 1) % 2
        for j, g in enumerate(v):
            img = self._lam_word_factor(u, g)
            if img:
                for h, c in self.replace(v, j, img, -1 if pre * shift else 1).items():
                    t_add(out, h, c)
            pre ^= self.fpar(g)
        return out

    def lam(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for u, a in x.items():
            for v, b in y.items():
                for h, c in self._lam_words(u, v).items():
                    t_add(out, h, a * b * c)
        return out

    @staticmethod
    def _delta_rule(l):
        if l == A_:
            return {(B_,): Fraction(1)}
        if l[0] == "x":
            return {(X_(l[1]),): Fraction(1)}
        return None

    def delta_factor(self, f) -> dict:
        r = self._deltafac.get(f)
        if r is None:
            r = self._deltafac[f] = self.to_factors(t_derive(self.expand(f), self._delta_rule))
        return r

    def delta_word(self, w) -> dict:
        """D(u M) = D(u) M + (-1)^{|u|} u D(M) + lambda(u, M)."""
        if not w:
            return {}
        if len(w) == 1:
            return {(g,): c for g, c in self.delta_factor(w[0]).items()}
        u, M = w[:1], w[1:]
        out = self.mu({(g,): c for g, c in self.delta_factor(u[0]).items()}, {M: Fraction(1)})
        s = -1 if self.fpar(u[0]) else 1
        for h, c in self.mu({u: Fraction(1)}, self.delta_word(M)).items():
            t_add(out, h, s * c)
        for h, c in self._lam_words(u, M).items():
            t_add(out, h, c)
        return out

    def delta(self, x: dict) -> dict:
        out: dict = {}
        for w, a in x.items():
            for h, c in self.delta_word(w).items():
                t_add(out, h, a * c)
        return out

    # named elements --------------------------------------------------------------
    def gen_x(self, j: int) -> dict:
        return {(("c", x_(j), ()),): Fraction(1)}

    def alpha(self) -> dict:
        return {(("p", (A_,)),): Fraction(1)}

    # twisted differential, route B (the definition) --------------------------------
    @staticmethod
    def _d0_rule(l):
        if l == A_:
            return {(A_, A_): Fraction(-1)}
        if l == B_:
            return {(B_, A_): Fraction(1), (A_, B_): Fraction(-1)}
        return None

    def d0factor(self, f) -> dict:
        r = self._d0fac.get(f)
        if r is None:
            r = self._d0fac[f] = self.to_factors(t_derive(self.expand(f), self._d0_rule))
        return r

    @staticmethod
    def _insert_rule(l):
        if l[0] == "x":
            return {(A_, l): Fraction(1), (l, A_): Fraction(1)}
        if l[0] == "X":
            x = x_(l[1])
            return {(A_, l): Fraction(1), (l, A_): Fraction(-1), (B_, x): Fraction(-1), (x, B_): Fraction(1)}
        return None

    def _insert_factor(self, f) -> dict:
        return self.to_factors(t_derive(self.expand(f), self._insert_rule))

    def insert_twisting(self, w) -> dict:
        """sum_i w o_i lambda(alpha, -): inserting the odd operation at the inputs.

        On a word this is (-1)^{|w|} times the left derivation sending x_i to
        lambda(alpha, x_i) and Dx_i to the value of D(lambda(alpha, x_i)) read
        through the same sign rule.
        """
        s = -1 if self.wdeg(w) % 2 else 1
        return {h: s * c for h, c in self._derivation(w, self._insert_factor).items()}

    def ad_alpha(self, w) -> dict:
        """lambda(alpha, w) - (-1)^{|w|} sum_i w o_i lambda(alpha, -)."""
        out = self.lam(self.alpha(), {w: Fraction(1)})
        s = 1 if self.wdeg(w) % 2 else -1
        for h, c in self.insert_twisting(w).items():
            t_add(out, h, s * c)
        return out

    def d_by_definition(self, w) -> dict:
        """d0(w) + ad(w): d0 the internal differential of the operad with alpha adjoined
        (d0 alpha = -1/2 lambda(alpha, alpha), anticommuting with D), ad the bracket with
        the twisting element lambda(alpha, -)."""
        out = self._derivation(w, self.d0factor)
        for h, c in self.ad_alpha(w).items():
            t_add(out, h, c)
        return out

    # enumeration ------------------------------------------------------------------
    def pure_factors(self, kmax: int) -> list:
        out = []
        for tot in range(1, kmax + 1):
            for na in range(tot + 1):
                for w in self.pure_basis(na, tot - na)[0]:
                    out.append(("p", w))
        return sorted(out)

    def pure_words(self, k: int) -> list:
        """Sorted tuples of pure factors with k black letters in total."""
        facs = self.pure_factors(k)
        out = []

        def rec(start, left, acc):
            if left == 0:
                out.append(tuple(acc))
                return
            for j in range(start, len(facs)):
                f = facs[j]
                size = len(f[1])
                if size > left:
                    continue
                nxt = j + 1 if self.fpar(f) else j
                rec(nxt, left - size, acc + [f])

        rec(0, k, [])
        return out

    def comb_factors(self, J: tuple, na: int, nb: int) -> list:
        j0, rest = J[0], J[1:]
        heads = [x_(j0), X_(j0)] if self.bv else [x_(j0)]
        out = []
        for deco in product(*([(x_(j), X_(j)) if self.bv else (x_(j),) for j in rest])):
            for w in multiset_permutations(list(deco) + [A_] * na + [B_] * nb):
                for y in heads:
                    out.append(("c", y, w))
        return out

    def words(self, n: int, k: int) -> list:
        """All basis words of arity n with k black letters."""
        out = []
        for blocks in set_partitions(list(range(1, n + 1))):
            for split in compositions(k, len(blocks) + 1):
                choices = []
                for J, kj in zip(blocks, split):
                    opts = []
                    for nb in range(kj + 1) if self.bv else [0]:
                        opts += self.comb_factors(tuple(J), kj - nb, nb)
                    choices.append(opts)
                pure = self.pure_words(split[-1])
                for combo in product(*choices):
                    for p in pure:
                        h, _ = self.sort_word(tuple(combo) + p)
                        if h is not None:
                            out.append(h)
        return out

    def show_factor(self, f) -> str:
        names = []
        for l in self.letters(f):
            names.append({"a": "a", "b": "Da", "x": f"x{l[1]}", "X": f"Dx{l[1]}"}[l[0]])
        return names[0] if len(names) == 1 else "[" + ",".join(names) + "]"

    def show(self, w) -> str:
        return "*".join(self.show_factor(f) for f in w) if w else "1"


def set_partitions(items: list) -> list:
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for p in set_partitions(rest):
        out.append([[first]] + p)
        for i in range(len(p)):
            out.append(p[:i] + [[first] + p[i]] + p[i + 1 :])
    return [sorted(sorted(b) for b in p) for p in out]


def compositions(k: int, parts: int) -> list:
    if parts == 1:
        return [(k,)]
    return [(i,) + rest for i in range(k + 1) for rest in compositions(k - i, parts - 1)]


# the complexes -------------------------------------------------------------------


class _ModelComplex(Complex):
    bv = False

    def __init__(self):
        super().__init__()
        self.model = FreeGerstModel(self.bv)
        self._words: dict = {}

    def arity(self, g) -> int:
        return sum(1 for f in g for l in self.model.letters(f) if l[0] in "xX")

    def black(self, g) -> int:
        return self.model.black(g)

    def degree(self, g) -> int:
        return self.model.wdeg(g)

    def show(self, g) -> str:
        return self.model.show(g)

    def differential(self, g) -> dict:
        return normalize(self.model.d(g).items())

    def differential_by_definition(self, g) -> dict:
        return normalize(self.model.d_by_definition(g).items())

    def canonicalize(self, factors, order=None):
        """Sorted word and Koszul sign for a tuple of factors (optionally permuted by order)."""
        fs = tuple(factors) if order is None else tuple(factors[j] for j in order)
        return self.model.sort_word(fs)

    def _bucket(self, n, k) -> dict:
        key = (n, k)
        if key not in self._words:
            b: dict = {}
            for w in self.model.words(n, k):
                b.setdefault(self.model.wdeg(w), []).append(w)
            self._words[key] = b
        return self._words[key]

    def enumerate_cell(self, n, d, k, grading=()):
        if n + k == 0:
            return []
        return self._bucket(n, k).get(d, [])


class TwGerst(_ModelComplex):
    """Tw Gerst: degree = #lambda - 2 #alpha, so k <= n - 1 - d."""

    id = "twgerst"

    def black_range(self, n, d, grading=()):
        return range(max(0, (-d + 1) // 2), n - 1 - d + 1)

    def certificate(self) -> str:
        return "k <= n-1-d"


class TwBV(_ModelComplex):
    """Tw BV: a slice of fixed arity and degree is infinite (D alpha has degree -1), cells
    of fixed black count are finite; slices need a black cap and are reported truncated."""

    id = "twbv"
    bv = True

    def black_range(self, n, d, grading=()):
        return None

    def certificate(self) -> str:
        return "none (truncated by black count)"


# oracles -------------------------------------------------------------------------------


def gerst_dims(n: int) -> dict:
    """dim Gerst(n)_d from the Com o S^-1 Lie monomial basis: a set partition of
    {1..n} with one multilinear Lie word per block, (|B|-1)! of them, degree |B|-1."""
    out: dict = {}
    for blocks in set_partitions(list(range(1, n + 1))):
        count = 1
        for b in blocks:
            count *= factorial(len(b) - 1)
        d = sum(len(b) - 1 for b in blocks)
        if count:
            out[d] = out.get(d, 0) + count
    return out if n else {}


def gerst_plus_dims(n: int) -> dict:
    """Gerst+ = Gerst with a degree -1 class eta adjoined, lambda(eta, -) = 0: in arity n
    the classes are g and eta*g, so dim_d = dim Gerst(n)_d + dim Gerst(n)_{d+1}; arity 0 is eta."""
    if n == 0:
        return {-1: 1}
    g = gerst_dims(n)
    out: dict = {}
    for d, v in g.items():
        out[d] = out.get(d, 0) + v
        out[d - 1] = out.get(d - 1, 0) + v
    return out
