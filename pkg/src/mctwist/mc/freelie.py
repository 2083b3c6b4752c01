"""Free Lie algebras in the Lyndon basis and the Baker-Campbell-Hausdorff series."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Mapping, TypeVar

Word = str
Poly = dict[Word, Fraction]  # element of the free associative algebra

T = TypeVar("T")


def is_lyndon(w: Word) -> bool:
    """A nonempty word strictly smaller than all its proper rotations."""
    if not w:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def lyndon_words(alphabet: str, max_len: int) -> list[Word]:
    """All Lyndon words of length <= max_len, by Duval's algorithm, in lex order."""
    letters = sorted(alphabet)
    k = len(letters)
    out: list[Word] = []
    if k == 0 or max_len < 1:
        return out
    w = [-1]
    while w:
        w[-1] += 1
        out.append("".join(letters[i] for i in w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def standard_factorization(w: Word) -> tuple[Word, Word]:
    """w = uv with v the longest proper suffix that is a Lyndon word."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w!r} has no standard factorization")


def _add_into(acc: Poly, p: Mapping[Word, Fraction], c: Fraction = Fraction(1)) -> None:
    for w, v in p.items():
        nv = acc.get(w, 0) + c * v
        if nv:
            acc[w] = nv
        else:
            acc.pop(w, None)


def poly_mul(p: Mapping[Word, Fraction], q: Mapping[Word, Fraction], max_len: int) -> Poly:
    out: Poly = {}
    for u, a in p.items():
        for v, b in q.items():
            if len(u) + len(v) <= max_len:
                w = u + v
                nv = out.get(w, 0) + a * b
                if nv:
                    out[w] = nv
                else:
                    out.pop(w, None)
    return out


def commutator(p: Mapping[Word, Fraction], q: Mapping[Word, Fraction], max_len: int) -> Poly:
    out = poly_mul(p, q, max_len)
    _add_into(out, poly_mul(q, p, max_len), Fraction(-1))
    return out


@lru_cache(maxsize=None)
def _lyndon_poly(w: Word) -> tuple[tuple[Word, Fraction], ...]:
    if len(w) == 1:
        return ((w, Fraction(1)),)
    u, v = standard_factorization(w)
    pu, pv = dict(_lyndon_poly(u)), dict(_lyndon_poly(v))
    return tuple(sorted(commutator(pu, pv, len(w)).items()))


def lyndon_poly(w: Word) -> Poly:
    """Expansion of the standard bracketing of a Lyndon word in the free associative algebra."""
    return dict(_lyndon_poly(w))


def lyndon_bracketing(w: Word) -> str:
    if len(w) == 1:
        return w
    u, v = standard_factorization(w)
    return f"[{lyndon_bracketing(u)},{lyndon_bracketing(v)}]"


class NotLie(ValueError):
    """An associative polynomial has no Lie expansion."""


def poly_to_lyndon(p: Mapping[Word, Fraction]) -> dict[Word, Fraction]:
    """Rewrite a Lie polynomial in the Lyndon basis.

    The bracketing of a Lyndon word w is w plus lexicographically larger
    words, so peeling off the smallest remaining word terminates.
    """
    rest: Poly = {w: Fraction(v) for w, v in p.items() if v}
    out: dict[Word, Fraction] = {}
    while rest:
        w = min(rest)
        if not is_lyndon(w):
            raise NotLie(f"smallest word {w!r} is not Lyndon")
        c = rest[w]
        out[w] = c
        _add_into(rest, lyndon_poly(w), -c)
    return out


def dynkin_map(p: Mapping[Word, Fraction]) -> Poly:
    """Left-normed bracketing w1 w2 ... wn -> [..[[w1,w2],w3],..,wn]."""
    out: Poly = {}
    for w, c in p.items():
        acc: Poly = {w[0]: Fraction(1)}
        for ch in w[1:]:
            acc = commutator(acc, {ch: Fraction(1)}, len(w))
        _add_into(out, acc, c)
    return out


@dataclass(frozen=True)
class FreeLieElement:
    """A truncated element of the free Lie algebra, stored on Lyndon words."""

    coeffs: Mapping[Word, Fraction] = field(default_factory=dict)
    order: int = 1

    def __post_init__(self):
        clean = {}
        for w, v in self.coeffs.items():
            if not is_lyndon(w):
                raise ValueError(f"{w!r} is not a Lyndon word")
            v = Fraction(v)
            if v and len(w) <= self.order:
                clean[w] = v
        object.__setattr__(self, "coeffs", dict(sorted(clean.items(), key=lambda kv: (len(kv[0]), kv[0]))))

    @classmethod
    def letter(cls, ch: str, order: int) -> "FreeLieElement":
        return cls({ch: Fraction(1)}, order)

    @classmethod
    def from_poly(cls, p: Mapping[Word, Fraction], order: int) -> "FreeLieElement":
        return cls(poly_to_lyndon({w: v for w, v in p.items() if len(w) <= order}), order)

    def to_poly(self) -> Poly:
        out: Poly = {}
        for w, c in self.coeffs.items():
            _add_into(out, lyndon_poly(w), c)
        return out

    def __add__(self, other: "FreeLieElement") -> "FreeLieElement":
        acc = dict(self.coeffs)
        _add_into(acc, other.coeffs)
        return FreeLieElement(acc, min(self.order, other.order))

    def __neg__(self) -> "FreeLieElement":
        return self.scale(-1)

    def __sub__(self, other: "FreeLieElement") -> "FreeLieElement":
        return self + (-other)

    def scale(self, c) -> "FreeLieElement":
        return FreeLieElement({w: Fraction(c) * v for w, v in self.coeffs.items()}, self.order)

    def bracket(self, other: "FreeLieElement") -> "FreeLieElement":
        n = min(self.order, other.order)
        return FreeLieElement.from_poly(commutator(self.to_poly(), other.to_poly(), n), n)

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(
        self,
        letters: Mapping[str, T],
        bracket: Callable[[T, T], T],
        add: Callable[[T, T], T],
        scale: Callable[[object, T], T],
        zero: T,
    ) -> T:
        """Substitute values for the letters and evaluate the Lyndon brackets."""
        memo: dict[Word, T] = {}

        def value(w: Word) -> T:
            if w in memo:
                return memo[w]
            if len(w) == 1:
                v = letters[w]
            else:
                u, rest = standard_factorization(w)
                v = bracket(value(u), value(rest))
            memo[w] = v
            return v

        acc = zero
        for w, c in self.coeffs.items():
            acc = add(acc, scale(c, value(w)))
        return acc

    def dynkin_consistent(self) -> bool:
        """Each homogeneous part P of degree n satisfies theta(P) = n P."""
        p = self.to_poly()
        by_len: dict[int, Poly] = {}
        for w, c in p.items():
            by_len.setdefault(len(w), {})[w] = c
        for n, part in by_len.items():
            img = dynkin_map(part)
            _add_into(img, part, Fraction(-n))
            if img:
                return False
        return True

    def to_string(self) -> str:
        """Bracket notation, printing [A,a] for a letter a as -[a,A]."""
        terms = []
        for w, c in self.coeffs.items():
            text, sign = _pretty(w)
            terms.append((c * sign, text))
        if not terms:
            return "0"
        out = ""
        for i, (c, text) in enumerate(terms):
            neg = c < 0
            a = abs(c)
            coef = "" if a == 1 else f"{a}"
            if i == 0:
                out += ("-" if neg else "") + coef + text
            else:
                out += (" - " if neg else " + ") + coef + text
        return out

    def __str__(self) -> str:
        return self.to_string()


def _pretty(w: Word) -> tuple[str, int]:
    if len(w) == 1:
        return w, 1
    u, v = standard_factorization(w)
    su, cu = _pretty(u)
    sv, cv = _pretty(v)
    if len(v) == 1 and len(u) > 1:
        return f"[{sv},{su}]", -cu * cv
    return f"[{su},{sv}]", cu * cv


def exp_poly(p: Mapping[Word, Fraction], max_len: int) -> Poly:
    """exp of a polynomial without constant term, truncated by word length."""
    out: Poly = {"": Fraction(1)}
    power: Poly = {"": Fraction(1)}
    for n in range(1, max_len + 1):
        power = poly_mul(power, p, max_len)
        if not power:
            break
        _add_into(out, power, Fraction(1, factorial(n)))
    return out


def log_poly(p: Mapping[Word, Fraction], max_len: int) -> Poly:
    """log of a polynomial with constant term 1, truncated by word length."""
    if p.get("", 0) != 1:
        raise ValueError("log needs constant term 1")
    z = {w: v for w, v in p.items() if w}
    out: Poly = {}
    power: Poly = {"": Fraction(1)}
    for k in range(1, max_len + 1):
        power = poly_mul(power, z, max_len)
        if not power:
            break
        _add_into(out, power, Fraction((-1) ** (k + 1), k))
    return out


def bch_poly(a: Mapping[Word, Fraction], b: Mapping[Word, Fraction], max_len: int) -> Poly:
    return log_poly(poly_mul(exp_poly(a, max_len), exp_poly(b, max_len), max_len), max_len)


@lru_cache(maxsize=None)
def _bch_cached(order: int) -> FreeLieElement:
    p = bch_poly({"x": Fraction(1)}, {"y": Fraction(1)}, order)
    return FreeLieElement.from_poly(p, order)


def bch(order: int) -> FreeLieElement:
    """BCH(x, y) = log(e^x e^y) in the Lyndon basis on x < y, up to word length `order`."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return _bch_cached(order)


def bch_lie(a: FreeLieElement, b: FreeLieElement) -> FreeLieElement:
    """BCH(a, b) evaluated through the Lyndon form of bch, using only brackets."""
    n = min(a.order, b.order)
    zero = FreeLieElement({}, n)
    return bch(n).evaluate(
        {"x": a, "y": b},
        bracket=lambda u, v: u.bracket(v),
        add=lambda u, v: u + v,
        scale=lambda c, u: u.scale(c),
        zero=zero,
    )


def multilinear_lie_dimension(n: int) -> int:
    """Number of Lyndon words using each of n distinct letters exactly once."""
    letters = "abcdefghijklmnop"[:n]
    return sum(1 for w in lyndon_words(letters, n) if len(w) == n and len(set(w)) == n)
