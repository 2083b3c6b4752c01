"""Finite graded modules and sparse multilinear maps on them.

A family of multilinear maps is stored as {arity: {input tuple: {output: coeff}}}
with basis indices everywhere.  Non-symmetric families (A-infinity type) key
on ordered tuples.  Symmetric families (L-infinity type) key on sorted tuples;
the value on any other ordering follows by the Koszul sign of sorting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import factorial
from typing import Iterable, Mapping

from ..errors import InvalidAlgebra
from ..mc.algebra import lc_add

LinComb = dict[int, Fraction]
Maps = dict[int, dict[tuple, LinComb]]


@dataclass(frozen=True)
class GradedModuleSpec:
    """Basis names with homological degree and filtration weight.

    Tensors of total weight above `truncation_weight` are zero; multilinear
    maps are considered up to arity `arity_cap`.
    """

    names: tuple[str, ...]
    degrees: tuple[int, ...]
    weights: tuple[int, ...]
    truncation_weight: int
    arity_cap: int
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not (len(self.names) == len(self.degrees) == len(self.weights)):
            raise InvalidAlgebra("basis lists have different lengths")
        if len(set(self.names)) != len(self.names):
            raise InvalidAlgebra("duplicate basis names")
        if any(w < 0 for w in self.weights):
            raise InvalidAlgebra("filtration weights must be >= 0")
        if any(w > self.truncation_weight for w in self.weights):
            raise InvalidAlgebra("basis weight above the truncation weight")
        if self.arity_cap < 2:
            raise InvalidAlgebra("arity_cap must be >= 2")

    @classmethod
    def from_basis(cls, basis: Iterable[tuple[str, int, int]], W: int, N: int) -> "GradedModuleSpec":
        basis = list(basis)
        return cls(tuple(b[0] for b in basis), tuple(b[1] for b in basis), tuple(b[2] for b in basis), W, N)

    @property
    def dim(self) -> int:
        return len(self.names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.names)}

    def shifted(self, k: int = 1) -> "GradedModuleSpec":
        return GradedModuleSpec(self.names, tuple(d + k for d in self.degrees), self.weights, self.truncation_weight, self.arity_cap)

    def with_caps(self, W: int | None = None, N: int | None = None) -> "GradedModuleSpec":
        return GradedModuleSpec(
            self.names,
            self.degrees,
            self.weights,
            self.truncation_weight if W is None else W,
            self.arity_cap if N is None else N,
        )

    def weight(self, t: Iterable[int]) -> int:
        return sum(self.weights[i] for i in t)

    def degree(self, t: Iterable[int]) -> int:
        return sum(self.degrees[i] for i in t)

    def tuples(self, n: int, bound: int | None = None) -> list[tuple]:
        """Ordered n-tuples of total weight <= bound (default W), lexicographic."""
        bound = self.truncation_weight if bound is None else bound
        key = ("ord", n, bound)
        if key not in self._cache:
            out = []

            def rec(prefix, left):
                if len(prefix) == n:
                    out.append(tuple(prefix))
                    return
                for i in range(self.dim):
                    if self.weights[i] <= left:
                        prefix.append(i)
                        rec(prefix, left - self.weights[i])
                        prefix.pop()

            rec([], bound)
            self._cache[key] = out
        return self._cache[key]

    def sorted_tuples(self, n: int, bound: int | None = None) -> list[tuple]:
        """Non-decreasing n-tuples of weight <= bound with no repeated odd element."""
        bound = self.truncation_weight if bound is None else bound
        key = ("sym", n, bound)
        if key not in self._cache:
            out = []

            def rec(prefix, start, left):
                if len(prefix) == n:
                    out.append(tuple(prefix))
                    return
                for i in range(start, self.dim):
                    if self.weights[i] > left:
                        continue
                    if prefix and prefix[-1] == i and self.degrees[i] % 2:
                        continue
                    prefix.append(i)
                    rec(prefix, i, left - self.weights[i])
                    prefix.pop()

            rec([], 0, bound)
            self._cache[key] = out
        return self._cache[key]

    def lc(self, named: Mapping[str, object]) -> LinComb:
        out: LinComb = {}
        for k, v in named.items():
            if k not in self.index:
                raise InvalidAlgebra(f"unknown basis element {k!r}")
            lc_add(out, {self.index[k]: Fraction(v)})
        return out

    def named(self, lc: Mapping[int, Fraction]) -> dict[str, Fraction]:
        return {self.names[k]: v for k, v in sorted(lc.items())}

    def lc_degrees(self, lc: Mapping[int, Fraction]) -> set[int]:
        return {self.degrees[k] for k in lc}

    def lc_min_weight(self, lc: Mapping[int, Fraction]) -> int | None:
        return min((self.weights[k] for k in lc), default=None)


# basic operations on map families


def clean(maps: Maps) -> Maps:
    out: Maps = {}
    for n, table in maps.items():
        t = {k: dict(v) for k, v in table.items() if v}
        if t:
            out[n] = t
    return out


def add_term(maps: Maps, key: tuple, lc: Mapping[int, Fraction], c=1) -> None:
    table = maps.setdefault(len(key), {})
    cur = table.setdefault(key, {})
    lc_add(cur, lc, c)
    if not cur:
        del table[key]


def add_maps(f: Maps, g: Maps, c=1) -> Maps:
    out: Maps = {n: {k: dict(v) for k, v in t.items()} for n, t in f.items()}
    for n, t in g.items():
        for k, v in t.items():
            add_term(out, k, v, c)
    return clean(out)


def scale_maps(f: Maps, c) -> Maps:
    return clean({n: {k: {o: c * x for o, x in v.items()} for k, v in t.items()} for n, t in f.items()})


def restrict(f: Maps, max_arity: int | None = None, arities: Iterable[int] | None = None) -> Maps:
    keep = set(arities) if arities is not None else None
    return clean({n: t for n, t in f.items() if (max_arity is None or n <= max_arity) and (keep is None or n in keep)})


def nonzero_counts(f: Maps) -> dict[int, int]:
    """Number of nonzero (input tuple, output) entries per arity."""
    return {n: sum(len(v) for v in t.values()) for n, t in sorted(f.items())}


def maps_degree_violations(mod: GradedModuleSpec, f: Maps, degree: int) -> list[str]:
    bad = []
    for n, t in f.items():
        for key, v in t.items():
            for o in v:
                if mod.degrees[o] != mod.degree(key) + degree:
                    bad.append(f"arity {n}: {key} -> {o} has the wrong degree")
    return bad


def maps_weight_violations(mod: GradedModuleSpec, f: Maps, strict_low_arity: bool = False) -> list[str]:
    """Entries that lower filtration weight (or keep it, for arities 0 and 1 when strict)."""
    bad = []
    for n, t in f.items():
        for key, v in t.items():
            need = mod.weight(key) + (1 if strict_low_arity and n <= 1 else 0)
            for o in v:
                if mod.weights[o] < need:
                    bad.append(f"arity {n}: {key} -> {o} lowers the weight")
    return bad


def koszul_sort(mod: GradedModuleSpec, t: Iterable[int]) -> tuple[int, tuple]:
    """(sign, sorted tuple): the Koszul sign of sorting t; sign 0 if an odd element repeats."""
    t = list(t)
    sign = 1
    # insertion sort, tracking swaps of two odd elements
    for i in range(1, len(t)):
        j = i
        while j > 0 and t[j - 1] > t[j]:
            if mod.degrees[t[j - 1]] % 2 and mod.degrees[t[j]] % 2:
                sign = -sign
            t[j - 1], t[j] = t[j], t[j - 1]
            j -= 1
    for a, b in zip(t, t[1:]):
        if a == b and mod.degrees[a] % 2:
            return 0, tuple(t)
    return sign, tuple(t)


def sym_value(mod: GradedModuleSpec, f: Maps, t: tuple) -> LinComb:
    """Value of a symmetric family (sorted storage) on an arbitrary ordering."""
    s, key = koszul_sort(mod, t)
    if not s:
        return {}
    v = f.get(len(key), {}).get(key)
    if not v:
        return {}
    return v if s == 1 else {o: -c for o, c in v.items()}


def _index_positions(f: Maps) -> dict[int, list]:
    """For each basis element y, the (key, position, value) triples with key[position] = y."""
    idx: dict[int, list] = {}
    for t in f.values():
        for key, v in t.items():
            for i, y in enumerate(key):
                idx.setdefault(y, []).append((key, i, v))
    return idx


def ns_star(
    mod: GradedModuleSpec,
    f: Maps,
    g: Maps,
    g_degree: int,
    max_arity: int | None = None,
    bound: int | None = None,
    extra_sign=None,
) -> Maps:
    """sum_i f o_i g for ordered families, with the Koszul sign of g passing the first i-1 inputs.

    Only output tuples of weight <= bound (default W) and arity <= max_arity are kept.
    extra_sign(p, q, r) multiplies the term with p inputs before g, q inputs of g
    and r after it.
    """
    bound = mod.truncation_weight if bound is None else bound
    idx = _index_positions(f)
    out: Maps = {}
    odd = g_degree % 2
    for gt in g.values():
        for gk, gv in gt.items():
            gw = mod.weight(gk)
            for y, c in gv.items():
                for fk, i, fv in idx.get(y, ()):
                    new = fk[:i] + gk + fk[i + 1 :]
                    if max_arity is not None and len(new) > max_arity:
                        continue
                    if mod.weight(fk) - mod.weights[y] + gw > bound:
                        continue
                    s = -1 if odd and mod.degree(fk[:i]) % 2 else 1
                    if extra_sign is not None:
                        s *= extra_sign(i, len(gk), len(fk) - i - 1)
                    add_term(out, new, fv, s * c)
    return clean(out)


def shuffle_sign(mod: GradedModuleSpec, seq: Iterable[int]) -> int:
    """Koszul sign of sorting seq (0 if an odd element repeats)."""
    return koszul_sort(mod, seq)[0]


def _multiplicity(t: tuple) -> int:
    """Number of orderings of t that coincide with t (product of factorials of repeats)."""
    out = 1
    run = 1
    for a, b in zip(t, t[1:]):
        if a == b:
            run += 1
            out *= run
        else:
            run = 1
    return out


def _binom_multiset(x: tuple, s: tuple) -> int:
    """Number of position subsets of the sorted tuple x whose values form the sorted tuple s."""
    from collections import Counter
    from math import comb

    cx, cs = Counter(x), Counter(s)
    out = 1
    for e, m in cs.items():
        out *= comb(cx[e], m)
    return out


def sym_star(
    mod: GradedModuleSpec,
    f: Maps,
    g: Maps,
    max_arity: int | None = None,
    bound: int | None = None,
) -> Maps:
    """(f * g)(x) = sum over unshuffles of Koszul sign * f(g(x_S), x_rest), symmetric families."""
    bound = mod.truncation_weight if bound is None else bound
    idx = _index_positions(f)
    out: Maps = {}
    for gt in g.values():
        for gk, gv in gt.items():
            gw = mod.weight(gk)
            for y, c in gv.items():
                seen = set()
                for fk, i, fv in idx.get(y, ()):
                    if (fk, y) in seen:
                        continue
                    seen.add((fk, y))
                    first = fk.index(y)
                    rest = fk[:first] + fk[first + 1 :]
                    if max_arity is not None and len(rest) + len(gk) > max_arity:
                        continue
                    if mod.weight(rest) + gw > bound:
                        continue
                    # bring y to the front of fk
                    s_f = -1 if mod.degrees[y] % 2 and mod.degree(fk[:first]) % 2 else 1
                    s_x, x = koszul_sort(mod, gk + rest)
                    if not s_x:
                        continue
                    mult = _binom_multiset(x, gk)
                    add_term(out, x, fv, s_f * s_x * mult * c)
    return clean(out)


def ns_twist(mod: GradedModuleSpec, f: Maps, a: Mapping[int, Fraction], classical_sign: bool = False) -> Maps:
    """f^a_n(x) = sum f(a..a, x_1, a..a, ..., x_n, a..a) over all ways of inserting a's.

    With classical_sign, a has odd degree and m(a^{r_0}, -, a^{r_1}, ..., -, a^{r_n})
    is read as the operator m o (a^{r_0} (x) id (x) a^{r_1} (x) ... (x) id (x) a^{r_n}):
    every term carries (-1)^{sum_k k r_k}, r_k being the number of a's after the
    k-th input, times the Koszul sign of each a passing the inputs to its left.
    """
    out: Maps = {}
    for N, t in f.items():
        for key, v in t.items():
            for n in range(N + 1):
                for xs in combinations(range(N), n):
                    xset = set(xs)
                    c = Fraction(1)
                    sign_exp = 0
                    seen_x = 0
                    seen_deg = 0
                    ok = True
                    for j in range(N):
                        if j in xset:
                            seen_x += 1
                            seen_deg += mod.degrees[key[j]]
                            continue
                        cj = a.get(key[j])
                        if cj is None:
                            ok = False
                            break
                        c *= cj
                        sign_exp += seen_x + seen_deg
                    if not ok:
                        continue
                    if classical_sign and sign_exp % 2:
                        c = -c
                    add_term(out, tuple(key[j] for j in xs), v, c)
    return clean(out)


def sym_twist(mod: GradedModuleSpec, f: Maps, a: Mapping[int, Fraction]) -> Maps:
    """f^a_n(x) = sum_k 1/k! f_{k+n}(a^k, x) for a symmetric family and a of even degree."""
    if any(mod.degrees[k] % 2 for k in a):
        raise InvalidAlgebra("symmetric twisting needs an element of even degree")
    out: Maps = {}
    for t in f.values():
        for key, v in t.items():
            runs: list[list] = []
            for e in key:
                if runs and runs[-1][0] == e:
                    runs[-1][1] += 1
                else:
                    runs.append([e, 1])

            def rec(r, xs, coeff):
                if r == len(runs):
                    add_term(out, tuple(xs), v, coeff)
                    return
                e, m = runs[r]
                top = m if e in a else 0
                for k in range(top + 1):
                    c = coeff * (a[e] ** k if k else 1) / factorial(k)
                    rec(r + 1, xs + [e] * (m - k), c)

            rec(0, [], Fraction(1))
    return clean(out)


def symmetrize_maps(mod: GradedModuleSpec, f: Maps) -> Maps:
    """l_n(x) = sum_sigma Koszul sign * f_n(x_sigma), stored on sorted tuples."""
    out: Maps = {}
    for t in f.values():
        for key, v in t.items():
            s, x = koszul_sort(mod, key)
            if s:
                add_term(out, x, v, s * _multiplicity(x))
    return clean(out)


def ns_circle(mod: GradedModuleSpec, beta: Maps, f: Maps, max_arity: int, bound: int | None = None) -> Maps:
    """(beta (circle) f)_n(x) = sum_k sum over splittings of x into k consecutive (possibly empty)
    blocks of beta_k(f(B_1), ..., f(B_k)); f has degree 0 so no signs appear."""
    bound = mod.truncation_weight if bound is None else bound
    out: Maps = {}
    kmax = max(beta, default=0)
    f0 = f.get(0, {}).get((), {})
    for n in range(max_arity + 1):
        for x in mod.tuples(n, bound):
            memo: dict = {}

            def blocks(k, start):
                """{output tuple of length k: coeff} from splitting x[start:] into k blocks."""
                key = (k, start)
                if key in memo:
                    return memo[key]
                res: dict = {}
                if k == 0:
                    if start == n:
                        res[()] = Fraction(1)
                    memo[key] = res
                    return res
                for end in range(start, n + 1):
                    block = x[start:end]
                    img = f0 if not block else f.get(len(block), {}).get(block, {})
                    if not img:
                        continue
                    tail = blocks(k - 1, end)
                    for y, cy in img.items():
                        for ys, ct in tail.items():
                            res[(y,) + ys] = res.get((y,) + ys, 0) + cy * ct
                memo[key] = {k2: v for k2, v in res.items() if v}
                return memo[key]

            acc: LinComb = {}
            for k in range(kmax + 1):
                bt = beta.get(k)
                if not bt:
                    continue
                for ys, c in blocks(k, 0).items():
                    v = bt.get(ys)
                    if v:
                        lc_add(acc, v, c)
            if acc:
                out.setdefault(n, {})[x] = acc
    return out


def sym_circle(
    mod: GradedModuleSpec,
    beta: Maps,
    f: Maps,
    max_arity: int,
    bound: int | None = None,
    target: GradedModuleSpec | None = None,
) -> Maps:
    """(beta (circle) f)(x) = sum_k 1/k! sum over ordered k-block unshuffles of x (blocks may be
    empty) of Koszul sign * beta_k(f(B_1), ..., f(B_k)), for symmetric families and f of degree 0.

    x runs over sorted tuples of `mod`; beta lives on `target` (default: the same module).
    """
    bound = mod.truncation_weight if bound is None else bound
    target = mod if target is None else target
    out: Maps = {}
    kmax = max(beta, default=0)
    f0 = f.get(0, {}).get((), {})
    for n in range(max_arity + 1):
        for x in mod.sorted_tuples(n, bound):
            memo: dict = {}

            def blocks(k, rest):
                """{ordered output tuple: coeff} over ordered k-block unshuffles of rest (kept sorted)."""
                key = (k, rest)
                if key in memo:
                    return memo[key]
                res: dict = {}
                m = len(rest)
                if k == 0:
                    if m == 0:
                        res[()] = Fraction(1)
                    memo[key] = res
                    return res
                for size in range(m + 1):
                    for pos in combinations(range(m), size):
                        block = tuple(rest[p] for p in pos)
                        other = tuple(rest[p] for p in range(m) if p not in pos)
                        s = shuffle_sign(mod, block + other)
                        if not s:
                            continue
                        img = f0 if not block else f.get(len(block), {}).get(block, {})
                        if not img:
                            continue
                        tail = blocks(k - 1, other)
                        for y, cy in img.items():
                            for ys, ct in tail.items():
                                kk = (y,) + ys
                                res[kk] = res.get(kk, 0) + s * cy * ct
                memo[key] = {k2: v for k2, v in res.items() if v}
                return memo[key]

            acc: LinComb = {}
            for k in range(kmax + 1):
                if not beta.get(k):
                    continue
                for ys, c in blocks(k, x).items():
                    v = sym_value(target, beta, ys)
                    if v:
                        lc_add(acc, v, c / factorial(k))
            if acc:
                out.setdefault(n, {})[x] = acc
    return out


def maps_to_json(mod: GradedModuleSpec, f: Maps) -> list:
    from ..mc.algebra import format_coeff

    out = []
    for n in sorted(f):
        for key in sorted(f[n]):
            v = f[n][key]
            out.append(
                {
                    "arity": n,
                    "inputs": [mod.names[i] for i in key],
                    "output": [{"gen": mod.names[o], "coeff": format_coeff(c)} for o, c in sorted(v.items())],
                }
            )
    return out


def maps_from_json(mod: GradedModuleSpec, doc: list) -> Maps:
    from ..mc.algebra import parse_coeff

    out: Maps = {}
    try:
        for entry in doc:
            key = tuple(mod.index[g] for g in entry["inputs"])
            if int(entry.get("arity", len(key))) != len(key):
                raise InvalidAlgebra("arity does not match the number of inputs")
            lc = {mod.index[o["gen"]]: parse_coeff(o["coeff"]) for o in entry["output"]}
            add_term(out, key, lc)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidAlgebra(f"malformed map entry: {exc}") from exc
    return clean(out)


def module_to_json(mod: GradedModuleSpec) -> dict:
    return {
        "basis": [{"name": n, "degree": d, "weight": w} for n, d, w in zip(mod.names, mod.degrees, mod.weights)],
        "truncation_weight": mod.truncation_weight,
        "arity_cap": mod.arity_cap,
    }


def module_from_json(doc: dict) -> GradedModuleSpec:
    try:
        basis = [(b["name"], int(b["degree"]), int(b["weight"])) for b in doc["basis"]]
        return GradedModuleSpec.from_basis(basis, int(doc["truncation_weight"]), int(doc["arity_cap"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidAlgebra(f"malformed module: {exc}") from exc
