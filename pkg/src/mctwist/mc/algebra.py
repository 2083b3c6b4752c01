"""Finite filtered graded algebras given by structure constants, and their elements."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import InvalidAlgebra

DG_LIE = "dg-lie"
PRE_LIE = "left-unital-pre-lie"
KINDS = (DG_LIE, PRE_LIE)

LinComb = dict[int, Fraction]


def lc_add(acc: dict, other: Mapping, c=1) -> dict:
    """acc += c * other, in place, dropping zeros."""
    for k, v in other.items():
        nv = acc.get(k, 0) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


def parse_coeff(text) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text))


def format_coeff(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class FilteredAlgebraSpec:
    """Structure constants of a dg Lie or left-unital dg pre-Lie algebra, truncated at weight W.

    Basis elements carry a homological degree and a filtration weight; every
    product lands in weight >= the sum of the input weights, and anything of
    weight > W is treated as zero.  For pre-Lie algebras an optional
    `right_delta` gives x * delta for the element delta with [delta, x] = dx,
    on non-unit basis elements (the unit is sent to delta itself).
    """

    def __init__(
        self,
        basis: Iterable[tuple[str, int, int]],
        kind: str,
        product: Mapping[tuple[str, str], Mapping[str, object]],
        differential: Mapping[str, Mapping[str, object]] = (),
        unit: str | None = None,
        truncation_weight: int = 8,
        right_delta: Mapping[str, Mapping[str, object]] | None = None,
        validate: bool = True,
    ):
        basis = list(basis)
        if kind not in KINDS:
            raise InvalidAlgebra(f"unknown kind {kind!r}")
        self.kind = kind
        self.names = tuple(b[0] for b in basis)
        if len(set(self.names)) != len(self.names):
            raise InvalidAlgebra("duplicate basis names")
        self.degrees = tuple(int(b[1]) for b in basis)
        self.weights = tuple(int(b[2]) for b in basis)
        self.W = int(truncation_weight)
        self.index = {n: i for i, n in enumerate(self.names)}
        for n, w in zip(self.names, self.weights):
            if w < 0:
                raise InvalidAlgebra(f"negative weight on {n}")
            if w > self.W:
                raise InvalidAlgebra(f"{n} has weight {w} above the truncation weight {self.W}")
        self.product: dict[tuple[int, int], LinComb] = {}
        for (a, b), res in dict(product).items():
            lc = self._lc(res)
            if lc:
                self.product[(self.index[a], self.index[b])] = lc
        self.differential: dict[int, LinComb] = {}
        for a, res in dict(differential).items():
            lc = self._lc(res)
            if lc:
                self.differential[self.index[a]] = lc
        self.unit = None if unit is None else self.index[unit]
        self.right_delta: dict[int, LinComb] | None = None
        if right_delta is not None:
            if kind != PRE_LIE:
                raise InvalidAlgebra("right_delta only makes sense for pre-Lie algebras")
            self.right_delta = {}
            for a, res in dict(right_delta).items():
                lc = self._lc(res)
                if lc:
                    self.right_delta[self.index[a]] = lc
        self._left: dict[int, list[tuple[int, LinComb]]] = {}
        for (i, j), lc in self.product.items():
            self._left.setdefault(i, []).append((j, lc))
        if validate:
            problems = self.violations()
            if problems:
                raise InvalidAlgebra("; ".join(problems[:5]))

    def _lc(self, res: Mapping[str, object]) -> LinComb:
        out: LinComb = {}
        for n, c in dict(res).items():
            c = parse_coeff(c)
            if c:
                out[self.index[n]] = out.get(self.index[n], 0) + c
        return {k: v for k, v in out.items() if v}

    @property
    def dim(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"FilteredAlgebraSpec({self.kind}, dim={self.dim}, W={self.W})"

    # elements

    def element(self, coeffs: Mapping[str, object] = ()) -> "AlgebraElement":
        return AlgebraElement(self, {self.index[n]: parse_coeff(c) for n, c in dict(coeffs).items()})

    def gen(self, name: str) -> "AlgebraElement":
        return AlgebraElement(self, {self.index[name]: Fraction(1)})

    def basis_element(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, {i: Fraction(1)})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        from ..errors import NoUnit

        if self.unit is None:
            raise NoUnit("algebra has no unit")
        return AlgebraElement(self, {self.unit: Fraction(1)})

    # raw products on index dictionaries

    def mul(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> LinComb:
        """The structure product (bracket for dg Lie, pre-Lie product otherwise)."""
        out: LinComb = {}
        W = self.W
        wts = self.weights
        for i, a in x.items():
            row = self._left.get(i)
            if not row:
                continue
            for j, lc in row:
                b = y.get(j)
                if b is None or wts[i] + wts[j] > W:
                    continue
                lc_add(out, lc, a * b)
        return out

    def bracket(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> LinComb:
        if self.kind == DG_LIE:
            return self.mul(x, y)
        out = self.mul(x, y)
        degs = self.degrees
        for j, b in y.items():
            for i, a in x.items():
                if self.weights[i] + self.weights[j] > self.W:
                    continue
                lc = self.product.get((j, i))
                if lc:
                    s = -1 if (degs[i] * degs[j]) % 2 == 0 else 1
                    lc_add(out, lc, s * a * b)
        return out

    def d(self, x: Mapping[int, Fraction]) -> LinComb:
        out: LinComb = {}
        for i, a in x.items():
            lc = self.differential.get(i)
            if lc:
                lc_add(out, lc, a)
        return out

    # validation

    def violations(self) -> list[str]:
        out: list[str] = []
        n = self.dim
        degs, wts, W = self.degrees, self.weights, self.W
        for (i, j), lc in self.product.items():
            for k in lc:
                if degs[k] != degs[i] + degs[j]:
                    out.append(f"product {self.names[i]},{self.names[j]} -> {self.names[k]} breaks degree")
                if wts[k] < wts[i] + wts[j]:
                    out.append(f"product {self.names[i]},{self.names[j]} -> {self.names[k]} lowers weight")
        for i, lc in self.differential.items():
            for k in lc:
                if degs[k] != degs[i] - 1:
                    out.append(f"d {self.names[i]} -> {self.names[k]} is not of degree -1")
                if wts[k] < wts[i]:
                    out.append(f"d {self.names[i]} -> {self.names[k]} lowers weight")
        if out:
            return out
        e = lambda i: {i: Fraction(1)}
        for i in range(n):
            if self.d(self.d(e(i))):
                out.append(f"d^2 {self.names[i]} != 0")
        if self.kind == DG_LIE:
            for i in range(n):
                for j in range(n):
                    if wts[i] + wts[j] > W:
                        continue
                    lhs = self.mul(e(i), e(j))
                    s = -1 if (degs[i] * degs[j]) % 2 == 0 else 1
                    lc_add(lhs, self.mul(e(j), e(i)), -s)
                    if lhs:
                        out.append(f"skew-symmetry fails on {self.names[i]},{self.names[j]}")
        for i in range(n):
            for j in range(n):
                if wts[i] + wts[j] > W:
                    continue
                ij = self.mul(e(i), e(j))
                lhs = self.d(ij)
                lc_add(lhs, self.mul(self.d(e(i)), e(j)), -1)
                lc_add(lhs, self.mul(e(i), self.d(e(j))), -(-1) ** (degs[i] % 2))
                if lhs:
                    out.append(f"d is not a derivation on {self.names[i]},{self.names[j]}")
                for k in range(n):
                    if wts[i] + wts[j] + wts[k] > W:
                        continue
                    if self.kind == DG_LIE:
                        # [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]
                        lhs = self.mul(e(i), self.mul(e(j), e(k)))
                        lc_add(lhs, self.mul(ij, e(k)), -1)
                        lc_add(lhs, self.mul(e(j), self.mul(e(i), e(k))), -(-1) ** ((degs[i] * degs[j]) % 2))
                        if lhs:
                            out.append(f"Jacobi fails on {self.names[i]},{self.names[j]},{self.names[k]}")
                    else:
                        lhs = self.associator(e(i), e(j), e(k))
                        lc_add(lhs, self.associator(e(i), e(k), e(j)), -(-1) ** ((degs[j] * degs[k]) % 2))
                        if lhs:
                            out.append(f"right symmetry fails on {self.names[i]},{self.names[j]},{self.names[k]}")
        if self.unit is not None:
            u = self.unit
            if degs[u] != 0 or wts[u] != 0:
                out.append("unit must have degree 0 and weight 0")
            if self.d(e(u)):
                out.append("d(1) != 0")
            for i in range(n):
                if self.mul(e(u), e(i)) != e(i):
                    out.append(f"1 * {self.names[i]} != {self.names[i]}")
        if not out and self.right_delta is not None:
            ext = self.with_delta()
            out.extend(ext.violations())
        return out

    def associator(self, x, y, z) -> LinComb:
        a = self.mul(self.mul(x, y), z)
        lc_add(a, self.mul(x, self.mul(y, z)), -1)
        return a

    # the element delta with [delta, x] = dx

    DELTA = "__delta__"

    def with_delta(self) -> "FilteredAlgebraSpec":
        """The algebra with delta adjoined and zero differential.

        dg Lie: [delta, x] = dx.  Pre-Lie: x * delta = right_delta(x) and
        delta * x = dx + (-1)^{|x|} right_delta(x), delta * delta = 0.
        """
        if self.DELTA in self.index:
            raise InvalidAlgebra("delta already adjoined")
        names = self.names
        basis = [(n, dg, w) for n, dg, w in zip(names, self.degrees, self.weights)] + [(self.DELTA, -1, 0)]
        prod = {(names[i], names[j]): {names[k]: v for k, v in lc.items()} for (i, j), lc in self.product.items()}
        D = self.DELTA

        def named(lc):
            return {names[k]: v for k, v in lc.items()}

        if self.kind == DG_LIE:
            for i in range(self.dim):
                dx = self.differential.get(i, {})
                if dx:
                    prod[(D, names[i])] = named(dx)
                    s = -((-1) ** (self.degrees[i] % 2))
                    prod[(names[i], D)] = {k: s * v for k, v in named(dx).items()}
            return FilteredAlgebraSpec(basis, DG_LIE, prod, {}, None, self.W, validate=False)
        if self.right_delta is None and self.differential:
            raise InvalidAlgebra("pre-Lie delta extension needs right_delta when d != 0")
        rd = self.right_delta or {}
        for i in range(self.dim):
            if i == self.unit:
                prod[(names[i], D)] = {D: Fraction(1)}
                prod[(D, names[i])] = {D: Fraction(1)}
                continue
            r = rd.get(i, {})
            if r:
                prod[(names[i], D)] = named(r)
            left = dict(self.differential.get(i, {}))
            lc_add(left, r, (-1) ** (self.degrees[i] % 2))
            if left:
                prod[(D, names[i])] = named(left)
        unit = None if self.unit is None else names[self.unit]
        return FilteredAlgebraSpec(basis, PRE_LIE, prod, {}, unit, self.W, validate=False)

    def skew_symmetrization(self) -> "FilteredAlgebraSpec":
        """The dg Lie algebra with [x,y] = x*y - (-1)^{|x||y|} y*x."""
        if self.kind == DG_LIE:
            return self
        basis = list(zip(self.names, self.degrees, self.weights))
        prod = {}
        for i in range(self.dim):
            for j in range(self.dim):
                lc = self.bracket({i: Fraction(1)}, {j: Fraction(1)})
                if lc:
                    prod[(self.names[i], self.names[j])] = {self.names[k]: v for k, v in lc.items()}
        diff = {self.names[i]: {self.names[k]: v for k, v in lc.items()} for i, lc in self.differential.items()}
        return FilteredAlgebraSpec(basis, DG_LIE, prod, diff, None, self.W, validate=False)

    def truncated(self, W: int) -> "FilteredAlgebraSpec":
        """The quotient by all basis elements of weight > W."""
        keep = [i for i in range(self.dim) if self.weights[i] <= W]
        ok = set(keep)
        names = self.names

        def cut(lc):
            return {names[k]: v for k, v in lc.items() if k in ok}

        basis = [(names[i], self.degrees[i], self.weights[i]) for i in keep]
        prod = {(names[i], names[j]): cut(lc) for (i, j), lc in self.product.items() if i in ok and j in ok}
        diff = {names[i]: cut(lc) for i, lc in self.differential.items() if i in ok}
        rd = None
        if self.right_delta is not None:
            rd = {names[i]: cut(lc) for i, lc in self.right_delta.items() if i in ok}
        unit = None if self.unit is None else names[self.unit]
        return FilteredAlgebraSpec(basis, self.kind, prod, diff, unit, W, rd, validate=False)

    def with_differential(self, differential: Mapping[int, LinComb], validate: bool = True) -> "FilteredAlgebraSpec":
        basis = list(zip(self.names, self.degrees, self.weights))
        prod = {(self.names[i], self.names[j]): {self.names[k]: v for k, v in lc.items()} for (i, j), lc in self.product.items()}
        diff = {self.names[i]: {self.names[k]: v for k, v in lc.items()} for i, lc in differential.items() if lc}
        unit = None if self.unit is None else self.names[self.unit]
        return FilteredAlgebraSpec(basis, self.kind, prod, diff, unit, self.W, None, validate=validate)

    # JSON

    def to_json(self) -> dict:
        names = self.names
        doc = {
            "basis": [{"name": n, "degree": d, "weight": w} for n, d, w in zip(names, self.degrees, self.weights)],
            "kind": self.kind,
            "unit": None if self.unit is None else names[self.unit],
            "truncation_weight": self.W,
            "product": [
                {
                    "left": names[i],
                    "right": names[j],
                    "result": [{"gen": names[k], "coeff": format_coeff(v)} for k, v in sorted(lc.items())],
                }
                for (i, j), lc in sorted(self.product.items())
            ],
            "differential": [
                {"gen": names[i], "result": [{"gen": names[k], "coeff": format_coeff(v)} for k, v in sorted(lc.items())]}
                for i, lc in sorted(self.differential.items())
            ],
        }
        if self.right_delta is not None:
            doc["right_delta"] = [
                {"gen": names[i], "result": [{"gen": names[k], "coeff": format_coeff(v)} for k, v in sorted(lc.items())]}
                for i, lc in sorted(self.right_delta.items())
            ]
        return doc

    @classmethod
    def from_json(cls, doc: dict | str, validate: bool = True) -> "FilteredAlgebraSpec":
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            basis = [(b["name"], int(b["degree"]), int(b["weight"])) for b in doc["basis"]]
            product = {}
            for k, entry in enumerate(doc.get("product", [])):
                product[(entry["left"], entry["right"])] = {r["gen"]: parse_coeff(r["coeff"]) for r in entry["result"]}
            diff = {e["gen"]: {r["gen"]: parse_coeff(r["coeff"]) for r in e["result"]} for e in doc.get("differential", [])}
            rd = None
            if "right_delta" in doc:
                rd = {e["gen"]: {r["gen"]: parse_coeff(r["coeff"]) for r in e["result"]} for e in doc["right_delta"]}
            return cls(
                basis,
                doc["kind"],
                product,
                diff,
                doc.get("unit"),
                int(doc.get("truncation_weight", 8)),
                rd,
                validate=validate,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidAlgebra(f"malformed algebra document: {exc!r}") from exc


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """A finite linear combination of basis elements of a FilteredAlgebraSpec."""

    algebra: FilteredAlgebraSpec
    coeffs: Mapping[int, Fraction]

    def __post_init__(self):
        W = self.algebra.W
        wts = self.algebra.weights
        clean = {int(k): Fraction(v) for k, v in self.coeffs.items() if v and wts[k] <= W}
        object.__setattr__(self, "coeffs", clean)

    def _wrap(self, lc: Mapping[int, Fraction]) -> "AlgebraElement":
        return AlgebraElement(self.algebra, lc)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._wrap(lc_add(dict(self.coeffs), other.coeffs))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._wrap(lc_add(dict(self.coeffs), other.coeffs, -1))

    def __neg__(self) -> "AlgebraElement":
        return self._wrap({k: -v for k, v in self.coeffs.items()})

    def __mul__(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return self._wrap({k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def star(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._wrap(self.algebra.mul(self.coeffs, other.coeffs))

    def bracket(self, other: "AlgebraElement") -> "AlgebraElement":
        return self._wrap(self.algebra.bracket(self.coeffs, other.coeffs))

    def d(self) -> "AlgebraElement":
        return self._wrap(self.algebra.d(self.coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degrees(self) -> set[int]:
        return {self.algebra.degrees[k] for k in self.coeffs}

    def degree(self) -> int | None:
        """The common degree of all components, None for zero; ValueError if inhomogeneous."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError("element is not homogeneous")
        return ds.pop()

    def min_weight(self) -> int | None:
        if not self.coeffs:
            return None
        return min(self.algebra.weights[k] for k in self.coeffs)

    def homogeneous_parts(self) -> dict[int, "AlgebraElement"]:
        parts: dict[int, dict] = {}
        for k, v in self.coeffs.items():
            parts.setdefault(self.algebra.degrees[k], {})[k] = v
        return {d: self._wrap(p) for d, p in parts.items()}

    def coeff(self, name: str) -> Fraction:
        return self.coeffs.get(self.algebra.index[name], Fraction(0))

    def named(self) -> dict[str, Fraction]:
        return {self.algebra.names[k]: v for k, v in sorted(self.coeffs.items())}

    def to_json(self) -> list:
        return [{"gen": self.algebra.names[k], "coeff": format_coeff(v)} for k, v in sorted(self.coeffs.items())]

    @classmethod
    def from_json(cls, algebra: FilteredAlgebraSpec, doc) -> "AlgebraElement":
        if isinstance(doc, dict):
            doc = doc.get("element", doc.get("coeffs", []))
        return algebra.element({r["gen"]: parse_coeff(r["coeff"]) for r in doc})

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{format_coeff(v)}*{self.algebra.names[k]}" for k, v in sorted(self.coeffs.items()))

    def lift(self, target: FilteredAlgebraSpec) -> "AlgebraElement":
        """The same combination viewed in an algebra containing these basis names."""
        names = self.algebra.names
        return AlgebraElement(target, {target.index[names[k]]: v for k, v in self.coeffs.items()})
