"""Convolution pre-Lie algebras: curved A-infinity structures, and products with values in an operad.

An element f of degree |f| is a family f_n: A^{(x)n} -> A of degree |f| + n - 1
(the value on the cooperad basis element nu_n).  The product is

    (f * g)_n = sum_{p+q+r=n} (-1)^{p(q+1) + |g|(p+r)} f_{p+1+r} o_{p+1} g_q,

with the Koszul sign of g_q passing the first p inputs.  A curved A-infinity
structure is a degree -1 element with alpha * alpha = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..errors import InvalidAlgebra
from .ainfty import CLASSICAL, CLASSICAL_CURVED, CurvedAInftyAlgebra, is_curved, transport_sign
from .module import GradedModuleSpec, Maps, add_maps, add_term, clean, maps_degree_violations, ns_star


@dataclass(frozen=True)
class ConvolutionElement:
    module: GradedModuleSpec
    degree: int
    components: Maps

    def __post_init__(self):
        object.__setattr__(self, "components", clean(self.components))
        for n, t in self.components.items():
            if maps_degree_violations(self.module, {n: t}, self.degree + n - 1):
                raise InvalidAlgebra(f"arity {n} component has the wrong degree")

    def star(self, other: "ConvolutionElement", max_arity: int | None = None) -> "ConvolutionElement":
        if other.module != self.module:
            raise InvalidAlgebra("elements live on different modules")
        top = 2 * self.module.arity_cap - 1 if max_arity is None else max_arity
        gd = other.degree
        out: Maps = {}
        for q, t in other.components.items():
            part = ns_star(
                self.module,
                self.components,
                {q: t},
                gd + q - 1,
                max_arity=top,
                extra_sign=lambda p, qq, r: -1 if (p * (qq + 1) + gd * (p + r)) % 2 else 1,
            )
            out = add_maps(out, part)
        return ConvolutionElement(self.module, self.degree + other.degree, out)

    def shifted_components(self) -> Maps:
        """The same element as maps of degree |f| on sA (a morphism of pre-Lie algebras)."""
        out: Maps = {}
        for t in self.components.values():
            for key, v in t.items():
                add_term(out, key, v, transport_sign(self.module, key))
        return clean(out)

    @classmethod
    def from_shifted(cls, shifted_module: GradedModuleSpec, degree: int, maps: Maps) -> "ConvolutionElement":
        base = shifted_module.shifted(-1)
        out: Maps = {}
        for t in maps.values():
            for key, v in t.items():
                add_term(out, key, v, transport_sign(base, key))
        return cls(base, degree, out)

    @classmethod
    def from_algebra(cls, alg: CurvedAInftyAlgebra) -> "ConvolutionElement":
        c = alg.to_classical()
        return cls(c.module, -1, c.maps)

    def to_algebra(self) -> CurvedAInftyAlgebra:
        if self.degree != -1:
            raise InvalidAlgebra("only degree -1 elements encode structures")
        variant = CLASSICAL_CURVED if self.components.get(0) else CLASSICAL
        return CurvedAInftyAlgebra(self.module, variant, self.components)

    def gauge_admissible(self) -> bool:
        """Arity 0 and 1 components raise filtration weight, as needed for gauge parameters."""
        for n in (0, 1):
            for key, v in self.components.get(n, {}).items():
                if any(self.module.weights[o] < self.module.weight(key) + 1 for o in v):
                    return False
        return True

    def is_maurer_cartan(self) -> bool:
        return self.degree == -1 and not self.star(self).components


def encode(alg: CurvedAInftyAlgebra) -> ConvolutionElement:
    return ConvolutionElement.from_algebra(alg)


def decode(elem: ConvolutionElement, curved: bool | None = None) -> CurvedAInftyAlgebra:
    alg = elem.to_algebra()
    if curved and not is_curved(alg.variant):
        return CurvedAInftyAlgebra(alg.module, CLASSICAL_CURVED, alg.maps)
    return alg


# convolution products with values in a combinatorial operad ---------------------
#
# For a twisting morphism with values in an operad P given by its partial
# compositions, the convolution algebra is prod_n P(n) (invariants for a
# symmetric P).  Elements are dicts {generator: coefficient}; the Koszul signs
# are carried by the generators' own orientations, so compose(x, i, y) already
# returns the signed sum.


def operad_star(f: dict, g: dict, compose, arity) -> dict:
    """Nonsymmetric pre-Lie product f * g = sum_i f o_i g."""
    out: dict = {}
    for x, a in f.items():
        for y, b in g.items():
            for i in range(1, arity(x) + 1):
                for h, v in compose(x, i, y).items():
                    _acc(out, h, a * b * v)
    return out


def symmetric_operad_star(f: dict, g: dict, compose, arity, act) -> dict:
    """Symmetric pre-Lie product on invariants: the (q, p-1)-unshuffles of f o_1 g.

    act(h, perm) relabels the inputs of h by perm (old -> new) and returns
    (generator, sign) or (None, 0).
    """
    out: dict = {}
    for x, a in f.items():
        p = arity(x)
        for y, b in g.items():
            q = arity(y)
            n = p + q - 1
            terms = compose(x, 1, y)
            for S in combinations(range(1, n + 1), q):
                rest = [j for j in range(1, n + 1) if j not in S]
                perm = {j + 1: S[j] for j in range(q)}
                perm.update({q + 1 + j: rest[j] for j in range(p - 1)})
                for h, v in terms.items():
                    h2, s = act(h, perm)
                    if h2 is not None:
                        _acc(out, h2, a * b * v * s)
    return out


def operad_bracket(mu: dict, f: dict, f_parity: int, star) -> dict:
    """[mu, f] = mu * f - (-1)^{|f|} f * mu for an odd mu; star is one of the products above."""
    out = dict(star(mu, f))
    s = 1 if f_parity % 2 else -1
    for h, v in star(f, mu).items():
        _acc(out, h, s * v)
    return out


def _acc(out: dict, h, v) -> None:
    w = out.get(h, 0) + v
    if w:
        out[h] = w
    else:
        out.pop(h, None)
