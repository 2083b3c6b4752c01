"""Infinity-morphisms of shifted curved L-infinity algebras and their twisting."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import FormulaMismatch, InvalidAlgebra, SourceTargetMismatch
from .ainfty import _as_lc
from .linfty import CurvedLInftyAlgebra, twist_linfty
from .module import (
    GradedModuleSpec,
    LinComb,
    Maps,
    add_maps,
    clean,
    koszul_sort,
    restrict,
    sym_circle,
    sym_star,
    sym_twist,
)


@dataclass(frozen=True)
class InftyMorphism:
    """Components f_n: S^n(sA) -> sB of degree 0, stored on sorted tuples of the source module.

    f_0 (an element of B) must have weight >= 1; every f_n must not lower weight.
    """

    source: GradedModuleSpec
    target: GradedModuleSpec
    components: Maps

    def __post_init__(self):
        object.__setattr__(self, "components", clean(self.components))
        for n, t in self.components.items():
            for key, v in t.items():
                s, srt = koszul_sort(self.source, key)
                if srt != key or not s:
                    raise InvalidAlgebra(f"component key {key} is not sorted")
                for o in v:
                    if self.target.degrees[o] != self.source.degree(key):
                        raise InvalidAlgebra(f"component {key} -> {o} does not have degree 0")
                    need = self.source.weight(key) + (1 if n == 0 else 0)
                    if self.target.weights[o] < need:
                        raise InvalidAlgebra(f"component {key} -> {o} lowers the filtration weight")

    @property
    def arity_zero(self) -> LinComb:
        return dict(self.components.get(0, {}).get((), {}))

    def without_arity_zero(self) -> "InftyMorphism":
        return InftyMorphism(self.source, self.target, restrict(self.components, arities=[n for n in self.components if n]))

    def with_arity_zero(self, b: LinComb) -> "InftyMorphism":
        comps = {n: t for n, t in self.components.items() if n}
        if b:
            comps[0] = {(): dict(b)}
        return InftyMorphism(self.source, self.target, comps)

    def value_at(self, a) -> LinComb:
        """f(a) = sum_k 1/k! f_k(a^k) for a of degree 0 and weight >= 1."""
        a = _as_lc(self.source, a)
        return dict(sym_twist(self.source, self.components, a).get(0, {}).get((), {}))


def identity_isotopy(mod: GradedModuleSpec) -> InftyMorphism:
    return InftyMorphism(mod, mod, {1: {(i,): {i: Fraction(1)} for i in range(mod.dim)}})


def strict_morphism(source: GradedModuleSpec, target: GradedModuleSpec, f1: dict) -> InftyMorphism:
    """A morphism with only an arity-one component, given as {source index: {target index: c}}."""
    return InftyMorphism(source, target, {1: {(i,): dict(v) for i, v in f1.items() if v}})


def infty_compose(g: InftyMorphism, f: InftyMorphism, max_arity: int | None = None) -> InftyMorphism:
    """g (circle) f: (g f)_n = sum_k 1/k! g_k(f, ..., f) over unshuffles, f_0 insertions included."""
    if f.target != g.source:
        raise SourceTargetMismatch("target of f is not the source of g")
    N = f.source.arity_cap if max_arity is None else max_arity
    comps = sym_circle(f.source, g.components, f.components, N, target=f.target)
    return InftyMorphism(f.source, g.target, comps)


def morphism_residual(f: InftyMorphism, alpha: CurvedLInftyAlgebra, beta: CurvedLInftyAlgebra) -> Maps:
    """f * alpha - beta (circle) f up to the source arity cap and weight."""
    if alpha.module != f.source or beta.module != f.target:
        raise SourceTargetMismatch("structures do not live on the morphism's modules")
    N = f.source.arity_cap
    lhs = sym_star(f.source, f.components, alpha.maps, max_arity=N)
    rhs = sym_circle(f.source, beta.maps, f.components, N, target=f.target)
    return add_maps(lhs, rhs, -1)


def is_infty_morphism(f: InftyMorphism, alpha: CurvedLInftyAlgebra, beta: CurvedLInftyAlgebra) -> bool:
    return not morphism_residual(f, alpha, beta)


def twist_morphism(
    f: InftyMorphism,
    a,
    alpha: CurvedLInftyAlgebra | None = None,
    beta: CurvedLInftyAlgebra | None = None,
) -> tuple[InftyMorphism, LinComb]:
    """(f^a - f(a), f(a)) with f^a_n = sum_k 1/k! f_{k+n}(a^k, -).

    When the structures are given, the curvature relation
    beta^{f(a)}_0 = sum_k 1/k! f_{k+1}(a^k, alpha^a_0) is checked.
    """
    a = _as_lc(f.source, a)
    comps = sym_twist(f.source, f.components, a)
    b = dict(comps.get(0, {}).get((), {}))
    out = InftyMorphism(f.source, f.target, {n: t for n, t in comps.items() if n})
    if alpha is not None and beta is not None:
        ta, tb = twist_linfty(alpha, a), twist_linfty(beta, b)
        lhs = tb.curvature
        rhs: LinComb = {}
        theta = ta.curvature
        for key, v in out.components.get(1, {}).items():
            c = theta.get(key[0])
            if c:
                for o, x in v.items():
                    rhs[o] = rhs.get(o, 0) + c * x
        rhs = {k: v for k, v in rhs.items() if v}
        if lhs != rhs:
            raise FormulaMismatch("curvature relation for the twisted morphism fails")
    return out, b


def dolgushev_rogers_compose(G: InftyMorphism, F: InftyMorphism) -> tuple[LinComb, InftyMorphism]:
    """Compose c + g after b + f, splitting off the arity-zero parts.

    Computes (c + g(b)) + (g^b - g(b)) (circle) f and checks it against the plain
    composite (c + g) (circle) (b + f).  Returns (c + g(b), composite).
    """
    if F.target != G.source:
        raise SourceTargetMismatch("target of F is not the source of G")
    b = F.arity_zero
    f = F.without_arity_zero()
    g_twisted, gb = twist_morphism(G, b)
    split = infty_compose(g_twisted, f).with_arity_zero(gb)
    direct = infty_compose(G, F)
    if split.components != direct.components:
        raise FormulaMismatch("the split composition disagrees with the direct one")
    return gb, direct
