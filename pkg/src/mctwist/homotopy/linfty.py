"""Shifted curved L-infinity algebras: relation checks, twisting, symmetrization."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from ..errors import InvalidAlgebra
from ..mc.algebra import DG_LIE, FilteredAlgebraSpec
from .ainfty import (
    SHIFTED,
    SHIFTED_CURVED,
    CurvedAInftyAlgebra,
    RelationReport,
    _as_lc,
    _check_twisting_element,
)
from .module import (
    GradedModuleSpec,
    LinComb,
    Maps,
    add_term,
    clean,
    koszul_sort,
    maps_degree_violations,
    maps_from_json,
    maps_to_json,
    maps_weight_violations,
    module_from_json,
    module_to_json,
    nonzero_counts,
    sym_star,
    sym_twist,
    symmetrize_maps,
)

LINFTY_VARIANTS = (SHIFTED_CURVED, SHIFTED)


@dataclass(frozen=True)
class CurvedLInftyAlgebra:
    """Graded symmetric maps l_n of degree -1 on sA, stored on sorted input tuples."""

    module: GradedModuleSpec
    variant: str
    maps: Maps

    def __post_init__(self):
        if self.variant not in LINFTY_VARIANTS:
            raise InvalidAlgebra(f"unknown L-infinity variant {self.variant!r}")
        object.__setattr__(self, "maps", clean(self.maps))
        problems = self.violations()
        if problems:
            raise InvalidAlgebra("; ".join(problems[:5]))

    def violations(self) -> list[str]:
        out = []
        for n, t in self.maps.items():
            if n > self.module.arity_cap:
                out.append(f"arity {n} above the arity cap")
            for key in t:
                s, srt = koszul_sort(self.module, key)
                if srt != key or not s:
                    out.append(f"key {key} is not a sorted tuple without repeated odd entries")
        out += maps_degree_violations(self.module, self.maps, -1)
        out += maps_weight_violations(self.module, self.maps)
        if self.variant == SHIFTED and self.maps.get(0):
            out.append("curvature must vanish for an uncurved variant")
        return out

    @property
    def curvature(self) -> LinComb:
        return dict(self.maps.get(0, {}).get((), {}))

    def relation_residuals(self) -> Maps:
        top = 2 * self.module.arity_cap - 1
        return sym_star(self.module, self.maps, self.maps, max_arity=top)

    def check(self) -> RelationReport:
        top = 2 * self.module.arity_cap - 1
        return RelationReport(nonzero_counts(self.relation_residuals()), tuple(range(top + 1)))

    def to_json(self) -> dict:
        doc = module_to_json(self.module)
        doc["structure"] = "linfty"
        doc["variant"] = self.variant
        doc["maps"] = maps_to_json(self.module, self.maps)
        return doc

    @classmethod
    def from_json(cls, doc) -> "CurvedLInftyAlgebra":
        if isinstance(doc, str):
            doc = json.loads(doc)
        mod = module_from_json(doc)
        raw = maps_from_json(mod, doc.get("maps", []))
        # accept any ordering of inputs and store the sorted representative
        maps: Maps = {}
        for n, t in raw.items():
            for key, v in t.items():
                s, srt = koszul_sort(mod, key)
                if not s:
                    raise InvalidAlgebra(f"repeated odd input in {key}")
                add_term(maps, srt, v, s)
        return cls(mod, doc.get("variant", SHIFTED_CURVED), maps)


def check_curved_linfty(alg: CurvedLInftyAlgebra) -> RelationReport:
    return alg.check()


def twist_linfty(alg: CurvedLInftyAlgebra, a) -> CurvedLInftyAlgebra:
    """l^a_n = sum_k 1/k! l_{k+n}(a^k, -, ..., -) for a of degree 0 and weight >= 1."""
    a = _as_lc(alg.module, a)
    _check_twisting_element(alg.module, a, SHIFTED)
    return CurvedLInftyAlgebra(alg.module, SHIFTED_CURVED, sym_twist(alg.module, alg.maps, a))


def mc_residual_linfty(alg: CurvedLInftyAlgebra, a) -> LinComb:
    """theta^a = sum_k 1/k! l_k(a^k)."""
    return twist_linfty(alg, a).curvature


def symmetrize(alg: CurvedAInftyAlgebra) -> CurvedLInftyAlgebra:
    """l_n = sum over permutations of m_n with Koszul signs, in the shifted picture."""
    sh = alg.to_shifted()
    variant = SHIFTED_CURVED if sh.variant == SHIFTED_CURVED else SHIFTED
    return CurvedLInftyAlgebra(sh.module, variant, symmetrize_maps(sh.module, sh.maps))


def from_dglie(spec: FilteredAlgebraSpec, arity_cap: int = 2) -> CurvedLInftyAlgebra:
    """The shifted L-infinity algebra on sg: l_1(sx) = -s dx, l_2(sx, sy) = (-1)^{|x|} s[x, y].

    With this dictionary a in g is Maurer-Cartan iff sa is, and l^{sa}_1 = -s d^a s^{-1}.
    """
    if spec.kind != DG_LIE:
        raise InvalidAlgebra("from_dglie needs a dg Lie algebra")
    mod = GradedModuleSpec.from_basis(
        [(spec.names[i], spec.degrees[i] + 1, spec.weights[i]) for i in range(spec.dim)],
        spec.W,
        max(arity_cap, 2),
    )
    maps: Maps = {}
    for i in range(spec.dim):
        img = spec.d({i: Fraction(1)})
        if img:
            add_term(maps, (i,), img, -1)
    for i in range(spec.dim):
        for j in range(i, spec.dim):
            s, key = koszul_sort(mod, (i, j))
            if not s:
                continue
            img = spec.bracket({i: Fraction(1)}, {j: Fraction(1)})
            if img:
                add_term(maps, key, img, -1 if spec.degrees[i] % 2 else 1)
    return CurvedLInftyAlgebra(mod, SHIFTED, maps)


def random_curved_linfty(rng, W: int = 6, N: int = 5) -> CurvedLInftyAlgebra:
    """Symmetrization of a random curved A-infinity instance."""
    from .instances import random_curved_ainfty

    return symmetrize(random_curved_ainfty(rng, W, N))
