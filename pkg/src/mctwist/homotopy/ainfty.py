"""Curved A-infinity algebras in four sign conventions, relation checks and twisting.

Classical variants store m_n of degree n - 2 on the module A.  Shifted
variants store maps of degree -1 on sA.  The two pictures are related by
m~_n(sx_1, ..., sx_n) = (-1)^{n(n-1)/2 + sum_i (n-i)|x_i|} s m_n(x_1, ..., x_n),
the degrees |x_i| taken in A.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..errors import InvalidAlgebra, WeightZeroTwist
from .module import (
    GradedModuleSpec,
    LinComb,
    Maps,
    add_maps,
    add_term,
    clean,
    maps_degree_violations,
    maps_from_json,
    maps_to_json,
    maps_weight_violations,
    module_from_json,
    module_to_json,
    nonzero_counts,
    ns_star,
    ns_twist,
    restrict,
)

CLASSICAL_CURVED = "classical-curved"
CLASSICAL = "classical"
SHIFTED_CURVED = "shifted-curved"
SHIFTED = "shifted"
VARIANTS = (CLASSICAL_CURVED, CLASSICAL, SHIFTED_CURVED, SHIFTED)


def is_shifted(variant: str) -> bool:
    return variant in (SHIFTED, SHIFTED_CURVED)


def is_curved(variant: str) -> bool:
    return variant in (SHIFTED_CURVED, CLASSICAL_CURVED)


def curved_variant(variant: str) -> str:
    return SHIFTED_CURVED if is_shifted(variant) else CLASSICAL_CURVED


@dataclass(frozen=True)
class RelationReport:
    """Nonzero residual entries per relation arity; passed iff there are none."""

    residual_counts: dict
    checked_arities: tuple

    @property
    def passed(self) -> bool:
        return not self.residual_counts

    @property
    def worst_arity(self) -> int | None:
        if not self.residual_counts:
            return None
        return max(sorted(self.residual_counts), key=lambda n: self.residual_counts[n])

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checked_arities": list(self.checked_arities),
            "residual_counts": {str(k): v for k, v in sorted(self.residual_counts.items())},
            "worst_arity": self.worst_arity,
        }


def _as_lc(mod: GradedModuleSpec, a) -> LinComb:
    if isinstance(a, Mapping) and all(isinstance(k, str) for k in a):
        return mod.lc(a)
    return {k: Fraction(v) for k, v in dict(a).items() if v}


def transport_sign(base: GradedModuleSpec, key: tuple) -> int:
    """Sign relating classical and shifted structure constants on one input tuple.

    `base` carries the unshifted degrees; the sign is its own inverse.
    """
    n = len(key)
    e = n * (n - 1) // 2
    for i, x in enumerate(key, start=1):
        e += (n - i) * base.degrees[x]
    return -1 if e % 2 else 1


@dataclass(frozen=True)
class CurvedAInftyAlgebra:
    """Structure maps m_n (0 <= n <= arity cap) on a finite filtered module.

    For classical variants `module` carries the degrees of A, for shifted
    ones the degrees of sA.  Every m_n must not lower filtration weight.
    """

    module: GradedModuleSpec
    variant: str
    maps: Maps

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidAlgebra(f"unknown variant {self.variant!r}")
        object.__setattr__(self, "maps", clean(self.maps))
        problems = self.violations()
        if problems:
            raise InvalidAlgebra("; ".join(problems[:5]))

    def map_degree(self, n: int) -> int:
        return -1 if is_shifted(self.variant) else n - 2

    def violations(self) -> list[str]:
        out = []
        for n in self.maps:
            if n > self.module.arity_cap:
                out.append(f"arity {n} above the arity cap")
            out += maps_degree_violations(self.module, {n: self.maps[n]}, self.map_degree(n))
        out += maps_weight_violations(self.module, self.maps)
        if not is_curved(self.variant) and self.maps.get(0):
            out.append("curvature must vanish for an uncurved variant")
        return out

    @property
    def curvature(self) -> LinComb:
        return dict(self.maps.get(0, {}).get((), {}))

    def m(self, n: int) -> dict:
        return self.maps.get(n, {})

    def to_shifted(self) -> "CurvedAInftyAlgebra":
        if is_shifted(self.variant):
            return self
        out: Maps = {}
        for n, t in self.maps.items():
            for key, v in t.items():
                add_term(out, key, v, transport_sign(self.module, key))
        variant = SHIFTED_CURVED if is_curved(self.variant) else SHIFTED
        return CurvedAInftyAlgebra(self.module.shifted(1), variant, out)

    def to_classical(self) -> "CurvedAInftyAlgebra":
        if not is_shifted(self.variant):
            return self
        base = self.module.shifted(-1)
        out: Maps = {}
        for n, t in self.maps.items():
            for key, v in t.items():
                add_term(out, key, v, transport_sign(base, key))
        variant = CLASSICAL_CURVED if is_curved(self.variant) else CLASSICAL
        return CurvedAInftyAlgebra(base, variant, out)

    def to_variant(self, variant: str) -> "CurvedAInftyAlgebra":
        src = self.to_shifted() if is_shifted(variant) else self.to_classical()
        if is_curved(variant) == is_curved(src.variant):
            return src
        if not is_curved(variant) and src.maps.get(0):
            raise InvalidAlgebra("cannot drop a nonzero curvature")
        return CurvedAInftyAlgebra(src.module, variant, src.maps)

    def relation_residuals(self) -> Maps:
        """All relation components that fail, up to arity 2N-1 and total weight W."""
        mod = self.module
        top = 2 * mod.arity_cap - 1
        if is_shifted(self.variant):
            return ns_star(mod, self.maps, self.maps, -1, max_arity=top)
        # sum_{p+q+r=n} (-1)^{pq+r} m_{p+1+r}(id^p (x) m_q (x) id^r), Koszul sign from m_q
        out: Maps = {}
        for q, table in self.maps.items():
            part = ns_star(
                mod,
                self.maps,
                {q: table},
                q - 2,
                max_arity=top,
                extra_sign=lambda p, qq, r: -1 if (p * qq + r) % 2 else 1,
            )
            out = add_maps(out, part)
        return out

    def check(self) -> RelationReport:
        top = 2 * self.module.arity_cap - 1
        return RelationReport(nonzero_counts(self.relation_residuals()), tuple(range(top + 1)))

    def to_json(self) -> dict:
        doc = module_to_json(self.module)
        doc["structure"] = "ainfty"
        doc["variant"] = self.variant
        doc["maps"] = maps_to_json(self.module, self.maps)
        return doc

    @classmethod
    def from_json(cls, doc) -> "CurvedAInftyAlgebra":
        if isinstance(doc, str):
            doc = json.loads(doc)
        mod = module_from_json(doc)
        return cls(mod, doc.get("variant", SHIFTED_CURVED), maps_from_json(mod, doc.get("maps", [])))


def check_curved_ainfty(alg: CurvedAInftyAlgebra) -> RelationReport:
    return alg.check()


def mc_degree(variant: str) -> int:
    return 0 if is_shifted(variant) else -1


def _check_twisting_element(mod: GradedModuleSpec, a: LinComb, variant: str) -> None:
    if any(mod.weights[k] < 1 for k in a):
        raise WeightZeroTwist("twisting elements need filtration weight >= 1")
    if mod.lc_degrees(a) - {mc_degree(variant)}:
        raise InvalidAlgebra(f"twisting elements have degree {mc_degree(variant)} in this variant")


def twist_ainfty(alg: CurvedAInftyAlgebra, a) -> CurvedAInftyAlgebra:
    """m^a_n = sum m_{n+r_0+...+r_n}(a^{r_0}, x_1, a^{r_1}, ..., x_n, a^{r_n}).

    Classical variants carry the sign (-1)^{sum_k k r_k}; in the shifted picture a
    has degree 0 and no signs appear.
    """
    a = _as_lc(alg.module, a)
    _check_twisting_element(alg.module, a, alg.variant)
    maps = ns_twist(alg.module, alg.maps, a, classical_sign=not is_shifted(alg.variant))
    return CurvedAInftyAlgebra(alg.module, curved_variant(alg.variant), maps)


def mc_residual_ainfty(alg: CurvedAInftyAlgebra, a) -> LinComb:
    """theta^a = theta + m_1(a) + m_2(a, a) + ...; zero iff a is Maurer-Cartan."""
    a = _as_lc(alg.module, a)
    _check_twisting_element(alg.module, a, alg.variant)
    arity0 = ns_twist(alg.module, alg.maps, a, classical_sign=not is_shifted(alg.variant))
    return dict(arity0.get(0, {}).get((), {}))


def twist_additivity_check(alg: CurvedAInftyAlgebra, a, b) -> bool:
    a, b = _as_lc(alg.module, a), _as_lc(alg.module, b)
    both = dict(a)
    for k, v in b.items():
        both[k] = both.get(k, 0) + v
    both = {k: v for k, v in both.items() if v}
    return twist_ainfty(twist_ainfty(alg, a), b).maps == twist_ainfty(alg, both).maps


def truncate_arity(alg: CurvedAInftyAlgebra, n: int) -> CurvedAInftyAlgebra:
    return CurvedAInftyAlgebra(alg.module, alg.variant, restrict(alg.maps, max_arity=n))
