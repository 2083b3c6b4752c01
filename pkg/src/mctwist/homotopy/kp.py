"""Gauge trivialization of a curved A-infinity algebra whose curvature has a dual functional.

In the shifted picture we look for lam = (lam_2, lam_3, ...) with

    (1 + lam) * alpha = alpha_0 (circle) (1 + lam) = alpha_0,

that is alpha_n + sum_{p >= 2} (lam_p * alpha)_n = 0 for n >= 1.  The unknown
lam_{n+1} enters arity n only through D(lam_{n+1}) = sum_i lam_{n+1} o_i theta,
and h(g)(x_0, x_1, ..., x_n) = theta*(x_0) g(x_1, ..., x_n) satisfies hD + Dh = id,
so lam_{n+1} = h(rhs_n).

The computation runs on the finite module without dropping heavy tensors,
since lam need not preserve the filtration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import CurvatureNotUnital, InvalidAlgebra
from .ainfty import CurvedAInftyAlgebra, _as_lc
from .module import GradedModuleSpec, LinComb, Maps, add_maps, add_term, clean, ns_star, restrict

NO_BOUND = 10**9


def _project(mod: GradedModuleSpec, phi: LinComb, degree: int) -> LinComb:
    return {k: v for k, v in phi.items() if mod.degrees[k] == degree}


def insert_curvature(mod: GradedModuleSpec, g: Maps, theta: LinComb) -> Maps:
    """D(g) = sum_i g o_i theta with the Koszul sign of theta (odd) passing earlier inputs."""
    return ns_star(mod, g, {0: {(): theta}}, -1, bound=NO_BOUND)


def contracting_homotopy(mod: GradedModuleSpec, g: Maps, theta_dual: LinComb) -> Maps:
    """h(g)(x_0, x) = theta*(x_0) g(x)."""
    out: Maps = {}
    for t in g.values():
        for key, v in t.items():
            for e, c in theta_dual.items():
                add_term(out, (e,) + key, v, c)
    return clean(out)


@dataclass(frozen=True)
class InftyIsotopy:
    """The components lam_2, lam_3, ... of an isotopy 1 + lam in the shifted picture."""

    module: GradedModuleSpec
    components: Maps

    def is_zero(self) -> bool:
        return not self.components


def _setup(alg: CurvedAInftyAlgebra, theta_dual) -> tuple[CurvedAInftyAlgebra, LinComb, LinComb]:
    sh = alg.to_shifted()
    mod = sh.module
    theta = sh.curvature
    if not theta:
        raise CurvatureNotUnital("the curvature is zero")
    phi = _as_lc(mod, theta_dual)
    phi = _project(mod, phi, -1)
    value = sum((phi.get(k, 0) * v for k, v in theta.items()), Fraction(0))
    if value != 1:
        raise CurvatureNotUnital(f"theta_dual(theta) = {value}, expected 1")
    return sh, theta, phi


def kp_trivialize(alg: CurvedAInftyAlgebra, theta_dual) -> InftyIsotopy:
    """lam with (1 + lam) * alpha = (theta, 0, 0, ...) in arities 0..N (N the arity cap).

    theta_dual is a functional on the shifted module, {basis: value}; only its
    values on degree -1 elements (the degree of theta) are used.  The result
    has components of arities 2..N+1.
    """
    sh, theta, phi = _setup(alg, theta_dual)
    mod = sh.module
    N = mod.arity_cap
    alpha = sh.maps
    lam: Maps = {}
    for n in range(1, N + 1):
        rhs: Maps = {}
        if alpha.get(n):
            rhs[n] = {k: {o: -c for o, c in v.items()} for k, v in alpha[n].items()}
        if lam:
            partial = ns_star(mod, lam, restrict(alpha, arities=[q for q in alpha if q >= 1]), -1, max_arity=n, bound=NO_BOUND)
            rhs = add_maps(rhs, restrict(partial, arities=[n]), -1)
        step = contracting_homotopy(mod, rhs, phi)
        lam = add_maps(lam, step)
    return InftyIsotopy(mod, lam)


def kp_residual(alg: CurvedAInftyAlgebra, lam: InftyIsotopy) -> Maps:
    """(1 + lam) * alpha - alpha_0 in arities 0..N; empty iff the trivialization holds."""
    sh = alg.to_shifted()
    mod = sh.module
    N = mod.arity_cap
    lhs = add_maps(sh.maps, ns_star(mod, lam.components, sh.maps, -1, max_arity=N, bound=NO_BOUND))
    lhs = restrict(lhs, max_arity=N)
    return add_maps(lhs, {0: {(): sh.curvature}}, -1) if sh.curvature else lhs


def homotopy_identity_residual(alg: CurvedAInftyAlgebra, theta_dual, g: Maps) -> Maps:
    """hD(g) + Dh(g) - g for a map family g on the shifted module."""
    sh, theta, phi = _setup(alg, theta_dual)
    mod = sh.module
    hd = contracting_homotopy(mod, insert_curvature(mod, g, theta), phi)
    dh = insert_curvature(mod, contracting_homotopy(mod, g, phi), theta)
    return add_maps(add_maps(hd, dh), g, -1)


def dual_of_curvature(alg: CurvedAInftyAlgebra) -> LinComb:
    """A functional with theta*(theta) = 1: 1/c on the first basis element of theta."""
    sh = alg.to_shifted()
    theta = sh.curvature
    if not theta:
        raise InvalidAlgebra("the curvature is zero")
    k = min(theta)
    return {k: 1 / theta[k]}
