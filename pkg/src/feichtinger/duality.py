"""Functionals (the dual of S0), their norms, and the kernel correspondence.

In finite dimensions every functional is induced by a density, so a
:class:`Functional` stores one and a provenance tag. The pairing is
bilinear: ``(f, sigma) = sum_x f(x) density(x) w_G``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np

from .checks import RTOL, Check, equality, inequality
from .groups import ElementLike, GroupSpec, Subgroup, dual_group, phase_space, product_group
from .operators import Operator
from .signals import (
    Signal,
    asym_coord,
    convolve,
    fourier,
    lp_norm,
    multiply,
    reflect,
    signal_from_json,
    signal_to_json,
    tensor,
)
from .tfa import _plane_weight, pairing_plane, s0_norm, stft, stft_adjoint, synthesis_matrix

__all__ = [
    "Functional",
    "KINDS",
    "induced",
    "delta_functional",
    "character_functional",
    "haar_on_subgroup",
    "zero_functional",
    "pair",
    "conj_functional",
    "multiply_functional",
    "convolve_functional",
    "minfty_norm",
    "OracleSizeError",
    "DualNormResult",
    "dual_norm_oracle",
    "ORACLE_MAX_ORDER",
    "sandwich_check",
    "delta_bound_check",
    "stft_functional",
    "stft_inversion_check",
    "MembershipResult",
    "s0_membership_check",
    "fourier_functional",
    "banach_adjoint_extend",
    "SmoothingResult",
    "smoothing_check",
    "tensor_functional",
    "KernelFunctional",
    "kernel_to_operator",
    "operator_to_kernel",
    "kernel_pairing_check",
    "compose_kernels",
    "bilinear_from_operator",
    "operator_from_bilinear",
    "functional_to_json",
    "functional_from_json",
]

KINDS = ("induced", "delta", "character", "haar-on-subgroup")
ORACLE_MAX_ORDER = 12


@dataclass(frozen=True, eq=False)
class Functional:
    """A linear functional on signals over ``group``."""

    group: GroupSpec
    density: Signal
    kind: str = "induced"

    def __post_init__(self) -> None:
        if self.density.group.factors != self.group.factors:
            raise ValueError("density does not live on the functional's group")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")

    def __call__(self, f: Signal) -> complex:
        return pair(f, self)

    def __add__(self, other: "Functional") -> "Functional":
        return Functional(self.group, self.density + other.density)

    def __mul__(self, c: complex) -> "Functional":
        return Functional(self.group, self.density * c, self.kind)

    __rmul__ = __mul__


def induced(h: Signal) -> Functional:
    """``iota(h)``: ``f -> sum f h w_G``."""
    return Functional(h.group, h, "induced")


def zero_functional(G: GroupSpec) -> Functional:
    return Functional(G, Signal(G, np.zeros(G.order)), "induced")


def delta_functional(G: GroupSpec, x: ElementLike = 0) -> Functional:
    """Point evaluation; density ``1 / w_G`` at ``x``."""
    vals = np.zeros(G.order, dtype=complex)
    vals[G.index(G.element(x).coords)] = 1.0 / float(G.weight)
    return Functional(G, Signal(G, vals), "delta")


def character_functional(G: GroupSpec, omega: ElementLike) -> Functional:
    """``e_omega``, induced by the character ``omega`` itself."""
    from .groups import character_matrix

    idx = G.index(G.element(omega).coords)
    return Functional(G, Signal(G, character_matrix(G)[idx]), "character")


def haar_on_subgroup(H: Subgroup) -> Functional:
    """``mu_H: f -> sum_{h in H} f(h) w_H``."""
    G = H.parent
    vals = np.zeros(G.order, dtype=complex)
    vals[H.index_array] = float(H.weight / G.weight)
    return Functional(G, Signal(G, vals), "haar-on-subgroup")


def pair(f: Signal, sigma: Functional) -> complex:
    """Bilinear pairing ``(f, sigma)``."""
    if f.group.factors != sigma.group.factors:
        raise ValueError("signal and functional live on different groups")
    return complex(np.dot(f.values, sigma.density.values) * float(sigma.group.weight))


def conj_functional(sigma: Functional) -> Functional:
    """``(f, conj sigma) = conj((conj f, sigma))``."""
    return Functional(sigma.group, Signal(sigma.group, np.conj(sigma.density.values)), sigma.kind)


def multiply_functional(g: Signal, sigma: Functional) -> Functional:
    """``(f, g sigma) = (f g, sigma)``."""
    return Functional(sigma.group, multiply(g, sigma.density))


def convolve_functional(g: Signal, sigma: Functional) -> Functional:
    """``(f, g * sigma) = (f * g^r, sigma)``; the density is ``g * density``."""
    return Functional(sigma.group, convolve(g, sigma.density))


# norms --------------------------------------------------------------------
def minfty_norm(sigma: Functional, g: Signal) -> float:
    """``max_chi |(pi(chi) g, sigma)|`` over the whole phase space."""
    return float(np.abs(pairing_plane(sigma.density, g)).max(initial=0.0))


class OracleSizeError(ValueError):
    """The dual-norm oracle only runs on groups of order at most ``ORACLE_MAX_ORDER``."""


@dataclass(frozen=True)
class DualNormResult:
    """Certified bracket ``lower <= ||sigma||_{S0', g} <= upper``.

    ``lower`` comes from a feasible test signal and ``upper`` from a feasible
    dual certificate, both repaired to exact feasibility before evaluation.
    """

    lower: float
    upper: float
    status: str

    @property
    def value(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def dual_norm_oracle(sigma: Functional, g: Signal, tol: float = 1e-6) -> DualNormResult:
    """``sup { |(f, sigma)| : ||f||_{S0, g} <= 1 }`` by conic programming.

    The primal maximizes ``Re (f, sigma)`` over the unit ball of the STFT
    norm; the dual minimizes ``||u||_inf`` subject to ``K^T u = c``. Both are
    solved with Clarabel through cvxpy.

    Raises
    ------
    OracleSizeError
        If ``|G| > ORACLE_MAX_ORDER``.
    ValueError
        If ``g`` is zero.
    """
    import cvxpy as cp

    G = sigma.group
    if G.order > ORACLE_MAX_ORDER:
        raise OracleSizeError(f"dual-norm oracle limited to |G| <= {ORACLE_MAX_ORDER}, got {G.order}")
    if g.is_zero():
        raise ValueError("the window must be non-zero")
    c = sigma.density.values * float(G.weight)
    if not np.any(c):
        return DualNormResult(0.0, 0.0, "optimal")
    # ||V_g f||_1 = sum |K f| with K[(x, omega), s] = w_ph w_G conj(omega(s) g(s - x))
    K = np.conj(synthesis_matrix(g)).T * (_plane_weight(G) * float(G.weight))

    f = cp.Variable(G.order, complex=True)
    primal = cp.Problem(cp.Maximize(cp.real(c @ f)), [cp.sum(cp.abs(K @ f)) <= 1])
    u = cp.Variable(K.shape[0], complex=True)
    dual = cp.Problem(cp.Minimize(cp.max(cp.abs(u))), [K.T @ u == c])
    status = "optimal"
    try:
        primal.solve(solver=cp.CLARABEL)
        dual.solve(solver=cp.CLARABEL)
    except cp.error.SolverError as exc:
        return DualNormResult(0.0, float("inf"), f"solver-error: {exc}")
    if f.value is None or u.value is None:
        return DualNormResult(0.0, float("inf"), f"not-converged: {primal.status}/{dual.status}")
    fv = np.asarray(f.value)
    fv = fv / max(1.0, float(np.abs(K @ fv).sum()))
    lower = abs(complex(c @ fv))
    uv = np.asarray(u.value)
    uv = uv + np.linalg.lstsq(K.T, c - K.T @ uv, rcond=None)[0]
    upper = float(np.abs(uv).max())
    if upper - lower > tol * max(1.0, upper):
        status = "gap-exceeds-tol"
    return DualNormResult(float(lower), upper, status)


def sandwich_check(sigma: Functional, g: Signal, tol: float = 1e-4) -> list[Check]:
    """``||g||_{S0,g}^{-1} ||sigma||_{M^inf} <= ||sigma||_{S0'} <= ||g||_2^{-2} ||sigma||_{M^inf}``."""
    res = dual_norm_oracle(sigma, g)
    m = minfty_norm(sigma, g)
    lo = m / s0_norm(g, g).value
    hi = m / lp_norm(g, 2) ** 2
    return [
        inequality("minf lower sandwich", lo, res.upper, 0.0, tol, f"lower={lo:.8g} oracle={res.value:.8g}"),
        inequality("minf upper sandwich", res.lower, hi, 0.0, tol, f"oracle={res.value:.8g} upper={hi:.8g}"),
    ]


def delta_bound_check(G: GroupSpec, x: ElementLike, g: Signal, tol: float = 1e-4) -> Check:
    """``||delta_x||_{S0', g} <= ||g||_1^{-1}``."""
    res = dual_norm_oracle(delta_functional(G, x), g)
    return inequality("delta dual-norm bound", res.lower, 1.0 / lp_norm(g, 1), 0.0, tol)


# STFT of functionals ------------------------------------------------------
def stft_functional(sigma: Functional, g: Signal) -> Signal:
    """``chi -> (conj(pi(chi) g), sigma)`` on ``G x Ghat``; equals ``V_g`` of the density."""
    return stft(sigma.density, g)


def stft_inversion_check(sigma: Functional, g: Signal, h: Signal, rtol: float = RTOL) -> Check:
    """``V_h^* Vtilde_g sigma = <h, g> sigma`` at the density level."""
    from .signals import inner

    lhs = stft_adjoint(stft_functional(sigma, g), h).values
    rhs = inner(h, g) * sigma.density.values
    return equality("functional stft inversion", lhs, rhs, rtol)


@dataclass(frozen=True)
class MembershipResult:
    norm: float
    recovered: Signal
    max_pairing_err: float


def s0_membership_check(sigma: Functional, g: Signal) -> MembershipResult:
    """``||Vtilde_g sigma||_1`` and the recovered ``h = ||g||_2^{-2} V_g^* Vtilde_g sigma``.

    ``max_pairing_err`` compares ``(delta_x, iota(h))`` with ``(delta_x, sigma)``
    for every ``x``.
    """
    if g.is_zero():
        raise ValueError("the window must be non-zero")
    V = stft_functional(sigma, g)
    h = stft_adjoint(V, g) * (1.0 / lp_norm(g, 2) ** 2)
    # pairings against all point masses differ by a common factor w_G
    err = float(np.abs(h.values - sigma.density.values).max(initial=0.0)) * float(sigma.group.weight)
    return MembershipResult(lp_norm(V, 1), h, err)


def fourier_functional(sigma: Functional) -> Functional:
    """Extended Fourier transform: ``(h, F sigma) = (F_{Ghat} h, sigma)`` for ``h`` on ``Ghat``.

    The density of the result is the Fourier transform of the density.
    """
    kind = {"delta": "character", "character": "delta"}.get(sigma.kind, "induced")
    if sigma.kind == "haar-on-subgroup":
        kind = "haar-on-subgroup"
    return Functional(dual_group(sigma.group), fourier(sigma.density), kind)


def banach_adjoint_extend(T: Operator, sigma: Functional) -> Functional:
    """``(f2, T~ sigma) = (conj(T^* conj f2), sigma)``; the density is ``T`` applied to the density."""
    if T.antilinear:
        raise ValueError("the extension is defined for linear operators")
    if sigma.group.factors != T.domain.factors:
        raise ValueError("functional is not on the operator's domain")
    return Functional(T.codomain, T(sigma.density))


@dataclass(frozen=True)
class SmoothingResult:
    conv_then_mult: Signal
    mult_then_conv: Signal
    checks: list


def smoothing_check(sigma: Functional, f: Signal, h: Signal, g: Signal, sigma_norm: Optional[float] = None) -> SmoothingResult:
    """Densities of ``(sigma * f) h`` and ``(sigma h) * f`` with their S0 bounds.

    ``sigma_norm`` defaults to the dual-norm oracle on small groups and to the
    upper M^inf surrogate ``||g||_2^{-2} ||sigma||_{M^inf}`` otherwise; both
    dominate the true dual norm.
    """
    G = sigma.group
    d = sigma.density
    a = multiply(convolve(d, f), h)
    b = convolve(multiply(d, h), f)
    if sigma_norm is None:
        if G.order <= ORACLE_MAX_ORDER:
            sigma_norm = dual_norm_oracle(sigma, g).upper
        else:
            sigma_norm = minfty_norm(sigma, g) / lp_norm(g, 2) ** 2
    gg = tensor(g, g)
    bound_a = sigma_norm * s0_norm(asym_coord(tensor(h, f), G), gg).value
    bound_b = sigma_norm * s0_norm(asym_coord(tensor(h, reflect(f)), G), gg).value
    checks = [
        inequality("smoothing (sigma*f)h bound", lp_norm(stft(a, g), 1), bound_a, 1e-6),
        inequality("smoothing (sigma h)*f bound", lp_norm(stft(b, g), 1), bound_b, 1e-6),
    ]
    return SmoothingResult(a, b, checks)


def tensor_functional(s1: Functional, s2: Functional) -> Functional:
    """``(f1 (x) f2, s1 (x) s2) = (f1, s1)(f2, s2)``."""
    kind = s1.kind if s1.kind == s2.kind and s1.kind in ("delta", "induced") else "induced"
    return Functional(product_group(s1.group, s2.group), tensor(s1.density, s2.density), kind)


# kernel theorem -----------------------------------------------------------
@dataclass(frozen=True, eq=False)
class KernelFunctional:
    """A functional on ``G1 x G2`` read as an operator ``G1 -> G2``."""

    G1: GroupSpec
    G2: GroupSpec
    functional: Functional

    def __post_init__(self) -> None:
        if self.functional.group.factors != self.G1.factors + self.G2.factors:
            raise ValueError("kernel must live on G1 x G2")

    @property
    def matrix(self) -> np.ndarray:
        """Density reshaped to ``kappa[x1, x2]``."""
        return self.functional.density.values.reshape(self.G1.order, self.G2.order)

    @classmethod
    def from_density(cls, G1: GroupSpec, G2: GroupSpec, kappa: np.ndarray) -> "KernelFunctional":
        P = product_group(G1, G2)
        return cls(G1, G2, Functional(P, Signal(P, np.asarray(kappa).reshape(-1))))


def kernel_to_operator(K: KernelFunctional) -> Operator:
    """``(T f1)(x2) = sum_{x1} f1(x1) kappa(x1, x2) w_{G1}``."""
    return Operator(K.G1, K.G2, K.matrix.T * float(K.G1.weight), name="kernel operator")


def operator_to_kernel(T: Operator) -> KernelFunctional:
    if T.antilinear:
        raise ValueError("only linear operators have kernels")
    return KernelFunctional.from_density(T.domain, T.codomain, T.matrix.T / float(T.domain.weight))


def kernel_pairing_check(K: KernelFunctional, f1: Signal, f2: Signal, rtol: float = RTOL) -> Check:
    """``(f2, T f1) = (f1 (x) f2, sigma)``."""
    T = kernel_to_operator(K)
    lhs = pair(f2, induced(T(f1)))
    rhs = pair(tensor(f1, f2), K.functional)
    return equality("kernel pairing identity", lhs, rhs, rtol)


def compose_kernels(K1: KernelFunctional, K2: KernelFunctional) -> KernelFunctional:
    """Kernel of ``T2 o T1``: ``kappa(x1, x3) = sum_{x2} kappa1(x1, x2) kappa2(x2, x3) w_{G2}``."""
    if K1.G2.factors != K2.G1.factors:
        raise ValueError("kernels are not composable")
    kappa = K1.matrix @ K2.matrix * float(K1.G2.weight)
    return KernelFunctional.from_density(K1.G1, K2.G2, kappa)


def bilinear_from_operator(T: Operator, G1: GroupSpec, G2: GroupSpec) -> Callable[[Signal, Signal], Signal]:
    """``A(f1, f2) = T(f1 (x) f2)`` for ``T`` defined on ``G1 x G2``."""
    if T.domain.factors != G1.factors + G2.factors:
        raise ValueError("operator is not defined on G1 x G2")
    return lambda f1, f2: T(tensor(f1, f2))


def operator_from_bilinear(
    A: Callable[[Signal, Signal], Signal], G1: GroupSpec, G2: GroupSpec, codomain: GroupSpec
) -> Operator:
    """The unique linear ``T`` on ``G1 x G2`` with ``T(f1 (x) f2) = A(f1, f2)``.

    Built from the values of ``A`` on point-mass tensors.
    """
    P = product_group(G1, G2)
    cols = np.empty((codomain.order, P.order), dtype=complex)
    for i in range(G1.order):
        e1 = np.zeros(G1.order)
        e1[i] = 1.0
        for j in range(G2.order):
            e2 = np.zeros(G2.order)
            e2[j] = 1.0
            cols[:, i * G2.order + j] = A(Signal(G1, e1), Signal(G2, e2)).values
    return Operator(P, codomain, cols, name="from bilinear")


# serialization ------------------------------------------------------------
def functional_to_json(sigma: Functional) -> dict:
    return signal_to_json(sigma.density, kind=sigma.kind)


def functional_from_json(data: Union[dict, str]) -> Functional:
    if isinstance(data, str):
        data = json.loads(data)
    h = signal_from_json(data)
    kind = data.get("kind", "induced") if isinstance(data, dict) else "induced"
    if kind not in KINDS:
        raise ValueError(f"unknown functional kind {kind!r}")
    return Functional(h.group, h, kind)
