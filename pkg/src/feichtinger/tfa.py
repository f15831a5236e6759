"""Short-time Fourier transform and the S0 norm family.

All transforms are exact finite sums evaluated with vectorized numpy; the
time-frequency plane ``G x Ghat`` carries the product weight
``w_G * w_Ghat = 1/|G|``.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .checks import RTOL, Check, equality, inequality
from .groups import GroupSpec, PhasePoint, dual_group, phase_space
from .signals import (
    INF,
    PLike,
    Signal,
    a_norm,
    asym_coord,
    conjugate,
    constant,
    convolve,
    delta,
    fourier,
    inner,
    involution,
    lp_norm,
    multiply,
    partial_fourier_2,
    tensor,
    tf_shift,
    _lp,
)

__all__ = [
    "NormReport",
    "stft",
    "stft_two_path",
    "stft_adjoint",
    "s0_norm",
    "norm_symmetries_check",
    "equivalence_constants",
    "equivalence_check",
    "embedding_constant",
    "s0_embedding_inequalities_check",
    "moyal_orthogonality",
    "stft_product_inequality",
    "well_definedness_check",
    "pairing_plane",
    "mixed_norm",
    "modulation_norm",
    "uncertainty_minimal_measure",
    "canonical_atomic_coefficients",
    "synthesize",
    "synthesis_matrix",
    "BPResult",
    "atomic_norm_bp",
    "minimality_instance_check",
    "banach_algebra_check",
    "tensor_norm_identity",
    "discrete_compact_check",
    "delta_window",
    "constant_window",
    "subgroup_window",
    "gaussian_window",
]

METHODS = ("stft", "convolution", "fourier-algebra")
_ALIASES = {"conv": "convolution", "fa": "fourier-algebra", "fourier_algebra": "fourier-algebra"}


def _same(f: Signal, g: Signal) -> GroupSpec:
    if f.group.factors != g.group.factors:
        raise ValueError(f"group mismatch: {f.group} vs {g.group}")
    return f.group


def _plane_weight(G: GroupSpec) -> float:
    return float(G.weight * dual_group(G).weight)


# STFT -------------------------------------------------------------------
def stft(f: Signal, g: Signal) -> Signal:
    """``V_g f(x, omega) = <f, E_omega T_x g>`` as a signal on ``G x Ghat``.

    Parameters
    ----------
    f, g : Signal
        Analysed signal and window on the same group.

    Returns
    -------
    Signal
        Values indexed by ``(x, omega)``, ``x`` coordinates first.
    """
    G = _same(f, g)
    D = G.difference_table()  # D[x, s] = s - x
    prod = f.values[None, :] * np.conj(g.values[D])
    out = np.fft.fftn(prod.reshape((G.order,) + G.factors), axes=tuple(range(1, G.rank + 1)))
    return Signal(phase_space(G), out.reshape(-1) * float(G.weight))


def stft_two_path(f: Signal, g: Signal) -> Signal:
    """The same transform computed as ``F_2 tau_a (f (x) conj g)``."""
    G = _same(f, g)
    return partial_fourier_2(asym_coord(tensor(f, conjugate(g)), G), G, G)


def stft_adjoint(F: Signal, g: Signal) -> Signal:
    """``V_g^* F = sum_chi F(chi) pi(chi) g w_{G x Ghat}``."""
    G = g.group
    if F.group.factors != G.factors + G.factors:
        raise ValueError("F must live on the phase space of the window's group")
    N = G.order
    grid = F.values.reshape((N,) + G.factors)
    A = np.fft.ifftn(grid, axes=tuple(range(1, G.rank + 1))).reshape(N, N) * N  # sum_omega F omega(s)
    D = G.difference_table()
    out = np.sum(g.values[D] * A, axis=0) * _plane_weight(G)
    return Signal(G, out)


# S0 norm ----------------------------------------------------------------
@dataclass(frozen=True)
class NormReport:
    """One evaluation of ``||f||_{S0, g}``."""

    method: str
    value: float
    group: GroupSpec
    window_id: str


def _window_id(g: Signal) -> str:
    return hashlib.sha1(np.ascontiguousarray(g.values).tobytes()).hexdigest()[:12]


def _s0_stft(f: Signal, g: Signal) -> float:
    return lp_norm(stft(f, g), 1)


def _s0_convolution(f: Signal, g: Signal) -> float:
    # sum_omega ||E_omega f * g^dagger||_1 w_Ghat
    G = f.group
    from .groups import character_matrix

    rows = character_matrix(G) * f.values[None, :]
    axes = tuple(range(1, G.rank + 1))
    gd = np.fft.fftn(involution(g).grid)
    conv = np.fft.ifftn(np.fft.fftn(rows.reshape((G.order,) + G.factors), axes=axes) * gd, axes=axes)
    conv *= float(G.weight)
    l1 = np.abs(conv).reshape(G.order, -1).sum(axis=1) * float(G.weight)
    return float(l1.sum() * float(dual_group(G).weight))


def _s0_fourier_algebra(f: Signal, g: Signal) -> float:
    # sum_x ||f . T_x conj(g)||_A w_G
    G = f.group
    D = G.difference_table()
    rows = f.values[None, :] * np.conj(g.values[D])
    axes = tuple(range(1, G.rank + 1))
    hat = np.fft.fftn(rows.reshape((G.order,) + G.factors), axes=axes) * float(G.weight)
    a = np.abs(hat).reshape(G.order, -1).sum(axis=1) * float(dual_group(G).weight)
    return float(a.sum() * float(G.weight))


_ROUTES = {"stft": _s0_stft, "convolution": _s0_convolution, "fourier-algebra": _s0_fourier_algebra}


def s0_norm(f: Signal, g: Signal, method: str = "stft") -> NormReport:
    """``||f||_{S0, g}`` by one of three independent routes.

    Parameters
    ----------
    f, g : Signal
        Signal and non-zero window on the same group.
    method : {"stft", "convolution", "fourier-algebra"}
        ``stft`` sums ``|V_g f|``; ``convolution`` sums
        ``||E_omega f * g^dagger||_1`` over ``omega``; ``fourier-algebra`` sums
        ``||f . T_x conj(g)||_A`` over ``x``.

    Raises
    ------
    ValueError
        If the window is zero or the method is unknown.
    """
    G = _same(f, g)
    if g.is_zero():
        raise ValueError("the window must be non-zero")
    method = _ALIASES.get(method, method)
    if method not in _ROUTES:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    return NormReport(method, _ROUTES[method](f, g), G, _window_id(g))


def _n(f: Signal, g: Signal) -> float:
    return _s0_stft(f, g)


def norm_symmetries_check(
    f: Signal, g: Signal, nu1: PhasePoint, nu2: PhasePoint, rtol: float = RTOL
) -> list[Check]:
    """Symmetry and shift invariance of ``||f||_{S0, g}``."""
    base = _n(f, g)
    pairs = {
        "swap f and g": _n(g, f),
        "conjugate both": _n(conjugate(f), conjugate(g)),
        "involution both": _n(involution(f), involution(g)),
        "fourier both": _n(fourier(f), fourier(g)),
        "tf shift invariance": _n(tf_shift(f, nu1), tf_shift(g, nu2)),
    }
    return [equality(name, val, base, rtol) for name, val in pairs.items()]


def equivalence_constants(g1: Signal, g2: Signal) -> tuple[float, float]:
    """``(c, C)`` with ``c ||f||_{g2} <= ||f||_{g1} <= C ||f||_{g2}``."""
    if g1.is_zero() or g2.is_zero():
        raise ValueError("windows must be non-zero")
    c = lp_norm(g1, 2) ** 2 / _n(g2, g1)
    C = _n(g1, g2) / lp_norm(g2, 2) ** 2
    return c, C


def equivalence_check(f: Signal, g1: Signal, g2: Signal, rtol: float = RTOL) -> list[Check]:
    c, C = equivalence_constants(g1, g2)
    n1, n2 = _n(f, g1), _n(f, g2)
    return [
        inequality("equivalence lower", c * n2, n1, rtol),
        inequality("equivalence upper", n1, C * n2, rtol),
    ]


def _inv_p(p: PLike) -> float:
    return 0.0 if p is INF else 1.0 / float(p)


def _conjugate_exponent(p: PLike) -> PLike:
    if p is INF:
        return 1
    p = float(p)
    return INF if p == 1 else p / (p - 1)


def embedding_constant(g: Signal, p: PLike) -> float:
    """``c = ||g||_1^{-1+1/p} ||g||_inf^{-1/p}`` with ``||f||_p <= c ||f||_{S0,g}``."""
    ip = _inv_p(p)
    return lp_norm(g, 1) ** (-1 + ip) * lp_norm(g, INF) ** (-ip)


def s0_embedding_inequalities_check(
    f: Signal, g: Signal, ps: Sequence[PLike] = (1, 2, 4, INF), slack: float = 1e-12
) -> list[Check]:
    """Lebesgue, Fourier-side and inner-product bounds in terms of ``||V_g f||_1``.

    Inequalities are checked with relative slack ``slack``.
    """
    V = stft(f, g)
    s0 = lp_norm(V, 1)
    fh, gh = fourier(f), fourier(g)
    out: list[Check] = []
    for p in ps:
        q = _conjugate_exponent(p)
        tag = "inf" if p is INF else f"{float(p):g}"
        out.append(inequality(f"lp embedding p={tag}", lp_norm(f, p), embedding_constant(g, p) * s0, slack))
        out.append(inequality(f"fourier lp embedding p={tag}", lp_norm(fh, p), embedding_constant(gh, p) * s0, slack))
        out.append(inequality(f"lp window product p={tag}", lp_norm(f, p) * lp_norm(g, q), s0, slack))
        out.append(inequality(f"fourier window product p={tag}", lp_norm(fh, p) * lp_norm(gh, q), s0, slack))
        if p is INF or float(p) >= 2:
            out.append(inequality(f"lp fourier-window product p={tag}", lp_norm(f, p) * lp_norm(gh, p), s0, slack))
        out.append(inequality(f"stft lp p={tag}", lp_norm(V, p), s0, slack))
    out.append(inequality("inner product", abs(inner(f, g)), s0, slack))
    return out


def moyal_orthogonality(f1: Signal, f2: Signal, g1: Signal, g2: Signal) -> tuple[complex, complex]:
    """``(<V_{g1} f1, V_{g2} f2>, <g2, g1> <f1, f2>)``."""
    return inner(stft(f1, g1), stft(f2, g2)), inner(g2, g1) * inner(f1, f2)


def stft_product_inequality(
    f1: Signal, f2: Signal, g1: Signal, g2: Signal, nu: PhasePoint
) -> tuple[float, float]:
    """``|<g1,g2>| |V_{f2} f1(nu)|`` against ``sum_chi |V_{g1}f1(chi) V_{g2}f2(chi - nu)| w``."""
    G = _same(f1, f2)
    P = phase_space(G)
    nu_idx = P.index(nu.x.coords + nu.omega.coords)
    lhs = abs(inner(g1, g2)) * abs(stft(f1, f2).values[nu_idx])
    shifted = stft(f2, g2).values[P.shift_index(nu.x.coords + nu.omega.coords, -1)]
    rhs = float(np.sum(np.abs(stft(f1, g1).values * shifted)) * float(P.weight))
    return float(lhs), rhs


def well_definedness_check(f: Signal, g: Signal, slack: float = 1e-12) -> Check:
    """``|<f,g>| ||V_g f||_1 <= ||V_f f||_1 ||V_g g||_1``."""
    return inequality("well-definedness bound", abs(inner(f, g)) * _n(f, g), _n(f, f) * _n(g, g), slack)


# modulation spaces ------------------------------------------------------
def pairing_plane(density: Signal, g: Signal) -> np.ndarray:
    """``(E_omega T_x g, iota(h))`` for every ``(x, omega)``, bilinear pairing.

    Returned as an ``(|G|, |G|)`` array indexed ``[x, omega]``.
    """
    G = _same(density, g)
    D = G.difference_table()
    rows = g.values[D] * density.values[None, :]
    grid = rows.reshape((G.order,) + G.factors)
    out = np.fft.ifftn(grid, axes=tuple(range(1, G.rank + 1))) * G.order
    return out.reshape(G.order, G.order) * float(G.weight)


def mixed_norm(V: np.ndarray, G: GroupSpec, p: PLike, q: PLike) -> float:
    """``(sum_omega (sum_x |V|^p w_G)^{q/p} w_Ghat)^{1/q}`` for ``V[x, omega]``."""
    inner_norms = np.array([_lp(V[:, k], float(G.weight), p) for k in range(V.shape[1])])
    return _lp(inner_norms, float(dual_group(G).weight), q)


def modulation_norm(obj, g: Signal, p: PLike, q: PLike) -> float:
    """``M^{p,q}`` norm.

    For a :class:`Signal` this is the mixed norm of ``V_g f``; for a
    functional (anything with a ``density`` attribute) it is the mixed norm of
    ``(E_omega T_x g, sigma)``. The two agree when ``g`` is real-valued.
    """
    if isinstance(obj, Signal):
        G = _same(obj, g)
        V = stft(obj, g).values.reshape(G.order, G.order)
    else:
        G = _same(obj.density, g)
        V = pairing_plane(obj.density, g)
    return mixed_norm(V, G, p, q)


def uncertainty_minimal_measure(f: Signal, g: Signal, eps: float) -> float:
    """Measure of the greedy smallest set capturing ``(1 - eps)`` of ``|V_g f|``.

    Points are taken by decreasing ``|V_g f|``; ties go to the smaller
    phase-point index.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if f.is_zero() or g.is_zero():
        raise ValueError("f and g must be non-zero")
    V = np.abs(stft(f, g).values)
    order = np.argsort(-V, kind="stable")
    cum = np.cumsum(V[order])
    target = (1 - eps) * cum[-1] * (1 - 1e-13)
    count = int(np.searchsorted(cum, target, side="left")) + 1
    return count * _plane_weight(f.group)


# atomic decompositions --------------------------------------------------
def canonical_atomic_coefficients(f: Signal, g: Signal) -> Signal:
    """``c_chi = w_{G x Ghat} ||g||_2^{-2} V_g f(chi)``; ``sum c_chi pi(chi) g = f``."""
    if g.is_zero():
        raise ValueError("the window must be non-zero")
    scale = _plane_weight(f.group) / lp_norm(g, 2) ** 2
    return stft(f, g) * scale


def synthesize(coeffs: Signal, g: Signal) -> Signal:
    """``sum_chi c_chi pi(chi) g`` (unweighted sum over the plane)."""
    return stft_adjoint(coeffs, g) * (1.0 / _plane_weight(g.group))


def synthesis_matrix(g: Signal) -> np.ndarray:
    """Columns are ``pi(chi) g`` in phase-point index order."""
    G = g.group
    from .groups import character_matrix

    D = G.difference_table()
    chars = character_matrix(G)  # [omega, s]
    # A[s, x, omega] = omega(s) g(s - x)
    A = g.values[D].T[:, :, None] * chars.T[:, None, :]
    return A.reshape(G.order, G.order * G.order)


@dataclass(frozen=True)
class BPResult:
    """Outcome of the basis-pursuit solver.

    ``value`` is the l1 cost of a feasible coefficient vector, hence an upper
    bound for the atomic norm; ``lower`` is a certified dual lower bound.
    """

    value: float
    lower: float
    iterations: int
    residual: float
    converged: bool
    coefficients: np.ndarray

    @property
    def gap(self) -> float:
        return self.value - self.lower

    @property
    def status(self) -> str:
        return "converged" if self.converged else "max-iterations"


def _soft(z: np.ndarray, t: float) -> np.ndarray:
    mag = np.abs(z)
    shrink = np.maximum(mag - t, 0.0)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(mag > 0, z * (shrink / np.where(mag > 0, mag, 1.0)), 0.0)


def atomic_norm_bp(
    f: Signal, g: Signal, tol: float = 1e-8, max_iter: int = 100_000, step: Optional[float] = None
) -> BPResult:
    """Approximate ``inf ||c||_1`` subject to ``sum c_chi pi(chi) g = f``.

    Douglas-Rachford splitting between the affine constraint and the complex
    l1 norm. The frame identity ``A A^* = alpha I`` makes the projection onto
    the constraint set explicit.

    Parameters
    ----------
    f, g : Signal
    tol : float
        Stop when the l1 iterate's relative constraint residual and its
        distance to the feasible iterate both fall below ``tol``.
    max_iter : int
        Iteration cap; reaching it yields ``converged=False``.
    step : float, optional
        Proximal step; defaults to a scale derived from the canonical solution.
    """
    if g.is_zero():
        raise ValueError("the window must be non-zero")
    b = f.values
    A = synthesis_matrix(g)
    alpha = float(np.real(np.vdot(A[:, 0], A[:, 0]))) * f.group.order
    AH = A.conj().T

    def project(c: np.ndarray) -> np.ndarray:
        return c - AH @ (A @ c - b) / alpha

    c0 = AH @ b / alpha  # least-squares solution: the canonical coefficients
    best = c0
    best_val = float(np.abs(c0).sum())
    if not np.any(b):
        return BPResult(0.0, 0.0, 0, 0.0, True, np.zeros_like(c0))
    scale = max(np.linalg.norm(b), 1e-300)
    t = step if step is not None else best_val / c0.size
    y = c0.copy()
    lower = 0.0
    converged = False
    it = 0
    resid = np.inf
    for it in range(1, max_iter + 1):
        x = project(y)
        z = _soft(2 * x - y, t)
        y = y + z - x
        if it % 10 == 0 or it == max_iter:
            resid = float(np.linalg.norm(A @ z - b) / scale)
            feas = project(z)
            val = float(np.abs(feas).sum())
            if val < best_val:
                best, best_val = feas, val
            # dual certificate: A^* u approximates a subgradient of the l1 norm
            u = (b - A @ y) / (alpha * t)
            dual_inf = float(np.abs(AH @ u).max())
            if dual_inf > 0:
                lower = max(lower, float(np.real(np.vdot(u, b))) / dual_inf)
            if resid <= tol and np.linalg.norm(z - x) <= tol * max(1.0, np.linalg.norm(x)):
                converged = True
                break
    return BPResult(best_val, min(lower, best_val), it, resid, converged, best)


# further inequalities ---------------------------------------------------
def minimality_instance_check(f: Signal, g: Signal, p: PLike) -> tuple[float, float]:
    """``||f||_p`` against ``||g||_p ||g||_2^{-2} ||f||_{S0,g}``."""
    return lp_norm(f, p), lp_norm(g, p) * _n(f, g) / lp_norm(g, 2) ** 2


def banach_algebra_check(f1: Signal, f2: Signal, g: Signal, rtol: float = 1e-12) -> list[Check]:
    """Convolution and pointwise algebra bounds and the two ideal bounds."""
    n1, n2 = _n(f1, g), _n(f2, g)
    return [
        inequality("convolution algebra", _n(convolve(f1, f2), g), n1 * n2 / lp_norm(g, INF), rtol),
        inequality("pointwise algebra", _n(multiply(f1, f2), g), n1 * n2 / lp_norm(fourier(g), INF), rtol),
        inequality("L1 convolution ideal", _n(convolve(f1, f2), g), lp_norm(f1, 1) * n2, rtol),
        inequality("A pointwise ideal", _n(multiply(f1, f2), g), a_norm(f1) * n2, rtol),
    ]


def tensor_norm_identity(f1: Signal, f2: Signal, g1: Signal, g2: Signal, rtol: float = RTOL) -> list[Check]:
    """Tensor products and STFTs multiply S0 norms.

    The STFT clause is evaluated only when both pairs live on the same group.
    """
    rhs = _n(f1, g1) * _n(f2, g2)
    out = [equality("tensor product", _n(tensor(f1, f2), tensor(g1, g2)), rhs, rtol)]
    if f1.group.factors == f2.group.factors:
        lhs = _n(stft(f1, f2), stft(g1, g2))
        out.append(equality("stft of stft", lhs, rhs, rtol))
    return out


def discrete_compact_check(f: Signal, rtol: float = 1e-10) -> list[Check]:
    """Counting measure with ``delta_0`` gives ``||f||_1``; normalized measure with ``1`` gives ``||f||_A``."""
    G = f.group
    counting = Signal(G.with_weight(1), f.values)
    normalized = Signal(G.with_weight(Fraction(1, G.order)), f.values)
    return [
        equality("counting, delta window", _n(counting, delta(counting.group)), lp_norm(counting, 1), rtol),
        equality("normalized, constant window", _n(normalized, constant(normalized.group)), a_norm(normalized), rtol),
    ]


# windows ----------------------------------------------------------------
def delta_window(G: GroupSpec) -> Signal:
    return delta(G)


def constant_window(G: GroupSpec) -> Signal:
    return constant(G)


def subgroup_window(H) -> tuple[Signal, bool]:
    """``1_H * 1_H^dagger`` rescaled; ``exact`` when ``mu_G(H) = 1``.

    With ``mu_G(H) = 1`` the result is ``1_H`` and its ``L^1``, ``L^inf``,
    ``A`` and Fourier sup norms are all exactly one. Otherwise the window is
    normalized to sup norm one and flagged as best effort.
    """
    G = H.parent
    ind = np.zeros(G.order, dtype=complex)
    ind[H.index_array] = 1.0
    one_h = Signal(G, ind)
    w = convolve(one_h, involution(one_h))
    exact = H.order * G.weight == 1
    if not exact:
        w = w * (1.0 / lp_norm(w, INF))
    return w, bool(exact)


def gaussian_window(G: GroupSpec, width: float = 1.0, terms: int = 4) -> Signal:
    """Tensor product of periodized Gaussians ``sum_k exp(-pi (x + k n)^2 / (width n))``."""
    vals = np.ones(1)
    for n in G.factors:
        x = np.arange(n)[:, None] + n * np.arange(-terms, terms + 1)[None, :]
        vals = np.multiply.outer(vals, np.exp(-np.pi * x**2 / (width * n)).sum(axis=1)).reshape(-1)
    return Signal(G, vals)
