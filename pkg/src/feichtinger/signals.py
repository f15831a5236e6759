"""Signals on finite abelian groups and the elementary operators acting on them."""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Union

import numpy as np

from .groups import (
    ElementLike,
    GroupSpec,
    PhasePoint,
    dual_group,
    product_group,
)

__all__ = [
    "Signal",
    "Exponent",
    "INF",
    "delta",
    "constant",
    "random_signal",
    "translate",
    "modulate",
    "tf_shift",
    "reflect",
    "involution",
    "conjugate",
    "convolve",
    "multiply",
    "inner",
    "lp_norm",
    "a_norm",
    "fourier",
    "inverse_fourier",
    "fourier_dft_reference",
    "partial_fourier_1",
    "partial_fourier_2",
    "symplectic_fourier",
    "tensor",
    "asym_coord",
    "asym_coord_inverse",
    "signal_to_json",
    "signal_from_json",
]


class Exponent(Enum):
    """Distinguished exponent values for Lebesgue norms."""

    INF = "inf"


INF = Exponent.INF
PLike = Union[float, int, Exponent]


@dataclass(frozen=True, eq=False)
class Signal:
    """A complex function on ``group``, stored in row-major index order."""

    group: GroupSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.complex128).reshape(-1)
        if vals.size != self.group.order:
            raise ValueError(f"expected {self.group.order} values, got {vals.size}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("signal values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def grid(self) -> np.ndarray:
        """Values reshaped to the factor shape."""
        return self.values.reshape(self.group.factors)

    def __call__(self, x: ElementLike) -> complex:
        el = self.group.element(x)
        return complex(self.values[self.group.index(el.coords)])

    def __add__(self, other: "Signal") -> "Signal":
        _check_same(self, other)
        return Signal(self.group, self.values + other.values)

    def __sub__(self, other: "Signal") -> "Signal":
        _check_same(self, other)
        return Signal(self.group, self.values - other.values)

    def __neg__(self) -> "Signal":
        return Signal(self.group, -self.values)

    def __mul__(self, c: complex) -> "Signal":
        return Signal(self.group, complex(c) * self.values)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not np.any(self.values)


def _check_same(f: Signal, g: Signal) -> None:
    if f.group.factors != g.group.factors:
        raise ValueError(f"group mismatch: {f.group} vs {g.group}")


# builders ---------------------------------------------------------------
def delta(G: GroupSpec, x: ElementLike = 0) -> Signal:
    """Indicator of the single point ``x`` (value 1, not weight-scaled)."""
    vals = np.zeros(G.order, dtype=complex)
    vals[G.index(G.element(x).coords)] = 1.0
    return Signal(G, vals)


def constant(G: GroupSpec, c: complex = 1.0) -> Signal:
    return Signal(G, np.full(G.order, c, dtype=complex))


def random_signal(G: GroupSpec, rng: np.random.Generator) -> Signal:
    """Real and imaginary parts i.i.d. uniform on ``[-1, 1]`` (real drawn first)."""
    re = rng.uniform(-1.0, 1.0, G.order)
    im = rng.uniform(-1.0, 1.0, G.order)
    return Signal(G, re + 1j * im)


# time-frequency shifts --------------------------------------------------
def translate(f: Signal, x: ElementLike) -> Signal:
    """``T_x f(s) = f(s - x)``."""
    el = f.group.element(x)
    return Signal(f.group, f.values[f.group.shift_index(el.coords, -1)])


def _character(G: GroupSpec, omega: ElementLike) -> np.ndarray:
    from .groups import character_matrix

    idx = G.index(G.element(omega).coords)
    return character_matrix(G)[idx]


def modulate(f: Signal, omega: ElementLike) -> Signal:
    """``E_omega f(s) = omega(s) f(s)``."""
    return Signal(f.group, _character(f.group, omega) * f.values)


def tf_shift(f: Signal, chi: PhasePoint) -> Signal:
    """``pi(x, omega) f = E_omega T_x f``."""
    return modulate(translate(f, chi.x), chi.omega)


def reflect(f: Signal) -> Signal:
    """``f^r(x) = f(-x)``."""
    return Signal(f.group, f.values[f.group.negation_index()])


def conjugate(f: Signal) -> Signal:
    return Signal(f.group, np.conj(f.values))


def involution(f: Signal) -> Signal:
    """``f^dagger(x) = conj(f(-x))``."""
    return conjugate(reflect(f))


# products and norms -----------------------------------------------------
def convolve(f: Signal, g: Signal) -> Signal:
    """``(f * g)(x) = sum_s f(s) g(x - s) w_G``."""
    _check_same(f, g)
    out = np.fft.ifftn(np.fft.fftn(f.grid) * np.fft.fftn(g.grid)) * float(f.group.weight)
    return Signal(f.group, out.reshape(-1))


def multiply(f: Signal, g: Signal) -> Signal:
    _check_same(f, g)
    return Signal(f.group, f.values * g.values)


def inner(f: Signal, g: Signal) -> complex:
    """``<f, g> = sum_x f(x) conj(g(x)) w_G``."""
    _check_same(f, g)
    return complex(np.vdot(g.values, f.values) * float(f.group.weight))


def _lp(values: np.ndarray, weight: float, p: PLike) -> float:
    a = np.abs(values)
    if p is INF:
        return float(a.max(initial=0.0))
    p = float(p)
    if p == np.inf:
        raise ValueError("use INF for the sup norm")
    if p < 1:
        raise ValueError("p must be at least 1")
    if p == 1:
        return float(a.sum() * weight)
    return float((np.sum(a**p) * weight) ** (1.0 / p))


def lp_norm(f: Signal, p: PLike) -> float:
    """Weighted ``L^p`` norm; ``p = INF`` gives the maximum modulus."""
    return _lp(f.values, float(f.group.weight), p)


def a_norm(f: Signal) -> float:
    """Fourier algebra norm ``||f||_A = ||fhat||_1`` on ``Ghat``."""
    return lp_norm(fourier(f), 1)


# Fourier transforms -----------------------------------------------------
def fourier(f: Signal) -> Signal:
    """``fhat(omega) = sum_x f(x) conj(omega(x)) w_G``, a signal on ``Ghat``."""
    G = f.group
    out = np.fft.fftn(f.grid) * float(G.weight)
    return Signal(dual_group(G), out.reshape(-1))


def inverse_fourier(F: Signal) -> Signal:
    """``f(x) = sum_omega F(omega) omega(x) w_Ghat``, a signal on the dual of ``F.group``."""
    Gh = F.group
    out = np.fft.ifftn(F.grid) * (Gh.order * float(Gh.weight))
    return Signal(dual_group(Gh), out.reshape(-1))


def fourier_dft_reference(f: Signal) -> Signal:
    """Fourier transform by the explicit character sum (slow reference path)."""
    from .groups import character_matrix

    chars = character_matrix(f.group)
    out = np.conj(chars) @ f.values * float(f.group.weight)
    return Signal(dual_group(f.group), out)


def _split_check(F: Signal, G1: GroupSpec, G2: GroupSpec) -> None:
    if F.group.factors != G1.factors + G2.factors:
        raise ValueError("signal does not live on G1 x G2")


def partial_fourier_2(F: Signal, G1: GroupSpec, G2: GroupSpec) -> Signal:
    """Fourier transform in the second variable: a signal on ``G1 x G2hat``."""
    _split_check(F, G1, G2)
    axes = tuple(range(G1.rank, G1.rank + G2.rank))
    out = np.fft.fftn(F.grid, axes=axes) * float(G2.weight)
    return Signal(product_group(G1, dual_group(G2)), out.reshape(-1))


def partial_fourier_1(F: Signal, G1: GroupSpec, G2: GroupSpec) -> Signal:
    """Fourier transform in the first variable: a signal on ``G1hat x G2``."""
    _split_check(F, G1, G2)
    axes = tuple(range(G1.rank))
    out = np.fft.fftn(F.grid, axes=axes) * float(G1.weight)
    return Signal(product_group(dual_group(G1), G2), out.reshape(-1))


def symplectic_fourier(F: Signal, G: GroupSpec) -> Signal:
    """``F_s F(x, omega) = sum F(t, xi) conj(omega(t)) xi(x) w_G w_Ghat`` on ``G x Ghat``."""
    Gh = dual_group(G)
    _split_check(F, G, Gh)
    k = G.rank
    grid = F.grid
    # forward transform in t gives index omega, inverse transform in xi gives index x
    step = np.fft.fftn(grid, axes=tuple(range(k))) * float(G.weight)
    step = np.fft.ifftn(step, axes=tuple(range(k, 2 * k))) * (G.order * float(Gh.weight))
    # step is indexed (omega, x); swap to (x, omega)
    out = np.moveaxis(step, tuple(range(k)), tuple(range(k, 2 * k)))
    return Signal(F.group, out.reshape(-1))


def tensor(f: Signal, g: Signal) -> Signal:
    """``(f (x) g)(x1, x2) = f(x1) g(x2)`` on the product group."""
    return Signal(product_group(f.group, g.group), np.outer(f.values, g.values).reshape(-1))


def asym_coord(F: Signal, G: GroupSpec) -> Signal:
    """``tau_a F(x, t) = F(t, t - x)`` on ``G x G``."""
    _split_check(F, G, G)
    N = G.order
    D = G.difference_table()  # D[x, t] = t - x
    t = np.broadcast_to(np.arange(N), (N, N))
    M = F.values.reshape(N, N)
    return Signal(F.group, M[t, D].reshape(-1))


def asym_coord_inverse(F: Signal, G: GroupSpec) -> Signal:
    """``tau_a^{-1} F(x, t) = F(x - t, x)``."""
    _split_check(F, G, G)
    N = G.order
    D = G.difference_table()  # D[t, x] = x - t
    x = np.broadcast_to(np.arange(N)[:, None], (N, N))
    M = F.values.reshape(N, N)
    return Signal(F.group, M[D.T, x].reshape(-1))


# serialization ----------------------------------------------------------
def signal_to_json(f: Signal, **extra: Any) -> dict:
    out = {
        "group": {"factors": list(f.group.factors), "weight": str(f.group.weight)},
        "values": [[float(v.real), float(v.imag)] for v in f.values],
    }
    out.update(extra)
    return out


def signal_from_json(data: Union[dict, str]) -> Signal:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        grp = data["group"]
        G = GroupSpec(tuple(grp["factors"]), Fraction(str(grp.get("weight", "1"))))
        vals = np.array([complex(re, im) for re, im in data["values"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed signal JSON: {exc}") from exc
    return Signal(G, vals)
