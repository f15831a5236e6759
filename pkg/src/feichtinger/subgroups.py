"""Restriction, periodization and zero extension along a subgroup.

Signals on ``H`` and on ``G/H`` live on :class:`EnumeratedGroup` objects:
an explicit element list with addition table, character table and the
canonically related Haar weights. ``Hhat`` is realized as ``Ghat/H^perp``
and the dual of ``G/H`` as ``H^perp``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .checks import RTOL, Check, equality, inequality
from .groups import (
    GroupSpec,
    Subgroup,
    annihilator,
    character_matrix,
    derive_measures,
    dual_group,
    quotient,
)
from .signals import Signal, fourier, involution, convolve, lp_norm
from .tfa import s0_norm

__all__ = [
    "EnumeratedGroup",
    "EnumSignal",
    "subgroup_space",
    "quotient_space",
    "as_enumerated",
    "restrict",
    "periodize",
    "zero_extend",
    "weil_check",
    "poisson_check",
    "poisson_normalized_check",
    "restriction_fourier_identity",
    "coset_decomposition_norm",
    "coset_decomposition_check",
    "zero_extension_norm_check",
    "periodization_laws_check",
    "intertwining_check",
]


@dataclass(frozen=True, eq=False)
class EnumeratedGroup:
    """A finite abelian group given by tables.

    Attributes
    ----------
    labels : np.ndarray
        Parent-group indices naming the elements (coset representatives for
        quotients).
    add : np.ndarray
        ``add[i, j]`` is the position of ``e_i + e_j``.
    chars : np.ndarray
        ``chars[k, i]`` is the ``k``-th character at element ``i``.
    weight, dual_weight : Fraction
        Haar weight of the group and of its dual.
    """

    name: str
    labels: np.ndarray
    add: np.ndarray = field(repr=False)
    chars: np.ndarray = field(repr=False)
    weight: Fraction
    dual_weight: Fraction

    @property
    def order(self) -> int:
        return len(self.labels)

    @property
    def neg(self) -> np.ndarray:
        return np.argmax(self.add == 0, axis=1)

    @property
    def sub(self) -> np.ndarray:
        """``sub[i, j]`` is the position of ``e_i - e_j``."""
        return self.add[:, self.neg]

    def fourier(self, values: np.ndarray) -> np.ndarray:
        return np.conj(self.chars) @ values * float(self.weight)

    def inverse_fourier(self, values: np.ndarray) -> np.ndarray:
        return self.chars.T @ values * float(self.dual_weight)

    def stft(self, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        """``V[x, k] = sum_s f(s) conj(chi_k(s) g(s - x)) w``."""
        P = f[None, :] * np.conj(g[self.sub.T])  # P[x, s]
        return P @ np.conj(self.chars).T * float(self.weight)

    def s0_norm(self, f: np.ndarray, g: np.ndarray) -> float:
        return float(np.abs(self.stft(f, g)).sum() * float(self.weight * self.dual_weight))

    def convolve(self, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        # (f*g)(x) = sum_s f(s) g(x - s) w
        return (g[self.sub] @ f) * float(self.weight)

    def involution(self, f: np.ndarray) -> np.ndarray:
        return np.conj(f[self.neg])

    def l1(self, f: np.ndarray) -> float:
        return float(np.abs(f).sum() * float(self.weight))


@dataclass(frozen=True, eq=False)
class EnumSignal:
    """A function on an :class:`EnumeratedGroup`."""

    space: EnumeratedGroup
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=complex).reshape(-1)
        if vals.size != self.space.order:
            raise ValueError("value count does not match the group order")
        object.__setattr__(self, "values", vals)


def _add_table(G: GroupSpec, labels: np.ndarray, locate: np.ndarray) -> np.ndarray:
    table = G.coord_table()
    n = np.asarray(G.factors)
    s = (table[labels][:, None, :] + table[labels][None, :, :]) % n
    flat = np.zeros(s.shape[:-1], dtype=np.int64)
    for j, m in enumerate(G.factors):
        flat = flat * m + s[..., j]
    return locate[flat]


def subgroup_space(H: Subgroup) -> EnumeratedGroup:
    """``H`` with weight ``w_H``; characters are ``Ghat/H^perp`` representatives."""
    G = H.parent
    labels = H.index_array
    locate = np.full(G.order, -1, dtype=np.int64)
    locate[labels] = np.arange(H.order)
    perp = annihilator(H)
    dual_reps = quotient(dual_group(G), perp).reps_array
    chars = character_matrix(G)[dual_reps][:, labels]
    ms = derive_measures(G, H)
    return EnumeratedGroup(f"H<{G}", labels, _add_table(G, labels, locate), chars, H.weight, ms.w_dual_quotient)


def quotient_space(G: GroupSpec, H: Subgroup) -> EnumeratedGroup:
    """``G/H`` on coset representatives; its dual is ``H^perp`` with weight ``w_perp``."""
    Q = quotient(G, H)
    labels = Q.reps_array
    perp = annihilator(H)
    chars = character_matrix(G)[perp.index_array][:, labels]
    ms = derive_measures(G, H)
    return EnumeratedGroup(f"{G}/H", labels, _add_table(G, labels, Q.coset_of), chars, ms.w_quotient, ms.w_perp)


def as_enumerated(G: GroupSpec) -> EnumeratedGroup:
    """``G`` itself in table form (used to cross-check the fast paths)."""
    labels = np.arange(G.order)
    return EnumeratedGroup(str(G), labels, _add_table(G, labels, labels), character_matrix(G), G.weight, dual_group(G).weight)


def restrict(f: Signal, H: Subgroup) -> EnumSignal:
    """``R_H f = f|_H`` in the sorted element order of ``H``."""
    return EnumSignal(subgroup_space(H), f.values[H.index_array])


def periodize(f: Signal, H: Subgroup) -> EnumSignal:
    """``P_H f(xdot) = sum_h f(x + h) w_H`` at each coset representative."""
    G = f.group
    Q = quotient(G, H)
    sums = np.bincount(Q.coset_of, weights=f.values.real, minlength=Q.order) + 1j * np.bincount(
        Q.coset_of, weights=f.values.imag, minlength=Q.order
    )
    return EnumSignal(quotient_space(G, H), sums * float(H.weight))


def zero_extend(phi: EnumSignal, H: Subgroup) -> Signal:
    """``Q_H phi``: ``phi`` on ``H`` and zero elsewhere."""
    vals = np.zeros(H.parent.order, dtype=complex)
    vals[H.index_array] = phi.values
    return Signal(H.parent, vals)


def weil_check(f: Signal, H: Subgroup) -> tuple[complex, complex]:
    """``sum_G f w_G`` against ``sum_{G/H} sum_H f(x + h) w_H w_{G/H}``."""
    G = f.group
    lhs = complex(f.values.sum() * float(G.weight))
    Q = quotient(G, H)
    table = G.coord_table()
    n = np.asarray(G.factors)
    h_coords = table[H.index_array]
    total = 0j
    for rep in Q.reps_array:
        moved = (table[rep] + h_coords) % n
        idx = np.ravel_multi_index(moved.T, G.factors)
        total += f.values[idx].sum() * float(H.weight)
    return lhs, complex(total * float(Q.weight))


def poisson_check(f: Signal, H: Subgroup) -> tuple[complex, complex]:
    """``sum_H f w_H`` against ``sum_{H^perp} fhat w_{H^perp}``."""
    perp = annihilator(H)
    lhs = complex(f.values[H.index_array].sum() * float(H.weight))
    rhs = complex(fourier(f).values[perp.index_array].sum() * float(perp.weight))
    return lhs, rhs


def poisson_normalized_check(f: Signal, H: Subgroup) -> tuple[complex, complex]:
    """Counting measure on ``H``: ``sum_H f = s(H)^{-1} sum_{H^perp} fhat``, ``s(H) = mu(G/H)``."""
    G = f.group
    Hc = H.with_weight(1)
    Q = quotient(G, Hc)
    s_H = Q.order * Q.weight
    perp = annihilator(Hc)
    lhs = complex(f.values[Hc.index_array].sum())
    rhs = complex(fourier(f).values[perp.index_array].sum() / float(s_H))
    return lhs, rhs


def restriction_fourier_identity(f: Signal, H: Subgroup) -> tuple[np.ndarray, np.ndarray]:
    """``R_H f`` against ``F_H^{-1} P_{H^perp} F_G f``."""
    G = f.group
    perp = annihilator(H)
    fh = fourier(f)
    periodized = periodize(fh, perp)  # a function on Ghat/H^perp = Hhat
    space = subgroup_space(H)
    # characters of space are indexed by the same coset representatives
    rhs = space.inverse_fourier(periodized.values)
    return restrict(f, H).values, rhs


def zero_extension_norm_check(phi: EnumSignal, g: EnumSignal, H: Subgroup, rtol: float = RTOL) -> Check:
    """``||Q_H phi||_{S0(G), Q_H g} = w_{G/H} ||phi||_{S0(H), g}``.

    With counting measure on ``G/H`` (``w_H = w_G``) this is an isometry.
    """
    lhs = s0_norm(zero_extend(phi, H), zero_extend(g, H)).value
    rhs = float(H.parent.weight / H.weight) * phi.space.s0_norm(phi.values, g.values)
    return equality("zero extension norm", lhs, rhs, rtol)


def _coset_pieces(f: Signal, H: Subgroup) -> list[np.ndarray]:
    G = f.group
    table = G.coord_table()
    n = np.asarray(G.factors)
    h_coords = table[H.index_array]
    out = []
    for rep in quotient(G, H).reps_array:
        idx = np.ravel_multi_index(((table[rep] + h_coords) % n).T, G.factors)
        out.append(f.values[idx])
    return out


def coset_decomposition_norm(f: Signal, H: Subgroup, g_H: EnumSignal) -> float:
    """``sum_gamma ||f_gamma||_{S0(H), g_H}`` with ``f_gamma(x) = f(gamma + x)``, ``x in H``."""
    if not np.any(g_H.values):
        raise ValueError("the window must be non-zero")
    space = g_H.space
    return float(sum(space.s0_norm(piece, g_H.values) for piece in _coset_pieces(f, H)))


def coset_decomposition_check(f: Signal, H: Subgroup, g_H: EnumSignal, rtol: float = RTOL) -> tuple[Check, float]:
    """Triangle bound ``||f||_{S0(G), Q_H g_H} <= w_{G/H} value``.

    Also returns the ratio ``w_{G/H} value / ||f||_{S0(G), Q_H g_H}`` (at least one).
    """
    value = float(H.parent.weight / H.weight) * coset_decomposition_norm(f, H, g_H)
    norm = s0_norm(f, zero_extend(g_H, H)).value
    ratio = value / norm if norm > 0 else 1.0
    return inequality("coset decomposition upper", norm, value, rtol), ratio


def periodization_laws_check(f: Signal, g: Signal, H: Subgroup, rtol: float = RTOL) -> list[Check]:
    """``||P_H f||_1 <= ||f||_1``, ``(P_H f)^dagger = P_H f^dagger``, ``P_H f * P_H g = P_H (f * g)``."""
    pf, pg = periodize(f, H), periodize(g, H)
    space = pf.space
    return [
        inequality("periodization L1 contraction", space.l1(pf.values), lp_norm(f, 1), rtol),
        equality("periodization involution", space.involution(pf.values), periodize(involution(f), H).values, rtol),
        equality("periodization convolution", space.convolve(pf.values, pg.values), periodize(convolve(f, g), H).values, rtol),
        equality(
            "periodization Fourier",
            space.fourier(pf.values),
            fourier(f).values[annihilator(H).index_array],
            rtol,
        ),
        equality(
            "periodize zero extension",
            periodize(zero_extend(restrict(f, H), H), H).values[0],
            f.values[H.index_array].sum() * float(H.weight),
            rtol,
        ),
    ]


def intertwining_check(f: Signal, H: Subgroup, rtol: float = RTOL) -> Check:
    """``E_gamma P_H = P_H E_gamma`` for every ``gamma in H^perp``."""
    from .signals import modulate

    perp = annihilator(H)
    pf = periodize(f, H)
    chars = pf.space.chars
    worst = 0.0
    scale = 1.0
    for k, gamma in enumerate(perp.index_array):
        lhs = chars[k] * pf.values
        rhs = periodize(modulate(f, int(gamma)), H).values
        worst = max(worst, float(np.abs(lhs - rhs).max()))
        scale = max(scale, float(np.abs(rhs).max()))
    return Check("periodization intertwines modulation", worst, rtol * scale)
