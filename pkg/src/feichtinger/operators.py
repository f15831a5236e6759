"""Operators with time-frequency commutation relations, and Gabor frame operators.

Operators are dense matrices acting on value vectors (``|G_2| x |G_1|``).
Antilinear operators (conjugation, involution) are stored as ``f -> M conj(f)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .checks import RTOL, Check, equality
from .groups import (
    GroupSpec,
    PhasePoint,
    Subgroup,
    character_matrix,
    dual_group,
    phase_space,
    product_group,
    subgroup_from_generators,
)
from .signals import (
    Signal,
    conjugate,
    fourier,
    involution,
    partial_fourier_2,
    reflect,
    symplectic_fourier,
    tf_shift,
)
from .tfa import s0_norm

__all__ = [
    "Operator",
    "PhaseAutomorphism",
    "CommutationResult",
    "CatalogEntry",
    "tf_shift_matrix",
    "tf_shift_operator",
    "fourier_operator",
    "partial_fourier_operator",
    "symplectic_operator",
    "automorphism_operator",
    "chirp",
    "chirp_operator",
    "reflection_operator",
    "conjugation_operator",
    "involution_operator",
    "commutation_extract",
    "isomorphism_norm_check",
    "catalog",
    "GaborSystem",
    "FrameError",
    "lattice",
    "parse_lattice",
    "gabor_frame_operator",
    "frame_bounds",
    "dual_window",
    "gabor_reconstruct",
    "gabor_commutation_check",
]


@dataclass(frozen=True, eq=False)
class Operator:
    """A (possibly antilinear) map ``L^2(domain) -> L^2(codomain)``."""

    domain: GroupSpec
    codomain: GroupSpec
    matrix: np.ndarray
    antilinear: bool = False
    name: str = ""

    def __post_init__(self) -> None:
        M = np.array(self.matrix, dtype=complex)
        if M.shape != (self.codomain.order, self.domain.order):
            raise ValueError("matrix shape does not match the groups")
        object.__setattr__(self, "matrix", M)

    @classmethod
    def from_action(
        cls, domain: GroupSpec, codomain: GroupSpec, action: Callable[[Signal], Signal], antilinear: bool = False, name: str = ""
    ) -> "Operator":
        """Tabulate ``action`` on the point masses of ``domain``."""
        cols = []
        for i in range(domain.order):
            e = np.zeros(domain.order, dtype=complex)
            e[i] = 1.0
            cols.append(action(Signal(domain, e)).values)
        return cls(domain, codomain, np.stack(cols, axis=1), antilinear, name)

    def __call__(self, f: Signal) -> Signal:
        if f.group.factors != self.domain.factors:
            raise ValueError("signal is not on the operator's domain")
        v = np.conj(f.values) if self.antilinear else f.values
        return Signal(self.codomain, self.matrix @ v)

    def adjoint(self) -> "Operator":
        """Adjoint for the weighted inner products of domain and codomain."""
        r = float(self.codomain.weight / self.domain.weight)
        M = self.matrix.T if self.antilinear else self.matrix.conj().T
        return Operator(self.codomain, self.domain, r * M, self.antilinear, f"{self.name}*")

    def inverse(self) -> "Operator":
        if self.matrix.shape[0] != self.matrix.shape[1]:
            raise np.linalg.LinAlgError("operator is not square")
        if np.linalg.cond(self.matrix) > 1e12:
            raise np.linalg.LinAlgError("operator is not invertible")
        inv = np.linalg.inv(self.matrix)
        M = np.conj(inv) if self.antilinear else inv
        return Operator(self.codomain, self.domain, M, self.antilinear, f"{self.name}^-1")

    def compose(self, other: "Operator") -> "Operator":
        """``self o other``."""
        right = np.conj(other.matrix) if self.antilinear else other.matrix
        return Operator(other.domain, self.codomain, self.matrix @ right, self.antilinear != other.antilinear)

    def is_unitary(self, tol: float = 1e-10) -> bool:
        prod = self.adjoint().compose(self).matrix
        return bool(np.allclose(prod, np.eye(self.domain.order), atol=tol))


def _plane_index(P: GroupSpec, chi: PhasePoint) -> int:
    return P.index(chi.x.coords + chi.omega.coords)


def tf_shift_matrix(G: GroupSpec, x: int, omega: int) -> np.ndarray:
    """Matrix of ``pi(x, omega)`` for flat indices ``x`` and ``omega``."""
    N = G.order
    M = np.zeros((N, N), dtype=complex)
    src = G.shift_index(G.coords(x), -1)  # s - x
    M[np.arange(N), src] = character_matrix(G)[omega]
    return M


def _tf_parts(G: GroupSpec) -> tuple[np.ndarray, np.ndarray]:
    # row map and phase of pi(x, omega): (pi f)(s) = chars[omega, s] f(D[x, s])
    return G.difference_table(), character_matrix(G)


@dataclass(frozen=True, eq=False)
class PhaseAutomorphism:
    """``alpha``: phase space of ``source`` (the operator's codomain) to that of ``target``.

    ``table[i]`` is the target phase index of source phase index ``i``.
    """

    source: GroupSpec
    target: GroupSpec
    table: np.ndarray
    modulus: Fraction = Fraction(1)

    @classmethod
    def from_map(
        cls, source: GroupSpec, target: GroupSpec, fn: Callable[[tuple, tuple], tuple[tuple, tuple]], modulus=1
    ) -> "PhaseAutomorphism":
        """Build from ``fn(x_coords, omega_coords) -> (x', omega')``."""
        Ps, Pt = phase_space(source), phase_space(target)
        k = source.rank
        table = np.empty(Ps.order, dtype=np.int64)
        for i, c in enumerate(Ps.coord_table()):
            x2, w2 = fn(tuple(c[:k]), tuple(c[k:]))
            table[i] = Pt.index(tuple(x2) + tuple(w2))
        if len(set(table.tolist())) != Ps.order:
            raise ValueError("alpha is not a bijection")
        return cls(source, target, table, Fraction(modulus))

    @classmethod
    def identity(cls, G: GroupSpec) -> "PhaseAutomorphism":
        return cls(G, G, np.arange(G.order**2), Fraction(1))


@dataclass(frozen=True)
class CommutationResult:
    """``c`` table (indexed by source phase points) or the first violation."""

    ok: bool
    c: Optional[np.ndarray]
    violation: Optional[int]
    max_err: float


def commutation_extract(T: Operator, alpha: PhaseAutomorphism, tol: float = 1e-9) -> CommutationResult:
    """Find unimodular ``c`` with ``pi(chi) T = c(chi) T pi(alpha(chi))`` for all ``chi``.

    Raises
    ------
    numpy.linalg.LinAlgError
        If ``T`` is not invertible.
    """
    T.inverse()  # invertibility check
    G1, G2 = T.domain, T.codomain
    if alpha.source.factors != G2.factors or alpha.target.factors != G1.factors:
        raise ValueError("alpha does not match the operator's groups")
    D2, C2 = _tf_parts(G2)
    D1, C1 = _tf_parts(G1)
    N1, N2 = G1.order, G2.order
    M = T.matrix
    cs = np.empty(N2 * N2, dtype=complex)
    worst = 0.0
    for i in range(N2 * N2):
        x2, w2 = divmod(i, N2)
        left = C2[w2][:, None] * M[D2[x2], :]
        x1, w1 = divmod(int(alpha.table[i]), N1)
        # columns of M pi(y, eta): (M pi)[:, j] = M[:, j + y] * eta(j + y) (conjugated for antilinear T)
        col_src = G1.shift_index(G1.coords(x1), +1)  # j + y
        phase = C1[w1][col_src]
        right = M[:, col_src] * (np.conj(phase) if T.antilinear else phase)[None, :]
        denom = np.vdot(right, right).real
        c = np.vdot(right, left) / denom
        err = float(np.abs(left - c * right).max())
        err = max(err, abs(abs(c) - 1.0))
        worst = max(worst, err)
        if err > tol:
            return CommutationResult(False, None, i, err)
        cs[i] = c
    return CommutationResult(True, cs, None, worst)


def isomorphism_norm_check(
    T: Operator, alpha: PhaseAutomorphism, f1: Signal, g1: Signal, f2: Signal, g2: Signal, rtol: float = RTOL
) -> list[Check]:
    """The four S0-norm transfer identities, plus the unitary form when ``T`` is unitary.

    ``f1, g1`` live on the domain and ``f2, g2`` on the codomain.
    """
    a = float(alpha.modulus)
    Ts, Ti = T.adjoint(), T.inverse()
    Tsi = Ts.inverse()
    n = lambda f, g: s0_norm(f, g).value  # noqa: E731
    out = [
        equality(f"{T.name}: T f1 vs (T*)^-1 g1", n(T(f1), Tsi(g1)), n(f1, g1) / a, rtol),
        equality(f"{T.name}: T^-1 f2 vs T* g2", n(Ti(f2), Ts(g2)), a * n(f2, g2), rtol),
        equality(f"{T.name}: T* f2 vs T^-1 g2", n(Ts(f2), Ti(g2)), a * n(f2, g2), rtol),
        equality(f"{T.name}: (T*)^-1 f1 vs T g1", n(Tsi(f1), T(g1)), n(f1, g1) / a, rtol),
    ]
    if T.is_unitary():
        out.append(equality(f"{T.name}: unitary T f vs T g", n(T(f1), T(g1)), n(f1, g1) / a, rtol))
    return out


# catalog ------------------------------------------------------------------
def tf_shift_operator(G: GroupSpec, nu: PhasePoint) -> tuple[Operator, PhaseAutomorphism]:
    T = Operator.from_action(G, G, lambda f: tf_shift(f, nu), name="tf shift")
    return T, PhaseAutomorphism.identity(G)


def fourier_operator(G: GroupSpec) -> tuple[Operator, PhaseAutomorphism]:
    """``F: L^2(G) -> L^2(Ghat)`` with ``alpha(omega, x) = (-x, omega)``."""
    Gh = dual_group(G)
    T = Operator.from_action(G, Gh, fourier, name="fourier")
    alpha = PhaseAutomorphism.from_map(Gh, G, lambda w, x: (tuple(-v for v in x), w))
    return T, alpha


def partial_fourier_operator(G1: GroupSpec, G2: GroupSpec) -> tuple[Operator, PhaseAutomorphism]:
    """``F_2`` on ``G1 x G2`` with ``alpha(l, g, xi, t) = (l, -t, xi, g)``."""
    dom = product_group(G1, G2)
    cod = product_group(G1, dual_group(G2))
    T = Operator.from_action(dom, cod, lambda F: partial_fourier_2(F, G1, G2), name="partial fourier")
    k1, k2 = G1.rank, G2.rank

    def fn(x, w):
        lam, gam = x[:k1], x[k1:]
        xi, t = w[:k1], w[k1:]
        return lam + tuple(-v for v in t), xi + gam

    return T, PhaseAutomorphism.from_map(cod, dom, fn)


def symplectic_operator(G: GroupSpec) -> tuple[Operator, PhaseAutomorphism]:
    """Symplectic Fourier transform on ``G x Ghat`` with ``alpha(l, g, xi, t) = (-t, xi, g, -l)``."""
    P = phase_space(G)
    T = Operator.from_action(P, P, lambda F: symplectic_fourier(F, G), name="symplectic fourier")
    k = G.rank

    def fn(x, w):
        lam, gam = x[:k], x[k:]
        xi, t = w[:k], w[k:]
        return tuple(-v for v in t) + xi, gam + tuple(-v for v in lam)

    return T, PhaseAutomorphism.from_map(P, P, fn)


def _automorphism_index(G: GroupSpec, multipliers: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    table = G.coord_table()
    mult = np.asarray(multipliers, dtype=np.int64)
    moved = (table[:, list(perm)] * mult) % np.asarray(G.factors)
    return np.ravel_multi_index(moved.T, G.factors)


def automorphism_operator(
    G: GroupSpec, multipliers: Sequence[int], perm: Optional[Sequence[int]] = None
) -> tuple[Operator, PhaseAutomorphism]:
    """``U f(x) = f(gamma(x))`` with ``gamma(x)_j = a_j x_{perm(j)}``.

    ``alpha(x, omega) = (gamma(x), omega o gamma^{-1})``; ``|gamma| = 1`` for a
    bijection of a finite group with matched weights.

    Raises
    ------
    ValueError
        If a multiplier is not a unit or the permutation mixes unequal orders.
    """
    perm = list(range(G.rank)) if perm is None else list(perm)
    if sorted(perm) != list(range(G.rank)):
        raise ValueError("perm must be a permutation of the factors")
    for j, (a, n) in enumerate(zip(multipliers, G.factors)):
        if gcd(int(a), n) != 1:
            raise ValueError(f"multiplier {a} is not a unit modulo {n}")
        if G.factors[perm[j]] != n:
            raise ValueError("permuted factors must have equal orders")
    gidx = _automorphism_index(G, multipliers, perm)
    M = np.zeros((G.order, G.order), dtype=complex)
    M[np.arange(G.order), gidx] = 1.0
    T = Operator(G, G, M, name="automorphism")
    # omega o gamma^{-1} is the character eta with eta(gamma(x)) = omega(x)
    chars = character_matrix(G)
    match = np.argmax(np.abs(chars[:, gidx] @ chars.conj().T), axis=0)  # match[omega] = eta
    P = phase_space(G)
    N = G.order
    table = np.empty(N * N, dtype=np.int64)
    for x in range(N):
        table[x * N : (x + 1) * N] = gidx[x] * N + match
    return T, PhaseAutomorphism(G, G, table)


def chirp(G: GroupSpec, c: Sequence[int]) -> Signal:
    """``psi(x) = prod_j exp(2 pi i c_j x_j^2 / n_j)``, a second degree character."""
    table = G.coord_table()
    n = np.asarray(G.factors)
    cc = np.asarray(c, dtype=np.int64)
    # reduce c x^2 modulo n before dividing to keep phases exact
    k = (cc * table**2) % n
    return Signal(G, np.exp(2j * np.pi * (k / n).sum(axis=1)))


def chirp_operator(G: GroupSpec, c: Sequence[int]) -> tuple[Operator, PhaseAutomorphism]:
    """Multiplication by ``psi``; ``alpha(x, omega) = (x, omega - rho(x))`` with ``rho(y)_j = 2 c_j y_j``."""
    psi = chirp(G, c)
    T = Operator(G, G, np.diag(psi.values), name="chirp")
    alpha = PhaseAutomorphism.from_map(
        G, G, lambda x, w: (x, tuple(wj - 2 * cj * xj for wj, cj, xj in zip(w, c, x)))
    )
    return T, alpha


def reflection_operator(G: GroupSpec) -> tuple[Operator, PhaseAutomorphism]:
    T = Operator.from_action(G, G, reflect, name="reflection")
    return T, PhaseAutomorphism.from_map(G, G, lambda x, w: (tuple(-v for v in x), tuple(-v for v in w)))


def conjugation_operator(G: GroupSpec) -> tuple[Operator, PhaseAutomorphism]:
    T = Operator.from_action(G, G, conjugate, antilinear=True, name="conjugation")
    return T, PhaseAutomorphism.from_map(G, G, lambda x, w: (x, tuple(-v for v in w)))


def involution_operator(G: GroupSpec) -> tuple[Operator, PhaseAutomorphism]:
    T = Operator.from_action(G, G, involution, antilinear=True, name="involution")
    return T, PhaseAutomorphism.from_map(G, G, lambda x, w: (tuple(-v for v in x), w))


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    name: str
    operator: Operator
    alpha: PhaseAutomorphism


def _unit(n: int) -> int:
    for a in range(2, n):
        if gcd(a, n) == 1:
            return a
    return 1


def catalog(G: GroupSpec) -> list[CatalogEntry]:
    """Built-in operators for ``G``.

    Product-group operators use small bases to keep the phase space modest:
    the partial Fourier transform splits off the first factor (or pairs a
    single-factor ``G`` with ``Z_2``), and the symplectic transform acts on
    ``G x Ghat`` when ``|G| <= 6`` and on the first factor otherwise.
    """
    out: list[CatalogEntry] = []
    nu = PhasePoint.of(G, G.order - 1 if G.order > 1 else 0, 1 % G.order)
    for name, (T, a) in [
        ("tf shift", tf_shift_operator(G, nu)),
        ("fourier", fourier_operator(G)),
    ]:
        out.append(CatalogEntry(name, T, a))
    if G.rank >= 2:
        G1 = GroupSpec(G.factors[:1], G.weight)
        G2 = GroupSpec(G.factors[1:])
    else:
        G1, G2 = G, GroupSpec((2,))
    T, a = partial_fourier_operator(G1, G2)
    out.append(CatalogEntry("partial fourier", T, a))
    base = G if G.order <= 6 else GroupSpec(G.factors[:1], G.weight)
    T, a = symplectic_operator(base)
    out.append(CatalogEntry("symplectic fourier", T, a))
    mult = [_unit(n) for n in G.factors]
    perm = list(range(G.rank))
    for i in range(G.rank):
        for j in range(i + 1, G.rank):
            if G.factors[i] == G.factors[j] and perm == list(range(G.rank)):
                perm[i], perm[j] = j, i
    T, a = automorphism_operator(G, mult, perm)
    out.append(CatalogEntry("automorphism", T, a))
    T, a = chirp_operator(G, [1] * G.rank)
    out.append(CatalogEntry("chirp", T, a))
    for name, builder in [
        ("reflection", reflection_operator),
        ("conjugation", conjugation_operator),
        ("involution", involution_operator),
    ]:
        T, a = builder(G)
        out.append(CatalogEntry(name, T, a))
    return out


# Gabor --------------------------------------------------------------------
class FrameError(ValueError):
    """Raised when a Gabor system has lower frame bound zero."""


@dataclass(frozen=True, eq=False)
class GaborSystem:
    """Window ``g``, lattice ``Lambda`` in ``G x Ghat`` and lattice weight ``w_Lambda``."""

    window: Signal
    lattice: Subgroup
    weight: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.lattice.parent.factors != phase_space(self.window.group).factors:
            raise ValueError("lattice must be a subgroup of the window's phase space")
        object.__setattr__(self, "weight", Fraction(self.weight))
        if self.weight <= 0:
            raise ValueError("lattice weight must be positive")

    @property
    def group(self) -> GroupSpec:
        return self.window.group

    def atoms(self, window: Optional[Signal] = None) -> np.ndarray:
        """Columns ``pi(lambda) g`` for ``lambda`` in the lattice."""
        g = self.window if window is None else window
        G = self.group
        D, C = _tf_parts(G)
        N = G.order
        lam = self.lattice.index_array
        x, w = lam // N, lam % N
        return (C[w] * g.values[D[x]]).T


def lattice(G: GroupSpec, a: Union[int, Sequence[int]], b: Union[int, Sequence[int]]) -> Subgroup:
    """``a Z x b Zhat`` in the phase space, factor by factor.

    Integer steps apply to every factor; sequences give one step per factor.
    """
    k = G.rank
    a_s = [a] * k if isinstance(a, int) else list(a)
    b_s = [b] * k if isinstance(b, int) else list(b)
    if len(a_s) != k or len(b_s) != k:
        raise ValueError("one lattice step per factor")
    gens = []
    for j, n in enumerate(G.factors):
        e = [0] * (2 * k)
        e[j] = a_s[j] % n
        gens.append(tuple(e))
        e = [0] * (2 * k)
        e[k + j] = b_s[j] % n
        gens.append(tuple(e))
    return subgroup_from_generators(phase_space(G), gens)


def parse_lattice(G: GroupSpec, text: str) -> Subgroup:
    """``"a,b"`` or ``"full"``."""
    if text.strip() == "full":
        from .groups import full_subgroup

        return full_subgroup(phase_space(G))
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError as exc:
        raise ValueError(f"lattice must look like 'a,b' or 'full', got {text!r}") from exc
    if a <= 0 or b <= 0:
        raise ValueError("lattice steps must be positive")
    return lattice(G, a, b)


def gabor_frame_operator(sys: GaborSystem, window: Optional[Signal] = None) -> Operator:
    """``S f = sum_lambda <f, pi(lambda) g> pi(lambda) g w_Lambda``."""
    A = sys.atoms(window)
    G = sys.group
    S = A @ A.conj().T * float(sys.weight * G.weight)
    return Operator(G, G, S, name="gabor frame operator")


def frame_bounds(sys: GaborSystem) -> tuple[float, float]:
    """Extreme eigenvalues of the (Hermitian) frame operator."""
    ev = np.linalg.eigvalsh(gabor_frame_operator(sys).matrix)
    return float(max(ev[0], 0.0)), float(ev[-1])


def dual_window(sys: GaborSystem, rtol: float = 1e-10) -> Signal:
    """Canonical dual window ``S^{-1} g`` (linear solve).

    Raises
    ------
    FrameError
        If the lower frame bound vanishes relative to the upper one.
    """
    A, B = frame_bounds(sys)
    if B == 0 or A <= rtol * B:
        raise FrameError(f"not a frame: lower bound {A:.3g}, upper bound {B:.3g}")
    S = gabor_frame_operator(sys).matrix
    return Signal(sys.group, np.linalg.solve(S, sys.window.values))


def gabor_reconstruct(sys: GaborSystem, f: Signal, dual: Signal) -> Signal:
    """``sum_lambda <f, pi(lambda) dual> pi(lambda) g w_Lambda``."""
    A = sys.atoms()
    Ad = sys.atoms(dual)
    G = sys.group
    coeffs = Ad.conj().T @ f.values * float(G.weight)
    return Signal(G, A @ coeffs * float(sys.weight))


def gabor_commutation_check(sys: GaborSystem, sample: Sequence[int] = (), rtol: float = 1e-10) -> list[Check]:
    """``pi(lambda) S = S pi(lambda)`` on the lattice and ``pi(chi) S_g = S_{pi(chi) g} pi(chi)`` on ``sample``."""
    G = sys.group
    N = G.order
    S = gabor_frame_operator(sys).matrix
    scale = max(1.0, float(np.abs(S).max()))
    worst_b = 0.0
    for lam in sys.lattice.index_array:
        P = tf_shift_matrix(G, int(lam) // N, int(lam) % N)
        worst_b = max(worst_b, float(np.abs(P @ S - S @ P).max()))
    worst_a = 0.0
    for chi in sample:
        x, w = divmod(int(chi), N)
        P = tf_shift_matrix(G, x, w)
        gs = Signal(G, P @ sys.window.values)
        Sg = gabor_frame_operator(sys, gs).matrix
        worst_a = max(worst_a, float(np.abs(P @ S - Sg @ P).max()))
    return [
        Check("gabor commutation on lattice", worst_b, rtol * scale),
        Check("gabor covariance of window", worst_a, rtol * scale, skipped=not len(sample)),
    ]
