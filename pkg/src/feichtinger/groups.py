"""Finite abelian groups, their duals, subgroups, quotients and Haar weights.

A group is a product of cyclic factors ``Z_{n_1} x ... x Z_{n_k}`` with a
constant Haar weight per point. Elements are addressed either by coordinate
tuples or by a flat row-major index (last factor varies fastest).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm, prod
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "GroupSpec",
    "GroupElement",
    "PhasePoint",
    "Subgroup",
    "QuotientView",
    "MeasureSystem",
    "dual_group",
    "character_value",
    "character_matrix",
    "subgroup_from_generators",
    "full_subgroup",
    "trivial_subgroup",
    "annihilator",
    "quotient",
    "derive_measures",
    "product_group",
    "phase_space",
    "all_subgroups",
]

WeightLike = Union[Fraction, int, str]


def _as_fraction(w: WeightLike) -> Fraction:
    if isinstance(w, float):
        raise TypeError("weights must be exact rationals, not floats")
    out = Fraction(w)
    if out <= 0:
        raise ValueError(f"weight must be positive, got {out}")
    return out


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group ``Z_{n_1} x ... x Z_{n_k}`` with Haar weight.

    Parameters
    ----------
    factors : tuple of int
        Cyclic orders, each at least 1.
    weight : Fraction
        Haar measure of a single point, stored exactly.
    """

    factors: tuple[int, ...]
    weight: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        factors = tuple(int(n) for n in self.factors)
        if not factors:
            raise ValueError("a group needs at least one cyclic factor")
        if any(n < 1 for n in factors):
            raise ValueError(f"cyclic orders must be >= 1, got {factors}")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "weight", _as_fraction(self.weight))

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parse ``"2x3x4@p/q"`` (the weight suffix is optional)."""
        text = text.strip()
        body, _, w = text.partition("@")
        try:
            factors = tuple(int(tok) for tok in body.lower().split("x"))
            weight = Fraction(w) if w else Fraction(1)
        except ValueError as exc:
            raise ValueError(f"malformed group spec {text!r}") from exc
        return cls(factors, weight)

    def __str__(self) -> str:
        return "x".join(map(str, self.factors)) + f"@{self.weight}"

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.factors

    @property
    def total_measure(self) -> Fraction:
        return self.order * self.weight

    def with_weight(self, weight: WeightLike) -> "GroupSpec":
        return GroupSpec(self.factors, _as_fraction(weight))

    # indexing -----------------------------------------------------------
    def index(self, coords: Sequence[int]) -> int:
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        idx = 0
        for c, n in zip(coords, self.factors):
            idx = idx * n + int(c) % n
        return idx

    def coords(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.order:
            raise IndexError(index)
        return tuple(int(c) for c in np.unravel_index(index, self.factors))

    def element(self, value: "ElementLike") -> "GroupElement":
        """Coerce an index, coordinate tuple or element into this group."""
        if isinstance(value, GroupElement):
            if value.factors != self.factors:
                raise ValueError("element belongs to a group with different factors")
            return value
        if isinstance(value, (int, np.integer)):
            if self.rank == 1:
                return GroupElement(self.factors, (int(value),))
            return GroupElement(self.factors, self.coords(int(value)))
        return GroupElement(self.factors, tuple(value))

    def coord_table(self) -> np.ndarray:
        """All elements as an ``(order, rank)`` integer array in index order."""
        return _coord_table(self.factors)

    def shift_index(self, offset: Sequence[int], sign: int = 1) -> np.ndarray:
        """Index of ``s + sign*offset`` for every element ``s``."""
        table = self.coord_table()
        moved = (table + sign * np.asarray(offset, dtype=np.int64)) % np.asarray(self.factors)
        return _ravel(moved, self.factors)

    def negation_index(self) -> np.ndarray:
        return _ravel((-self.coord_table()) % np.asarray(self.factors), self.factors)

    def difference_table(self) -> np.ndarray:
        """``D[x, s]`` = index of ``s - x``, shape ``(order, order)``."""
        table = self.coord_table()
        diff = (table[None, :, :] - table[:, None, :]) % np.asarray(self.factors)
        return _ravel(diff, self.factors)


def _ravel(coords: np.ndarray, factors: tuple[int, ...]) -> np.ndarray:
    idx = np.zeros(coords.shape[:-1], dtype=np.int64)
    for j, n in enumerate(factors):
        idx = idx * n + coords[..., j]
    return idx


@lru_cache(maxsize=64)
def _coord_table(factors: tuple[int, ...]) -> np.ndarray:
    grids = np.indices(factors).reshape(len(factors), -1).T
    out = np.ascontiguousarray(grids, dtype=np.int64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GroupElement:
    """An element of a product of cyclic groups (coordinates reduced)."""

    factors: tuple[int, ...]
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != len(self.factors):
            raise ValueError("coordinate count does not match the factor count")
        object.__setattr__(
            self, "coords", tuple(int(c) % n for c, n in zip(self.coords, self.factors))
        )

    def __add__(self, other: "GroupElement") -> "GroupElement":
        _same_factors(self.factors, other.factors)
        return GroupElement(self.factors, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.factors, tuple(-a for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def scale(self, k: int) -> "GroupElement":
        return GroupElement(self.factors, tuple(k * a for a in self.coords))

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)


ElementLike = Union[GroupElement, int, Sequence[int]]


@dataclass(frozen=True)
class PhasePoint:
    """A point ``(x, omega)`` of the time-frequency plane ``G x Ghat``."""

    x: GroupElement
    omega: GroupElement

    def __post_init__(self) -> None:
        _same_factors(self.x.factors, self.omega.factors)

    @classmethod
    def of(cls, G: GroupSpec, x: ElementLike, omega: ElementLike) -> "PhasePoint":
        return cls(G.element(x), G.element(omega))

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(self.x + other.x, self.omega + other.omega)

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(-self.x, -self.omega)

    def __sub__(self, other: "PhasePoint") -> "PhasePoint":
        return self + (-other)


def _same_factors(a: tuple[int, ...], b: tuple[int, ...]) -> None:
    if tuple(a) != tuple(b):
        raise ValueError(f"factor lists differ: {a} vs {b}")


def dual_group(G: GroupSpec) -> GroupSpec:
    """Dual group with the dual (Plancherel) weight ``1/(|G| w_G)``."""
    return GroupSpec(G.factors, 1 / (G.order * G.weight))


def product_group(G1: GroupSpec, G2: GroupSpec) -> GroupSpec:
    """``G1 x G2`` with product weight; ``G1`` coordinates come first."""
    return GroupSpec(G1.factors + G2.factors, G1.weight * G2.weight)


def phase_space(G: GroupSpec) -> GroupSpec:
    """The time-frequency plane ``G x Ghat`` with product measure."""
    return product_group(G, dual_group(G))


def character_value(omega: GroupElement, x: GroupElement) -> complex:
    """``omega(x) = exp(2 pi i sum_j x_j omega_j / n_j)``."""
    _same_factors(omega.factors, x.factors)
    L = lcm(*omega.factors)
    k = sum(a * b * (L // n) for a, b, n in zip(omega.coords, x.coords, omega.factors)) % L
    return complex(np.exp(2j * np.pi * k / L))


@lru_cache(maxsize=32)
def _character_matrix(factors: tuple[int, ...]) -> np.ndarray:
    table = _coord_table(factors)
    L = lcm(*factors)
    scale = np.array([L // n for n in factors], dtype=np.int64)
    k = ((table * scale) @ table.T) % L
    out = np.exp(2j * np.pi * k / L)
    out.setflags(write=False)
    return out


def character_matrix(G: GroupSpec) -> np.ndarray:
    """``M[omega, x] = omega(x)`` over all of ``Ghat x G`` (index order)."""
    return _character_matrix(G.factors)


@dataclass(frozen=True)
class Subgroup:
    """An enumerated subgroup ``H`` of ``parent`` with its own Haar weight.

    Attributes
    ----------
    parent : GroupSpec
    elements : tuple of int
        Sorted flat indices into ``parent``.
    generators : tuple of GroupElement
    weight : Fraction
        Haar weight ``w_H`` per point of ``H``.
    """

    parent: GroupSpec
    elements: tuple[int, ...]
    generators: tuple[GroupElement, ...] = ()
    weight: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        elems = tuple(sorted(set(int(e) for e in self.elements)))
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "weight", _as_fraction(self.weight))
        members = set(elems)
        if 0 not in members:
            raise ValueError("subgroup must contain the identity")
        if self.parent.order % len(elems):
            raise ValueError("subgroup order must divide the group order")
        neg = self.parent.negation_index()
        table = self.parent.coord_table()
        n = np.asarray(self.parent.factors)
        arr = np.asarray(elems)
        if not set(neg[arr].tolist()) <= members:
            raise ValueError("element set is not closed under negation")
        sums = _ravel((table[arr][:, None, :] + table[arr][None, :, :]) % n, self.parent.factors)
        if not set(np.unique(sums).tolist()) <= members:
            raise ValueError("element set is not closed under addition")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index_array(self) -> np.ndarray:
        return np.asarray(self.elements, dtype=np.int64)

    @property
    def total_measure(self) -> Fraction:
        return self.order * self.weight

    def contains(self, x: ElementLike) -> bool:
        return self.parent.index(self.parent.element(x).coords) in set(self.elements)

    def with_weight(self, weight: WeightLike) -> "Subgroup":
        return Subgroup(self.parent, self.elements, self.generators, _as_fraction(weight))

    def as_group(self) -> GroupSpec:
        """``H`` is not re-factored; this is only valid when ``H = parent``."""
        if self.order != self.parent.order:
            raise ValueError("a proper subgroup has no cyclic factorization here")
        return self.parent.with_weight(self.weight)


def _closure(G: GroupSpec, gens: Iterable[GroupElement]) -> list[int]:
    gens = [G.element(g) for g in gens]
    seen = {0}
    queue = deque([G.element(0) if G.rank == 1 else GroupElement(G.factors, (0,) * G.rank)])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = cur + g
            i = G.index(nxt.coords)
            if i not in seen:
                seen.add(i)
                queue.append(nxt)
    return sorted(seen)


def subgroup_from_generators(
    G: GroupSpec, gens: Iterable[ElementLike] = (), weight: WeightLike = 1
) -> Subgroup:
    """Smallest subgroup containing ``gens`` (breadth-first closure)."""
    gens = tuple(G.element(g) for g in gens)
    return Subgroup(G, tuple(_closure(G, gens)), gens, _as_fraction(weight))


def full_subgroup(G: GroupSpec, weight: WeightLike | None = None) -> Subgroup:
    w = G.weight if weight is None else weight
    gens = tuple(G.element(tuple(1 if k == j else 0 for k in range(G.rank))) for j in range(G.rank))
    return Subgroup(G, tuple(range(G.order)), gens, _as_fraction(w))


def trivial_subgroup(G: GroupSpec, weight: WeightLike = 1) -> Subgroup:
    return Subgroup(G, (0,), (), _as_fraction(weight))


def _greedy_generators(G: GroupSpec, elements: Sequence[int]) -> tuple[GroupElement, ...]:
    gens: list[GroupElement] = []
    span = {0}
    for e in elements:
        if e not in span:
            gens.append(G.element(G.coords(e)))
            span = set(_closure(G, gens))
    return tuple(gens)


def annihilator(H: Subgroup) -> Subgroup:
    """``H^perp`` inside ``Ghat`` with the orthogonal weight ``1/(|G/H| w_{G/H})``."""
    G = H.parent
    chars = character_matrix(G)[:, H.index_array]
    members = np.nonzero(np.all(np.abs(chars - 1) < 1e-9, axis=1))[0].tolist()
    Gh = dual_group(G)
    w_quot = G.weight / H.weight
    w_perp = 1 / ((G.order // H.order) * w_quot)
    return Subgroup(Gh, tuple(members), _greedy_generators(Gh, members), w_perp)


@dataclass(frozen=True)
class QuotientView:
    """Coset structure of ``G/H``.

    ``coset_reps[i]`` is the lexicographically smallest element of coset ``i``
    (which is also its smallest flat index); ``coset_of[x]`` maps an element
    index to its coset index.
    """

    parent: GroupSpec
    subgroup: Subgroup
    coset_reps: tuple[int, ...]
    coset_of: np.ndarray = field(repr=False)
    weight: Fraction = Fraction(1)

    @property
    def order(self) -> int:
        return len(self.coset_reps)

    @property
    def reps_array(self) -> np.ndarray:
        return np.asarray(self.coset_reps, dtype=np.int64)

    def coset(self, i: int) -> np.ndarray:
        return np.nonzero(self.coset_of == i)[0]


def quotient(G: GroupSpec, H: Subgroup) -> QuotientView:
    """``G/H`` by coset tables; weight ``w_G / w_H``."""
    if H.parent != G:
        raise ValueError("subgroup does not belong to this group")
    table = G.coord_table()
    n = np.asarray(G.factors)
    h_coords = table[H.index_array]
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps: list[int] = []
    for x in range(G.order):
        if coset_of[x] >= 0:
            continue
        members = _ravel((table[x] + h_coords) % n, G.factors)
        coset_of[members] = len(reps)
        reps.append(x)
    coset_of.setflags(write=False)
    return QuotientView(G, H, tuple(reps), coset_of, G.weight / H.weight)


@dataclass(frozen=True)
class MeasureSystem:
    """Canonically related and dual Haar weights attached to ``(G, H)``."""

    w_G: Fraction
    w_H: Fraction
    w_quotient: Fraction
    w_dual: Fraction
    w_perp: Fraction
    w_dual_quotient: Fraction

    def consistent(self) -> bool:
        return self.w_dual == self.w_perp * self.w_dual_quotient


def derive_measures(G: GroupSpec, H: Subgroup) -> MeasureSystem:
    """All six weights, exact; ``w_Ghat = w_perp * w_{Ghat/H^perp}`` holds."""
    index = G.order // H.order
    w_q = G.weight / H.weight
    return MeasureSystem(
        w_G=G.weight,
        w_H=H.weight,
        w_quotient=w_q,
        w_dual=1 / (G.order * G.weight),
        w_perp=1 / (index * w_q),
        w_dual_quotient=1 / (H.order * H.weight),
    )


def all_subgroups(G: GroupSpec, weight: WeightLike = 1) -> list[Subgroup]:
    """Every subgroup of ``G`` (closure over element subsets, deduplicated)."""
    found: dict[tuple[int, ...], Subgroup] = {}
    frontier = [subgroup_from_generators(G, (), weight)]
    found[frontier[0].elements] = frontier[0]
    while frontier:
        nxt = []
        for H in frontier:
            for e in range(G.order):
                if e in H.elements:
                    continue
                K = subgroup_from_generators(G, H.generators + (G.element(G.coords(e)),), weight)
                if K.elements not in found:
                    found[K.elements] = K
                    nxt.append(K)
        frontier = nxt
    return sorted(found.values(), key=lambda S: (S.order, S.elements))
