"""Series representations of signals and bounded uniform partitions of unity.

Representation kinds, each built from a time-frequency (``L``) expansion:

* ``L``: ``f = sum c_n pi(chi_n) g``, cost ``sum |c_n|``.
* ``M``: ``f = sum T_{x_n} g_n`` with ``supp g_n`` in ``K``, cost ``sum ||g_n||_A``.
* ``N``: ``f = sum E_{omega_n} g_n`` with ``supp ghat_n`` in ``Ktilde``, cost ``sum ||g_n||_1``.
* ``O``: ``f = sum f_n * E_{omega_n} g``, cost ``sum ||f_n||_1``.
* ``P``: ``f = sum f_n . T_{x_n} g``, cost ``sum ||f_n||_A``.
* ``Q``: ``f = R_{0 x G} sum T_{(omega_n, 0)} V_ghat fhat_n``, cost ``sum ||f_n||_{S0,g}``.
* ``R``: ``f = sum f_n * g_n``, cost ``sum ||f_n||_{S0,g} ||g_n||_{S0,g}``.

Only representation costs (upper bounds for the infimum norms) are computed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .checks import RTOL, Check, equality, inequality
from .groups import ElementLike, GroupSpec, PhasePoint, Subgroup, annihilator, dual_group, quotient
from .signals import (
    INF,
    Signal,
    a_norm,
    constant,
    convolve,
    delta,
    fourier,
    inverse_fourier,
    involution,
    lp_norm,
    modulate,
    multiply,
    reflect,
    tf_shift,
    translate,
)
from .tfa import canonical_atomic_coefficients, s0_norm, stft

__all__ = [
    "KINDS",
    "Term",
    "Representation",
    "indicator",
    "build_representation",
    "representation_inequality_check",
    "BUPU",
    "bupu_from_subgroup",
    "bupu_from_subgroup_dual",
    "t_norm",
    "u_norm",
    "m_representation_from_bupu",
    "n_representation_from_bupu",
    "bupu_time_check",
    "bupu_frequency_check",
]

KINDS = ("L", "M", "N", "O", "P", "Q", "R")


@dataclass(frozen=True)
class Term:
    """One summand. ``x`` and ``omega`` are flat indices; unused slots stay ``None``."""

    coefficient: complex = 1.0
    x: Optional[int] = None
    omega: Optional[int] = None
    signal: Optional[Signal] = None
    partner: Optional[Signal] = None


@dataclass(frozen=True, eq=False)
class Representation:
    kind: str
    target: Signal
    terms: tuple
    cost: float
    params: dict = field(default_factory=dict)

    def resynthesize(self) -> Signal:
        G = self.target.group
        out = np.zeros(G.order, dtype=complex)
        if self.kind == "L":
            g = self.params["window"]
            for t in self.terms:
                out += t.coefficient * tf_shift(g, _pp(G, t.x, t.omega)).values
        elif self.kind == "M":
            for t in self.terms:
                out += translate(t.signal, G.coords(t.x)).values
        elif self.kind == "N":
            for t in self.terms:
                out += modulate(t.signal, G.coords(t.omega)).values
        elif self.kind == "O":
            g = self.params["window"]
            for t in self.terms:
                out += convolve(t.signal, modulate(g, G.coords(t.omega))).values
        elif self.kind == "P":
            g = self.params["window"]
            for t in self.terms:
                out += (t.signal.values * translate(g, G.coords(t.x)).values)
        elif self.kind == "Q":
            out = _q_slice(self.terms, self.params["window"]).values
        elif self.kind == "R":
            for t in self.terms:
                out += convolve(t.signal, t.partner).values
        return Signal(G, out)

    def resynthesis_error(self) -> float:
        return float(np.abs(self.resynthesize().values - self.target.values).max(initial=0.0))


def _pp(G: GroupSpec, x: int, omega: int) -> PhasePoint:
    return PhasePoint.of(G, G.coords(x), G.coords(omega))


def indicator(G: GroupSpec, elements: Sequence[ElementLike]) -> Signal:
    """``1_K`` for a list of elements (coordinates or flat indices)."""
    vals = np.zeros(G.order, dtype=complex)
    for e in elements:
        vals[G.index(G.element(e).coords)] = 1.0
    return Signal(G, vals)


def _expansion(f: Signal, window: Signal) -> list[tuple[int, int, complex]]:
    """Nonzero canonical coefficients ``(x, omega, c)`` of ``f`` for ``window``."""
    if window.is_zero():
        raise ValueError("the generating window is zero")
    N = f.group.order
    c = canonical_atomic_coefficients(f, window).values
    return [(int(i) // N, int(i) % N, complex(c[i])) for i in np.flatnonzero(c)]


def _single_atom(f: Signal, g: Signal, tol: float = 1e-12) -> Optional[tuple[int, int, complex]]:
    G = f.group
    N = G.order
    gn = float(np.vdot(g.values, g.values).real)
    for i in range(N * N):
        a = tf_shift(g, _pp(G, i // N, i % N)).values
        c = np.vdot(a, f.values) / gn
        if np.abs(f.values - c * a).max() <= tol * max(1.0, np.abs(f.values).max()):
            return i // N, i % N, complex(c)
    return None


def _q_slice(terms: Sequence[Term], g: Signal) -> Signal:
    """``t -> sum_n V_ghat fhat_n(-omega_n, t)``, the slice at zero of the shifted sum."""
    G = g.group
    N = G.order
    gh = fourier(g)
    out = np.zeros(N, dtype=complex)
    for t in terms:
        V = stft(fourier(t.signal), gh).values.reshape(N, N)  # [xi, t] on Ghat x G
        neg = int(G.negation_index()[t.omega])
        out += V[neg]
    return Signal(G, out)


def build_representation(
    kind: str,
    f: Signal,
    g: Optional[Signal] = None,
    K: Optional[Sequence[ElementLike]] = None,
    K_dual: Optional[Sequence[ElementLike]] = None,
    h: Optional[Signal] = None,
    h2: Optional[Signal] = None,
    method: str = "canonical",
) -> Representation:
    """Explicit admissible representation of ``f`` of the given kind.

    Parameters
    ----------
    kind : {"L", "M", "N", "O", "P", "Q", "R"}
    f : Signal
    g : Signal, optional
        The defining window (kinds L, O, P, Q, R) or the analysis window used
        later for norm comparisons (kinds M, N). Defaults to ``delta_0``.
    K : sequence, optional
        Support set in ``G`` for kind M; the atom window is ``1_K``.
    K_dual : sequence, optional
        Support set in ``Ghat`` for kind N; the atom window has ``ghat = 1_{K_dual}``.
    h, h2 : Signal, optional
        Auxiliary factors. O: ``h`` in ``L^1`` (default ``delta_0``); P: ``h`` in
        ``A`` (default constant one); Q: ``h`` (default ``delta_0``); R: ``h``
        and ``h2`` (defaults ``g`` and ``delta_0``).
    method : {"canonical", "auto"}
        Kind L only: ``"auto"`` first looks for an exact single-atom match.

    Raises
    ------
    ValueError
        On an unknown kind, an empty support set or a zero window.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown representation kind {kind!r}")
    G = f.group
    g = delta(G) if g is None else g
    if g.is_zero():
        raise ValueError("the window must be non-zero")
    params: dict = {"analysis_window": g}
    terms: list[Term] = []

    if kind == "L":
        params["window"] = g
        hit = _single_atom(f, g) if method == "auto" and not f.is_zero() else None
        expansion = [hit] if hit is not None else _expansion(f, g)
        params["method"] = "single-atom" if hit is not None else "canonical"
        terms = [Term(c, x, w) for x, w, c in expansion]
        cost = sum(abs(t.coefficient) for t in terms)

    elif kind == "M":
        if not K:
            raise ValueError("kind M needs a non-empty support set K")
        atom = indicator(G, K)
        params.update(window=atom, K=list(K), generator=atom)
        chars = _chars(G)
        for x, w, c in _expansion(f, atom):
            gn = modulate(atom, G.coords(w)) * (chars[w, x] * c)
            terms.append(Term(c, x, w, gn))
        # modulation shifts the spectrum, so every term costs |c| ||1_K||_A
        cost = a_norm(atom) * sum(abs(t.coefficient) for t in terms)

    elif kind == "N":
        if not K_dual:
            raise ValueError("kind N needs a non-empty dual support set")
        atom = inverse_fourier(indicator(dual_group(G), K_dual))
        atom = Signal(G, atom.values)
        params.update(window=atom, K_dual=list(K_dual), generator=atom)
        for x, w, c in _expansion(f, atom):
            terms.append(Term(c, x, w, translate(atom, G.coords(x)) * c))
        cost = lp_norm(atom, 1) * sum(abs(t.coefficient) for t in terms)

    elif kind == "O":
        h = delta(G) if h is None else h
        gen = convolve(h, g)
        params.update(window=g, h=h, generator=gen)
        for x, w, c in _expansion(f, gen):
            terms.append(Term(c, x, w, tf_shift(h, _pp(G, x, w)) * c))
        cost = sum(lp_norm(t.signal, 1) for t in terms)

    elif kind == "P":
        h = constant(G) if h is None else h
        gen = multiply(h, g)
        params.update(window=g, h=h, generator=gen)
        for x, w, c in _expansion(f, gen):
            terms.append(Term(c, x, w, tf_shift(h, _pp(G, x, w)) * c))
        cost = sum(a_norm(t.signal) for t in terms)

    elif kind == "Q":
        h = delta(G) if h is None else h
        gen = convolve(h, involution(g))
        params.update(window=g, h=h, generator=gen, slice="f(t) = F(0, t), i.e. f^r(t) = F(0, -t)")
        neg = G.negation_index()
        # expand f^r in atoms E_{-omega} T_x (h * g^dagger); store omega
        for x, w, c in _expansion(reflect(f), gen):
            om = int(neg[w])
            terms.append(Term(c, x, om, tf_shift(h, _pp(G, x, w)) * c))
        cost = sum(s0_norm(t.signal, g).value for t in terms)

    else:  # R
        h1 = g if h is None else h
        h2 = delta(G) if h2 is None else h2
        gen = convolve(h1, h2)
        params.update(window=g, h=h1, h2=h2, generator=gen)
        for x, w, c in _expansion(f, gen):
            terms.append(Term(c, x, w, tf_shift(h1, _pp(G, x, w)) * c, modulate(h2, G.coords(w))))
        cost = sum(s0_norm(t.signal, g).value * s0_norm(t.partner, g).value for t in terms)

    return Representation(kind, f, tuple(terms), float(cost), params)


def _chars(G: GroupSpec) -> np.ndarray:
    from .groups import character_matrix

    return character_matrix(G)


def _l_cost(f: Signal, window: Signal) -> float:
    # plain coefficient sum, not the plane-weighted L^1 norm
    return float(np.abs(canonical_atomic_coefficients(f, window).values).sum())


def representation_inequality_check(rep: Representation, rtol: float = RTOL) -> list[Check]:
    """One-sided bounds for a representation.

    Lower: ``c ||f||_{S0,g} <= cost``. Upper: ``cost <= C * (canonical L-cost
    for the generating window)``. The constants per kind:

    ====  ==========================  ======================
    kind  c                           C
    ====  ==========================  ======================
    M     ``||1_K||_{S0,g}^{-1}``     ``||1_K||_A``
    N     ``||h||_{S0,g}^{-1}``       ``||g_K||_1``
    O     ``||g||_{S0,g}^{-1}``       ``||h||_1``
    P     ``||g||_{S0,g}^{-1}``       ``||h||_A``
    Q     not checked                 ``||h||_{S0,g}`` (L-cost of ``f^r``)
    R     ``||g||_inf``               ``||h1|| ||h2||``
    ====  ==========================  ======================

    For kind N, ``h`` is the atom window itself, whose transform is one on
    ``K_dual``. For kind L the canonical expansion satisfies
    ``||g||_2^2 cost = ||f||_{S0,g}``.
    """
    f = rep.target
    g = rep.params["analysis_window"]
    s0 = s0_norm(f, g).value if not f.is_zero() else 0.0
    k = rep.kind
    name = f"kind {k}"
    out: list[Check] = []
    if k == "L":
        win = rep.params["window"]
        if rep.params.get("method") == "canonical":
            out.append(equality(f"{name} canonical identity", lp_norm(win, 2) ** 2 * rep.cost, s0, rtol))
        else:
            out.append(inequality(f"{name} lower", s0, s0_norm(win, win).value * rep.cost, rtol))
        return out
    gen = rep.params["generator"]
    # kind Q expands f^r, so its L-cost is that of f^r for the same window
    src = reflect(f) if k == "Q" else f
    lcost = _l_cost(src, gen) if not f.is_zero() else 0.0
    if k == "M":
        lo, C = 1.0 / s0_norm(gen, g).value, a_norm(gen)
    elif k == "N":
        lo, C = 1.0 / s0_norm(gen, g).value, lp_norm(gen, 1)
    elif k == "O":
        lo, C = 1.0 / s0_norm(g, g).value, lp_norm(rep.params["h"], 1)
    elif k == "P":
        lo, C = 1.0 / s0_norm(g, g).value, a_norm(rep.params["h"])
    elif k == "Q":
        lo, C = None, s0_norm(rep.params["h"], g).value
    else:
        lo = lp_norm(g, INF)
        C = s0_norm(rep.params["h"], g).value * s0_norm(rep.params["h2"], g).value
    if lo is None:
        out.append(Check(f"{name} lower", 0.0, 0.0, "restriction operator norm not computed", skipped=True))
    else:
        out.append(inequality(f"{name} lower", lo * s0, rep.cost, rtol))
    out.append(inequality(f"{name} upper", rep.cost, C * lcost, rtol))
    return out


# BUPU ---------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class BUPU:
    """Partition of unity on ``G`` (side ``"time"``) or on ``Ghat`` (side ``"frequency"``).

    ``windows`` are signals on ``G``. On the frequency side their Fourier
    transforms form the partition. ``centers`` and ``template`` are flat
    indices in ``G`` (time) or ``Ghat`` (frequency).
    """

    group: GroupSpec
    windows: tuple
    centers: tuple
    template: tuple
    side: str = "time"

    def __post_init__(self) -> None:
        if self.side not in ("time", "frequency"):
            raise ValueError("side must be 'time' or 'frequency'")
        if len(self.windows) != len(self.centers):
            raise ValueError("one center per window")
        for c in self.axioms():
            if not c.passed:
                raise ValueError(f"BUPU axiom violated: {c.name} ({c.details})")

    @property
    def space(self) -> GroupSpec:
        return self.group if self.side == "time" else dual_group(self.group)

    def profiles(self) -> np.ndarray:
        """Rows ``psi_i`` (time) or ``phihat_i`` (frequency)."""
        if self.side == "time":
            return np.stack([w.values for w in self.windows])
        return np.stack([fourier(w).values for w in self.windows])

    def window_bound(self) -> float:
        """``c2``: ``sup ||psi_i||_A`` or ``sup ||phi_i||_1``."""
        if self.side == "time":
            return max(a_norm(w) for w in self.windows)
        return max(lp_norm(w, 1) for w in self.windows)

    def overlap(self, K: Optional[Sequence[int]] = None) -> int:
        """``c1 = max_x #{i : (x + K) meets (x_i + W)}``; ``K`` defaults to ``{0}``."""
        S = self.space
        K = [0] if K is None else list(K)
        coords = S.coord_table()
        n = np.asarray(S.factors)
        best = 0
        boxes = []
        for c in self.centers:
            boxes.append({S.index(tuple((coords[c] + coords[t]) % n)) for t in self.template})
        for x in range(S.order):
            xk = {S.index(tuple((coords[x] + coords[k]) % n)) for k in K}
            best = max(best, sum(1 for b in boxes if b & xk))
        return best

    def axioms(self) -> list[Check]:
        prof = self.profiles()
        S = self.space
        tag = "a" if self.side == "time" else "b"
        total = prof.sum(axis=0)
        out = [equality(f"({tag}.i) partition of unity", total, np.ones(S.order), 0.0, 1e-12)]
        bound = self.window_bound()
        out.append(Check(f"({tag}.ii) window bound", 0.0 if np.isfinite(bound) else np.inf, 0.0, f"c2={bound:.12g}"))
        coords = S.coord_table()
        n = np.asarray(S.factors)
        worst = 0.0
        for row, c in zip(prof, self.centers):
            allowed = np.zeros(S.order, dtype=bool)
            for t in self.template:
                allowed[S.index(tuple((coords[c] + coords[t]) % n))] = True
            worst = max(worst, float(np.abs(row[~allowed]).max(initial=0.0)))
        out.append(Check(f"({tag}.iii) support in x_i + W", worst, 1e-12))
        c1 = self.overlap()
        out.append(Check(f"({tag}.iv) finite overlap", 0.0, 0.0, f"c1={c1}"))
        return out


def bupu_from_subgroup(H: Subgroup) -> BUPU:
    """``psi_i = 1_{x_i + H}`` over coset representatives, ``W = H``."""
    G = H.parent
    Q = quotient(G, H)
    windows = []
    for i in range(Q.order):
        vals = np.zeros(G.order, dtype=complex)
        vals[Q.coset(i)] = 1.0
        windows.append(Signal(G, vals))
    return BUPU(G, tuple(windows), tuple(int(r) for r in Q.reps_array), tuple(int(e) for e in H.index_array), "time")


def bupu_from_subgroup_dual(V: Subgroup) -> BUPU:
    """``phihat_i = 1_{omega_i + V}`` for a subgroup ``V`` of ``Ghat`` (e.g. ``H^perp``)."""
    Gh = V.parent
    G = dual_group(Gh)
    Q = quotient(Gh, V)
    windows = []
    for i in range(Q.order):
        vals = np.zeros(Gh.order, dtype=complex)
        vals[Q.coset(i)] = 1.0
        windows.append(Signal(G, inverse_fourier(Signal(Gh, vals)).values))
    return BUPU(G, tuple(windows), tuple(int(r) for r in Q.reps_array), tuple(int(e) for e in V.index_array), "frequency")


def _check_group(f: Signal, bupu: BUPU) -> None:
    if f.group.factors != bupu.group.factors or f.group.weight != bupu.group.weight:
        raise ValueError("signal and BUPU live on different groups")


def t_norm(f: Signal, bupu: BUPU) -> float:
    """``sum_i ||f psi_i||_A``."""
    _check_group(f, bupu)
    if bupu.side != "time":
        raise ValueError("t_norm needs a time-side BUPU")
    return float(sum(a_norm(multiply(f, w)) for w in bupu.windows))


def u_norm(f: Signal, bupu: BUPU) -> float:
    """``sum_i ||f * phi_i||_1``."""
    _check_group(f, bupu)
    if bupu.side != "frequency":
        raise ValueError("u_norm needs a frequency-side BUPU")
    return float(sum(lp_norm(convolve(f, w), 1) for w in bupu.windows))


def m_representation_from_bupu(f: Signal, bupu: BUPU) -> Representation:
    """``g_i = T_{-x_i} f . T_{-x_i} psi_i`` at ``x_i``; the cost equals ``t_norm``."""
    _check_group(f, bupu)
    G = f.group
    terms = []
    neg = G.negation_index()
    for w, c in zip(bupu.windows, bupu.centers):
        back = G.coords(int(neg[c]))
        terms.append(Term(1.0, int(c), None, multiply(translate(f, back), translate(w, back))))
    cost = sum(a_norm(t.signal) for t in terms)
    atom = indicator(G, list(bupu.template))
    return Representation("M", f, tuple(terms), float(cost), {"K": list(bupu.template), "generator": atom, "window": atom, "analysis_window": delta(G)})


def n_representation_from_bupu(f: Signal, bupu: BUPU) -> Representation:
    """``g_i = E_{-omega_i}(f * phi_i)`` at ``omega_i``; the cost equals ``u_norm``."""
    _check_group(f, bupu)
    G = f.group
    neg = G.negation_index()
    terms = []
    for w, c in zip(bupu.windows, bupu.centers):
        terms.append(Term(1.0, None, int(c), modulate(convolve(f, w), G.coords(int(neg[c])))))
    cost = sum(lp_norm(t.signal, 1) for t in terms)
    atom = Signal(G, inverse_fourier(indicator(dual_group(G), list(bupu.template))).values)
    return Representation("N", f, tuple(terms), float(cost), {"K_dual": list(bupu.template), "generator": atom, "window": atom, "analysis_window": delta(G)})


def _m_support(rep: Representation) -> list[int]:
    G = rep.target.group
    if "K" in rep.params:
        return [G.index(G.element(k).coords) for k in rep.params["K"]]
    sup = set()
    for t in rep.terms:
        sup |= set(np.flatnonzero(np.abs(t.signal.values) > 0).tolist())
    return sorted(sup)


def bupu_time_check(f: Signal, bupu: BUPU, g: Signal, m_rep: Representation, rtol: float = RTOL) -> list[Check]:
    """Computable forms of the time-side BUPU bounds.

    * the constructive M-representation has cost exactly ``t_norm``;
    * ``||1_W||_{S0,g}^{-1} ||f||_{S0,g} <= t_norm``;
    * ``t_norm <= c1 c2 cost(m_rep)`` with ``c1`` taken for the support of ``m_rep``.
    """
    t = t_norm(f, bupu)
    own = m_representation_from_bupu(f, bupu)
    h = indicator(f.group, list(bupu.template))
    s0 = s0_norm(f, g).value
    c1 = bupu.overlap(_m_support(m_rep))
    c2 = bupu.window_bound()
    return [
        equality("bupu time constructive cost", own.cost, t, rtol),
        Check("bupu time resynthesis", own.resynthesis_error(), 1e-10),
        inequality("bupu time lower", s0 / s0_norm(h, g).value, t, rtol),
        inequality("bupu time upper", t, c1 * c2 * m_rep.cost, rtol, details=f"c1={c1} c2={c2:.6g}"),
    ]


def bupu_frequency_check(f: Signal, bupu: BUPU, g: Signal, n_rep: Representation, rtol: float = RTOL) -> list[Check]:
    """Frequency-side analogue with ``u_norm`` and an N-representation."""
    u = u_norm(f, bupu)
    own = n_representation_from_bupu(f, bupu)
    h = own.params["generator"]
    s0 = s0_norm(f, g).value
    Kd = n_rep.params.get("K_dual")
    Gh = dual_group(f.group)
    K = None if Kd is None else [Gh.index(Gh.element(k).coords) for k in Kd]
    c1 = bupu.overlap(K)
    c2 = bupu.window_bound()
    return [
        equality("bupu frequency constructive cost", own.cost, u, rtol),
        Check("bupu frequency resynthesis", own.resynthesis_error(), 1e-10),
        inequality("bupu frequency lower", s0 / s0_norm(h, g).value, u, rtol),
        inequality("bupu frequency upper", u, c1 * c2 * n_rep.cost, rtol, details=f"c1={c1} c2={c2:.6g}"),
    ]
