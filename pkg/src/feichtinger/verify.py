"""Verification suites: seeded random trials of every identity and inequality.

Each suite draws its signals from ``numpy.random.default_rng(seed)``
(a fresh generator per suite, so ``--suite all`` reproduces the individual
suites). Repeated trials of one relation are merged into a single check
holding the worst case.
"""
from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import decompositions as dec
from . import duality as du
from . import operators as op
from . import subgroups as sg
from . import tfa
from .checks import ATOL, RTOL, Check, equality, inequality, merge
from .groups import (
    GroupSpec,
    PhasePoint,
    all_subgroups,
    annihilator,
    dual_group,
    phase_space,
    product_group,
    subgroup_from_generators,
)
from .signals import (
    INF,
    Signal,
    a_norm,
    conjugate,
    convolve,
    delta,
    fourier,
    fourier_dft_reference,
    inner,
    inverse_fourier,
    lp_norm,
    multiply,
    random_signal,
    reflect,
    tensor,
)

__all__ = ["SUITES", "Report", "run_suite"]


@dataclass
class Report:
    suite: str
    group: str
    seed: int
    trials: int
    checks: list
    wall_time: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "group": self.group,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
            "wall_time": self.wall_time,
        }


class _Collector:
    def __init__(self, prefix: str) -> None:
        self.prefix = prefix
        self.bins: dict[str, list[Check]] = defaultdict(list)

    def add(self, check: Check) -> None:
        self.bins[f"{self.prefix}: {check.name}"].append(check)

    def extend(self, checks: Iterable[Check]) -> None:
        for c in checks:
            self.add(c)

    def eq(self, name: str, lhs, rhs, rtol: float = RTOL, atol: float = ATOL) -> None:
        self.add(equality(name, lhs, rhs, rtol, atol))

    def le(self, name: str, lhs, rhs, rtol: float = RTOL, atol: float = ATOL) -> None:
        self.add(inequality(name, lhs, rhs, rtol, atol))

    def skip(self, name: str, why: str) -> None:
        self.add(Check(name, 0.0, 0.0, why, skipped=True))

    def result(self) -> list[Check]:
        return [merge(name, checks) for name, checks in self.bins.items()]


def _rand_point(G: GroupSpec, rng: np.random.Generator) -> PhasePoint:
    return PhasePoint.of(G, int(rng.integers(G.order)), int(rng.integers(G.order)))


# suites -------------------------------------------------------------------
def _fourier(G: GroupSpec, rng, trials: int, rtol: float) -> list[Check]:
    c = _Collector("fourier")
    Gh = dual_group(G)
    c.eq("dual measure normalization", float(G.weight * Gh.weight * G.order), 1.0, 0.0, 0.0)
    for _ in range(trials):
        f, g = random_signal(G, rng), random_signal(G, rng)
        fh = fourier(f)
        c.eq("round trip", inverse_fourier(fh).values, f.values, 1e-12)
        c.eq("parseval", lp_norm(fh, 2), lp_norm(f, 2), 1e-12)
        c.eq("fft vs character sum", fh.values, fourier_dft_reference(f).values, 1e-12)
        c.eq("convolution theorem", fourier(convolve(f, g)).values, fh.values * fourier(g).values, 1e-12)
        c.eq("plancherel inner product", inner(fh, fourier(g)), inner(f, g), 1e-12)
    return c.result()


def _stft(G: GroupSpec, rng, trials: int, rtol: float) -> list[Check]:
    c = _Collector("stft")
    for _ in range(trials):
        f1, f2, g1, g2 = (random_signal(G, rng) for _ in range(4))
        V = tfa.stft(f1, g1)
        c.eq("two-path agreement", V.values, tfa.stft_two_path(f1, g1).values, rtol)
        c.eq("inversion", tfa.stft_adjoint(V, g2).values, inner(g2, g1) * f1.values, rtol)
        lhs, rhs = tfa.moyal_orthogonality(f1, f2, g1, g2)
        c.eq("moyal orthogonality", lhs, rhs, rtol)
        lhs, rhs = tfa.stft_product_inequality(f1, f2, g1, g2, _rand_point(G, rng))
        c.le("stft product inequality", lhs, rhs, 1e-12)
        coeffs = tfa.canonical_atomic_coefficients(f1, g1)
        c.eq("canonical resynthesis", tfa.synthesize(coeffs, g1).values, f1.values, 1e-10)
        c.add(tfa.well_definedness_check(f1, g1))
    return c.result()


def _norms(G: GroupSpec, rng, trials: int, rtol: float) -> list[Check]:
    c = _Collector("norms")
    small = GroupSpec((2,), Fraction(1, 2))
    for _ in range(trials):
        f, g, g2 = (random_signal(G, rng) for _ in range(3))
        vals = {m: tfa.s0_norm(f, g, m).value for m in tfa.METHODS}
        c.eq("stft vs convolution route", vals["stft"], vals["convolution"], rtol)
        c.eq("stft vs fourier-algebra route", vals["stft"], vals["fourier-algebra"], rtol)
        c.eq("convolution vs fourier-algebra route", vals["convolution"], vals["fourier-algebra"], rtol)
        c.extend(tfa.norm_symmetries_check(f, g, _rand_point(G, rng), _rand_point(G, rng), rtol))
        c.extend(tfa.equivalence_check(f, g, g2, rtol))
        c.extend(tfa.s0_embedding_inequalities_check(f, g))
        c.extend(tfa.discrete_compact_check(f))
        f2 = random_signal(G, rng)
        c.extend(tfa.banach_algebra_check(f, f2, g))
        c.extend(tfa.tensor_norm_identity(f, random_signal(small, rng), g, random_signal(small, rng), rtol))
        c.eq("canonical l1 identity", lp_norm(g, 2) ** 2 * float(np.abs(tfa.canonical_atomic_coefficients(f, g).values).sum()), vals["stft"], rtol)
        c.eq("modulation (1,1) is S0", tfa.modulation_norm(f, g, 1, 1), vals["stft"], rtol)
        for p in (1, 2, INF):
            lhs, rhs = tfa.minimality_instance_check(f, g, p)
            c.le(f"minimality instance p={'inf' if p is INF else p}", lhs, rhs, 1e-12)
    return c.result()


def _poisson(G: GroupSpec, rng, trials: int, rtol: float) -> list[Check]:
    c = _Collector("poisson")
    subs = all_subgroups(G)
    for H in subs:
        for wH in (G.weight, Fraction(1)):
            Hw = H.with_weight(wH)
            space = sg.subgroup_space(Hw)
            for _ in range(trials):
                f, g = random_signal(G, rng), random_signal(G, rng)
                lhs, rhs = sg.weil_check(f, Hw)
                c.eq("weil formula", lhs, rhs, 1e-12)
                lhs, rhs = sg.poisson_check(f, Hw)
                c.eq("poisson formula", lhs, rhs, 1e-10)
                lhs, rhs = sg.poisson_normalized_check(f, Hw)
                c.eq("poisson normalized", lhs, rhs, 1e-10)
                lhs, rhs = sg.restriction_fourier_identity(f, Hw)
                c.eq("restriction via fourier periodization", lhs, rhs, 1e-10)
                phi = sg.EnumSignal(space, random_signal(G, rng).values[: Hw.order])
                gH = sg.EnumSignal(space, random_signal(G, rng).values[: Hw.order])
                c.add(sg.zero_extension_norm_check(phi, gH, Hw, rtol))
                c.add(sg.coset_decomposition_check(f, Hw, gH, rtol)[0])
                c.extend(sg.periodization_laws_check(f, g, Hw, rtol))
                c.add(sg.intertwining_check(f, Hw, rtol))
    return c.result()


def _operators(G: GroupSpec, rng, trials: int, rtol: float) -> list[Check]:
    c = _Collector("operators")
    entries = op.catalog(G)
    for e in entries:
        res = op.commutation_extract(e.operator, e.alpha)
        err = res.max_err if res.ok else max(res.max_err, 1.0)
        c.add(Check(f"commutation {e.name}", err, 1e-9, "" if res.ok else f"violated at phase index {res.violation}"))
    if G.order > 1:
        bump = np.ones(G.order)
        bump[0] = 2.0
        bad = op.commutation_extract(op.Operator(G, G, np.diag(bump)), op.PhaseAutomorphism.identity(G))
        c.add(Check("non-unimodular multiplier rejected", 0.0 if not bad.ok else 1.0, 0.0))
    else:
        c.skip("non-unimodular multiplier rejected", "every scalar commutes on the trivial group")
    for _ in range(trials):
        for e in entries:
            T = e.operator
            f1, g1 = random_signal(T.domain, rng), random_signal(T.domain, rng)
            f2, g2 = random_signal(T.codomain, rng), random_signal(T.codomain, rng)
            for chk in op.isomorphism_norm_check(T, e.alpha, f1, g1, f2, g2, rtol):
                c.add(chk)
    return c.result()


def _gabor(G: GroupSpec, rng, trials: int, rtol: float) -> list[Check]:
    c = _Collector("gabor")
    P = phase_space(G)
    g = tfa.gaussian_window(G)
    lat = op.lattice(G, 2, 2)
    w_lat = P.weight * Fraction(P.order, lat.order)
    sysm = op.GaborSystem(g, lat, w_lat)
    sample = [int(rng.integers(P.order)) for _ in range(3)]
    c.extend(op.gabor_commutation_check(sysm, sample, 1e-10))
    A, B = op.frame_bounds(sysm)
    S = op.gabor_frame_operator(sysm).matrix
    try:
        dual = op.dual_window(sysm)
    except op.FrameError as exc:
        dual = None
        c.skip("dual window reconstruction", str(exc))
    for _ in range(trials):
        f = random_signal(G, rng)
        v = f.values
        rq = float(np.real(np.vdot(v, S @ v)) / np.real(np.vdot(v, v)))
        c.le("rayleigh quotient above lower bound", A, rq, 1e-10)
        c.le("rayleigh quotient below upper bound", rq, B, 1e-10)
        if dual is not None:
            c.eq("dual window reconstruction", op.gabor_reconstruct(sysm, f, dual).values, v, 1e-8)
    full = op.GaborSystem(g, subgroup_from_generators(P, [tuple([1] * 2 * G.rank)] + _unit_gens(P)), P.weight)
    Sf = op.gabor_frame_operator(full).matrix
    c.eq("full lattice tight frame", Sf, lp_norm(g, 2) ** 2 * np.eye(G.order), 1e-10)
    return c.result()


def _unit_gens(P: GroupSpec) -> list[tuple]:
    out = []
    for j in range(P.rank):
        e = [0] * P.rank
        e[j] = 1
        out.append(tuple(e))
    return out


def _kernel(G: GroupSpec, rng, trials: int, rtol: float) -> list[Check]:
    c = _Collector("kernel")
    G2 = GroupSpec((3,), Fraction(2, 3))
    G3 = GroupSpec((2,))
    Gh = dual_group(G)
    subs = all_subgroups(G)
    g_real = tfa.gaussian_window(G)
    for _ in range(trials):
        kappa = rng.uniform(-1, 1, (G.order, G2.order)) + 1j * rng.uniform(-1, 1, (G.order, G2.order))
        K = du.KernelFunctional.from_density(G, G2, kappa)
        K2 = du.operator_to_kernel(du.kernel_to_operator(K))
        c.eq("kernel round trip", K2.matrix, K.matrix, 1e-12)
        T = op.Operator(G, G2, rng.uniform(-1, 1, (G2.order, G.order)))
        c.eq("operator round trip", du.kernel_to_operator(du.operator_to_kernel(T)).matrix, T.matrix, 1e-12)
        f1, f2 = random_signal(G, rng), random_signal(G2, rng)
        c.add(du.kernel_pairing_check(K, f1, f2, rtol))
        Kb = du.KernelFunctional.from_density(G2, G3, rng.uniform(-1, 1, (G2.order, G3.order)))
        composed = du.kernel_to_operator(du.compose_kernels(K, Kb)).matrix
        c.eq("kernel of composition", composed, du.kernel_to_operator(Kb).compose(du.kernel_to_operator(K)).matrix, rtol)
        # bilinear correspondence on G2 x G3
        Tb = op.Operator(
            product_group(G2, G3), G, rng.uniform(-1, 1, (G.order, G2.order * G3.order))
        )
        A = du.bilinear_from_operator(Tb, G2, G3)
        c.eq("bilinear correspondence", du.operator_from_bilinear(A, G2, G3, G).matrix, Tb.matrix, 1e-12)

        # functionals
        h, f, g = random_signal(G, rng), random_signal(G, rng), random_signal(G, rng)
        sigma = du.induced(h)
        x = int(rng.integers(G.order))
        w = int(rng.integers(G.order))
        c.eq("delta evaluation", du.pair(f, du.delta_functional(G, x)), f.values[x], 1e-12)
        negw = int(Gh.negation_index()[w])
        c.eq("character pairing is fourier at -omega", du.pair(f, du.character_functional(G, w)), fourier(f).values[negw], 1e-12)
        c.eq("induced pairing symmetric", du.pair(f, sigma), du.pair(h, du.induced(f)), 1e-12)
        c.eq("conjugation rule", du.pair(f, du.conj_functional(sigma)), np.conj(du.pair(conjugate(f), sigma)), 1e-12)
        c.eq("multiplication rule", du.pair(f, du.multiply_functional(g, sigma)), du.pair(multiply(f, g), sigma), 1e-12)
        c.eq("convolution rule", du.pair(f, du.convolve_functional(g, sigma)), du.pair(convolve(f, reflect(g)), sigma), 1e-12)
        c.eq("functional stft of induced", du.stft_functional(sigma, g).values, tfa.stft(h, g).values, 1e-12)
        c.add(du.stft_inversion_check(sigma, g, f, rtol))
        mem = du.s0_membership_check(sigma, g)
        c.eq("membership norm is S0 norm", mem.norm, tfa.s0_norm(h, g).value, rtol)
        c.add(Check("membership recovery", mem.max_pairing_err, 1e-9))
        c.eq("minf is modulation (inf,inf)", du.minfty_norm(sigma, g_real), tfa.modulation_norm(sigma, g_real, INF, INF), 1e-12)
        FF = du.fourier_functional(du.fourier_functional(sigma))
        c.eq("extended fourier twice is reflection", FF.density.values, reflect(h).values, 1e-12)
        c.eq("extended fourier of delta", du.fourier_functional(du.delta_functional(G, x)).density.values,
             du.character_functional(Gh, G.negation_index()[x]).density.values, 1e-12)
        c.eq("extended fourier of character", du.fourier_functional(du.character_functional(G, w)).density.values,
             du.delta_functional(Gh, w).density.values, 1e-12)
        H = subs[int(rng.integers(len(subs)))].with_weight(Fraction(int(rng.integers(1, 4)), int(rng.integers(1, 4))))
        c.eq("extended fourier of subgroup measure", du.fourier_functional(du.haar_on_subgroup(H)).density.values,
             du.haar_on_subgroup(annihilator(H)).density.values, 1e-12)
        test = random_signal(Gh, rng)
        c.eq("extended fourier pairing", du.pair(test, du.fourier_functional(sigma)), du.pair(fourier(test), sigma), 1e-12)
        F, _ = op.fourier_operator(G)
        ext = du.banach_adjoint_extend(F, sigma)
        c.eq("banach extension of fourier", ext.density.values, du.fourier_functional(sigma).density.values, 1e-12)
        back = du.banach_adjoint_extend(F.inverse(), ext)
        c.eq("extension of unitary inverse", back.density.values, h.values, 1e-12)
        pair_lhs = du.pair(f2, du.banach_adjoint_extend(T, sigma))
        Ts = T.adjoint()
        c.eq("banach extension pairing", pair_lhs, du.pair(conjugate(Ts(conjugate(f2))), sigma), 1e-12)
        s2 = du.induced(random_signal(G2, rng))
        g2 = random_signal(G2, rng)
        tf_ = du.tensor_functional(sigma, s2)
        c.eq("tensor functional pairing", du.pair(tensor(f, f2), tf_), du.pair(f, sigma) * du.pair(f2, s2), 1e-12)
        c.eq("tensor minf multiplicative", du.minfty_norm(tf_, tensor(g, g2)), du.minfty_norm(sigma, g) * du.minfty_norm(s2, g2), rtol)
        if G.order <= du.ORACLE_MAX_ORDER:
            c.skip("smoothing bounds (surrogate)", "covered by the dual suite on small groups")
        else:
            sm = du.smoothing_check(sigma, f, random_signal(G, rng), g)
            for chk in sm.checks:
                c.add(Check(chk.name + " (surrogate)", chk.max_abs_err, chk.tolerance, chk.details))
    return c.result()


def _bupu(G: GroupSpec, rng, trials: int, rtol: float) -> list[Check]:
    c = _Collector("bupu")
    subs = all_subgroups(G)
    families = [(dec.bupu_from_subgroup(H), dec.bupu_from_subgroup_dual(annihilator(H))) for H in subs]
    for bt, bf in families:
        c.extend(bt.axioms())
        c.extend(bf.axioms())
    for _ in range(trials):
        # the representations do not depend on the partition, so build them once per trial
        f, g, f2 = random_signal(G, rng), random_signal(G, rng), random_signal(G, rng)
        K = sorted({0, int(rng.integers(G.order))})
        Kd = sorted({0, int(rng.integers(G.order))})
        m_rep = dec.build_representation("M", f, g=g, K=K)
        n_rep = dec.build_representation("N", f, g=g, K_dual=Kd)
        lam = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        for bt, bf in families:
            c.extend(dec.bupu_time_check(f, bt, g, m_rep, rtol))
            c.extend(dec.bupu_frequency_check(f, bf, g, n_rep, rtol))
            c.eq("t_norm homogeneity", dec.t_norm(f * lam, bt), abs(lam) * dec.t_norm(f, bt), rtol)
            c.le("t_norm triangle", dec.t_norm(f + f2, bt), dec.t_norm(f, bt) + dec.t_norm(f2, bt), rtol)
            c.le("u_norm triangle", dec.u_norm(f + f2, bf), dec.u_norm(f, bf) + dec.u_norm(f2, bf), rtol)
    one = dec.bupu_from_subgroup(subgroup_from_generators(G, _unit_gens(G)))
    f = random_signal(G, rng)
    c.eq("single window t_norm is A norm", dec.t_norm(f, one), a_norm(f), 1e-12)
    n_rep = max(1, min(trials, 3))
    for _ in range(n_rep):
        f, g = random_signal(G, rng), random_signal(G, rng)
        for kind, kw in (
            ("L", {}),
            ("M", {"K": [0, 1 % G.order]}),
            ("N", {"K_dual": [0, 1 % G.order]}),
            ("O", {"h": random_signal(G, rng)}),
            ("P", {"h": random_signal(G, rng)}),
            ("Q", {"h": random_signal(G, rng)}),
            ("R", {"h": random_signal(G, rng), "h2": random_signal(G, rng)}),
        ):
            rep = dec.build_representation(kind, f, g=g, **kw)
            c.add(Check(f"kind {kind} resynthesis", rep.resynthesis_error(), 1e-10))
            c.extend(dec.representation_inequality_check(rep, rtol))
    return c.result()


def _dual(G: GroupSpec, rng, trials: int, rtol: float) -> list[Check]:
    c = _Collector("dual")
    names = ("minf lower sandwich", "minf upper sandwich", "delta dual-norm bound", "atomic sandwich lower",
             "atomic sandwich upper", "smoothing (sigma*f)h bound", "smoothing (sigma h)*f bound", "zero functional")
    if G.order > du.ORACLE_MAX_ORDER:
        for n in names:
            c.skip(n, f"dual-norm oracle limited to |G| <= {du.ORACLE_MAX_ORDER}")
        return c.result()
    c.eq("zero functional", du.dual_norm_oracle(du.zero_functional(G), delta(G)).value, 0.0, 0.0, 0.0)
    for _ in range(trials):
        g = random_signal(G, rng)
        sigma = du.induced(random_signal(G, rng))
        c.extend(du.sandwich_check(sigma, g))
        c.add(du.delta_bound_check(G, int(rng.integers(G.order)), g))
        f = random_signal(G, rng)
        bp = tfa.atomic_norm_bp(f, g, tol=1e-7, max_iter=20000)
        s0 = tfa.s0_norm(f, g).value
        # ||g||_{S0,g}^{-1} ||f||_{S0,g} <= ||f||_L <= ||g||_2^{-2} ||f||_{S0,g}, 2% solver slack
        c.le("atomic sandwich lower", s0 / tfa.s0_norm(g, g).value, bp.value * 1.02, 0.0)
        c.le("atomic sandwich upper", bp.value, s0 / lp_norm(g, 2) ** 2, 1e-9)
        sm = du.smoothing_check(sigma, f, random_signal(G, rng), g)
        c.extend(sm.checks)
    return c.result()


SUITES: dict[str, Callable] = {
    "fourier": _fourier,
    "stft": _stft,
    "norms": _norms,
    "poisson": _poisson,
    "operators": _operators,
    "gabor": _gabor,
    "kernel": _kernel,
    "bupu": _bupu,
    "dual": _dual,
}


def run_suite(name: str, G: GroupSpec, trials: int = 10, seed: int = 0, rtol: float = RTOL) -> Report:
    """Run one suite (or ``"all"``) and return a report with checks sorted by name."""
    if name != "all" and name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    if trials < 1:
        raise ValueError("trials must be positive")
    start = time.perf_counter()
    names = list(SUITES) if name == "all" else [name]
    checks: list[Check] = []
    for n in names:
        checks.extend(SUITES[n](G, np.random.default_rng(seed), trials, rtol))
    checks.sort(key=lambda ch: ch.name)
    return Report(name, str(G), seed, trials, checks, time.perf_counter() - start)
