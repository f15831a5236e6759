import json
from fractions import Fraction

import numpy as np
import pytest

from feichtinger import duality as du
from feichtinger import operators as op
from feichtinger.groups import GroupSpec, PhasePoint, annihilator, dual_group, subgroup_from_generators
from feichtinger.signals import (
    Signal,
    convolve,
    delta,
    fourier,
    lp_norm,
    multiply,
    random_signal,
    reflect,
    tensor,
    tf_shift,
)
from feichtinger.tfa import gaussian_window, s0_norm, stft

Z4 = GroupSpec((4,))
Z6 = GroupSpec((6,))


def test_basic_pairings(rng):
    G = GroupSpec((2, 3), Fraction(1, 3))
    f, h = random_signal(G, rng), random_signal(G, rng)
    assert du.pair(f, du.delta_functional(G, (1, 2))) == pytest.approx(f.values[5])
    neg = dual_group(G).negation_index()
    for w in range(6):
        assert du.pair(f, du.character_functional(G, w)) == pytest.approx(fourier(f).values[neg[w]])
    assert du.pair(f, du.induced(h)) == pytest.approx(du.pair(h, du.induced(f)))
    assert du.induced(h)(f) == du.pair(f, du.induced(h))


def test_functional_arithmetic_and_validation(rng):
    f, h = random_signal(Z4, rng), random_signal(Z4, rng)
    s = du.induced(h)
    assert (s + s)(f) == pytest.approx(2 * s(f))
    assert (3 * s)(f) == pytest.approx(3 * s(f))
    with pytest.raises(ValueError):
        du.Functional(Z4, h, "tempered")
    with pytest.raises(ValueError):
        du.pair(random_signal(Z6, rng), s)


def test_haar_functional():
    H = subgroup_from_generators(Z6, [(2,)], Fraction(1, 2))
    f = Signal(Z6, np.arange(6.0))
    assert du.haar_on_subgroup(H)(f) == pytest.approx((0 + 2 + 4) / 2)


def test_operations_on_functionals(rng):
    G = GroupSpec((5,), 2)
    f, g, h = (random_signal(G, rng) for _ in range(3))
    s = du.induced(h)
    assert du.pair(f, du.conj_functional(s)) == pytest.approx(np.conj(du.pair(Signal(G, np.conj(f.values)), s)))
    assert du.pair(f, du.multiply_functional(g, s)) == pytest.approx(du.pair(multiply(f, g), s))
    assert du.pair(f, du.convolve_functional(g, s)) == pytest.approx(du.pair(convolve(f, reflect(g)), s))


def test_delta_convolution_unit(rng):
    f, h = random_signal(Z4, rng), random_signal(Z4, rng)
    d = du.delta_functional(Z4).density
    assert np.allclose(multiply(convolve(d, f), h).values, multiply(f, h).values)


def test_minfty_delta():
    assert du.minfty_norm(du.delta_functional(Z4), delta(Z4)) == pytest.approx(1.0)


def test_stft_functional_delta():
    g = gaussian_window(Z6)
    V = du.stft_functional(du.delta_functional(Z6), g).values.reshape(6, 6)
    expected = reflect(g).values
    assert np.allclose(V, expected[:, None] * np.ones(6)[None, :])


def test_membership(rng):
    d = delta(Z4)
    assert du.s0_membership_check(du.induced(d), d).norm == pytest.approx(1.0)
    h, g = random_signal(Z6, rng), random_signal(Z6, rng)
    m = du.s0_membership_check(du.induced(h), g)
    assert m.norm == pytest.approx(s0_norm(h, g).value)
    assert np.allclose(m.recovered.values, h.values)
    assert m.max_pairing_err < 1e-12


def test_stft_inversion(rng):
    s = du.induced(random_signal(Z6, rng))
    assert du.stft_inversion_check(s, random_signal(Z6, rng), random_signal(Z6, rng)).passed


def test_extended_fourier():
    G = GroupSpec((6,), Fraction(1, 3))
    Gh = dual_group(G)
    F = du.fourier_functional(du.delta_functional(G, 0))
    assert F.kind == "character"
    assert np.allclose(F.density.values, du.character_functional(Gh, 0).density.values)
    F2 = du.fourier_functional(du.delta_functional(G, 2))
    assert np.allclose(F2.density.values, du.character_functional(Gh, 4).density.values)
    H = subgroup_from_generators(G, [(2,)], 1)
    FH = du.fourier_functional(du.haar_on_subgroup(H))
    assert np.allclose(FH.density.values, du.haar_on_subgroup(annihilator(H)).density.values)


def test_extended_fourier_pairings(rng):
    H = subgroup_from_generators(Z6, [(2,)])
    FH = du.fourier_functional(du.haar_on_subgroup(H))
    perp = du.haar_on_subgroup(annihilator(H))
    for _ in range(20):
        h = random_signal(dual_group(Z6), rng)
        assert FH(h) == pytest.approx(perp(h), abs=1e-10)


def test_banach_extension(rng):
    G = GroupSpec((5,))
    T, _ = op.tf_shift_operator(G, PhasePoint.of(G, 1, 2))
    ext = du.banach_adjoint_extend(T, du.delta_functional(G, 3))
    phase = np.exp(2j * np.pi * 2 * 4 / 5)
    for _ in range(5):
        f2 = random_signal(G, rng)
        # pi(1, 2) delta_3 is omega_2(4) delta_4
        assert du.pair(f2, ext) == pytest.approx(phase * f2.values[4])
        rhs = np.conj(T.adjoint()(Signal(G, np.conj(f2.values))).values[3])
        assert du.pair(f2, ext) == pytest.approx(rhs)
    with pytest.raises(ValueError):
        du.banach_adjoint_extend(op.conjugation_operator(G)[0], du.delta_functional(G))


def test_oracle_delta_bound():
    g = delta(Z4)
    res = du.dual_norm_oracle(du.delta_functional(Z4), g)
    assert res.lower <= res.upper + 1e-9
    assert res.value == pytest.approx(1.0 / lp_norm(g, 1), abs=1e-4)
    assert du.delta_bound_check(Z4, 1, g).passed


def test_oracle_sandwich(rng):
    for _ in range(20):
        g = random_signal(Z4, rng)
        s = du.induced(random_signal(Z4, rng))
        assert all(c.passed for c in du.sandwich_check(s, g))


def test_oracle_zero_and_size_cap(rng):
    assert du.dual_norm_oracle(du.zero_functional(Z4), delta(Z4)).value == 0
    G = GroupSpec((16,))
    with pytest.raises(du.OracleSizeError):
        du.dual_norm_oracle(du.delta_functional(G), delta(G))


def test_smoothing(rng):
    for _ in range(10):
        s = du.induced(random_signal(Z4, rng))
        f, h, g = (random_signal(Z4, rng) for _ in range(3))
        assert all(c.passed for c in du.smoothing_check(s, f, h, g).checks)


def test_tensor_functional(rng):
    G1, G2 = GroupSpec((2,)), GroupSpec((3,))
    s1, s2 = du.induced(random_signal(G1, rng)), du.induced(random_signal(G2, rng))
    f1, f2 = random_signal(G1, rng), random_signal(G2, rng)
    t = du.tensor_functional(s1, s2)
    assert t(tensor(f1, f2)) == pytest.approx(s1(f1) * s2(f2))


def test_bilinear_basis_tensors(rng):
    G1, G2, G3 = GroupSpec((2,)), GroupSpec((3,)), GroupSpec((6,))
    P = GroupSpec((2, 3))
    T = op.Operator(P, G3, rng.normal(size=(6, 6)))
    A = du.bilinear_from_operator(T, G1, G2)
    for i in range(2):
        for j in range(3):
            e1, e2 = delta(G1, i), delta(G2, j)
            assert np.allclose(A(e1, e2).values, T(tensor(e1, e2)).values, atol=1e-12)
    assert np.allclose(du.operator_from_bilinear(A, G1, G2, G3).matrix, T.matrix)


def test_kernel_hand_cases():
    G = GroupSpec((3,), 2)
    K = du.operator_to_kernel(op.Operator(G, G, np.eye(3)))
    assert np.allclose(K.matrix, np.eye(3) / 2)
    K0 = du.KernelFunctional.from_density(G, G, np.eye(1, 9).reshape(3, 3))
    T = du.kernel_to_operator(K0)
    f = Signal(G, [5, 1, 1])
    assert np.allclose(T(f).values, [10, 0, 0])


def test_kernel_fourier(rng):
    T, _ = op.fourier_operator(Z4)
    K = du.operator_to_kernel(T)
    from feichtinger.groups import character_matrix

    assert np.allclose(K.matrix, np.conj(character_matrix(Z4)).T)
    assert np.allclose(du.kernel_to_operator(K).matrix, T.matrix)


def test_kernel_round_trips_z3xz4(rng):
    G1, G2 = GroupSpec((3,)), GroupSpec((4,), Fraction(1, 2))
    for _ in range(20):
        kappa = rng.uniform(-1, 1, (3, 4)) + 1j * rng.uniform(-1, 1, (3, 4))
        K = du.KernelFunctional.from_density(G1, G2, kappa)
        assert np.abs(du.operator_to_kernel(du.kernel_to_operator(K)).matrix - kappa).max() <= 1e-12
        assert du.kernel_pairing_check(K, random_signal(G1, rng), random_signal(G2, rng)).passed


def test_kernel_composition(rng):
    G1, G2, G3 = GroupSpec((2,)), GroupSpec((3,), 3), GroupSpec((4,))
    K1 = du.KernelFunctional.from_density(G1, G2, rng.normal(size=(2, 3)))
    K2 = du.KernelFunctional.from_density(G2, G3, rng.normal(size=(3, 4)))
    T = du.kernel_to_operator(K2).compose(du.kernel_to_operator(K1))
    assert np.allclose(du.kernel_to_operator(du.compose_kernels(K1, K2)).matrix, T.matrix)
    with pytest.raises(ValueError):
        du.compose_kernels(K2, K1)


def test_functional_json(rng):
    s = du.delta_functional(Z6, 2)
    data = json.loads(json.dumps(du.functional_to_json(s)))
    assert data["kind"] == "delta"
    back = du.functional_from_json(data)
    assert back.kind == "delta" and np.array_equal(back.density.values, s.density.values)
