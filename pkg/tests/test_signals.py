import json
from fractions import Fraction

import numpy as np
import pytest

from feichtinger.groups import GroupSpec, PhasePoint, dual_group
from feichtinger.signals import (
    INF,
    Signal,
    a_norm,
    asym_coord,
    asym_coord_inverse,
    conjugate,
    constant,
    convolve,
    delta,
    fourier,
    fourier_dft_reference,
    inner,
    inverse_fourier,
    involution,
    lp_norm,
    modulate,
    partial_fourier_1,
    partial_fourier_2,
    random_signal,
    reflect,
    signal_from_json,
    signal_to_json,
    symplectic_fourier,
    tensor,
    tf_shift,
    translate,
)

Z4 = GroupSpec((4,))


def sig(G, vals):
    return Signal(G, np.asarray(vals, dtype=complex))


def test_signal_validation():
    with pytest.raises(ValueError):
        Signal(Z4, [1, 2, 3])
    with pytest.raises(ValueError):
        Signal(Z4, [1, 2, 3, np.nan])


def test_translate_hand_example():
    f = sig(Z4, [1, 2, 0, -1])
    assert np.allclose(translate(f, 1).values, [-1, 1, 2, 0])
    assert np.allclose(translate(f, 0).values, f.values)


def test_translate_group_law(rng):
    G = GroupSpec((6,))
    f = random_signal(G, rng)
    assert np.allclose(translate(translate(f, 2), 3).values, translate(f, 5).values)


def test_modulate_hand_example():
    assert np.allclose(modulate(constant(Z4), 1).values, [1, 1j, -1, -1j])


def test_commutation_relation(rng):
    G = GroupSpec((2, 3))
    f = random_signal(G, rng)
    x, w = (1, 2), (1, 1)
    phase = np.exp(2j * np.pi * (1 / 2 + 2 / 3))
    lhs = modulate(translate(f, x), w).values
    rhs = phase * translate(modulate(f, w), x).values
    assert np.allclose(lhs, rhs)


def test_tf_shift_of_delta():
    out = tf_shift(delta(Z4), PhasePoint.of(Z4, 1, 1))
    assert np.allclose(out.values, [0, 1j, 0, 0])


def test_tf_shift_unitary(rng):
    G = GroupSpec((6,), Fraction(1, 3))
    for _ in range(50):
        f = random_signal(G, rng)
        chi = PhasePoint.of(G, int(rng.integers(6)), int(rng.integers(6)))
        assert lp_norm(tf_shift(f, chi), 2) == pytest.approx(lp_norm(f, 2), rel=1e-12)


def test_reflection_family(rng):
    f = sig(GroupSpec((3,)), [1, 2j, 3])
    assert np.allclose(reflect(f).values, [1, 3, 2j])
    assert np.allclose(reflect(delta(Z4)).values, delta(Z4).values)
    h = random_signal(Z4, rng)
    assert np.allclose(involution(involution(h)).values, h.values)
    assert np.allclose(involution(h).values, conjugate(reflect(h)).values)


def test_convolution_hand_and_theorem(rng):
    Z2 = GroupSpec((2,))
    assert np.allclose(convolve(sig(Z2, [1, 1]), sig(Z2, [1, 1])).values, [2, 2])
    G = GroupSpec((2, 3), Fraction(2, 5))
    f, g = random_signal(G, rng), random_signal(G, rng)
    assert np.allclose(fourier(convolve(f, g)).values, fourier(f).values * fourier(g).values)


def test_norms_hand():
    f = sig(Z4, [1, 2, 0, -1])
    assert lp_norm(f, 1) == 4
    assert lp_norm(f, INF) == 2
    assert lp_norm(f, 2) == pytest.approx(np.sqrt(6))
    with pytest.raises(ValueError):
        lp_norm(f, 0.5)
    for n in (3, 5, 8):
        assert a_norm(delta(GroupSpec((n,)))) == pytest.approx(1.0)


def test_fourier_hand_and_reference(rng):
    Z2 = GroupSpec((2,))
    assert np.allclose(fourier(sig(Z2, [1, -1])).values, [0, 2])
    G = GroupSpec((2, 3, 4), Fraction(3, 7))
    f = random_signal(G, rng)
    fh = fourier(f)
    assert fh.group == dual_group(G)
    assert np.allclose(fh.values, fourier_dft_reference(f).values)
    assert np.allclose(inverse_fourier(fh).values, f.values)
    assert inner(fh, fh).real == pytest.approx(inner(f, f).real)


def test_partial_fourier_of_delta():
    G1 = G2 = GroupSpec((2,))
    F = delta(GroupSpec((2, 2)))
    out = partial_fourier_2(F, G1, G2).values.reshape(2, 2)
    assert np.allclose(out, [[1, 1], [0, 0]])
    out1 = partial_fourier_1(F, G1, G2).values.reshape(2, 2)
    assert np.allclose(out1, [[1, 0], [1, 0]])


def test_partial_composition_is_full(rng):
    G1, G2 = GroupSpec((2,), 3), GroupSpec((3,), Fraction(1, 2))
    F = random_signal(GroupSpec((2, 3), Fraction(3, 2)), rng)
    both = partial_fourier_1(partial_fourier_2(F, G1, G2), G1, dual_group(G2))
    assert np.allclose(both.values, fourier(F).values)


def test_symplectic_of_delta():
    G = GroupSpec((2,))
    F = delta(GroupSpec((2, 2), Fraction(1, 2)))
    assert np.allclose(symplectic_fourier(F, G).values, 0.5)


def test_symplectic_involutive(rng):
    G = GroupSpec((3,), 2)
    F = random_signal(GroupSpec((3, 3), G.weight * dual_group(G).weight), rng)
    assert np.allclose(symplectic_fourier(symplectic_fourier(F, G), G).values, F.values)


def test_tensor_hand():
    G = GroupSpec((2,))
    assert np.allclose(tensor(sig(G, [1, 2]), sig(G, [3, 4])).values, [3, 4, 6, 8])


def test_asym_coord():
    G = GroupSpec((2,))
    F = delta(GroupSpec((2, 2)), (1, 0))
    out = asym_coord(F, G)
    assert np.allclose(out.values, delta(GroupSpec((2, 2)), (1, 1)).values)
    assert np.allclose(asym_coord_inverse(out, G).values, F.values)


def test_json_round_trip(rng):
    G = GroupSpec((2, 3), Fraction(1, 6))
    f = random_signal(G, rng)
    data = json.loads(json.dumps(signal_to_json(f)))
    assert data["group"] == {"factors": [2, 3], "weight": "1/6"}
    g = signal_from_json(data)
    assert g.group == G and np.array_equal(g.values, f.values)
    with pytest.raises(ValueError):
        signal_from_json({"values": []})


def test_random_signal_documented_draw():
    G = GroupSpec((3,))
    f = random_signal(G, np.random.default_rng(7))
    r = np.random.default_rng(7)
    re, im = r.uniform(-1, 1, 3), r.uniform(-1, 1, 3)
    assert np.array_equal(f.values, re + 1j * im)
