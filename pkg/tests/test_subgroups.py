from fractions import Fraction

import numpy as np
import pytest

from feichtinger import subgroups as sg
from feichtinger.groups import GroupSpec, all_subgroups, subgroup_from_generators
from feichtinger.signals import constant, delta, random_signal

Z6 = GroupSpec((6,))
H3 = subgroup_from_generators(Z6, [(2,)])


def test_periodize_delta():
    p = sg.periodize(delta(Z6), H3)
    assert np.allclose(p.values, [1, 0])
    assert p.space.labels.tolist() == [0, 1]


def test_restrict_and_zero_extend(rng):
    f = random_signal(Z6, rng)
    r = sg.restrict(f, H3)
    assert np.allclose(r.values, f.values[[0, 2, 4]])
    z = sg.zero_extend(r, H3)
    assert np.allclose(z.values[[1, 3, 5]], 0)
    assert np.allclose(z.values[[0, 2, 4]], r.values)


def test_weil_constant():
    lhs, rhs = sg.weil_check(constant(Z6), H3)
    assert lhs == pytest.approx(6) and rhs == pytest.approx(6)


def test_poisson_delta():
    lhs, rhs = sg.poisson_check(delta(Z6), H3)
    assert lhs == pytest.approx(1) and rhs == pytest.approx(1)


def test_restriction_identity_z12(rng):
    G = GroupSpec((12,))
    H = subgroup_from_generators(G, [(3,)])
    f = random_signal(G, rng)
    lhs, rhs = sg.restriction_fourier_identity(f, H)
    assert np.allclose(lhs, rhs, atol=1e-12)


@pytest.mark.parametrize("spec", ["12", "2x6", "2x3@1/3", "4@5/2"])
@pytest.mark.parametrize("wH", [1, Fraction(1, 2)])
def test_subgroup_sweep(rng, spec, wH):
    G = GroupSpec.parse(spec)
    for H in all_subgroups(G, wH):
        f, g = random_signal(G, rng), random_signal(G, rng)
        for check in (sg.weil_check, sg.poisson_check, sg.poisson_normalized_check):
            lhs, rhs = check(f, H)
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)
        lhs, rhs = sg.restriction_fourier_identity(f, H)
        assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-12)
        assert all(c.passed for c in sg.periodization_laws_check(f, g, H))
        assert sg.intertwining_check(f, H).passed


def test_zero_extension_norm(rng):
    space = sg.subgroup_space(H3)
    for _ in range(20):
        phi = sg.EnumSignal(space, random_signal(GroupSpec((3,)), rng).values)
        g = sg.EnumSignal(space, random_signal(GroupSpec((3,)), rng).values)
        assert sg.zero_extension_norm_check(phi, g, H3).passed


def test_zero_extension_isometry_with_counting_quotient(rng):
    G = GroupSpec((6,), Fraction(1, 6))
    H = subgroup_from_generators(G, [(2,)], G.weight)
    space = sg.subgroup_space(H)
    phi = sg.EnumSignal(space, rng.normal(size=3))
    g = sg.EnumSignal(space, rng.normal(size=3))
    from feichtinger.tfa import s0_norm

    lhs = s0_norm(sg.zero_extend(phi, H), sg.zero_extend(g, H)).value
    assert lhs == pytest.approx(space.s0_norm(phi.values, g.values))


def test_coset_decomposition_upper(rng):
    g = sg.EnumSignal(sg.subgroup_space(H3), [1, 0.5, 0.25])
    for _ in range(10):
        check, ratio = sg.coset_decomposition_check(random_signal(Z6, rng), H3, g)
        assert check.passed and ratio >= 1 - 1e-12
    with pytest.raises(ValueError):
        sg.coset_decomposition_norm(random_signal(Z6, rng), H3, sg.EnumSignal(g.space, [0, 0, 0]))


def test_enumerated_group_matches_fast_path(rng):
    G = GroupSpec((2, 3), Fraction(1, 2))
    E = sg.as_enumerated(G)
    f, g = random_signal(G, rng), random_signal(G, rng)
    from feichtinger.signals import convolve, fourier
    from feichtinger.tfa import s0_norm

    assert np.allclose(E.fourier(f.values), fourier(f).values)
    assert np.allclose(E.convolve(f.values, g.values), convolve(f, g).values)
    assert E.s0_norm(f.values, g.values) == pytest.approx(s0_norm(f, g).value)


def test_enum_signal_length():
    with pytest.raises(ValueError):
        sg.EnumSignal(sg.subgroup_space(H3), [1, 2])
