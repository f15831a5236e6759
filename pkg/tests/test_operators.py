from fractions import Fraction

import numpy as np
import pytest

from feichtinger import operators as op
from feichtinger.groups import GroupSpec, PhasePoint, character_matrix, full_subgroup, phase_space
from feichtinger.signals import Signal, delta, fourier, lp_norm, random_signal, tf_shift
from feichtinger.tfa import s0_norm


def test_operator_basics(rng):
    G = GroupSpec((3,), 2)
    M = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    T = op.Operator(G, G, M)
    f, h = random_signal(G, rng), random_signal(G, rng)
    from feichtinger.signals import inner

    assert inner(T(f), h) == pytest.approx(inner(f, T.adjoint()(h)))
    assert np.allclose(T.inverse()(T(f)).values, f.values)
    with pytest.raises(ValueError):
        op.Operator(G, G, np.eye(2))
    with pytest.raises(np.linalg.LinAlgError):
        op.Operator(G, G, np.zeros((3, 3))).inverse()


def test_antilinear_adjoint_and_inverse(rng):
    G = GroupSpec((4,))
    T, _ = op.conjugation_operator(G)
    f, h = random_signal(G, rng), random_signal(G, rng)
    from feichtinger.signals import inner

    # antilinear adjoint: <T f, h> = conj(<f, T* h>)
    assert inner(T(f), h) == pytest.approx(np.conj(inner(f, T.adjoint()(h))))
    assert np.allclose(T.inverse()(T(f)).values, f.values)
    assert T.is_unitary()


def test_tf_shift_matrix(rng):
    G = GroupSpec((2, 3))
    f = random_signal(G, rng)
    M = op.tf_shift_matrix(G, 4, 5)
    assert np.allclose(M @ f.values, tf_shift(f, PhasePoint.of(G, 4, 5)).values)


def test_automorphism_z5():
    G = GroupSpec((5,))
    U, _ = op.automorphism_operator(G, [2])
    V, _ = op.automorphism_operator(G, [3])
    f = Signal(G, np.arange(5.0))
    assert np.allclose(U(f).values, [0, 2, 4, 1, 3])
    assert np.allclose(U.compose(V).matrix, np.eye(5))
    with pytest.raises(ValueError):
        op.automorphism_operator(GroupSpec((4,)), [2])


def test_chirp_z4():
    assert np.allclose(op.chirp(GroupSpec((4,)), [1]).values, [1, 1j, 1, 1j])


def test_chirp_quadratic_law():
    G = GroupSpec((6,))
    c = 1
    psi = op.chirp(G, [c]).values
    for x in range(6):
        for y in range(6):
            B = np.exp(2j * np.pi * 2 * c * x * y / 6)
            assert psi[(x + y) % 6] == pytest.approx(psi[x] * psi[y] * B)


def test_fourier_commutation_multiplier():
    G = GroupSpec((4,))
    T, alpha = op.fourier_operator(G)
    res = op.commutation_extract(T, alpha)
    assert res.ok
    chars = character_matrix(G)
    # c(omega, x) = omega(x), indexed by the codomain phase point (omega, x)
    expected = np.array([chars[x, w] for w in range(4) for x in range(4)])
    assert np.allclose(res.c, expected)


def test_tf_shift_commutes_with_identity_alpha():
    G = GroupSpec((5,))
    T, alpha = op.tf_shift_operator(G, PhasePoint.of(G, 2, 3))
    assert np.array_equal(alpha.table, np.arange(25))
    assert op.commutation_extract(T, alpha).ok


def test_non_unimodular_rejected():
    G = GroupSpec((4,))
    T = op.Operator(G, G, np.diag([2.0, 1, 1, 1]))
    res = op.commutation_extract(T, op.PhaseAutomorphism.identity(G))
    assert not res.ok and res.violation is not None


def test_wrong_alpha_rejected():
    G = GroupSpec((5,))
    T, _ = op.fourier_operator(G)
    assert not op.commutation_extract(T, op.PhaseAutomorphism.identity(G)).ok


@pytest.mark.parametrize("spec", ["5", "6", "2x3", "2x2", "3x3@2/3", "2x3x4"])
def test_catalog_commutes(spec):
    G = GroupSpec.parse(spec)
    entries = op.catalog(G)
    assert len(entries) == 9
    for e in entries:
        assert op.commutation_extract(e.operator, e.alpha).ok, e.name


@pytest.mark.parametrize("spec", ["6", "2x3@1/2", "4@3"])
def test_catalog_norm_identities(rng, spec):
    G = GroupSpec.parse(spec)
    for e in op.catalog(G):
        T = e.operator
        for _ in range(5):
            f1, g1 = random_signal(T.domain, rng), random_signal(T.domain, rng)
            f2, g2 = random_signal(T.codomain, rng), random_signal(T.codomain, rng)
            for c in op.isomorphism_norm_check(T, e.alpha, f1, g1, f2, g2):
                assert c.passed, (e.name, c)


def test_fourier_norm_z6(rng):
    G = GroupSpec((6,))
    f, g = random_signal(G, rng), random_signal(G, rng)
    assert s0_norm(fourier(f), fourier(g)).value == pytest.approx(s0_norm(f, g).value)


def test_lattice_parsing():
    G = GroupSpec((8,))
    assert op.parse_lattice(G, "2,4").order == 8
    assert op.parse_lattice(G, "full").order == 64
    for bad in ("2", "a,b", "0,2"):
        with pytest.raises(ValueError):
            op.parse_lattice(G, bad)
    assert op.lattice(GroupSpec((2, 4)), [1, 2], [2, 1]).order == 2 * 2 * 1 * 4


def test_gabor_hand_case():
    G = GroupSpec((4,))
    g = Signal(G, np.array([1, 1, 0, 0]) / np.sqrt(2))
    sysm = op.GaborSystem(g, op.lattice(G, 2, 2), 1)
    assert np.allclose(op.gabor_frame_operator(sysm).matrix, np.eye(4))
    assert op.frame_bounds(sysm) == pytest.approx((1.0, 1.0))


def test_gabor_full_lattice_tight(rng):
    G = GroupSpec((6,), Fraction(1, 2))
    g = random_signal(G, rng)
    P = phase_space(G)
    sysm = op.GaborSystem(g, full_subgroup(P), P.weight)
    A, B = op.frame_bounds(sysm)
    assert A == pytest.approx(lp_norm(g, 2) ** 2) and B == pytest.approx(A)


def test_gabor_not_a_frame():
    G = GroupSpec((5,))
    lat = op.lattice(G, 5, 1)  # {0} x Ghat
    sysm = op.GaborSystem(delta(G), lat, 1)
    S = op.gabor_frame_operator(sysm).matrix
    assert np.allclose(S, 5 * np.outer(delta(G).values, delta(G).values))
    with pytest.raises(op.FrameError):
        op.dual_window(sysm)


@pytest.mark.parametrize("n, a, b", [(6, 2, 3), (8, 2, 2), (12, 2, 2)])
def test_gabor_reconstruction(rng, n, a, b):
    G = GroupSpec((n,))
    g = random_signal(G, rng)
    sysm = op.GaborSystem(g, op.lattice(G, a, b), 1)
    dual = op.dual_window(sysm)
    for _ in range(5):
        f = random_signal(G, rng)
        assert np.allclose(op.gabor_reconstruct(sysm, f, dual).values, f.values, atol=1e-8)
    assert all(c.passed for c in op.gabor_commutation_check(sysm, [1, 7, 13]))


def test_gabor_lattice_validation():
    G = GroupSpec((4,))
    with pytest.raises(ValueError):
        op.GaborSystem(delta(G), op.lattice(GroupSpec((5,)), 1, 1))
    with pytest.raises(ValueError):
        op.GaborSystem(delta(G), op.lattice(G, 1, 1), 0)
