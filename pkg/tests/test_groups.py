from fractions import Fraction

import numpy as np
import pytest

from feichtinger.groups import (
    GroupElement,
    GroupSpec,
    PhasePoint,
    all_subgroups,
    annihilator,
    character_matrix,
    character_value,
    derive_measures,
    dual_group,
    full_subgroup,
    phase_space,
    quotient,
    subgroup_from_generators,
    trivial_subgroup,
)


def el(factors, coords):
    return GroupElement(tuple(factors), tuple(coords))


class TestGroupSpec:
    def test_parse(self):
        G = GroupSpec.parse("2x3x4@1/2")
        assert G.factors == (2, 3, 4)
        assert G.weight == Fraction(1, 2)
        assert G.order == 24
        assert GroupSpec.parse("6").weight == 1

    @pytest.mark.parametrize("bad", ["", "x3", "4x", "0", "3@0", "3@-1/2", "a"])
    def test_parse_rejects(self, bad):
        with pytest.raises(ValueError):
            GroupSpec.parse(bad)

    def test_weight_is_exact(self):
        G = GroupSpec((3,), Fraction(1, 3))
        assert isinstance(G.weight, Fraction)
        assert G.total_measure == 1

    def test_row_major_indexing(self):
        G = GroupSpec((2, 3))
        assert G.coords(4) == (1, 1)
        assert G.index((1, 2)) == 5
        assert [G.index(G.coords(i)) for i in range(6)] == list(range(6))

    def test_negation_and_shift(self):
        G = GroupSpec((4,))
        assert G.negation_index().tolist() == [0, 3, 2, 1]
        assert G.shift_index((1,)).tolist() == [1, 2, 3, 0]
        assert G.shift_index((1,), sign=-1).tolist() == [3, 0, 1, 2]


class TestDual:
    @pytest.mark.parametrize(
        "spec, w",
        [("4", Fraction(1, 4)), ("6@1/6", Fraction(1)), ("2x3", Fraction(1, 6))],
    )
    def test_dual_weight(self, spec, w):
        G = GroupSpec.parse(spec)
        Gh = dual_group(G)
        assert Gh.factors == G.factors
        assert Gh.weight == w
        assert dual_group(Gh) == G

    def test_character_values(self):
        assert character_value(el([4], [0]), el([4], [3])) == pytest.approx(1)
        assert character_value(el([4], [1]), el([4], [1])) == pytest.approx(1j)
        assert character_value(el([2, 2], [1, 1]), el([2, 2], [1, 1])) == pytest.approx(1)

    def test_character_matrix_unitary(self):
        G = GroupSpec((2, 3))
        C = character_matrix(G)
        assert np.allclose(C @ C.conj().T, G.order * np.eye(G.order))

    def test_phase_space(self):
        G = GroupSpec((3,), 2)
        P = phase_space(G)
        assert P.factors == (3, 3)
        assert P.weight == G.weight * dual_group(G).weight

    def test_phase_point_arithmetic(self):
        G = GroupSpec((4,))
        a = PhasePoint.of(G, 1, 3)
        b = PhasePoint.of(G, 3, 2)
        assert (a + b).x.coords == (0,) and (a + b).omega.coords == (1,)
        assert (-a).omega.coords == (1,)


class TestSubgroups:
    def test_generators(self):
        assert subgroup_from_generators(GroupSpec((6,)), [(2,)]).elements == (0, 2, 4)
        G = GroupSpec((2, 4))
        H = subgroup_from_generators(G, [(1, 2)])
        assert [G.coords(i) for i in H.elements] == [(0, 0), (1, 2)]
        assert subgroup_from_generators(G, []).elements == (0,)

    def test_annihilator(self):
        G = GroupSpec((6,))
        H = subgroup_from_generators(G, [(2,)])
        assert annihilator(H).elements == (0, 3)
        assert annihilator(full_subgroup(G)).elements == (0,)
        assert annihilator(trivial_subgroup(G)).order == 6

    def test_invalid_subgroup(self):
        from feichtinger.groups import Subgroup

        with pytest.raises(ValueError):
            Subgroup(GroupSpec((6,)), (0, 1))

    def test_quotient(self):
        G = GroupSpec((6,))
        H = subgroup_from_generators(G, [(2,)])
        Q = quotient(G, H)
        assert Q.coset_reps == (0, 1)
        assert Q.weight == 1
        assert Q.coset_of.tolist() == [0, 1, 0, 1, 0, 1]

    def test_measures_z6(self):
        G = GroupSpec((6,))
        m = derive_measures(G, subgroup_from_generators(G, [(2,)]))
        assert (m.w_perp, m.w_dual, m.w_dual_quotient) == (Fraction(1, 2), Fraction(1, 6), Fraction(1, 3))
        assert m.consistent()

    def test_measures_z4(self):
        G = GroupSpec((4,))
        assert derive_measures(G, subgroup_from_generators(G, [(2,)])).w_perp == Fraction(1, 2)

    @pytest.mark.parametrize("spec, count", [("12", 6), ("2x6", 10), ("2x2", 5), ("5", 2)])
    def test_subgroup_counts(self, spec, count):
        subs = all_subgroups(GroupSpec.parse(spec))
        assert len(subs) == count
        for H in subs:
            perp = annihilator(H)
            assert perp.order * H.order == H.parent.order
            assert derive_measures(H.parent, H).consistent()
