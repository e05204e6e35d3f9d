import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zappa_szep.errors import IndexOutOfRange, InvalidParameter, NotAGroup, NotAHomomorphism, ShapeMismatch
from zappa_szep.groups import (
    GroupHom,
    Subgroup,
    abelian_invariants,
    build_group_from_table,
    center_bruteforce,
    cyclic,
    dihedral,
    direct_product,
    elementary_abelian,
    greedy_generators,
    inner_automorphism,
    is_normal,
    structure_probe,
    subgroup_generated,
)
from zappa_szep.homs import central_automorphisms_oracle, enumerate_homs, hom_images


def z4_table():
    return cyclic(4).table.copy()


def klein_table():
    return elementary_abelian(2, 2).table.copy()


def s3_permutation_table():
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    return np.array([[index[tuple(a[b[x]] for x in range(3))] for b in perms] for a in perms])


class TestBuild:
    def test_z4(self):
        G = build_group_from_table(4, z4_table(), "Z4")
        assert G.order == 4 and G.is_abelian

    def test_swapped_rows_rejected_with_witness(self):
        t = z4_table()
        t[[1, 2]] = t[[2, 1]]
        with pytest.raises(NotAGroup) as err:
            build_group_from_table(4, t)
        assert err.value.reason in ("not-associative", "no-identity")
        assert len(err.value.witness) == 3

    def test_klein_every_element_self_inverse(self):
        G = build_group_from_table(4, klein_table())
        assert list(G.inverses) == [0, 1, 2, 3]

    def test_identity_relabelled_to_zero(self):
        # Z3 written with the identity stored at index 2
        t = np.array([[1, 2, 0], [2, 0, 1], [0, 1, 2]])
        G = build_group_from_table(3, t)
        assert list(G.table[0]) == [0, 1, 2] and list(G.table[:, 0]) == [0, 1, 2]

    def test_not_latin(self):
        t = z4_table()
        t[1, 1] = 1
        with pytest.raises(NotAGroup) as err:
            build_group_from_table(4, t)
        assert err.value.reason == "not-latin"

    def test_not_associative_small(self):
        # a Latin square with identity 0 that is not associative (order 5 loop)
        t = np.array(
            [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
        )
        with pytest.raises(NotAGroup) as err:
            build_group_from_table(5, t)
        assert err.value.reason == "not-associative"
        i, j, k = err.value.witness
        assert t[t[i, j], k] != t[i, t[j, k]]

    def test_large_table_uses_generator_test(self):
        G = build_group_from_table(600, cyclic(600).table)
        assert G.order == 600

    def test_large_non_associative_caught(self):
        n = 514
        t = cyclic(n).table.copy()
        h = n // 2
        # swap an intercalate: the square stays Latin, the identity row and column are untouched
        x, y = t[1, 2], t[1, 2 + h]
        t[1, 2], t[1 + h, 2 + h], t[1, 2 + h], t[1 + h, 2] = y, y, x, x
        with pytest.raises(NotAGroup) as err:
            build_group_from_table(n, t)
        assert err.value.reason == "not-associative"
        i, j, k = err.value.witness
        assert t[t[i, j], k] != t[i, t[j, k]]

    @pytest.mark.parametrize("bad", [np.zeros((3, 4), int), np.full((2, 2), 7), np.array([[0.5, 1], [1, 0]])])
    def test_shape_and_range(self, bad):
        with pytest.raises(ShapeMismatch):
            build_group_from_table(bad.shape[0], bad)


class TestStandardGroups:
    def test_trivial(self):
        G = cyclic(1)
        assert G.order == 1 and G.is_abelian

    def test_elementary_abelian_3_2(self):
        rep = structure_probe(elementary_abelian(3, 2))
        assert (rep.order, rep.is_abelian, rep.exponent, rep.is_elementary_abelian) == (9, True, 3, True)

    def test_dihedral_3_is_s3(self):
        G = dihedral(3)
        assert G.order == 6 and not G.is_abelian
        # same element-order statistics as the permutation model, and both validate
        S3 = build_group_from_table(6, s3_permutation_table())
        assert sorted(G.element_orders) == sorted(S3.element_orders)
        build_group_from_table(6, G.table)

    @pytest.mark.parametrize("bad", [lambda: cyclic(0), lambda: elementary_abelian(4, 2), lambda: dihedral(0)])
    def test_invalid_parameters(self, bad):
        with pytest.raises(InvalidParameter):
            bad()

    @pytest.mark.parametrize("G", [cyclic(7), elementary_abelian(2, 3), dihedral(5), direct_product(cyclic(2), dihedral(3))])
    def test_constructors_satisfy_axioms(self, G):
        assert build_group_from_table(G.order, G.table) == G


class TestElementOps:
    def test_cyclic4(self):
        G = cyclic(4)
        assert G.mul(1, 3) == 0 and G.inv(1) == 3

    def test_reflection_order(self):
        G = dihedral(4)
        assert G.order_of(4) == 2

    def test_power(self):
        G = cyclic(10)
        assert G.power(3, 4) == 2 and G.power(3, -1) == 7 and G.power(5, 0) == 0

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            cyclic(4).mul(0, 4)


class TestSubgroups:
    def test_generated(self):
        G = cyclic(12)
        assert subgroup_generated(G, [8]).members == (0, 4, 8)
        assert subgroup_generated(G, [4, 6]).order == 6
        assert subgroup_generated(G, []).members == (0,)

    def test_from_members_rejects_non_closed(self):
        with pytest.raises(Exception):
            Subgroup.from_members(cyclic(6), [0, 1])

    def test_centers(self):
        assert center_bruteforce(dihedral(3)).members == (0,)
        assert center_bruteforce(dihedral(4)).order == 2
        assert center_bruteforce(cyclic(5)).order == 5

    def test_center_is_normal(self):
        G = direct_product(dihedral(4), cyclic(3))
        assert is_normal(center_bruteforce(G))
        assert not is_normal(subgroup_generated(dihedral(3), [3]))

    def test_greedy_generators_generate(self):
        G = direct_product(dihedral(4), cyclic(2))
        assert subgroup_generated(G, greedy_generators(G)).order == G.order

    def test_abelian_invariants(self):
        assert abelian_invariants(direct_product(cyclic(4), cyclic(6))) == (2, 12)
        assert abelian_invariants(elementary_abelian(3, 3)) == (3, 3, 3)


def brute_force_hom_count(U, V):
    count = 0
    for img in itertools.product(range(V.order), repeat=U.order):
        img = np.array(img)
        if (img[U.table] == V.table[img[:, None], img[None, :]]).all():
            count += 1
    return count


class TestHoms:
    def test_spec_counts(self):
        assert len(enumerate_homs(cyclic(2), cyclic(3))) == 1
        assert len(enumerate_homs(cyclic(4), cyclic(2))) == 2
        assert len(enumerate_homs(elementary_abelian(3, 2), cyclic(3))) == 9

    def test_endomorphisms(self):
        assert len(enumerate_homs(dihedral(3), dihedral(3))) == 10
        assert len(enumerate_homs(dihedral(4), dihedral(4))) == 36

    @pytest.mark.parametrize(
        "U,V",
        [(cyclic(4), cyclic(2)), (elementary_abelian(2, 2), cyclic(4)), (cyclic(3), dihedral(3)), (dihedral(3), cyclic(2)), (cyclic(6), cyclic(3))],
    )
    def test_against_all_maps(self, U, V):
        assert len(enumerate_homs(U, V)) == brute_force_hom_count(U, V)

    def test_restricted_image(self):
        G = dihedral(4)
        Z = center_bruteforce(G)
        rows = hom_images(G, G, Z)
        assert len(rows) == 4 and np.isin(rows, Z.as_array()).all()

    def test_sorted_and_certified(self):
        rows = hom_images(direct_product(cyclic(2), cyclic(2)), dihedral(4))
        keys = [tuple(r) for r in rows]
        assert keys == sorted(keys)
        for r in rows:
            GroupHom(direct_product(cyclic(2), cyclic(2)), dihedral(4), r)

    def test_not_a_hom(self):
        with pytest.raises(NotAHomomorphism):
            GroupHom(cyclic(3), cyclic(3), np.array([0, 2, 2]))

    def test_inner_automorphism(self):
        G = dihedral(3)
        phi = inner_automorphism(G, 3)
        assert phi(1) == 2
        assert inner_automorphism(cyclic(5), 2).image.tolist() == list(range(5))


class TestOracle:
    @pytest.mark.parametrize(
        "G,count",
        [(cyclic(6), 2), (dihedral(3), 1), (dihedral(4), 4), (elementary_abelian(2, 2), 6), (cyclic(1), 1)],
    )
    def test_counts(self, G, count):
        autos = central_automorphisms_oracle(G)
        assert len(autos) == count
        for a in autos:
            assert a.is_bijective()
            assert G.center.mask[G.table[G.inverses, a.image]].all()


small_groups = st.sampled_from(
    [cyclic(1), cyclic(2), cyclic(3), cyclic(4), cyclic(6), elementary_abelian(2, 2), dihedral(3), dihedral(4)]
)


@settings(max_examples=40, deadline=None)
@given(small_groups, small_groups)
def test_direct_product_orders_and_center(G1, G2):
    P = direct_product(G1, G2)
    assert P.order == G1.order * G2.order
    assert P.center.order == G1.center.order * G2.center.order


@settings(max_examples=40, deadline=None)
@given(small_groups, st.data())
def test_element_order_divides_group_order(G, data):
    g = data.draw(st.integers(0, G.order - 1))
    m = G.order_of(g)
    assert G.order % m == 0 and G.power(g, m) == 0


@settings(max_examples=30, deadline=None)
@given(small_groups, small_groups)
def test_every_enumerated_map_is_a_hom(U, V):
    rows = hom_images(U, V)
    assert rows.shape[0] >= 1  # the trivial map
    assert (rows[:, U.table] == V.table[rows[:, :, None], rows[:, None, :]]).all()
