import numpy as np
import pytest

from zappa_szep.center import (
    center_abelian_corollary,
    center_semidirect_corollary,
    center_via_theorem,
    central_pair_mask,
)
from zappa_szep.errors import NotAbelianInputs, NotAnAction
from zappa_szep.groups import center_bruteforce, cyclic, dihedral, direct_product, subgroup_generated
from zappa_szep.matched_pair import MatchedPair, build_external_product, from_semidirect


def test_trivial_abelian_is_everything():
    mp = MatchedPair.trivial(cyclic(4), cyclic(3))
    assert center_via_theorem(mp).order == 12


def test_dihedral3_trivial():
    C3 = cyclic(3)
    mp = from_semidirect(C3, cyclic(2), np.stack([np.arange(3), C3.inverses]))
    assert center_via_theorem(mp).members == (0,)


def test_dihedral4_order_two():
    C4 = cyclic(4)
    mp = from_semidirect(C4, cyclic(2), np.stack([np.arange(4), C4.inverses]))
    zs = build_external_product(mp)
    z = center_via_theorem(mp, zs)
    assert z.members == (0, zs.index_of(2, 0))


def test_p3_example(p3):
    zs = p3.zs
    z = center_via_theorem(p3.mp, zs)
    assert z.order == 9
    assert z == subgroup_generated(zs.product, [p3.in_G("c"), p3.in_G("d")])


def test_abelian_corollary(p3):
    assert center_abelian_corollary(p3.mp, p3.zs) == center_via_theorem(p3.mp, p3.zs)
    assert center_abelian_corollary(MatchedPair.trivial(cyclic(4), cyclic(2))).order == 8


def test_abelian_corollary_rejects_nonabelian():
    with pytest.raises(NotAbelianInputs):
        center_abelian_corollary(MatchedPair.trivial(dihedral(3), cyclic(2)))


def test_semidirect_corollary_trivial_phi():
    H, K = dihedral(4), dihedral(3)
    z = center_semidirect_corollary(H, K, np.tile(np.arange(8), (6, 1)))
    assert z.order == H.center.order * K.center.order


def test_semidirect_corollary_rejects_bad_phi():
    with pytest.raises(NotAnAction):
        center_semidirect_corollary(cyclic(3), cyclic(2), np.array([[0, 1, 2], [0, 2, 2]]))


def test_mask_shape(p3):
    m = central_pair_mask(p3.mp)
    assert m.shape == (27, 9) and m.sum() == 9


def test_theorem_on_whole_corpus(corpus):
    for s in corpus:
        assert center_via_theorem(s.mp, s.zs) == center_bruteforce(s.zs.product), s.name


def test_abelian_corollary_on_corpus(corpus):
    for s in corpus:
        if s.mp.H.is_abelian and s.mp.K.is_abelian:
            assert center_abelian_corollary(s.mp, s.zs) == center_via_theorem(s.mp, s.zs), s.name


def test_semidirect_corollary_on_corpus(corpus):
    for s in corpus:
        if (s.mp.tau == np.arange(s.mp.K.order)[:, None]).all():
            z = center_semidirect_corollary(s.mp.H, s.mp.K, s.mp.sigma, s.zs)
            assert z == center_via_theorem(s.mp, s.zs), s.name


def test_nonabelian_factors(f21):
    z = center_via_theorem(f21.mp, f21.zs)
    assert z == center_bruteforce(f21.zs.product) and z.order == 3
    z2 = center_semidirect_corollary(f21.mp.H, f21.mp.K, f21.mp.sigma, f21.zs)
    assert z2 == z


def test_nonabelian_both_sides():
    # S3 x S3 with trivial actions: center trivial
    mp = MatchedPair.trivial(dihedral(3), dihedral(3))
    assert center_via_theorem(mp).order == 1
    mp = MatchedPair.trivial(dihedral(4), direct_product(cyclic(2), dihedral(3)))
    assert center_via_theorem(mp).order == 4
