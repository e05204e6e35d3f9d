"""The center of a Zappa-Szep product, read off from the matched pair."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import NotAbelianInputs
from .groups import Subgroup
from .matched_pair import MatchedPair, ZappaSzepGroup, build_external_product, from_semidirect


def _conj_by_inverse(H, xs: np.ndarray) -> np.ndarray:
    """Row i is the map h -> x^-1 h x for x = xs[i]."""
    t, inv = H.table, H.inverses
    return t[t[inv[xs][:, None], np.arange(H.order)[None, :]], xs[:, None]]


def _conj(K, ys: np.ndarray) -> np.ndarray:
    """Row i is the map k -> y k y^-1 for y = ys[i]."""
    t, inv = K.table, K.inverses
    return t[t[ys[:, None], np.arange(K.order)[None, :]], inv[ys][:, None]]


def central_pair_mask(mp: MatchedPair) -> np.ndarray:
    """Boolean |H| x |K| array: (x, y) with x in Fix(sigma), y in Fix(tau),
    sigma_y = i_{x^-1} on H and tau_x = i_y on K."""
    fk = mp.fix_ker
    xs, ys = fk.fix_sigma.as_array(), fk.fix_tau.as_array()
    sig_ok = (mp.sigma[ys][:, None, :] == _conj_by_inverse(mp.H, xs)[None, :, :]).all(axis=2)  # (y, x)
    tau_rows = mp.tau[:, xs].T  # row for x: k -> tau_x(k)
    tau_ok = (tau_rows[:, None, :] == _conj(mp.K, ys)[None, :, :]).all(axis=2)  # (x, y)
    mask = np.zeros((mp.H.order, mp.K.order), dtype=bool)
    mask[np.ix_(xs, ys)] = sig_ok.T & tau_ok
    return mask


def _as_subgroup(zs: ZappaSzepGroup, hs, ks) -> Subgroup:
    return Subgroup.from_members(zs.product, np.asarray(hs, dtype=np.int64) * zs.nK + np.asarray(ks, dtype=np.int64))


def center_via_theorem(mp: MatchedPair, zs: Optional[ZappaSzepGroup] = None) -> Subgroup:
    """Z(G) computed from the actions alone (every map equality checked on all of H, K)."""
    zs = zs or build_external_product(mp)
    hs, ks = np.nonzero(central_pair_mask(mp))
    return _as_subgroup(zs, hs, ks)


def center_abelian_corollary(mp: MatchedPair, zs: Optional[ZappaSzepGroup] = None) -> Subgroup:
    """For abelian H and K the center is H* x K*."""
    if not (mp.H.is_abelian and mp.K.is_abelian):
        raise NotAbelianInputs("both factors must be abelian")
    zs = zs or build_external_product(mp)
    fk = mp.fix_ker
    hs, ks = np.meshgrid(fk.H_star.as_array(), fk.K_star.as_array(), indexing="ij")
    return _as_subgroup(zs, hs.ravel(), ks.ravel())


def center_semidirect_corollary(H, K, phi, zs: Optional[ZappaSzepGroup] = None) -> Subgroup:
    """Center of H x|_phi K: pairs (x, y) with x in Fix(phi), y in Z(K) and
    phi_y = i_{x^-1}."""
    mp = from_semidirect(H, K, phi)
    zs = zs or build_external_product(mp)
    phi = mp.sigma
    xs = mp.fix_ker.fix_sigma.as_array()
    ys = K.center.as_array()
    ok = (phi[ys][:, None, :] == _conj_by_inverse(H, xs)[None, :, :]).all(axis=2)  # (y, x)
    yi, xi = np.nonzero(ok)
    return _as_subgroup(zs, xs[xi], ys[yi])
