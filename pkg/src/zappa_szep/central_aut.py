"""Central automorphisms of a Zappa-Szep product as 2x2 matrices of maps.

A central automorphism theta of G = HK is encoded by four maps::

    alpha: H -> H    beta: K -> H
    gamma: H -> K    delta: K -> K

with theta(h) = alpha(h) gamma(h) and theta(k) = beta(k) delta(k). The
quadruples that arise are exactly those passing the conditions A1-A10 of
:func:`check_Ac_conditions`, and composing automorphisms corresponds to the
block product of :func:`compose_matrices`.

Maps are image arrays throughout; a stack of N matrices is a 4-tuple of
arrays with leading dimension N.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .center import central_pair_mask
from .errors import (
    ConditionsFailed,
    DomainMismatch,
    MixedSources,
    NotCentral,
    TheoremViolation,
)
from .groups import (
    INDEX_DTYPE,
    FiniteGroup,
    GroupHom,
    MapTable,
    StructureReport,
    _first_true,
    _frozen,
    _prime_power_base,
    greedy_generators,
    hom_violation,
    structure_probe,
)
from .homs import _lex_sorted, _plan, hom_images
from .matched_pair import MatchedPair, ZappaSzepGroup, build_external_product

A_CONDITIONS = ("beta-hom", "gamma-hom", "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10")

# Above this many elements a matrix group is probed through generators
# instead of a full Cayley table.
CAYLEY_LIMIT = 4000


@dataclass(frozen=True, eq=False)
class CentralAutMatrix:
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    delta: np.ndarray
    source: MatchedPair = field(repr=False)

    def __post_init__(self):
        nH, nK = self.source.H.order, self.source.K.order
        for name, size in (("alpha", nH), ("beta", nK), ("gamma", nH), ("delta", nK)):
            arr = np.asarray(getattr(self, name))
            if arr.shape != (size,):
                raise DomainMismatch(f"{name} has shape {arr.shape}, expected ({size},)")
            object.__setattr__(self, name, _frozen(arr))

    @classmethod
    def identity(cls, mp: MatchedPair) -> "CentralAutMatrix":
        nH, nK = mp.H.order, mp.K.order
        return cls(np.arange(nH), np.zeros(nK), np.zeros(nH), np.arange(nK), mp)

    def key(self) -> bytes:
        return b"".join(a.astype(INDEX_DTYPE).tobytes() for a in self.arrays())

    def arrays(self) -> tuple:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CentralAutMatrix):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def maps(self) -> tuple:
        """The entries as (MapTable, GroupHom, GroupHom, MapTable)."""
        H, K = self.source.H, self.source.K
        return (
            MapTable(H, H, self.alpha),
            GroupHom(K, H, self.beta),
            GroupHom(H, K, self.gamma),
            MapTable(K, K, self.delta),
        )

    def to_json(self) -> dict:
        return {name: a.tolist() for name, a in zip(("alpha", "beta", "gamma", "delta"), self.arrays())}

    @classmethod
    def from_json(cls, doc: dict, mp: MatchedPair) -> "CentralAutMatrix":
        return cls(*(np.asarray(doc[name], dtype=np.int64) for name in ("alpha", "beta", "gamma", "delta")), mp)


def stack(matrices: Sequence[CentralAutMatrix], mp: MatchedPair) -> tuple:
    nH, nK = mp.H.order, mp.K.order
    if not matrices:
        return (np.zeros((0, nH), INDEX_DTYPE), np.zeros((0, nK), INDEX_DTYPE),
                np.zeros((0, nH), INDEX_DTYPE), np.zeros((0, nK), INDEX_DTYPE))
    return tuple(np.stack([m.arrays()[i] for m in matrices]) for i in range(4))


def unstack(st: tuple, mp: MatchedPair) -> list[CentralAutMatrix]:
    return [CentralAutMatrix(st[0][i], st[1][i], st[2][i], st[3][i], mp) for i in range(st[0].shape[0])]


def stack_keys(st: tuple) -> np.ndarray:
    """One row per matrix, usable for set comparison and sorting."""
    return np.concatenate([a.astype(INDEX_DTYPE) for a in st], axis=1)


def _sort_stack(st: tuple) -> tuple:
    keys = stack_keys(st)
    if keys.shape[0] <= 1:
        return st
    order = np.lexsort(keys.T[::-1])
    return tuple(a[order] for a in st)


# --- map algebra ----------------------------------------------------------------------


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainMismatch(msg)


def _same(G1: FiniteGroup, G2: FiniteGroup) -> bool:
    return G1 is G2 or G1 == G2


def map_add(phi: MapTable, psi: MapTable) -> MapTable:
    """(phi + psi)(u) = phi(u) psi(u)."""
    _require(_same(phi.domain, psi.domain) and _same(phi.codomain, psi.codomain), "add needs equal domains and codomains")
    return MapTable(phi.domain, phi.codomain, phi.codomain.table[phi.image, psi.image])


def map_compose(eta: MapTable, phi: MapTable) -> MapTable:
    """(eta phi)(u) = eta(phi(u))."""
    _require(_same(phi.codomain, eta.domain), "compose needs codomain(phi) = domain(eta)")
    return MapTable(phi.domain, eta.codomain, eta.image[phi.image])


def sigma_twist(phi: MapTable, psi: MapTable, mp: MatchedPair) -> MapTable:
    """u -> sigma_{phi(u)}(psi(u)) for phi: U -> K, psi: U -> H."""
    _require(_same(phi.domain, psi.domain), "twist needs a common domain")
    _require(_same(phi.codomain, mp.K) and _same(psi.codomain, mp.H), "sigma twist needs phi into K, psi into H")
    return MapTable(phi.domain, mp.H, mp.sigma[phi.image, psi.image])


def tau_twist(phi: MapTable, psi: MapTable, mp: MatchedPair) -> MapTable:
    """u -> tau_{phi(u)}(psi(u)) for phi: U -> H, psi: U -> K."""
    _require(_same(phi.domain, psi.domain), "twist needs a common domain")
    _require(_same(phi.codomain, mp.H) and _same(psi.codomain, mp.K), "tau twist needs phi into H, psi into K")
    return MapTable(phi.domain, mp.K, mp.tau[psi.image, phi.image])


def one_minus(phi: MapTable) -> MapTable:
    """u -> u phi(u)^-1, the meaning given here to "1 - phi"."""
    _require(_same(phi.domain, phi.codomain), "1 - phi needs an endomap")
    G = phi.domain
    return MapTable(G, G, G.table[np.arange(G.order), G.inverses[phi.image]])


# --- conditions ---------------------------------------------------------------------------


@dataclass
class ConditionReport:
    results: dict  # condition -> witness tuple or None

    @property
    def ok(self) -> bool:
        return all(w is None for w in self.results.values())

    def failed(self) -> list[str]:
        return [c for c, w in self.results.items() if w is not None]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "conditions": {
                c: {"pass": w is None, "witness": None if w is None else list(w)} for c, w in self.results.items()
            },
        }


def _w(mask: np.ndarray) -> Optional[tuple]:
    return _first_true(mask) if mask.any() else None


class _Ctx:
    """Tables of a matched pair, gathered once for the vectorised checks."""

    def __init__(self, mp: MatchedPair, zmask: Optional[np.ndarray] = None):
        self.mp = mp
        self.Ht, self.Kt = mp.H.table, mp.K.table
        self.Hi, self.Ki = mp.H.inverses, mp.K.inverses
        self.s, self.t = mp.sigma, mp.tau
        self.nH, self.nK = mp.H.order, mp.K.order
        self.fixS = mp.fix_ker.fix_sigma.mask
        self.fixT = mp.fix_ker.fix_tau.mask
        self.zmask = central_pair_mask(mp) if zmask is None else zmask
        hs, ks = np.arange(self.nH), np.arange(self.nK)
        # conj_inv[x] = (h -> x^-1 h x),  conj[y] = (k -> y k y^-1)
        self.conj_inv = self.Ht[self.Ht[self.Hi[:, None], hs[None, :]], hs[:, None]]
        self.conj = self.Kt[self.Kt[ks[:, None], ks[None, :]], self.Ki[:, None]]


def _conditions(c: _Ctx, a, b, g, d) -> dict:
    Ht, Kt, s, t = c.Ht, c.Kt, c.s, c.t
    res = {
        "beta-hom": hom_violation(c.mp.K, c.mp.H, b) if b[0] == 0 else (0, 0),
        "gamma-hom": hom_violation(c.mp.H, c.mp.K, g) if g[0] == 0 else (0, 0),
    }
    # A1: alpha(hh') = alpha(h) sigma_{gamma(h)}(alpha(h'))
    res["A1"] = _w(a[Ht] != Ht[a[:, None], s[g[:, None], a[None, :]]])
    x = Ht[c.Hi, a]  # h^-1 alpha(h)
    # A2: x in Fix(sigma), gamma(h) in Fix(tau)
    res["A2"] = _w(~c.fixS[x] | ~c.fixT[g])
    # A3: sigma_{gamma(h)} = i_{x^-1} on H, tau_x = i_{gamma(h)} on K
    bad = (s[g] != c.conj_inv[x]).any(axis=1) | (t[:, x].T != c.conj[g]).any(axis=1)
    res["A3"] = _w(bad)
    y = Kt[t[c.Ki, b], d]  # tau_{beta(k)}(k^-1) delta(k)
    # A4: beta(k) in Fix(sigma), y in Fix(tau)
    res["A4"] = _w(~c.fixS[b] | ~c.fixT[y])
    # A5: sigma_y = i_{beta(k)^-1}, tau_{beta(k)} = i_y
    bad = (s[y] != c.conj_inv[b]).any(axis=1) | (t[:, b].T != c.conj[y]).any(axis=1)
    res["A5"] = _w(bad)
    # A6: x commutes with beta(k), gamma(h) commutes with y; axes (h, k)
    res["A6"] = _w(
        (Ht[x[:, None], b[None, :]] != Ht[b[None, :], x[:, None]])
        | (Kt[g[:, None], y[None, :]] != Kt[y[None, :], g[:, None]])
    )
    # A7: delta(kk') = tau_{beta(k')}(delta(k)) delta(k')
    res["A7"] = _w(d[Kt] != Kt[t[d[:, None], b[None, :]], d[None, :]])
    # A8: beta(k) sigma_{delta(k)}(alpha(h)) = alpha(sigma_k(h)) beta(tau_h(k)); axes (k, h)
    res["A8"] = _w(Ht[b[:, None], s[d[:, None], a[None, :]]] != Ht[a[s], b[t]])
    # A9: tau_{alpha(h)}(delta(k)) gamma(h) = gamma(sigma_k(h)) delta(tau_h(k)); axes (k, h)
    res["A9"] = _w(Kt[t[d[:, None], a[None, :]], g[None, :]] != Kt[g[s], d[t]])
    # A10: (h, k) -> (alpha(h) beta(k), gamma(h) delta(k)) is a bijection
    codes = _theta_codes(c, a, b, g, d).ravel()
    uniq, first, counts = np.unique(codes, return_index=True, return_counts=True)
    if uniq.size == codes.size:
        res["A10"] = None
    else:
        dup = uniq[counts > 1][0]
        i, j = np.flatnonzero(codes == dup)[:2]
        res["A10"] = (*divmod(int(i), c.nK), *divmod(int(j), c.nK))
    return {name: res[name] for name in A_CONDITIONS}


def _theta_codes(c: _Ctx, a, b, g, d) -> np.ndarray:
    """|H| x |K| array: index of (alpha(h) beta(k), gamma(h) delta(k)) in the product."""
    return c.Ht[a[:, None], b[None, :]].astype(np.int64) * c.nK + c.Kt[g[:, None], d[None, :]]


def check_Ac_conditions(m, mp: MatchedPair, _ctx: Optional[_Ctx] = None) -> ConditionReport:
    """Evaluate beta, gamma multiplicativity and A1-A10 for a quadruple.

    ``m`` is a :class:`CentralAutMatrix` or a tuple (alpha, beta, gamma, delta)
    of image arrays. Every condition is checked over all group elements.
    A3 is taken in the form that matches the center description,
    sigma_{gamma(h)} = i_{x^-1} with x = h^-1 alpha(h).
    """
    arrays = m.arrays() if isinstance(m, CentralAutMatrix) else tuple(np.asarray(v) for v in m)
    c = _ctx or _Ctx(mp)
    return ConditionReport(_conditions(c, *arrays))


# --- theta <-> matrix -------------------------------------------------------------------------


def decompose_images(thetas: np.ndarray, zs: ZappaSzepGroup) -> tuple:
    """Stack of quadruples read off from image arrays of automorphisms."""
    thetas = np.atleast_2d(thetas)
    nK = zs.nK
    nH = zs.source.H.order
    alpha, gamma = np.divmod(thetas[:, np.arange(nH) * nK], nK)
    beta, delta = np.divmod(thetas[:, :nK], nK)
    return tuple(a.astype(INDEX_DTYPE) for a in (alpha, beta, gamma, delta))


def decompose_theta(theta, zs: ZappaSzepGroup) -> CentralAutMatrix:
    """Split a central automorphism: theta(h) = alpha(h) gamma(h), theta(k) = beta(k) delta(k)."""
    img = np.asarray(theta.image if isinstance(theta, MapTable) else theta)
    G = zs.product
    quotients = G.table[G.inverses, img]  # g^-1 theta(g)
    bad = ~G.center.mask[quotients]
    if bad.any():
        raise NotCentral(int(np.flatnonzero(bad)[0]))
    st = decompose_images(img[None, :], zs)
    return CentralAutMatrix(*(a[0] for a in st), zs.source)


def matrix_to_theta(m: CentralAutMatrix, zs: ZappaSzepGroup, certify: bool = True) -> GroupHom:
    """theta(hk) = (alpha(h) beta(k), gamma(h) delta(k)).

    With ``certify`` the quadruple must pass every condition, and the result is
    checked to be a bijective homomorphism with g^-1 theta(g) central.
    """
    mp = zs.source
    c = _Ctx(mp)
    if certify:
        report = ConditionReport(_conditions(c, *m.arrays()))
        if not report.ok:
            raise ConditionsFailed(report)
    img = _theta_codes(c, *m.arrays()).ravel()
    G = zs.product
    if certify:
        if np.unique(img).size != G.order or hom_violation(G, G, img) is not None:
            raise TheoremViolation("quadruple passes A1-A10 but theta is not an automorphism")
        if not G.center.mask[G.table[G.inverses, img]].all():
            raise TheoremViolation("quadruple passes A1-A10 but theta is not central")
    return GroupHom(G, G, img, verify=False)


def matrices_to_images(st: tuple, zs: ZappaSzepGroup) -> np.ndarray:
    a, b, g, d = st
    c_Ht, c_Kt, nK = zs.source.H.table, zs.source.K.table, zs.nK
    hpart = c_Ht[a[:, :, None], b[:, None, :]].astype(np.int64)
    kpart = c_Kt[g[:, :, None], d[:, None, :]]
    return (hpart * nK + kpart).reshape(a.shape[0], -1)


# --- composition ------------------------------------------------------------------------------


def take(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """outer o inner where either side may be a stack of image arrays."""
    if outer.ndim == 1:
        return outer[inner]
    if inner.ndim == 1:
        return outer[:, inner]
    return np.take_along_axis(outer, inner, axis=-1)


def _compose_arrays(Ht, Kt, m2: tuple, m1: tuple) -> tuple:
    """Block product for single matrices or stacks; m2 and m1 broadcast over
    a leading axis when one of them is a stack."""
    a2, b2, g2, d2 = m2
    a1, b1, g1, d1 = m1
    return (
        Ht[take(a2, a1), take(b2, g1)],  # alpha' alpha + beta' gamma
        Ht[take(a2, b1), take(b2, d1)],  # alpha' beta + beta' delta
        Kt[take(g2, a1), take(d2, g1)],  # gamma' alpha + delta' gamma
        Kt[take(g2, b1), take(d2, d1)],  # gamma' beta + delta' delta
    )


def compose_matrices(m2: CentralAutMatrix, m1: CentralAutMatrix) -> CentralAutMatrix:
    """The matrix of theta2 o theta1, built from the entries with the map algebra."""
    if m2.source is not m1.source and m2.source != m1.source:
        raise MixedSources("matrices come from different matched pairs")
    al2, be2, ga2, de2 = m2.maps()
    al1, be1, ga1, de1 = m1.maps()
    top_left = map_add(map_compose(al2, al1), map_compose(be2, ga1))
    top_right = map_add(map_compose(al2, be1), map_compose(be2, de1))
    bottom_left = map_add(map_compose(ga2, al1), map_compose(de2, ga1))
    bottom_right = map_add(map_compose(ga2, be1), map_compose(de2, de1))
    return CentralAutMatrix(top_left.image, top_right.image, bottom_left.image, bottom_right.image, m2.source)


def compose_stack(mp: MatchedPair, m2, m1) -> tuple:
    """Vectorised block product; either argument may be a stack."""
    to_t = lambda m: m.arrays() if isinstance(m, CentralAutMatrix) else m
    return _compose_arrays(mp.H.table, mp.K.table, to_t(m2), to_t(m1))


def matrix_power(m: CentralAutMatrix, n: int) -> CentralAutMatrix:
    result = CentralAutMatrix.identity(m.source)
    for _ in range(n):
        result = compose_matrices(m, result)
    return result


def matrix_inverse(m: CentralAutMatrix) -> CentralAutMatrix:
    """m^(order-1), found by composing until the identity comes back."""
    ident = CentralAutMatrix.identity(m.source)
    prev, cur = ident, m
    while cur != ident:
        prev, cur = cur, compose_matrices(m, cur)
    return prev


# --- enumeration ----------------------------------------------------------------------------


def _tree(G: FiniteGroup, gens: list[int]) -> list:
    return [r for st in _plan(G, gens) for r in st.rounds]


def _product_rows(choices: list) -> np.ndarray:
    combos = list(itertools.product(*choices))
    return np.array(combos, dtype=np.int64).reshape(len(combos), len(choices))


def _h_columns(c: _Ctx) -> tuple:
    """All (alpha, gamma) satisfying A1-A3 with gamma a homomorphism into Fix(tau)."""
    mp = c.mp
    gens = greedy_generators(mp.H)
    rounds = _tree(mp.H, gens)
    alphas, gammas = [], []
    for gam in hom_images(mp.H, mp.K, mp.fix_ker.fix_tau):
        # at a generator g, (g^-1 alpha(g), gamma(g)) must be a central pair
        choices = [c.Ht[g, np.flatnonzero(c.zmask[:, gam[g]])] for g in gens]
        if any(ch.size == 0 for ch in choices):
            continue
        gen_imgs = _product_rows(choices)
        al = np.zeros((gen_imgs.shape[0], c.nH), dtype=np.int64)
        for child, parent, via in rounds:
            # A1 with h' a generator: alpha(h g) = alpha(h) sigma_{gamma(h)}(alpha(g))
            al[:, child] = c.Ht[al[:, parent], c.s[gam[parent][None, :], gen_imgs[:, via]]]
        ok = (al[:, c.Ht] == c.Ht[al[:, :, None], c.s[gam[None, :, None], al[:, None, :]]]).all(axis=(1, 2))
        x = c.Ht[c.Hi[None, :], al]
        ok &= c.zmask[x, gam[None, :]].all(axis=1)
        alphas.append(al[ok])
        gammas.append(np.repeat(gam[None, :], ok.sum(), axis=0))
    if not alphas:
        return np.zeros((0, c.nH), np.int64), np.zeros((0, c.nH), np.int64)
    return np.concatenate(alphas), np.concatenate(gammas)


def _k_columns(c: _Ctx) -> tuple:
    """All (beta, delta) satisfying A4, A5, A7 with beta a homomorphism into Fix(sigma)."""
    mp = c.mp
    gens = greedy_generators(mp.K)
    rounds = _tree(mp.K, gens)
    betas, deltas = [], []
    for bet in hom_images(mp.K, mp.H, mp.fix_ker.fix_sigma):
        w = c.t[c.Ki, bet]  # tau_{beta(k)}(k^-1)
        # at a generator k, (beta(k), w(k) delta(k)) must be a central pair
        choices = [c.Kt[c.Ki[w[k]], np.flatnonzero(c.zmask[bet[k]])] for k in gens]
        if any(ch.size == 0 for ch in choices):
            continue
        gen_imgs = _product_rows(choices)
        dl = np.zeros((gen_imgs.shape[0], c.nK), dtype=np.int64)
        gen_beta = bet[np.asarray(gens, dtype=np.int64)]
        for child, parent, via in rounds:
            # A7 with k' a generator: delta(k g) = tau_{beta(g)}(delta(k)) delta(g)
            dl[:, child] = c.Kt[c.t[dl[:, parent], gen_beta[via][None, :]], gen_imgs[:, via]]
        ok = (dl[:, c.Kt] == c.Kt[c.t[dl[:, :, None], bet[None, None, :]], dl[:, None, :]]).all(axis=(1, 2))
        y = c.Kt[w[None, :], dl]
        ok &= c.zmask[bet[None, :], y].all(axis=1)
        betas.append(np.repeat(bet[None, :], ok.sum(), axis=0))
        deltas.append(dl[ok])
    if not betas:
        return np.zeros((0, c.nK), np.int64), np.zeros((0, c.nK), np.int64)
    return np.concatenate(betas), np.concatenate(deltas)


def _cross_ok(c: _Ctx, a, g, B, D) -> np.ndarray:
    """A6, A8, A9, A10 for paired rows (alpha_i, gamma_i) and (beta_i, delta_i)."""
    Ht, Kt, s, t = c.Ht, c.Kt, c.s, c.t
    r = np.arange(a.shape[0])[:, None, None]
    x = Ht[c.Hi[None, :], a]
    y = Kt[t[c.Ki[None, :], B], D]
    ok = (Ht[x[:, :, None], B[:, None, :]] == Ht[B[:, None, :], x[:, :, None]]).all(axis=(1, 2))
    ok &= (Kt[g[:, :, None], y[:, None, :]] == Kt[y[:, None, :], g[:, :, None]]).all(axis=(1, 2))
    # axes (row, k, h)
    a_sh, g_sh = a[r, s[None]], g[r, s[None]]
    B_t, D_t = B[r, t[None]], D[r, t[None]]
    ok &= (Ht[B[:, :, None], s[D[:, :, None], a[:, None, :]]] == Ht[a_sh, B_t]).all(axis=(1, 2))
    ok &= (Kt[t[D[:, :, None], a[:, None, :]], g[:, None, :]] == Kt[g_sh, D_t]).all(axis=(1, 2))
    codes = Ht[a[:, :, None], B[:, None, :]].astype(np.int64) * c.nK + Kt[g[:, :, None], D[:, None, :]]
    codes = np.sort(codes.reshape(codes.shape[0], -1), axis=1)
    ok &= (codes == np.arange(c.nH * c.nK)[None, :]).all(axis=1)
    return ok


def _generator_pairs_ok(c: _Ctx, a, g, B, D, hgens, kgens) -> np.ndarray:
    """A8/A9 at generator pairs (k, h) for every row of (a, g) against every row of (B, D)."""
    Ht, Kt, s, t = c.Ht, c.Kt, c.s, c.t
    keep = np.ones((a.shape[0], B.shape[0]), dtype=bool)
    for k in kgens:
        Bk, Dk = B[None, :, k], D[None, :, k]
        for h in hgens:
            sh, tk = s[k, h], t[k, h]
            keep &= Ht[Bk, s[Dk, a[:, h, None]]] == Ht[a[:, sh, None], B[None, :, tk]]
            keep &= Kt[t[Dk, a[:, h, None]], g[:, h, None]] == Kt[g[:, sh, None], D[None, :, tk]]
    return keep


def enumerate_Ac_stack(mp: MatchedPair) -> tuple:
    """The full matrix group as a sorted stack, found without the automorphism oracle.

    Columns (alpha, gamma) and (beta, delta) are searched independently by
    crossed extension from generator images, so each column already meets the
    conditions that involve it alone. Pairs are pruned with A8/A9 at pairs
    of generators, then the cross conditions are checked everywhere.
    """
    c = _Ctx(mp)
    A, G = _h_columns(c)
    B, D = _k_columns(c)
    hgens, kgens = greedy_generators(mp.H), greedy_generators(mp.K)
    ia, ib = [], []
    step = max(1, (1 << 22) // max(1, B.shape[0]))
    for lo in range(0, A.shape[0], step):
        i, j = np.nonzero(_generator_pairs_ok(c, A[lo : lo + step], G[lo : lo + step], B, D, hgens, kgens))
        ia.append(i + lo)
        ib.append(j)
    ia = np.concatenate(ia) if ia else np.zeros(0, np.int64)
    ib = np.concatenate(ib) if ib else np.zeros(0, np.int64)
    step = max(1, (1 << 22) // max(1, c.nH * c.nK))
    good = np.zeros(ia.size, dtype=bool)
    for lo in range(0, ia.size, step):
        sa, sb = ia[lo : lo + step], ib[lo : lo + step]
        good[lo : lo + step] = _cross_ok(c, A[sa], G[sa], B[sb], D[sb])
    ia, ib = ia[good], ib[good]
    if ia.size == 0:
        return stack([], mp)
    st = tuple(v.astype(INDEX_DTYPE) for v in (A[ia], B[ib], G[ia], D[ib]))
    return _sort_stack(st)


def enumerate_Ac(mp: MatchedPair) -> list[CentralAutMatrix]:
    return unstack(enumerate_Ac_stack(mp), mp)


# --- P, Q, R, S and A, B, C, D ------------------------------------------------------------------


@dataclass
class SubgroupOfAc:
    label: str
    members: list

    def __len__(self) -> int:
        return len(self.members)


@dataclass
class PQRS:
    P: SubgroupOfAc
    Q: SubgroupOfAc
    R: SubgroupOfAc
    S: SubgroupOfAc
    A: SubgroupOfAc
    B: SubgroupOfAc
    C: SubgroupOfAc
    D: SubgroupOfAc

    def sizes(self) -> dict:
        return {name: len(getattr(self, name)) for name in "PQRSABCD"}


def _bijective_rows(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return (np.sort(rows, axis=1) == np.arange(rows.shape[1])[None, :]).all(axis=1)


def p_members(mp: MatchedPair) -> np.ndarray:
    """alpha in Aut(H) with h^-1 alpha(h) in H* and alpha commuting with every sigma_k.

    Since H* is central in H, alpha = h -> h phi(h) for phi in Hom(H, H*);
    this runs over exactly the candidates.
    """
    H, s = mp.H, mp.sigma
    phis = hom_images(H, H, mp.fix_ker.H_star)
    al = H.table[np.arange(H.order)[None, :], phis]
    al = al[_bijective_rows(al)]
    ok = (s[:, al].transpose(1, 0, 2) == al[:, s]).all(axis=(1, 2))  # sigma_k(alpha(h)) = alpha(sigma_k(h))
    return _lex_sorted(al[ok])


def q_members(mp: MatchedPair) -> np.ndarray:
    """beta in Hom(K, H*) with beta(k) = beta(tau_h(k))."""
    bs = hom_images(mp.K, mp.H, mp.fix_ker.H_star)
    ok = (bs[:, mp.tau] == bs[:, :, None]).all(axis=(1, 2))
    return bs[ok]


def r_members(mp: MatchedPair) -> np.ndarray:
    """gamma in Hom(H, K*) with gamma(sigma_k(h)) = gamma(h)."""
    gs = hom_images(mp.H, mp.K, mp.fix_ker.K_star)
    ok = (gs[:, mp.sigma] == gs[:, None, :]).all(axis=(1, 2))
    return gs[ok]


def s_members(mp: MatchedPair) -> np.ndarray:
    """delta in Aut(K) with k^-1 delta(k) in K* and tau_h(delta(k)) = delta(tau_h(k))."""
    K, t = mp.K, mp.tau
    psis = hom_images(K, K, mp.fix_ker.K_star)
    dl = K.table[np.arange(K.order)[None, :], psis]
    dl = dl[_bijective_rows(dl)]
    ok = (t[dl] == dl[:, t]).all(axis=(1, 2))  # tau[delta(k), h] = delta(tau[k, h])
    return _lex_sorted(dl[ok])


def _closed(mp: MatchedPair, st: tuple) -> bool:
    keys = {r.tobytes() for r in stack_keys(st)}
    for i in range(st[0].shape[0]):
        prod = compose_stack(mp, st, tuple(a[i] for a in st))
        if any(r.tobytes() not in keys for r in stack_keys(prod)):
            return False
    return True


def compute_PQRS(mp: MatchedPair, certify: bool = True) -> PQRS:
    nH, nK = mp.H.order, mp.K.order
    P, Q, R, S = p_members(mp), q_members(mp), r_members(mp), s_members(mp)
    idH, idK = np.arange(nH), np.arange(nK)
    zHK, zKH = np.zeros(nK, np.int64), np.zeros(nH, np.int64)
    blocks = {
        "A": [(a, zHK, zKH, idK) for a in P],
        "B": [(idH, b, zKH, idK) for b in Q],
        "C": [(idH, zHK, g, idK) for g in R],
        "D": [(idH, zHK, zKH, d) for d in S],
    }
    mats = {k: [CentralAutMatrix(*q, mp) for q in v] for k, v in blocks.items()}
    if certify:
        for label, ms in mats.items():
            if not _closed(mp, stack(ms, mp)):
                raise TheoremViolation(f"{label} is not closed under the block product")
    return PQRS(
        SubgroupOfAc("P", list(P)), SubgroupOfAc("Q", list(Q)), SubgroupOfAc("R", list(R)), SubgroupOfAc("S", list(S)),
        *(SubgroupOfAc(k, mats[k]) for k in "ABCD"),
    )


@dataclass
class AbcdReport:
    """Outcome of comparing ABCD with the full matrix group.

    ``hypothesis_holds`` quantifies 1 - beta gamma in P over beta in Q,
    gamma in R. ``entry_hypothesis_holds`` quantifies instead over the
    beta, gamma entries that actually occur in the matrix group; the two
    agree whenever every such entry already lies in Q and R.
    """

    hypothesis_holds: bool
    abcd_equals_Ac: bool
    abcd_order: int
    ac_order: int
    witness: Optional[dict]
    hypothesis_witness: Optional[dict]
    entry_hypothesis_holds: bool
    entry_hypothesis_witness: Optional[dict]

    def to_json(self) -> dict:
        return {
            "hypothesis_holds": self.hypothesis_holds,
            "abcd_equals_Ac": self.abcd_equals_Ac,
            "abcd_order": self.abcd_order,
            "ac_order": self.ac_order,
            "witness": self.witness,
            "hypothesis_witness": self.hypothesis_witness,
            "entry_hypothesis_holds": self.entry_hypothesis_holds,
            "entry_hypothesis_witness": self.entry_hypothesis_witness,
        }


def _one_minus_violation(mp: MatchedPair, P_rows, betas, gammas) -> Optional[dict]:
    H = mp.H
    P_keys = {np.asarray(a, dtype=INDEX_DTYPE).tobytes() for a in P_rows}
    for b in betas:
        for g in gammas:
            bg = MapTable(H, H, np.asarray(b)[np.asarray(g)])
            if one_minus(bg).image.tobytes() not in P_keys:
                return {"beta": np.asarray(b).tolist(), "gamma": np.asarray(g).tolist()}
    return None


def one_minus_hypothesis(mp: MatchedPair, pqrs: PQRS) -> Optional[dict]:
    """None when 1 - beta gamma lies in P for every beta in Q, gamma in R;
    otherwise the first offending pair."""
    return _one_minus_violation(mp, pqrs.P.members, pqrs.Q.members, pqrs.R.members)


def entry_hypothesis(mp: MatchedPair, pqrs: PQRS, ac: tuple) -> Optional[dict]:
    """As :func:`one_minus_hypothesis`, with beta and gamma running over the
    entries of the matrices in ``ac``."""
    betas = np.unique(ac[1], axis=0) if ac[1].shape[0] else ac[1]
    gammas = np.unique(ac[2], axis=0) if ac[2].shape[0] else ac[2]
    return _one_minus_violation(mp, pqrs.P.members, betas, gammas)


def abcd_products(mp: MatchedPair, pqrs: PQRS) -> tuple:
    """Sorted stack of the distinct products a b c d."""
    st = stack([CentralAutMatrix.identity(mp)], mp)
    for label in "DCBA":  # build right to left: x -> block x
        block = stack(getattr(pqrs, label).members, mp)
        parts = [compose_stack(mp, tuple(a[i] for a in block), st) for i in range(block[0].shape[0])]
        st = tuple(np.concatenate([p[j] for p in parts]) for j in range(4))
        keys, idx = np.unique(stack_keys(st), axis=0, return_index=True)
        st = tuple(a[np.sort(idx)] for a in st)
    return _sort_stack(st)


def verify_abcd_product(
    mp: MatchedPair, ac: Optional[tuple] = None, pqrs: Optional[PQRS] = None, strict: bool = True
) -> AbcdReport:
    """Compare ABCD with the full matrix group.

    With ``strict``, raises TheoremViolation if 1 - beta gamma lies in P for
    all beta in Q, gamma in R and yet ABCD differs from the whole group.
    """
    pqrs = pqrs or compute_PQRS(mp)
    ac = enumerate_Ac_stack(mp) if ac is None else ac
    hyp = one_minus_hypothesis(mp, pqrs)
    ehyp = entry_hypothesis(mp, pqrs, ac)
    abcd = abcd_products(mp, pqrs)
    k_abcd = {r.tobytes(): i for i, r in enumerate(stack_keys(abcd))}
    k_ac = {r.tobytes(): i for i, r in enumerate(stack_keys(ac))}
    witness = None
    only_ac = [k for k in k_ac if k not in k_abcd]
    only_abcd = [k for k in k_abcd if k not in k_ac]
    if only_ac:
        witness = {"missing_from_ABCD": unstack(tuple(a[[k_ac[only_ac[0]]]] for a in ac), mp)[0].to_json()}
    elif only_abcd:
        witness = {"outside_Ac": unstack(tuple(a[[k_abcd[only_abcd[0]]]] for a in abcd), mp)[0].to_json()}
    report = AbcdReport(hyp is None, witness is None, len(k_abcd), len(k_ac), witness, hyp, ehyp is None, ehyp)
    if strict and report.hypothesis_holds and not report.abcd_equals_Ac:
        raise TheoremViolation("1 - beta gamma lies in P for all beta in Q, gamma in R but ABCD != A_c", report)
    return report


# --- remark -----------------------------------------------------------------------------------


@dataclass
class RemarkReport:
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_remark(mp: MatchedPair, matrices) -> RemarkReport:
    """For h in Fix(sigma), k in Fix(tau): alpha(h) in Fix(sigma), delta(k) in
    Fix(tau), alpha(h) commutes with all beta(k'), gamma(h') commutes with delta(k)."""
    st = matrices if isinstance(matrices, tuple) else stack(list(matrices), mp)
    a, b, g, d = st
    Ht, Kt = mp.H.table, mp.K.table
    fk = mp.fix_ker
    fs, ft = fk.fix_sigma.as_array(), fk.fix_tau.as_array()
    ah, dk = a[:, fs], d[:, ft]
    checks = {
        "alpha(Fix sigma) in Fix sigma": ~fk.fix_sigma.mask[ah].all(axis=1),
        "delta(Fix tau) in Fix tau": ~fk.fix_tau.mask[dk].all(axis=1),
        "alpha(h) beta(k') = beta(k') alpha(h)": (
            Ht[ah[:, :, None], b[:, None, :]] != Ht[b[:, None, :], ah[:, :, None]]
        ).any(axis=(1, 2)),
        "gamma(h') delta(k) = delta(k) gamma(h')": (
            Kt[g[:, :, None], dk[:, None, :]] != Kt[dk[:, None, :], g[:, :, None]]
        ).any(axis=(1, 2)),
    }
    violations = [(name, int(i)) for name, bad in checks.items() for i in np.flatnonzero(bad)]
    return RemarkReport(a.shape[0], violations)


# --- structure of a matrix group ---------------------------------------------------------------


def cayley_group_of_stack(mp: MatchedPair, st: tuple, name: str = "A_c") -> FiniteGroup:
    """Cayley table of a stack that is closed under the block product.

    The identity matrix is moved to index 0 and the remaining order kept.
    """
    keys = stack_keys(st)
    ident = stack_keys(stack([CentralAutMatrix.identity(mp)], mp))[0].tobytes()
    order = [i for i in range(keys.shape[0]) if keys[i].tobytes() == ident]
    if not order:
        raise TheoremViolation("identity matrix missing from the set")
    order += [i for i in range(keys.shape[0]) if i != order[0]]
    st = tuple(a[order] for a in st)
    keys = keys[order]
    lookup = {r.tobytes(): i for i, r in enumerate(keys)}
    n = keys.shape[0]
    table = np.empty((n, n), dtype=np.int64)
    for j in range(n):
        prod = stack_keys(compose_stack(mp, st, tuple(a[j] for a in st)))  # m_i o m_j
        try:
            table[:, j] = [lookup[r.tobytes()] for r in prod]
        except KeyError as exc:
            raise TheoremViolation("set is not closed under the block product") from exc
    return FiniteGroup(table, name)


def map_group_structure(rows: np.ndarray, name: str = "maps") -> StructureReport:
    """Structure of a set of bijections (rows are image arrays) under composition."""
    rows = np.asarray(rows)
    lookup = {r.astype(INDEX_DTYPE).tobytes(): i for i, r in enumerate(rows)}
    ident = np.arange(rows.shape[1], dtype=INDEX_DTYPE).tobytes()
    order = [lookup[ident]] + [i for i in range(len(rows)) if i != lookup[ident]]
    rows = rows[order]
    lookup = {r.astype(INDEX_DTYPE).tobytes(): i for i, r in enumerate(rows)}
    table = np.empty((len(rows), len(rows)), dtype=np.int64)
    for j, r in enumerate(rows):
        table[:, j] = [lookup[p.astype(INDEX_DTYPE).tobytes()] for p in rows[:, r]]
    return structure_probe(FiniteGroup(table, name))


def stack_structure(mp: MatchedPair, st: tuple) -> StructureReport:
    """Structure of a closed stack; through generators when it is too big for a table."""
    n = st[0].shape[0]
    if n <= CAYLEY_LIMIT:
        return structure_probe(cayley_group_of_stack(mp, st))
    return _structure_from_generators(mp, st)


def _structure_from_generators(mp: MatchedPair, st: tuple) -> StructureReport:
    keys = stack_keys(st)
    index = {r.tobytes(): i for i, r in enumerate(keys)}
    reached = np.zeros(len(keys), dtype=bool)
    reached[index[stack_keys(stack([CentralAutMatrix.identity(mp)], mp))[0].tobytes()]] = True
    gens: list[int] = []
    while not reached.all():
        gens.append(int(np.flatnonzero(~reached)[0]))
        frontier = np.flatnonzero(reached)
        while frontier.size:
            new = []
            for gi in gens:
                prod = stack_keys(compose_stack(mp, tuple(a[frontier] for a in st), tuple(a[gi] for a in st)))
                for r in prod:
                    j = index.get(r.tobytes())
                    if j is None:
                        raise TheoremViolation("set is not closed under the block product")
                    if not reached[j]:
                        reached[j] = True
                        new.append(j)
            frontier = np.array(sorted(set(new)), dtype=np.int64)
    gm = [CentralAutMatrix(*(a[i] for a in st), mp) for i in gens]
    n = len(keys)
    abelian = all(compose_matrices(x, y) == compose_matrices(y, x) for x in gm for y in gm)
    ident_m = CentralAutMatrix.identity(mp)
    orders = []
    for x in gm:
        m, cur = 1, x
        while cur != ident_m:
            cur, m = compose_matrices(x, cur), m + 1
        orders.append(m)
    # without a table the exponent is only known for abelian groups
    exponent = math.lcm(*orders) if abelian and orders else (1 if abelian else 0)
    p = _prime_power_base(n)
    elem = abelian and p is not None and exponent == p
    rank = round(math.log(n, p)) if elem else None
    return StructureReport(n, abelian, exponent, elem, p if elem else None, (p,) * rank if elem else None)
