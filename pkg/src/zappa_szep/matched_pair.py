"""Matched pairs of groups and their Zappa-Szep products.

A matched pair is stored as two ``|K| x |H|`` tables::

    sigma[k][h] = sigma_k(h)   (an element of H)
    tau[k][h]   = tau_h(k)     (an element of K)

Note that ``tau`` is indexed with k first even though the action is written
with h as subscript, so that both tables have the same shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import (
    IncompleteRules,
    InconsistentRules,
    InvalidMatchedPair,
    NotAGroup,
    NotAnAction,
    NotExactFactorization,
    ProductNotAGroup,
    ShapeMismatch,
)
from .groups import (
    INDEX_DTYPE,
    FiniteGroup,
    Subgroup,
    _first_true,
    _frozen,
    build_group_from_table,
)

CONDITIONS = ("C1", "C2", "C3", "C4", "C5", "C6")


@dataclass(frozen=True, eq=False)
class MatchedPair:
    H: FiniteGroup
    K: FiniteGroup
    sigma: np.ndarray
    tau: np.ndarray

    def __post_init__(self):
        shape = (self.K.order, self.H.order)
        for name in ("sigma", "tau"):
            arr = np.asarray(getattr(self, name))
            if arr.shape != shape:
                raise ShapeMismatch(f"{name} has shape {arr.shape}, expected {shape}")
            object.__setattr__(self, name, _frozen(arr))
        if self.sigma.min() < 0 or self.sigma.max() >= self.H.order:
            raise ShapeMismatch("sigma entries must be elements of H")
        if self.tau.min() < 0 or self.tau.max() >= self.K.order:
            raise ShapeMismatch("tau entries must be elements of K")

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatchedPair):
            return NotImplemented
        return (
            self.H == other.H
            and self.K == other.K
            and np.array_equal(self.sigma, other.sigma)
            and np.array_equal(self.tau, other.tau)
        )

    __hash__ = object.__hash__

    @classmethod
    def trivial(cls, H: FiniteGroup, K: FiniteGroup) -> "MatchedPair":
        """Both actions trivial; the product is H x K."""
        sigma = np.tile(np.arange(H.order), (K.order, 1))
        tau = np.tile(np.arange(K.order)[:, None], (1, H.order))
        return cls(H, K, sigma, tau)

    def sigma_k(self, k: int) -> np.ndarray:
        return self.sigma[k]

    def tau_h(self, h: int) -> np.ndarray:
        return self.tau[:, h]

    @cached_property
    def fix_ker(self) -> "FixKer":
        return fix_ker_sets(self)


@dataclass
class ValidationReport:
    results: dict  # condition -> witness tuple or None

    @property
    def valid(self) -> bool:
        return all(w is None for w in self.results.values())

    def failed(self) -> list[str]:
        return [c for c, w in self.results.items() if w is not None]

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "conditions": {
                c: {"pass": w is None, "witness": None if w is None else list(w)} for c, w in self.results.items()
            },
        }


def _witness(mask: np.ndarray, labels: Sequence[str]) -> Optional[tuple]:
    """Lexicographically least failing index, spread over (h, h', k, k')."""
    if not mask.any():
        return None
    pos = dict(zip(labels, _first_true(mask)))
    return tuple(pos.get(name) for name in ("h", "h2", "k", "k2"))


def validate_matched_pair(mp: MatchedPair) -> ValidationReport:
    """Check C1-C6 exhaustively. Witnesses are tuples (h, h', k, k') with
    ``None`` in the slots a condition does not quantify over."""
    H, K, s, t = mp.H.table, mp.K.table, mp.sigma, mp.tau
    nH, nK = mp.H.order, mp.K.order
    hs, ks = np.arange(nH), np.arange(nK)
    res = {}
    # C1: sigma_1(h) = h, tau_1(k) = k
    w = _witness(s[0] != hs, ["h"])
    res["C1"] = w if w is not None else _witness(t[:, 0] != ks, ["k"])
    # C2: sigma_k(1) = 1 = tau_h(1)
    w = _witness(s[:, 0] != 0, ["k"])
    res["C2"] = w if w is not None else _witness(t[0] != 0, ["h"])
    # C3: sigma_{kk'}(h) = sigma_k(sigma_k'(h)); axes (k, k', h)
    lhs = s[K]  # s[K[k,k'], h]
    rhs = s[ks[:, None, None], s[None, :, :]]
    res["C3"] = _witness(lhs != rhs, ["k", "k2", "h"])
    # C4: tau_h(kk') = tau_{sigma_k'(h)}(k) tau_h(k'); axes (k, k', h)
    lhs = t[K]
    rhs = K[t[ks[:, None, None], s[None, :, :]], t[None, :, :]]
    res["C4"] = _witness(lhs != rhs, ["k", "k2", "h"])
    # C5: sigma_k(hh') = sigma_k(h) sigma_{tau_h(k)}(h'); axes (k, h, h')
    lhs = s[:, H]
    rhs = H[s[:, :, None], s[t[:, :, None], hs[None, None, :]]]
    res["C5"] = _witness(lhs != rhs, ["k", "h", "h2"])
    # C6: tau_{hh'}(k) = tau_{h'}(tau_h(k)); axes (k, h, h')
    lhs = t[:, H]
    rhs = t[t[:, :, None], hs[None, None, :]]
    res["C6"] = _witness(lhs != rhs, ["k", "h", "h2"])
    return ValidationReport(res)


# --- Fix / ker ------------------------------------------------------------------------


@dataclass(frozen=True)
class FixKer:
    fix_sigma: Subgroup
    ker_sigma: Subgroup
    fix_tau: Subgroup
    ker_tau: Subgroup
    H_star: Subgroup
    K_star: Subgroup


def fix_ker_sets(mp: MatchedPair) -> FixKer:
    """Fix(sigma), ker(tau), H* inside H and ker(sigma), Fix(tau), K* inside K,
    each checked to be closed."""
    s, t = mp.sigma, mp.tau
    hs, ks = np.arange(mp.H.order), np.arange(mp.K.order)
    fix_s = np.flatnonzero((s == hs[None, :]).all(axis=0))
    ker_s = np.flatnonzero((s == hs[None, :]).all(axis=1))
    fix_t = np.flatnonzero((t == ks[:, None]).all(axis=1))
    ker_t = np.flatnonzero((t == ks[:, None]).all(axis=0))
    ZH, ZK = mp.H.center.mask, mp.K.center.mask
    h_star = np.intersect1d(fix_s, ker_t)
    k_star = np.intersect1d(fix_t, ker_s)
    h_star, k_star = h_star[ZH[h_star]], k_star[ZK[k_star]]
    return FixKer(
        fix_sigma=Subgroup.from_members(mp.H, fix_s),
        ker_sigma=Subgroup.from_members(mp.K, ker_s),
        fix_tau=Subgroup.from_members(mp.K, fix_t),
        ker_tau=Subgroup.from_members(mp.H, ker_t),
        H_star=Subgroup.from_members(mp.H, h_star),
        K_star=Subgroup.from_members(mp.K, k_star),
    )


# --- the product ------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ZappaSzepGroup:
    """The external product on H x K; the pair (h, k) has index ``h*|K| + k``."""

    product: FiniteGroup
    source: MatchedPair

    @property
    def nK(self) -> int:
        return self.source.K.order

    def index_of(self, h: int, k: int) -> int:
        return int(h) * self.nK + int(k)

    def pair_of(self, g: int) -> tuple[int, int]:
        h, k = divmod(int(g), self.nK)
        return h, k

    def embed_H(self) -> Subgroup:
        return Subgroup(self.product, tuple(h * self.nK for h in range(self.source.H.order)))

    def embed_K(self) -> Subgroup:
        return Subgroup(self.product, tuple(range(self.nK)))


def product_table(mp: MatchedPair) -> np.ndarray:
    """(h,k)(h',k') = (h sigma_k(h'), tau_h'(k) k')."""
    nK = mp.K.order
    g = np.arange(mp.H.order * nK)
    h, k = g // nK, g % nK
    hp = mp.H.table[h[:, None], mp.sigma[k[:, None], h[None, :]]].astype(np.int64)
    kp = mp.K.table[mp.tau[k[:, None], h[None, :]], k[None, :]]
    return hp * nK + kp


def build_external_product(mp: MatchedPair, name: Optional[str] = None, validate: bool = True) -> ZappaSzepGroup:
    if validate:
        report = validate_matched_pair(mp)
        if not report.valid:
            raise InvalidMatchedPair(report)
    n = mp.H.order * mp.K.order
    try:
        G = build_group_from_table(n, product_table(mp), name or f"{mp.H.name}*{mp.K.name}")
    except NotAGroup as exc:
        raise ProductNotAGroup(str(exc)) from exc
    zs = ZappaSzepGroup(G, mp)
    if zs.embed_H().intersect(zs.embed_K()).members != (0,):
        raise ProductNotAGroup("embedded factors intersect nontrivially")
    return zs


def factorize_internal(G: FiniteGroup, H_sub: Subgroup, K_sub: Subgroup) -> MatchedPair:
    """Recover (sigma, tau) from an exact factorization G = HK by writing
    each product k h as h' k'."""
    Hm, Km = H_sub.as_array(), K_sub.as_array()
    if Hm.size * Km.size != G.order or H_sub.intersect(K_sub).members != (0,):
        raise NotExactFactorization("need |H||K| = |G| and H n K = 1")
    hk = G.table[Hm[:, None], Km[None, :]]  # element h*k
    where = np.full(G.order, -1, dtype=np.int64)
    where[hk.ravel()] = np.arange(hk.size)
    if (where < 0).any():
        raise NotExactFactorization("HK does not cover G")
    kh = G.table[Km[:, None], Hm[None, :]]  # element k*h, axes (k, h)
    sigma, tau = np.divmod(where[kh], Km.size)
    return MatchedPair(H_sub.as_group(), K_sub.as_group(), sigma, tau)


def product_isomorphism_holds(G: FiniteGroup, H_sub: Subgroup, K_sub: Subgroup, zs: ZappaSzepGroup) -> bool:
    """Whether (h, k) -> h k is multiplicative from the external product to G."""
    Hm, Km = H_sub.as_array(), K_sub.as_array()
    phi = G.table[Hm[:, None], Km[None, :]].ravel()
    return bool(np.array_equal(phi[zs.product.table], G.table[phi[:, None], phi[None, :]]))


def from_semidirect(H: FiniteGroup, K: FiniteGroup, phi) -> MatchedPair:
    """H x| K with K acting through ``phi[k]`` (an automorphism image array of H)."""
    phi = np.asarray(phi)
    if phi.shape != (K.order, H.order):
        raise ShapeMismatch(f"phi has shape {phi.shape}, expected {(K.order, H.order)}")
    hs = np.arange(H.order)
    for k in range(K.order):
        if np.unique(phi[k]).size != H.order or not np.array_equal(phi[k][H.table], H.table[phi[k][:, None], phi[k][None, :]]):
            raise NotAnAction(f"phi[{k}] is not an automorphism of H")
    if not np.array_equal(phi[K.table], phi[np.arange(K.order)[:, None, None], phi[None, :, :]]):
        raise NotAnAction("k -> phi[k] is not multiplicative")
    if not np.array_equal(phi[0], hs):
        raise NotAnAction("identity of K must act trivially")
    tau = np.tile(np.arange(K.order)[:, None], (1, H.order))
    return MatchedPair(H, K, phi, tau)


def extend_generator_actions(
    H: FiniteGroup,
    K: FiniteGroup,
    h_gens: Sequence[int],
    k_gens: Sequence[int],
    sigma_rules: Optional[Mapping] = None,
    tau_rules: Optional[Mapping] = None,
) -> MatchedPair:
    """Complete actions given on generators to full tables.

    ``sigma_rules[(k, h)]`` gives sigma_k(h) and ``tau_rules[(h, k)]`` gives
    tau_h(k) for generators h, k; unspecified generator pairs act trivially.
    Entries are propagated with C3/C4 (new K-words, K generator on the left)
    and C5/C6 (new H-words, H generator on the right) until nothing changes;
    the finished tables are then re-validated against C1-C6.
    """
    sigma_rules = dict(sigma_rules or {})
    tau_rules = dict(tau_rules or {})
    nH, nK = H.order, K.order
    Ht, Kt = H.table, K.table
    s = np.full((nK, nH), -1, dtype=np.int64)
    t = np.full((nK, nH), -1, dtype=np.int64)

    def put(table, k, h, value, why):
        old = table[k, h]
        if old == -1:
            table[k, h] = value
            return True
        if old != value:
            which = "sigma" if table is s else "tau"
            raise InconsistentRules(f"{which}[{k}][{h}]: {old} != {value} via {why}")
        return False

    for h in range(nH):
        put(s, 0, h, h, "C1")
        put(t, 0, h, 0, "C2")
    for k in range(nK):
        put(s, k, 0, 0, "C2")
        put(t, k, 0, k, "C1")
    for k in k_gens:
        for h in h_gens:
            put(s, k, h, sigma_rules.pop((k, h), h), "rule")
            put(t, k, h, tau_rules.pop((h, k), k), "rule")
    if sigma_rules or tau_rules:
        raise InconsistentRules(f"rules mention non-generators: {list(sigma_rules) + list(tau_rules)}")

    changed = True
    while changed:
        changed = False
        for k in range(nK):
            for h in range(nH):
                sv, tv = s[k, h], t[k, h]
                if sv < 0 or tv < 0:
                    continue
                for g in h_gens:
                    # C5: sigma_k(h g) = sigma_k(h) sigma_{tau_h(k)}(g); C6: tau_{hg}(k) = tau_g(tau_h(k))
                    if s[tv, g] >= 0:
                        changed |= put(s, k, Ht[h, g], Ht[sv, s[tv, g]], f"C5 k={k} h={h} g={g}")
                    if t[tv, g] >= 0:
                        changed |= put(t, k, Ht[h, g], t[tv, g], f"C6 k={k} h={h} g={g}")
                for c in k_gens:
                    # C3: sigma_{ck}(h) = sigma_c(sigma_k(h)); C4: tau_h(ck) = tau_{sigma_k(h)}(c) tau_h(k)
                    if s[c, sv] >= 0:
                        changed |= put(s, Kt[c, k], h, s[c, sv], f"C3 c={c} k={k} h={h}")
                    if t[c, sv] >= 0:
                        changed |= put(t, Kt[c, k], h, Kt[t[c, sv], tv], f"C4 c={c} k={k} h={h}")

    if (s < 0).any() or (t < 0).any():
        which = "sigma" if (s < 0).any() else "tau"
        k, h = _first_true((s if which == "sigma" else t) < 0)
        raise IncompleteRules(f"{which}[{k}][{h}] is not determined by the rules")
    mp = MatchedPair(H, K, s, t)
    report = validate_matched_pair(mp)
    if not report.valid:
        raise InconsistentRules(f"completed tables fail {report.failed()}: {report.results}")
    return mp


# --- JSON -------------------------------------------------------------------------------


def group_to_json(G: FiniteGroup) -> dict:
    return {"name": G.name, "order": G.order, "table": G.table.tolist()}


def group_from_json(doc: dict) -> FiniteGroup:
    try:
        return build_group_from_table(int(doc["order"]), np.asarray(doc["table"], dtype=np.int64), doc.get("name", "G"))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ShapeMismatch):
            raise
        raise ShapeMismatch(f"malformed group document: {exc}") from exc


def mp_to_json(mp: MatchedPair) -> dict:
    return {
        "H": group_to_json(mp.H),
        "K": group_to_json(mp.K),
        "sigma": mp.sigma.tolist(),
        "tau": mp.tau.tolist(),
    }


def mp_from_json(doc: dict) -> MatchedPair:
    try:
        return MatchedPair(
            group_from_json(doc["H"]),
            group_from_json(doc["K"]),
            np.asarray(doc["sigma"], dtype=np.int64),
            np.asarray(doc["tau"], dtype=np.int64),
        )
    except (KeyError, TypeError) as exc:
        raise ShapeMismatch(f"malformed matched-pair document: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, ShapeMismatch):
            raise
        raise ShapeMismatch(f"malformed matched-pair document: {exc}") from exc
