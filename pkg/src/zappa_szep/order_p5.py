"""The order p^5 group built from mutual actions of (Z_p)^3 and (Z_p)^2.

Generators: H = <a, b, d> and K = <c, e>, all of order p. The only
nontrivial generator actions are::

    sigma_e(b) = b d^-1        tau_a(e) = e c^-1

Element a^i b^j d^l of H has index i*p^2 + j*p + l, and c^k e^m of K has
index k*p + m.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .center import center_abelian_corollary, center_via_theorem
from .central_aut import (
    compose_stack,
    compute_PQRS,
    decompose_images,
    enumerate_Ac_stack,
    stack,
    stack_keys,
    stack_structure,
    map_group_structure,
    verify_abcd_product,
    _sort_stack,
)
from .errors import ClaimFailed, GuardExceeded, NotOddPrime
from .groups import Subgroup, center_bruteforce, elementary_abelian, is_prime, subgroup_generated, structure_probe
from .homs import central_automorphism_images
from .matched_pair import (
    MatchedPair,
    ZappaSzepGroup,
    build_external_product,
    extend_generator_actions,
    fix_ker_sets,
    validate_matched_pair,
)

MAX_P = 7
DEFAULT_MAX_ORDER = 4000


def max_order() -> int:
    return int(os.environ.get("ZSZ_MAX_ORDER", DEFAULT_MAX_ORDER))


@dataclass(frozen=True, eq=False)
class P5Instance:
    p: int
    mp: MatchedPair = field(repr=False)
    zs: ZappaSzepGroup = field(repr=False)
    labels: dict  # generator name -> index in H or K

    def H_word(self, i: int, j: int, l: int) -> int:
        """a^i b^j d^l."""
        p = self.p
        return (i % p) * p * p + (j % p) * p + (l % p)

    def K_word(self, k: int, m: int) -> int:
        """c^k e^m."""
        return (k % self.p) * self.p + (m % self.p)

    def in_G(self, name: str) -> int:
        """Index of a generator in the product."""
        if name in "abd":
            return self.zs.index_of(self.labels[name], 0)
        return self.zs.index_of(0, self.labels[name])


def p5_rules(p: int):
    H, K = elementary_abelian(p, 3), elementary_abelian(p, 2)
    a, b, d = p * p, p, 1
    c, e = p, 1
    sigma_rules = {(e, b): H.mul(b, H.inv(d))}
    tau_rules = {(a, e): K.mul(e, K.inv(c))}
    return H, K, {"a": a, "b": b, "d": d, "c": c, "e": e}, sigma_rules, tau_rules


def build_p5(p: int, reverse_generators: bool = False, allow_large: bool = False) -> P5Instance:
    """Build the instance for an odd prime p; orders above the desk-scale
    guard (``ZSZ_MAX_ORDER``, p <= 7) need ``allow_large``."""
    if p == 2 or not is_prime(p):
        raise NotOddPrime(f"p must be an odd prime, got {p}")
    if not allow_large and (p > MAX_P or p**5 > max_order()):
        raise GuardExceeded(f"|G| = {p**5} is above the desk-scale guard")
    H, K, labels, srules, trules = p5_rules(p)
    h_gens = [labels["a"], labels["b"], labels["d"]]
    k_gens = [labels["c"], labels["e"]]
    if reverse_generators:
        h_gens, k_gens = h_gens[::-1], k_gens[::-1]
    mp = extend_generator_actions(H, K, h_gens, k_gens, srules, trules)
    zs = build_external_product(mp, name=f"G(p={p})")
    return P5Instance(p, mp, zs, labels)


def closed_form_tables(p: int) -> tuple:
    """sigma_{c^k e^m}(a^i b^j d^l) = a^i b^j d^(l - jm) and
    tau_{a^i b^j d^l}(c^k e^m) = c^(k - im) e^m, as |K| x |H| arrays."""
    kk, mm = np.divmod(np.arange(p * p), p)
    hh = np.arange(p**3)
    i, j, l = hh // (p * p), (hh // p) % p, hh % p
    sigma = i[None, :] * p * p + j[None, :] * p + (l[None, :] - j[None, :] * mm[:, None]) % p
    tau = ((kk[:, None] - i[None, :] * mm[:, None]) % p) * p + mm[:, None]
    return sigma, tau


# --- claim reports ---------------------------------------------------------------------


@dataclass
class Claim:
    name: str
    expected: object
    observed: object
    passed: bool

    def to_json(self) -> dict:
        return {"name": self.name, "expected": _plain(self.expected), "observed": _plain(self.observed), "pass": self.passed}


def _plain(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    return v


@dataclass
class ClaimReport:
    title: str
    claims: list = field(default_factory=list)

    def add(self, name: str, expected, observed, passed: Optional[bool] = None) -> None:
        ok = (expected == observed) if passed is None else passed
        self.claims.append(Claim(name, expected, observed, bool(ok)))

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.claims)

    def to_json(self) -> dict:
        return {"title": self.title, "ok": self.ok, "claims": [c.to_json() for c in self.claims]}


def _finish(report: ClaimReport, strict: bool) -> ClaimReport:
    if strict and not report.ok:
        raise ClaimFailed(report)
    return report


def _gen_sub(inst: P5Instance, group, names: str) -> Subgroup:
    return subgroup_generated(group, [inst.labels[n] for n in names])


def _G_sub(inst: P5Instance, names: str) -> Subgroup:
    return subgroup_generated(inst.zs.product, [inst.in_G(n) for n in names])


def verify_build(inst: P5Instance, strict: bool = True) -> ClaimReport:
    p, G = inst.p, inst.zs.product
    rep = ClaimReport(f"build p={p}")
    rep.add("|G| = p^5", p**5, G.order)
    rep.add("C1-C6 hold", [], validate_matched_pair(inst.mp).failed())
    s_cf, t_cf = closed_form_tables(p)
    rep.add("sigma closed form", True, bool(np.array_equal(inst.mp.sigma, s_cf)))
    rep.add("tau closed form", True, bool(np.array_equal(inst.mp.tau, t_cf)))
    g = {n: inst.in_G(n) for n in "abcde"}
    rep.add("generators have order p", [p] * 5, [G.order_of(g[n]) for n in "abcde"])
    mul = G.mul
    rep.add("ae = eac", True, mul(g["a"], g["e"]) == mul(mul(g["e"], g["a"]), g["c"]))
    rep.add("be = ebd", True, mul(g["b"], g["e"]) == mul(mul(g["e"], g["b"]), g["d"]))
    commuting = [x + y for x in "abcde" for y in "abcde" if x < y and (x + y) not in ("ae", "be")]
    rep.add("other generator pairs commute", True, all(mul(g[u], g[v]) == mul(g[v], g[u]) for u, v in commuting))
    rep.add("G is nonabelian", False, G.is_abelian)
    return _finish(rep, strict)


def verify_fix_ker_claims(inst: P5Instance, strict: bool = True) -> ClaimReport:
    p, H, K = inst.p, inst.mp.H, inst.mp.K
    fk = fix_ker_sets(inst.mp)
    rep = ClaimReport(f"center p={p}")
    rep.add("Fix(sigma) = <a,d>", _gen_sub(inst, H, "ad").members, fk.fix_sigma.members)
    rep.add("ker(sigma) = <c>", _gen_sub(inst, K, "c").members, fk.ker_sigma.members)
    rep.add("Fix(tau) = <c>", _gen_sub(inst, K, "c").members, fk.fix_tau.members)
    rep.add("ker(tau) = <b,d>", _gen_sub(inst, H, "bd").members, fk.ker_tau.members)
    rep.add("H* = <d>", _gen_sub(inst, H, "d").members, fk.H_star.members)
    rep.add("K* = <c>", _gen_sub(inst, K, "c").members, fk.K_star.members)
    z_thm = center_via_theorem(inst.mp, inst.zs)
    z_brute = center_bruteforce(inst.zs.product)
    z_cor = center_abelian_corollary(inst.mp, inst.zs)
    rep.add("|Z(G)| = p^2", p * p, z_thm.order)
    rep.add("Z(G) = <c,d>", _G_sub(inst, "cd").members, z_thm.members)
    rep.add("theorem center = brute-force center", z_brute.members, z_thm.members)
    rep.add("H* x K* = brute-force center", z_brute.members, z_cor.members)
    return _finish(rep, strict)


def verify_pqrs_structure(inst: P5Instance, strict: bool = True, pqrs=None) -> ClaimReport:
    p, lab = inst.p, inst.labels
    pqrs = pqrs or compute_PQRS(inst.mp)
    rep = ClaimReport(f"pqrs p={p}")
    rep.add("(|P|,|Q|,|R|,|S|)", (p * p, p, p * p, p), tuple(len(x) for x in (pqrs.P, pqrs.Q, pqrs.R, pqrs.S)))
    for label in "ABCD":
        st = stack(getattr(pqrs, label).members, inst.mp)
        probe = stack_structure(inst.mp, st)
        rep.add(f"{label} elementary abelian", True, probe.is_elementary_abelian and probe.prime == p)
    P = np.asarray(pqrs.P.members)
    Q = np.asarray(pqrs.Q.members)
    R = np.asarray(pqrs.R.members)
    S = np.asarray(pqrs.S.members)
    a, b, d, c, e = lab["a"], lab["b"], lab["d"], lab["c"], lab["e"]
    rep.add("alpha(d) = d for alpha in P", True, bool((P[:, d] == d).all()))
    dpow = np.array([inst.H_word(0, 0, l) for l in range(p)])
    rep.add("alpha(a) in a<d>, alpha(b) in b<d>", True,
            bool(np.isin(P[:, a], inst.mp.H.table[a, dpow]).all() and np.isin(P[:, b], inst.mp.H.table[b, dpow]).all()))
    rep.add("beta(c) = 1 for beta in Q", True, bool((Q[:, c] == 0).all()))
    rep.add("gamma(d) = 1 for gamma in R", True, bool((R[:, d] == 0).all()))
    rep.add("delta(c) = c for delta in S", True, bool((S[:, c] == c).all()))
    cpow = np.array([inst.K_word(k, 0) for k in range(p)])
    rep.add("delta(e) in e<c>", True, bool(np.isin(S[:, e], inst.mp.K.table[e, cpow]).all()))
    return _finish(rep, strict)


def verify_autc_structure(inst: P5Instance, strict: bool = True, thetas=None, ac=None, pqrs=None) -> ClaimReport:
    p, mp = inst.p, inst.mp
    rep = ClaimReport(f"autc p={p}")
    thetas = central_automorphism_images(inst.zs.product) if thetas is None else thetas
    ac = enumerate_Ac_stack(mp) if ac is None else ac
    rep.add("|Aut_c(G)| by oracle", p**6, int(thetas.shape[0]))
    rep.add("|A_c| by characterization", p**6, int(ac[0].shape[0]))
    dec = _sort_stack(decompose_images(thetas, inst.zs))
    rep.add("decomposed oracle = characterization", True, bool(np.array_equal(stack_keys(dec), stack_keys(ac))))
    probe = stack_structure(mp, ac)
    rep.add("A_c abelian", True, probe.is_abelian)
    rep.add("A_c exponent p", p, probe.exponent)
    rep.add("A_c elementary abelian of rank 6", (p,) * 6, probe.abelian_invariants)

    pqrs = pqrs or compute_PQRS(mp)
    P, Q = np.asarray(pqrs.P.members), np.asarray(pqrs.Q.members)
    R, S = np.asarray(pqrs.R.members), np.asarray(pqrs.S.members)
    rep.add("alpha beta = beta", True, all(np.array_equal(al[be], be) for al in P for be in Q))
    rep.add("beta delta = beta", True, all(np.array_equal(be[de], be) for be in Q for de in S))
    rep.add("gamma alpha = gamma", True, all(np.array_equal(ga[al], ga) for ga in R for al in P))
    rep.add("delta gamma = gamma", True, all(np.array_equal(de[ga], ga) for de in S for ga in R))
    rep.add("beta gamma = 0", True, all(not be[ga].any() for be in Q for ga in R))
    rep.add("gamma beta = 0", True, all(not ga[be].any() for ga in R for be in Q))

    blocks = {k: stack(getattr(pqrs, k).members, mp) for k in "ABCD"}
    commute = True
    for x in "ABCD":
        for y in "ABCD":
            if x < y:
                X, Y = blocks[x], blocks[y]
                for i in range(X[0].shape[0]):
                    one = tuple(arr[i] for arr in X)
                    if not np.array_equal(stack_keys(compose_stack(mp, one, Y)), stack_keys(compose_stack(mp, Y, one))):
                        commute = False
    rep.add("A, B, C, D commute pairwise", True, commute)
    keys = {k: {r.tobytes() for r in stack_keys(blocks[k])} for k in "ABCD"}
    trivial = all(len(keys[x] & keys[y]) == 1 for x in "ABCD" for y in "ABCD" if x < y)
    rep.add("A, B, C, D meet trivially", True, trivial)
    abcd = verify_abcd_product(mp, ac, pqrs)
    rep.add("|ABCD| = p^6", p**6, abcd.abcd_order)
    rep.add("ABCD = A_c", True, abcd.abcd_equals_Ac)
    return _finish(rep, strict)


CHECKS = ("build", "center", "pqrs", "autc")


def run_checks(p: int, which: str = "all", strict: bool = False) -> list[ClaimReport]:
    inst = build_p5(p)
    names = CHECKS if which == "all" else (which,)
    fns = {
        "build": verify_build,
        "center": verify_fix_ker_claims,
        "pqrs": verify_pqrs_structure,
        "autc": verify_autc_structure,
    }
    return [fns[n](inst, strict=strict) for n in names]
