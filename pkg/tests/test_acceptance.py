"""The eight acceptance criteria, each at its stated tolerance.

Every test records its verdict in conftest.CRITERIA, and the terminal summary
prints one line per criterion. Run this file directly for the same lines
without the rest of the suite.
"""

import io
import json
import time
from contextlib import redirect_stdout

import numpy as np

from conftest import CRITERIA
from zappa_szep.center import center_via_theorem
from zappa_szep.central_aut import (
    _sort_stack,
    compose_stack,
    decompose_images,
    enumerate_Ac_stack,
    matrices_to_images,
    stack_keys,
    stack_structure,
    verify_abcd_product,
)
from zappa_szep.cli import main
from zappa_szep.fuzz import fuzz
from zappa_szep.groups import center_bruteforce
from zappa_szep.homs import central_automorphism_images
from zappa_szep.order_p5 import build_p5, verify_fix_ker_claims, verify_pqrs_structure

FUZZ_COUNT = 2000


def record(n, ok, detail):
    CRITERIA[n] = (bool(ok), detail)
    assert ok, f"criterion {n}: {detail}"


def same_sets(a, b):
    return np.array_equal(stack_keys(_sort_stack(a)), stack_keys(_sort_stack(b)))


def test_criterion_1_p3_center():
    start = time.perf_counter()
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["example", "--p", "3", "--check", "center"])
    elapsed = time.perf_counter() - start
    claims = {c["name"]: c for c in json.loads(buf.getvalue())["report"]["reports"][0]["claims"]}
    order = claims["|Z(G)| = p^2"]["observed"]
    ok = (
        code == 0
        and order == 9
        and claims["Z(G) = <c,d>"]["pass"]
        and claims["theorem center = brute-force center"]["pass"]
        and elapsed < 5
    )
    record(1, ok, f"|Z(G)| = {order}, Z(G) = <c,d>: {claims['Z(G) = <c,d>']['pass']}, {elapsed:.2f} s")


def test_criterion_2_p3_autc():
    start = time.perf_counter()
    inst = build_p5(3)
    thetas = central_automorphism_images(inst.zs.product)
    ac = enumerate_Ac_stack(inst.mp)
    agree = same_sets(decompose_images(thetas, inst.zs), ac)
    probe = stack_structure(inst.mp, ac)
    elapsed = time.perf_counter() - start
    n_oracle, n_matrix = int(thetas.shape[0]), int(ac[0].shape[0])
    ok = n_oracle == n_matrix == 3**6 and agree and probe.is_abelian and probe.exponent == 3 and elapsed < 60
    record(2, ok, f"oracle {n_oracle}, matrices {n_matrix}, same set {agree}, abelian {probe.is_abelian}, "
                  f"exponent {probe.exponent}, {elapsed:.1f} s")


def test_criterion_3_p3_pqrs(p3, p3_solved):
    rep = verify_pqrs_structure(p3, strict=False, pqrs=p3_solved.pqrs)
    sizes = [c.observed for c in rep.claims if c.name.startswith("(|P|")][0]
    failed = [c.name for c in rep.claims if not c.passed]
    record(3, rep.ok and sizes == (9, 3, 9, 3), f"sizes {sizes}, failed claims {failed or 'none'}")


def test_criterion_4_p5(p5, p5_solved):
    start = time.perf_counter()
    center = verify_fix_ker_claims(p5, strict=False)
    z = [c.observed for c in center.claims if c.name == "|Z(G)| = p^2"][0]
    n_oracle = int(p5_solved.thetas.shape[0])
    n_matrix = int(p5_solved.ac[0].shape[0])
    agree = same_sets(p5_solved.decomposed, p5_solved.ac)
    elapsed = time.perf_counter() - start
    ok = center.ok and z == 25 and n_oracle == n_matrix == 5**6 and agree and elapsed < 600
    record(4, ok, f"|Z| = {z}, oracle {n_oracle}, matrices {n_matrix}, same set {agree}, {elapsed:.1f} s")


def test_criterion_5_center_equivalence(corpus):
    bad = [s.name for s in corpus
           if center_via_theorem(s.mp, s.zs).members != center_bruteforce(s.zs.product).members]
    record(5, not bad, f"{len(corpus)} instances, mismatches {bad or 'none'}")


def _eta_failures(s):
    th = s.thetas
    dec = decompose_images(th, s.zs)
    for i in range(th.shape[0]):
        lhs = decompose_images(th[i][th], s.zs)
        rhs = compose_stack(s.mp, tuple(a[i] for a in dec), dec)
        if not all(np.array_equal(x, y) for x, y in zip(lhs, rhs)):
            return i
    return None


def test_criterion_6_main_theorem(corpus):
    bad, pairs = [], 0
    for s in corpus:
        dec = decompose_images(s.thetas, s.zs)
        if not same_sets(dec, s.ac):
            bad.append((s.name, "sets"))
        if not np.array_equal(matrices_to_images(dec, s.zs), s.thetas):
            bad.append((s.name, "images round trip"))
        if not same_sets(decompose_images(matrices_to_images(s.ac, s.zs), s.zs), s.ac):
            bad.append((s.name, "matrix round trip"))
        if _eta_failures(s) is not None:
            bad.append((s.name, "composition"))
        pairs += s.thetas.shape[0] ** 2
    record(6, not bad, f"{len(corpus)} instances, {pairs} composition pairs, failures {bad or 'none'}")


def test_criterion_7_abcd(corpus):
    broken, entry_broken, holds = [], [], 0
    for s in corpus:
        rep = verify_abcd_product(s.mp, s.ac, s.pqrs, strict=False)
        if rep.hypothesis_holds:
            holds += 1
            if not rep.abcd_equals_Ac:
                broken.append(f"{s.name} ({rep.abcd_order} vs {rep.ac_order})")
        if rep.entry_hypothesis_holds and not rep.abcd_equals_Ac:
            entry_broken.append(s.name)
    detail = (f"hypothesis holds on {holds}, ABCD != A_c on {len(broken)} of them: {broken[:3]}"
              f"{' ...' if len(broken) > 3 else ''}; diagnostic: with beta, gamma taken from A_c "
              f"entries the implication fails on {len(entry_broken)} instances")
    record(7, not broken, detail)


def test_criterion_8_fuzz(corpus):
    outcomes = {}
    accepted = []
    for c in fuzz(((s.name, s.mp) for s in corpus), FUZZ_COUNT, seed=20261016):
        outcomes[c.outcome] = outcomes.get(c.outcome, 0) + 1
        if c.outcome == "accepted":
            accepted.append((c.source, c.target, c.cell))
    record(8, FUZZ_COUNT >= 1000 and not accepted, f"{FUZZ_COUNT} corruptions, {dict(sorted(outcomes.items()))}")


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
