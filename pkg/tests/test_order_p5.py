import numpy as np
import pytest

from zappa_szep.errors import ClaimFailed, GuardExceeded, NotOddPrime
from zappa_szep.order_p5 import (
    ClaimReport,
    build_p5,
    closed_form_tables,
    run_checks,
    verify_autc_structure,
    verify_build,
    verify_fix_ker_claims,
    verify_pqrs_structure,
)


def test_p3_build_claims(p3):
    rep = verify_build(p3)
    assert rep.ok and len(rep.claims) >= 8


def test_closed_forms_match_generator_extension(p3):
    s, t = closed_form_tables(3)
    assert np.array_equal(p3.mp.sigma, s) and np.array_equal(p3.mp.tau, t)


def test_word_indices(p3):
    assert p3.H_word(1, 0, 0) == p3.labels["a"]
    assert p3.H_word(0, 1, 0) == p3.labels["b"]
    assert p3.K_word(0, 1) == p3.labels["e"]
    assert p3.H_word(4, -1, 3) == p3.H_word(1, 2, 0)


@pytest.mark.parametrize("p", [3, 5])
def test_generator_order_does_not_matter(p):
    fwd, rev = build_p5(p), build_p5(p, reverse_generators=True)
    assert np.array_equal(fwd.mp.sigma, rev.mp.sigma)
    assert np.array_equal(fwd.mp.tau, rev.mp.tau)
    assert np.array_equal(fwd.zs.product.table, rev.zs.product.table)


def test_center_claims(p3):
    rep = verify_fix_ker_claims(p3)
    names = {c.name for c in rep.claims}
    assert {"Fix(sigma) = <a,d>", "ker(tau) = <b,d>", "Z(G) = <c,d>"} <= names


def test_pqrs_claims(p3, p3_solved):
    rep = verify_pqrs_structure(p3, pqrs=p3_solved.pqrs)
    sizes = [c for c in rep.claims if c.name.startswith("(|P|")][0]
    assert sizes.observed == (9, 3, 9, 3)


def test_autc_claims(p3, p3_solved):
    rep = verify_autc_structure(p3, thetas=p3_solved.thetas, ac=p3_solved.ac, pqrs=p3_solved.pqrs)
    assert rep.ok
    got = {c.name: c.observed for c in rep.claims}
    assert got["|Aut_c(G)| by oracle"] == 729 == got["|A_c| by characterization"]


def test_p5_center(p5):
    rep = verify_fix_ker_claims(p5)
    assert [c.observed for c in rep.claims if c.name == "|Z(G)| = p^2"] == [25]


@pytest.mark.parametrize("p", [2, 9, 1, 15])
def test_rejects_non_odd_primes(p):
    with pytest.raises(NotOddPrime):
        build_p5(p)


def test_guard(monkeypatch):
    with pytest.raises(GuardExceeded):
        build_p5(11)
    monkeypatch.setenv("ZSZ_MAX_ORDER", "200")
    with pytest.raises(GuardExceeded):
        build_p5(3)


def test_strict_raises_on_failed_claim(p3, monkeypatch):
    import zappa_szep.order_p5 as mod

    monkeypatch.setattr(mod, "closed_form_tables", lambda p: (np.zeros((1, 1)), np.zeros((1, 1))))
    with pytest.raises(ClaimFailed) as err:
        verify_build(p3)
    assert not err.value.report.ok
    assert not verify_build(p3, strict=False).ok


def test_report_json_shape():
    rep = ClaimReport("t")
    rep.add("x", 1, np.int64(1))
    rep.add("y", (1, 2), [1, 3], passed=False)
    doc = rep.to_json()
    assert doc["ok"] is False
    assert doc["claims"][0] == {"name": "x", "expected": 1, "observed": 1, "pass": True}


def test_run_checks_subset():
    (rep,) = run_checks(3, "center")
    assert rep.title == "center p=3" and rep.ok
