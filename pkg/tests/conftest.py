import numpy as np
import pytest

from zappa_szep.central_aut import _sort_stack, compute_PQRS, decompose_images, enumerate_Ac_stack
from zappa_szep.corpus import standard_corpus
from zappa_szep.groups import cyclic, inner_automorphism
from zappa_szep.homs import central_automorphism_images
from zappa_szep.matched_pair import build_external_product, from_semidirect
from zappa_szep.order_p5 import build_p5

# criterion number -> (passed, detail); filled by test_acceptance
CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


class Solved:
    """Everything the theorem checks need for one matched pair, computed once."""

    def __init__(self, name, mp):
        self.name, self.mp = name, mp
        self.zs = build_external_product(mp)
        self._thetas = self._ac = self._pqrs = None

    @property
    def thetas(self):
        if self._thetas is None:
            self._thetas = central_automorphism_images(self.zs.product)
        return self._thetas

    @property
    def ac(self):
        if self._ac is None:
            self._ac = enumerate_Ac_stack(self.mp)
        return self._ac

    @property
    def decomposed(self):
        return _sort_stack(decompose_images(self.thetas, self.zs))

    @property
    def pqrs(self):
        if self._pqrs is None:
            self._pqrs = compute_PQRS(self.mp)
        return self._pqrs


@pytest.fixture(scope="session")
def corpus():
    return [Solved(e.name, e.mp) for e in standard_corpus()]


@pytest.fixture(scope="session")
def p3():
    return build_p5(3)


@pytest.fixture(scope="session")
def p3_solved(corpus):
    return corpus[-1]


@pytest.fixture(scope="session")
def p5():
    return build_p5(5)


@pytest.fixture(scope="session")
def p5_solved(p5):
    return Solved("p=5", p5.mp)


def f21_twisted():
    """F21 = C7 x| C3, then C3 acting on F21 through conjugation by an element of order 3."""
    C7, C3 = cyclic(7), cyclic(3)
    act = np.array([[(pow(2, k, 7) * h) % 7 for h in range(7)] for k in range(3)])
    F = build_external_product(from_semidirect(C7, C3, act)).product
    x = 1  # the pair (0, 1), of order 3
    phi = np.array([inner_automorphism(F, F.power(x, -k)).image for k in range(3)])
    return from_semidirect(F, cyclic(3), phi)


@pytest.fixture(scope="session")
def f21():
    mp = f21_twisted()
    return Solved("F21 twisted", mp)
