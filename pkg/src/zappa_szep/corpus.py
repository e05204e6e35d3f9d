"""The fixed set of matched pairs every theorem check runs over.

Bump CORPUS_VERSION whenever the contents change.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .groups import FiniteGroup, cyclic, dihedral, elementary_abelian
from .matched_pair import MatchedPair, from_semidirect, validate_matched_pair

CORPUS_VERSION = 1


@dataclass(frozen=True, eq=False)
class CorpusEntry:
    name: str
    mp: MatchedPair


def groups_up_to(n: int) -> list[FiniteGroup]:
    """One representative of every isomorphism class of order <= n (n <= 7)."""
    if n > 7:
        raise ValueError("only orders up to 7 are tabulated")
    out = [cyclic(m) for m in range(1, n + 1)]
    if n >= 4:
        out.insert(4, elementary_abelian(2, 2))
    if n >= 6:
        out.insert(7, dihedral(3))
    return out


def trivial_pairs(n: int = 6) -> list[CorpusEntry]:
    gs = groups_up_to(n)
    return [CorpusEntry(f"{H.name} x {K.name}", MatchedPair.trivial(H, K)) for H in gs for K in gs]


def dihedral_models() -> list[CorpusEntry]:
    """C_n x| C_2 with the reflection acting by inversion, n = 3, 4."""
    out = []
    for n in (3, 4):
        Cn, C2 = cyclic(n), cyclic(2)
        phi = np.stack([np.arange(n), Cn.inverses])
        out.append(CorpusEntry(f"D{2 * n} as C{n} x| C2", from_semidirect(Cn, C2, phi)))
    return out


def _perms_fixing_identity(n: int) -> np.ndarray:
    rest = list(itertools.permutations(range(1, n)))
    return np.array([(0,) + r for r in rest], dtype=np.int64).reshape(len(rest), n)


def _sigma_candidates(H: FiniteGroup, K: FiniteGroup) -> list[np.ndarray]:
    """Tables s[k, h] = sigma_k(h), each sigma_k a permutation fixing 1, with
    sigma_{kk'} = sigma_k o sigma_k'."""
    perms = _perms_fixing_identity(H.order)
    ks = np.arange(K.order)
    out = []
    for choice in itertools.product(range(len(perms)), repeat=K.order - 1):
        s = np.vstack([np.arange(H.order)[None, :], perms[list(choice)]])
        if (s[K.table] == s[ks[:, None, None], s[None, :, :]]).all():
            out.append(s)
    return out


def _tau_candidates(H: FiniteGroup, K: FiniteGroup) -> list[np.ndarray]:
    """Tables t[k, h] = tau_h(k), each tau_h a permutation fixing 1, with
    tau_{hh'} = tau_h' o tau_h."""
    perms = _perms_fixing_identity(K.order)
    hs = np.arange(H.order)
    out = []
    for choice in itertools.product(range(len(perms)), repeat=H.order - 1):
        rows = np.vstack([np.arange(K.order)[None, :], perms[list(choice)]])  # rows[h] = tau_h
        if (rows[H.table] == rows[hs[None, :, None], rows[:, None, :]]).all():
            out.append(rows.T.copy())
    return out


def exhaustive_pairs(n: int = 4) -> list[CorpusEntry]:
    """Every matched pair on groups of order <= n, in a fixed order.

    sigma_k and tau_h are forced to be bijections fixing the identity, so the
    search runs over actions and anti-actions and keeps those satisfying the
    two mixed conditions.
    """
    out = []
    gs = groups_up_to(n)
    for H in gs:
        for K in gs:
            sig = _sigma_candidates(H, K)
            tau = _tau_candidates(H, K)
            count = 0
            for s in sig:
                for t in tau:
                    mp = MatchedPair(H, K, s, t)
                    if validate_matched_pair(mp).valid:
                        out.append(CorpusEntry(f"{H.name}, {K.name} #{count}", mp))
                        count += 1
    return out


@lru_cache(maxsize=None)
def standard_corpus(include_example: bool = True) -> tuple[CorpusEntry, ...]:
    entries = trivial_pairs(6) + dihedral_models() + exhaustive_pairs(4)
    if include_example:
        from .order_p5 import build_p5

        entries.append(CorpusEntry("order p^5, p=3", build_p5(3).mp))
    return tuple(entries)
