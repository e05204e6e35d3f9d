"""Single-entry corruptions of matched pairs, for soundness testing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import NotAGroup
from .groups import build_group_from_table
from .matched_pair import MatchedPair, validate_matched_pair

TARGETS = ("H", "K", "sigma", "tau")


@dataclass
class Corruption:
    source: str
    target: str
    cell: tuple
    old: int
    new: int
    outcome: str  # "no-op", "group-rejected", "pair-rejected" or "accepted"
    detail: object = None


def corrupt_once(mp: MatchedPair, rng: np.random.Generator, name: str = "") -> Corruption:
    """Change one entry of one table at random and classify what the checks make of it."""
    target = TARGETS[rng.integers(len(TARGETS))]
    H, K = mp.H.table.copy(), mp.K.table.copy()
    s, t = mp.sigma.copy(), mp.tau.copy()
    arr, size = {"H": (H, mp.H.order), "K": (K, mp.K.order), "sigma": (s, mp.H.order), "tau": (t, mp.K.order)}[target]
    cell = tuple(int(rng.integers(n)) for n in arr.shape)
    old = int(arr[cell])
    # a different value whenever the codomain allows one
    new = old if size == 1 else int((old + 1 + rng.integers(size - 1)) % size)
    arr[cell] = new
    if new == old:
        same = all(np.array_equal(a, b) for a, b in ((H, mp.H.table), (K, mp.K.table), (s, mp.sigma), (t, mp.tau)))
        return Corruption(name, target, cell, old, new, "no-op" if same else "accepted")
    try:
        Hg = build_group_from_table(mp.H.order, H, mp.H.name)
        Kg = build_group_from_table(mp.K.order, K, mp.K.name)
    except NotAGroup as exc:
        return Corruption(name, target, cell, old, new, "group-rejected", exc.reason)
    if not (np.array_equal(Hg.table, H) and np.array_equal(Kg.table, K)):
        # identity moved; the corrupted table is not the one that was handed in
        return Corruption(name, target, cell, old, new, "group-rejected", "relabelled")
    report = validate_matched_pair(MatchedPair(Hg, Kg, s, t))
    if report.valid:
        return Corruption(name, target, cell, old, new, "accepted")
    return Corruption(name, target, cell, old, new, "pair-rejected", report.failed())


def fuzz(entries: Iterable, count: int, seed: int = 0) -> Iterator[Corruption]:
    """``count`` corruptions spread round-robin over ``(name, mp)`` entries.

    Entries whose tables are all of size one are skipped: they have no entry
    that can change.
    """
    pool = [(n, mp) for n, mp in entries if mp.H.order * mp.K.order > 1]
    rng = np.random.default_rng(seed)
    for i in range(count):
        name, mp = pool[i % len(pool)]
        yield corrupt_once(mp, rng, name)
