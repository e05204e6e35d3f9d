"""Homomorphism enumeration and the brute-force central automorphism oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .groups import (
    INDEX_DTYPE,
    FiniteGroup,
    GroupHom,
    Subgroup,
    center_bruteforce,
    greedy_generators,
)

# Upper bound on entries in one candidate batch (candidates x |U|).
_BATCH_ENTRIES = 1 << 22


@dataclass
class _Stage:
    """What changes when generator number ``pos`` is adjoined.

    ``rounds`` is the spanning-tree extension of the previous subgroup, as
    (child, parent, generator position) arrays in BFS order. ``edge_y`` and
    ``edge_j`` list the relations f(y g_j) = f(y) f(g_j) that have not been
    checked at an earlier stage.
    """

    pos: int
    rounds: list
    edge_y: np.ndarray
    edge_j: np.ndarray


def _plan(U: FiniteGroup, gens: list[int]) -> list[_Stage]:
    t = U.table
    gens_arr = np.asarray(gens, dtype=np.int64)
    mask = np.zeros(U.order, dtype=bool)
    mask[0] = True
    stages = []
    for pos in range(len(gens)):
        old = np.flatnonzero(mask)
        frontier = old
        rounds = []
        while frontier.size:
            cand = t[np.ix_(frontier, gens_arr[: pos + 1])]  # (m, pos+1)
            ys = np.repeat(frontier, pos + 1)
            js = np.tile(np.arange(pos + 1), frontier.size)
            zs = cand.ravel()
            keep = ~mask[zs]
            zs, ys, js = zs[keep], ys[keep], js[keep]
            zs, first = np.unique(zs, return_index=True)
            ys, js = ys[first], js[first]
            if zs.size:
                rounds.append((zs, ys, js))
                mask[zs] = True
            frontier = zs
        new = np.flatnonzero(mask & ~np.isin(np.arange(U.order), old))
        edge_y = np.concatenate([np.repeat(new, pos + 1), old])
        edge_j = np.concatenate([np.tile(np.arange(pos + 1), new.size), np.full(old.size, pos)])
        stages.append(_Stage(pos, rounds, edge_y, edge_j))
    return stages


def _evaluate(stages: list[_Stage], upto: int, n: int, Vt: np.ndarray, imgs: np.ndarray) -> np.ndarray:
    """Images of every element of the subgroup reached at stage ``upto``."""
    f = np.zeros((imgs.shape[0], n), dtype=INDEX_DTYPE)
    for st in stages[: upto + 1]:
        for child, parent, via in st.rounds:
            f[:, child] = Vt[f[:, parent], imgs[:, via]]
    return f


def _consistent(st: _Stage, U: FiniteGroup, gens: np.ndarray, Vt: np.ndarray, f, imgs) -> np.ndarray:
    targets = U.table[st.edge_y, gens[st.edge_j]]
    ok = np.ones(f.shape[0], dtype=bool)
    start = 0
    # a small first block discards most bad candidates cheaply
    for stop in (min(32, st.edge_y.size), st.edge_y.size):
        if stop <= start:
            continue
        sel = np.flatnonzero(ok)
        ys, js, tg = st.edge_y[start:stop], st.edge_j[start:stop], targets[start:stop]
        lhs = f[np.ix_(sel, tg)]
        rhs = Vt[f[np.ix_(sel, ys)], imgs[sel][:, js]]
        ok[sel] = (lhs == rhs).all(axis=1)
        start = stop
    return ok


def _lex_sorted(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] <= 1:
        return rows
    return rows[np.lexsort(rows.T[::-1])]


def hom_images(U: FiniteGroup, V: FiniteGroup, image_restriction: Optional[Subgroup] = None) -> np.ndarray:
    """Image arrays of all homomorphisms U -> V (landing in the restriction),
    one per row, in lexicographic order."""
    allowed = np.arange(V.order) if image_restriction is None else image_restriction.as_array()
    gens = greedy_generators(U)
    if not gens:
        return np.zeros((1, U.order), dtype=INDEX_DTYPE)
    gens_arr = np.asarray(gens)
    stages = _plan(U, gens)
    Vt = V.table
    u_orders = U.element_orders
    v_orders = V.element_orders[allowed]

    survivors = np.zeros((1, 0), dtype=np.int64)
    for st in stages:
        targets = allowed[u_orders[gens[st.pos]] % v_orders == 0]
        chunk = max(1, _BATCH_ENTRIES // max(U.order, 1) // max(targets.size, 1))
        kept = []
        final = st.pos == len(stages) - 1
        for lo in range(0, survivors.shape[0], chunk):
            base = survivors[lo : lo + chunk]
            imgs = np.concatenate(
                [np.repeat(base, targets.size, axis=0), np.tile(targets, base.shape[0])[:, None]], axis=1
            )
            f = _evaluate(stages, st.pos, U.order, Vt, imgs)
            ok = _consistent(st, U, gens_arr, Vt, f, imgs)
            kept.append(f[ok] if final else imgs[ok])
        survivors = np.concatenate(kept, axis=0)
    return _lex_sorted(survivors.astype(INDEX_DTYPE))


def enumerate_homs(U: FiniteGroup, V: FiniteGroup, image_restriction: Optional[Subgroup] = None) -> list[GroupHom]:
    """Every homomorphism U -> V with image inside ``image_restriction``.

    Generator images are chosen along a greedy generating sequence of U
    (pruned so the image order divides the generator order) and each partial
    assignment is extended over the generated subgroup; an assignment survives
    only if f(y g) = f(y) f(g) for every element y and generator g, which is
    equivalent to being a homomorphism.
    """
    rows = hom_images(U, V, image_restriction)
    return [GroupHom(U, V, r, verify=False) for r in rows]


def central_automorphism_images(G: FiniteGroup) -> np.ndarray:
    """Rows are the image arrays of Aut_c(G), lexicographically sorted.

    Each f in Hom(G, Z(G)) gives the endomorphism g -> g f(g) (f is central
    valued, so this is multiplicative); the bijective ones are exactly the
    central automorphisms.
    """
    F = hom_images(G, G, center_bruteforce(G))
    thetas = G.table[np.arange(G.order)[None, :], F]
    del F
    seen = np.zeros(thetas.shape, dtype=bool)
    np.put_along_axis(seen, thetas.astype(np.intp), True, axis=1)
    thetas = thetas[seen.all(axis=1)]
    return _lex_sorted(thetas)


def central_automorphisms_oracle(G: FiniteGroup) -> list[GroupHom]:
    return [GroupHom(G, G, r, verify=False) for r in central_automorphism_images(G)]


def compose_images(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """``outer o inner`` for image arrays (broadcast over leading axes of outer)."""
    return np.take(outer, inner, axis=-1)
