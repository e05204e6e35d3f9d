"""Finite groups as validated Cayley tables.

Elements are the integers ``0 .. order-1`` and the identity is always ``0``.
Every constructor in this module relabels so that this holds, which keeps
the invariant checks cheap and the JSON form stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    IndexOutOfRange,
    InvalidParameter,
    NotAbelian,
    NotAGroup,
    NotAHomomorphism,
    NotASubgroup,
    ShapeMismatch,
)

# Above this order the O(n^3) associativity sweep is replaced by Light's test
# over a product-generating set (still exhaustive, just cheaper).
FULL_ASSOCIATIVITY_LIMIT = 512

INDEX_DTYPE = np.int32


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=INDEX_DTYPE, copy=True)
    arr.setflags(write=False)
    return arr


class FiniteGroup:
    """A group stored as its full multiplication table.

    ``table[i, j]`` is the index of ``g_i * g_j``. The constructor trusts its
    input; use :func:`build_group_from_table` for anything that has not been
    checked yet.
    """

    identity = 0

    def __init__(self, table, name: str = "G"):
        self.table = _frozen(table)
        self.order = int(self.table.shape[0])
        self.name = name

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self is other or np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.order, self.table[: min(self.order, 8)].tobytes()))

    def elements(self) -> range:
        return range(self.order)

    def _check(self, *idx: int) -> None:
        for i in idx:
            if not 0 <= i < self.order:
                raise IndexOutOfRange(f"element {i} not in [0, {self.order})")

    def mul(self, i: int, j: int) -> int:
        self._check(i, j)
        return int(self.table[i, j])

    def inv(self, i: int) -> int:
        self._check(i)
        return int(self.inverses[i])

    def order_of(self, i: int) -> int:
        self._check(i)
        m, x = 1, i
        while x != 0:
            x = int(self.table[x, i])
            m += 1
        return m

    def power(self, i: int, n: int) -> int:
        self._check(i)
        if n < 0:
            i, n = int(self.inverses[i]), -n
        result, base = 0, i
        while n:
            if n & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            n >>= 1
        return result

    def conjugate(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return int(self.table[self.table[g, x], self.inverses[g]])

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.argmax(self.table == 0, axis=1).astype(INDEX_DTYPE)
        inv.setflags(write=False)
        return inv

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        cur = idx.copy()
        m = 1
        while not orders.all():
            cur = self.table[cur, idx]
            m += 1
            orders[(cur == 0) & (orders == 0)] = m
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def center(self) -> "Subgroup":
        t = self.table
        members = np.flatnonzero((t == t.T).all(axis=1))
        return Subgroup(self, tuple(int(m) for m in members))


# --- validation ---------------------------------------------------------------


def _first_true(mask: np.ndarray) -> tuple:
    return tuple(int(v) for v in np.argwhere(mask)[0])


def _check_latin(t: np.ndarray) -> None:
    n = t.shape[0]
    target = np.arange(n)
    for axis in (1, 0):
        srt = np.sort(t, axis=axis)
        ok = (srt == (target[None, :] if axis == 1 else target[:, None])).all(axis=axis)
        if not ok.all():
            line = int(np.flatnonzero(~ok)[0])
            row = t[line] if axis == 1 else t[:, line]
            vals, first, counts = np.unique(row, return_index=True, return_counts=True)
            dup = vals[counts > 1][0]
            j1, j2 = np.flatnonzero(row == dup)[:2]
            witness = (line, j1, j2) if axis == 1 else (j1, j2, line)
            raise NotAGroup("not-latin", witness)


def _product_closure(t: np.ndarray, gens: Sequence[int]) -> np.ndarray:
    """Mask of the sub-magma generated by ``gens`` (closure under products only)."""
    n = t.shape[0]
    mask = np.zeros(n, dtype=bool)
    mask[list(gens)] = True
    while True:
        members = np.flatnonzero(mask)
        new = np.zeros(n, dtype=bool)
        new[t[np.ix_(members, members)].ravel()] = True
        new &= ~mask
        if not new.any():
            return mask
        mask |= new


def _check_associative(t: np.ndarray) -> None:
    n = t.shape[0]
    if n <= FULL_ASSOCIATIVITY_LIMIT:
        for i in range(n):
            # (g_i g_j) g_k  versus  g_i (g_j g_k), all j, k at once
            bad = t[t[i]] != t[i][t]
            if bad.any():
                j, k = _first_true(bad)
                raise NotAGroup("not-associative", (i, j, k))
        return
    # Light's test: the elements a with (xa)y = x(ay) for all x, y are closed
    # under products, so checking a product-generating set is exhaustive.
    gens: list[int] = []
    mask = np.zeros(n, dtype=bool)
    while not mask.all():
        a = int(np.flatnonzero(~mask)[0])
        bad = t[t[:, a]] != t[:, t[a]]
        if bad.any():
            x, y = _first_true(bad)
            raise NotAGroup("not-associative", (x, a, y))
        gens.append(a)
        mask = _product_closure(t, gens)


def build_group_from_table(order: int, table, name: str = "G") -> FiniteGroup:
    """Validate a Cayley table and return it as a group with identity at 0."""
    t = np.asarray(table)
    if t.shape != (order, order) or order < 1:
        raise ShapeMismatch(f"table shape {t.shape} does not match order {order}")
    if not np.issubdtype(t.dtype, np.integer):
        raise ShapeMismatch("table entries must be integers")
    if t.min() < 0 or t.max() >= order:
        raise ShapeMismatch("table entries out of range")
    t = t.astype(np.int64)
    idx = np.arange(order)

    two_sided = (t == idx[None, :]).all(axis=1) & (t == idx[:, None]).all(axis=0)
    candidates = np.flatnonzero(two_sided)
    if candidates.size == 0:
        left = np.flatnonzero((t == idx[None, :]).all(axis=1))
        e = int(left[0]) if left.size else 0
        bad = np.flatnonzero(t[:, e] != idx)
        i = int(bad[0]) if bad.size else int(np.flatnonzero(t[e] != idx)[0])
        raise NotAGroup("no-identity", (e, i, int(t[i, e])))
    e = int(candidates[0])
    if e != 0:
        perm = idx.copy()
        perm[[0, e]] = [e, 0]  # perm is its own inverse
        t = perm[t[np.ix_(perm, perm)]]

    _check_latin(t)
    right_inv = np.argmax(t == 0, axis=1)
    left_inv = np.argmax(t == 0, axis=0)
    if not np.array_equal(right_inv, left_inv):
        i = int(np.flatnonzero(right_inv != left_inv)[0])
        raise NotAGroup("no-inverse", (i, int(right_inv[i]), int(left_inv[i])))
    _check_associative(t)
    return FiniteGroup(t, name)


# --- standard groups ------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def cyclic(n: int) -> FiniteGroup:
    """Z_n with index = residue."""
    if n < 1:
        raise InvalidParameter(f"cyclic group needs n >= 1, got {n}")
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, f"C{n}")


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    """(Z_p)^k; coordinates are the base-p digits of the index."""
    if not is_prime(p) or k < 1:
        raise InvalidParameter(f"elementary_abelian needs prime p and k >= 1, got ({p}, {k})")
    n = p**k
    idx = np.arange(n)
    digits = [(idx // p**e) % p for e in range(k)]
    table = np.zeros((n, n), dtype=np.int64)
    for e, d in enumerate(digits):
        table += ((d[:, None] + d[None, :]) % p) * p**e
    return FiniteGroup(table, f"C{p}^{k}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n.

    ``r^i s^j`` has index ``i + n*j``: rotations occupy ``0..n-1`` and the
    reflections ``n..2n-1``; ``s r s^-1 = r^-1``.
    """
    if n < 1:
        raise InvalidParameter(f"dihedral group needs n >= 1, got {n}")
    idx = np.arange(2 * n)
    i, j = idx % n, idx // n
    sign = np.where(j == 0, 1, -1)
    rot = (i[:, None] + sign[:, None] * i[None, :]) % n
    ref = (j[:, None] + j[None, :]) % 2
    return FiniteGroup(rot + n * ref, f"D{2 * n}")


def direct_product(G1: FiniteGroup, G2: FiniteGroup, name: Optional[str] = None) -> FiniteGroup:
    """Componentwise product; the pair (i1, i2) has index ``i1*|G2| + i2``."""
    n2 = G2.order
    idx = np.arange(G1.order * n2)
    a, b = idx // n2, idx % n2
    table = G1.table[a[:, None], a[None, :]].astype(np.int64) * n2 + G2.table[b[:, None], b[None, :]]
    return FiniteGroup(table, name or f"{G1.name}x{G2.name}")


# --- subgroups ----------------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(repr=False)
    members: tuple

    @classmethod
    def from_members(cls, parent: FiniteGroup, members: Iterable[int]) -> "Subgroup":
        """Build a subgroup after checking identity, closure and inverses."""
        mem = np.unique(np.asarray(list(members), dtype=np.int64))
        mask = np.zeros(parent.order, dtype=bool)
        mask[mem] = True
        if not mask[0]:
            raise NotASubgroup("identity missing")
        prods = parent.table[np.ix_(mem, mem)]
        if not mask[prods].all():
            i, j = _first_true(~mask[prods])
            raise NotASubgroup(f"{int(mem[i])} * {int(mem[j])} leaves the set")
        if not mask[parent.inverses[mem]].all():
            raise NotASubgroup("not closed under inverses")
        return cls(parent, tuple(int(m) for m in mem))

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g) -> bool:
        return bool(self.mask[g])

    def __iter__(self):
        return iter(self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def as_array(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)

    def as_group(self, name: Optional[str] = None) -> FiniteGroup:
        """The subgroup as a group of its own, element ``i`` being ``members[i]``."""
        mem = self.as_array()
        pos = np.full(self.parent.order, -1, dtype=np.int64)
        pos[mem] = np.arange(mem.size)
        return FiniteGroup(pos[self.parent.table[np.ix_(mem, mem)]], name or f"sub({self.parent.name})")

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, tuple(sorted(set(self.members) & set(other.members))))

    def same_elements(self, other: "Subgroup") -> bool:
        return self.members == other.members


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    gens = [int(g) for g in gens]
    G._check(*gens)
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    if gens:
        frontier = np.array([0])
        gens_arr = np.array(gens)
        while frontier.size:
            nxt = np.unique(G.table[np.ix_(frontier, gens_arr)])
            frontier = nxt[~mask[nxt]]
            mask[frontier] = True
    return Subgroup(G, tuple(int(m) for m in np.flatnonzero(mask)))


def greedy_generators(G: FiniteGroup) -> list[int]:
    """Generating sequence: repeatedly adjoin the least element outside the closure."""
    gens: list[int] = []
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    while not mask.all():
        gens.append(int(np.flatnonzero(~mask)[0]))
        mask = subgroup_generated(G, gens).mask
    return gens


def center_bruteforce(G: FiniteGroup) -> Subgroup:
    """All z with zg = gz for every g."""
    return G.center


def is_normal(sub: Subgroup) -> bool:
    G = sub.parent
    mem = sub.as_array()
    conj = G.table[G.table[:, mem], G.inverses[:, None]]
    return bool(sub.mask[conj].all())


# --- structure ----------------------------------------------------------------------


@dataclass(frozen=True)
class StructureReport:
    order: int
    is_abelian: bool
    exponent: int
    is_elementary_abelian: bool
    prime: Optional[int]
    abelian_invariants: Optional[tuple]


def _prime_power_base(n: int) -> Optional[int]:
    if n < 2:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return p if n == 1 else None


def _quotient(G: FiniteGroup, N: Subgroup) -> FiniteGroup:
    reps = G.table[:, N.as_array()].min(axis=1)
    labels, coset = np.unique(reps, return_inverse=True)
    return FiniteGroup(coset[G.table[np.ix_(labels, labels)]], f"{G.name}/N")


def abelian_invariants(G: Union[FiniteGroup, Subgroup]) -> tuple:
    """Invariant factors d1 | d2 | ... of an abelian group, by peeling off
    a cyclic summand of maximal order until nothing is left."""
    g = G.as_group() if isinstance(G, Subgroup) else G
    if not g.is_abelian:
        raise NotAbelian(f"{g.name} is not abelian")
    factors = []
    while g.order > 1:
        x = int(np.argmax(g.element_orders))
        factors.append(int(g.element_orders[x]))
        g = _quotient(g, subgroup_generated(g, [x]))
    return tuple(sorted(factors))


def structure_probe(G: Union[FiniteGroup, Subgroup]) -> StructureReport:
    g = G.as_group() if isinstance(G, Subgroup) else G
    exponent = math.lcm(*(int(o) for o in np.unique(g.element_orders)))
    p = _prime_power_base(g.order)
    elem = g.is_abelian and p is not None and exponent == p
    return StructureReport(
        order=g.order,
        is_abelian=g.is_abelian,
        exponent=exponent,
        is_elementary_abelian=elem,
        prime=p if elem else None,
        abelian_invariants=abelian_invariants(g) if g.is_abelian else None,
    )


# --- maps -----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class MapTable:
    """An arbitrary function between groups, stored as its image array."""

    domain: FiniteGroup = field(repr=False)
    codomain: FiniteGroup = field(repr=False)
    image: np.ndarray

    def __post_init__(self):
        img = np.asarray(self.image)
        if img.shape != (self.domain.order,):
            raise ShapeMismatch(f"image has shape {img.shape}, expected ({self.domain.order},)")
        if img.size and (img.min() < 0 or img.max() >= self.codomain.order):
            raise ShapeMismatch("image entries out of range")
        if img.flags.writeable or img.dtype != INDEX_DTYPE:
            img = _frozen(img)
        object.__setattr__(self, "image", img)

    def __call__(self, x: int) -> int:
        return int(self.image[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MapTable):
            return NotImplemented
        return np.array_equal(self.image, other.image)

    def __hash__(self) -> int:
        return hash(self.image.tobytes())

    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and np.unique(self.image).size == self.image.size


def hom_violation(domain: FiniteGroup, codomain: FiniteGroup, image) -> Optional[tuple]:
    """First (g, g') with image[g g'] != image[g] image[g'], or None."""
    img = np.asarray(image)
    bad = img[domain.table] != codomain.table[img[:, None], img[None, :]]
    return _first_true(bad) if bad.any() else None


@dataclass(frozen=True, eq=False)
class GroupHom(MapTable):
    """A multiplicative map. Certified over the whole table unless ``verify=False``."""

    verify: bool = field(default=True, repr=False)

    def __post_init__(self):
        super().__post_init__()
        if self.verify:
            if self.domain.order and self.image[0] != 0:
                raise NotAHomomorphism((0, 0))
            w = hom_violation(self.domain, self.codomain, self.image)
            if w is not None:
                raise NotAHomomorphism(w)

    @property
    def is_surjective(self) -> bool:
        return np.unique(self.image).size == self.codomain.order


def identity_map(G: FiniteGroup) -> GroupHom:
    return GroupHom(G, G, np.arange(G.order), verify=False)


def trivial_hom(U: FiniteGroup, V: FiniteGroup) -> GroupHom:
    return GroupHom(U, V, np.zeros(U.order, dtype=np.int64), verify=False)


def inner_automorphism(G: FiniteGroup, g: int) -> GroupHom:
    """``x -> g x g^-1``."""
    G._check(g)
    image = G.table[G.table[g], G.inverses[g]]
    return GroupHom(G, G, image)
