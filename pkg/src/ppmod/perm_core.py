"""Permutations, small permutation groups and their actions.

Points are 1-based, as in cycle notation.  Composition is right-to-left:
``compose(p, q)(x) == p(q(x))``.  Conjugation is the right action
``conjugate(x, g) == g^-1 x g``, so ``conjugate(x, g*h) == conjugate(conjugate(x, g), h)``.
"""

from __future__ import annotations

import itertools
import math
import re
import threading
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

DEFAULT_CAP = 10**7
BRUTE_FORCE_DEGREE = 8


class GroupTooLarge(ValueError):
    """Raised when an enumeration would exceed its element cap."""


@dataclass(frozen=True, order=True)
class Permutation:
    """A permutation of {1..degree} stored by its images."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        imgs = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a bijection on 1..{len(imgs)}: {imgs}")

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(1, degree + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        imgs = list(range(1, degree + 1))
        seen: set[int] = set()
        for cyc in cycles:
            for a in cyc:
                if a in seen:
                    raise ValueError(f"point {a} repeated in cycles")
                if not 1 <= a <= degree:
                    raise ValueError(f"point {a} outside 1..{degree}")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                imgs[a - 1] = b
        return cls(tuple(imgs))

    @classmethod
    def parse(cls, text: str, degree: int) -> Permutation:
        """Parse cycle notation such as ``"(1 2)(3 4)"``; ``"()"`` is the identity."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+(\s+\d+)*)?\s*\))+", text):
            raise ValueError(f"bad cycle notation: {text!r}")
        cycles = [tuple(int(t) for t in body.split()) for body in re.findall(r"\(([^)]*)\)", text)]
        return cls.from_cycles([c for c in cycles if c], degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        return compose(self, other)

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self(x)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def support(self) -> frozenset[int]:
        return frozenset(i for i, v in enumerate(self.images, start=1) if i != v)

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images, start=1))

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if not self.is_identity() else 1

    def array(self) -> np.ndarray:
        """0-based image array."""
        return np.asarray(self.images, dtype=np.int64) - 1

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({self}, degree={self.degree})"


def _check_degree(p: Permutation, q: Permutation) -> None:
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} != {q.degree}")


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return p∘q, i.e. x -> p(q(x))."""
    _check_degree(p, q)
    pi = p.images
    return Permutation(tuple(pi[v - 1] for v in q.images))


def conjugate(x: Permutation, g: Permutation) -> Permutation:
    """Return g^-1 x g."""
    _check_degree(x, g)
    return compose(g.inverse(), compose(x, g))


def cycle_type(p: Permutation) -> tuple[int, ...]:
    """Cycle lengths including fixed points, weakly decreasing."""
    lengths = [len(c) for c in p.cycles()]
    lengths += [1] * (p.degree - sum(lengths))
    return tuple(sorted(lengths, reverse=True))


def sign(p: Permutation) -> int:
    return -1 if (p.degree - len(cycle_type(p))) % 2 else 1


def shift(p: Permutation, offset: int, degree: int) -> Permutation:
    """Move p onto points offset+1..offset+p.degree inside Sym(degree)."""
    imgs = list(range(1, degree + 1))
    for i, v in enumerate(p.images, start=1):
        imgs[offset + i - 1] = offset + v
    return Permutation(tuple(imgs))


def direct_sum(*perms: Permutation) -> Permutation:
    """Juxtapose permutations on consecutive disjoint point blocks."""
    imgs: list[int] = []
    for p in perms:
        off = len(imgs)
        imgs.extend(off + v for v in p.images)
    return Permutation(tuple(imgs))


# --------------------------------------------------------------------- groups


def group_closure(gens: Sequence[Permutation], cap: int | None = None,
                  degree: int | None = None) -> list[Permutation]:
    """All elements of <gens> in breadth-first order from the identity.

    ``cap`` defaults to the module-level ``DEFAULT_CAP`` read at call time.
    """
    if cap is None:
        cap = DEFAULT_CAP
    if degree is None:
        if not gens:
            raise ValueError("degree required for an empty generating set")
        degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise ValueError("generators of differing degree")
    gen_imgs = [tuple(v - 1 for v in g.images) for g in gens]
    ident = tuple(range(degree))
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        e = queue.popleft()
        for g in gen_imgs:
            h = tuple(e[i] for i in g)  # e∘g
            if h not in seen:
                seen.add(h)
                order.append(h)
                if len(order) > cap:
                    raise GroupTooLarge(f"closure exceeds cap {cap}")
                queue.append(h)
    return [Permutation(tuple(v + 1 for v in e)) for e in order]


class PermGroup:
    """A finitely generated subgroup of Sym(degree) with a lazily built element list."""

    def __init__(self, generators: Iterable[Permutation], degree: int,
                 cap: int | None = None, elements: Sequence[Permutation] | None = None):
        self.generators = tuple(g for g in generators if not g.is_identity())
        self.degree = degree
        self.cap = cap
        for g in self.generators:
            if g.degree != degree:
                raise ValueError("generator degree differs from group degree")
        self._lock = threading.Lock()
        self._elements = list(elements) if elements is not None else None
        self._array: np.ndarray | None = None

    def elements(self) -> list[Permutation]:
        with self._lock:
            if self._elements is None:
                self._elements = group_closure(self.generators, self.cap, self.degree)
            return self._elements

    def element_array(self) -> np.ndarray:
        """Elements as an (order, degree) array of 0-based images."""
        elems = self.elements()
        with self._lock:
            if self._array is None:
                self._array = np.array([e.images for e in elems], dtype=np.int64).reshape(
                    len(elems), self.degree) - 1
            return self._array

    def order(self) -> int:
        return len(self.elements())

    def __contains__(self, g: Permutation) -> bool:
        return g in set(self.elements())

    def is_two_group(self) -> bool:
        o = self.order()
        return o & (o - 1) == 0

    def __repr__(self) -> str:
        gens = ", ".join(map(str, self.generators)) or "()"
        return f"PermGroup(<{gens}>, degree={self.degree})"

    @classmethod
    def from_elements(cls, elements: Sequence[Permutation], degree: int) -> PermGroup:
        """Wrap a known element list, choosing a small generating set greedily."""
        elements = sorted(elements)
        members = set(elements)
        gens: list[Permutation] = []
        span = {Permutation.identity(degree)}
        for e in elements:
            if e not in span:
                gens.append(e)
                span = set(group_closure(gens, degree=degree))
        if span != members:
            raise ValueError("element list is not a group")
        return cls(gens, degree, elements=group_closure(gens, degree=degree))


def two_part(m: int) -> int:
    return m & -m


def legendre2(m: int) -> int:
    """2-adic valuation of m!."""
    total, q = 0, m // 2
    while q:
        total += q
        q //= 2
    return total


def sylow2_sym(m: int) -> PermGroup:
    """Iterated-wreath Sylow 2-subgroup of Sym(m) on points 1..m."""
    if m < 1:
        raise ValueError("m must be positive")
    gens = []
    offset = 0
    for j in reversed(range(m.bit_length())):
        if not (m >> j) & 1:
            continue
        for lev in range(1, j + 1):
            half = 1 << (lev - 1)
            imgs = list(range(1, m + 1))
            for i in range(half):
                a, b = offset + i, offset + i + half
                imgs[a], imgs[b] = b + 1, a + 1
            gens.append(Permutation(tuple(imgs)))
        offset += 1 << j
    return PermGroup(gens, m)


def symmetric_group(d: int) -> PermGroup:
    gens = []
    if d >= 2:
        gens.append(Permutation.from_cycles([(1, 2)], d))
        gens.append(Permutation.from_cycles([tuple(range(1, d + 1))], d))
    return PermGroup(gens, d)


def wreath_embed(base: PermGroup, top: PermGroup) -> PermGroup:
    """base ≀ top on base.degree * top.degree points (blocks of consecutive points)."""
    b, u = base.degree, top.degree
    deg = b * u
    gens = [shift(g, j * b, deg) for j in range(u) for g in base.generators]
    for t in top.generators:
        imgs = [0] * deg
        for j in range(u):
            for i in range(b):
                imgs[j * b + i] = (t(j + 1) - 1) * b + i + 1
        gens.append(Permutation(tuple(imgs)))
    return PermGroup(gens, deg)


def direct_product(*groups: PermGroup) -> PermGroup:
    """Product of groups acting on consecutive disjoint point blocks."""
    deg = sum(g.degree for g in groups)
    gens = []
    off = 0
    for grp in groups:
        gens.extend(shift(g, off, deg) for g in grp.generators)
        off += grp.degree
    return PermGroup(gens, deg)


# ------------------------------------------------------------------- actions


class GroupAction:
    """A group acting on an ordered list of hashable points via ``act(point, g)``."""

    def __init__(self, group: PermGroup, points: Sequence[Hashable],
                 act: Callable[[Hashable, Permutation], Hashable]):
        self.group = group
        self.points = list(points)
        self.act = act
        self._index = {p: i for i, p in enumerate(self.points)}
        if len(self._index) != len(self.points):
            raise ValueError("repeated points")
        self.table = np.array(
            [self.perm_of(g) for g in group.generators], dtype=np.int64
        ).reshape(len(group.generators), len(self.points))

    def __len__(self) -> int:
        return len(self.points)

    def index(self, point: Hashable) -> int:
        return self._index[point]

    def perm_of(self, g: Permutation) -> np.ndarray:
        """Index array i -> index(act(points[i], g))."""
        return np.fromiter((self._index[self.act(p, g)] for p in self.points),
                           dtype=np.int64, count=len(self.points))

    def restricted(self, subgroup: PermGroup) -> GroupAction:
        return GroupAction(subgroup, self.points, self.act)

    def orbits(self) -> list[list[int]]:
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        n = len(self.points)
        if n == 0:
            return []
        rows = np.tile(np.arange(n), len(self.table))
        cols = self.table.ravel()
        graph = coo_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))
        _, labels = connected_components(graph, directed=True, connection="weak")
        out: dict[int, list[int]] = {}
        for i, lab in enumerate(labels):
            out.setdefault(int(lab), []).append(i)
        return sorted(out.values())

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def check_associative(self, triples: int = 8) -> bool:
        """Spot check act(act(p, g), h) == act(p, g*h) on deterministic samples."""
        gens = list(self.group.generators)
        if not gens:
            return True
        for k in range(triples):
            g = gens[k % len(gens)]
            h = gens[(k * 7 + 3) % len(gens)]
            p = self.points[(k * 131) % len(self.points)]
            if self.act(self.act(p, g), h) != self.act(p, compose(g, h)):
                return False
        return True


def fixed_points(group: PermGroup, action: GroupAction) -> list[Hashable]:
    """Points fixed by every generator of ``group`` (which must act via ``action.act``)."""
    idx = np.arange(len(action.points))
    mask = np.ones(len(idx), dtype=bool)
    for g in group.generators:
        mask &= action.perm_of(g) == idx
    return [action.points[i] for i in np.flatnonzero(mask)]


def conjugation_action(group: PermGroup, points: Sequence[Permutation]) -> GroupAction:
    return GroupAction(group, points, conjugate)


def _fpf_matchings(points: list[int]) -> Iterable[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    a = points[0]
    for k in range(1, len(points)):
        rest = points[1:k] + points[k + 1:]
        for m in _fpf_matchings(rest):
            yield [(a, points[k])] + m


def fpf_involutions(two_n: int) -> list[Permutation]:
    """The fixed-point-free involutions of Sym(two_n), in matching order."""
    if two_n <= 0 or two_n % 2:
        raise ValueError("two_n must be a positive even integer")
    return [Permutation.from_cycles(m, two_n) for m in _fpf_matchings(list(range(1, two_n + 1)))]


def enumerate_fpf_involutions(two_n: int) -> GroupAction:
    """Sym(two_n) acting by conjugation on its fixed-point-free involutions."""
    if two_n <= 0 or two_n % 2 or two_n > 12:
        raise ValueError("two_n must be even with 2 <= two_n <= 12")
    return GroupAction(symmetric_group(two_n), fpf_involutions(two_n), conjugate)


# ---------------------------------------------------------- brute force search


@lru_cache(maxsize=None)
def _sym_array(d: int) -> np.ndarray:
    arr = np.array(list(itertools.permutations(range(d))), dtype=np.int64)
    arr.setflags(write=False)
    return arr.reshape(-1, d)


def _brute_force_guard(d: int) -> None:
    if d > BRUTE_FORCE_DEGREE:
        raise GroupTooLarge(f"brute force limited to degree {BRUTE_FORCE_DEGREE}, got {d}")


def _rows_to_perms(arr: np.ndarray) -> list[Permutation]:
    return [Permutation(tuple(int(v) + 1 for v in row)) for row in arr]


def _conjugate_all(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Row-wise g^-1 x g for a batch g of shape (N, d) and a single 0-based x."""
    ginv = np.argsort(g, axis=1)
    return np.take_along_axis(ginv, x[g], axis=1)


def centralizer_of_set(X: Sequence[Permutation], ambient_degree: int) -> PermGroup:
    """All g in Sym(d) with g^-1 x g == x for every x in X (brute force, d <= 8)."""
    _brute_force_guard(ambient_degree)
    G = _sym_array(ambient_degree)
    mask = np.ones(len(G), dtype=bool)
    for x in X:
        xa = x.array()
        mask &= np.all(xa[G] == G[:, xa], axis=1)
    return PermGroup.from_elements(_rows_to_perms(G[mask]), ambient_degree)


def set_stabilizer(X: Sequence[Permutation], ambient_degree: int) -> PermGroup:
    """All g in Sym(d) with X^g == X as a set (brute force, d <= 8)."""
    _brute_force_guard(ambient_degree)
    G = _sym_array(ambient_degree)
    keys = {tuple(x.array()) for x in X}
    targets = np.array(sorted(keys), dtype=np.int64).reshape(len(keys), ambient_degree)
    mask = np.ones(len(G), dtype=bool)
    for x in X:
        conj = _conjugate_all(x.array(), G)
        hit = np.zeros(len(G), dtype=bool)
        for t in targets:
            hit |= np.all(conj == t, axis=1)
        mask &= hit
    return PermGroup.from_elements(_rows_to_perms(G[mask]), ambient_degree)


def _is_two_element(arr: np.ndarray, degree: int) -> np.ndarray:
    cur = arr.copy()
    steps = max(1, (degree - 1).bit_length()) if degree > 1 else 1
    for _ in range(steps):
        cur = np.take_along_axis(cur, cur, axis=1)
    return np.all(cur == np.arange(degree), axis=1)


def sylow2_subgroup(group: PermGroup) -> PermGroup:
    """A Sylow 2-subgroup, grown one normalizing 2-element at a time."""
    order = group.order()
    target = two_part(order)
    if order == target:
        return group
    G = group.element_array()
    d = group.degree
    cand = G[_is_two_element(G, d)]
    gens: list[Permutation] = []
    S = np.arange(d, dtype=np.int64)[None, :]
    while len(S) < target:
        s_keys = {r.tobytes() for r in S}
        found = None
        for c in cand:
            if c.tobytes() in s_keys:
                continue
            cinv = np.argsort(c)
            conj = cinv[S[:, c]]  # c^-1 s c as 0-based arrays
            if all(r.tobytes() in s_keys for r in conj):
                found = c
                break
        if found is None:
            raise RuntimeError("no normalizing 2-element found; not a group?")
        gens.append(Permutation(tuple(int(v) + 1 for v in found)))
        elems = group_closure(gens, degree=d)
        S = np.array([e.images for e in elems], dtype=np.int64) - 1
    return PermGroup(gens, d)
