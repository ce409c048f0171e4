"""Fixed point sets of fixed-point-free involution modules.

A fixed point set here is a finite set of permutations whose support has been
relabelled to 1..d.  Sets are combined by the disjoint-support product
(:func:`star`) and by diagonals (:func:`diag_power`); every set factors uniquely
into irreducible pieces, and stabilizers of products are assembled from the
stabilizers of the coprime factors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import gf2_engine as ge
from .perm_core import (
    BRUTE_FORCE_DEGREE,
    GroupAction,
    GroupTooLarge,
    PermGroup,
    Permutation,
    centralizer_of_set,
    compose,
    cycle_type,
    direct_product,
    fpf_involutions,
    group_closure,
    legendre2,
    set_stabilizer,
    sylow2_subgroup,
    sylow2_sym,
    wreath_embed,
)

MAX_CENTRALIZER_SEARCH = 10**6


@dataclass(frozen=True)
class FPSet:
    """A set of permutations on its support {1..degree}, members sorted."""

    members: tuple[Permutation, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("empty set")
        degs = {m.degree for m in self.members}
        if len(degs) != 1:
            raise ValueError("members of differing degree")
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    @classmethod
    def from_members(cls, perms: Iterable[Permutation]) -> FPSet:
        """Relabel the union of supports to 1..d, preserving point order."""
        perms = list(perms)
        support = sorted(set().union(*(p.support() for p in perms)))
        pos = {a: i + 1 for i, a in enumerate(support)}
        d = len(support)
        return cls(tuple(Permutation(tuple(pos[p(a)] for a in support)) for p in perms)
                   if d else (Permutation(()),))

    @classmethod
    def parse(cls, lines: Iterable[str], degree: int) -> FPSet:
        return cls(tuple(Permutation.parse(line, degree) for line in lines))

    @property
    def degree(self) -> int:
        return self.members[0].degree

    def __len__(self) -> int:
        return len(self.members)

    def support(self) -> frozenset[int]:
        return frozenset().union(*(m.support() for m in self.members))

    def is_exact(self) -> bool:
        return all(m.support() == self.support() for m in self.members)

    def to_text(self) -> str:
        head = f"support={self.degree} members={len(self)}"
        return "\n".join([head] + [str(m) for m in self.members]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> FPSet:
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        head = dict(tok.split("=") for tok in lines[0].split())
        d, m = int(head["support"]), int(head["members"])
        out = cls.parse(lines[1:], d)
        if len(out) != m:
            raise ValueError(f"header says {m} members, found {len(out)}")
        return out

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self.members)) + f"}} on {self.degree} points"


def _join(perms: Sequence[Permutation]) -> Permutation:
    imgs: list[int] = []
    for p in perms:
        off = len(imgs)
        imgs.extend(off + v for v in p.images)
    return Permutation(tuple(imgs))


def star(X: FPSet, Y: FPSet) -> FPSet:
    """X * Y: all products x*y' with Y moved onto points after X."""
    return FPSet(tuple(_join((x, y)) for x in X.members for y in Y.members))


def star_power(X: FPSet, s: int) -> FPSet:
    if s < 1:
        raise ValueError("power must be positive")
    out = X
    for _ in range(s - 1):
        out = star(out, X)
    return out


def diag_power(X: FPSet, s: int) -> FPSet:
    """Δ^s X: each member copied onto s disjoint blocks."""
    if s < 1:
        raise ValueError("s must be positive")
    return FPSet(tuple(_join([x] * s) for x in X.members))


U = FPSet((Permutation.from_cycles([(1, 2)], 2),))
V = FPSet(tuple(fpf_involutions(4)))


def V_i(i: int) -> FPSet:
    return diag_power(V, 2 ** i)


# ----------------------------------------------------------- factorisation


def support_orbits(X: FPSet) -> list[list[int]]:
    """Orbits of <X> on 1..d."""
    parent = list(range(X.degree + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for m in X.members:
        for a in range(1, X.degree + 1):
            ra, rb = find(a), find(m(a))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    out: dict[int, list[int]] = {}
    for a in range(1, X.degree + 1):
        out.setdefault(find(a), []).append(a)
    return sorted(out.values())


def is_transitive(X: FPSet) -> bool:
    return len(support_orbits(X)) == 1


def restrict(X: FPSet, points: Sequence[int]) -> FPSet:
    """Members restricted to an invariant point set, relabelled 1..len(points)."""
    pos = {a: i + 1 for i, a in enumerate(points)}
    return FPSet(tuple(Permutation(tuple(pos[m(a)] for a in points)) for m in X.members))


def _projection(X: FPSet, points: Sequence[int]) -> set[tuple[int, ...]]:
    return {tuple(m(a) for a in points) for m in X.members}


@dataclass(frozen=True)
class Block:
    points: tuple[int, ...]
    factor: FPSet


def factor_blocks(X: FPSet) -> list[Block]:
    """Finest partition of the support into blocks over which X is a full product."""
    orbits = support_orbits(X)
    remaining = list(range(len(orbits)))
    blocks = []
    while remaining:
        rest_pts = [a for k in remaining for a in orbits[k]]
        whole = len(_projection(X, rest_pts))
        first, others = remaining[0], remaining[1:]
        chosen = None
        for size in range(0, len(others) + 1):
            for extra in itertools.combinations(others, size):
                S = [first, *extra]
                comp = [k for k in remaining if k not in S]
                s_pts = sorted(a for k in S for a in orbits[k])
                c_pts = [a for k in comp for a in orbits[k]]
                if not comp or len(_projection(X, s_pts)) * len(_projection(X, c_pts)) == whole:
                    chosen = S
                    break
            if chosen is not None:
                break
        pts = tuple(sorted(a for k in chosen for a in orbits[k]))
        blocks.append(Block(pts, restrict(X, pts)))
        remaining = [k for k in remaining if k not in chosen]
    return blocks


def irreducible_factorization(X: FPSet) -> list[tuple[FPSet, int]]:
    """Irreducible factors of X with multiplicities, equal factors grouped up to equivalence."""
    if X.degree > 16:
        raise ValueError("degree limited to 16")
    groups: list[list[Block]] = []
    for b in factor_blocks(X):
        for g in groups:
            if equivalent(g[0].factor, b.factor):
                g.append(b)
                break
        else:
            groups.append([b])
    return [(g[0].factor, len(g)) for g in groups]


def is_irreducible(X: FPSet) -> bool:
    return len(factor_blocks(X)) == 1


# ------------------------------------------------------------- equivalence


def _invariants(X: FPSet):
    return (X.degree, len(X), sorted(cycle_type(m) for m in X.members),
            sorted(len(o) for o in support_orbits(X)))


def _centralizer_elements(x: Permutation) -> np.ndarray:
    """All elements of the centralizer of x in Sym(d), as 0-based rows."""
    d = x.degree
    cycles = x.cycles()
    moved = set().union(*map(set, cycles)) if cycles else set()
    fixed = [a for a in range(1, d + 1) if a not in moved]
    by_len: dict[int, list[tuple[int, ...]]] = {}
    for c in cycles:
        by_len.setdefault(len(c), []).append(c)
    if fixed:
        by_len[1] = [(a,) for a in fixed]
    gens = []
    for length, cs in by_len.items():
        if length > 1:
            gens.append(Permutation.from_cycles([cs[0]], d))
        if len(cs) > 1:
            swap = [(a, b) for a, b in zip(cs[0], cs[1])]
            gens.append(Permutation.from_cycles(swap, d))
            gens.append(Permutation.from_cycles(
                [tuple(c[k] for c in cs) for k in range(length)], d))
    size = 1
    for length, cs in by_len.items():
        size *= length ** len(cs) * int(np.prod(range(1, len(cs) + 1)))
    if size > MAX_CENTRALIZER_SEARCH:
        raise GroupTooLarge(f"centralizer of order {size} too large to search")
    elems = group_closure(gens, degree=d)
    return np.array([e.images for e in elems], dtype=np.int64).reshape(len(elems), d) - 1


def _matching_map(x: Permutation, y: Permutation) -> np.ndarray:
    """A 0-based g with g^-1 x g == y (cycle types must agree)."""
    d = x.degree

    def all_cycles(p):
        cs = p.cycles()
        moved = set().union(*map(set, cs)) if cs else set()
        cs = cs + [(a,) for a in range(1, d + 1) if a not in moved]
        return sorted(cs, key=len)

    g = np.zeros(d, dtype=np.int64)
    for cy, cx in zip(all_cycles(y), all_cycles(x)):
        for a, b in zip(cy, cx):
            g[a - 1] = b - 1
    return g


def equivalence_witness(X: FPSet, Y: FPSet) -> Permutation | None:
    """A relabelling g with {x^g : x in X} == Y, or None."""
    if _invariants(X) != _invariants(Y):
        return None
    y_keys = {m.array().tobytes() for m in Y.members}
    xs = [m.array() for m in X.members]
    x0 = X.members[0]
    cent = _centralizer_elements(x0)
    for y in Y.members:
        if cycle_type(y) != cycle_type(x0):
            continue
        g0 = _matching_map(x0, y)
        cands = cent[:, g0]  # c∘g0
        ok = np.ones(len(cands), dtype=bool)
        cinv = np.argsort(cands, axis=1)
        for xa in xs:
            conj = np.take_along_axis(cinv, xa[cands], axis=1)
            ok &= np.fromiter((row.tobytes() in y_keys for row in conj), dtype=bool,
                              count=len(conj))
            if not ok.any():
                break
        hits = np.flatnonzero(ok)
        if hits.size:
            return Permutation(tuple(int(v) + 1 for v in cands[hits[0]]))
    return None


def equivalent(X: FPSet, Y: FPSet) -> bool:
    return equivalence_witness(X, Y) is not None


# -------------------------------------------------------------- stabilizers


@dataclass
class StabilizerData:
    S: PermGroup       # pointwise stabilizer (simultaneous centralizer)
    Q: PermGroup       # a Sylow 2-subgroup of S
    N: PermGroup       # set stabilizer
    Nbar: PermGroup    # image of N acting on member indices


def _embed(group: PermGroup, points: Sequence[int], degree: int) -> list[Permutation]:
    out = []
    for g in group.generators:
        imgs = list(range(1, degree + 1))
        for i, a in enumerate(points, start=1):
            imgs[a - 1] = points[g(i) - 1]
        out.append(Permutation(tuple(imgs)))
    return out


def _block_swap(src: Sequence[int], dst: Sequence[int], local_map: Permutation,
                degree: int) -> Permutation:
    """Involution exchanging src[i] with dst[local_map^-1(i)]."""
    inv = local_map.inverse()
    imgs = list(range(1, degree + 1))
    for i, a in enumerate(src, start=1):
        b = dst[inv(i) - 1]
        imgs[a - 1] = b
        imgs[b - 1] = a
    return Permutation(tuple(imgs))


def _small_groups(F: FPSet) -> tuple[PermGroup, PermGroup]:
    if F.degree <= BRUTE_FORCE_DEGREE:
        return centralizer_of_set(F.members, F.degree), set_stabilizer(F.members, F.degree)
    sd = stabilizer_data(F)
    return sd.S, sd.N


def _power_groups(blocks: Sequence[Block], degree: int) -> tuple[list[Permutation], list[Permutation]]:
    """Generators of S and N for a power F^a laid out on ``blocks``."""
    F = blocks[0].factor
    S_F, N_F = _small_groups(F)
    swaps = []
    conj_maps = []
    for b in blocks[1:]:
        w = equivalence_witness(F, b.factor)
        if w is None:
            raise ValueError("blocks of a power are not equivalent")
        conj_maps.append(w)
        swaps.append(_block_swap(blocks[0].points, b.points, w, degree))
    s_gens = _embed(S_F, blocks[0].points, degree)
    n_gens = _embed(N_F, blocks[0].points, degree) + swaps
    if len(F) == 1:
        s_gens += swaps
    else:
        for sw in swaps:
            s_gens += [compose(sw, compose(g, sw)) for g in _embed(S_F, blocks[0].points, degree)]
    return s_gens, n_gens


def stabilizer_data(X: FPSet) -> StabilizerData:
    """Pointwise and set stabilizers of X in Sym(d), a Sylow 2-subgroup and Nbar."""
    d = X.degree
    if d <= BRUTE_FORCE_DEGREE:
        S = centralizer_of_set(X.members, d)
        N = set_stabilizer(X.members, d)
    else:
        groups: list[list[Block]] = []
        for b in factor_blocks(X):
            for g in groups:
                if equivalent(g[0].factor, b.factor):
                    g.append(b)
                    break
            else:
                groups.append([b])
        s_gens: list[Permutation] = []
        n_gens: list[Permutation] = []
        for g in groups:
            pts = [a for b in g for a in b.points]
            if len(g) == 1 and len(pts) > BRUTE_FORCE_DEGREE:
                raise GroupTooLarge(f"irreducible factor of degree {len(pts)} exceeds brute force")
            if len(pts) <= BRUTE_FORCE_DEGREE:
                sub = restrict(X, sorted(pts))
                s_gens += _embed(centralizer_of_set(sub.members, len(pts)), sorted(pts), d)
                n_gens += _embed(set_stabilizer(sub.members, len(pts)), sorted(pts), d)
            else:
                sg, ng = _power_groups(g, d)
                s_gens += sg
                n_gens += ng
        S = PermGroup(s_gens, d)
        N = PermGroup(n_gens, d)
    Q = sylow2_subgroup(S)
    return StabilizerData(S, Q, N, nbar_group(X, N))


def nbar_group(X: FPSet, N: PermGroup) -> PermGroup:
    """Image of N acting by conjugation on the members of X (as indices 1..|X|)."""
    idx = {m: i for i, m in enumerate(X.members)}
    gens = []
    for g in N.generators:
        ginv = g.inverse()
        gens.append(Permutation(tuple(idx[compose(ginv, compose(m, g))] + 1 for m in X.members)))
    return PermGroup(gens, len(X))


def member_module(X: FPSet, group: PermGroup) -> ge.PermModule:
    """k X for a group given as permutations of member indices."""
    return ge.PermModule(GroupAction(group, list(range(len(X))), lambda i, g: g(i + 1) - 1))


# ---------------------------------------------------------------- closedness


def fixed_involutions(Q: PermGroup, degree: int) -> list[Permutation]:
    """Members of the class of fixed-point-free involutions of Sym(degree) centralized by Q."""
    if degree <= BRUTE_FORCE_DEGREE:
        C = centralizer_of_set(Q.generators, degree)
        return sorted(c for c in C.elements()
                      if c.support() == frozenset(range(1, degree + 1)) and c.order() == 2)
    if degree > 12:
        raise GroupTooLarge("fixed-point enumeration limited to degree 12")
    return [x for x in fpf_involutions(degree)
            if all(compose(x, g) == compose(g, x) for g in Q.generators)]


def is_closed(X: FPSet, Q: PermGroup | None = None) -> bool:
    """Fix(Q_X) on the fixed-point-free involutions of Sym(d) equals X."""
    if Q is None:
        Q = stabilizer_data(X).Q
    return FPSet(tuple(fixed_involutions(Q, X.degree))) == X


def projective_components(X: FPSet, nbar: PermGroup) -> list[ge.Component]:
    """Components of k X over Nbar that are projective."""
    module = member_module(X, nbar)
    basis = ge.end_algebra_basis(module)
    comps = ge.decompose(module, basis)
    P = sylow2_subgroup(nbar)
    return [c for c in comps if ge.is_projective_over_2group(module, c.subspace(), P)]


def is_fixed_point_set(X: FPSet) -> bool:
    """Closed, and k X over Nbar_X has a projective component."""
    sd = stabilizer_data(X)
    return is_closed(X, sd.Q) and bool(projective_components(X, sd.Nbar))


def exhaustive_fixed_point_sets(two_n: int) -> list[FPSet]:
    """Every subset of the fixed-point-free involutions of Sym(two_n) that is a fixed point set."""
    if two_n > 4:
        raise ValueError("exhaustive search limited to two_n <= 4")
    invs = fpf_involutions(two_n)
    found = []
    for k in range(1, len(invs) + 1):
        for sub in itertools.combinations(invs, k):
            X = FPSet(tuple(sub))
            if is_fixed_point_set(X):
                found.append(X)
    return found


# ------------------------------------------------------------ classification


@dataclass(frozen=True)
class MuLabel:
    """The pair (s, t) with s + 2t = n, i.e. the composition (4t, 2s) of 2n."""

    s: int
    t: int

    def __post_init__(self) -> None:
        if self.s < 0 or self.t < 0 or (self.s == 0 and self.t == 0):
            raise ValueError("need s, t >= 0, not both zero")

    @property
    def n(self) -> int:
        return self.s + 2 * self.t

    @property
    def I(self) -> tuple[int, ...]:  # noqa: E743
        return tuple(i for i in range(self.t.bit_length()) if (self.t >> i) & 1)

    @property
    def composition(self) -> tuple[int, int]:
        return (4 * self.t, 2 * self.s)

    def __str__(self) -> str:
        return f"({4 * self.t},{2 * self.s})"

    @classmethod
    def parse(cls, text: str) -> MuLabel:
        four_t, two_s = (int(v) for v in text.strip("() ").split(","))
        if four_t % 4 or two_s % 2:
            raise ValueError(f"{text!r} is not of the form (4t,2s)")
        return cls(two_s // 2, four_t // 4)


def enumerate_mu(n: int) -> list[MuLabel]:
    if n < 1:
        raise ValueError("n must be positive")
    return [MuLabel(n - 2 * t, t) for t in range(n // 2 + 1)]


def build_W(mu: MuLabel) -> FPSet:
    """W_mu: the V_i blocks in increasing i, then the U block."""
    parts = [V_i(i) for i in mu.I]
    if mu.s:
        parts.append(star_power(U, mu.s))
    W = parts[0]
    for p in parts[1:]:
        W = star(W, p)
    return W


H_KLEIN = PermGroup([Permutation.from_cycles([(1, 2), (3, 4)], 4),
                     Permutation.from_cycles([(1, 3), (2, 4)], 4)], 4)


@dataclass
class VertexSpec:
    mu: MuLabel
    generators: list[Permutation]
    order: int
    factors: str
    group: PermGroup = field(repr=False)


def vertex_order_formula(mu: MuLabel) -> int:
    order = 2 ** legendre2(2 * mu.s)
    for i in mu.I:
        order *= 4 ** (2 ** i) * 2 ** legendre2(2 ** i)
    return order


def vertex_spec(mu: MuLabel) -> VertexSpec:
    pieces = [wreath_embed(H_KLEIN, sylow2_sym(2 ** i)) for i in mu.I]
    names = [f"H≀P({2 ** i})" if i else "H" for i in mu.I]
    if mu.s:
        pieces.append(sylow2_sym(2 * mu.s))
        names.append(f"P({2 * mu.s})")
    group = direct_product(*pieces)
    return VertexSpec(mu, list(group.generators), group.order(), " × ".join(names), group)


@lru_cache(maxsize=None)
def _kappa_set(i: int) -> FPSet:
    return star(V_i(i), V_i(i))


def kappa_probe(i: int) -> bool:
    """Does k(V_i * V_i) over its Nbar have a projective component?"""
    if i < 0 or i > 1:
        raise ValueError("kappa probe limited to i in {0, 1}")
    X = _kappa_set(i)
    sd = stabilizer_data(X)
    return bool(projective_components(X, sd.Nbar))


def size_two_orbits(X: FPSet) -> int:
    return sum(1 for o in support_orbits(X) if len(o) == 2)
