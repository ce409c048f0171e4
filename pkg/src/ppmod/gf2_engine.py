"""Permutation modules over GF(2) and their decomposition into indecomposables.

The endomorphism algebra of a permutation module kΩ has the orbit matrices of
G on Ω×Ω as a basis.  Its structure constants are non-negative integers, so the
same coefficient vectors describe endomorphisms over GF(2) and over Z/2^k; all
idempotent work (splitting, lifting) is done on those coefficient vectors and
only materialised as matrices where a module-level statement is checked.

Row-vector convention throughout: the point x of Ω is the basis row e_x and a
group element g acts by e_x -> e_{x.g}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .gf2 import Gf2Matrix
from .perm_core import GroupAction, PermGroup, Permutation

DEFAULT_PRECISION = 16
MAX_SPAN_BITS = 10
MAX_TRACE_ORDER = 32


class NotInvariant(ValueError):
    """A map that should commute with the group action does not."""


class EnumerationBound(ValueError):
    """An exhaustive search would exceed its configured bound."""


# ------------------------------------------------------------------- modules


class PermModule:
    """The permutation module k[points] of a group action."""

    def __init__(self, action: GroupAction):
        self.action = action
        self._mats: list[Gf2Matrix] | None = None

    @property
    def dim(self) -> int:
        return len(self.action.points)

    @property
    def group(self) -> PermGroup:
        return self.action.group

    def generator_images(self) -> list[np.ndarray]:
        return list(self.action.table)

    def generator_matrices(self) -> list[Gf2Matrix]:
        if self._mats is None:
            self._mats = [Gf2Matrix.permutation(img) for img in self.action.table]
        return self._mats

    def images_of(self, g: Permutation) -> np.ndarray:
        return self.action.perm_of(g)

    def matrix_of(self, g: Permutation) -> Gf2Matrix:
        return Gf2Matrix.permutation(self.images_of(g))


def restrict_module(module: PermModule, subgroup: PermGroup) -> list[Gf2Matrix]:
    """Generator matrices of ``subgroup`` on the same basis."""
    return [module.matrix_of(g) for g in subgroup.generators]


def _commutes(theta: Gf2Matrix, images: Sequence[np.ndarray]) -> bool:
    for img in images:
        if theta.permute_columns(img) != _permute_rows(theta, img):
            return False
    return True


def _permute_rows(m: Gf2Matrix, images: np.ndarray) -> Gf2Matrix:
    """P @ m for the permutation matrix P of ``images`` (row x of P@m is row images[x])."""
    return m.select_rows(images)


# --------------------------------------------------------- endomorphism basis


@dataclass
class EndAlgebraBasis:
    """Orbit-matrix basis of End_{kG}(kΩ) with integer structure constants."""

    module: PermModule
    labels: np.ndarray              # (N, N) orbit index of each pair
    invariants: list[Any]           # one label per orbit
    reps: list[tuple[int, int]]     # representative pair per orbit
    structure: np.ndarray           # (r, r, r): M_a M_b = sum_c C[a, b, c] M_c
    unit: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        diag = np.unique(self.labels[np.arange(len(self.labels)), np.arange(len(self.labels))])
        self.unit = np.zeros(self.size, dtype=np.int64)
        self.unit[diag] = 1

    @property
    def size(self) -> int:
        return len(self.reps)

    def orbit_matrix(self, c: int) -> Gf2Matrix:
        return Gf2Matrix.from_dense((self.labels == c).astype(np.uint8))

    def matrix(self, coeffs: np.ndarray) -> Gf2Matrix:
        """The GF(2) endomorphism sum_c coeffs[c] M_c."""
        vals = np.asarray(coeffs, dtype=np.int64) % 2
        return Gf2Matrix.from_dense(vals[self.labels].astype(np.uint8))

    def integer_matrix(self, coeffs: np.ndarray, modulus: int) -> np.ndarray:
        vals = np.asarray([int(c) % modulus for c in coeffs], dtype=np.int64)
        return vals[self.labels]

    def mul(self, a: np.ndarray, b: np.ndarray, modulus: int = 2) -> np.ndarray:
        if modulus <= 1 << 16 and self.size <= 64:
            out = np.einsum("i,j,ijk->k", np.asarray(a, dtype=np.int64) % modulus,
                            np.asarray(b, dtype=np.int64) % modulus, self.structure)
            return out % modulus
        a = [int(v) % modulus for v in a]
        b = [int(v) % modulus for v in b]
        out = [0] * self.size
        C = self.structure
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                w = ai * bj
                for k in np.flatnonzero(C[i, j]):
                    out[k] += w * int(C[i, j, k])
        return np.array([v % modulus for v in out], dtype=object)

    def power(self, x: np.ndarray, e: int, modulus: int = 2) -> np.ndarray:
        result = self.unit % modulus
        base = np.asarray(x) % modulus
        while e:
            if e & 1:
                result = self.mul(result, base, modulus)
            e >>= 1
            if e:
                base = self.mul(base, base, modulus)
        return result


def pair_orbits(module: PermModule) -> np.ndarray:
    """Orbit index of every pair in Ω×Ω, numbered by first row-major occurrence."""
    n = module.dim
    nodes = np.arange(n * n, dtype=np.int64)
    xs, ys = np.divmod(nodes, n)
    rows, cols = [], []
    for img in module.generator_images():
        rows.append(nodes)
        cols.append(img[xs] * n + img[ys])
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(n * n, n * n))
    _, comp = connected_components(graph, directed=True, connection="weak")
    _, first = np.unique(comp, return_index=True)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    return relabel[comp].reshape(n, n)


def end_algebra_basis(module: PermModule,
                      pair_invariant: Callable[[Hashable, Hashable], Hashable] | None = None,
                      samples: int = 256) -> EndAlgebraBasis:
    """Orbit matrices of G on Ω×Ω, labelled by ``pair_invariant`` when given.

    The invariant must be constant on orbits and separate them; it is checked on
    every orbit representative and on a deterministic sample of generator moves.
    """
    labels = pair_orbits(module)
    n = module.dim
    r = int(labels.max()) + 1 if n else 0
    flat = labels.ravel()
    _, first = np.unique(flat, return_index=True)
    reps = [tuple(int(v) for v in divmod(int(f), n)) for f in first]
    pts = module.action.points
    if pair_invariant is None:
        invariants: list[Any] = list(range(r))
    else:
        invariants = [pair_invariant(pts[x], pts[y]) for x, y in reps]
        if len(set(invariants)) != r:
            raise NotInvariant("pair invariant does not separate the orbits")
        step = max(1, (n * n) // samples)
        gens = module.generator_images()
        for k, node in enumerate(range(0, n * n, step)):
            x, y = divmod(node, n)
            lab = pair_invariant(pts[x], pts[y])
            if lab != invariants[labels[x, y]]:
                raise NotInvariant(f"invariant not constant on orbit at pair {(x, y)}")
            if gens:
                img = gens[k % len(gens)]
                if pair_invariant(pts[img[x]], pts[img[y]]) != lab:
                    raise NotInvariant(f"invariant not G-stable at pair {(x, y)}")
    C = np.zeros((r, r, r), dtype=np.int64)
    for c, (x, y) in enumerate(reps):
        counts = np.bincount(labels[x, :] * r + labels[:, y], minlength=r * r)
        C[:, :, c] = counts.reshape(r, r)
    return EndAlgebraBasis(module, labels, invariants, reps, C)


# ------------------------------------------------------------ Fitting splits


def fitting_split(module: PermModule, theta: Gf2Matrix) -> tuple[Gf2Matrix, Gf2Matrix] | None:
    """Split kΩ as ker(theta^N) ⊕ im(theta^N), or None if theta is nilpotent or invertible.

    Returns row bases (kernel, image).
    """
    if not _commutes(theta, module.generator_images()):
        raise NotInvariant("theta does not commute with the group action")
    T = theta.power(module.dim)
    image = T.row_basis()
    if image.nrows in (0, module.dim):
        return None
    kernel = T.left_nullspace()
    return kernel, image


def fitting_idempotent(basis: EndAlgebraBasis, x: np.ndarray) -> np.ndarray:
    """The idempotent power of x (projection onto the Fitting image of x)."""
    seen: dict[bytes, int] = {}
    p = np.asarray(x, dtype=np.int64) % 2
    k = 1
    while p.tobytes() not in seen:
        seen[p.tobytes()] = k
        p = basis.mul(p, x)
        k += 1
    start = seen[p.tobytes()]
    period = k - start
    m = period * -(-start // period)
    return basis.power(x, m)


def _gf2_row_basis(vectors: list[np.ndarray], width: int) -> list[np.ndarray]:
    if not vectors:
        return []
    R, _ = Gf2Matrix.from_dense(np.array(vectors, dtype=np.uint8).reshape(-1, width)).rref()
    return [row.astype(np.int64) for row in R.to_dense()]


def corner_basis(basis: EndAlgebraBasis, e: np.ndarray) -> list[np.ndarray]:
    """A GF(2) basis of eAe in coefficient coordinates."""
    vecs = []
    for c in range(basis.size):
        m = np.zeros(basis.size, dtype=np.int64)
        m[c] = 1
        vecs.append(basis.mul(basis.mul(e, m), e))
    return _gf2_row_basis(vecs, basis.size)


@dataclass
class Component:
    """An indecomposable summand e·kΩ given by a primitive idempotent e."""

    basis: EndAlgebraBasis
    coeffs: np.ndarray
    dimension: int
    local_span: int                    # size of eAe enumerated to certify locality
    mu: Any = None
    brauer_data: dict[str, int] = field(default_factory=dict)
    character: dict[tuple[int, ...], int] | None = None
    lifted: np.ndarray | None = None
    _matrix: Gf2Matrix | None = field(default=None, repr=False)

    @property
    def idempotent(self) -> Gf2Matrix:
        if self._matrix is None:
            self._matrix = self.basis.matrix(self.coeffs)
        return self._matrix

    def subspace(self) -> Gf2Matrix:
        return self.idempotent.row_basis()


def _is_local(basis: EndAlgebraBasis, e: np.ndarray, cb: list[np.ndarray]) -> np.ndarray | None:
    """Return a non-trivial idempotent of eAe, or None when every element is nilpotent or a unit."""
    k = len(cb)
    if k > MAX_SPAN_BITS:
        raise EnumerationBound(f"corner algebra has 2^{k} elements, bound is 2^{MAX_SPAN_BITS}")
    e = e % 2
    stack = np.array(cb, dtype=np.int64).reshape(k, basis.size)
    for bits in itertools.product((0, 1), repeat=k):
        if not any(bits):
            continue
        x = (np.array(bits, dtype=np.int64) @ stack) % 2
        f = fitting_idempotent(basis, x)
        if f.any() and not np.array_equal(f, e):
            return f
    return None


def decompose(module: PermModule, basis: EndAlgebraBasis) -> list[Component]:
    """Complete set of orthogonal primitive idempotents of kΩ.

    Each idempotent is split by the Fitting idempotent of some element of its
    corner algebra until no element splits it; the exhaustive search over eAe is
    the locality certificate.
    """
    if basis.size > MAX_SPAN_BITS:
        raise EnumerationBound(f"endomorphism algebra of dimension {basis.size} too large")
    done: list[tuple[np.ndarray, int]] = []
    pending = [basis.unit % 2]
    while pending:
        e = pending.pop()
        cb = corner_basis(basis, e)
        f = _is_local(basis, e, cb)
        if f is None:
            done.append((e, 2 ** len(cb)))
        else:
            pending.append((e - f) % 2)
            pending.append(f)
    comps = [Component(basis, e, basis.matrix(e).rank(), span) for e, span in done]
    comps.sort(key=lambda c: (c.dimension, tuple(c.coeffs)))
    return comps


def check_decomposition(module: PermModule, comps: Sequence[Component]) -> dict[str, bool]:
    """Module-level verification of idempotent laws for a decomposition."""
    n = module.dim
    mats = [c.idempotent for c in comps]
    total = Gf2Matrix.zeros(n, n)
    for m in mats:
        total = total + m
    orth = all((a @ b).is_zero() for a, b in itertools.permutations(mats, 2))
    return {
        "idempotent": all(m @ m == m for m in mats),
        "orthogonal": orth,
        "sum_is_identity": total == Gf2Matrix.identity(n),
        "commutes": all(_commutes(m, module.generator_images()) for m in mats),
        "dimensions_sum": sum(c.dimension for c in comps) == n,
    }


# -------------------------------------------------------------- projectivity


def is_projective_over_2group(module: PermModule, subspace: Gf2Matrix, P: PermGroup) -> bool:
    """True iff the P-invariant subspace is a free kP-module (P a 2-group)."""
    order = P.order()
    if order & (order - 1):
        raise ValueError(f"|P| = {order} is not a power of 2")
    B = subspace.row_basis()
    dim = B.nrows
    if dim == 0:
        return True
    moved = [B.permute_columns(module.images_of(g)) for g in P.generators]
    stacked = B
    for m in moved:
        stacked = stacked.vstack(m)
    if stacked.rank() != dim:
        raise NotInvariant("subspace is not invariant under P")
    if not moved:
        return dim == order * dim
    rad = moved[0] + B
    for m in moved[1:]:
        rad = rad.vstack(m + B)
    return dim == order * (dim - rad.rank())


# ------------------------------------------------------------ Brauer quotient


def index_two_subgroups(Q: PermGroup) -> list[list[Permutation]]:
    """Kernels of the non-trivial homomorphisms Q -> C_2, via generator parity patterns."""
    gens = list(Q.generators)
    kernels: list[list[Permutation]] = []
    seen: set[frozenset[Permutation]] = set()
    ident = Permutation.identity(Q.degree)
    for pattern in itertools.product((0, 1), repeat=len(gens)):
        if not any(pattern):
            continue
        val = {ident: 0}
        queue = [ident]
        ok = True
        while queue and ok:
            e = queue.pop()
            for g, bit in zip(gens, pattern):
                h = e * g
                v = val[e] ^ bit
                if h in val:
                    if val[h] != v:
                        ok = False
                        break
                else:
                    val[h] = v
                    queue.append(h)
        if ok:
            ker = frozenset(k for k, v in val.items() if v == 0)
            if ker not in seen:
                seen.add(ker)
                kernels.append(sorted(ker))
    return kernels


@dataclass
class BrauerQuotient:
    dimension: int
    fixed_points: list[int]
    method: str
    action: dict[str, np.ndarray] = field(default_factory=dict)


def _orbit_sums(n: int, perms: Sequence[np.ndarray]) -> np.ndarray:
    parent = np.arange(n)
    if perms:
        r = np.concatenate([np.arange(n)] * len(perms))
        c = np.concatenate(perms)
        g = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(n, n))
        _, parent = connected_components(g, directed=True, connection="weak")
    k = int(parent.max()) + 1
    out = np.zeros((k, n), dtype=np.uint8)
    out[parent, np.arange(n)] = 1
    return out


def brauer_quotient(component: Component, Q: PermGroup, module: PermModule,
                    method: str = "auto",
                    normalizer_gens: Sequence[Permutation] = ()) -> BrauerQuotient:
    """Dimension of M(Q) for the summand M of ``module``.

    ``trace``: M^Q modulo the relative traces from the maximal subgroups of Q.
    ``fixed``: rank of the idempotent restricted to Fix(Q) x Fix(Q) (Brauer morphism).
    ``auto`` uses ``trace`` for |Q| <= 32 and ``fixed`` otherwise.
    """
    order = Q.order()
    if order & (order - 1):
        raise ValueError("Q must be a 2-group")
    n = module.dim
    ident = np.arange(n)
    mask = np.ones(n, dtype=bool)
    for g in Q.generators:
        mask &= module.images_of(g) == ident
    fix = [int(i) for i in np.flatnonzero(mask)]
    if method == "auto":
        method = "trace" if order <= MAX_TRACE_ORDER else "fixed"
    e_coeffs = component.coeffs % 2
    if method == "fixed":
        sub = e_coeffs[component.basis.labels[np.ix_(fix, fix)]].astype(np.uint8)
        br = Gf2Matrix.from_dense(sub.reshape(len(fix), len(fix)))
        result = BrauerQuotient(br.rank() if fix else 0, fix, "fixed")
        if normalizer_gens and result.dimension:
            B = br.row_basis()
            pos = {p: k for k, p in enumerate(fix)}
            for g in normalizer_gens:
                img = module.images_of(g)
                local = np.array([pos[int(img[p])] for p in fix])
                result.action[str(g)] = B.solve_rows(B.permute_columns(local)).to_dense()
        return result
    if method != "trace":
        raise ValueError(f"unknown method {method!r}")
    if order > MAX_TRACE_ORDER:
        raise EnumerationBound(f"|Q| = {order} exceeds trace-path cap {MAX_TRACE_ORDER}")
    E = component.idempotent
    elems = Q.elements()
    perm_of = {g: module.images_of(g) for g in elems}
    fixed_Q = Gf2Matrix.from_dense(_orbit_sums(n, [perm_of[g] for g in Q.generators])) @ E
    traces: list[Gf2Matrix] = []
    for R in index_two_subgroups(Q):
        rset = set(R)
        h = next(g for g in elems if g not in rset)
        sums = _orbit_sums(n, [perm_of[g] for g in R])
        moved = np.zeros_like(sums)
        moved[:, perm_of[h]] = sums
        traces.append(Gf2Matrix.from_dense(sums ^ moved) @ E)
    top = fixed_Q.rank()
    if traces:
        T = traces[0]
        for t in traces[1:]:
            T = T.vstack(t)
        low = T.rank()
    else:
        low = 0
    return BrauerQuotient(top - low, fix, "trace")


# ------------------------------------------------------------------- lifting


def hensel_lift_idempotent(basis: EndAlgebraBasis, e: np.ndarray,
                           k: int = DEFAULT_PRECISION) -> np.ndarray:
    """Lift a GF(2) idempotent to one mod 2^k by e <- 3e^2 - 2e^3."""
    e = np.asarray(e, dtype=np.int64)
    if not np.array_equal(basis.mul(e, e, 2), e % 2):
        raise ValueError("input is not idempotent mod 2")
    mod = 1 << k
    E = e % mod
    for _ in range(max(0, (k - 1).bit_length())):
        E2 = basis.mul(E, E, mod)
        E3 = basis.mul(E2, E, mod)
        E = (3 * E2 - 2 * E3) % mod
    return E


def lift_decomposition(basis: EndAlgebraBasis, comps: Sequence[Component],
                       k: int = DEFAULT_PRECISION) -> list[np.ndarray]:
    """Lift a complete orthogonal family, re-orthogonalising each lift against the earlier ones."""
    mod = 1 << k
    unit = basis.unit % mod
    acc = np.zeros(basis.size, dtype=np.int64)
    lifts: list[np.ndarray] = []
    for i, comp in enumerate(comps):
        if i == len(comps) - 1:
            E = (unit - acc) % mod
        else:
            comp_lift = hensel_lift_idempotent(basis, comp.coeffs, k)
            rest = (unit - acc) % mod
            E = basis.mul(basis.mul(rest, comp_lift, mod), rest, mod)
            E = _newton(basis, E, k)
        lifts.append(np.asarray(E, dtype=np.int64))
        acc = (acc + E) % mod
    return lifts


def _newton(basis: EndAlgebraBasis, E: np.ndarray, k: int) -> np.ndarray:
    mod = 1 << k
    for _ in range(k.bit_length() + 1):
        E2 = basis.mul(E, E, mod)
        if np.array_equal(E2 % mod, E % mod):
            break
        E3 = basis.mul(E2, E, mod)
        E = (3 * E2 - 2 * E3) % mod
    return E


def centered(value: int, k: int) -> int:
    mod = 1 << k
    v = int(value) % mod
    return v - mod if v > mod // 2 else v


def component_character(lifted: np.ndarray, class_reps: Sequence[Permutation],
                        action: GroupAction, k: int = DEFAULT_PRECISION,
                        dimension: int | None = None) -> list[int]:
    """Trace of g on the lifted summand, for each class representative g.

    ``lifted`` is the integer matrix of the lifted idempotent mod 2^k.
    """
    if dimension is not None and (1 << k) <= 2 * dimension:
        raise ValueError(f"precision 2^{k} too small for dimension {dimension}")
    n = len(action.points)
    out = []
    for g in class_reps:
        img = action.perm_of(g)
        out.append(centered(int(lifted[img, np.arange(n)].sum()), k))
    return out


def character_from_coeffs(basis: EndAlgebraBasis, lifted: np.ndarray,
                          class_reps: Sequence[Permutation], k: int = DEFAULT_PRECISION) -> list[int]:
    """Same values as :func:`component_character`, read off the orbit labels."""
    n = basis.module.dim
    coeffs = np.asarray([int(c) for c in lifted], dtype=object)
    out = []
    for g in class_reps:
        img = basis.module.images_of(g)
        labs = basis.labels[img, np.arange(n)]
        counts = np.bincount(labs, minlength=basis.size)
        out.append(centered(sum(int(c) * int(v) for c, v in zip(counts, coeffs)), k))
    return out
