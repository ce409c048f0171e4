"""Ordinary characters of symmetric groups.

Characters are dense maps from cycle types (weakly decreasing tuples) to exact
integers.  Irreducibles are evaluated by the Murnaghan-Nakayama rule on beta
sets; induction from Young subgroups uses the class-fusion formula.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

from .perm_core import Permutation, compose, fpf_involutions

Partition = tuple[int, ...]


@lru_cache(maxsize=None)
def partitions(d: int) -> tuple[Partition, ...]:
    """All partitions of d in reverse lexicographic order."""
    def gen(rest: int, cap: int):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in gen(rest - first, first):
                yield (first,) + tail
    if d < 0:
        raise ValueError("negative weight")
    return tuple(gen(d, d))


def conjugate_partition(lam: Iterable[int]) -> Partition:
    lam = tuple(lam)
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0]))


def odd_parts(lam: Iterable[int]) -> int:
    return sum(1 for part in lam if part % 2)


def hook_dimension(lam: Partition) -> int:
    conj = conjugate_partition(lam)
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(sum(lam)) // hooks


def _beta(lam: Partition) -> tuple[int, ...]:
    ell = len(lam)
    return tuple(lam[i] + ell - 1 - i for i in range(ell))


def _from_beta(beta: Iterable[int]) -> Partition:
    b = sorted(beta, reverse=True)
    ell = len(b)
    return tuple(v for v in (b[i] - (ell - 1 - i) for i in range(ell)) if v > 0)


@lru_cache(maxsize=None)
def _mn(lam: Partition, rho: Partition) -> int:
    if not rho:
        return 1 if not lam else 0
    r, rest = rho[0], rho[1:]
    beta = _beta(lam)
    bset = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in bset:
            continue
        height = sum(1 for c in beta if target < c < b)
        new = _from_beta((bset - {b}) | {target})
        total += (-1) ** height * _mn(new, rest)
    return total


def mn_character(lam: Iterable[int], rho: Iterable[int]) -> int:
    """chi^lam evaluated on the class of cycle type rho."""
    lam = tuple(sorted(lam, reverse=True))
    rho = tuple(sorted(rho, reverse=True))
    if sum(lam) != sum(rho):
        raise ValueError(f"weight mismatch: |{lam}| != |{rho}|")
    return _mn(lam, rho)


# ------------------------------------------------------------------- classes


def centralizer_order(rho: Partition) -> int:
    z = 1
    for length, mult in Counter(rho).items():
        z *= length ** mult * math.factorial(mult)
    return z


@dataclass(frozen=True)
class ClassData:
    degree: int
    cycle_types: tuple[Partition, ...]
    class_sizes: tuple[int, ...]
    centralizer_orders: tuple[int, ...]


@lru_cache(maxsize=None)
def class_data(d: int) -> ClassData:
    types = partitions(d)
    cent = tuple(centralizer_order(r) for r in types)
    sizes = tuple(math.factorial(d) // z for z in cent)
    return ClassData(d, types, sizes, cent)


def class_representative(rho: Partition) -> Permutation:
    d = sum(rho)
    cycles, start = [], 1
    for length in rho:
        if length > 1:
            cycles.append(tuple(range(start, start + length)))
        start += length
    return Permutation.from_cycles(cycles, d)


def cycle_type_key(rho: Partition) -> str:
    return "+".join(map(str, rho))


# ---------------------------------------------------------------- characters


@dataclass(frozen=True)
class CharacterVector:
    """Class function on Sym(degree), stored on every cycle type."""

    degree: int
    values: Mapping[Partition, int]

    def __post_init__(self) -> None:
        if set(self.values) != set(partitions(self.degree)):
            raise ValueError("character must be defined on every cycle type")

    def __getitem__(self, rho: Iterable[int]) -> int:
        return self.values[tuple(sorted(rho, reverse=True))]

    def __add__(self, other: CharacterVector) -> CharacterVector:
        self._same(other)
        return CharacterVector(self.degree, {r: v + other.values[r] for r, v in self.values.items()})

    def __sub__(self, other: CharacterVector) -> CharacterVector:
        self._same(other)
        return CharacterVector(self.degree, {r: v - other.values[r] for r, v in self.values.items()})

    def _same(self, other: CharacterVector) -> None:
        if self.degree != other.degree:
            raise ValueError("characters of different degrees")

    @property
    def dimension(self) -> int:
        return self.values[(1,) * self.degree] if self.degree else self.values[()]

    def as_list(self) -> list[int]:
        return [self.values[r] for r in partitions(self.degree)]

    def to_json(self) -> dict[str, int]:
        return {cycle_type_key(r): int(self.values[r]) for r in partitions(self.degree)}

    @classmethod
    def zero(cls, degree: int) -> CharacterVector:
        return cls(degree, {r: 0 for r in partitions(degree)})

    @classmethod
    def from_list(cls, degree: int, vals: Iterable[int]) -> CharacterVector:
        return cls(degree, dict(zip(partitions(degree), (int(v) for v in vals))))


def irreducible(lam: Partition) -> CharacterVector:
    d = sum(lam)
    return CharacterVector(d, {r: mn_character(lam, r) for r in partitions(d)})


def trivial_character(d: int) -> CharacterVector:
    return CharacterVector(d, {r: 1 for r in partitions(d)})


def sign_character(d: int) -> CharacterVector:
    return CharacterVector(d, {r: (-1) ** (d - len(r)) for r in partitions(d)})


def character_sum(lams: Iterable[Partition], d: int) -> CharacterVector:
    out = CharacterVector.zero(d)
    for lam in lams:
        out = out + irreducible(lam)
    return out


def inner_product(chi: CharacterVector, psi: CharacterVector) -> Fraction:
    cd = class_data(chi.degree)
    return sum((Fraction(chi.values[r] * psi.values[r], z)
                for r, z in zip(cd.cycle_types, cd.centralizer_orders)), Fraction(0))


def constituents(chi: CharacterVector) -> dict[Partition, int]:
    """Multiplicity of each irreducible in chi (non-zero ones only)."""
    out = {}
    for lam in partitions(chi.degree):
        m = inner_product(chi, irreducible(lam))
        if m.denominator != 1:
            raise ValueError("not a virtual character")
        if m:
            out[lam] = int(m)
    return out


def lambda_set(d: int, m: int) -> list[Partition]:
    """Partitions of d with exactly m odd parts."""
    return [lam for lam in partitions(d) if odd_parts(lam) == m]


def lambda_prime_set(d: int, u: int) -> list[Partition]:
    """Partitions of d whose conjugates have exactly u odd parts."""
    return [lam for lam in partitions(d) if odd_parts(conjugate_partition(lam)) == u]


def perm_character_xi(two_n: int) -> CharacterVector:
    """Fixed-point count of each class on the fixed-point-free involutions."""
    if two_n > 10:
        raise ValueError("two_n limited to 10")
    if two_n == 0:
        return trivial_character(0)
    invs = fpf_involutions(two_n)
    vals = {}
    for rho in partitions(two_n):
        g = class_representative(rho)
        vals[rho] = sum(1 for x in invs if compose(x, g) == compose(g, x))
    return CharacterVector(two_n, vals)


def phi_constituents(s: int, t: int) -> list[Partition]:
    """Partitions of 2s+4t with no odd parts whose conjugate has exactly 2s odd parts."""
    two_n = 2 * s + 4 * t
    return [lam for lam in lambda_set(two_n, 0)
            if odd_parts(conjugate_partition(lam)) == 2 * s]


def phi_mu(mu) -> CharacterVector:
    """Closed-form character of the component labelled by ``mu`` (fields s, t)."""
    two_n = 2 * mu.s + 4 * mu.t
    if two_n > 10:
        raise ValueError("degree limited to 10")
    return character_sum(phi_constituents(mu.s, mu.t), two_n)


def _sub_multisets(rho: Partition, a: int) -> set[tuple[Partition, Partition]]:
    out = set()
    idx = range(len(rho))
    for k in range(len(rho) + 1):
        for pick in combinations(idx, k):
            alpha = tuple(rho[i] for i in pick)
            if sum(alpha) == a:
                beta = tuple(rho[i] for i in idx if i not in pick)
                out.add((alpha, beta))
    return out


def induce_character(chi_a: CharacterVector, chi_b: CharacterVector) -> CharacterVector:
    """Induce chi_a # chi_b from Sym(a) x Sym(b) to Sym(a+b)."""
    a, b = chi_a.degree, chi_b.degree
    d = a + b
    if d > 10:
        raise ValueError("degree limited to 10")
    vals = {}
    for gamma in partitions(d):
        total = Fraction(0)
        for alpha, beta in _sub_multisets(gamma, a):
            total += Fraction(chi_a.values[alpha] * chi_b.values[beta],
                              centralizer_order(alpha) * centralizer_order(beta))
        val = total * centralizer_order(gamma)
        if val.denominator != 1:
            raise ArithmeticError("non-integral induced value")
        vals[gamma] = int(val)
    return CharacterVector(d, vals)


def restrict_character(chi: CharacterVector, a: int) -> dict[tuple[Partition, Partition], int]:
    """Values of chi on Sym(a) x Sym(d-a), keyed by pairs of cycle types."""
    d = chi.degree
    return {(al, be): chi.values[tuple(sorted(al + be, reverse=True))]
            for al in partitions(a) for be in partitions(d - a)}


@dataclass(frozen=True)
class IrsResult:
    induced: CharacterVector
    partition_sum: CharacterVector
    equal: bool


def irs_character(n: int, m: int) -> IrsResult:
    """Both sides of the induced-from-Young-subgroup identity for Xi_{2n} # sgn_{2m}."""
    d = 2 * (n + m)
    if d > 10:
        raise ValueError("2(n+m) limited to 10")
    if n == 0:
        induced = sign_character(2 * m)
    else:
        induced = induce_character(perm_character_xi(2 * n), sign_character(2 * m))
    psum = character_sum(lambda_set(d, 2 * m), d)
    return IrsResult(induced, psum, induced == psum)


def alt_twist_check(t: int) -> bool:
    """Is {no odd parts, conjugate has no odd parts} closed under conjugation at 4t?"""
    if 4 * t > 10:
        raise ValueError("4t limited to 10")
    idx = set(phi_constituents(0, t))
    return all(conjugate_partition(lam) in idx for lam in idx)


def green_corollary_check(t: int, s: int) -> bool:
    """Constituents of phi_(4t,2s) lie in Ind(phi_(4t,0) # 1) and have 2s odd conjugate parts."""
    two_n = 4 * t + 2 * s
    if two_n > 10:
        raise ValueError("4t+2s limited to 10")
    target = set(phi_constituents(s, t))
    if t == 0:
        top = trivial_character(0)
    else:
        top = character_sum(phi_constituents(0, t), 4 * t)
    induced = induce_character(top, trivial_character(2 * s))
    contained = target <= set(constituents(induced))
    parity = all(odd_parts(conjugate_partition(lam)) == 2 * s for lam in target)
    return contained and parity
