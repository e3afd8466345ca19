"""
Permutations of variables, cyclic permutation groups, and their interaction
with diagonal symmetries.

Conventions: permutations are stored 0-based (``images[j] = sigma(j)``) and
printed 1-based in cycle notation.  A permutation acts on coordinate vectors
by (sigma a)_j = a_{sigma^-1(j)}; the pair (lambda, sigma) acts on C^n by
x -> lambda * sigma(x).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .invertible import AtomicDecomposition, ExponentMatrix
from .torsion import FiniteSubgroup, TorsionVector, isin_rows

__all__ = [
    "InvalidPermutation",
    "NotPreserved",
    "FlipError",
    "Permutation",
    "CyclicPermGroup",
    "SubsetOrbit",
    "BlockAction",
    "RotationClassification",
    "parse_permutation",
    "check_preserves",
    "act",
    "is_invariant_subgroup",
    "cycle_map",
    "shift_map",
    "shift_matrix",
    "parity_condition",
    "subset_orbits",
    "classify_block_actions",
]


class InvalidPermutation(ValueError):
    pass


class NotPreserved(ValueError):
    pass


class FlipError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise InvalidPermutation(f"not a bijection: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        """Build from 0-based disjoint cycles."""
        images = list(range(n))
        seen = set()
        for cyc in cycles:
            for j in cyc:
                if not 0 <= j < n:
                    raise InvalidPermutation(f"index {j + 1} out of range 1..{n}")
                if j in seen:
                    raise InvalidPermutation(f"repeated index {j + 1}")
                seen.add(j)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a] = b
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        return self.images[j]

    @cached_property
    def cycles(self) -> tuple[tuple[int, ...], ...]:
        seen = set()
        out = []
        for start in range(self.n):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return tuple(out)

    @property
    def sign(self) -> int:
        return (-1) ** (self.n - len(self.cycles))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition: (self * other)(j) = self(other(j))."""
        return Permutation(tuple(self.images[j] for j in other.images))

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        out = Permutation.identity(self.n)
        for _ in range(k):
            out = self * out
        return out

    @property
    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles))

    @cached_property
    def matrix(self) -> np.ndarray:
        """P with (P a)_j = a_{sigma^-1(j)}."""
        P = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in enumerate(self.images):
            P[j, i] = 1
        return P

    def image_of_set(self, I: Iterable[int]) -> frozenset[int]:
        return frozenset(self.images[j] for j in I)

    def __str__(self):
        cyc = [c for c in self.cycles if len(c) > 1]
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(j + 1) for j in c) + ")" for c in cyc)


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, n: int) -> Permutation:
    """Parse 1-based disjoint cycle notation such as ``"(1 3)(2 4)"``."""
    text = (text or "").strip()
    pos = 0
    cycles = []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _CYCLE.match(text, pos)
        if not m:
            raise InvalidPermutation(f"malformed cycle notation at position {pos}: {text!r}")
        body = m.group(1).split()
        try:
            cyc = [int(tok) - 1 for tok in body]
        except ValueError:
            raise InvalidPermutation(f"non-integer entry in cycle {m.group(0)!r}") from None
        if len(set(cyc)) != len(cyc):
            raise InvalidPermutation(f"repeated index in cycle {m.group(0)!r}")
        if cyc:
            cycles.append(cyc)
        pos = m.end()
    return Permutation.from_cycles(cycles, n)


@dataclass(frozen=True)
class CyclicPermGroup:
    generator: Permutation

    @cached_property
    def elements(self) -> tuple[Permutation, ...]:
        els = [Permutation.identity(self.generator.n)]
        nxt = self.generator
        while not nxt.is_identity():
            els.append(nxt)
            nxt = self.generator * nxt
        return tuple(els)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def n(self) -> int:
        return self.generator.n

    def power(self, k: int) -> Permutation:
        return self.elements[k % self.order]

    def exponent_of(self, sigma: Permutation) -> int:
        """The k in [0, q) with s^k = sigma."""
        for k, el in enumerate(self.elements):
            if el == sigma:
                return k
        raise ValueError(f"{sigma} is not in <{self.generator}>")


def check_preserves(E: ExponentMatrix, sigma: Permutation) -> Permutation:
    """Monomial permutation tau induced by sigma: E[tau(i)][k] == E[i][sigma(k)]."""
    if sigma.n != E.n:
        raise NotPreserved(f"permutation on {sigma.n} letters, polynomial in {E.n} variables")
    used = set()
    tau = []
    for i, row in enumerate(E.rows):
        moved = tuple(row[sigma(k)] for k in range(E.n))
        match = [r for r in range(E.n) if r not in used and E.rows[r] == moved]
        if not match:
            raise NotPreserved(f"sigma = {sigma} does not preserve f (monomial {i + 1})")
        tau.append(match[0])
        used.add(match[0])
    return Permutation(tuple(tau))


def act(sigma: Permutation, a: TorsionVector) -> TorsionVector:
    if a.ambient_dim != sigma.n:
        raise ValueError("dimension mismatch")
    out = [None] * sigma.n
    for i, j in enumerate(sigma.images):
        out[j] = a.coords[i]
    return TorsionVector(out)


def is_invariant_subgroup(sigma: Permutation, G: FiniteSubgroup) -> bool:
    moved = G.rows @ sigma.matrix.T
    return bool(isin_rows(moved, G.rows, G.den).all())


def cycle_map(sigma: Permutation, a: TorsionVector) -> list[Fraction]:
    out = []
    for cyc in sigma.cycles:
        s = sum(a.coords[j] for j in cyc)
        out.append(s - math.floor(s))
    return out


def shift_map(sigma: Permutation, a: TorsionVector) -> TorsionVector:
    """A_sigma(a) = a - sigma(a)."""
    return a - act(sigma, a)


def shift_matrix(sigma: Permutation) -> np.ndarray:
    return np.eye(sigma.n, dtype=np.int64) - sigma.matrix


def cycle_matrix(sigma: Permutation) -> np.ndarray:
    """Integer matrix of C_sigma, padded with zero rows to be square."""
    C = np.zeros((sigma.n, sigma.n), dtype=np.int64)
    for r, cyc in enumerate(sigma.cycles):
        C[r, list(cyc)] = 1
    return C


def _divisors(q: int) -> list[int]:
    return [d for d in range(1, q + 1) if q % d == 0]


def parity_condition(S: CyclicPermGroup, n: int | None = None) -> bool:
    """PC: every subgroup <s^d> has a number of orbits congruent to n mod 2."""
    n = S.n if n is None else n
    s = S.generator
    full = all(len((s**d).cycles) % 2 == n % 2 for d in _divisors(S.order))
    shortcut = s.sign == 1
    assert full == shortcut, f"parity test disagreement for {s}"
    return full


@dataclass(frozen=True)
class SubsetOrbit:
    representative: tuple[int, ...]
    isotropy: CyclicPermGroup
    orbit_size: int
    members: tuple[tuple[int, ...], ...] = field(repr=False)


def subset_orbits(S: CyclicPermGroup, n: int | None = None) -> list[SubsetOrbit]:
    """Orbits of S on all subsets of {0..n-1} (including the empty set)."""
    n = S.n if n is None else n
    s = S.generator
    q = S.order
    img = s.images

    def move(mask):
        out = 0
        for j in range(n):
            if mask >> j & 1:
                out |= 1 << img[j]
        return out

    def as_tuple(mask):
        return tuple(j for j in range(n) if mask >> j & 1)

    def orbit_of(mask):
        orbit = [mask]
        nxt = move(mask)
        while nxt != mask:
            orbit.append(nxt)
            nxt = move(nxt)
        return orbit

    full = (1 << n) - 1
    seen = bytearray(1 << n)
    out = []
    for mask in range(1 << n):
        if seen[mask]:
            continue
        orbit = orbit_of(mask)
        for m in orbit:
            seen[m] = 1
        size = len(orbit)
        stab = CyclicPermGroup(S.power(size))
        assert stab.order * size == q
        # S^I = S^(complement of I)
        assert len(orbit_of(full ^ mask)) == size
        members = sorted(as_tuple(m) for m in orbit)
        out.append(SubsetOrbit(members[0], stab, size, tuple(members)))
    out.sort(key=lambda o: o.representative)
    return out


@dataclass(frozen=True)
class BlockAction:
    power: int  # exponent e of the element s^e
    block: int  # index into the decomposition's blocks
    N: int  # minimal N with (s^e)^N mapping the block to itself
    kind: str  # "trivial" | "rotation"
    ell: int = 0
    s: int = 0
    k: int = 0


@dataclass(frozen=True)
class RotationClassification:
    actions: tuple[BlockAction, ...]

    def rotations(self):
        return [a for a in self.actions if a.kind == "rotation"]


def classify_block_actions(dec: AtomicDecomposition, S: CyclicPermGroup) -> RotationClassification:
    """Classify the self-map each element of S induces on each atomic block.

    Raises FlipError if some power of the generator reverses a loop.
    """
    actions = []
    for e, sigma in enumerate(S.elements):
        for b, blk in enumerate(dec.blocks):
            vars_ = frozenset(blk.variables)
            N = 1
            rho = sigma
            while rho.image_of_set(vars_) != vars_:
                N += 1
                rho = sigma * rho
            pos = {v: i for i, v in enumerate(blk.variables)}
            m = blk.length
            pi = [pos[rho(v)] for v in blk.variables]
            if blk.kind == "chain":
                if pi != list(range(m)):
                    raise AssertionError(f"chain block {blk} moved non-trivially by {sigma}")
                actions.append(BlockAction(e, b, N, "trivial"))
                continue
            L = pi[0]
            if all(pi[i] == (i + L) % m for i in range(m)):
                if L == 0:
                    actions.append(BlockAction(e, b, N, "trivial"))
                else:
                    ell = math.gcd(L, m)
                    actions.append(BlockAction(e, b, N, "rotation", ell, L // ell, m // ell))
                continue
            if all(pi[i] == (pi[0] - i) % m for i in range(m)):
                raise FlipError(
                    f"flip automorphism present, excluded by scope: {sigma}^{N} reverses {blk}"
                )
            raise AssertionError(f"{sigma} induces an unexpected map on {blk}")
    return RotationClassification(tuple(actions))
