"""
Exact arithmetic in (Q/Z)^n and its finite subgroups.

A diagonal symmetry diag(exp(2 pi i a_1), ..., exp(2 pi i a_n)) is stored
additively as the vector a with every a_j reduced into [0, 1).  Finite
subgroups are materialized by full enumeration; internally their elements
are kept as rows of integer numerators over one common denominator so that
sums, intersections, kernels and images reduce to vectorized set operations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Callable, Iterable, Sequence, Union

import numpy as np

__all__ = [
    "TorsionError",
    "TorsionVector",
    "FiniteSubgroup",
    "span",
    "combine",
    "map_subgroup",
]


class TorsionError(ValueError):
    pass


def _frac01(q) -> Fraction:
    q = Fraction(q)
    return q - math.floor(q)


@dataclass(frozen=True)
class TorsionVector:
    """An element of (Q/Z)^n with canonical coordinates in [0, 1)."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(_frac01(c) for c in coords))
        if not self.coords:
            raise TorsionError("torsion vectors need a positive ambient dimension")

    @classmethod
    def zero(cls, n: int) -> "TorsionVector":
        return cls([0] * n)

    @classmethod
    def from_ints(cls, den: int, nums: Sequence[int]) -> "TorsionVector":
        if den <= 0:
            raise TorsionError(f"denominator must be positive, got {den}")
        return cls([Fraction(k, den) for k in nums])

    @property
    def ambient_dim(self) -> int:
        return len(self.coords)

    @property
    def den(self) -> int:
        """Least common denominator of the coordinates (the order of the element)."""
        return reduce(math.lcm, (c.denominator for c in self.coords), 1)

    def to_pair(self) -> tuple[int, list[int]]:
        d = self.den
        return d, [int(c * d) for c in self.coords]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def _check(self, other: "TorsionVector"):
        if other.ambient_dim != self.ambient_dim:
            raise TorsionError(
                f"dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def __add__(self, other: "TorsionVector") -> "TorsionVector":
        self._check(other)
        return TorsionVector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "TorsionVector") -> "TorsionVector":
        self._check(other)
        return TorsionVector(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "TorsionVector":
        return TorsionVector(-a for a in self.coords)

    def __mul__(self, k: int) -> "TorsionVector":
        if not isinstance(k, int):
            return NotImplemented
        return TorsionVector(k * a for a in self.coords)

    __rmul__ = __mul__

    def sort_key(self):
        return tuple((c.numerator, c.denominator) for c in self.coords)

    def __str__(self):
        d, nums = self.to_pair()
        if d == 1:
            return "0"
        return f"1/{d}(" + ",".join(str(k) for k in nums) + ")"


# --------------------------------------------------------------------------
# row helpers: elements of a subgroup are rows of numerators over `den`

_INT64_SAFE = 2**62


def _codes(rows: np.ndarray, den: int) -> np.ndarray:
    """Injective integer encoding of rows with entries in [0, den)."""
    n = rows.shape[1]
    if den**n < _INT64_SAFE:
        radix = np.array([den**j for j in range(n)], dtype=np.int64)
        return rows @ radix
    radix = np.array([den**j for j in range(n)], dtype=object)
    return rows.astype(object) @ radix


def isin_rows(rows: np.ndarray, other: np.ndarray, den: int) -> np.ndarray:
    """Boolean mask: which rows of `rows` occur among the rows of `other`."""
    if len(rows) == 0:
        return np.zeros(0, dtype=bool)
    if len(other) == 0:
        return np.zeros(len(rows), dtype=bool)
    return np.isin(_codes(rows, den), _codes(other, den))


def unique_rows(rows: np.ndarray, den: int) -> np.ndarray:
    if len(rows) == 0:
        return rows
    _, idx = np.unique(_codes(rows, den), return_index=True)
    return rows[np.sort(idx)]


def _closure(n: int, den: int, base: np.ndarray, candidates: np.ndarray):
    """Grow the subgroup `base` by the rows in `candidates` until closed.

    Returns the enlarged subgroup rows and the candidate rows that were
    actually needed as new generators.
    """
    cur = base
    chosen = []
    remaining = candidates
    while len(remaining):
        remaining = remaining[~isin_rows(remaining, cur, den)]
        if not len(remaining):
            break
        g = remaining[0]
        members = set(_codes(cur, den).tolist())
        shifts = [np.zeros(n, dtype=np.int64)]
        step = g.copy()
        while int(_codes(step[None, :], den)[0]) not in members:
            shifts.append(step)
            step = (step + g) % den
        cur = np.concatenate([(cur + s) % den for s in shifts])
        chosen.append(g)
        remaining = remaining[1:]
    return cur, chosen


def _rows_of(vectors: Sequence[TorsionVector], n: int, den: int) -> np.ndarray:
    out = np.zeros((len(vectors), n), dtype=np.int64)
    for i, v in enumerate(vectors):
        for j, c in enumerate(v.coords):
            out[i, j] = c.numerator * (den // c.denominator)
    return out


class FiniteSubgroup:
    """A finite subgroup of (Q/Z)^n, fully enumerated.

    Treat instances as immutable.  ``elements`` gives the canonical sorted
    enumeration (coordinate-wise lexicographic on (numerator, denominator)
    pairs); internal operations work on the numerator rows directly.
    """

    def __init__(self, ambient_dim: int, den: int, rows: np.ndarray, generators=None):
        self.ambient_dim = ambient_dim
        self.den = den
        rows = np.ascontiguousarray(rows, dtype=np.int64).reshape(-1, ambient_dim)
        rows.setflags(write=False)
        self._rows = rows
        if generators is not None:
            self.__dict__["generators"] = tuple(generators)

    @classmethod
    def trivial(cls, n: int) -> "FiniteSubgroup":
        return cls(n, 1, np.zeros((1, n), dtype=np.int64), generators=())

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    @property
    def order(self) -> int:
        return len(self._rows)

    def __len__(self):
        return self.order

    @cached_property
    def generators(self) -> tuple[TorsionVector, ...]:
        zero = np.zeros((1, self.ambient_dim), dtype=np.int64)
        _, chosen = _closure(self.ambient_dim, self.den, zero, self._rows)
        return tuple(self._vector(r) for r in chosen)

    def _vector(self, row) -> TorsionVector:
        return TorsionVector(Fraction(int(k), self.den) for k in row)

    @cached_property
    def _sorted_rows(self) -> np.ndarray:
        d = self.den
        g = np.gcd(self._rows, d)
        num = self._rows // g
        dd = d // g
        keys = []
        for j in reversed(range(self.ambient_dim)):
            keys.append(dd[:, j])
            keys.append(num[:, j])
        order = np.lexsort(keys) if keys else np.arange(self.order)
        return self._rows[order]

    @cached_property
    def elements(self) -> tuple[TorsionVector, ...]:
        return tuple(self._vector(r) for r in self._sorted_rows)

    def rows_over(self, den: int) -> np.ndarray:
        """Numerator rows rescaled to a multiple `den` of the stored denominator."""
        if den % self.den:
            raise TorsionError(f"{den} is not a multiple of {self.den}")
        return self._rows * (den // self.den)

    def contains(self, v: TorsionVector) -> bool:
        if v.ambient_dim != self.ambient_dim:
            raise TorsionError("dimension mismatch")
        d = v.den
        if self.den % d:
            return False
        row = _rows_of([v], self.ambient_dim, self.den)
        return bool(isin_rows(row, self._rows, self.den)[0])

    __contains__ = contains

    def is_subgroup_of(self, other: "FiniteSubgroup") -> bool:
        _check_dims(self, other)
        d = math.lcm(self.den, other.den)
        return bool(isin_rows(self.rows_over(d), other.rows_over(d), d).all())

    def filter(self, mask: np.ndarray) -> "FiniteSubgroup":
        """Subgroup of the rows selected by `mask`; the caller guarantees closure."""
        return FiniteSubgroup(self.ambient_dim, self.den, self._rows[mask])

    def __eq__(self, other):
        if not isinstance(other, FiniteSubgroup):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.order == other.order
            and self.is_subgroup_of(other)
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.order))

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"FiniteSubgroup(n={self.ambient_dim}, order={self.order}, <{gens}>)"


def _check_dims(a: FiniteSubgroup, b: FiniteSubgroup):
    if a.ambient_dim != b.ambient_dim:
        raise TorsionError(f"dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def span(ambient_dim: int, generators: Sequence[TorsionVector]) -> FiniteSubgroup:
    """Smallest subgroup of (Q/Z)^ambient_dim containing `generators`."""
    for g in generators:
        if g.ambient_dim != ambient_dim:
            raise TorsionError(
                f"generator {g} has dimension {g.ambient_dim}, expected {ambient_dim}"
            )
    den = reduce(math.lcm, (g.den for g in generators), 1)
    zero = np.zeros((1, ambient_dim), dtype=np.int64)
    rows, _ = _closure(ambient_dim, den, zero, _rows_of(generators, ambient_dim, den))
    return FiniteSubgroup(ambient_dim, den, rows, generators=tuple(generators))


def combine(a: FiniteSubgroup, b: FiniteSubgroup, mode: str) -> FiniteSubgroup:
    """Subgroup sum (``mode="sum"``) or intersection (``mode="intersection"``)."""
    _check_dims(a, b)
    d = math.lcm(a.den, b.den)
    ra, rb = a.rows_over(d), b.rows_over(d)
    if mode == "intersection":
        if a.order > b.order:
            ra, rb = rb, ra
        return FiniteSubgroup(a.ambient_dim, d, ra[isin_rows(ra, rb, d)])
    if mode == "sum":
        if a.order < b.order:
            a, b, ra, rb = b, a, rb, ra
        gens = _rows_of(b.generators, b.ambient_dim, d)
        rows, _ = _closure(a.ambient_dim, d, ra, gens)
        return FiniteSubgroup(a.ambient_dim, d, rows)
    raise ValueError(f"unknown combine mode {mode!r}")


Endomap = Union[np.ndarray, Callable[[TorsionVector], TorsionVector]]


def _apply(phi: Endomap, sub: FiniteSubgroup) -> np.ndarray:
    """Image rows (over sub.den) of every element of `sub` under phi."""
    if isinstance(phi, np.ndarray):
        m = np.asarray(phi, dtype=np.int64)
        if m.shape != (sub.ambient_dim, sub.ambient_dim):
            raise TorsionError(f"matrix shape {m.shape} does not fit dimension {sub.ambient_dim}")
        return (sub.rows @ m.T) % sub.den
    out = []
    for v in (sub._vector(r) for r in sub.rows):
        w = phi(v)
        if sub.den % w.den:
            raise TorsionError(f"image {w} leaves the denominator {sub.den}")
        out.append(w)
    return _rows_of(out, sub.ambient_dim, sub.den)


def _sanity_check(phi: Callable, sub: FiniteSubgroup, samples: int = 16):
    zero = TorsionVector.zero(sub.ambient_dim)
    if not phi(zero).is_zero():
        raise TorsionError("map does not send 0 to 0")
    els = sub.elements
    rng = np.random.default_rng(len(els))
    for _ in range(min(samples, len(els) ** 2)):
        i, j = rng.integers(len(els), size=2)
        a, b = els[i], els[j]
        if phi(a + b) != phi(a) + phi(b):
            raise TorsionError(f"map is not additive on ({a}, {b})")


def map_subgroup(phi: Endomap, sub: FiniteSubgroup, mode: str) -> FiniteSubgroup:
    """Image or kernel of the homomorphism `phi` restricted to `sub`.

    `phi` is either an integer n x n matrix acting on column vectors (always a
    homomorphism of (Q/Z)^n) or a callable on TorsionVector, which is spot
    checked for additivity first.
    """
    if not isinstance(phi, np.ndarray):
        _sanity_check(phi, sub)
    img = _apply(phi, sub)
    if mode == "kernel":
        return sub.filter(~img.any(axis=1))
    if mode == "image":
        return FiniteSubgroup(sub.ambient_dim, sub.den, unique_rows(img, sub.den))
    raise ValueError(f"unknown map mode {mode!r}")
