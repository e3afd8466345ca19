"""
Fixed subspaces of diagonal-times-permutation symmetries and Euler
characteristics of Milnor fibres restricted to them.

This is the independent (brute-force) route: it never uses the group
theoretic closed forms, only linear algebra on the fixed subspace and the
square-support case of the Newton polytope formula (a torus stratum whose
restricted polynomial has exactly as many monomials as variables has Euler
characteristic (-1)^(k-1) |det| of its exponent matrix).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import sympy

from .invertible import ExponentMatrix, _det
from .symmetry import Permutation, shift_map
from .torsion import TorsionVector

__all__ = [
    "OracleInapplicable",
    "NonCommuting",
    "Component",
    "FixedSpace",
    "RestrictedPolynomial",
    "fixed_space",
    "restrict_to_fixed",
    "stratum_euler",
    "torus_euler",
    "commute",
]


class OracleInapplicable(ArithmeticError):
    pass


class NonCommuting(ValueError):
    pass


@dataclass(frozen=True)
class Component:
    support: tuple[int, ...]
    phases: tuple[Fraction, ...]  # aligned with support; phases[0] == 0 (the anchor)

    @property
    def anchor(self) -> int:
        return self.support[0]


@dataclass(frozen=True)
class FixedSpace:
    """x_j = exp(2 pi i phase_j) t_c for j in component c, x_j = 0 elsewhere."""

    n: int
    components: tuple[Component, ...]

    @property
    def dimension(self) -> int:
        return len(self.components)

    def component_of(self) -> dict[int, int]:
        return {j: c for c, comp in enumerate(self.components) for j in comp.support}


def commute(g: tuple[TorsionVector, Permutation], h: tuple[TorsionVector, Permutation]) -> bool:
    """(a, s) and (b, t) commute iff st = ts and A_t(a) = A_s(b)."""
    (a, s), (b, t) = g, h
    return s * t == t * s and shift_map(t, a) == shift_map(s, b)


def _solve(n: int, den: int, constraints) -> FixedSpace:
    """Union-find with phase potentials; constraint (j, k, c): x_j = e(c/den) x_k."""
    parent = list(range(n))
    pot = [0] * n  # x_j = e(pot[j]/den) x_root
    bad = [False] * n

    def find(j):
        path = []
        while parent[j] != j:
            path.append(j)
            j = parent[j]
        root = j
        # compress, accumulating potentials from the top down
        for v in reversed(path):
            p = parent[v]
            if p != root:
                pot[v] = (pot[v] + pot[p]) % den
            parent[v] = root
        return root

    for j, k, c in constraints:
        rj, rk = find(j), find(k)
        if rj == rk:
            if (pot[j] - pot[k] - c) % den:
                bad[rj] = True
            continue
        # x_j = e(c) x_k  =>  pot_j + pot[rj] = c + pot_k  (relative to rk)
        parent[rj] = rk
        pot[rj] = (c + pot[k] - pot[j]) % den
        bad[rk] = bad[rk] or bad[rj]

    groups: dict[int, list[int]] = {}
    for j in range(n):
        groups.setdefault(find(j), []).append(j)
    comps = []
    for root, members in groups.items():
        if bad[root]:
            continue
        members.sort()
        base = pot[members[0]]
        comps.append(
            Component(
                tuple(members),
                tuple(Fraction((pot[j] - base) % den, den) for j in members),
            )
        )
    comps.sort(key=lambda c: c.support)
    return FixedSpace(n, tuple(comps))


def fixed_space(elements: Sequence[tuple[TorsionVector, Permutation]]) -> FixedSpace:
    """Common fixed subspace in C^n of commuting elements (a, sigma)."""
    if not elements:
        raise ValueError("need at least one element")
    n = elements[0][1].n
    for i, g in enumerate(elements):
        for h in elements[i + 1:]:
            if not commute(g, h):
                raise NonCommuting(f"({g[0]}, {g[1]}) and ({h[0]}, {h[1]}) do not commute")
    den = math.lcm(*(a.den for a, _ in elements))
    constraints = []
    for a, sigma in elements:
        inv = sigma.inverse().images
        for j in range(n):
            constraints.append((j, inv[j], int(a.coords[j] * den)))
    return _solve(n, den, constraints)


def fixed_space_rows(n: int, den: int, elements) -> FixedSpace:
    """Fast path for trusted input: elements are (numerator row over den, inverse images)."""
    constraints = []
    for row, inv in elements:
        for j in range(n):
            constraints.append((j, inv[j], int(row[j])))
    return _solve(n, den, constraints)


# --------------------------------------------------------------------------
# cyclotomic integers: coefficient lists reduced modulo the M-th cyclotomic polynomial


@lru_cache(maxsize=None)
def _cyclotomic(M: int) -> tuple[int, ...]:
    """Ascending integer coefficients of the M-th cyclotomic polynomial."""
    x = sympy.Symbol("x")
    coeffs = sympy.Poly(sympy.cyclotomic_poly(M, x), x).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def cyclotomic_reduce(counts: Sequence[int], M: int) -> tuple[int, ...]:
    """Reduce sum_k counts[k] zeta_M^k to its canonical form in Z[zeta_M]."""
    phi = _cyclotomic(M)
    deg = len(phi) - 1
    rem = list(counts)
    for top in range(len(rem) - 1, deg - 1, -1):
        c = rem[top]
        if c:
            for i, p in enumerate(phi):
                rem[top - deg + i] -= c * p
    rem = rem[:deg]
    return tuple(rem)


@dataclass(frozen=True)
class RestrictedPolynomial:
    t_dim: int
    M: int
    terms: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]  # (exponents, coefficient)

    def __str__(self):
        parts = []
        for exps, coeff in self.terms:
            mono = "*".join(f"t{c + 1}^{e}" if e > 1 else f"t{c + 1}" for c, e in enumerate(exps) if e)
            parts.append(f"[{','.join(map(str, coeff))}]{mono}")
        return " + ".join(parts) or "0"


def restrict_to_fixed(E: ExponentMatrix, fs: FixedSpace) -> RestrictedPolynomial:
    """Substitute the fixed-space parametrization into f (all coefficients 1)."""
    comp = fs.component_of()
    phase = {}
    for c in fs.components:
        for j, p in zip(c.support, c.phases):
            phase[j] = p
    M = math.lcm(1, *(p.denominator for p in phase.values()))
    collected: dict[tuple[int, ...], list[int]] = {}
    for row in E.rows:
        if any(e and j not in comp for j, e in enumerate(row)):
            continue
        exps = [0] * fs.dimension
        k = Fraction(0)
        for j, e in enumerate(row):
            if e:
                exps[comp[j]] += e
                k += e * phase[j]
        counts = collected.setdefault(tuple(exps), [0] * M)
        counts[int((k - math.floor(k)) * M)] += 1
    terms = []
    for exps in sorted(collected):
        coeff = cyclotomic_reduce(collected[exps], M)
        if any(coeff):
            terms.append((exps, coeff))
    return RestrictedPolynomial(fs.dimension, M, tuple(terms))


def stratum_euler(rp: RestrictedPolynomial, J: Sequence[int]) -> int:
    """Euler characteristic of {rp = 1} inside the torus where exactly the t_c, c in J, are nonzero."""
    J = tuple(sorted(J))
    if not J:
        return 0
    inside = set(J)
    live = [exps for exps, _ in rp.terms if all(c in inside for c, e in enumerate(exps) if e)]
    if len(live) < len(J):
        return 0
    if len(live) > len(J):
        raise OracleInapplicable(
            f"oracle inapplicable: {len(live)} monomials on a {len(J)}-dimensional torus stratum"
        )
    det = _det(tuple(tuple(exps[c] for c in J) for exps in live))
    if det == 0:
        raise OracleInapplicable("oracle inapplicable: singular exponent matrix on torus stratum")
    return (-1) ** (len(J) - 1) * abs(det)


def torus_euler(rp: RestrictedPolynomial) -> int:
    """Euler characteristic of the Milnor fibre {rp = 1} in C^t_dim."""
    total = 0
    for size in range(1, rp.t_dim + 1):
        for J in itertools.combinations(range(rp.t_dim), size):
            total += stratum_euler(rp, J)
    return total
