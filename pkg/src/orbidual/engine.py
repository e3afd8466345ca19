"""
Orbifold Euler characteristics of Milnor fibres V_f = {f = 1} under G x| S.

Two independent routes are provided:

* the pipeline (`reduced_orbifold_euler`) sums closed-form per-orbit terms
  over S-orbits of coordinate subsets, using only subgroup cardinalities in
  G_f (kernels and images of the shift map, isotropy groups);
* the oracle (`orbifold_euler_bruteforce`) enumerates commuting pairs of
  G x| S and computes every fixed-point Euler characteristic directly.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .fixed import (
    OracleInapplicable,
    fixed_space,
    fixed_space_rows,
    restrict_to_fixed,
    stratum_euler,
    torus_euler,
)
from .invertible import (
    AtomicDecomposition,
    ExponentMatrix,
    diagonal_symmetry_group,
    dual_subgroup,
    isotropy_subgroup,
    restrict_support,
    normalize,
)
from .symmetry import (
    CyclicPermGroup,
    Permutation,
    RotationClassification,
    check_preserves,
    classify_block_actions,
    is_invariant_subgroup,
    parity_condition,
    shift_matrix,
    subset_orbits,
)
from .torsion import FiniteSubgroup, TorsionError, TorsionVector, combine, map_subgroup, span
from .torsion import _codes

__all__ = [
    "InvalidInstance",
    "OracleCapExceeded",
    "Instance",
    "OrbitContribution",
    "DualityVerdict",
    "EulerReport",
    "BruteForceResult",
    "make_instance",
    "chi_I_sigma_one",
    "chi_I_pair",
    "chi_I_pair_definitional",
    "reduced_orbifold_euler",
    "point_orbifold_euler",
    "bhht_dual",
    "verify_duality",
    "orbifold_euler_bruteforce",
    "bruteforce",
    "DEFAULT_ORACLE_CAP",
]

DEFAULT_ORACLE_CAP = 500


class InvalidInstance(ValueError):
    pass


class OracleCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Instance:
    E: ExponentMatrix
    dec: AtomicDecomposition
    G: FiniteSubgroup
    S: CyclicPermGroup
    Gf: FiniteSubgroup
    name: str = ""
    blocks: RotationClassification | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.E.n

    @property
    def group_order(self) -> int:
        """|G x| S|."""
        return self.G.order * self.S.order

    def _memo(self, key, fn):
        try:
            return self._cache[key]
        except KeyError:
            val = self._cache[key] = fn()
            return val

    def ker_shift(self, sigma: Permutation) -> FiniteSubgroup:
        return self._memo(("ker", sigma), lambda: map_subgroup(shift_matrix(sigma), self.Gf, "kernel"))

    def im_shift(self, sigma: Permutation) -> FiniteSubgroup:
        return self._memo(("im", sigma), lambda: map_subgroup(shift_matrix(sigma), self.Gf, "image"))

    def isotropy(self, I: tuple[int, ...]) -> FiniteSubgroup:
        return self._memo(("iso", I), lambda: isotropy_subgroup(self.Gf, I))

    def admissible(self, I: tuple[int, ...]) -> bool:
        return self._memo(("adm", I), lambda: restrict_support(self.E, I).admissible)

    def same_as(self, other: "Instance") -> bool:
        return (
            self.E == other.E
            and self.G == other.G
            and set(self.S.elements) == set(other.S.elements)
        )


def make_instance(
    E: ExponentMatrix | Sequence[Sequence[int]],
    generators: Iterable[TorsionVector],
    permutation: Permutation | None = None,
    name: str = "",
) -> Instance:
    """Validate (f, G x| S) and bundle it.

    Raises InvalidPolynomial, NotPreserved, FlipError or InvalidInstance.
    """
    dec = normalize(E)
    E = dec.matrix
    sigma = permutation or Permutation.identity(E.n)
    if sigma.n != E.n:
        raise InvalidInstance(f"permutation acts on {sigma.n} letters, expected {E.n}")
    S = CyclicPermGroup(sigma)
    for el in S.elements:
        check_preserves(E, el)
    Gf = diagonal_symmetry_group(E)
    try:
        G = span(E.n, list(generators))
    except TorsionError as exc:
        raise InvalidInstance(str(exc)) from None
    if not G.is_subgroup_of(Gf):
        bad = [str(g) for g in G.generators if g not in Gf]
        raise InvalidInstance(f"G is not a group of diagonal symmetries of f: {', '.join(bad)}")
    if not is_invariant_subgroup(sigma, G):
        raise InvalidInstance(f"G is not invariant under {sigma}")
    blocks = classify_block_actions(dec, S)
    return Instance(E, dec, G, S, Gf, name, blocks)


# --------------------------------------------------------------------------
# closed-form pipeline


def _cycles_inside(sigma: Permutation, I: Iterable[int]) -> int:
    inside = set(I)
    return sum(1 for c in sigma.cycles if set(c) <= inside)


def chi_I_sigma_one(inst: Instance, I: Sequence[int], sigma: Permutation) -> Fraction:
    """Closed form of the (sigma, 1) term of the stratum (C*)^I."""
    I = tuple(sorted(I))
    if sigma.image_of_set(I) != frozenset(I):
        raise ValueError(f"{sigma} does not stabilize I = {I}")
    if I and not inst.admissible(I):
        raise ValueError(f"contract violation: I = {I} is not admissible")
    key = ("chi1", I, sigma)
    if key in inst._cache:
        return inst._cache[key]
    d = _cycles_inside(sigma, I)
    G = inst.G
    ker = inst.ker_shift(sigma)
    im = inst.im_shift(sigma)
    iso = inst.isotropy(I)
    ker_iso = combine(ker, iso, "intersection")
    g_im_iso = combine(G, combine(im, iso, "sum"), "intersection")
    g_ker_iso = combine(G, ker_iso, "intersection")
    val = (
        Fraction((-1) ** ((d - 1) % 2), G.order)
        * Fraction(ker.order, ker_iso.order)
        * g_im_iso.order
        * g_ker_iso.order
    )
    inst._cache[key] = val
    return val


def _isotropy_group(inst: Instance, I: Sequence[int]) -> CyclicPermGroup:
    I = frozenset(I)
    for el in inst.S.elements[1:]:
        if el.image_of_set(I) == I:
            return CyclicPermGroup(el)
    return CyclicPermGroup(Permutation.identity(inst.n))


def chi_I_pair(
    inst: Instance,
    I: Sequence[int],
    sigma: Permutation,
    sigma_prime: Permutation,
    stab: CyclicPermGroup | None = None,
) -> Fraction:
    """Reduce (s^m, s^m') to (s^gcd(m, m', q), 1) within S^I, then apply the closed form."""
    I = tuple(sorted(I))
    if I and not inst.admissible(I):
        return Fraction(0)
    stab = stab or _isotropy_group(inst, I)
    q = stab.order
    m, mp = stab.exponent_of(sigma), stab.exponent_of(sigma_prime)
    return chi_I_sigma_one(inst, I, stab.power(math.gcd(m, mp, q)))


def _stratum_chi(inst: Instance, I: tuple[int, ...], elements) -> int:
    """chi of (V_f^I) fixed by the given elements, via the fixed-space route."""
    fs = fixed_space(elements)
    comp_of = fs.component_of()
    if any(j not in comp_of for j in I):
        return 0
    inside = set(I)
    J = [c for c, comp in enumerate(fs.components) if comp.support[0] in inside]
    return stratum_euler(restrict_to_fixed(inst.E, fs), J)


def chi_I_pair_definitional(
    inst: Instance, I: Sequence[int], sigma: Permutation, sigma_prime: Permutation
) -> Fraction:
    """(1/|G|) sum over commuting (lambda, lambda') in G^2 of chi((V_f^I)^<g, h>)."""
    I = tuple(sorted(I))
    G = inst.G
    els = G.elements
    A = shift_matrix(sigma)
    Ap = shift_matrix(sigma_prime)
    rows = G.rows
    img_a = (rows @ A.T) % G.den  # A_sigma(lambda')
    img_ap = (rows @ Ap.T) % G.den  # A_sigma'(lambda)
    total = 0
    for i in range(len(els)):
        match = np.nonzero(~(img_a != img_ap[i]).any(axis=1))[0]
        for j in match:
            if not I:
                total -= 1
                continue
            lam = G._vector(rows[i])
            lamp = G._vector(rows[j])
            try:
                total += _stratum_chi(inst, I, [(lam, sigma), (lamp, sigma_prime)])
            except OracleInapplicable as exc:
                raise OracleInapplicable(f"{exc} at pair ({lam}, {sigma}), ({lamp}, {sigma_prime})") from None
    return Fraction(total, G.order)


@dataclass
class OrbitContribution:
    representative: tuple[int, ...]
    admissible: bool
    contribution: Fraction
    orbit_size: int = 1


@dataclass
class DualityVerdict:
    lhs: int
    rhs: int
    sign: int
    equal: bool


@dataclass
class EulerReport:
    name: str
    n: int
    reduced: int
    unreduced: int
    point_term: int
    relative: int
    per_orbit: list[OrbitContribution]
    pc_holds: bool
    oracle_value: int | str | None = None
    dual_report: "EulerReport | None" = None
    duality_verdict: DualityVerdict | None = None


def _pair_counts_by_gcd(q: int) -> Counter:
    return Counter(math.gcd(m, mp, q) for m in range(q) for mp in range(q))


def reduced_orbifold_euler(inst: Instance) -> EulerReport:
    total = Fraction(0)
    per_orbit = []
    for orb in subset_orbits(inst.S):
        I = orb.representative
        admissible = not I or inst.admissible(I)
        contrib = Fraction(0)
        if admissible:
            stab = orb.isotropy
            q = stab.order
            for g, count in sorted(_pair_counts_by_gcd(q).items()):
                contrib += count * chi_I_sigma_one(inst, I, stab.power(g))
            contrib /= q
        per_orbit.append(OrbitContribution(I, admissible, contrib, orb.orbit_size))
        total += contrib
    if total.denominator != 1:
        raise ArithmeticError(f"internal error: non-integral orbifold Euler characteristic {total}")
    reduced = int(total)
    point = point_orbifold_euler(inst.G, inst.S)
    return EulerReport(
        name=inst.name,
        n=inst.n,
        reduced=reduced,
        unreduced=reduced + point,
        point_term=point,
        relative=-reduced,
        per_orbit=per_orbit,
        pc_holds=parity_condition(inst.S),
    )


def point_orbifold_euler(G: FiniteSubgroup, S: CyclicPermGroup) -> int:
    """Number of conjugacy classes of G x| S: commuting pairs divided by |G x| S|."""
    pairs = 0
    rows = G.rows
    imgs = {s: _codes((rows @ shift_matrix(s).T) % G.den, G.den) for s in S.elements}
    for s in S.elements:
        for t in S.elements:
            if s * t != t * s:
                continue
            # (a, s), (b, t) commute iff A_t(a) == A_s(b)
            left = Counter(imgs[t].tolist())
            right = Counter(imgs[s].tolist())
            pairs += sum(c * right[v] for v, c in left.items())
    order = G.order * S.order
    if pairs % order:
        raise ArithmeticError(f"internal error: {pairs} commuting pairs not divisible by {order}")
    value = pairs // order
    if S.order == 1:
        assert value == G.order
    return value


def bhht_dual(inst: Instance) -> Instance:
    """(f~, G~ x| S) with f~ the transpose and G~ the dual subgroup."""
    Gt = dual_subgroup(inst.E, inst.G)
    name = inst.name[:-1] if inst.name.endswith("~") else (inst.name + "~" if inst.name else "")
    dual = make_instance(inst.E.T, Gt.generators, inst.S.generator, name)
    assert dual.G == Gt
    return dual


def verify_duality(inst: Instance, oracle: bool = False, cap: int = DEFAULT_ORACLE_CAP) -> EulerReport:
    report = reduced_orbifold_euler(inst)
    dual = bhht_dual(inst)
    dual_report = reduced_orbifold_euler(dual)
    if oracle:
        report.oracle_value = _oracle_value(inst, cap)
        dual_report.oracle_value = _oracle_value(dual, cap)
    sign = (-1) ** inst.n
    report.dual_report = dual_report
    report.duality_verdict = DualityVerdict(
        report.reduced, dual_report.reduced, sign, report.reduced == sign * dual_report.reduced
    )
    return report


def _oracle_value(inst: Instance, cap: int):
    try:
        return orbifold_euler_bruteforce(inst, cap)
    except OracleInapplicable:
        return "inapplicable"


# --------------------------------------------------------------------------
# brute-force oracle


@dataclass
class BruteForceResult:
    reduced: int
    unreduced: int
    point_term: int
    commuting_pairs: int


def bruteforce(inst: Instance, cap: int = DEFAULT_ORACLE_CAP) -> BruteForceResult:
    """Direct evaluation of the orbifold Euler characteristic over commuting pairs."""
    H = inst.group_order
    if H > cap:
        raise OracleCapExceeded(f"|G x| S| = {H} exceeds the oracle cap {cap}")
    n, G = inst.n, inst.G
    den = G.den
    rows = G.rows
    perms = inst.S.elements
    inv = {s: s.inverse().images for s in perms}
    shifted = {s: (rows @ shift_matrix(s).T) % den for s in perms}
    cache: dict = {}
    total = 0
    pairs = 0
    for s in perms:
        for t in perms:
            if s * t != t * s:
                continue
            # (a, s) and (b, t) commute iff A_t(a) = A_s(b)
            for i in range(len(rows)):
                target = shifted[t][i]
                for j in np.nonzero(~(shifted[s] != target).any(axis=1))[0]:
                    pairs += 1
                    fs = fixed_space_rows(n, den, [(rows[i], inv[s]), (rows[j], inv[t])])
                    chi = cache.get(fs)
                    if chi is None:
                        try:
                            chi = cache[fs] = torus_euler(restrict_to_fixed(inst.E, fs))
                        except OracleInapplicable as exc:
                            raise OracleInapplicable(
                                f"{exc} at pair ({G._vector(rows[i])}, {s}), ({G._vector(rows[j])}, {t})"
                            ) from None
                    total += chi
    if total % H or pairs % H:
        raise ArithmeticError("internal error: orbifold sums are not divisible by |G x| S|")
    unreduced = total // H
    point = pairs // H
    return BruteForceResult(unreduced - point, unreduced, point, pairs)


def orbifold_euler_bruteforce(inst: Instance, cap: int = DEFAULT_ORACLE_CAP) -> int:
    return bruteforce(inst, cap).reduced
