"""
Enumeration checks of the structural identities the closed form rests on.

Each check returns a `Check`; none of them raise on a mathematical failure,
so a caller can report every outcome.  All checks are exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .engine import Instance, chi_I_pair, chi_I_pair_definitional, make_instance
from .fixed import fixed_space_rows, restrict_to_fixed, stratum_euler
from .invertible import diagonal_symmetry_group, dual_subgroup, isotropy_subgroup, restrict_support
from .symmetry import Permutation, cycle_matrix, shift_matrix, subset_orbits
from .torsion import FiniteSubgroup, combine, isin_rows, map_subgroup

__all__ = [
    "Check",
    "check_ker_c_equals_im_a",
    "check_fixed_points",
    "check_dual_kernels",
    "check_dual_isotropy",
    "check_admissibility_duality",
    "check_dual_order",
    "check_definitional",
    "proposition_suite",
    "check_chain_swap",
    "check_loop_rotation",
    "chain_swap_instance",
    "loop_rotation_instance",
]


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def __str__(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}" + (f": {self.detail}" if self.detail else "")


def _all_subsets(n):
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)


def ker_cycle(Gf: FiniteSubgroup, sigma: Permutation) -> FiniteSubgroup:
    return map_subgroup(cycle_matrix(sigma), Gf, "kernel")


def check_ker_c_equals_im_a(inst: Instance) -> Check:
    bad = []
    for sigma in inst.S.elements:
        if ker_cycle(inst.Gf, sigma) != inst.im_shift(sigma):
            bad.append(str(sigma))
    return Check("Ker C = Im A", not bad, f"fails for {', '.join(bad)}" if bad else f"{inst.S.order} elements")


def check_fixed_points(inst: Instance) -> tuple[Check, Check]:
    """Fixed-point criterion and the fixed-fibre Euler value, for all a in G_f.

    Runs over every nonempty admissible I and every sigma in S stabilizing I.
    The fixed torus is computed by solving the fixed-point equations; the
    prediction uses only subgroup arithmetic.
    """
    n, Gf, E = inst.n, inst.Gf, inst.E
    rows, den = Gf.rows, Gf.den
    crit_bad, value_bad, tested = [], [], 0
    for I in _all_subsets(n):
        if not I or not restrict_support(E, I).admissible:
            continue
        inside = frozenset(I)
        iso = inst.isotropy(I)
        for sigma in inst.S.elements:
            if sigma.image_of_set(I) != inside:
                continue
            predicted = combine(ker_cycle(Gf, sigma), iso, "sum")
            member = isin_rows(rows, predicted.rows_over(den), den)
            ker = inst.ker_shift(sigma)
            ker_iso = combine(ker, iso, "intersection")
            d = sum(1 for c in sigma.cycles if set(c) <= inside)
            expected = (-1) ** ((d - 1) % 2) * Fraction(ker.order, ker_iso.order)
            inv = sigma.inverse().images
            seen = {}
            for idx in range(len(rows)):
                key = tuple(rows[idx, list(I)])
                if key not in seen:
                    fs = fixed_space_rows(n, den, [(rows[idx], inv)])
                    comp_of = fs.component_of()
                    nonempty = all(j in comp_of for j in I)
                    chi = None
                    if nonempty:
                        J = [c for c, comp in enumerate(fs.components) if comp.support[0] in inside]
                        chi = stratum_euler(restrict_to_fixed(E, fs), J)
                    seen[key] = (nonempty, chi)
                nonempty, chi = seen[key]
                tested += 1
                if nonempty != bool(member[idx]):
                    crit_bad.append((I, str(sigma), str(Gf._vector(rows[idx]))))
                if nonempty and chi != expected:
                    value_bad.append((I, str(sigma), chi, expected))
    return (
        Check("fixed-point criterion", not crit_bad, f"{len(crit_bad)} failures" if crit_bad else f"{tested} cases"),
        Check("fixed-fibre Euler value", not value_bad, f"{value_bad[:3]}" if value_bad else f"{tested} cases"),
    )


def check_dual_kernels(inst: Instance) -> Check:
    """|Ker A| = |Ker A*|, and Ker A, Im A are dual to Im A*, Ker A*."""
    Et = inst.E.T
    Gft = diagonal_symmetry_group(Et)
    bad = []
    for sigma in inst.S.elements:
        ker, im = inst.ker_shift(sigma), inst.im_shift(sigma)
        kert = map_subgroup(shift_matrix(sigma), Gft, "kernel")
        imt = map_subgroup(shift_matrix(sigma), Gft, "image")
        if ker.order != kert.order:
            bad.append(f"|Ker A| for {sigma}")
        if dual_subgroup(inst.E, ker) != imt:
            bad.append(f"dual(Ker A) for {sigma}")
        if dual_subgroup(inst.E, im) != kert:
            bad.append(f"dual(Im A) for {sigma}")
    return Check("shift-map duality", not bad, "; ".join(bad))


def check_dual_isotropy(inst: Instance) -> Check:
    """Over admissible I only; for non-admissible I the identity fails in general."""
    Gft = diagonal_symmetry_group(inst.E.T)
    bad = []
    count = 0
    for I in _all_subsets(inst.n):
        if not inst.admissible(I):
            continue
        comp = tuple(j for j in range(inst.n) if j not in I)
        count += 1
        if dual_subgroup(inst.E, inst.isotropy(I)) != isotropy_subgroup(Gft, comp):
            bad.append(I)
    return Check("dual(G_f^I) = G_f~^(complement)", not bad, f"fails for {bad[:3]}" if bad else f"{count} subsets")


def check_admissibility_duality(inst: Instance) -> Check:
    bad = []
    for I in _all_subsets(inst.n):
        comp = tuple(j for j in range(inst.n) if j not in I)
        if restrict_support(inst.E, I).admissible != restrict_support(inst.E.T, comp).admissible:
            bad.append(I)
    return Check("admissibility duality", not bad, f"fails for {bad[:3]}" if bad else "")


def check_dual_order(inst: Instance) -> Check:
    Gt = dual_subgroup(inst.E, inst.G)
    ok = Gt.order * inst.G.order == inst.Gf.order
    return Check("|G~| = |G_f|/|G|", ok, f"{Gt.order} * {inst.G.order} vs {inst.Gf.order}")


def check_definitional(inst: Instance) -> Check:
    """Closed form vs. the defining pair sum, for every orbit and every (sigma, sigma')."""
    bad = []
    cases = 0
    for orb in subset_orbits(inst.S):
        I = orb.representative
        if I and not inst.admissible(I):
            continue
        stab = orb.isotropy
        for s in stab.elements:
            for t in stab.elements:
                cases += 1
                closed = chi_I_pair(inst, I, s, t, stab)
                direct = chi_I_pair_definitional(inst, I, s, t)
                if closed != direct:
                    bad.append((I, str(s), str(t), closed, direct))
                # first-argument reduction (s, t) -> (s, s t^-1)
                if chi_I_pair_definitional(inst, I, s, s * t.inverse()) != direct:
                    bad.append((I, str(s), str(t), "reduction"))
    return Check("closed form = definitional sum", not bad, f"{bad[:3]}" if bad else f"{cases} cases")


def proposition_suite(inst: Instance, definitional: bool = False) -> list[Check]:
    checks = [check_ker_c_equals_im_a(inst)]
    checks.extend(check_fixed_points(inst))
    checks.append(check_dual_kernels(inst))
    checks.append(check_dual_isotropy(inst))
    checks.append(check_admissibility_duality(inst))
    checks.append(check_dual_order(inst))
    if definitional:
        checks.append(check_definitional(inst))
    return checks


# --------------------------------------------------------------------------
# constructed families with known subgroup orders


def chain_swap_instance(exponents, copies: int) -> Instance:
    """N copies of one chain, cyclically permuted by sigma: x_{i,j} -> x_{i+1,j}."""
    m = len(exponents)
    n = m * copies
    rows = []
    for c in range(copies):
        for j, p in enumerate(exponents):
            row = [0] * n
            row[c * m + j] = p
            if j + 1 < m:
                row[c * m + j + 1] = 1
            rows.append(row)
    images = [((c + 1) % copies) * m + j for c in range(copies) for j in range(m)]
    return make_instance(rows, [], Permutation(tuple(images)), f"chain{list(exponents)}x{copies}")


def loop_rotation_instance(period, k: int, s: int) -> Instance:
    """One loop with l-periodic exponents (l = len(period)), rotated by s*l."""
    ell = len(period)
    m = ell * k
    exps = list(period) * k
    rows = []
    for j, p in enumerate(exps):
        row = [0] * m
        row[j] += p
        row[(j + 1) % m] += 1
        rows.append(row)
    images = [(j + s * ell) % m for j in range(m)]
    return make_instance(rows, [], Permutation(tuple(images)), f"loop{list(period)}^{k} rot {s}")


def check_chain_swap(exponents, copies: int) -> Check:
    """|Ker C_sigma| = |G_{f_1}|^(N-1) for N cyclically swapped copies of one chain."""
    inst = chain_swap_instance(exponents, copies)
    sigma = inst.S.power(1)
    got = ker_cycle(inst.Gf, sigma).order
    want = math.prod(exponents) ** (copies - 1)
    return Check(f"chain {list(exponents)} x{copies}: |Ker C|", got == want, f"{got} vs {want}")


def check_loop_rotation(period, k: int, s: int) -> Check:
    """|Ker A_sigma| = P - (-1)^l for an l-periodic loop rotated by a multiple of l."""
    inst = loop_rotation_instance(period, k, s)
    sigma = inst.S.power(1)
    got = inst.ker_shift(sigma).order
    # sigma generates rotation by gcd(s, k) * l, so that is the period it sees
    g = math.gcd(s, k)
    want = math.prod(period) ** g - (-1) ** (len(period) * g)
    return Check(f"loop {list(period)}^{k} rot {s}: |Ker A|", got == want, f"{got} vs {want}")
