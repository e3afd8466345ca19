from fractions import Fraction

import pytest

from conftest import EX_ROWS
from orbidual.engine import (
    InvalidInstance,
    OracleCapExceeded,
    bhht_dual,
    bruteforce,
    chi_I_pair,
    chi_I_pair_definitional,
    chi_I_sigma_one,
    make_instance,
    point_orbifold_euler,
    reduced_orbifold_euler,
    verify_duality,
)
from orbidual.invertible import ExponentMatrix, diagonal_symmetry_group, grading_operator
from orbidual.symmetry import CyclicPermGroup, NotPreserved, Permutation, parse_permutation
from orbidual.torsion import FiniteSubgroup, TorsionVector, span


def tv(den, *nums):
    return TorsionVector.from_ints(den, nums)


def fermat2(full=False):
    return make_instance([[2]], [tv(2, 1)] if full else [])


def test_make_instance_rejections():
    with pytest.raises(InvalidInstance, match="not a group of diagonal symmetries"):
        make_instance([[2]], [tv(3, 1)])
    with pytest.raises(InvalidInstance, match="not invariant"):
        make_instance([[3, 0], [0, 3]], [tv(3, 1, 0)], parse_permutation("(1 2)", 2))
    with pytest.raises(NotPreserved):
        make_instance([[2, 0], [0, 3]], [], parse_permutation("(1 2)", 2))


def test_chi_sigma_one_small_values():
    inst = fermat2()
    assert chi_I_sigma_one(inst, (0,), Permutation.identity(1)) == 2
    assert chi_I_sigma_one(inst, (), Permutation.identity(1)) == -1


def test_chi_pair_empty_set_counts_pairs():
    inst = fermat2(full=True)
    e = Permutation.identity(1)
    assert chi_I_pair_definitional(inst, (), e, e) == -2
    assert chi_I_pair(inst, (), e, e) == -2


def test_chi_pair_reduces_by_gcd(swap13_24):
    s = swap13_24.S.generator
    e = Permutation.identity(5)
    I = (0, 1, 2, 3, 4)
    assert chi_I_pair(swap13_24, I, s, s) == chi_I_sigma_one(swap13_24, I, s)
    assert chi_I_pair(swap13_24, I, e, e) == chi_I_sigma_one(swap13_24, I, e)


def test_closed_form_matches_definition_on_full_set(swap13_24):
    # oracle: sum over pairs (a, b) in G^2 of the fixed-fibre Euler characteristic
    s = swap13_24.S.generator
    I = (0, 1, 2, 3, 4)
    for sp in swap13_24.S.elements:
        assert chi_I_pair(swap13_24, I, s, sp) == chi_I_pair_definitional(swap13_24, I, s, sp)


@pytest.mark.parametrize("full, reduced", [(False, 1), (True, -1)])
def test_fermat_values(full, reduced):
    report = reduced_orbifold_euler(fermat2(full))
    assert report.reduced == reduced
    assert report.relative == -reduced
    assert report.unreduced == report.reduced + report.point_term
    assert bruteforce(fermat2(full)).reduced == reduced


def test_point_term():
    Z3 = span(1, [tv(3, 1)])
    assert point_orbifold_euler(Z3, CyclicPermGroup(Permutation.identity(1))) == 3
    assert point_orbifold_euler(FiniteSubgroup.trivial(1), CyclicPermGroup(Permutation.identity(1))) == 1


def test_point_term_example(swap13_24):
    # oracle: commuting pairs counted by brute force over the semidirect product
    assert point_orbifold_euler(swap13_24.G, swap13_24.S) == 45
    assert bruteforce(swap13_24, cap=100).point_term == 45


def test_example_values(swap13_24, swap12_34):
    r33, r34 = reduced_orbifold_euler(swap13_24), reduced_orbifold_euler(swap12_34)
    assert (r33.reduced, r33.unreduced, r33.point_term) == (-8, 37, 45)
    assert (r34.reduced, r34.unreduced, r34.point_term) == (16, 46, 30)
    assert sum(c.contribution for c in r33.per_orbit) == -8
    assert r33.pc_holds and r34.pc_holds


def test_dual_instance(swap13_24):
    dual = bhht_dual(swap13_24)
    assert dual.E == swap13_24.E
    assert dual.G == span(5, [tv(5, 1, 1, 4, 4, 0), tv(5, 1, 1, 1, 1, 1)])
    assert dual.S.generator == swap13_24.S.generator
    assert dual.name == "swap13_24~"
    assert bhht_dual(dual).same_as(swap13_24)
    assert bhht_dual(dual).name == "swap13_24"


def test_fermat_dual():
    dual = bhht_dual(fermat2(full=True))
    assert dual.G.order == 1
    report = verify_duality(fermat2())
    v = report.duality_verdict
    assert (v.lhs, v.rhs, v.sign, v.equal) == (1, -1, -1, True)


def test_verify_duality_with_oracle(swap12_34):
    report = verify_duality(swap12_34, oracle=True)
    assert report.duality_verdict.equal
    assert report.oracle_value == 16
    assert report.dual_report.oracle_value == -16


def test_oracle_cap(swap13_24):
    with pytest.raises(OracleCapExceeded):
        bruteforce(swap13_24, cap=10)


def test_odd_symmetry_can_break_duality():
    # x^3 + y^3 with the swap: no parity condition, no claim
    inst = make_instance([[3, 0], [0, 3]], [], parse_permutation("(1 2)", 2))
    report = verify_duality(inst)
    assert not report.pc_holds
    assert report.reduced == bruteforce(inst).reduced
    assert report.dual_report.reduced == bruteforce(bhht_dual(inst)).reduced
