import itertools
from fractions import Fraction

import pytest

from conftest import EX_ROWS
from orbidual.invertible import ExponentMatrix, normalize
from orbidual.symmetry import (
    CyclicPermGroup,
    FlipError,
    InvalidPermutation,
    NotPreserved,
    Permutation,
    act,
    check_preserves,
    classify_block_actions,
    cycle_map,
    is_invariant_subgroup,
    parity_condition,
    parse_permutation,
    shift_map,
    subset_orbits,
)
from orbidual.torsion import TorsionVector, span


def tv(den, *nums):
    return TorsionVector.from_ints(den, nums)


def test_parse_permutation():
    p = parse_permutation("(1 3)(2 4)", 5)
    assert [p(j) + 1 for j in range(5)] == [3, 4, 1, 2, 5]
    assert parse_permutation("", 3).is_identity()
    assert str(p) == "(1 3)(2 4)"
    assert str(Permutation.identity(2)) == "()"


@pytest.mark.parametrize("text", ["(1 2 2)", "(1 4)", "(1 2", "1 2", "(a b)", "(1 2)(2 3)"])
def test_parse_permutation_errors(text):
    with pytest.raises(InvalidPermutation):
        parse_permutation(text, 3)


def test_permutation_algebra():
    s = parse_permutation("(1 2 3)", 4)
    assert s.order == 3
    assert s**3 == Permutation.identity(4)
    assert s * s.inverse() == Permutation.identity(4)
    assert s.sign == 1
    assert parse_permutation("(1 2)", 4).sign == -1
    S = CyclicPermGroup(s)
    assert S.order == 3 and len(S.elements) == 3
    assert S.exponent_of(s**2) == 2


def test_check_preserves():
    E = ExponentMatrix(EX_ROWS)
    tau = check_preserves(E, parse_permutation("(1 3)(2 4)", 5))
    assert tau == parse_permutation("(1 3)(2 4)", 5)
    assert check_preserves(E, Permutation.identity(5)).is_identity()
    with pytest.raises(NotPreserved):
        check_preserves(ExponentMatrix([[2, 0], [0, 3]]), parse_permutation("(1 2)", 2))


def test_act():
    s = parse_permutation("(1 2 3)", 3)
    assert act(s, tv(5, 1, 2, 3)) == tv(5, 3, 1, 2)
    assert act(Permutation.identity(3), tv(5, 1, 2, 3)) == tv(5, 1, 2, 3)


def test_invariant_subgroup():
    J = tv(5, 1, 1, 1, 1, 1)
    assert is_invariant_subgroup(parse_permutation("(1 3)(2 4)", 5), span(5, [J]))
    assert not is_invariant_subgroup(parse_permutation("(1 2)", 2), span(2, [tv(3, 1, 0)]))


def test_cycle_map():
    assert cycle_map(parse_permutation("(1 2)", 2), tv(3, 1, 2)) == [0]
    a = tv(3, 1, 2, 1)
    assert cycle_map(Permutation.identity(3), a) == list(a.coords)
    assert cycle_map(parse_permutation("(1 2)", 3), tv(4, 1, 1, 2)) == [Fraction(1, 2), Fraction(1, 2)]


def test_shift_map():
    assert shift_map(Permutation.identity(3), tv(5, 1, 2, 3)).is_zero()
    assert shift_map(parse_permutation("(1 2 3)", 3), tv(5, 1, 2, 3)) == tv(5, 3, 1, 1)


def test_parity_condition():
    assert parity_condition(CyclicPermGroup(parse_permutation("(1 3)(2 4)", 5)))
    assert not parity_condition(CyclicPermGroup(parse_permutation("(1 2)", 2)))
    assert parity_condition(CyclicPermGroup(Permutation.identity(3)))


def brute_orbits(sigma, n):
    seen, orbits = set(), []
    for k in range(n + 1):
        for I in itertools.combinations(range(n), k):
            if frozenset(I) in seen:
                continue
            orb, cur = set(), frozenset(I)
            while cur not in orb:
                orb.add(cur)
                cur = sigma.image_of_set(cur)
            seen |= orb
            orbits.append(orb)
    return orbits


@pytest.mark.parametrize("perm, n", [("", 2), ("(1 2)", 2), ("(1 3)(2 4)", 5), ("(1 2 3)(4 5 6)", 6), ("(1 2 3 4)", 5)])
def test_subset_orbits_match_enumeration(perm, n):
    sigma = parse_permutation(perm, n)
    S = CyclicPermGroup(sigma)
    orbits = subset_orbits(S)
    expected = brute_orbits(sigma, n)
    assert len(orbits) == len(expected)
    assert sum(o.orbit_size for o in orbits) == 2**n
    for o in orbits:
        assert o.orbit_size * o.isotropy.order == S.order
        assert o.representative == min(o.members)


def test_subset_orbit_examples():
    assert [o.orbit_size for o in subset_orbits(CyclicPermGroup(Permutation.identity(2)))] == [1, 1, 1, 1]
    orbits = subset_orbits(CyclicPermGroup(parse_permutation("(1 2)", 2)))
    assert [(o.representative, o.isotropy.order) for o in orbits] == [((), 2), ((0,), 1), ((0, 1), 2)]
    # Burnside: (32 + 2^3) / 2 subsets up to the swap
    assert len(subset_orbits(CyclicPermGroup(parse_permutation("(1 3)(2 4)", 5)))) == 20


def test_block_actions():
    dec = normalize(EX_ROWS)
    S = CyclicPermGroup(parse_permutation("(1 3)(2 4)", 5))
    assert classify_block_actions(dec, S).rotations() == []
    loop3 = normalize([[2, 1, 0], [0, 2, 1], [1, 0, 2]])
    rot = classify_block_actions(loop3, CyclicPermGroup(parse_permutation("(1 2 3)", 3))).rotations()
    assert [(a.ell, a.k) for a in rot if a.power == 1] == [(1, 3)]


def test_flip_rejected():
    loop = normalize([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    with pytest.raises(FlipError, match="flip"):
        classify_block_actions(loop, CyclicPermGroup(parse_permutation("(2 3)", 3)))
