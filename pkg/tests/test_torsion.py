from fractions import Fraction

import numpy as np
import pytest

from orbidual.invertible import ExponentMatrix, diagonal_symmetry_group
from orbidual.symmetry import Permutation, shift_map
from orbidual.torsion import FiniteSubgroup, TorsionError, TorsionVector, combine, map_subgroup, span


def tv(den, *nums):
    return TorsionVector.from_ints(den, nums)


def as_set(G):
    return {v.coords for v in G.elements}


def test_vector_reduces_into_unit_interval():
    v = TorsionVector([Fraction(5, 3), Fraction(-1, 4)])
    assert v.coords == (Fraction(2, 3), Fraction(3, 4))
    assert v.den == 12
    assert v.to_pair() == (12, [8, 9])


def test_vector_arithmetic():
    a, b = tv(3, 1, 2), tv(2, 1, 1)
    assert (a + b).coords == (Fraction(5, 6), Fraction(1, 6))
    assert (a - a).is_zero()
    assert (-a).coords == (Fraction(2, 3), Fraction(1, 3))
    assert (a * 3).is_zero()
    assert str(tv(5, 1, 1, 4, 4, 0)) == "1/5(1,1,4,4,0)"
    assert str(TorsionVector.zero(2)) == "0"


def test_vector_errors():
    with pytest.raises(TorsionError):
        TorsionVector([])
    with pytest.raises(TorsionError):
        tv(0, 1)
    with pytest.raises(TorsionError):
        tv(2, 1) + tv(2, 1, 1)


@pytest.mark.parametrize(
    "n, gens, expected",
    [
        (1, [], {(0,)}),
        (1, [tv(3, 1)], {(0,), (Fraction(1, 3),), (Fraction(2, 3),)}),
        (2, [tv(2, 1, 1)], {(0, 0), (Fraction(1, 2), Fraction(1, 2))}),
    ],
)
def test_span_examples(n, gens, expected):
    G = span(n, gens)
    assert as_set(G) == {tuple(Fraction(c) for c in e) for e in expected}
    assert G.order == len(expected)


def test_span_rejects_wrong_dimension():
    with pytest.raises(TorsionError):
        span(2, [tv(3, 1)])


def test_combine_coprime():
    A, B = span(1, [tv(2, 1)]), span(1, [tv(3, 1)])
    assert combine(A, B, "sum").order == 6
    assert combine(A, B, "intersection") == FiniteSubgroup.trivial(1)
    assert combine(A, A, "sum") == A
    with pytest.raises(ValueError):
        combine(A, B, "product")


def test_map_subgroup_examples():
    Z4 = span(1, [tv(4, 1)])
    assert map_subgroup(np.eye(1, dtype=np.int64), Z4, "kernel") == FiniteSubgroup.trivial(1)
    assert map_subgroup(np.array([[2]]), Z4, "image") == span(1, [tv(2, 1)])
    assert map_subgroup(lambda v: v * 2, Z4, "image") == span(1, [tv(2, 1)])


def test_shift_kernel_on_loop_is_diagonal_part():
    # oracle: enumerate G_f and keep the elements with equal coordinates
    Gf = diagonal_symmetry_group(ExponentMatrix([[4, 1], [1, 4]]))
    sigma = Permutation((1, 0))
    ker = map_subgroup(lambda a: shift_map(sigma, a), Gf, "kernel")
    assert as_set(ker) == {e.coords for e in Gf.elements if e.coords[0] == e.coords[1]}
    assert ker.order == 5  # P - (-1)^l with P = 4, l = 1


def test_map_subgroup_rejects_non_homomorphism():
    Z4 = span(1, [tv(4, 1)])
    with pytest.raises(TorsionError):
        map_subgroup(lambda v: v + tv(4, 1), Z4, "image")


def test_subgroup_membership_and_order():
    G = span(2, [tv(6, 1, 3)])
    assert G.order == 6
    assert tv(2, 1, 1) in G
    assert tv(2, 1, 0) not in G
    assert span(2, [tv(2, 1, 1)]).is_subgroup_of(G)
    # elements come out in a canonical order starting with 0
    assert G.elements[0].is_zero()
    assert list(G.elements) == sorted(G.elements, key=TorsionVector.sort_key)


def test_subgroup_equality_ignores_generators():
    assert span(1, [tv(6, 1)]) == span(1, [tv(2, 1), tv(3, 1)])
    assert hash(span(1, [tv(6, 1)])) == hash(span(1, [tv(6, 5)]))
