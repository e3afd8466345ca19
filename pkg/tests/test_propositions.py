import random

import pytest

from orbidual.generate import random_instance
from orbidual.propositions import (
    check_chain_swap,
    check_definitional,
    check_loop_rotation,
    chain_swap_instance,
    loop_rotation_instance,
    proposition_suite,
)


@pytest.mark.parametrize("fixture", ["swap13_24", "swap12_34"])
def test_suite_on_examples(fixture, request):
    inst = request.getfixturevalue(fixture)
    for check in proposition_suite(inst, definitional=True):
        assert check.passed, str(check)


@pytest.mark.parametrize("seed", range(6))
def test_suite_on_random_instances(seed):
    inst = random_instance(random.Random(seed), max_n=5, max_order=300, nontrivial=True)
    for check in proposition_suite(inst, definitional=inst.group_order <= 60):
        assert check.passed, f"{inst.E.rows} {inst.S.generator}: {check}"


@pytest.mark.parametrize("exponents, copies", [([2], 2), ([3], 3), ([2, 3], 2), ([2, 2, 3], 2), ([3, 2], 3)])
def test_chain_swap(exponents, copies):
    check = check_chain_swap(exponents, copies)
    assert check.passed, str(check)


@pytest.mark.parametrize(
    "period, k, s",
    [([2], 2, 1), ([3], 3, 1), ([2, 3], 2, 1), ([2], 4, 1), ([2], 4, 2), ([3, 2], 3, 2), ([2, 3, 2], 2, 1)],
)
def test_loop_rotation(period, k, s):
    check = check_loop_rotation(period, k, s)
    assert check.passed, str(check)


def test_constructed_instances_have_expected_shape():
    inst = chain_swap_instance([2, 3], 2)
    assert [b.kind for b in inst.dec.blocks] == ["chain", "chain"]
    assert inst.S.order == 2
    loop = loop_rotation_instance([2, 3], 3, 1)
    (blk,) = loop.dec.blocks
    assert blk.kind == "loop" and blk.length == 6
    assert [(a.ell, a.s, a.k) for a in loop.blocks.rotations() if a.power == 1] == [(2, 1, 3)]


def test_definitional_check_on_tiny_instance():
    inst = chain_swap_instance([2], 2)
    assert check_definitional(inst).passed
