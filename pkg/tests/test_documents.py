import json

import pytest

from conftest import EX_ROWS
from orbidual.documents import (
    CatalogConflict,
    DocumentError,
    VALIDATION_ERRORS,
    canonical_form,
    canonical_hash,
    catalog_merge,
    dumps,
    instance_document,
    parse_instance,
)
from orbidual.engine import InvalidInstance, bhht_dual


def ex_doc(gens=None, perm="(1 3)(2 4)", rows=None):
    return {
        "name": "swap13_24",
        "n": 5,
        "monomials": rows or EX_ROWS,
        "group": {"generators": gens if gens is not None else [
            {"den": 3, "num": [1, 2, 0, 0, 0]},
            {"den": 3, "num": [0, 0, 1, 2, 0]},
            "J",
        ]},
        "permutation": perm,
    }


def test_parse_example(swap13_24):
    inst = parse_instance(json.dumps(ex_doc()))
    assert inst.same_as(swap13_24)
    assert inst.name == "swap13_24"


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d.pop("n"), "missing field 'n'"),
        (lambda d: d.update(n="5"), "wrong type"),
        (lambda d: d.update(monomials=EX_ROWS[:4]), "expected 5 rows"),
        (lambda d: d["monomials"].__setitem__(0, [4, 1, 0]), r"monomials\[0\]"),
        (lambda d: d["group"]["generators"].append({"den": 3}), r"generators\[3\]: missing field 'num'"),
        (lambda d: d["group"]["generators"].append({"den": 0, "num": [0] * 5}), "den must be positive"),
        (lambda d: d["group"]["generators"].append("K"), r"generators\[3\]"),
        (lambda d: d.update(permutation=5), "permutation"),
    ],
)
def test_parse_errors_name_the_field(mutate, message):
    doc = json.loads(json.dumps(ex_doc()))
    mutate(doc)
    with pytest.raises(DocumentError, match=message):
        parse_instance(doc)


def test_parse_bad_json():
    with pytest.raises(DocumentError, match="line 1 column"):
        parse_instance('{"n": 1,')


def test_validation_errors_are_grouped():
    with pytest.raises(VALIDATION_ERRORS, match="degenerate"):
        parse_instance({"n": 2, "monomials": [[4, 0], [2, 2]]})
    with pytest.raises(VALIDATION_ERRORS, match="not a group of diagonal symmetries"):
        parse_instance({"n": 1, "monomials": [[2]], "group": {"generators": [{"den": 3, "num": [1]}]}})


def test_non_cyclic_permutation_group_rejected():
    doc = {"n": 4, "monomials": [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]],
           "permutation": ["(1 2)", "(3 4)"]}
    with pytest.raises(InvalidInstance, match="not cyclic"):
        parse_instance(doc)
    doc["permutation"] = ["(1 2)(3 4)", "(1 2)(3 4)"]
    assert parse_instance(doc).S.order == 2


def test_round_trip(swap13_24):
    again = parse_instance(dumps(instance_document(swap13_24)))
    assert again.same_as(swap13_24)
    assert canonical_form(again) == canonical_form(swap13_24)


def test_hash_ignores_presentation(swap13_24):
    h = canonical_hash(swap13_24)
    gens = ex_doc()["group"]["generators"]
    assert canonical_hash(parse_instance(ex_doc(gens=gens[::-1]))) == h
    # same group from a different generating set, rows listed in another order
    other = ex_doc(gens=[{"den": 15, "num": [5, 10, 0, 0, 0]}, {"den": 3, "num": [0, 0, 1, 2, 0]}, "J"],
                   rows=EX_ROWS[::-1])
    assert canonical_hash(parse_instance(other)) == h
    assert canonical_hash(swap13_24) == h


def test_hash_distinguishes_dual(swap13_24):
    assert canonical_hash(bhht_dual(swap13_24)) != canonical_hash(swap13_24)


def test_hash_ignores_choice_of_generator():
    doc = {"n": 3, "monomials": [[2, 0, 0], [0, 2, 0], [0, 0, 2]]}
    a = parse_instance(dict(doc, permutation="(1 2 3)"))
    b = parse_instance(dict(doc, permutation="(1 3 2)"))
    assert canonical_hash(a) == canonical_hash(b)


def rec(h, reduced):
    return {"hash": h, "name": h, "reduced": reduced, "unreduced": reduced + 1}


def test_catalog_merge():
    assert catalog_merge([rec("b", 1)], [rec("a", 2)]) == [rec("a", 2), rec("b", 1)]
    assert catalog_merge([rec("a", 2)], [rec("a", 2)]) == [rec("a", 2)]
    with pytest.raises(CatalogConflict) as info:
        catalog_merge([rec("a", 2)], [rec("a", 3)])
    assert '"reduced":2' in str(info.value) and '"reduced":3' in str(info.value)


def test_catalog_merge_keeps_error_records():
    err = {"line": 2, "error": "degenerate", "exit": 2}
    assert catalog_merge([rec("a", 1), err], [err]) == [rec("a", 1), err]
