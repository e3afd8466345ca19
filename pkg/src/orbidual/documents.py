"""
Instance and result documents (one JSON object per line) and result catalogs.

An instance document looks like::

    {"name": "swap13_24", "n": 5,
     "monomials": [[3,1,0,0,0], [0,3,1,0,0], ...],
     "group": {"generators": [{"den": 3, "num": [1,2,1,2,0]}, "J"]},
     "permutation": "(1 3)(2 4)"}

"J" stands for the grading operator of the instance's own polynomial.
Permutations use 1-based cycle notation; the identity may be omitted.
"""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from typing import Any, Iterable

from .engine import EulerReport, Instance, InvalidInstance, make_instance
from .invertible import ExponentMatrix, InvalidPolynomial, grading_operator
from .symmetry import FlipError, InvalidPermutation, NotPreserved, Permutation, parse_permutation
from .torsion import FiniteSubgroup, TorsionError, TorsionVector

__all__ = [
    "DocumentError",
    "CatalogConflict",
    "parse_instance",
    "load_instance",
    "instance_document",
    "vector_document",
    "canonical_form",
    "canonical_hash",
    "result_document",
    "catalog_merge",
    "dumps",
]


class DocumentError(ValueError):
    """Malformed document; the message names the offending field."""


class CatalogConflict(ValueError):
    def __init__(self, old: dict, new: dict):
        self.old, self.new = old, new
        super().__init__(f"conflicting results for hash {old.get('hash')}:\n  {dumps(old)}\n  {dumps(new)}")


def dumps(doc: dict) -> str:
    """Compact, key-sorted JSON: byte-stable for identical documents."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _require(doc: dict, key: str, kind, where: str = ""):
    if key not in doc:
        raise DocumentError(f"{where}missing field '{key}'")
    value = doc[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise DocumentError(f"{where}field '{key}' has the wrong type ({type(value).__name__})")
    return value


def _parse_generator(g: Any, i: int, E: ExponentMatrix) -> TorsionVector:
    where = f"group.generators[{i}]: "
    if g == "J":
        return grading_operator(E)
    if not isinstance(g, dict):
        raise DocumentError(f"{where}expected {{den, num}} or \"J\"")
    den = _require(g, "den", int, where)
    num = _require(g, "num", list, where)
    if den <= 0:
        raise DocumentError(f"{where}den must be positive")
    if len(num) != E.n or not all(isinstance(x, int) and not isinstance(x, bool) for x in num):
        raise DocumentError(f"{where}num must be a list of {E.n} integers")
    return TorsionVector.from_ints(den, num)


def parse_instance(doc: dict | str) -> Instance:
    """Build a validated Instance; every failure is a DocumentError or a validation error."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"not valid JSON: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DocumentError("instance document must be an object")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise DocumentError("field 'name' must be a string")
    n = _require(doc, "n", int)
    rows = _require(doc, "monomials", list)
    if len(rows) != n:
        raise DocumentError(f"monomials: expected {n} rows, got {len(rows)}")
    for i, r in enumerate(rows):
        if not isinstance(r, list) or len(r) != n or not all(
            isinstance(e, int) and not isinstance(e, bool) for e in r
        ):
            raise DocumentError(f"monomials[{i}]: expected a list of {n} integers")
    E = ExponentMatrix(rows)
    group = doc.get("group", {"generators": []})
    if not isinstance(group, dict):
        raise DocumentError("field 'group' must be an object")
    gens_doc = group.get("generators", [])
    if not isinstance(gens_doc, list):
        raise DocumentError("group.generators must be a list")
    perm_text = doc.get("permutation")
    if perm_text is None or perm_text == "":
        sigma = None
    elif isinstance(perm_text, str):
        sigma = parse_permutation(perm_text, n)
    elif isinstance(perm_text, list) and all(isinstance(t, str) for t in perm_text):
        sigma = cyclic_generator([parse_permutation(t, n) for t in perm_text], n)
    else:
        raise DocumentError("field 'permutation' must be a cycle-notation string")
    gens = [_parse_generator(g, i, E) for i, g in enumerate(gens_doc)]
    return make_instance(E, gens, sigma, name)


def cyclic_generator(perms: list[Permutation], n: int) -> Permutation:
    """A single generator of the group spanned by perms; non-cyclic groups are rejected."""
    group = {Permutation.identity(n)}
    frontier = list(group)
    while frontier:
        nxt = []
        for g in frontier:
            for p in perms:
                h = p * g
                if h not in group:
                    group.add(h)
                    nxt.append(h)
        frontier = nxt
    for g in sorted(group, key=lambda p: p.images):
        if g.order == len(group):
            return g
    raise InvalidInstance(
        f"permutation group of order {len(group)} is not cyclic: out of theorem scope"
    )


def load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_instance(text)


def vector_document(v: TorsionVector) -> dict:
    den, nums = v.to_pair()
    return {"den": den, "num": list(nums)}


def instance_document(inst: Instance) -> dict:
    doc = {
        "name": inst.name,
        "n": inst.n,
        "monomials": [list(r) for r in inst.E.rows],
        "group": {"generators": [vector_document(g) for g in inst.G.generators]},
    }
    if not inst.S.generator.is_identity():
        doc["permutation"] = str(inst.S.generator)
    return doc


def _canonical_generator(inst: Instance) -> Permutation:
    """Smallest generator of S (by image tuple), so <s> and <s^k> agree."""
    q = inst.S.order
    candidates = [inst.S.power(k) for k in range(1, q + 1) if math.gcd(k, q) == 1]
    return min(candidates, key=lambda p: p.images)


def canonical_form(inst: Instance) -> dict:
    """Name-free description of (f, G x| S) that does not depend on how it was written down.

    Monomials are in head order, G is given by its sorted element set and S
    by its smallest generator.
    """
    G: FiniteSubgroup = inst.G
    return {
        "monomials": [list(r) for r in inst.E.rows],
        "group": {"den": G.den, "elements": sorted(map(list, G.rows.tolist()))},
        "permutation": list(_canonical_generator(inst).images),
    }


def canonical_hash(inst: Instance) -> str:
    return hashlib.sha256(dumps(canonical_form(inst)).encode("utf-8")).hexdigest()


def _rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def result_document(
    inst: Instance,
    report: EulerReport,
    oracle_ran: bool = False,
    timings: dict | None = None,
    dual: Instance | None = None,
) -> dict:
    """Result document; the dual block and duality flag appear only when a verdict exists."""
    doc: dict[str, Any] = {
        "name": inst.name,
        "hash": canonical_hash(inst),
        "n": inst.n,
        "pc": report.pc_holds,
        "reduced": report.reduced,
        "unreduced": report.unreduced,
        "point_term": report.point_term,
        "relative": report.relative,
        "per_orbit": [
            {
                "representative": [j + 1 for j in c.representative],
                "orbit_size": c.orbit_size,
                "admissible": c.admissible,
                "contribution": _rational(c.contribution),
            }
            for c in report.per_orbit
        ],
    }
    if report.duality_verdict is not None:
        dr = report.dual_report
        v = report.duality_verdict
        doc["dual"] = {
            "generators": [vector_document(g) for g in dual.G.generators] if dual else [],
            "order": dual.G.order if dual else None,
            "reduced": dr.reduced,
            "unreduced": dr.unreduced,
        }
        doc["duality_equal"] = v.equal
        doc["duality_verdict"] = {"lhs": v.lhs, "rhs": v.rhs, "sign": v.sign, "equal": v.equal}
    oracle: dict[str, Any] = {"ran": oracle_ran}
    if oracle_ran:
        value = report.oracle_value
        oracle["value"] = value
        oracle["agrees"] = value == report.reduced
        if report.dual_report is not None:
            dv = report.dual_report.oracle_value
            oracle["dual_value"] = dv
            oracle["agrees"] = oracle["agrees"] and dv == report.dual_report.reduced
    doc["oracle"] = oracle
    if timings is not None:
        doc["timings"] = {k: round(v, 6) for k, v in timings.items()}
    return doc


# --------------------------------------------------------------------------
# catalogs

_NUMERIC = ("reduced", "unreduced", "point_term", "relative", "pc", "duality_equal", "dual", "oracle")


def _comparable(doc: dict) -> dict:
    return {k: doc.get(k) for k in _NUMERIC}


def catalog_merge(existing: Iterable[dict], new: Iterable[dict]) -> list[dict]:
    """Union of two result streams keyed by hash, sorted by hash.

    Identical records are deduplicated; records that disagree on any computed
    value raise CatalogConflict.  Error records (no hash) follow the keyed
    records in order, also deduplicated.
    """
    keyed: dict[str, dict] = {}
    errors: list[dict] = []
    for doc in list(existing) + list(new):
        h = doc.get("hash")
        if h is None:
            if doc not in errors:
                errors.append(doc)
            continue
        old = keyed.get(h)
        if old is None:
            keyed[h] = doc
        elif _comparable(old) != _comparable(doc):
            raise CatalogConflict(old, doc)
    return [keyed[h] for h in sorted(keyed)] + errors


# every way an input can be rejected before any computation starts
VALIDATION_ERRORS = (
    DocumentError,
    InvalidPolynomial,
    InvalidPermutation,
    TorsionError,
    NotPreserved,
    FlipError,
    InvalidInstance,
)
