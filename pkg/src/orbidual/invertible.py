"""
Exponent matrices of invertible polynomials.

Row i of E is the exponent vector of the i-th monomial, column j belongs to
the variable x_j, and every coefficient is normalized to 1.  A polynomial is
accepted only if it is a Sebastiani-Thom sum of chains and loops (the
non-degenerate invertible polynomials); Fermat monomials are chains of
length one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import sympy

from .torsion import FiniteSubgroup, TorsionError, TorsionVector, span

__all__ = [
    "InvalidPolynomial",
    "ExponentMatrix",
    "AtomicBlock",
    "AtomicDecomposition",
    "Restriction",
    "validate_and_decompose",
    "normalize",
    "transpose",
    "diagonal_symmetry_group",
    "grading_operator",
    "restrict_support",
    "isotropy_subgroup",
    "dual_subgroup",
    "pairing",
]


class InvalidPolynomial(ValueError):
    pass


@dataclass(frozen=True)
class ExponentMatrix:
    rows: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(e) for e in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InvalidPolynomial("exponent matrix must be square and non-empty")
        if any(e < 0 for r in rows for e in r):
            raise InvalidPolynomial("exponents must be non-negative")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64)

    @property
    def T(self) -> "ExponentMatrix":
        return ExponentMatrix(zip(*self.rows))

    @property
    def det(self) -> int:
        return _det(self.rows)

    @property
    def det_abs(self) -> int:
        return abs(self.det)

    def __str__(self):
        terms = []
        for r in self.rows:
            mono = "*".join(
                f"x{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(r) if e
            )
            terms.append(mono or "1")
        return " + ".join(terms)


@lru_cache(maxsize=None)
def _det(rows) -> int:
    return int(sympy.Matrix(rows).det(method="bareiss"))


@lru_cache(maxsize=None)
def _inverse(rows) -> tuple[tuple[Fraction, ...], ...]:
    inv = sympy.Matrix(rows).inv()
    return tuple(
        tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(inv.cols))
        for i in range(inv.rows)
    )


@dataclass(frozen=True)
class AtomicBlock:
    """One chain or loop summand.

    ``variables[i]`` is the head variable of monomial ``monomials[i]`` with
    exponent ``exponents[i]``; the tail of monomial i is ``variables[i+1]``
    (cyclically for loops, absent for the last monomial of a chain).
    """

    kind: str  # "chain" | "loop"
    variables: tuple[int, ...]
    monomials: tuple[int, ...]
    exponents: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.variables)

    @property
    def det_abs(self) -> int:
        p = math.prod(self.exponents)
        if self.kind == "chain":
            return p
        return abs(p - (-1) ** self.length)

    def __str__(self):
        name = "Chain" if self.kind == "chain" else "Loop"
        return f"{name}{list(self.exponents)} on x" + ",x".join(
            str(v + 1) for v in self.variables
        )


@dataclass(frozen=True)
class AtomicDecomposition:
    matrix: ExponentMatrix
    blocks: tuple[AtomicBlock, ...]

    def block_of_variable(self) -> dict[int, int]:
        return {v: b for b, blk in enumerate(self.blocks) for v in blk.variables}

    def reassemble(self) -> ExponentMatrix:
        n = self.matrix.n
        E = [[0] * n for _ in range(n)]
        for blk in self.blocks:
            m = blk.length
            for i, (row, head, p) in enumerate(zip(blk.monomials, blk.variables, blk.exponents)):
                if blk.kind == "loop" or i + 1 < m:
                    tail = blk.variables[(i + 1) % m]
                    E[row][head] += p
                    E[row][tail] += 1
                else:
                    E[row][head] += p
        return ExponentMatrix(E)

    def head_ordered(self) -> ExponentMatrix:
        """E with rows permuted so that row j is the monomial headed by x_j.

        The BH transpose pairs monomial i with variable i, so it is only
        meaningful (and S-equivariant) in this row order.
        """
        row_of = {}
        for blk in self.blocks:
            for v, r in zip(blk.variables, blk.monomials):
                row_of[v] = r
        return ExponentMatrix(self.matrix.rows[row_of[v]] for v in range(self.matrix.n))

    def __str__(self):
        return " + ".join(str(b) for b in self.blocks)


def _orientations(E: ExponentMatrix):
    """Yield candidate head assignments (row -> (head, tail or None))."""
    options = []
    for i, r in enumerate(E.rows):
        support = [j for j, e in enumerate(r) if e]
        if len(support) == 1:
            options.append([(support[0], None)])
        elif len(support) == 2:
            j, k = support
            opts = []
            if r[k] == 1:
                opts.append((j, k))
            if r[j] == 1:
                opts.append((k, j))
            if not opts:
                raise InvalidPolynomial(
                    f"degenerate (not a chain/loop atom): monomial {i + 1} has no linear factor"
                )
            options.append(opts)
        else:
            raise InvalidPolynomial(
                f"degenerate (not a chain/loop atom): monomial {i + 1} involves "
                f"{len(support)} variables"
            )
    yield from itertools.product(*options)


def _try_decompose(E: ExponentMatrix, choice) -> tuple[AtomicBlock, ...] | None:
    n = E.n
    head_row = {}
    succ = {}
    for row, (head, tail) in enumerate(choice):
        if head in head_row:
            return None
        head_row[head] = row
        if tail is not None:
            succ[head] = tail
    if len(head_row) != n:
        return None
    pred = {}
    for h, t in succ.items():
        if t in pred:
            return None
        pred[t] = h

    blocks = []
    seen = set()
    # chains start at variables that are nobody's tail
    for start in range(n):
        if start in pred:
            continue
        path = [start]
        while path[-1] in succ:
            path.append(succ[path[-1]])
        seen.update(path)
        blocks.append(_block("chain", path, head_row, E))
    for start in range(n):
        if start in seen:
            continue
        path = [start]
        while succ[path[-1]] != start:
            path.append(succ[path[-1]])
        seen.update(path)
        blocks.append(_block("loop", path, head_row, E))
    blocks.sort(key=lambda b: min(b.variables))
    return tuple(blocks)


def _block(kind, path, head_row, E):
    rows = [head_row[v] for v in path]
    exps = [E.rows[r][v] for r, v in zip(rows, path)]
    return AtomicBlock(kind, tuple(path), tuple(rows), tuple(exps))


def validate_and_decompose(E: ExponentMatrix | Sequence[Sequence[int]]) -> AtomicDecomposition:
    """Check that E is a non-degenerate invertible polynomial and split it into atoms."""
    if not isinstance(E, ExponentMatrix):
        E = ExponentMatrix(E)
    if E.det == 0:
        raise InvalidPolynomial("not invertible: det E = 0")
    for choice in _orientations(E):
        blocks = _try_decompose(E, choice)
        if blocks is None:
            continue
        dec = AtomicDecomposition(E, blocks)
        # loops of length two with both exponents 1 have det 0; all other
        # chain/loop sums have det = product of the block determinants
        assert math.prod(b.det_abs for b in blocks) == E.det_abs, dec
        assert dec.reassemble() == E
        return dec
    raise InvalidPolynomial("degenerate: monomials do not form chains and loops")


def normalize(E: ExponentMatrix | Sequence[Sequence[int]]) -> AtomicDecomposition:
    """Validate E and return the decomposition of its head-ordered form."""
    dec = validate_and_decompose(E)
    F = dec.head_ordered()
    return dec if F == dec.matrix else validate_and_decompose(F)


def transpose(E: ExponentMatrix) -> ExponentMatrix:
    return E.T


@lru_cache(maxsize=256)
def diagonal_symmetry_group(E: ExponentMatrix) -> FiniteSubgroup:
    """G_f = {a in (Q/Z)^n : E a = 0 mod Z^n}, spanned by the columns of E^-1."""
    inv = _inverse(E.rows)
    cols = [TorsionVector(inv[i][j] for i in range(E.n)) for j in range(E.n)]
    gens = [c for c in cols if not c.is_zero()]
    G = span(E.n, gens)
    assert G.order == E.det_abs, (G.order, E.det_abs)
    return G


def grading_operator(E: ExponentMatrix) -> TorsionVector:
    """J = E^-1 (1, ..., 1)^T mod Z^n; every monomial has weight 1 under J."""
    inv = _inverse(E.rows)
    return TorsionVector(sum(row) for row in inv)


@dataclass(frozen=True)
class Restriction:
    admissible: bool
    sub_matrix: tuple[tuple[int, ...], ...] | None
    surviving_monomials: tuple[int, ...]


def restrict_support(E: ExponentMatrix, I: Iterable[int]) -> Restriction:
    """Restriction of f to C^I (coordinates outside I set to zero).

    I holds 0-based variable indices.  The restriction is admissible when it
    keeps exactly |I| monomials; then its square exponent matrix is returned.
    """
    I = sorted(set(I))
    inside = set(I)
    surviving = tuple(
        i for i, r in enumerate(E.rows) if all(j in inside for j, e in enumerate(r) if e)
    )
    if len(surviving) != len(I):
        return Restriction(False, None, surviving)
    sub = tuple(tuple(E.rows[i][j] for j in I) for i in surviving)
    if sub:
        assert _det(sub) != 0
    return Restriction(True, sub, surviving)


def isotropy_subgroup(G: FiniteSubgroup, I: Iterable[int]) -> FiniteSubgroup:
    """Elements of G acting trivially on the torus (C*)^I, i.e. a_j = 0 for j in I."""
    cols = sorted(set(I))
    if not cols:
        return G
    return G.filter(~G.rows[:, cols].any(axis=1))


def pairing(E: ExponentMatrix, b: TorsionVector, a: TorsionVector) -> Fraction:
    """frac(b^T E a): the pairing of G_{f~} with G_f."""
    Ea = [sum(e * x for e, x in zip(r, a.coords)) for r in E.rows]
    s = sum(x * y for x, y in zip(b.coords, Ea))
    return s - math.floor(s)


def dual_subgroup(E: ExponentMatrix, G: FiniteSubgroup) -> FiniteSubgroup:
    """Characters of G_f trivial on G, realized inside G_{f~} via frac(b^T E a)."""
    Gf = diagonal_symmetry_group(E)
    if not G.is_subgroup_of(Gf):
        raise TorsionError("G is not a subgroup of G_f")
    Gt = diagonal_symmetry_group(E.T)
    gens = G.generators
    if not gens:
        return Gt
    da = math.lcm(*(g.den for g in gens))
    A = np.array([[int(c * da) for c in g.coords] for g in gens], dtype=np.int64)
    B = Gt.rows
    db = Gt.den
    M = E.array
    bound = db * da * int(M.max()) * E.n * E.n
    if bound < 2**62:
        P = B @ M @ A.T
    else:
        P = B.astype(object) @ M.astype(object) @ A.T.astype(object)
    mask = ~((P % (da * db)) != 0).any(axis=1)
    dual = Gt.filter(np.asarray(mask, dtype=bool))
    assert dual.order * G.order == Gf.order
    return dual
