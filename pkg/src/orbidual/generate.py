"""Random (f, G x| S) instances for duality and oracle sweeps."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .engine import Instance, make_instance
from .invertible import ExponentMatrix, diagonal_symmetry_group, grading_operator
from .symmetry import Permutation, act

__all__ = ["random_instance", "random_instances", "AtomSpec"]


@dataclass
class AtomSpec:
    kind: str
    exponents: list[int]
    copies: int
    shift: int  # loop rotation applied when the last copy wraps to the first


def _random_atoms(rng: random.Random, n: int, max_exp: int, symmetric: bool) -> list[AtomSpec]:
    atoms = []
    left = n
    while left:
        if left >= 2 and rng.random() < 0.4:
            m = rng.randint(2, min(4, left))
            kind = "loop"
        else:
            m = rng.randint(1, min(3, left))
            kind = "chain"
        copies = 1
        if symmetric and left // m >= 2 and rng.random() < 0.6:
            copies = rng.randint(2, left // m)
        shift = 0
        if kind == "loop":
            periods = [d for d in range(1, m + 1) if m % d == 0]
            ell = rng.choice(periods)
            base = [rng.randint(2, max_exp) for _ in range(ell)]
            exps = base * (m // ell)
            if symmetric and ell < m and rng.random() < 0.7:
                shift = ell * rng.randint(1, m // ell - 1)
        else:
            exps = [rng.randint(2, max_exp) for _ in range(m)]
        atoms.append(AtomSpec(kind, exps, copies, shift))
        left -= m * copies
    return atoms


def _assemble(atoms: list[AtomSpec], n: int):
    rows = []
    images = list(range(n))
    v = 0
    for atom in atoms:
        m = len(atom.exponents)
        base = [v + c * m for c in range(atom.copies)]
        for c, start in enumerate(base):
            for j, p in enumerate(atom.exponents):
                row = [0] * n
                row[start + j] += p
                if atom.kind == "loop":
                    row[start + (j + 1) % m] += 1
                elif j + 1 < m:
                    row[start + j + 1] += 1
                rows.append(row)
            for j in range(m):
                if c + 1 < atom.copies:
                    images[start + j] = base[c + 1] + j
                else:
                    images[start + j] = base[0] + (j + atom.shift) % m
        v += m * atom.copies
    return rows, images


def random_instance(
    rng: random.Random,
    max_n: int = 8,
    max_exp: int = 5,
    max_order: int = 5000,
    symmetric: bool = True,
    even: bool = True,
    group: str | None = None,
    max_group_order: int | None = None,
    nontrivial: bool = False,
    attempts: int = 1000,
) -> Instance:
    """Draw a random chain/loop polynomial with a permutation symmetry and an S-invariant G.

    ``group`` picks G: "trivial", "J", "full" or "random" (default: random choice).
    With ``nontrivial`` the generator of S is never the identity.
    """
    for _ in range(attempts):
        n = rng.randint(2 if nontrivial else 1, max_n)
        atoms = _random_atoms(rng, n, max_exp, symmetric)
        rows, images = _assemble(atoms, n)
        sigma = Permutation(tuple(images)) if symmetric else Permutation.identity(n)
        if even and sigma.sign != 1:
            continue
        if nontrivial and sigma.is_identity():
            continue
        E = ExponentMatrix(rows)
        if E.det_abs > max_order:
            continue
        # relabel variables and shuffle monomials
        pi = list(range(n))
        rng.shuffle(pi)
        order = list(range(n))
        rng.shuffle(order)
        new_rows = [[0] * n for _ in range(n)]
        for i, r in enumerate(rows):
            for j, e in enumerate(r):
                new_rows[order[i]][pi[j]] = e
        E = ExponentMatrix(new_rows)
        new_images = [0] * n
        for j in range(n):
            new_images[pi[j]] = pi[images[j]]
        sigma = Permutation(tuple(new_images)) if symmetric else Permutation.identity(n)

        gens = _random_generators(rng, E, sigma, group)
        inst = make_instance(E, gens, sigma, name=f"rand-n{n}")
        if max_group_order is not None and inst.group_order > max_group_order:
            continue
        return inst
    raise RuntimeError("could not draw an instance within the attempt budget")


def _random_generators(rng, E, sigma, group):
    Gf = diagonal_symmetry_group(E)
    J = grading_operator(E)
    kind = group or rng.choice(["trivial", "J", "full", "random", "random"])
    if kind == "trivial":
        return []
    if kind == "J":
        return [J]
    if kind == "full":
        return list(Gf.generators)
    gens = []
    els = Gf.elements
    for _ in range(rng.randint(1, 2)):
        a = els[rng.randrange(len(els))]
        b = a
        for _ in range(sigma.order):
            gens.append(b)
            b = act(sigma, b)
    if rng.random() < 0.5:
        gens.append(J)
    return gens


def random_instances(seed: int, count: int, **kwargs) -> list[Instance]:
    rng = random.Random(seed)
    return [random_instance(rng, **kwargs) for _ in range(count)]
