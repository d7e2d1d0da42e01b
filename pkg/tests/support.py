"""Shared builders for the test suite: group specs, random elements,
trivial-action modules, and random certified matrices."""

from __future__ import annotations

import random

from obkit.gmodules import GModule
from obkit.groupring import DiagonalGen, ElementaryGen, RingElement, build_invertible
from obkit.groups import FactorSpec, GroupSpec, multiply
from obkit.intlinalg import IntMatrix, QuotientPresentation


def f2_spec() -> GroupSpec:
    return GroupSpec((FactorSpec.free("x", "y"),))


def tu_spec() -> GroupSpec:
    return GroupSpec((FactorSpec.free("t"), FactorSpec.free("u")))


def zz2_spec() -> GroupSpec:
    return GroupSpec((FactorSpec.free("t"), FactorSpec.abelian(("s",), torsion=[2])))


def zz3_spec() -> GroupSpec:
    return GroupSpec((FactorSpec.free("t"), FactorSpec.abelian(("s",), torsion=[3])))


def zz6_spec() -> GroupSpec:
    return GroupSpec((FactorSpec.free("t"), FactorSpec.abelian(("s",), torsion=[6])))


def mixed_spec() -> GroupSpec:
    return GroupSpec((
        FactorSpec.free("x", "y"),
        FactorSpec.abelian(("a", "s"), free_rank=1, torsion=[4]),
    ))


def zmod_spec(*orders: int) -> GroupSpec:
    names = tuple(f"s{i + 1}" for i in range(len(orders))) if len(orders) > 1 else ("s",)
    return GroupSpec((FactorSpec.abelian(names, torsion=orders),))


def rand_element(rng: random.Random, spec: GroupSpec, max_syllables: int = 4):
    """A random normal-form element built from generator powers."""
    out = spec.identity()
    names = spec.generator_names()
    for _ in range(rng.randint(0, max_syllables)):
        name = rng.choice(names)
        fi, gi = spec.locate(name)
        factor = spec.factors[fi]
        if factor.kind == "abelian" and gi >= factor.free_rank:
            exp = rng.randint(1, factor.torsion[gi - factor.free_rank] - 1)
        else:
            exp = rng.choice([-2, -1, 1, 2])
        out = multiply(out, spec.generator(name, exp))
    return out


def trivial_module(spec: GroupSpec, rank: int, relations=(), name: str = "A") -> GModule:
    return GModule(spec, QuotientPresentation(rank, relations), name=name)


def rand_ring(rng: random.Random, spec: GroupSpec, support: int = 2) -> RingElement:
    out = RingElement.zero(spec)
    for _ in range(rng.randint(1, support)):
        g = rand_element(rng, spec, 2)
        out = out + RingElement.from_element(g, rng.choice([-2, -1, 1, 2]))
    return out


def rand_invertible(rng: random.Random, spec: GroupSpec, n: int, max_gens: int = 6,
                    max_support: int = 4):
    """A certified invertible matrix whose entries keep small support."""
    while True:
        gens = []
        for _ in range(rng.randint(1, max_gens)):
            if n == 1 or rng.random() < 0.3:
                g = rand_element(rng, spec, 2)
                gens.append(DiagonalGen(rng.randrange(n), rng.choice([1, -1]), g))
            else:
                i = rng.randrange(n)
                j = rng.randrange(n)
                while j == i:
                    j = rng.randrange(n)
                x = RingElement.from_element(rand_element(rng, spec, 2),
                                             rng.choice([-1, 1]))
                gens.append(ElementaryGen(i, j, x))
        pair = build_invertible(spec, n, gens)
        supports = [len(e.terms) for row in pair.matrix.entries for e in row]
        supports += [len(e.terms) for row in pair.inverse.entries for e in row]
        if max(supports) <= max_support:
            return pair


def rand_unimodular(rng: random.Random, n: int, steps: int = 6) -> IntMatrix:
    """A random determinant +-1 integer matrix from elementary operations."""
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i = rng.randrange(n)
        if n > 1:
            j = rng.randrange(n)
            while j == i:
                j = rng.randrange(n)
            c = rng.choice([-2, -1, 1, 2])
            rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
        if rng.random() < 0.3:
            rows[i] = [-a for a in rows[i]]
    return IntMatrix(rows)
