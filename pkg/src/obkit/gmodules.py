"""Coefficient modules: finitely presented abelian groups carrying a
group action through integer matrices, plus maps between them.

The action of a word is the product of its generators' matrices; inverse
letters act through an inverse-on-the-quotient matrix found by integer
linear solving, so matrices need not be unimodular over Z as long as
they are invertible modulo the relation lattice.
"""

from __future__ import annotations

from .errors import ContextError, DimensionError, RejectedError
from .groups import GroupElement, GroupSpec
from .intlinalg import IntMatrix, QuotientPresentation, solve

__all__ = [
    "GModule",
    "ModuleElement",
    "ModuleMap",
    "act",
    "validate_module",
    "apply_map",
    "check_equivariant",
]


class ModuleElement:
    """An element of a GModule; equality compares canonical coset coordinates."""

    __slots__ = ("module", "coords")

    def __init__(self, module: "GModule", coords):
        coords = tuple(int(x) for x in coords)
        if len(coords) != module.rank:
            raise DimensionError("coordinate length does not match module rank")
        self.module = module
        self.coords = coords

    def reduced(self) -> tuple:
        return self.module.presentation.reduce(self.coords)

    @property
    def is_zero(self) -> bool:
        return not any(self.reduced())

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        self._same(other)
        return ModuleElement(self.module, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return self + (-other)

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(self.module, [-a for a in self.coords])

    def __rmul__(self, n: int) -> "ModuleElement":
        return ModuleElement(self.module, [n * a for a in self.coords])

    def _same(self, other) -> None:
        if self.module is not other.module:
            raise ContextError("elements of different modules")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleElement):
            return NotImplemented
        return self.module is other.module and self.reduced() == other.reduced()

    def __hash__(self):
        return hash((id(self.module), self.reduced()))

    def __str__(self):
        red = self.reduced()
        if len(red) == 1:
            return str(red[0])
        return "(" + ",".join(str(x) for x in red) + ")"

    def __repr__(self):
        return f"ModuleElement({self})"


class GModule:
    """A finitely presented abelian group with the group acting by matrices.

    ``action`` maps generator names to k x k integer matrices; omitted
    generators act as the identity.  ``validate`` checks the module
    invariants and, on success, caches inverse matrices for every
    generator so that negative letters can act.
    """

    def __init__(self, spec: GroupSpec, presentation: QuotientPresentation,
                 action=None, elements=None, name: str = ""):
        self.spec = spec
        self.presentation = presentation
        self.name = name
        k = presentation.rank
        full = {}
        for gen in spec.generator_names():
            m = (action or {}).get(gen)
            if m is None:
                m = IntMatrix.identity(k)
            elif not isinstance(m, IntMatrix):
                m = IntMatrix(m)
            if m.rows != k or m.cols != k:
                raise DimensionError(f"action matrix for {gen!r} must be {k}x{k}")
            full[gen] = m
        for gen in (action or {}):
            if gen not in full:
                raise ValueError(f"action names unknown generator {gen!r}")
        self.action = full
        self.elements = {}
        for ename, coords in (elements or {}).items():
            self.elements[ename] = ModuleElement(self, coords)
        self._inverse = None
        self._validation = False
        self._trivial = None

    @property
    def rank(self) -> int:
        return self.presentation.rank

    def element(self, coords) -> ModuleElement:
        return ModuleElement(self, coords)

    def zero(self) -> ModuleElement:
        return ModuleElement(self, (0,) * self.rank)

    def reduce(self, coords) -> tuple:
        return self.presentation.reduce(coords)

    def _basis(self):
        k = self.rank
        return [tuple(1 if i == j else 0 for j in range(k)) for i in range(k)]

    @property
    def trivial_action(self) -> bool:
        """True when every generator acts as the identity on the quotient."""
        if self._trivial is None:
            self._trivial = all(
                self._acts_as_identity(m) for m in self.action.values()
            )
        return self._trivial

    def _acts_as_identity(self, m: IntMatrix) -> bool:
        return all(
            self.reduce(m.apply(e)) == self.reduce(e) for e in self._basis()
        )

    def _congruent(self, m1: IntMatrix, m2: IntMatrix) -> bool:
        return all(
            self.reduce(m1.apply(e)) == self.reduce(m2.apply(e)) for e in self._basis()
        )

    def _invert_on_quotient(self, m: IntMatrix) -> IntMatrix | None:
        """A matrix x with m @ x congruent to the identity, or None."""
        k = self.rank
        rel = self.relations_rows()
        sys_rows = [
            list(m.entries[i]) + [r[i] for r in rel] for i in range(k)
        ]
        sys = IntMatrix(sys_rows, cols=k + len(rel))
        cols = []
        for e in self._basis():
            w = solve(sys, e)
            if w is None:
                return None
            cols.append(w[:k])
        return IntMatrix([[cols[j][i] for j in range(k)] for i in range(k)])

    def relations_rows(self) -> list[tuple]:
        return [tuple(r) for r in self.presentation.relations.entries]

    def validate(self) -> str | None:
        """Check the module invariants; None when they hold.

        On the first violation returns a message naming the generator and
        the failed constraint.  Successful validation caches the inverse
        action matrices.
        """
        if self._validation is not False:
            return self._validation
        report = self._run_validation()
        self._validation = report
        return report

    def _run_validation(self) -> str | None:
        inverses = {}
        rel = self.relations_rows()
        for fi, factor in enumerate(self.spec.factors):
            for gi, gen in enumerate(factor.names):
                m = self.action[gen]
                for r in rel:
                    if not self.presentation.is_zero(m.apply(r)):
                        return f"action of {gen!r} does not preserve the relation lattice"
                inv = self._invert_on_quotient(m)
                if inv is None:
                    return f"action of {gen!r} is not invertible on the quotient"
                if not self._congruent_to_identity_pair(m, inv):
                    return f"action of {gen!r} has an inconsistent inverse"
                inverses[gen] = inv
                if factor.kind == "abelian" and gi >= factor.free_rank:
                    order = factor.torsion[gi - factor.free_rank]
                    if not self._acts_as_identity(_power(m, order)):
                        return (
                            f"action of {gen!r} violates the torsion constraint "
                            f"(order {order})"
                        )
            if factor.kind == "abelian" and factor.rank > 1:
                for i in range(factor.rank):
                    for j in range(i + 1, factor.rank):
                        a = self.action[factor.names[i]]
                        b = self.action[factor.names[j]]
                        if not self._congruent(a @ b, b @ a):
                            return (
                                f"actions of {factor.names[i]!r} and "
                                f"{factor.names[j]!r} do not commute on the quotient"
                            )
        self._inverse = inverses
        return None

    def _congruent_to_identity_pair(self, m: IntMatrix, inv: IntMatrix) -> bool:
        ident = IntMatrix.identity(self.rank)
        return self._congruent(m @ inv, ident) and self._congruent(inv @ m, ident)

    def _ensure_valid(self) -> None:
        report = self.validate()
        if report is not None:
            raise RejectedError(f"invalid module{' ' + self.name if self.name else ''}: {report}")

    def act_vec(self, g: GroupElement, coords) -> tuple:
        """Raw coordinates of g acting on coords (left action), unreduced."""
        if g.spec != self.spec:
            raise ContextError("element and module live over different groups")
        self._ensure_valid()
        letters = []
        for fi, payload in g.syllables:
            factor = self.spec.factors[fi]
            if factor.kind == "free":
                for x in payload:
                    letters.append((factor.names[abs(x) - 1], 1 if x > 0 else -1))
            else:
                for gi, e in enumerate(payload):
                    if e:
                        sign = 1 if e > 0 else -1
                        letters.extend([(factor.names[gi], sign)] * abs(e))
        v = tuple(coords)
        for name, sign in reversed(letters):
            m = self.action[name] if sign > 0 else self._inverse[name]
            v = m.apply(v)
        return v

    def act(self, g: GroupElement, a: ModuleElement) -> ModuleElement:
        if a.module is not self:
            raise ContextError("element belongs to a different module")
        return ModuleElement(self, self.reduce(self.act_vec(g, a.coords)))

    def __repr__(self):
        label = self.name or f"rank{self.rank}"
        return f"GModule({label}, invariants={self.presentation.group_invariants()})"


def _power(m: IntMatrix, n: int) -> IntMatrix:
    out = IntMatrix.identity(m.rows)
    for _ in range(n):
        out = out @ m
    return out


class ModuleMap:
    """An additive map between GModules given by an integer matrix."""

    def __init__(self, source: GModule, target: GModule, matrix, equivariant: bool = False,
                 name: str = ""):
        if source.spec != target.spec:
            raise ContextError("source and target modules live over different groups")
        self.source = source
        self.target = target
        self.name = name
        m = matrix if isinstance(matrix, IntMatrix) else IntMatrix(matrix)
        if m.rows != target.rank or m.cols != source.rank:
            raise DimensionError("map matrix must be target_rank x source_rank")
        self.matrix = m
        self.equivariant = equivariant

    def validate(self) -> str | None:
        """None when well-defined (and equivariant, if flagged)."""
        for r in self.source.relations_rows():
            if not self.target.presentation.is_zero(self.matrix.apply(r)):
                return "map does not send relations into relations"
        if self.equivariant and not check_equivariant(self):
            return "map is flagged equivariant but does not commute with the action"
        return None

    def __repr__(self):
        return f"ModuleMap({self.name or 'phi'})"


def act(g: GroupElement, a: ModuleElement) -> ModuleElement:
    return a.module.act(g, a)


def validate_module(mod: GModule) -> str | None:
    return mod.validate()


def apply_map(phi: ModuleMap, a: ModuleElement) -> ModuleElement:
    if a.module is not phi.source:
        raise ContextError("element is not in the map's source module")
    return ModuleElement(phi.target, phi.target.reduce(phi.matrix.apply(a.coords)))


def check_equivariant(phi: ModuleMap) -> bool:
    """True iff phi commutes with every generator action on the quotients."""
    phi.source._ensure_valid()
    phi.target._ensure_valid()
    for gen in phi.source.spec.generator_names():
        left = phi.matrix @ phi.source.action[gen]
        right = phi.target.action[gen] @ phi.matrix
        for e in phi.source._basis():
            if phi.target.reduce(left.apply(e)) != phi.target.reduce(right.apply(e)):
                return False
    return True
