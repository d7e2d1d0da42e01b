"""Arithmetic in the integral group ring Z[G] and square matrices over it.

Matrix inverses are never computed: invertible matrices are built from
elementary and diagonal-unit generators, which invert symbolically, and
the resulting pair is verified by multiplication on construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContextError, DimensionError, InternalError
from .groups import GroupElement, GroupSpec, element_sort_key, inverse, multiply

__all__ = [
    "RingElement",
    "RingMatrix",
    "ElementaryGen",
    "DiagonalGen",
    "InvertiblePair",
    "ring_add",
    "ring_mul",
    "ring_neg",
    "mat_mul",
    "build_invertible",
    "verify_inverse",
]


class RingElement:
    """A finite Z-linear combination of group elements in normal form."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: GroupSpec, terms=None):
        self.spec = spec
        clean = {}
        for g, c in (terms or {}).items():
            c = int(c)
            if c:
                clean[g] = clean.get(g, 0) + c
        self.terms = {g: c for g, c in clean.items() if c}

    @staticmethod
    def zero(spec: GroupSpec) -> "RingElement":
        return RingElement(spec)

    @staticmethod
    def one(spec: GroupSpec) -> "RingElement":
        return RingElement(spec, {spec.identity(): 1})

    @staticmethod
    def from_element(g: GroupElement, coeff: int = 1) -> "RingElement":
        return RingElement(g.spec, {g: coeff})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        """Terms in the fixed order: syllable count, then syllable comparison."""
        return sorted(self.terms.items(), key=lambda t: element_sort_key(t[0]))

    @property
    def support(self):
        return [g for g, _ in self.items()]

    def _same(self, other) -> None:
        if self.spec != other.spec:
            raise ContextError("ring elements over different groups")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._same(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, 0) + c
        return RingElement(self.spec, out)

    def __neg__(self) -> "RingElement":
        return RingElement(self.spec, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._same(other)
        out: dict[GroupElement, int] = {}
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                gh = multiply(g, h)
                out[gh] = out.get(gh, 0) + a * b
        return RingElement(self.spec, out)

    def __rmul__(self, n: int) -> "RingElement":
        return RingElement(self.spec, {g: n * c for g, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (g, c) in enumerate(self.items()):
            word = str(g)
            if abs(c) == 1:
                body = word
            elif g.is_identity:
                body = str(abs(c))
            else:
                body = f"{abs(c)}*{word}"
            if i == 0:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"RingElement({self})"


def ring_add(x: RingElement, y: RingElement) -> RingElement:
    return x + y


def ring_mul(x: RingElement, y: RingElement) -> RingElement:
    return x * y


def ring_neg(x: RingElement) -> RingElement:
    return -x


class RingMatrix:
    """A square matrix over Z[G]; multiplication preserves operand order."""

    __slots__ = ("spec", "n", "entries")

    def __init__(self, spec: GroupSpec, entries):
        n = len(entries)
        rows = []
        for row in entries:
            if len(row) != n:
                raise DimensionError("ring matrices must be square")
            for x in row:
                if x.spec != spec:
                    raise ContextError("matrix entry over a different group")
            rows.append(tuple(row))
        self.spec = spec
        self.n = n
        self.entries = tuple(rows)

    @staticmethod
    def identity(spec: GroupSpec, n: int) -> "RingMatrix":
        one = RingElement.one(spec)
        zero = RingElement.zero(spec)
        return RingMatrix(spec, [[one if i == j else zero for j in range(n)] for i in range(n)])

    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        if self.spec != other.spec:
            raise ContextError("matrices over different groups")
        if self.n != other.n:
            raise DimensionError("matrix size mismatch")
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = RingElement.zero(self.spec)
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return RingMatrix(self.spec, out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return self.spec == other.spec and self.n == other.n and self.entries == other.entries

    def __hash__(self):
        return hash((self.n,))

    def __repr__(self):
        rows = "; ".join(", ".join(str(x) for x in row) for row in self.entries)
        return f"RingMatrix[{rows}]"


def mat_mul(x: RingMatrix, y: RingMatrix) -> RingMatrix:
    return x @ y


@dataclass(frozen=True)
class ElementaryGen:
    """E_ij(x): identity plus x in off-diagonal position (i, j); 0-based."""

    i: int
    j: int
    x: RingElement

    def matrix(self, spec: GroupSpec, n: int) -> RingMatrix:
        if self.i == self.j or not (0 <= self.i < n and 0 <= self.j < n):
            raise DimensionError("elementary generator indices out of range")
        m = [list(row) for row in RingMatrix.identity(spec, n).entries]
        m[self.i][self.j] = m[self.i][self.j] + self.x
        return RingMatrix(spec, m)

    def inverted(self) -> "ElementaryGen":
        return ElementaryGen(self.i, self.j, -self.x)

    def __str__(self):
        return f'E({self.i + 1},{self.j + 1},"{self.x}")'


@dataclass(frozen=True)
class DiagonalGen:
    """D_i(+-g): identity with the unit +-g in diagonal position i; 0-based."""

    i: int
    sign: int
    g: GroupElement

    def matrix(self, spec: GroupSpec, n: int) -> RingMatrix:
        if not (0 <= self.i < n):
            raise DimensionError("diagonal generator index out of range")
        if self.sign not in (1, -1):
            raise DimensionError("diagonal unit sign must be +1 or -1")
        m = [list(row) for row in RingMatrix.identity(spec, n).entries]
        m[self.i][self.i] = RingElement.from_element(self.g, self.sign)
        return RingMatrix(spec, m)

    def inverted(self) -> "DiagonalGen":
        return DiagonalGen(self.i, self.sign, inverse(self.g))

    def __str__(self):
        word = str(self.g)
        return f'D({self.i + 1},"{word if self.sign > 0 else "-" + word}")'


class InvertiblePair:
    """A matrix with a certified two-sided inverse and its generator history."""

    __slots__ = ("matrix", "inverse", "provenance")

    def __init__(self, matrix: RingMatrix, inv: RingMatrix, provenance=()):
        if not verify_inverse(matrix, inv):
            raise InternalError("inverse verification failed on construction")
        self.matrix = matrix
        self.inverse = inv
        self.provenance = tuple(provenance)

    def __repr__(self):
        return f"InvertiblePair(n={self.matrix.n}, gens={len(self.provenance)})"


def build_invertible(spec: GroupSpec, n: int, gens) -> InvertiblePair:
    """Product of generators in order, with the symbolically built inverse.

    The inverse is the product of inverted generators in reverse order; the
    pair is verified by multiplication, and a failure is a defect rather
    than a user error.
    """
    gens = tuple(gens)
    m = RingMatrix.identity(spec, n)
    for gen in gens:
        m = m @ gen.matrix(spec, n)
    inv = RingMatrix.identity(spec, n)
    for gen in reversed(gens):
        inv = inv @ gen.inverted().matrix(spec, n)
    return InvertiblePair(m, inv, gens)


def verify_inverse(m: RingMatrix, n: RingMatrix) -> bool:
    """True iff m @ n == n @ m == identity."""
    if m.spec != n.spec or m.n != n.n:
        return False
    ident = RingMatrix.identity(m.spec, m.n)
    return m @ n == ident and n @ m == ident
