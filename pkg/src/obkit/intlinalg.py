"""Exact integer linear algebra: Smith normal form, integer linear
solving, and quotient presentations of finitely presented abelian
groups.  All arithmetic is arbitrary precision; pivots may grow.
"""

from __future__ import annotations

from .errors import DimensionError

__all__ = [
    "IntMatrix",
    "smith_normal_form",
    "invariant_factors",
    "solve",
    "QuotientPresentation",
    "coset_reduce",
    "is_zero_in_quotient",
]


class IntMatrix:
    """An immutable integer matrix stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, cols=None):
        rows = [tuple(int(x) for x in row) for row in entries]
        if rows:
            cols = len(rows[0])
            if any(len(r) != cols for r in rows):
                raise DimensionError("ragged rows")
        elif cols is None:
            cols = 0
        self.rows = len(rows)
        self.cols = cols
        self.entries = tuple(rows)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(r: int, c: int) -> "IntMatrix":
        return IntMatrix([[0] * c for _ in range(r)], cols=c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError("matrix size mismatch")
        ot = list(zip(*other.entries)) if other.entries else [()] * other.cols
        out = [
            [sum(a * b for a, b in zip(row, col)) for col in ot]
            for row in self.entries
        ]
        return IntMatrix(out, cols=other.cols)

    def apply(self, vec) -> tuple:
        """Matrix times column vector."""
        if len(vec) != self.cols:
            raise DimensionError("vector length mismatch")
        return tuple(sum(a * x for a, x in zip(row, vec)) for row in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix([list(col) for col in zip(*self.entries)] if self.entries else [], cols=self.rows)

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for t in range(n - 1):
            if a[t][t] == 0:
                for i in range(t + 1, n):
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(t + 1, n):
                for j in range(t + 1, n):
                    a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
                a[i][t] = 0
            prev = a[t][t]
        return sign * a[n - 1][n - 1]

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.entries]!r})"


def _row_apply(vec, m: IntMatrix) -> tuple:
    """Row vector times matrix."""
    if len(vec) != m.rows:
        raise DimensionError("vector length mismatch")
    return tuple(
        sum(vec[i] * m.entries[i][j] for i in range(m.rows)) for j in range(m.cols)
    )


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return unimodular U, V and diagonal S with U @ m @ V == S.

    Diagonal entries are nonnegative and satisfy d1 | d2 | ... ; pivots are
    chosen by minimal nonzero absolute value.
    """
    R, C = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[1 if i == j else 0 for j in range(R)] for i in range(R)]
    v = [[1 if i == j else 0 for j in range(C)] for i in range(C)]
    t = 0
    while t < min(R, C):
        pivot = None
        for i in range(t, R):
            for j in range(t, C):
                x = a[i][j]
                if x and (pivot is None or abs(x) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
            u[t], u[pi] = u[pi], u[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            for row in v:
                row[t], row[pj] = row[pj], row[t]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        d = a[t][t]
        dirty = False
        for i in range(t + 1, R):
            if a[i][t]:
                q = a[i][t] // d
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, C):
            if a[t][j]:
                q = a[t][j] // d
                for row in a:
                    row[j] -= q * row[t]
                for row in v:
                    row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        offender = None
        for i in range(t + 1, R):
            for j in range(t + 1, C):
                if a[i][j] % d:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            u[t] = [x + y for x, y in zip(u[t], u[offender])]
            continue
        t += 1
    return IntMatrix(u, cols=R), IntMatrix(a, cols=C), IntMatrix(v, cols=C)


def invariant_factors(m: IntMatrix) -> tuple[int, ...]:
    """Diagonal of the Smith form, length min(rows, cols)."""
    _, s, _ = smith_normal_form(m)
    return tuple(s.entries[i][i] for i in range(min(m.rows, m.cols)))


def solve(a: IntMatrix, b) -> tuple | None:
    """An integer solution x of a @ x == b, or None if none exists."""
    if len(b) != a.rows:
        raise DimensionError("right-hand side length mismatch")
    u, s, v = smith_normal_form(a)
    c = u.apply(b)
    y = [0] * a.cols
    rank = min(a.rows, a.cols)
    for i in range(rank):
        d = s.entries[i][i]
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    for i in range(rank, a.rows):
        if c[i]:
            return None
    return v.apply(y)


class QuotientPresentation:
    """Z^k modulo the lattice spanned by the rows of a relation matrix.

    Smith data is computed once; ``reduce`` maps any integer vector to
    canonical coset coordinates living in prod Z/d_i x Z^(free part).
    """

    def __init__(self, rank: int, relations=()):
        rows = [tuple(int(x) for x in r) for r in relations]
        for r in rows:
            if len(r) != rank:
                raise DimensionError("relation length does not match rank")
        self.rank = rank
        self.relations = IntMatrix(rows, cols=rank)
        self.u, self.s, self.v = smith_normal_form(self.relations)
        n = min(self.relations.rows, rank)
        self.diag = tuple(self.s.entries[i][i] for i in range(n))

    @property
    def free_rank(self) -> int:
        return self.rank - sum(1 for d in self.diag if d)

    @property
    def torsion_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.diag if d > 1)

    def group_invariants(self) -> tuple[int, ...]:
        """Nontrivial invariant factors followed by one 0 per free rank."""
        return self.torsion_factors + (0,) * self.free_rank

    def reduce(self, x) -> tuple:
        """Canonical coset coordinates; equal iff the vectors differ by a relation."""
        if len(x) != self.rank:
            raise DimensionError("vector length does not match rank")
        y = list(_row_apply(x, self.v))
        for i, d in enumerate(self.diag):
            if d:
                y[i] %= d
        return tuple(y)

    def is_zero(self, x) -> bool:
        return not any(self.reduce(x))

    def __repr__(self):
        return f"QuotientPresentation(rank={self.rank}, invariants={self.group_invariants()})"


def coset_reduce(p: QuotientPresentation, x) -> tuple:
    return p.reduce(x)


def is_zero_in_quotient(p: QuotientPresentation, x) -> bool:
    return p.is_zero(x)
