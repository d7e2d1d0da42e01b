"""Three-cocycles pulled back from finite abelian quotients, their
linearization over the group ring, and the chain-level chi functional
on certified-invertible matrix triples.

A cocycle table is indexed by triples of quotient elements; omitted
triples are zero.  When the coefficient module carries a nontrivial
action it must be shown to factor through the quotient: the scenario
supplies matrices for the quotient generators and the pullback
compatibility is checked generator by generator, which makes the
exhaustive cocycle identity decidable.
"""

from __future__ import annotations

from .errors import ContextError, DimensionError, InternalError, RejectedError
from .gmodules import GModule, ModuleElement, ModuleMap
from .groupring import InvertiblePair, RingElement, RingMatrix, verify_inverse
from .groups import GroupElement, GroupSpec, enumerate_elements, multiply
from .intlinalg import IntMatrix
from .wh1 import WhElement, induced_map

__all__ = [
    "FiniteQuotient",
    "Cocycle",
    "coboundary",
    "verify_cocycle",
    "linearize_eval",
    "chi_eval",
    "pushforward",
    "chi_naturality_check",
    "retraction_kills_chi",
]


class FiniteQuotient:
    """A homomorphism from the working group onto (into) a finite abelian group."""

    def __init__(self, source: GroupSpec, target: GroupSpec, images: dict):
        if not target.is_finite:
            raise ValueError("quotient target must be a finite abelian group")
        self.source = source
        self.target = target
        self.images = {}
        for fi, factor in enumerate(source.factors):
            for gi, name in enumerate(factor.names):
                if name not in images:
                    raise ValueError(f"missing image for generator {name!r}")
                img = images[name]
                if img.spec != target:
                    raise ValueError(f"image of {name!r} is not in the quotient group")
                if factor.kind == "abelian" and gi >= factor.free_rank:
                    order = factor.torsion[gi - factor.free_rank]
                    if not (img ** order).is_identity:
                        raise ValueError(
                            f"image of {name!r} does not satisfy its torsion relation"
                        )
                self.images[name] = img

    def project(self, g: GroupElement) -> GroupElement:
        if g.spec != self.source:
            raise ContextError("element over a different group")
        out = self.target.identity()
        for fi, payload in g.syllables:
            factor = self.source.factors[fi]
            if factor.kind == "free":
                for x in payload:
                    img = self.images[factor.names[abs(x) - 1]]
                    out = multiply(out, img if x > 0 else img.inverse())
            else:
                for gi, e in enumerate(payload):
                    if e:
                        out = multiply(out, self.images[factor.names[gi]] ** e)
        return out

    def elements(self) -> list[GroupElement]:
        return enumerate_elements(self.target)


class Cocycle:
    """An inhomogeneous 3-cochain on a finite quotient, with coefficients
    in a module whose action factors through the quotient.

    Factorization is validated on construction: for a trivial action the
    quotient acts trivially; otherwise explicit matrices for the quotient
    generators are required and checked for compatibility.
    """

    def __init__(self, quotient: FiniteQuotient, module: GModule, table=None,
                 q_action=None, name: str = ""):
        if module.spec != quotient.source:
            raise ContextError("module and quotient disagree on the group")
        self.quotient = quotient
        self.module = module
        self.name = name
        k = module.rank
        self.table = {}
        for key, value in (table or {}).items():
            q1, q2, q3 = key
            for q in (q1, q2, q3):
                if q.spec != quotient.target:
                    raise ContextError("table key outside the quotient group")
            coords = tuple(int(x) for x in value)
            if len(coords) != k:
                raise DimensionError("table value has the wrong rank")
            if any(module.reduce(coords)):
                self.table[(q1, q2, q3)] = coords
        self._q_matrices = self._resolve_q_action(q_action)

    def _resolve_q_action(self, q_action) -> dict:
        module = self.module
        target = self.quotient.target
        k = module.rank
        names = target.generator_names()
        if module.trivial_action and q_action is None:
            return {n: IntMatrix.identity(k) for n in names}
        if q_action is None:
            raise RejectedError(
                "module action is nontrivial and no quotient action was supplied: "
                "cannot verify that the action factors through the quotient"
            )
        module._ensure_valid()
        mats = {}
        for n in names:
            if n not in q_action:
                raise RejectedError(f"quotient action is missing generator {n!r}")
            m = q_action[n]
            if not isinstance(m, IntMatrix):
                m = IntMatrix(m)
            if m.rows != k or m.cols != k:
                raise DimensionError("quotient action matrix has the wrong shape")
            mats[n] = m
        factor = target.factors[0]
        basis = module._basis()
        for gi, n in enumerate(names):
            m = mats[n]
            for rel in module.relations_rows():
                if not module.presentation.is_zero(m.apply(rel)):
                    raise RejectedError(
                        f"quotient action of {n!r} does not preserve the relations"
                    )
            order = factor.torsion[gi - factor.free_rank] if gi >= factor.free_rank else None
            if order is not None:
                power = IntMatrix.identity(k)
                for _ in range(order):
                    power = power @ m
                if any(module.reduce(power.apply(e)) != module.reduce(e) for e in basis):
                    raise RejectedError(
                        f"quotient action of {n!r} violates its torsion order"
                    )
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                ab = mats[names[i]] @ mats[names[j]]
                ba = mats[names[j]] @ mats[names[i]]
                if any(module.reduce(ab.apply(e)) != module.reduce(ba.apply(e)) for e in basis):
                    raise RejectedError("quotient action matrices do not commute")
        self._q_matrices = mats
        for gen in self.quotient.source.generator_names():
            lhs = self.module.action[gen]
            rhs_vecs = [self.act_q_vec(self.quotient.images[gen], e) for e in basis]
            if any(
                module.reduce(lhs.apply(e)) != module.reduce(v)
                for e, v in zip(basis, rhs_vecs)
            ):
                raise RejectedError(
                    f"action of {gen!r} does not factor through the quotient"
                )
        return mats

    def act_q_vec(self, q: GroupElement, coords) -> tuple:
        """Action of a quotient element on raw coordinates."""
        if q.is_identity:
            return tuple(coords)
        factor = self.quotient.target.factors[0]
        v = tuple(coords)
        (fi, exps), = q.syllables
        for gi, e in enumerate(exps):
            m = self._q_matrices[factor.names[gi]]
            for _ in range(e):
                v = m.apply(v)
        return v

    def value(self, q1: GroupElement, q2: GroupElement, q3: GroupElement) -> tuple:
        return self.table.get((q1, q2, q3), (0,) * self.module.rank)

    def entries(self):
        """Table entries in a deterministic order."""
        order = {g: i for i, g in enumerate(self.quotient.elements())}
        return sorted(
            self.table.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]], order[kv[0][2]])
        )


def coboundary(quotient: FiniteQuotient, module: GModule, two_cochain,
               q_action=None, name: str = "") -> Cocycle:
    """The 3-cocycle that is the coboundary of an explicit 2-cochain.

    Useful for building tables that pass ``verify_cocycle`` by
    construction.  The 2-cochain maps pairs of quotient elements to
    coordinate vectors; omitted pairs are zero.
    """
    probe = Cocycle(quotient, module, {}, q_action=q_action)
    k = module.rank
    b = {}
    for (q1, q2), coords in two_cochain.items():
        coords = tuple(int(x) for x in coords)
        if len(coords) != k:
            raise DimensionError("2-cochain value has the wrong rank")
        b[(q1, q2)] = coords
    zero = (0,) * k

    def bval(p, q):
        return b.get((p, q), zero)

    table = {}
    for g in quotient.elements():
        for h in quotient.elements():
            for kk in quotient.elements():
                acted = probe.act_q_vec(g, bval(h, kk))
                total = [
                    acted[i]
                    - bval(multiply(g, h), kk)[i]
                    + bval(g, multiply(h, kk))[i]
                    - bval(g, h)[i]
                    for i in range(k)
                ]
                if any(module.reduce(total)):
                    table[(g, h, kk)] = tuple(total)
    return Cocycle(quotient, module, table, q_action=q_action, name=name)


def verify_cocycle(c: Cocycle):
    """Exhaustively check the inhomogeneous 3-cocycle identity.

    Returns None when the identity holds, else the first violated
    quadruple in enumeration order.
    """
    module = c.module
    k = module.rank
    elems = c.quotient.elements()
    for g in elems:
        for h in elems:
            gh = multiply(g, h)
            for q in elems:
                hq = multiply(h, q)
                for l in elems:
                    ql = multiply(q, l)
                    acted = c.act_q_vec(g, c.value(h, q, l))
                    total = [
                        acted[i]
                        - c.value(gh, q, l)[i]
                        + c.value(g, hq, l)[i]
                        - c.value(g, h, ql)[i]
                        + c.value(g, h, q)[i]
                        for i in range(k)
                    ]
                    if any(module.reduce(total)):
                        return (g, h, q, l)
    return None


def linearize_eval(c: Cocycle, x: RingElement, y: RingElement, z: RingElement) -> ModuleElement:
    """Trilinear extension of the pulled-back table over Z[G] supports."""
    module = c.module
    spec = module.spec
    for w in (x, y, z):
        if w.spec != spec:
            raise ContextError("ring element over a different group")
    k = module.rank
    total = [0] * k
    proj = c.quotient.project
    xs = [(proj(g), a) for g, a in x.terms.items()]
    ys = [(proj(g), a) for g, a in y.terms.items()]
    zs = [(proj(g), a) for g, a in z.terms.items()]
    for qg, a in xs:
        for qh, b in ys:
            ab = a * b
            for qk, cc in zs:
                coeff = ab * cc
                val = c.value(qg, qh, qk)
                for i in range(k):
                    total[i] += coeff * val[i]
    return ModuleElement(module, module.reduce(total))


def _as_matrix(m) -> RingMatrix:
    return m.matrix if isinstance(m, InvertiblePair) else m


def _resolve_inverse(abc: RingMatrix, a, b, cm, d) -> RingMatrix:
    if d is None:
        pairs = [a, b, cm]
        if not all(isinstance(p, InvertiblePair) for p in pairs):
            raise RejectedError(
                "no inverse supplied and the factors are not certified invertible"
            )
        d_mat = cm.inverse @ b.inverse @ a.inverse
    elif isinstance(d, InvertiblePair):
        if verify_inverse(abc, d.matrix):
            return d.matrix
        d_mat = d.inverse
    else:
        d_mat = d
    if not verify_inverse(abc, d_mat):
        raise RejectedError("supplied matrix is not a two-sided inverse of A*B*C")
    return d_mat


def chi_eval(c: Cocycle, a, b, cm, d=None) -> WhElement:
    """The chain-level functional: sum of f(a_ij (x) b_jk (x) c_kl)[d_li].

    The bracket extends Z-bilinearly over the support of d_li.  The
    inverse is either supplied (and verified two-sided) or composed from
    the certified factors; a failed verification rejects the call.
    """
    am, bm, cmm = _as_matrix(a), _as_matrix(b), _as_matrix(cm)
    spec = c.module.spec
    for m in (am, bm, cmm):
        if m.spec != spec:
            raise ContextError("matrix over a different group")
    if not (am.n == bm.n == cmm.n):
        raise DimensionError("matrix sizes differ")
    abc = am @ bm @ cmm
    d_mat = _resolve_inverse(abc, a, b, cm, d)
    n = am.n
    raw = []
    for i in range(n):
        for j in range(n):
            xij = am.entries[i][j]
            if xij.is_zero:
                continue
            for k in range(n):
                yjk = bm.entries[j][k]
                if yjk.is_zero:
                    continue
                for l in range(n):
                    zkl = cmm.entries[k][l]
                    if zkl.is_zero:
                        continue
                    m = linearize_eval(c, xij, yjk, zkl)
                    if m.is_zero:
                        continue
                    for h, coeff in d_mat.entries[l][i].terms.items():
                        raw.append(([coeff * x for x in m.coords], h))
    return WhElement.build(c.module, raw)


def pushforward(phi: ModuleMap, c: Cocycle, q_action=None, name: str = "") -> Cocycle:
    """Compose the table with a coefficient map, producing a target cocycle."""
    if phi.source is not c.module:
        raise ContextError("map source does not match the cocycle module")
    table = {key: phi.matrix.apply(val) for key, val in c.table.items()}
    if q_action is None and not phi.target.trivial_action:
        raise RejectedError(
            "cannot derive a quotient action for a nontrivial-action target"
        )
    return Cocycle(c.quotient, phi.target, table, q_action=q_action, name=name)


def chi_naturality_check(phi: ModuleMap, c: Cocycle, a, b, cm, d=None,
                         q_action=None) -> bool:
    """phi_* of chi for c equals chi for the pushed-forward cocycle.

    This holds identically at the chain level; a False return indicates
    a defect.
    """
    lhs = induced_map(phi, chi_eval(c, a, b, cm, d))
    rhs = chi_eval(pushforward(phi, c, q_action=q_action), a, b, cm, d)
    return lhs == rhs


def retraction_kills_chi(r: ModuleMap, c: Cocycle, a, b, cm, d=None) -> bool:
    """Execute the vanishing argument: the pushed table is zero, so chi is.

    When the pushed table is not identically zero the chain-level check
    does not cover the scenario and the call is rejected.
    """
    if r.source is not c.module:
        raise ContextError("map source does not match the cocycle module")
    for key, val in c.table.items():
        if any(r.target.reduce(r.matrix.apply(val))):
            raise RejectedError(
                "not covered by chain-level check: the pushed-forward table is nonzero"
            )
    pushed = pushforward(r, c)
    result = chi_eval(pushed, a, b, cm, d)
    if not result.is_zero:
        raise InternalError("chi of an identically zero table must vanish")
    return True
