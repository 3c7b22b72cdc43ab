"""Finite-dimensional algebra, coalgebra, and bialgebra data with validators.

Structure constants follow one convention everywhere:
  mult[i][j][k]    coefficient of e_k in e_i * e_j
  comult[i][j][k]  coefficient of e_j (x) e_k in Delta(e_i)
Validator failure is data (a report with witness indices), not an exception;
malformed shapes and dim 0 are rejected with ParseError before any math runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .exactlin import (
    Field,
    LinMap,
    ParseError,
    basis_vec,
    iter_multi,
    kron_vec,
    prod,
    swap_map,
    unflatten_index,
    vec_zero,
)


# ---------------------------------------------------------------------------
# validation reports

@dataclass(frozen=True)
class Violation:
    law: str
    index: tuple
    detail: str = ""

    def __str__(self):
        where = "@" + repr(self.index) if self.index else ""
        return "%s%s %s" % (self.law, where, self.detail)


@dataclass
class ValidationReport:
    subject: str
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "ValidationReport") -> "ValidationReport":
        self.violations.extend(other.violations)
        return self

    def add_law(self, law: str, lhs: LinMap, rhs: LinMap, limit: int = 1):
        """Record up to `limit` witness coordinates where lhs != rhs."""
        found = 0
        for r, (lrow, rrow) in enumerate(zip(lhs.mat, rhs.mat)):
            for c, (x, y) in enumerate(zip(lrow, rrow)):
                if x != y:
                    self.violations.append(Violation(
                        law,
                        unflatten_index(lhs.dom, c),
                        "output %r: %s != %s" % (unflatten_index(lhs.cod, r), x, y)))
                    found += 1
                    if found >= limit:
                        return
        return

    def describe(self) -> str:
        if self.ok:
            return "%s: ok" % self.subject
        lines = ["%s: %d violation(s)" % (self.subject, len(self.violations))]
        lines += ["  " + str(v) for v in self.violations]
        return "\n".join(lines)


def _freeze3(field: Field, dim: int, cube, what: str):
    if len(cube) != dim:
        raise ParseError("%s must have %d outer entries" % (what, dim))
    out = []
    for i, plane in enumerate(cube):
        if len(plane) != dim:
            raise ParseError("%s[%d] must have %d entries" % (what, i, dim))
        rows = []
        for j, line in enumerate(plane):
            if len(line) != dim:
                raise ParseError("%s[%d][%d] must have %d entries" % (what, i, j, dim))
            rows.append(tuple(line))
        out.append(tuple(rows))
    return tuple(out)


def _freeze1(field: Field, dim: int, vec, what: str):
    if len(vec) != dim:
        raise ParseError("%s must have %d entries" % (what, dim))
    return tuple(vec)


# ---------------------------------------------------------------------------
# algebras

@dataclass(frozen=True)
class AlgebraData:
    field: Field
    dim: int
    mult: tuple
    unit: tuple

    @staticmethod
    def make(field: Field, mult, unit) -> "AlgebraData":
        dim = len(unit)
        if dim < 1:
            raise ParseError("algebra dim must be >= 1")
        return AlgebraData(field, dim, _freeze3(field, dim, mult, "mult"),
                           _freeze1(field, dim, unit, "unit"))

    def product(self, u: Sequence, v: Sequence) -> tuple:
        out = [self.field.zero] * self.dim
        for i, x in enumerate(u):
            if not x:
                continue
            for j, y in enumerate(v):
                if not y:
                    continue
                xy = x * y
                for k, m in enumerate(self.mult[i][j]):
                    if m:
                        out[k] = out[k] + m * xy
        return tuple(out)

    def mult_map(self) -> LinMap:
        imgs = [self.mult[i][j] for i, j in iter_multi((self.dim, self.dim))]
        return LinMap.from_images(self.field, (self.dim, self.dim), (self.dim,), imgs)

    def unit_map(self) -> LinMap:
        return LinMap.const(self.field, self.unit, (self.dim,))

    def lmult(self, vec: Sequence) -> LinMap:
        """x -> vec * x."""
        imgs = [self.product(vec, basis_vec(self.field, self.dim, j)) for j in range(self.dim)]
        return LinMap.from_images(self.field, (self.dim,), (self.dim,), imgs)

    def rmult(self, vec: Sequence) -> LinMap:
        """x -> x * vec."""
        imgs = [self.product(basis_vec(self.field, self.dim, j), vec) for j in range(self.dim)]
        return LinMap.from_images(self.field, (self.dim,), (self.dim,), imgs)

    def opposite(self) -> "AlgebraData":
        m = tuple(tuple(self.mult[j][i] for j in range(self.dim)) for i in range(self.dim))
        return AlgebraData(self.field, self.dim, m, self.unit)

    def tensor(self, other: "AlgebraData") -> "AlgebraData":
        """Componentwise product algebra on the tensor product space."""
        da, db = self.dim, other.dim
        dim = da * db
        zero = self.field.zero
        mult = [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
        for i1 in range(da):
            for j1 in range(da):
                for i2 in range(db):
                    for j2 in range(db):
                        row = mult[i1 * db + i2][j1 * db + j2]
                        for k1, x in enumerate(self.mult[i1][j1]):
                            if not x:
                                continue
                            for k2, y in enumerate(other.mult[i2][j2]):
                                if y:
                                    row[k1 * db + k2] = x * y
        unit = kron_vec(self.unit, other.unit)
        return AlgebraData(self.field, dim,
                           tuple(tuple(tuple(r) for r in p) for p in mult), tuple(unit))


def check_algebra(a: AlgebraData, subject: str = "algebra") -> ValidationReport:
    rep = ValidationReport(subject)
    n = a.dim
    basis = [basis_vec(a.field, n, i) for i in range(n)]
    for i, j, k in iter_multi((n, n, n)):
        lhs = a.product(a.product(basis[i], basis[j]), basis[k])
        rhs = a.product(basis[i], a.product(basis[j], basis[k]))
        if lhs != rhs:
            w = next(t for t in range(n) if lhs[t] != rhs[t])
            rep.violations.append(Violation(
                "associativity", (i, j, k),
                "coordinate %d: %s != %s" % (w, lhs[w], rhs[w])))
            break
    for i in range(n):
        if a.product(a.unit, basis[i]) != basis[i]:
            rep.violations.append(Violation("unit-left", (i,)))
        if a.product(basis[i], a.unit) != basis[i]:
            rep.violations.append(Violation("unit-right", (i,)))
    return rep


# ---------------------------------------------------------------------------
# coalgebras

@dataclass(frozen=True)
class CoalgebraData:
    field: Field
    dim: int
    comult: tuple
    counit: tuple

    @staticmethod
    def make(field: Field, comult, counit) -> "CoalgebraData":
        dim = len(counit)
        if dim < 1:
            raise ParseError("coalgebra dim must be >= 1")
        return CoalgebraData(field, dim, _freeze3(field, dim, comult, "comult"),
                             _freeze1(field, dim, counit, "counit"))

    def comult_map(self) -> LinMap:
        n = self.dim
        imgs = []
        for i in range(n):
            img = [self.comult[i][j][k] for j, k in iter_multi((n, n))]
            imgs.append(img)
        return LinMap.from_images(self.field, (n,), (n, n), imgs)

    def counit_map(self) -> LinMap:
        return LinMap.from_rows(self.field, (self.dim,), (1,), [self.counit])

    def opposite(self) -> "CoalgebraData":
        d = tuple(tuple(tuple(self.comult[i][k][j] for k in range(self.dim))
                        for j in range(self.dim)) for i in range(self.dim))
        return CoalgebraData(self.field, self.dim, d, self.counit)


def check_coalgebra(c: CoalgebraData, subject: str = "coalgebra") -> ValidationReport:
    rep = ValidationReport(subject)
    n = c.dim
    delta = c.comult_map()
    eps = c.counit_map()
    idc = LinMap.identity(c.field, (n,))
    lhs = delta.tensor(idc).compose(delta)
    rhs = idc.tensor(delta).compose(delta).with_shapes((n,), (n, n, n))
    rep.add_law("coassociativity", lhs, rhs)
    left = eps.tensor(idc).compose(delta).with_shapes((n,), (n,))
    right = idc.tensor(eps).compose(delta).with_shapes((n,), (n,))
    rep.add_law("counit-left", left, idc)
    rep.add_law("counit-right", right, idc)
    return rep


def dual_algebra(c: CoalgebraData, opposite: bool = False) -> AlgebraData:
    """Convolution algebra on C* in the coordinate dual basis.

    (e_i* e_j*)(e_s) = comult[s][i][j]; with opposite=True the factors are
    convolved in reverse order.  The unit is the counit functional.
    """
    n = c.dim
    mult = []
    for i in range(n):
        plane = []
        for j in range(n):
            a, b = (j, i) if opposite else (i, j)
            plane.append(tuple(c.comult[s][a][b] for s in range(n)))
        mult.append(tuple(plane))
    return AlgebraData(c.field, n, tuple(mult), tuple(c.counit))


# ---------------------------------------------------------------------------
# bialgebras

@dataclass(frozen=True)
class BialgebraData:
    algebra: AlgebraData
    coalgebra: CoalgebraData

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @staticmethod
    def make(algebra: AlgebraData, coalgebra: CoalgebraData) -> "BialgebraData":
        if algebra.dim != coalgebra.dim:
            raise ParseError("bialgebra parts must share a dimension")
        if algebra.field != coalgebra.field:
            raise ParseError("bialgebra parts must share a field")
        return BialgebraData(algebra, coalgebra)


def check_bialgebra(b: BialgebraData, subject: str = "bialgebra") -> ValidationReport:
    rep = ValidationReport(subject)
    rep.merge(check_algebra(b.algebra, subject + ".algebra"))
    rep.merge(check_coalgebra(b.coalgebra, subject + ".coalgebra"))
    n = b.dim
    f = b.field
    m, u = b.algebra.mult_map(), b.algebra.unit_map()
    delta, eps = b.coalgebra.comult_map(), b.coalgebra.counit_map()
    idn = LinMap.identity(f, (n,))
    tau = swap_map(f, n, n)
    # Delta(xy) = Delta(x)Delta(y)
    lhs = delta.compose(m)
    rhs = (m.tensor(m)
           .compose(idn.tensor(tau).tensor(idn))
           .compose(delta.tensor(delta)))
    rep.add_law("comult-multiplicative", lhs, rhs.with_shapes((n, n), (n, n)))
    rep.add_law("comult-unital", delta.compose(u), u.tensor(u).with_shapes((1,), (n, n)))
    rep.add_law("counit-multiplicative", eps.compose(m),
                eps.tensor(eps).with_shapes((n, n), (1,)))
    rep.add_law("counit-unital", eps.compose(u), LinMap.identity(f, (1,)))
    return rep


# ---------------------------------------------------------------------------
# actions and coactions

@dataclass(frozen=True)
class ActionData:
    """A module action of an algebra; `side` fixes which leg is the algebra."""

    side: str  # "left": H (x) M -> M ; "right": M (x) H -> M
    map: LinMap


@dataclass(frozen=True)
class CoactionData:
    side: str  # "left": M -> H (x) M ; "right": M -> M (x) H
    map: LinMap


def check_action(h: AlgebraData, act: ActionData, subject: str = "action") -> ValidationReport:
    rep = ValidationReport(subject)
    f = h.field
    t = act.map
    if act.side == "right":
        mdim = t.dim_cod
        idm = LinMap.identity(f, (mdim,))
        idh = LinMap.identity(f, (h.dim,))
        lhs = t.compose(t.tensor(idh))
        rhs = t.compose(idm.tensor(h.mult_map()))
        rep.add_law("action-associativity", lhs.with_shapes((mdim, h.dim, h.dim), (mdim,)),
                    rhs.with_shapes((mdim, h.dim, h.dim), (mdim,)))
        unit_side = t.compose(idm.tensor(h.unit_map())).with_shapes((mdim,), (mdim,))
        rep.add_law("action-unit", unit_side, idm)
    elif act.side == "left":
        mdim = t.dim_cod
        idm = LinMap.identity(f, (mdim,))
        idh = LinMap.identity(f, (h.dim,))
        lhs = t.compose(idh.tensor(t))
        rhs = t.compose(h.mult_map().tensor(idm))
        rep.add_law("action-associativity", lhs.with_shapes((h.dim, h.dim, mdim), (mdim,)),
                    rhs.with_shapes((h.dim, h.dim, mdim), (mdim,)))
        unit_side = t.compose(h.unit_map().tensor(idm)).with_shapes((mdim,), (mdim,))
        rep.add_law("action-unit", unit_side, idm)
    else:
        raise ParseError("action side must be 'left' or 'right'")
    return rep


def check_coaction(h: CoalgebraData, coact: CoactionData,
                   subject: str = "coaction") -> ValidationReport:
    rep = ValidationReport(subject)
    f = h.field
    t = coact.map
    mdim = t.dim_dom
    idm = LinMap.identity(f, (mdim,))
    idh = LinMap.identity(f, (h.dim,))
    if coact.side == "right":
        lhs = t.tensor(idh).compose(t)
        rhs = idm.tensor(h.comult_map()).compose(t)
        rep.add_law("coaction-coassociativity", lhs.with_shapes((mdim,), (mdim, h.dim, h.dim)),
                    rhs.with_shapes((mdim,), (mdim, h.dim, h.dim)))
        counit_side = idm.tensor(h.counit_map()).compose(t).with_shapes((mdim,), (mdim,))
        rep.add_law("coaction-counit", counit_side, idm)
    elif coact.side == "left":
        lhs = idh.tensor(t).compose(t)
        rhs = h.comult_map().tensor(idm).compose(t)
        rep.add_law("coaction-coassociativity", lhs.with_shapes((mdim,), (h.dim, h.dim, mdim)),
                    rhs.with_shapes((mdim,), (h.dim, h.dim, mdim)))
        counit_side = h.counit_map().tensor(idm).compose(t).with_shapes((mdim,), (mdim,))
        rep.add_law("coaction-counit", counit_side, idm)
    else:
        raise ParseError("coaction side must be 'left' or 'right'")
    return rep


def check_comodule_algebra(h: BialgebraData, a: AlgebraData, rho: CoactionData,
                           subject: str = "comodule-algebra") -> ValidationReport:
    """rho: A -> A (x) H is a right coaction and an algebra map."""
    rep = ValidationReport(subject)
    if rho.side != "right":
        raise ParseError("comodule-algebra coaction must be right-sided")
    rep.merge(check_coaction(h.coalgebra, rho, subject + ".coaction"))
    f = a.field
    n, dh = a.dim, h.dim
    t = rho.map.with_shapes((n,), (n, dh))
    m = a.mult_map()
    tau = swap_map(f, dh, n)
    idn = LinMap.identity(f, (n,))
    idh = LinMap.identity(f, (dh,))
    lhs = t.compose(m)
    rhs = (m.tensor(h.algebra.mult_map())
           .compose(idn.tensor(tau).tensor(idh))
           .compose(t.tensor(t)))
    rep.add_law("coaction-multiplicative", lhs, rhs.with_shapes((n, n), (n, dh)))
    rep.add_law("coaction-unital", t.compose(a.unit_map()),
                a.unit_map().tensor(h.algebra.unit_map()).with_shapes((1,), (n, dh)))
    return rep


def check_module_coalgebra(h: BialgebraData, c: CoalgebraData, act: ActionData,
                           subject: str = "module-coalgebra") -> ValidationReport:
    """act: C (x) H -> C is a right action and a coalgebra map."""
    rep = ValidationReport(subject)
    if act.side != "right":
        raise ParseError("module-coalgebra action must be right-sided")
    rep.merge(check_action(h.algebra, act, subject + ".action"))
    f = c.field
    n, dh = c.dim, h.dim
    t = act.map.with_shapes((n, dh), (n,))
    delta = c.comult_map()
    tau = swap_map(f, n, dh)
    idn = LinMap.identity(f, (n,))
    idh = LinMap.identity(f, (dh,))
    lhs = delta.compose(t)
    rhs = (t.tensor(t)
           .compose(idn.tensor(tau).tensor(idh))
           .compose(delta.tensor(h.coalgebra.comult_map())))
    rep.add_law("action-comultiplicative", lhs, rhs.with_shapes((n, dh), (n, n)))
    eps_c, eps_h = c.counit_map(), h.coalgebra.counit_map()
    lhs2 = eps_c.compose(t)
    rhs2 = eps_c.tensor(eps_h).with_shapes((n, dh), (1,))
    rep.add_law("action-counital", lhs2, rhs2)
    return rep


def check_algebra_map(src: AlgebraData, dst: AlgebraData, f: LinMap,
                      subject: str = "algebra-map") -> ValidationReport:
    """f preserves products and the unit."""
    rep = ValidationReport(subject)
    lhs = f.compose(src.mult_map())
    rhs = dst.mult_map().compose(f.tensor(f))
    rep.add_law("multiplicative", lhs.with_shapes((src.dim, src.dim), (dst.dim,)),
                rhs.with_shapes((src.dim, src.dim), (dst.dim,)))
    rep.add_law("unital", f.compose(src.unit_map()), dst.unit_map())
    return rep


# ---------------------------------------------------------------------------
# dual bases

@dataclass
class DualBasis:
    """A finite dual basis: elements x_i with functionals x_i*.

    The construction site guarantees the resolution-of-identity property for
    the module structure it was built for; `elements[i]` are module vectors
    and `functionals[i]` are linear maps from the module to the coefficient
    space acting on the left.
    """

    elements: tuple
    functionals: tuple
    note: str = ""

    @property
    def size(self) -> int:
        return len(self.elements)


def coordinate_dual_basis(field: Field, n: int) -> DualBasis:
    """The tautological dual basis {e_i, e_i*} of a coordinate space."""
    els = tuple(basis_vec(field, n, i) for i in range(n))
    fns = tuple(LinMap.from_rows(field, (n,), (1,), [basis_vec(field, n, i)])
                for i in range(n))
    return DualBasis(els, fns, "coordinate")
