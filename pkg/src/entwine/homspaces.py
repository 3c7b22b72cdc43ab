"""Hom spaces between entwined modules, and exact witness searches.

Morphism spaces are computed by probing the defining linear laws on matrix
units and taking an exact nullspace.  The two search primitives share one
soundness story:

* over F_p, candidate sets are enumerated projectively and exhaustively
  whenever the point count fits the budget, so a miss is a proof;
* over Q, invertibility searches are settled by evaluating the determinant
  on an integer grid large enough for polynomial identity testing, while
  bilinear witness searches fall back to a seeded random scan and report
  "unknown" rather than overclaim.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

from .exactlin import (
    Field,
    LinMap,
    ParseError,
    hom_probe_matrix,
    nullspace,
    solve_linear,
)
from .entwining import EntwinedObject, Entwining


@dataclass(frozen=True)
class ConstraintSet:
    """Which module/comodule laws a morphism must respect."""

    right_A_linear: bool = False
    left_A_linear: bool = False
    right_C_colinear: bool = False
    left_C_colinear: bool = False

    def describe(self) -> str:
        names = []
        if self.right_A_linear:
            names.append("right-A-linear")
        if self.left_A_linear:
            names.append("left-A-linear")
        if self.right_C_colinear:
            names.append("right-C-colinear")
        if self.left_C_colinear:
            names.append("left-C-colinear")
        return ", ".join(names) or "unconstrained"


ENTWINED_MORPHISMS = ConstraintSet(right_A_linear=True, right_C_colinear=True)


def _unit_entry(field: Field, rows: int, cols: int, r: int, c: int):
    zero = field.zero
    one = field.one
    return tuple(tuple(one if (i == r and j == c) else zero for j in range(cols))
                 for i in range(rows))


def _law_residuals(e: Entwining, x: EntwinedObject, y: EntwinedObject,
                   cs: ConstraintSet):
    """Callables mapping a matrix-unit index of f: X -> Y to law residuals."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    dx, dy = x.dim, y.dim
    ida = LinMap.identity(f, (na,))
    idc = LinMap.identity(f, (nc,))

    def need(mp, what, who):
        if mp is None:
            raise ParseError("%s has no %s structure" % (who, what))
        return mp

    ops = []
    if cs.right_A_linear:
        ax = x.act.with_shapes((dx, na), (dx,))
        ay = y.act.with_shapes((dy, na), (dy,))

        def op_ra(t, ax=ax, ay=ay):
            fm = LinMap(f, (dx,), (dy,), _unit_entry(f, dy, dx, t // dx, t % dx))
            diff = fm.compose(ax).sub(ay.compose(fm.tensor(ida)).with_shapes((dx, na), (dy,)))
            return [v for row in diff.mat for v in row]
        ops.append(op_ra)
    if cs.left_A_linear:
        lx = need(x.lact, "left action", x.label).with_shapes((na, dx), (dx,))
        ly = need(y.lact, "left action", y.label).with_shapes((na, dy), (dy,))

        def op_la(t, lx=lx, ly=ly):
            fm = LinMap(f, (dx,), (dy,), _unit_entry(f, dy, dx, t // dx, t % dx))
            diff = fm.compose(lx).sub(ly.compose(ida.tensor(fm)).with_shapes((na, dx), (dy,)))
            return [v for row in diff.mat for v in row]
        ops.append(op_la)
    if cs.right_C_colinear:
        cx = x.coact.with_shapes((dx,), (dx, nc))
        cy = y.coact.with_shapes((dy,), (dy, nc))

        def op_rc(t, cx=cx, cy=cy):
            fm = LinMap(f, (dx,), (dy,), _unit_entry(f, dy, dx, t // dx, t % dx))
            diff = cy.compose(fm).sub(fm.tensor(idc).compose(cx).with_shapes((dx,), (dy, nc)))
            return [v for row in diff.mat for v in row]
        ops.append(op_rc)
    if cs.left_C_colinear:
        cx = need(x.lcoact, "left coaction", x.label).with_shapes((dx,), (nc, dx))
        cy = need(y.lcoact, "left coaction", y.label).with_shapes((dy,), (nc, dy))

        def op_lc(t, cx=cx, cy=cy):
            fm = LinMap(f, (dx,), (dy,), _unit_entry(f, dy, dx, t // dx, t % dx))
            diff = cy.compose(fm).sub(idc.tensor(fm).compose(cx).with_shapes((dx,), (nc, dy)))
            return [v for row in diff.mat for v in row]
        ops.append(op_lc)
    return ops


def hom_basis(e: Entwining, x: EntwinedObject, y: EntwinedObject,
              cs: ConstraintSet = ENTWINED_MORPHISMS) -> list[LinMap]:
    """Basis of the space of maps X -> Y satisfying the chosen laws."""
    f = e.field
    dx, dy = x.dim, y.dim
    rows = hom_probe_matrix(f, dy * dx, _law_residuals(e, x, y, cs))
    basis = []
    for vec in nullspace(f, rows):
        mat = tuple(tuple(vec[r * dx + c] for c in range(dx)) for r in range(dy))
        basis.append(LinMap(f, (dx,), (dy,), mat))
    return basis


def morphism_ok(e: Entwining, x: EntwinedObject, y: EntwinedObject,
                fm: LinMap, cs: ConstraintSet = ENTWINED_MORPHISMS) -> bool:
    """Re-verify one map against the laws, entry by entry."""
    f = e.field
    dx = x.dim
    flat = [v for row in fm.with_shapes((dx,), (y.dim,)).mat for v in row]
    for op in _law_residuals(e, x, y, cs):
        total = None
        for t, coeff in enumerate(flat):
            if not coeff:
                continue
            vals = op(t)
            if total is None:
                total = [coeff * v for v in vals]
            else:
                total = [s + coeff * v for s, v in zip(total, vals)]
        if total is not None and any(total):
            return False
    return True


# ---------------------------------------------------------------------------
# verdicts and search configuration

@dataclass(frozen=True)
class SearchConfig:
    enum_budget: int = 1 << 16
    trials: int = 64
    seed: int = 0


@dataclass
class Verdict:
    """Outcome of a decision question.

    status is "yes", "no", or "unknown"; "no" is only ever reported when the
    search was logically complete, so it is a theorem about the input, not a
    statement about sampling.  Witness payloads are re-verifiable data.
    """

    question: str
    status: str
    reason: str
    witness: dict = dc_field(default_factory=dict)
    meta: dict = dc_field(default_factory=dict)

    @property
    def definitive(self) -> bool:
        return self.status in ("yes", "no")


# ---------------------------------------------------------------------------
# candidate enumeration

def _projective_points(field: Field, dim: int):
    """All nonzero coefficient vectors over F_p, one per scalar line."""
    els = list(field.elements())
    zero, one = field.zero, field.one
    for lead in range(dim):
        for tail in itertools.product(els, repeat=dim - lead - 1):
            yield [zero] * lead + [one] + list(tail)


def _projective_count(p: int, dim: int) -> int:
    return (p ** dim - 1) // (p - 1)


def _grid_points(field: Field, dim: int, values: Sequence[int]):
    """Deterministic integer-grid scan, zero vector excluded."""
    els = [field.of(v) for v in values]
    for combo in itertools.product(els, repeat=dim):
        if any(combo):
            yield list(combo)


def _random_points(field: Field, dim: int, trials: int, seed: int):
    rng = random.Random(seed)
    for _ in range(trials):
        vec = [field.random(rng) for _ in range(dim)]
        if any(vec):
            yield vec


def search_candidates(field: Field, dim: int, attempt: Callable[[list], Optional[dict]],
                      cfg: SearchConfig, grid_values: Optional[Sequence[int]] = None):
    """Scan coefficient vectors for the candidate space, one scalar line at most
    once over F_p.

    `attempt` returns a witness payload or None.  The boolean in the result
    marks whether a miss is exhaustive for the whole space of nonzero
    candidates up to scaling, which the caller must ensure is enough (the
    conditions have to be scale-compatible for projective completeness).

    Returns (payload_or_None, complete, meta).
    """
    meta = {"seed": cfg.seed, "budget": cfg.enum_budget, "points": 0}
    if dim == 0:
        meta["mode"] = "empty-space"
        return None, True, meta

    if field.kind == "Fp":
        total = _projective_count(field.p, dim)
        complete = total <= cfg.enum_budget
        meta["mode"] = "projective-exhaustive" if complete else "projective-partial"
        source = itertools.islice(_projective_points(field, dim), cfg.enum_budget)
    elif dim == 1:
        # one scalar line: a single representative settles it
        complete = True
        meta["mode"] = "single-line"
        source = iter([[field.one]])
    else:
        values = list(grid_values) if grid_values is not None else [0, 1, -1]
        total = len(values) ** dim
        complete = total <= cfg.enum_budget and grid_values is not None
        meta["mode"] = "grid-complete" if complete else "grid+random"
        grid = itertools.islice(_grid_points(field, dim, values), cfg.enum_budget)
        source = grid if complete else itertools.chain(
            grid, _random_points(field, dim, cfg.trials, cfg.seed))

    for coeffs in source:
        meta["points"] += 1
        hit = attempt(coeffs)
        if hit is not None:
            return hit, complete, meta
    return None, complete, meta


def combine_in_span(field: Field, basis: Sequence[LinMap], coeffs: Sequence) -> LinMap:
    b0 = basis[0]
    rows, cols = len(b0.mat), len(b0.mat[0])
    acc = [[field.zero] * cols for _ in range(rows)]
    for s, b in zip(coeffs, basis):
        if not s:
            continue
        for r, row in enumerate(b.mat):
            arow = acc[r]
            for c, v in enumerate(row):
                if v:
                    arow[c] = arow[c] + s * v
    return LinMap(field, b0.dom, b0.cod, tuple(tuple(r) for r in acc))


def find_invertible_in_span(field: Field, basis: Sequence[LinMap],
                            cfg: SearchConfig):
    """Search span(basis) for an invertible map.

    Invertibility is invariant under scaling, so projective enumeration over
    F_p is complete.  Over Q the determinant restricted to the span is a
    polynomial of degree at most n, and vanishing on the grid {0..n}^dim
    forces it to vanish identically, so a full grid miss certifies "no".

    Returns (status, f, f_inverse, meta).
    """
    if not basis:
        return "no", None, None, {"mode": "empty-space", "points": 0}
    n = basis[0].dim_dom
    if basis[0].dim_cod != n:
        return "no", None, None, {"mode": "non-square", "points": 0}

    found = {}

    def attempt(coeffs):
        cand = combine_in_span(field, basis, coeffs)
        inv = cand.inverse()
        if inv is None:
            return None
        return {"f": cand, "finv": inv}

    grid = None if field.kind == "Fp" else range(n + 1)
    hit, complete, meta = search_candidates(field, len(basis), attempt, cfg,
                                            grid_values=grid)
    if hit is not None:
        return "yes", hit["f"], hit["finv"], meta
    if complete:
        if field.kind == "Q" and len(basis) > 1:
            meta["certificate"] = "determinant vanishes on a degree-covering grid"
        return "no", None, None, meta
    return "unknown", None, None, meta


def iso_exists(e: Entwining, x: EntwinedObject, y: EntwinedObject,
               cs: ConstraintSet, cfg: SearchConfig = SearchConfig()) -> Verdict:
    """Is there an isomorphism X -> Y respecting the chosen laws?"""
    q = "iso-exists"
    if x.dim != y.dim:
        return Verdict(q, "no", "dimension mismatch: %d != %d" % (x.dim, y.dim),
                       meta={"definitive": True})
    basis = hom_basis(e, x, y, cs)
    if not basis:
        return Verdict(q, "no", "hom space is zero", meta={"definitive": True})
    status, fm, finv, meta = find_invertible_in_span(e.field, basis, cfg)
    meta["hom_dim"] = len(basis)
    meta["definitive"] = status != "unknown"
    if status == "yes":
        if not morphism_ok(e, x, y, fm, cs):
            raise ParseError("internal: found iso violates the morphism laws")
        return Verdict(q, "yes", "invertible morphism found",
                       witness={"iso": fm, "inverse": finv}, meta=meta)
    if status == "no":
        return Verdict(q, "no", "no invertible element in the morphism space", meta=meta)
    return Verdict(q, "unknown",
                   "search budget exhausted without an invertible candidate", meta=meta)


# ---------------------------------------------------------------------------
# affine solving inside a known span

def solve_affine_in_span(field: Field, dim: int,
                         residual_at: Callable[[list], Sequence]):
    """Solve residual(x) = 0 for x in a dim-dimensional coefficient space.

    `residual_at` must be affine in the coefficients.  Returns
    (particular_coeffs_or_None, kernel_basis).
    """
    zero, one = field.zero, field.one
    base = list(residual_at([zero] * dim))
    cols = []
    for j in range(dim):
        probe = [zero] * dim
        probe[j] = one
        cols.append([x - b for x, b in zip(residual_at(probe), base)])
    rows = [[cols[j][i] for j in range(dim)] for i in range(len(base))]
    rhs = [-b for b in base]
    if not rows:
        # no conditions at all: everything solves
        kern = []
        for j in range(dim):
            v = [zero] * dim
            v[j] = one
            kern.append(tuple(v))
        return [zero] * dim, kern
    return solve_linear(field, rows, rhs)
