"""Separability and Frobenius analysis for the coaction-forgetting adjunction.

F forgets the coaction of an entwined module; its right adjoint is - (x) C.
All questions reduce to exact linear algebra over two solution spaces:

  V1: maps theta: C (x) C -> A satisfying a centrality law and a
      comultiplication-compatibility law;
  W1: elements z of A (x) C centralized by A, where the right A-action on
      A (x) C runs through psi.

Separability of either functor is an affine feasibility question over V1 or
W1.  The Frobenius property asks for a compatible pair (theta, z); it is
decided either by scanning W1 candidates and solving linearly for theta
("search" route), or through an isomorphism A (x) C ~ C* (x) A in the
bimodule category, from which a pair is extracted ("iso" route).
"""

from __future__ import annotations

from typing import Optional, Sequence

from .entwining import (
    Entwining,
    std_object_AC,
    std_object_CstarA,
)
from .exactlin import (
    InternalCheckError,
    LinMap,
    SolutionSpace,
    basis_vec,
    hom_probe_matrix,
    kron_vec,
    nullspace,
    swap_map,
)
from .homspaces import (
    ConstraintSet,
    SearchConfig,
    Verdict,
    combine_in_span,
    iso_exists,
    search_candidates,
    solve_affine_in_span,
)
from .structures import DualBasis

FROBENIUS_CS = ConstraintSet(right_A_linear=True, right_C_colinear=True,
                             left_A_linear=True)


def _flat(lm: LinMap) -> list:
    return [v for row in lm.mat for v in row]


def _theta_laws(e: Entwining, theta: LinMap) -> list[tuple[str, LinMap]]:
    f = e.field
    na, nc = e.a.dim, e.c.dim
    ida = LinMap.identity(f, (na,))
    idc = LinMap.identity(f, (nc,))
    m = e.a.mult_map()
    th = theta.with_shapes((nc, nc), (na,))

    # theta is central for the psi-twisted multiplications
    lhs = m.compose(th.tensor(ida))
    rhs = (m.compose(ida.tensor(th))
           .compose(e.psi.tensor(idc))
           .compose(idc.tensor(e.psi)))
    central = lhs.with_shapes((nc, nc, na), (na,)).sub(
        rhs.with_shapes((nc, nc, na), (na,)))

    # theta twisted around comultiplication
    lhs = th.tensor(idc).compose(idc.tensor(e.c.comult_map()))
    rhs = e.psi.compose(idc.tensor(th)).compose(e.c.comult_map().tensor(idc))
    comult = lhs.with_shapes((nc, nc), (na, nc)).sub(
        rhs.with_shapes((nc, nc), (na, nc)))
    return [("theta-central", central), ("theta-comult", comult)]


def theta_residual(e: Entwining, theta: LinMap) -> list[str]:
    return [name for name, diff in _theta_laws(e, theta) if not diff.is_zero()]


def compute_V1(e: Entwining) -> SolutionSpace:
    """Basis of the theta-space, each element a map C (x) C -> A."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    cols = nc * nc

    def op(t):
        mat = tuple(tuple(f.one if (r == t // cols and c == t % cols) else f.zero
                          for c in range(cols)) for r in range(na))
        unit = LinMap(f, (nc, nc), (na,), mat)
        out = []
        for _, diff in _theta_laws(e, unit):
            out.extend(_flat(diff))
        return out

    rows = hom_probe_matrix(f, na * cols, [op])
    basis = []
    for vec in nullspace(f, rows):
        mat = tuple(tuple(vec[r * cols + c] for c in range(cols)) for r in range(na))
        basis.append(LinMap(f, (nc, nc), (na,), mat))
    return SolutionSpace(basis, lambda th: theta_residual(e, th))


def z_residual(e: Entwining, z: Sequence) -> list[str]:
    f = e.field
    na, nc = e.a.dim, e.c.dim
    act = std_object_AC(e, validate=False).act
    idc = LinMap.identity(f, (nc,))
    bad = []
    for beta in range(na):
        left = _apply_lmult(e, beta, z)
        right = act.apply(kron_vec(list(z), basis_vec(f, na, beta)))
        if list(left) != list(right):
            bad.append("z-central@a%d" % beta)
    return bad


def _apply_lmult(e: Entwining, beta: int, z: Sequence):
    f = e.field
    na, nc = e.a.dim, e.c.dim
    lm = e.a.lmult(basis_vec(f, na, beta))
    return lm.tensor(LinMap.identity(f, (nc,))).with_shapes((na, nc), (na, nc)).apply(list(z))


def compute_W1(e: Entwining) -> SolutionSpace:
    """Basis of the centralized elements of A (x) C."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    act = std_object_AC(e, validate=False).act
    idc = LinMap.identity(f, (nc,))
    diffs = []
    for beta in range(na):
        left = e.a.lmult(basis_vec(f, na, beta)).tensor(idc)
        right = act.compose(
            LinMap.identity(f, (na * nc,)).tensor(
                LinMap.const(f, basis_vec(f, na, beta), (na,))))
        diffs.append(left.with_shapes((na * nc,), (na * nc,)).sub(
            right.with_shapes((na * nc,), (na * nc,))))

    rows = hom_probe_matrix(f, na * nc, [
        (lambda t, d=d: list(d.column(t))) for d in diffs])
    basis = [tuple(v) for v in nullspace(f, rows)]
    return SolutionSpace(basis, lambda z: z_residual(e, z))


# ---------------------------------------------------------------------------
# separability

def F_separable(e: Entwining) -> Verdict:
    """Does forgetting the coaction give a separable functor?

    Equivalent to a theta in V1 with theta . Delta = unit . counit; decided
    by one exact linear solve, so the answer is always definitive.
    """
    f = e.field
    na, nc = e.a.dim, e.c.dim
    v1 = compute_V1(e)
    target = e.a.unit_map().compose(e.c.counit_map()).with_shapes((nc,), (na,))

    def residual(coeffs):
        if v1.basis:
            th = combine_in_span(f, v1.basis, coeffs)
        else:
            th = LinMap.zero_map(f, (nc, nc), (na,))
        diff = th.compose(e.c.comult_map()).with_shapes((nc,), (na,)).sub(target)
        return _flat(diff)

    part, _ = solve_affine_in_span(f, v1.dim, residual)
    meta = {"V1_dim": v1.dim, "definitive": True}
    if part is None:
        return Verdict("F-sep", "no",
                       "counit normalization is infeasible over the theta space",
                       meta=meta)
    theta = combine_in_span(f, v1.basis, part) if v1.basis else \
        LinMap.zero_map(f, (nc, nc), (na,))
    if theta_residual(e, theta):
        raise InternalCheckError("F-sep witness fails the theta laws")
    return Verdict("F-sep", "yes", "normalized theta found",
                   witness={"theta": theta}, meta=meta)


def G_separable(e: Entwining) -> Verdict:
    """Is - (x) C separable?  Needs z in W1 with (id (x) counit) z = 1."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    w1 = compute_W1(e)
    counit_leg = LinMap.identity(f, (na,)).tensor(e.c.counit_map())
    target = list(e.a.unit)

    def residual(coeffs):
        z = _combine_vec(f, w1.basis, coeffs, na * nc)
        val = counit_leg.with_shapes((na * nc,), (na,)).apply(z)
        return [x - t for x, t in zip(val, target)]

    part, _ = solve_affine_in_span(f, w1.dim, residual)
    meta = {"W1_dim": w1.dim, "definitive": True}
    if part is None:
        return Verdict("G-sep", "no",
                       "unit normalization is infeasible over the z space",
                       meta=meta)
    z = _combine_vec(f, w1.basis, part, na * nc)
    if z_residual(e, z):
        raise InternalCheckError("G-sep witness is not centralized")
    return Verdict("G-sep", "yes", "normalized integral found",
                   witness={"z": tuple(z)}, meta=meta)


def _combine_vec(field, basis, coeffs, length):
    out = [field.zero] * length
    for s, vec in zip(coeffs, basis):
        if s:
            out = [x + s * y for x, y in zip(out, vec)]
    return out


# ---------------------------------------------------------------------------
# Frobenius

def _frobenius_condition_maps(e: Entwining, z: Sequence, theta: LinMap):
    """The two normalization maps C -> A evaluated for a concrete pair."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    ida = LinMap.identity(f, (na,))
    idc = LinMap.identity(f, (nc,))
    m = e.a.mult_map()
    th = theta.with_shapes((nc, nc), (na,))
    zc = LinMap.const(f, list(z), (na, nc))

    # d |-> sum_l a_l theta(c_l (x) d)
    first = (m.compose(ida.tensor(th))
             .compose(zc.tensor(idc)).with_shapes((nc,), (na,)))
    # d |-> sum_l a_l_psi theta(d^psi (x) c_l)
    second = (m.compose(ida.tensor(th))
              .compose(e.psi.tensor(idc))
              .compose(idc.tensor(zc)).with_shapes((nc,), (na,)))
    return first, second


def frobenius_residual(e: Entwining, theta: LinMap, z: Sequence) -> list[str]:
    """Violated conditions for a claimed Frobenius pair (theta, z)."""
    bad = theta_residual(e, theta) + z_residual(e, z)
    target = e.a.unit_map().compose(e.c.counit_map()).with_shapes(
        (e.c.dim,), (e.a.dim,))
    first, second = _frobenius_condition_maps(e, z, theta)
    if first != target:
        bad.append("frobenius-normalization-plain")
    if second != target:
        bad.append("frobenius-normalization-twisted")
    return bad


def _extract_theta(e: Entwining, iso: LinMap) -> LinMap:
    """theta(d (x) c) = iso(1 (x) c) evaluated at d."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    mat = [[f.zero] * (nc * nc) for _ in range(na)]
    for gamma in range(nc):
        for d in range(nc):
            for s in range(na):
                acc = f.zero
                for beta in range(na):
                    u = e.a.unit[beta]
                    if u:
                        acc = acc + u * iso.mat[d * na + s][beta * nc + gamma]
                mat[s][d * nc + gamma] = acc
    return LinMap(f, (nc, nc), (na,), tuple(tuple(r) for r in mat))


def _extract_z(e: Entwining, iso_inv: LinMap):
    """z = iso^{-1}(counit (x) 1)."""
    f = e.field
    eps = list(e.c.counit)
    return tuple(iso_inv.with_shapes((e.c.dim * e.a.dim,),
                                     (e.a.dim * e.c.dim,)).apply(
        kron_vec(eps, list(e.a.unit))))


def FG_frobenius(e: Entwining, cfg: SearchConfig = SearchConfig(),
                 route: str = "auto") -> Verdict:
    """Is (forget-coaction, - (x) C) a Frobenius pair?

    route="search": scan W1 candidates projectively, solving linearly for
    theta.  route="iso": look for an invertible bimodule morphism
    A (x) C -> C* (x) A and extract the pair from it.  route="auto" runs the
    search first and falls back to the isomorphism test for definitiveness.
    """
    if route not in ("auto", "search", "iso"):
        raise ValueError("route must be auto, search, or iso")
    f = e.field
    na, nc = e.a.dim, e.c.dim
    q = "FG-frob"

    verdict_search = None
    if route in ("auto", "search"):
        v1 = compute_V1(e)
        w1 = compute_W1(e)
        target = _flat(e.a.unit_map().compose(e.c.counit_map())
                       .with_shapes((nc,), (na,)))

        def attempt(z_coeffs):
            z = _combine_vec(f, w1.basis, z_coeffs, na * nc)

            def residual(theta_coeffs):
                th = (combine_in_span(f, v1.basis, theta_coeffs) if v1.basis
                      else LinMap.zero_map(f, (nc, nc), (na,)))
                first, second = _frobenius_condition_maps(e, z, th)
                return ([x - t for x, t in zip(_flat(first), target)]
                        + [x - t for x, t in zip(_flat(second), target)])

            part, _ = solve_affine_in_span(f, v1.dim, residual)
            if part is None:
                return None
            th = (combine_in_span(f, v1.basis, part) if v1.basis
                  else LinMap.zero_map(f, (nc, nc), (na,)))
            return {"theta": th, "z": tuple(z)}

        hit, complete, meta = search_candidates(f, w1.dim, attempt, cfg)
        meta.update({"V1_dim": v1.dim, "W1_dim": w1.dim, "route": "search"})
        if hit is not None:
            bad = frobenius_residual(e, hit["theta"], hit["z"])
            if bad:
                raise InternalCheckError("Frobenius search witness fails %r" % bad)
            meta["definitive"] = True
            return Verdict(q, "yes", "Frobenius pair found by candidate search",
                           witness=hit, meta=meta)
        if complete:
            meta["definitive"] = True
            return Verdict(q, "no",
                           "candidate space scanned completely; no pair exists",
                           meta=meta)
        meta["definitive"] = False
        verdict_search = Verdict(q, "unknown", "search budget exhausted", meta=meta)
        if route == "search":
            return verdict_search

    x = std_object_AC(e, validate=False)
    y = std_object_CstarA(e, validate=False)
    iso = iso_exists(e, x, y, FROBENIUS_CS, cfg)
    meta = dict(iso.meta)
    meta["route"] = "iso"
    if iso.status == "yes":
        theta = _extract_theta(e, iso.witness["iso"])
        z = _extract_z(e, iso.witness["inverse"])
        bad = frobenius_residual(e, theta, z)
        if bad:
            raise InternalCheckError("iso-extracted Frobenius pair fails %r" % bad)
        return Verdict(q, "yes", "Frobenius pair extracted from a bimodule isomorphism",
                       witness={"theta": theta, "z": z,
                                "iso": iso.witness["iso"]}, meta=meta)
    if iso.status == "no":
        return Verdict(q, "no", "no invertible bimodule morphism exists: " + iso.reason,
                       meta=meta)
    return verdict_search or Verdict(q, "unknown", iso.reason, meta=meta)


# ---------------------------------------------------------------------------
# converters between descriptions

def theta_to_phibar(e: Entwining, theta: LinMap) -> LinMap:
    """The morphism A (x) C -> C* (x) A attached to theta.

    phibar(a (x) c) = sum_i d_i* (x) a_psi theta(d_i^psi (x) c).
    """
    f = e.field
    na, nc = e.a.dim, e.c.dim
    th = theta.with_shapes((nc, nc), (na,))
    mat = [[f.zero] * (na * nc) for _ in range(nc * na)]
    for beta in range(na):
        for gamma in range(nc):
            col = beta * nc + gamma
            for i in range(nc):
                for a2 in range(na):
                    for d2 in range(nc):
                        p = e.psi_entry(a2, d2, i, beta)
                        if not p:
                            continue
                        for s in range(na):
                            tv = th.mat[s][d2 * nc + gamma]
                            if not tv:
                                continue
                            for t_out, mm in enumerate(e.a.mult[a2][s]):
                                if mm:
                                    mat[i * na + t_out][col] = \
                                        mat[i * na + t_out][col] + p * tv * mm
    return LinMap(f, (na, nc), (nc, na), tuple(tuple(r) for r in mat))


def phibar_to_theta(e: Entwining, phibar: LinMap) -> LinMap:
    return _extract_theta(e, phibar.with_shapes((e.a.dim * e.c.dim,),
                                                (e.c.dim * e.a.dim,)))


def z_to_phi(e: Entwining, z: Sequence) -> LinMap:
    """The morphism C* (x) A -> A (x) C attached to z.

    phi(c* (x) a) = sum_l a_l a_psi (x) <c*, c_l(2)> c_l(1)^psi.
    """
    f = e.field
    na, nc = e.a.dim, e.c.dim
    mat = [[f.zero] * (nc * na) for _ in range(na * nc)]
    for gamma in range(nc):
        for beta in range(na):
            col = gamma * na + beta
            for la in range(na):
                for lc in range(nc):
                    zv = z[la * nc + lc]
                    if not zv:
                        continue
                    for j1 in range(nc):
                        d = e.c.comult[lc][j1][gamma]
                        if not d:
                            continue
                        for alpha in range(na):
                            for v in range(nc):
                                p = e.psi_entry(alpha, v, j1, beta)
                                if not p:
                                    continue
                                for t_out, mm in enumerate(e.a.mult[la][alpha]):
                                    if mm:
                                        mat[t_out * nc + v][col] = \
                                            mat[t_out * nc + v][col] + zv * d * p * mm
    return LinMap(f, (nc, na), (na, nc), tuple(tuple(r) for r in mat))


def phi_to_z(e: Entwining, phi: LinMap):
    return _extract_z(e, phi)


# ---------------------------------------------------------------------------
# dual bases

def dual_basis_AC(e: Entwining, theta: LinMap, z: Sequence) -> tuple[DualBasis, bool]:
    """Dual basis for A (x) C as a left A-module, built from a Frobenius pair.

    Elements are 1 (x) c_j; the functional for c_j collects the A-leg of
    sum_l a_l_psi theta(d^psi (x) c_l(1)) (x) c_l(2) at C-coordinate j.
    The pair resolves the identity because that sum collapses to 1 (x) d.
    Returns the basis and whether the resolution holds.
    """
    f = e.field
    na, nc = e.a.dim, e.c.dim
    ida = LinMap.identity(f, (na,))
    idc = LinMap.identity(f, (nc,))
    m = e.a.mult_map()
    th = theta.with_shapes((nc, nc), (na,))
    zc = LinMap.const(f, list(z), (na, nc))

    # S: C -> A (x) C,  d |-> sum a_l_psi theta(d^psi (x) c_l(1)) (x) c_l(2)
    s_map = (m.tensor(idc)
             .compose(ida.tensor(th).tensor(idc))
             .compose(e.psi.tensor(idc).tensor(idc))
             .compose(idc.tensor(ida).tensor(e.c.comult_map()))
             .compose(idc.tensor(zc))).with_shapes((nc,), (na, nc))

    # P(a (x) d) = a . S(d) componentwise in A, keeping the C leg
    p_map = (m.tensor(idc)
             .compose(ida.tensor(s_map))).with_shapes((na, nc), (na, nc))

    functionals = []
    elements = []
    for j in range(nc):
        mat = tuple(tuple(p_map.mat[alpha * nc + j]) for alpha in range(na))
        functionals.append(LinMap(f, (na, nc), (na,), mat))
        elements.append(tuple(kron_vec(list(e.a.unit), basis_vec(f, nc, j))))

    ok = p_map == LinMap.identity(f, (na * nc,)).with_shapes((na, nc), (na, nc))
    note = "left A-module dual basis for A (x) C from a Frobenius pair"
    return DualBasis(tuple(elements), tuple(functionals), note), ok
