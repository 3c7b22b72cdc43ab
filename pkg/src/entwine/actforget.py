"""Separability and Frobenius analysis for the action-forgetting adjunction.

G' forgets the action of an entwined module; - (x) A is its left adjoint.
The relevant solution spaces are

  V1': functionals vartheta: C (x) A -> k balancing comultiplication
       against the psi-twist;
  W1': maps e: C -> A (x) A that are coassociative under the twist and
       centralize multiplication.

Separability of either functor is affine feasibility; the Frobenius property
searches for a compatible pair (vartheta, e), either directly or through an
isomorphism C (x) A ~ A* (x) C in the bicomodule category.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .entwining import (
    Entwining,
    invert_psi,
    std_object_AstarC,
    std_object_CA,
)
from .exactlin import (
    InternalCheckError,
    LinMap,
    SolutionSpace,
    basis_vec,
    hom_probe_matrix,
    nullspace,
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

FROBENIUS_PRIME_CS = ConstraintSet(right_A_linear=True, right_C_colinear=True,
                                   left_C_colinear=True)


def _flat(lm: LinMap) -> list:
    return [v for row in lm.mat for v in row]


# ---------------------------------------------------------------------------
# the two solution spaces

def _vartheta_law(e: Entwining, vt: LinMap) -> LinMap:
    """vartheta(c1 (x) a_psi) c2^psi - c1 vartheta(c2 (x) a), as one map."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    ida = LinMap.identity(f, (na,))
    idc = LinMap.identity(f, (nc,))
    v = vt.with_shapes((nc, na), (1,))
    lhs = (v.tensor(idc)
           .compose(idc.tensor(e.psi))
           .compose(e.c.comult_map().tensor(ida)))
    rhs = idc.tensor(v).compose(e.c.comult_map().tensor(ida))
    return lhs.with_shapes((nc, na), (nc,)).sub(rhs.with_shapes((nc, na), (nc,)))


def vartheta_residual(e: Entwining, vt: LinMap) -> list[str]:
    return [] if _vartheta_law(e, vt).is_zero() else ["vartheta-balance"]


def compute_V1prime(e: Entwining) -> SolutionSpace:
    """Basis of the vartheta space, each element a functional on C (x) A."""
    f = e.field
    na, nc = e.a.dim, e.c.dim

    def op(t):
        mat = (tuple(f.one if c == t else f.zero for c in range(nc * na)),)
        return _flat(_vartheta_law(e, LinMap(f, (nc, na), (1,), mat)))

    rows = hom_probe_matrix(f, nc * na, [op])
    basis = [LinMap(f, (nc, na), (1,), (tuple(vec),)) for vec in nullspace(f, rows)]
    return SolutionSpace(basis, lambda vt: vartheta_residual(e, vt))


def _e_laws(e: Entwining, em: LinMap) -> list[tuple[str, LinMap]]:
    f = e.field
    na, nc = e.a.dim, e.c.dim
    ida = LinMap.identity(f, (na,))
    idc = LinMap.identity(f, (nc,))
    m = e.a.mult_map()
    delta = e.c.comult_map()
    emap = em.with_shapes((nc,), (na, na))

    # e(c1) (x) c2 = double psi push-through of c1 (x) e(c2)
    lhs = emap.tensor(idc).compose(delta)
    rhs = (ida.tensor(e.psi)
           .compose(e.psi.tensor(ida))
           .compose(idc.tensor(emap))
           .compose(delta))
    coassoc = lhs.with_shapes((nc,), (na, na, nc)).sub(
        rhs.with_shapes((nc,), (na, na, nc)))

    # e1(c) (x) e2(c) a = a_psi e1(c^psi) (x) e2(c^psi)
    lhs = ida.tensor(m).compose(emap.tensor(ida))
    rhs = m.tensor(ida).compose(ida.tensor(emap)).compose(e.psi)
    central = lhs.with_shapes((nc, na), (na, na)).sub(
        rhs.with_shapes((nc, na), (na, na)))
    return [("e-coaction-shift", coassoc), ("e-central", central)]


def e_residual(e: Entwining, em: LinMap) -> list[str]:
    return [name for name, diff in _e_laws(e, em) if not diff.is_zero()]


def compute_W1prime(e: Entwining) -> SolutionSpace:
    """Basis of the Casimir-style space of maps C -> A (x) A."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    rows_n = na * na

    def op(t):
        mat = tuple(tuple(f.one if (r == t // nc and c == t % nc) else f.zero
                          for c in range(nc)) for r in range(rows_n))
        unit = LinMap(f, (nc,), (na, na), mat)
        out = []
        for _, diff in _e_laws(e, unit):
            out.extend(_flat(diff))
        return out

    rows = hom_probe_matrix(f, rows_n * nc, [op])
    basis = []
    for vec in nullspace(f, rows):
        mat = tuple(tuple(vec[r * nc + c] for c in range(nc)) for r in range(rows_n))
        basis.append(LinMap(f, (nc,), (na, na), mat))
    return SolutionSpace(basis, lambda em: e_residual(e, em))


# ---------------------------------------------------------------------------
# separability

def Fprime_separable(e: Entwining) -> Verdict:
    """Is - (x) A separable?  Needs vartheta with vartheta(c (x) 1) = eps(c)."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    v1 = compute_V1prime(e)
    idc = LinMap.identity(f, (nc,))
    unit_leg = idc.tensor(LinMap.const(f, list(e.a.unit), (na,)))
    target = e.c.counit_map()

    def residual(coeffs):
        vt = (combine_in_span(f, v1.basis, coeffs) if v1.basis
              else LinMap.zero_map(f, (nc, na), (1,)))
        got = vt.compose(unit_leg.with_shapes((nc,), (nc, na)))
        return _flat(got.with_shapes((nc,), (1,)).sub(
            target.with_shapes((nc,), (1,))))

    part, _ = solve_affine_in_span(f, v1.dim, residual)
    meta = {"V1prime_dim": v1.dim, "definitive": True}
    if part is None:
        return Verdict("Fp-sep", "no",
                       "counit normalization is infeasible over the vartheta space",
                       meta=meta)
    vt = (combine_in_span(f, v1.basis, part) if v1.basis
          else LinMap.zero_map(f, (nc, na), (1,)))
    if vartheta_residual(e, vt):
        raise InternalCheckError("Fp-sep witness fails the vartheta law")
    return Verdict("Fp-sep", "yes", "normalized vartheta found",
                   witness={"vartheta": vt}, meta=meta)


def Gprime_separable(e: Entwining) -> Verdict:
    """Is forgetting the action separable?  Needs e with m . e = unit . counit."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    w1 = compute_W1prime(e)
    m = e.a.mult_map()
    target = e.a.unit_map().compose(e.c.counit_map()).with_shapes((nc,), (na,))

    def residual(coeffs):
        em = (combine_in_span(f, w1.basis, coeffs) if w1.basis
              else LinMap.zero_map(f, (nc,), (na, na)))
        return _flat(m.compose(em).with_shapes((nc,), (na,)).sub(target))

    part, _ = solve_affine_in_span(f, w1.dim, residual)
    meta = {"W1prime_dim": w1.dim, "definitive": True}
    if part is None:
        return Verdict("Gp-sep", "no",
                       "multiplication normalization is infeasible over the e space",
                       meta=meta)
    em = (combine_in_span(f, w1.basis, part) if w1.basis
          else LinMap.zero_map(f, (nc,), (na, na)))
    if e_residual(e, em):
        raise InternalCheckError("Gp-sep witness fails the e laws")
    return Verdict("Gp-sep", "yes", "separating e-map found",
                   witness={"e": em}, meta=meta)


# ---------------------------------------------------------------------------
# Frobenius

def _frobenius_condition_maps(e: Entwining, em: LinMap, vt: LinMap):
    """Both normalization maps C -> A for a pair (vartheta, e)."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    ida = LinMap.identity(f, (na,))
    idc = LinMap.identity(f, (nc,))
    v = vt.with_shapes((nc, na), (1,))
    emap = em.with_shapes((nc,), (na, na))
    delta = e.c.comult_map()

    # c |-> vartheta(c1 (x) e1(c2)) e2(c2)
    first = (v.tensor(ida)
             .compose(idc.tensor(emap))
             .compose(delta)).with_shapes((nc,), (na,))
    # c |-> e1(c2)_psi vartheta(c1^psi (x) e2(c2))
    second = (ida.tensor(v)
              .compose(e.psi.tensor(ida))
              .compose(idc.tensor(emap))
              .compose(delta)).with_shapes((nc,), (na,))
    return first, second


def frobenius_prime_residual(e: Entwining, vt: LinMap, em: LinMap) -> list[str]:
    bad = vartheta_residual(e, vt) + e_residual(e, em)
    target = e.a.unit_map().compose(e.c.counit_map()).with_shapes(
        (e.c.dim,), (e.a.dim,))
    first, second = _frobenius_condition_maps(e, em, vt)
    if first != target:
        bad.append("frobenius-normalization-plain")
    if second != target:
        bad.append("frobenius-normalization-twisted")
    return bad


def _extract_vartheta(e: Entwining, iso: LinMap) -> LinMap:
    """vartheta(c (x) a) = <iso(c (x) a), 1 (x) counit>."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    row = []
    for gamma in range(nc):
        for beta in range(na):
            acc = f.zero
            for i in range(na):
                u = e.a.unit[i]
                if not u:
                    continue
                for v in range(nc):
                    cv = e.c.counit[v]
                    if cv:
                        acc = acc + u * cv * iso.mat[i * nc + v][gamma * na + beta]
            row.append(acc)
    return LinMap(f, (nc, na), (1,), (tuple(row),))


def _extract_e(e: Entwining, iso_inv: LinMap) -> LinMap:
    """e(c) = sum_i a_i (x) (counit (x) id) iso_inv(a_i* (x) c)."""
    f = e.field
    na, nc = e.a.dim, e.c.dim
    mat = [[f.zero] * nc for _ in range(na * na)]
    for gamma in range(nc):
        for i in range(na):
            for t in range(na):
                acc = f.zero
                for v in range(nc):
                    cv = e.c.counit[v]
                    if cv:
                        acc = acc + cv * iso_inv.mat[v * na + t][i * nc + gamma]
                mat[i * na + t][gamma] = acc
    return LinMap(f, (nc,), (na, na), tuple(tuple(r) for r in mat))


def FprimeGprime_frobenius(e: Entwining, cfg: SearchConfig = SearchConfig(),
                           route: str = "auto") -> Verdict:
    """Is (- (x) A, forget-action) a Frobenius pair?

    route="search" scans the e space projectively and solves for vartheta;
    route="iso" looks for an invertible bicomodule morphism
    C (x) A -> A* (x) C; route="auto" chains them.
    """
    if route not in ("auto", "search", "iso"):
        raise ValueError("route must be auto, search, or iso")
    f = e.field
    na, nc = e.a.dim, e.c.dim
    q = "FpGp-frob"

    verdict_search = None
    if route in ("auto", "search"):
        v1 = compute_V1prime(e)
        w1 = compute_W1prime(e)
        target = _flat(e.a.unit_map().compose(e.c.counit_map())
                       .with_shapes((nc,), (na,)))

        def attempt(e_coeffs):
            em = (combine_in_span(f, w1.basis, e_coeffs) if w1.basis
                  else LinMap.zero_map(f, (nc,), (na, na)))

            def residual(vt_coeffs):
                vt = (combine_in_span(f, v1.basis, vt_coeffs) if v1.basis
                      else LinMap.zero_map(f, (nc, na), (1,)))
                first, second = _frobenius_condition_maps(e, em, vt)
                return ([x - t for x, t in zip(_flat(first), target)]
                        + [x - t for x, t in zip(_flat(second), target)])

            part, _ = solve_affine_in_span(f, v1.dim, residual)
            if part is None:
                return None
            vt = (combine_in_span(f, v1.basis, part) if v1.basis
                  else LinMap.zero_map(f, (nc, na), (1,)))
            return {"vartheta": vt, "e": em}

        hit, complete, meta = search_candidates(f, w1.dim, attempt, cfg)
        meta.update({"V1prime_dim": v1.dim, "W1prime_dim": w1.dim, "route": "search"})
        if hit is not None:
            bad = frobenius_prime_residual(e, hit["vartheta"], hit["e"])
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

    x = std_object_CA(e, validate=False)
    y = std_object_AstarC(e, validate=False)
    iso = iso_exists(e, x, y, FROBENIUS_PRIME_CS, cfg)
    meta = dict(iso.meta)
    meta["route"] = "iso"
    if iso.status == "yes":
        vt = _extract_vartheta(e, iso.witness["iso"])
        em = _extract_e(e, iso.witness["inverse"])
        bad = frobenius_prime_residual(e, vt, em)
        if bad:
            raise InternalCheckError("iso-extracted Frobenius pair fails %r" % bad)
        return Verdict(q, "yes",
                       "Frobenius pair extracted from a bicomodule isomorphism",
                       witness={"vartheta": vt, "e": em,
                                "iso": iso.witness["iso"]}, meta=meta)
    if iso.status == "no":
        return Verdict(q, "no", "no invertible bicomodule morphism exists: " + iso.reason,
                       meta=meta)
    return verdict_search or Verdict(q, "unknown", iso.reason, meta=meta)


# ---------------------------------------------------------------------------
# converters

def e_to_omega(e: Entwining, em: LinMap) -> LinMap:
    """The morphism A* (x) C -> C (x) A attached to e.

    omega(a* (x) c) = <a*, e1(c2)_psi> c1^psi (x) e2(c2), with psi applied
    to (c1 (x) e1(c2)).
    """
    f = e.field
    na, nc = e.a.dim, e.c.dim
    emap = em.with_shapes((nc,), (na, na))
    mat = [[f.zero] * (na * nc) for _ in range(nc * na)]
    for gamma in range(na):
        for delta in range(nc):
            col = gamma * nc + delta
            for j1 in range(nc):
                for j2 in range(nc):
                    d = e.c.comult[delta][j1][j2]
                    if not d:
                        continue
                    for b1 in range(na):
                        for b2 in range(na):
                            ev = emap.mat[b1 * na + b2][j2]
                            if not ev:
                                continue
                            for u in range(nc):
                                p = e.psi_entry(gamma, u, j1, b1)
                                if p:
                                    mat[u * na + b2][col] = \
                                        mat[u * na + b2][col] + d * ev * p
    return LinMap(f, (na, nc), (nc, na), tuple(tuple(r) for r in mat))


def omega_to_e(e: Entwining, omega: LinMap) -> LinMap:
    return _extract_e(e, omega.with_shapes((e.a.dim * e.c.dim,),
                                           (e.c.dim * e.a.dim,)))


def vartheta_to_omegabar(e: Entwining, vt: LinMap) -> LinMap:
    """The morphism C (x) A -> A* (x) C attached to vartheta.

    omegabar(c (x) a) = sum_i vartheta(c1 (x) a_psi a_i) a_i* (x) c2^psi,
    with psi applied to (c2 (x) a).
    """
    f = e.field
    na, nc = e.a.dim, e.c.dim
    v = vt.with_shapes((nc, na), (1,))
    mat = [[f.zero] * (nc * na) for _ in range(na * nc)]
    for gamma in range(nc):
        for beta in range(na):
            col = gamma * na + beta
            for j1 in range(nc):
                for j2 in range(nc):
                    d = e.c.comult[gamma][j1][j2]
                    if not d:
                        continue
                    for alpha in range(na):
                        for vv in range(nc):
                            p = e.psi_entry(alpha, vv, j2, beta)
                            if not p:
                                continue
                            for i in range(na):
                                for t, mm in enumerate(e.a.mult[alpha][i]):
                                    if not mm:
                                        continue
                                    tv = v.mat[0][j1 * na + t]
                                    if tv:
                                        mat[i * nc + vv][col] = \
                                            mat[i * nc + vv][col] + d * p * mm * tv
    return LinMap(f, (nc, na), (na, nc), tuple(tuple(r) for r in mat))


def omegabar_to_vartheta(e: Entwining, omegabar: LinMap) -> LinMap:
    return _extract_vartheta(e, omegabar.with_shapes((e.c.dim * e.a.dim,),
                                                     (e.a.dim * e.c.dim,)))


# ---------------------------------------------------------------------------
# dual bases

def dual_basis_A(e: Entwining, vt: LinMap, em: LinMap,
                 c_vec: Optional[Sequence] = None):
    """Dual basis of A built from a Frobenius pair, for invertible psi.

    Fix c with eps(c) = 1 and expand (id (x) e) Delta(c) = sum_i c_i (x) b_i
    (x) a_i.  The elements are the a_i; the functional paired with a_i sends
    a to vartheta(c_i^phi (x) a_phi b_i), phi = psi^{-1} applied to (a (x) c_i).
    Returns (basis, resolves_identity); fails loudly when psi is singular.
    """
    f = e.field
    na, nc = e.a.dim, e.c.dim
    phi, rep = invert_psi(e)
    if phi is None:
        raise InternalCheckError("dual basis requires invertible psi")
    if c_vec is None:
        pick = next((i for i in range(nc) if e.c.counit[i]), None)
        if pick is None:
            raise InternalCheckError("counit is zero; no normalized c exists")
        scale = f.one / e.c.counit[pick]
        c_vec = [scale * x for x in basis_vec(f, nc, pick)]

    emap = em.with_shapes((nc,), (na, na))
    idc = LinMap.identity(f, (nc,))
    spread = idc.tensor(emap).compose(e.c.comult_map()).with_shapes(
        (nc,), (nc, na, na))
    coeffs = spread.apply(list(c_vec))

    elements = []
    functionals = []
    v = vt.with_shapes((nc, na), (1,))
    for u in range(nc):
        for s in range(na):
            for t in range(na):
                w = coeffs[(u * na + s) * na + t]
                if not w:
                    continue
                elements.append(tuple(basis_vec(f, na, t)))
                # a |-> w * vartheta(phi(a (x) e_u) multiplied into e_s)
                lift = phi.compose(
                    LinMap.identity(f, (na,)).tensor(
                        LinMap.const(f, basis_vec(f, nc, u), (nc,))))
                func = (v.compose(idc.tensor(e.a.rmult(basis_vec(f, na, s))))
                        .compose(lift.with_shapes((na,), (nc, na)))
                        .scale(w)).with_shapes((na,), (1,))
                functionals.append(func)

    # resolution of identity: a |-> sum_i a_i sigma_i(a)
    resolver = LinMap.zero_map(f, (na,), (na,))
    for el, func in zip(elements, functionals):
        outer = LinMap.const(f, list(el), (na,)).compose(
            func.with_shapes((na,), (1,)))
        resolver = resolver.add(outer.with_shapes((na,), (na,)))
    ok = resolver == LinMap.identity(f, (na,))
    note = "dual basis of A from a Frobenius pair, via the inverse entwining"
    return DualBasis(tuple(elements), tuple(functionals), note), ok
