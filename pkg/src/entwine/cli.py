"""Command line front end: validate structure files, run analyses, browse
the corpus.

Structure files are a single JSON document with scalars as strings ("3/2"
is accepted over Q, and over F_p when the denominator is invertible):

    {"field": {"kind": "Q"} | {"kind": "Fp", "p": 5},
     <exactly one of>
     "algebra":        {"mult": m[i][j][k], "unit": [...]},
     "coalgebra":      {"comult": d[i][j][k], "counit": [...]},
     "bialgebra":      {"algebra": ..., "coalgebra": ...},
     "entwining":      {"algebra": ..., "coalgebra": ...,
                        "psi": p[c][a][a2][c2]},
     "doi_hopf":       {"bialgebra": ..., "algebra": ..., "coalgebra": ...,
                        "coaction": {"side": "right", "map": rows},
                        "action":   {"side": "right", "map": rows}},
     "factorization":  {"algebra_b": ..., "algebra_a": ...,
                        "rmap": r[a][b][b2][a2]},
     "ring_extension": {"base": ..., "total": ..., "embedding": rows}}

mult[i][j][k] is the coefficient of e_k in e_i e_j; comult[i][j][k] the
coefficient of e_j (x) e_k in Delta(e_i); psi[c][a][a2][c2] the coefficient
of e_a2 (x) e_c2 in psi(e_c (x) e_a); rmap[a][b][b2][a2] the coefficient of
e_b2 (x) e_a2 in R(e_a (x) e_b).  Matrix-valued maps ("map", "embedding")
are dense row-major matrices indexed by codomain then domain basis.

Exit codes: 0 pass / yes, 1 mathematical no or failed validation, 2 input
or usage error, 3 verdict unknown within the configured budget.  JSON
reports carry no timing and are byte-identical for identical inputs,
flags, and seeds; timing is printed in text mode only.  Setting
ENTWINE_NO_PARALLEL=1 forces `corpus run` to execute serially; the report
is identical either way.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .actforget import (
    Fprime_separable,
    FprimeGprime_frobenius,
    Gprime_separable,
    e_residual,
    frobenius_prime_residual,
    vartheta_residual,
)
from .coforget import (
    F_separable,
    FG_frobenius,
    G_separable,
    frobenius_residual,
    theta_residual,
    z_residual,
)
from .corpus import (
    CorpusEntry,
    all_entries,
    builtin,
    corpus_names,
    validate_payload,
)
from .entwining import (
    DoiHopfDatum,
    Entwining,
    adjunction_check,
    from_doi_hopf,
    std_object_AC,
    std_object_AstarC,
    std_object_CA,
    std_object_CstarA,
)
from .exactlin import (
    Field,
    InternalCheckError,
    LinMap,
    ParseError,
    field_from_dict,
    kron_vec,
)
from .homspaces import SearchConfig, Verdict
from .ringext import (
    RingExtension,
    casimir_residual,
    compute_casimir,
    compute_expectations,
    expectation_residual,
    frobenius_check,
    frobenius_residual as ext_frobenius_residual,
    quotient_mult,
    tensor_over_R,
)
from .smash import (
    Factorization,
    compute_V3,
    compute_W3,
    cross_check_frobenius,
    entwining_to_factorization,
    factorization_to_entwining,
    frobenius_smash_residual,
    kappa_residual,
    op_dual,
    smash_frobenius_A,
    smash_over_A_report,
    smash_over_B_report,
    smash_product,
    unit_embedding_A,
    w3_residual,
)
from .structures import (
    ActionData,
    AlgebraData,
    BialgebraData,
    CoactionData,
    CoalgebraData,
)

PAYLOAD_KEYS = ("algebra", "coalgebra", "bialgebra", "entwining", "doi_hopf",
                "factorization", "ring_extension")

QUESTIONS = ("F-sep", "G-sep", "FG-frob", "Fp-sep", "Gp-sep", "FpGp-frob",
             "ext-split", "ext-sep", "ext-frob",
             "smash-over-A", "smash-over-B", "cross-check")

ENTWINING_QUESTIONS = ("F-sep", "G-sep", "FG-frob", "Fp-sep", "Gp-sep",
                       "FpGp-frob", "cross-check")
EXTENSION_QUESTIONS = ("ext-split", "ext-sep", "ext-frob")
SMASH_QUESTIONS = ("smash-over-A", "smash-over-B")

EXIT_PASS, EXIT_NO, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3
EXIT_INTERNAL = 70  # self-check failure; a bug, not a verdict


# ---------------------------------------------------------------------------
# structure file parsing

def _at(path, msg):
    raise ParseError("%s: %s" % (path, msg))


def _dict(node, path):
    if not isinstance(node, dict):
        _at(path, "expected an object")
    return node


def _list(node, path):
    if not isinstance(node, list):
        _at(path, "expected an array")
    return node


def _scalar(field, node, path):
    try:
        return field.parse(node)
    except ParseError as ex:
        raise ParseError("%s: %s" % (path, ex)) from None


def _vec(field, node, path):
    return [_scalar(field, x, "%s[%d]" % (path, i))
            for i, x in enumerate(_list(node, path))]


def _rows(field, node, path, ncols=None):
    out = []
    for i, row in enumerate(_list(node, path)):
        r = _vec(field, row, "%s[%d]" % (path, i))
        if ncols is None:
            ncols = len(r)
        if len(r) != ncols:
            _at("%s[%d]" % (path, i), "ragged row (expected %d entries)" % ncols)
        out.append(r)
    return out


def _nested(field, node, path, depth):
    if depth == 0:
        return _scalar(field, node, path)
    return [_nested(field, x, "%s[%d]" % (path, i), depth - 1)
            for i, x in enumerate(_list(node, path))]


def _shape(node, dims, path):
    if not dims:
        return
    if len(node) != dims[0]:
        _at(path, "expected %d entries, found %d" % (dims[0], len(node)))
    for i, sub in enumerate(node):
        _shape(sub, dims[1:], "%s[%d]" % (path, i))


def parse_algebra(field, doc, path="algebra") -> AlgebraData:
    doc = _dict(doc, path)
    if set(doc) != {"mult", "unit"}:
        _at(path, "expected exactly the keys mult, unit")
    unit = _vec(field, doc["unit"], path + ".unit")
    n = len(unit)
    if n == 0:
        _at(path + ".unit", "empty basis")
    mult = _nested(field, doc["mult"], path + ".mult", 3)
    _shape(mult, (n, n, n), path + ".mult")
    return AlgebraData.make(field, mult, unit)


def parse_coalgebra(field, doc, path="coalgebra") -> CoalgebraData:
    doc = _dict(doc, path)
    if set(doc) != {"comult", "counit"}:
        _at(path, "expected exactly the keys comult, counit")
    counit = _vec(field, doc["counit"], path + ".counit")
    n = len(counit)
    if n == 0:
        _at(path + ".counit", "empty basis")
    comult = _nested(field, doc["comult"], path + ".comult", 3)
    _shape(comult, (n, n, n), path + ".comult")
    return CoalgebraData.make(field, comult, counit)


def parse_bialgebra(field, doc, path="bialgebra") -> BialgebraData:
    doc = _dict(doc, path)
    if set(doc) != {"algebra", "coalgebra"}:
        _at(path, "expected exactly the keys algebra, coalgebra")
    return BialgebraData.make(parse_algebra(field, doc["algebra"], path + ".algebra"),
                              parse_coalgebra(field, doc["coalgebra"],
                                              path + ".coalgebra"))


def parse_entwining(field, doc, path="entwining") -> Entwining:
    doc = _dict(doc, path)
    if set(doc) != {"algebra", "coalgebra", "psi"}:
        _at(path, "expected exactly the keys algebra, coalgebra, psi")
    a = parse_algebra(field, doc["algebra"], path + ".algebra")
    c = parse_coalgebra(field, doc["coalgebra"], path + ".coalgebra")
    psi = _nested(field, doc["psi"], path + ".psi", 4)
    _shape(psi, (c.dim, a.dim, a.dim, c.dim), path + ".psi")
    return Entwining.make(a, c, psi)


def _parse_sided_map(field, doc, path, dom, cod, cls):
    doc = _dict(doc, path)
    if set(doc) != {"side", "map"}:
        _at(path, "expected exactly the keys side, map")
    if doc["side"] != "right":
        _at(path + ".side", "only right-sided data is supported")
    rows = _rows(field, doc["map"], path + ".map")
    flat_dom, flat_cod = 1, 1
    for d in dom:
        flat_dom *= d
    for d in cod:
        flat_cod *= d
    if len(rows) != flat_cod or (rows and len(rows[0]) != flat_dom):
        _at(path + ".map", "expected a %dx%d matrix" % (flat_cod, flat_dom))
    return cls("right", LinMap.from_rows(field, dom, cod, rows))


def parse_doi_hopf(field, doc, path="doi_hopf") -> DoiHopfDatum:
    doc = _dict(doc, path)
    want = {"bialgebra", "algebra", "coalgebra", "coaction", "action"}
    if set(doc) != want:
        _at(path, "expected exactly the keys %s" % ", ".join(sorted(want)))
    h = parse_bialgebra(field, doc["bialgebra"], path + ".bialgebra")
    a = parse_algebra(field, doc["algebra"], path + ".algebra")
    c = parse_coalgebra(field, doc["coalgebra"], path + ".coalgebra")
    coact = _parse_sided_map(field, doc["coaction"], path + ".coaction",
                             (a.dim,), (a.dim, h.algebra.dim), CoactionData)
    act = _parse_sided_map(field, doc["action"], path + ".action",
                           (c.dim, h.algebra.dim), (c.dim,), ActionData)
    return DoiHopfDatum(h, a, c, coact, act)


def parse_factorization(field, doc, path="factorization") -> Factorization:
    doc = _dict(doc, path)
    if set(doc) != {"algebra_b", "algebra_a", "rmap"}:
        _at(path, "expected exactly the keys algebra_b, algebra_a, rmap")
    b = parse_algebra(field, doc["algebra_b"], path + ".algebra_b")
    a = parse_algebra(field, doc["algebra_a"], path + ".algebra_a")
    rmap = _nested(field, doc["rmap"], path + ".rmap", 4)
    _shape(rmap, (a.dim, b.dim, b.dim, a.dim), path + ".rmap")
    return Factorization.make(b, a, rmap)


def parse_ring_extension(field, doc, path="ring_extension") -> RingExtension:
    doc = _dict(doc, path)
    if set(doc) != {"base", "total", "embedding"}:
        _at(path, "expected exactly the keys base, total, embedding")
    r = parse_algebra(field, doc["base"], path + ".base")
    s = parse_algebra(field, doc["total"], path + ".total")
    rows = _rows(field, doc["embedding"], path + ".embedding")
    if len(rows) != s.dim or (rows and len(rows[0]) != r.dim):
        _at(path + ".embedding", "expected a %dx%d matrix" % (s.dim, r.dim))
    return RingExtension(r, s, LinMap.from_rows(field, (r.dim,), (s.dim,), rows))


_PARSERS = {
    "algebra": parse_algebra,
    "coalgebra": parse_coalgebra,
    "bialgebra": parse_bialgebra,
    "entwining": parse_entwining,
    "doi_hopf": parse_doi_hopf,
    "factorization": parse_factorization,
    "ring_extension": parse_ring_extension,
}


def parse_structure_document(doc):
    """JSON document -> (field, kind, payload); raises ParseError with a
    path-addressed diagnostic on any malformed input."""
    doc = _dict(doc, "$")
    if "field" not in doc:
        _at("$", "missing \"field\"")
    field = field_from_dict(doc["field"])
    kinds = [k for k in PAYLOAD_KEYS if k in doc]
    extra = set(doc) - set(PAYLOAD_KEYS) - {"field"}
    if extra:
        _at("$", "unknown keys: %s" % ", ".join(sorted(extra)))
    if len(kinds) != 1:
        _at("$", "expected exactly one of %s" % ", ".join(PAYLOAD_KEYS))
    kind = kinds[0]
    return field, kind, _PARSERS[kind](field, doc[kind], kind)


def load_structure_file(path):
    try:
        with open(path, "rb") as fh:
            doc = json.load(fh)
    except OSError as ex:
        raise ParseError("cannot read %s: %s" % (path, ex)) from None
    except json.JSONDecodeError as ex:
        raise ParseError("%s is not valid JSON: %s" % (path, ex)) from None
    return parse_structure_document(doc)


# ---------------------------------------------------------------------------
# serialization back to the file format

def _strs(field, nested):
    if isinstance(nested, (list, tuple)):
        return [_strs(field, x) for x in nested]
    return field.to_str(nested)


def algebra_to_doc(a: AlgebraData):
    return {"mult": _strs(a.field, a.mult), "unit": _strs(a.field, a.unit)}


def coalgebra_to_doc(c: CoalgebraData):
    return {"comult": _strs(c.field, c.comult), "counit": _strs(c.field, c.counit)}


def bialgebra_to_doc(b: BialgebraData):
    return {"algebra": algebra_to_doc(b.algebra),
            "coalgebra": coalgebra_to_doc(b.coalgebra)}


def entwining_to_doc(e: Entwining):
    na, nc = e.a.dim, e.c.dim
    psi = [[[[e.field.to_str(e.psi_entry(a2, c2, c, a))
              for c2 in range(nc)] for a2 in range(na)]
            for a in range(na)] for c in range(nc)]
    return {"algebra": algebra_to_doc(e.a), "coalgebra": coalgebra_to_doc(e.c),
            "psi": psi}


def doi_hopf_to_doc(d: DoiHopfDatum):
    f = d.field
    return {"bialgebra": bialgebra_to_doc(d.h),
            "algebra": algebra_to_doc(d.a),
            "coalgebra": coalgebra_to_doc(d.c),
            "coaction": {"side": d.coaction.side,
                         "map": _strs(f, d.coaction.map.mat)},
            "action": {"side": d.action.side,
                       "map": _strs(f, d.action.map.mat)}}


def factorization_to_doc(fact: Factorization):
    na, nb = fact.a.dim, fact.b.dim
    rmap = [[[[fact.field.to_str(fact.r_entry(b2, a2, a, b))
               for a2 in range(na)] for b2 in range(nb)]
             for b in range(nb)] for a in range(na)]
    return {"algebra_b": algebra_to_doc(fact.b), "algebra_a": algebra_to_doc(fact.a),
            "rmap": rmap}


def extension_to_doc(ext: RingExtension):
    return {"base": algebra_to_doc(ext.r), "total": algebra_to_doc(ext.s),
            "embedding": _strs(ext.field, ext.embedding.mat)}


_SERIALIZERS = (
    (AlgebraData, "algebra", algebra_to_doc),
    (CoalgebraData, "coalgebra", coalgebra_to_doc),
    (BialgebraData, "bialgebra", bialgebra_to_doc),
    (Entwining, "entwining", entwining_to_doc),
    (DoiHopfDatum, "doi_hopf", doi_hopf_to_doc),
    (Factorization, "factorization", factorization_to_doc),
    (RingExtension, "ring_extension", extension_to_doc),
)


def payload_to_structure_document(field: Field, payload) -> dict:
    for cls, key, ser in _SERIALIZERS:
        if isinstance(payload, cls):
            return {"field": field.describe(), key: ser(payload)}
    raise ParseError("cannot serialize payload of type %s"
                     % (type(payload).__name__,))


# ---------------------------------------------------------------------------
# reports

def _ser_witness(field, x):
    if isinstance(x, LinMap):
        return {"dom": list(x.dom), "cod": list(x.cod),
                "mat": [[field.to_str(v) for v in row] for row in x.mat]}
    if isinstance(x, dict):
        return {k: _ser_witness(field, v) for k, v in sorted(x.items())}
    if isinstance(x, (list, tuple)):
        return [_ser_witness(field, v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return field.to_str(x)


def _ser_meta(meta):
    out = {}
    for k, v in sorted(meta.items()):
        out[k] = v if isinstance(v, (bool, int, str)) or v is None else str(v)
    return out


def verdict_report(v: Verdict, field: Field, args, residuals) -> dict:
    return {
        "question": v.question,
        "status": v.status,
        "reason": v.reason,
        "definitive": v.definitive,
        "witness": _ser_witness(field, v.witness or {}),
        "residual_checks": residuals,
        "meta": _ser_meta(v.meta or {}),
        "field": field.describe(),
        "seed": args.seed,
        "enum_budget": args.enum_budget,
        "trials": args.trials,
        "tool": {"name": "entwine", "version": __version__},
    }


def emit(report: dict, fmt: str, elapsed=None, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        return
    _emit_text(report, out, elapsed)


def _emit_text(report, out, elapsed, indent=""):
    for k in sorted(report):
        v = report[k]
        if k == "witness":
            keys = ", ".join(sorted(v)) if v else "(none)"
            out.write("%switness: %s\n" % (indent, keys))
        elif isinstance(v, dict):
            out.write("%s%s:\n" % (indent, k))
            _emit_text(v, out, None, indent + "  ")
        elif isinstance(v, list):
            out.write("%s%s: %s\n" % (indent, k, ", ".join(str(x) for x in v) or "(none)"))
        else:
            out.write("%s%s: %s\n" % (indent, k, v))
    if elapsed is not None and not indent:
        out.write("elapsed: %.3fs\n" % elapsed)


# ---------------------------------------------------------------------------
# witness re-verification, independent of the solver path

def _assert_zero(vals, name):
    if any(vals):
        raise InternalCheckError("re-verification failed: %s is nonzero" % name)


def _flatmat(lm):
    return [x for row in lm.mat for x in row]


def _reverify_entwining(question, e: Entwining, v: Verdict) -> dict:
    if v.status != "yes":
        return {}
    f, na, nc = e.field, e.a.dim, e.c.dim
    w = v.witness
    checks = {}
    if question == "F-sep":
        if theta_residual(e, w["theta"]):
            raise InternalCheckError("theta laws fail on re-check")
        norm = w["theta"].compose(e.c.comult_map()).with_shapes((nc,), (na,)).sub(
            e.a.unit_map().compose(e.c.counit_map()).with_shapes((nc,), (na,)))
        _assert_zero(_flatmat(norm), "counit normalization")
        checks = {"theta-laws": "0", "counit-normalization": "0"}
    elif question == "G-sep":
        if z_residual(e, w["z"]):
            raise InternalCheckError("z laws fail on re-check")
        got = LinMap.identity(f, (na,)).tensor(e.c.counit_map()) \
            .with_shapes((na * nc,), (na,)).apply(w["z"])
        _assert_zero([x - y for x, y in zip(got, e.a.unit)], "unit normalization")
        checks = {"z-laws": "0", "unit-normalization": "0"}
    elif question == "FG-frob":
        bad = frobenius_residual(e, w["theta"], w["z"])
        if bad:
            raise InternalCheckError("Frobenius system fails %r on re-check" % bad)
        checks = {"frobenius-system": "0"}
    elif question == "Fp-sep":
        if vartheta_residual(e, w["vartheta"]):
            raise InternalCheckError("vartheta law fails on re-check")
        unit_leg = LinMap.identity(f, (nc,)).tensor(
            LinMap.const(f, list(e.a.unit), (na,)))
        norm = w["vartheta"].compose(unit_leg.with_shapes((nc,), (nc, na))) \
            .with_shapes((nc,), (1,)).sub(e.c.counit_map().with_shapes((nc,), (1,)))
        _assert_zero(_flatmat(norm), "counit normalization")
        checks = {"vartheta-laws": "0", "counit-normalization": "0"}
    elif question == "Gp-sep":
        if e_residual(e, w["e"]):
            raise InternalCheckError("e laws fail on re-check")
        norm = e.a.mult_map().compose(w["e"]).with_shapes((nc,), (na,)).sub(
            e.a.unit_map().compose(e.c.counit_map()).with_shapes((nc,), (na,)))
        _assert_zero(_flatmat(norm), "mult normalization")
        checks = {"e-laws": "0", "mult-normalization": "0"}
    elif question == "FpGp-frob":
        bad = frobenius_prime_residual(e, w["vartheta"], w["e"])
        if bad:
            raise InternalCheckError("Frobenius system fails %r on re-check" % bad)
        checks = {"frobenius-system": "0"}
    return checks


def _reverify_extension(question, ext: RingExtension, v: Verdict) -> dict:
    if v.status != "yes":
        return {}
    w = v.witness
    if question == "ext-split":
        if expectation_residual(ext, w["nu"]):
            raise InternalCheckError("expectation laws fail on re-check")
        got = w["nu"].apply(ext.s.unit)
        _assert_zero([x - y for x, y in zip(got, ext.r.unit)], "unit normalization")
        return {"expectation-laws": "0", "unit-normalization": "0"}
    t = tensor_over_R(ext)
    if question == "ext-sep":
        if casimir_residual(t, w["e"]):
            raise InternalCheckError("Casimir laws fail on re-check")
        got = quotient_mult(t).apply(w["e"])
        _assert_zero([x - y for x, y in zip(got, ext.s.unit)], "mult normalization")
        return {"casimir-laws": "0", "mult-normalization": "0"}
    if question == "ext-frob":
        bad = ext_frobenius_residual(ext, t, w["nu"], w["e"])
        if bad:
            raise InternalCheckError("Frobenius system fails %r on re-check" % bad)
        return {"frobenius-system": "0"}
    return {}


def _reverify_smash(fact: Factorization, name, v: Verdict) -> dict:
    if v.status != "yes":
        return {}
    w = v.witness
    f = fact.field
    if name == "split":
        if kappa_residual(fact, w["kappa"]):
            raise InternalCheckError("kappa laws fail on re-check")
        got = w["kappa"].apply(fact.b.unit)
        _assert_zero([x - y for x, y in zip(got, fact.a.unit)], "unit normalization")
        return {"kappa-laws": "0", "unit-normalization": "0"}
    if name == "separable":
        if w3_residual(fact, w["e"]):
            raise InternalCheckError("W3 laws fail on re-check")
        nb, na = fact.b.dim, fact.a.dim
        mb = fact.b.mult_map().tensor(LinMap.identity(f, (na,)))
        got = mb.with_shapes((nb, nb, na), (nb, na)).apply(w["e"])
        target = kron_vec(fact.b.unit, fact.a.unit)
        _assert_zero([x - y for x, y in zip(got, target)], "mult normalization")
        return {"casimir-laws": "0", "mult-normalization": "0"}
    bad = frobenius_smash_residual(fact, w["kappa"], w["e"])
    if bad:
        raise InternalCheckError("Frobenius system fails %r on re-check" % bad)
    return {"frobenius-system": "0"}


# ---------------------------------------------------------------------------
# analyze

def _as_entwining(kind, payload) -> Entwining:
    if kind == "entwining":
        return payload
    if kind == "doi_hopf":
        return from_doi_hopf(payload, validate=False)
    raise ParseError("usage error: this question needs an entwining or "
                     "doi_hopf payload, not %s" % kind)


def _as_factorization(kind, payload) -> Factorization:
    if kind == "factorization":
        return payload
    if kind in ("entwining", "doi_hopf"):
        return entwining_to_factorization(_as_entwining(kind, payload),
                                          validate=False)
    raise ParseError("usage error: this question needs a factorization, "
                     "entwining, or doi_hopf payload, not %s" % kind)


_STATUS_EXIT = {"yes": EXIT_PASS, "no": EXIT_NO, "unknown": EXIT_UNKNOWN}


def _exit_for(statuses) -> int:
    if "no" in statuses:
        return EXIT_NO
    if "unknown" in statuses:
        return EXIT_UNKNOWN
    return EXIT_PASS


def run_analysis(kind, payload, question, cfg, field, args):
    """Dispatch one question; returns (report dict, exit code)."""
    if question in ("F-sep", "G-sep", "Fp-sep", "Gp-sep"):
        e = _as_entwining(kind, payload)
        fn = {"F-sep": F_separable, "G-sep": G_separable,
              "Fp-sep": Fprime_separable, "Gp-sep": Gprime_separable}[question]
        v = fn(e)
        return (verdict_report(v, field, args, _reverify_entwining(question, e, v)),
                _STATUS_EXIT[v.status])
    if question in ("FG-frob", "FpGp-frob"):
        e = _as_entwining(kind, payload)
        fn = FG_frobenius if question == "FG-frob" else FprimeGprime_frobenius
        v = fn(e, cfg)
        return (verdict_report(v, field, args, _reverify_entwining(question, e, v)),
                _STATUS_EXIT[v.status])
    if question in EXTENSION_QUESTIONS:
        if kind != "ring_extension":
            raise ParseError("usage error: question %s needs a ring_extension "
                             "payload, not %s" % (question, kind))
        from .ringext import separable_check, split_check
        fn = {"ext-split": split_check, "ext-sep": separable_check}.get(question)
        v = fn(payload) if fn else frobenius_check(payload, cfg)
        return (verdict_report(v, field, args,
                               _reverify_extension(question, payload, v)),
                _STATUS_EXIT[v.status])
    if question in SMASH_QUESTIONS:
        fact = _as_factorization(kind, payload)
        if question == "smash-over-A":
            rep = smash_over_A_report(fact, cfg)
            target = fact
        else:
            rep = smash_over_B_report(fact, cfg)
            target = op_dual(fact, verify=False)
        body = {}
        for name in ("split", "separable", "frobenius"):
            v = rep[name]
            body[name] = verdict_report(v, field, args,
                                        _reverify_smash(target, name, v))
        report = {"question": question, "verdicts": body,
                  "field": field.describe(), "seed": args.seed,
                  "tool": {"name": "entwine", "version": __version__}}
        return report, _exit_for([rep[n].status for n in body])
    if question == "cross-check":
        e = _as_entwining(kind, payload)
        cc = cross_check_frobenius(e, cfg)
        fact = entwining_to_factorization(e, validate=False)
        report = {
            "question": "cross-check",
            "agree": cc["agree"],
            "entwined": verdict_report(cc["entwined"], field, args,
                                       _reverify_entwining("FG-frob", e,
                                                           cc["entwined"])),
            "extension": verdict_report(cc["extension"], field, args,
                                        _reverify_smash(fact, "frobenius",
                                                        cc["extension"])),
            "field": field.describe(), "seed": args.seed,
            "tool": {"name": "entwine", "version": __version__},
        }
        if not cc["agree"]:
            return report, EXIT_NO
        statuses = [cc["entwined"].status, cc["extension"].status]
        return report, EXIT_UNKNOWN if "unknown" in statuses else EXIT_PASS
    raise ParseError("usage error: unknown question %r" % (question,))


# ---------------------------------------------------------------------------
# commands

def _violations_doc(rep):
    return [{"law": v.law, "index": list(v.index), "detail": v.detail}
            for v in rep.violations]


def cmd_validate(args) -> int:
    t0 = time.monotonic()
    field, kind, payload = load_structure_file(args.path)
    rep = validate_payload(payload)
    report = {
        "command": "validate",
        "path": args.path,
        "kind": kind,
        "field": field.describe(),
        "ok": rep.ok,
        "violations": _violations_doc(rep),
        "tool": {"name": "entwine", "version": __version__},
    }
    emit(report, args.format, elapsed=time.monotonic() - t0)
    return EXIT_PASS if rep.ok else EXIT_NO


def cmd_analyze(args) -> int:
    t0 = time.monotonic()
    field, kind, payload = load_structure_file(args.path)
    rep = validate_payload(payload)
    if not rep.ok:
        emit({"command": "analyze", "path": args.path, "kind": kind,
              "ok": False, "violations": _violations_doc(rep),
              "field": field.describe(),
              "tool": {"name": "entwine", "version": __version__}},
             args.format)
        return EXIT_NO
    cfg = SearchConfig(enum_budget=args.enum_budget, trials=args.trials,
                       seed=args.seed)
    report, code = run_analysis(kind, payload, args.question, cfg, field, args)
    emit(report, args.format, elapsed=time.monotonic() - t0)
    return code


def _entry_kind(payload) -> str:
    for cls, key, _ in _SERIALIZERS:
        if isinstance(payload, cls):
            return key
    return type(payload).__name__


def _entry_dims(payload) -> str:
    if isinstance(payload, AlgebraData):
        return str(payload.dim)
    if isinstance(payload, CoalgebraData):
        return str(payload.dim)
    if isinstance(payload, BialgebraData):
        return str(payload.algebra.dim)
    if isinstance(payload, Entwining):
        return "%dx%d" % (payload.a.dim, payload.c.dim)
    if isinstance(payload, DoiHopfDatum):
        return "%d,%d,%d" % (payload.h.algebra.dim, payload.a.dim, payload.c.dim)
    if isinstance(payload, Factorization):
        return "%dx%d" % (payload.b.dim, payload.a.dim)
    if isinstance(payload, RingExtension):
        return "%d->%d" % (payload.r.dim, payload.s.dim)
    return "?"


def cmd_corpus_list(args) -> int:
    rows = []
    for name in corpus_names():
        entry = builtin(name, QQ_FIELD)
        rows.append({"name": entry.name, "kind": _entry_kind(entry.payload),
                     "dims": _entry_dims(entry.payload),
                     "field_spec": entry.field_spec, "note": entry.note})
    report = {"command": "corpus list", "count": len(rows), "entries": rows,
              "tool": {"name": "entwine", "version": __version__}}
    if args.format == "json":
        emit(report, "json")
    else:
        for r in rows:
            sys.stdout.write("%-20s %-14s %-7s %-6s %s\n"
                             % (r["name"], r["kind"], r["dims"],
                                r["field_spec"], r["note"]))
        sys.stdout.write("%d entries\n" % len(rows))
    return EXIT_PASS


def cmd_corpus_export(args) -> int:
    if not args.name:
        raise ParseError("usage error: corpus export needs --name")
    field = _field_flag(args.field)
    entry = builtin(args.name, field)
    doc = payload_to_structure_document(field, entry.payload)
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    return EXIT_PASS


def _bump_first(m: LinMap, field) -> LinMap:
    rows = [list(r) for r in m.mat]
    rows[0][0] = rows[0][0] + field.one
    return LinMap.from_rows(field, m.dom, m.cod, rows)


def mutate_payload(payload):
    """Flip one structure constant; used to prove the corpus run can fail."""
    f = payload.field
    if isinstance(payload, AlgebraData):
        mult = [[list(r) for r in p] for p in payload.mult]
        mult[0][0][0] = mult[0][0][0] + f.one
        return AlgebraData.make(f, mult, list(payload.unit))
    if isinstance(payload, CoalgebraData):
        com = [[list(r) for r in p] for p in payload.comult]
        com[0][0][0] = com[0][0][0] + f.one
        return CoalgebraData.make(f, com, list(payload.counit))
    if isinstance(payload, BialgebraData):
        return BialgebraData.make(mutate_payload(payload.algebra), payload.coalgebra)
    if isinstance(payload, Entwining):
        return Entwining(payload.a, payload.c, _bump_first(payload.psi, f))
    if isinstance(payload, DoiHopfDatum):
        act = ActionData("right", _bump_first(payload.action.map, f))
        return DoiHopfDatum(payload.h, payload.a, payload.c, payload.coaction, act)
    if isinstance(payload, Factorization):
        return Factorization(payload.b, payload.a, _bump_first(payload.rmap, f))
    if isinstance(payload, RingExtension):
        return RingExtension(payload.r, payload.s,
                             _bump_first(payload.embedding, f))
    raise ParseError("cannot mutate payload of type %s" % type(payload).__name__)


def _corpus_checks(entry: CorpusEntry, cfg: SearchConfig):
    """(check name, thunk) pairs for one entry; every thunk returns a bool."""
    payload = entry.payload
    checks = [("valid", lambda: validate_payload(payload).ok)]
    if isinstance(payload, Entwining):
        e = payload

        def routes_fg():
            return (FG_frobenius(e, cfg, route="search").status
                    == FG_frobenius(e, cfg, route="iso").status)

        def routes_fpgp():
            return (FprimeGprime_frobenius(e, cfg, route="search").status
                    == FprimeGprime_frobenius(e, cfg, route="iso").status)

        def dict_round_trip():
            fact = entwining_to_factorization(e, validate=False)
            return factorization_to_entwining(fact, e.c, validate=False) == e

        def cross():
            return cross_check_frobenius(e, cfg)["agree"]

        def adjunction():
            objs = [std_object_AC(e, validate=False),
                    std_object_CA(e, validate=False),
                    std_object_CstarA(e, validate=False),
                    std_object_AstarC(e, validate=False)]
            return all(adjunction_check(e, m).ok for m in objs)

        checks += [("fg-frob-routes", routes_fg),
                   ("fpgp-frob-routes", routes_fpgp),
                   ("dict-round-trip", dict_round_trip),
                   ("cross-check", cross),
                   ("adjunction", adjunction)]
    elif isinstance(payload, RingExtension):
        ext = payload

        def routes_ext():
            return (frobenius_check(ext, cfg, route="search").status
                    == frobenius_check(ext, cfg, route="iso").status)

        checks.append(("ext-frob-routes", routes_ext))
    elif isinstance(payload, Factorization):
        fact = payload

        def smash_valid():
            from .structures import check_algebra
            return check_algebra(smash_product(fact, validate=False)).ok

        def gamma_dims():
            ext = unit_embedding_A(fact, validate=False)
            t = tensor_over_R(ext)
            return (compute_V3(fact).dim == compute_expectations(ext).dim
                    and compute_W3(fact).dim == compute_casimir(t).dim)

        def smash_routes():
            return (smash_frobenius_A(fact, cfg, route="search").status
                    == smash_frobenius_A(fact, cfg, route="iso").status)

        checks += [("smash-valid", smash_valid),
                   ("gamma-dims", gamma_dims),
                   ("smash-frob-routes", smash_routes)]
    return checks


def _run_one(task):
    entry_name, field_tag, check_name, thunk = task
    try:
        ok = bool(thunk())
        note = ""
    except (ParseError, InternalCheckError) as ex:
        ok, note = False, "%s: %s" % (type(ex).__name__, ex)
    return {"entry": entry_name, "field": field_tag, "check": check_name,
            "pass": ok, "note": note}


def cmd_corpus_run(args) -> int:
    t0 = time.monotonic()
    cfg = SearchConfig(enum_budget=args.enum_budget, trials=args.trials,
                       seed=args.seed)
    if args.inject_mutation and args.inject_mutation not in corpus_names():
        raise ParseError("unknown corpus entry %r" % (args.inject_mutation,))
    tasks = []
    for field_tag, field in (("F2", Field("Fp", 2)), ("F3", Field("Fp", 3))):
        for entry in all_entries(field):
            if args.inject_mutation == entry.name:
                entry = CorpusEntry(entry.name, entry.field_spec,
                                    mutate_payload(entry.payload), entry.note)
            for check_name, thunk in _corpus_checks(entry, cfg):
                tasks.append((entry.name, field_tag, check_name, thunk))
    if os.environ.get("ENTWINE_NO_PARALLEL") == "1":
        results = [_run_one(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1)) as pool:
            results = list(pool.map(_run_one, tasks))
    failed = [r for r in results if not r["pass"]]
    report = {"command": "corpus run", "checks": len(results),
              "failed": len(failed), "ok": not failed, "results": results,
              "seed": args.seed, "enum_budget": args.enum_budget,
              "trials": args.trials,
              "tool": {"name": "entwine", "version": __version__}}
    if args.format == "json":
        emit(report, "json")
    else:
        for r in results:
            line = "%s %-20s [%s] %s" % ("PASS" if r["pass"] else "FAIL",
                                         r["entry"], r["field"], r["check"])
            if r["note"]:
                line += "  (" + r["note"] + ")"
            sys.stdout.write(line + "\n")
        sys.stdout.write("%d checks, %d failed, %.2fs\n"
                         % (len(results), len(failed), time.monotonic() - t0))
    return EXIT_PASS if not failed else EXIT_NO


def cmd_corpus(args) -> int:
    if args.action == "list":
        return cmd_corpus_list(args)
    if args.action == "run":
        return cmd_corpus_run(args)
    return cmd_corpus_export(args)


# ---------------------------------------------------------------------------
# entry point

QQ_FIELD = Field("Q")


def _field_flag(spec: str) -> Field:
    if spec == "Q":
        return QQ_FIELD
    if spec.startswith("F"):
        try:
            return Field("Fp", int(spec[1:]))
        except (ValueError, ParseError):
            pass
    raise ParseError("usage error: --field takes Q or F<p>, not %r" % (spec,))


def _common_flags(sp):
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--enum-budget", type=int, default=1 << 16)
    sp.add_argument("--trials", type=int, default=64)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="entwine",
        description="Exact separability / Frobenius analysis of entwining "
                    "structures, smash products, and ring extensions.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="run every applicable axiom validator")
    v.add_argument("path")
    _common_flags(v)
    v.set_defaults(fn=cmd_validate)

    a = sub.add_parser("analyze", help="decide one separability or Frobenius "
                                       "question about a structure file")
    a.add_argument("path")
    a.add_argument("--question", required=True, choices=QUESTIONS)
    _common_flags(a)
    a.set_defaults(fn=cmd_analyze)

    c = sub.add_parser("corpus", help="list, export, or exercise the builtin corpus")
    c.add_argument("action", choices=["list", "run", "export"])
    c.add_argument("--name", help="entry name (export)")
    c.add_argument("--field", default="Q", help="field for export: Q or F<p>")
    c.add_argument("--inject-mutation", metavar="ENTRY",
                   help="corrupt one entry before running (self-test mode)")
    _common_flags(c)
    c.set_defaults(fn=cmd_corpus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as ex:
        sys.stderr.write("error: %s\n" % ex)
        return EXIT_INPUT
    except InternalCheckError as ex:
        sys.stderr.write("internal self-check failure: %s\n" % ex)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
