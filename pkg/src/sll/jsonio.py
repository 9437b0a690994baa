"""JSON encodings of the algebraic objects.

Every document the CLI emits parses back to an equal object.  Exact
integers only, no floats.  Witt elements are encoded by their polynomial
coefficients mod p^n ({"coeffs": [...]}) with the Teichmuller digit
encoding ({"digits": [...]}) accepted as an alternative; digits flatten
to plain integers over prime fields.
"""

from __future__ import annotations

from .base_rings import FiniteField, WittRing
from .errors import ValidationError
from .series import SeriesRing
from .singularity import NormalFormResult
from .quadforms import QuadraticForm


def ring_from_json(doc):
    try:
        p = int(doc["p"])
        m = int(doc.get("m", 1))
        n = int(doc["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"ring document needs integer p, m, n: {exc}") from exc
    modulus = tuple(doc["modulus"]) if "modulus" in doc else None
    return WittRing(FiniteField(p, m, modulus), n)


def ring_to_json(ring):
    return {"p": ring.p, "m": ring.field.m, "n": ring.n, "modulus": list(ring.field.modulus)}


def _digits_list(ring, x):
    ds = ring.digits(x)
    if ring.field.m == 1:
        return [d.coeffs[0] for d in ds]
    return [list(d.coeffs) for d in ds]


def elem_to_json(ring, x, with_digits=True):
    doc = {"p": ring.p, "m": ring.field.m, "n": ring.n, "coeffs": list(x.coeffs)}
    if with_digits:
        doc["digits"] = _digits_list(ring, x)
    return doc


def elem_from_fields(ring, doc):
    """An element from either a coeffs vector or a digits vector."""
    if "coeffs" in doc:
        return ring.element(tuple(doc["coeffs"]))
    if "digits" in doc:
        digs = []
        for d in doc["digits"]:
            digs.append(ring.field.element(tuple(d) if isinstance(d, list) else int(d)))
        return ring.from_digits(digs)
    raise ValidationError("element document needs 'coeffs' or 'digits'")


def coeff_ring_to_json(ring):
    if isinstance(ring, WittRing):
        doc = ring_to_json(ring)
        doc["type"] = "witt"
        return doc
    return {"type": "field", "p": ring.p, "m": ring.m, "modulus": list(ring.modulus)}


def coeff_ring_from_json(doc):
    kind = doc.get("type", "witt")
    if kind == "witt":
        return ring_from_json(doc)
    if kind == "field":
        return FiniteField(int(doc["p"]), int(doc.get("m", 1)),
                           tuple(doc["modulus"]) if "modulus" in doc else None)
    raise ValidationError(f"unknown coefficient ring type {kind!r}")


def series_to_json(f):
    ring = f.parent
    return {
        "coeff_ring": coeff_ring_to_json(ring.coeff_ring),
        "nvars": ring.nvars,
        "degree": ring.degree,
        "vars": list(ring.var_names),
        "terms": [
            {"exps": list(e), "coeff": list(c.coeffs)} for e, c in f.terms()
        ],
        "text": f.to_text(),
    }


def series_from_json(doc):
    try:
        coeff_ring = coeff_ring_from_json(doc["coeff_ring"])
        nvars = int(doc["nvars"])
        degree = int(doc["degree"])
        names = doc.get("vars")
        ring = SeriesRing(coeff_ring, nvars, degree, names)
        terms = []
        for t in doc["terms"]:
            exps = tuple(int(e) for e in t["exps"])
            c = t["coeff"]
            terms.append((exps, tuple(c) if isinstance(c, list) else int(c)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad series document: {exc}") from exc
    return ring.from_terms(terms)


def quadform_to_json(q):
    return {
        "nvars": q.nvars,
        "upper": [
            {"i": i, "j": j, "coeff": list(c.coeffs)}
            for (i, j), c in sorted(q.upper.items())
        ],
    }


def quadform_from_json(coeff_ring, doc):
    upper = {}
    for t in doc["upper"]:
        upper[(int(t["i"]), int(t["j"]))] = tuple(t["coeff"])
    return QuadraticForm(coeff_ring, int(doc["nvars"]), upper)


def normal_form_to_json(ring, result: NormalFormResult):
    return {
        "a_prime": elem_to_json(ring, result.a_prime),
        "a_prime_valuation": ring.valuation(result.a_prime),
        "q_prime": quadform_to_json(result.q_prime),
        "phi": [series_to_json(component) for component in result.phi],
        "unit": series_to_json(result.unit),
    }
