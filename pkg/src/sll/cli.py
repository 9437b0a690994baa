"""Batch command-line front end with JSON input and output.

Exit codes: 0 success, 2 validation error (with a machine-readable error
object on stdout), 3 I/O failure, 4 internal invariant violation.  Output
key order is deterministic.  The environment variable SLL_PRECISION sets
the default truncation length n.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass

from . import deformation, dieudonne, jsonio, local_model, singularity
from .base_rings import FiniteField, WittRing
from .errors import (
    AlgebraError,
    DomainError,
    InternalInvariantError,
    PreconditionError,
    SmoothShortCircuit,
    ValidationError,
)

COMMANDS = ("witt", "series-reduce", "dieudonne", "deform", "local-model")


@dataclass
class JobSpec:
    """A validated job: command, parsed input document, per-command options."""

    command: str
    payload: object
    options: dict


def default_precision():
    raw = os.environ.get("SLL_PRECISION", "3")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValidationError(f"SLL_PRECISION must be an integer, got {raw!r}") from exc
    if n < 1:
        raise ValidationError("SLL_PRECISION must be >= 1")
    return n


def _load_document(spec):
    """Inline JSON (starts with '{' or '[') or a file path; '-' is stdin."""
    text = spec.strip()
    if text.startswith("{") or text.startswith("["):
        raw = text
    elif text == "-":
        raw = sys.stdin.read()
    else:
        with open(spec, "r", encoding="utf-8") as handle:
            raw = handle.read()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"input is not valid JSON: {exc}") from exc


def _ring_for(args):
    q = getattr(args, "q", None) or 2
    field = local_model.field_for_q(int(q))
    n = getattr(args, "n", None)
    n = int(n) if n is not None else default_precision()
    if n < 1:
        raise ValidationError("precision must be >= 1")
    return WittRing(field, n)


def _module_for(args):
    fixture = getattr(args, "fixture", None)
    file_doc = getattr(args, "file", None)
    if (fixture is None) == (file_doc is None):
        raise ValidationError("give exactly one of --fixture or --file")
    if fixture is not None:
        return dieudonne.make_standard(_ring_for(args), fixture)
    return dieudonne.DieudonneModule.from_json(_load_document(file_doc))


# -- subcommand handlers -------------------------------------------------------


def _cmd_witt(args):
    doc = _load_document(args.input)
    if not isinstance(doc, dict):
        raise ValidationError("witt input must be a JSON object")
    ring = jsonio.ring_from_json(doc)
    rows = doc.get("coeffs", doc.get("digits"))
    key = "coeffs" if "coeffs" in doc else "digits"
    if not isinstance(rows, list) or not rows:
        raise ValidationError("witt input needs a nonempty 'coeffs' or 'digits' list")
    if not isinstance(rows[0], list):
        rows = [rows]
    operands = [jsonio.elem_from_fields(ring, {key: row}) for row in rows]
    if args.op in ("add", "mul"):
        if len(operands) < 2:
            raise ValidationError(f"witt {args.op} needs at least two operand rows")
        acc = operands[0]
        for x in operands[1:]:
            acc = acc + x if args.op == "add" else acc * x
        return jsonio.elem_to_json(ring, acc)
    if len(operands) != 1:
        raise ValidationError(f"witt {args.op} takes exactly one operand row")
    x = operands[0]
    if args.op == "frob":
        return jsonio.elem_to_json(ring, ring.frobenius(x))
    if args.op == "digits":
        return {"p": ring.p, "m": ring.field.m, "n": ring.n,
                "digits": jsonio._digits_list(ring, x),
                "valuation": ring.valuation(x)}
    raise ValidationError(f"unknown witt operation {args.op!r}")


def _cmd_series_reduce(args):
    f = jsonio.series_from_json(_load_document(args.input))
    if args.degree:
        if args.degree > f.parent.degree:
            raise ValidationError("--degree cannot exceed the document's truncation")
        f = f.truncate(args.degree)
    ring = f.parent.coeff_ring
    if not isinstance(ring, WittRing):
        raise ValidationError("series-reduce needs Witt-ring coefficients")
    try:
        result = singularity.normal_form(f)
    except SmoothShortCircuit as sig:
        return {"class": "Smooth", "detail": sig.reason, "normal_form": None}
    doc = jsonio.normal_form_to_json(ring, result)
    cls = singularity.classify_local_ring(f)
    return {"class": cls.tag, "detail": cls.detail, "normal_form": doc}


def _cmd_dieudonne(args):
    module = _module_for(args)
    ring = module.ring
    if args.op == "validate":
        checks = module.validate()
        doc = {"checks": checks, "valid": all(checks.values())}
        spot = int(getattr(args, "spot_checks", 0) or 0)
        if spot:
            rng = random.Random(args.seed)
            stable = 0
            a0, p0 = dieudonne.a_number(module), dieudonne.p_rank(module)
            for _ in range(spot):
                g = _random_unimodular(ring, rng)
                other = dieudonne.base_change(module, g)
                if dieudonne.a_number(other) == a0 and dieudonne.p_rank(other) == p0:
                    stable += 1
            doc["spot_checks"] = {"runs": spot, "invariant_stable": stable == spot}
        return doc
    if args.op == "invariants":
        return {
            "a_number": dieudonne.a_number(module),
            "p_rank": dieudonne.p_rank(module),
            "kernel_type": dieudonne.kernel_type(module).tag,
        }
    if args.op == "dual":
        dual = dieudonne.dual_lattice(module)
        return {
            "precision": dual.precision,
            "p_dual_basis_columns": [
                [list(x.coeffs) for x in col] for col in dual.columns()
            ],
        }
    if args.op == "lagrangian-search":
        res = dieudonne.lagrangian_witness_search(module)
        doc = {
            "found": res.found,
            "precision": res.precision,
            "nodes": res.nodes,
            "message": res.message,
        }
        if res.found:
            w = res.witness
            doc["witness"] = {
                name: [list(x.coeffs) for x in vec]
                for name, vec in (("Y1", w.Y1), ("Y2", w.Y2), ("X1", w.X1), ("X2", w.X2))
            }
        return doc
    raise ValidationError(f"unknown dieudonne operation {args.op!r}")


def _random_unimodular(ring, rng):
    from . import linalg

    while True:
        g = [[ring.random_element(rng) for _ in range(4)] for _ in range(4)]
        gbar = [[ring.residue(x) for x in row] for row in g]
        if linalg.rank_field(ring.field, gbar) == 4:
            return g


def _cmd_deform(args):
    module = _module_for(args)
    if args.frame:
        try:
            i, j = (int(t) for t in args.frame.split(","))
        except ValueError as exc:
            raise ValidationError("--frame takes two comma-separated indices") from exc
        y_idx = (i - 1, j - 1)
    else:
        y_idx = (2, 3)
    x_idx = tuple(k for k in range(4) if k not in y_idx)
    frame = deformation.HodgeFrame(module, y_idx, x_idx)
    rel = deformation.deformation_equation(frame)
    cls = singularity.classify_local_ring(rel)
    doc = {
        "relation": rel.to_text(),
        "relation_series": jsonio.series_to_json(rel),
        "class": cls.tag,
        "detail": cls.detail,
    }
    if cls.tag == "OrdinaryDoublePoint":
        doc["a_prime"] = jsonio.elem_to_json(module.ring, cls.a_prime)
        doc["a_prime_valuation"] = cls.valuation
    return doc


def _cmd_local_model(args):
    q = int(args.q)
    if args.op == "points":
        fiber = local_model.enumerate_special_fiber(q)
        return {"q": q, "count": len(fiber), "points": [pl.to_json() for pl in fiber]}
    if args.op == "tangents":
        fiber = local_model.enumerate_special_fiber(q)
        pts = []
        for pl in fiber:
            doc = pl.to_json()
            doc["tangent_dimension"] = local_model.tangent_dimension(pl)
            pts.append(doc)
        singular = [pl.to_json() for pl in fiber if local_model.tangent_dimension(pl) == 4]
        return {"q": q, "count": len(fiber), "points": pts, "singular": singular}
    if args.op == "chart":
        field = local_model.field_for_q(q)
        n = int(args.n) if args.n is not None else default_precision()
        ring = WittRing(field, n)
        eq = local_model.chart_equation(ring)
        cls = singularity.classify_local_ring(eq)
        doc = {
            "q": q,
            "n": n,
            "equation": eq.to_text(),
            "equation_series": jsonio.series_to_json(eq),
            "class": cls.tag,
        }
        if cls.tag == "OrdinaryDoublePoint":
            doc["a_prime"] = jsonio.elem_to_json(ring, cls.a_prime)
            doc["a_prime_valuation"] = cls.valuation
        return doc
    raise ValidationError(f"unknown local-model operation {args.op!r}")


# -- parser --------------------------------------------------------------------


def _parser():
    top = argparse.ArgumentParser(
        prog="sll",
        description="exact local computations: Witt rings, series reduction, "
        "Dieudonne modules, deformation relations, local-model fibers",
    )
    top.add_argument("--seed", type=int, default=0, help="seed for randomized spot checks")
    sub = top.add_subparsers(dest="command", required=True)

    witt = sub.add_parser("witt", help="truncated Witt ring arithmetic")
    witt.add_argument("op", choices=["add", "mul", "frob", "digits"])
    witt.add_argument("input", help="inline JSON, a path, or - for stdin")

    sr = sub.add_parser("series-reduce", help="normal-form reduction of a series file")
    sr.add_argument("input", help="series document (inline JSON, path, or -)")
    sr.add_argument("--degree", type=int, default=None, help="truncate to this degree first")

    dd = sub.add_parser("dieudonne", help="module invariants and searches")
    dd.add_argument("op", choices=["validate", "invariants", "dual", "lagrangian-search"])
    dd.add_argument("--fixture", choices=list(dieudonne.STANDARD_CASES), default=None)
    dd.add_argument("--file", default=None, help="module JSON document")
    dd.add_argument("--q", type=int, default=None, help="residue field size for fixtures")
    dd.add_argument("--n", type=int, default=None, help="truncation length (default SLL_PRECISION)")
    dd.add_argument("--spot-checks", dest="spot_checks", type=int, default=0,
                    help="validate: also re-check invariants under this many random base changes")

    de = sub.add_parser("deform", help="deformation relation and classification")
    de.add_argument("--fixture", choices=list(dieudonne.STANDARD_CASES), default=None)
    de.add_argument("--file", default=None)
    de.add_argument("--frame", default=None, help="1-based Hodge indices, e.g. 3,4")
    de.add_argument("--q", type=int, default=None)
    de.add_argument("--n", type=int, default=None)

    lm = sub.add_parser("local-model", help="special fiber of the local model")
    lm.add_argument("op", choices=["points", "tangents", "chart"])
    lm.add_argument("--q", type=int, required=True)
    lm.add_argument("--n", type=int, default=None)

    return top


def run(argv=None):
    args = _parser().parse_args(argv)
    job = JobSpec(args.command, None, vars(args))
    if job.command == "witt":
        return _cmd_witt(args)
    if job.command == "series-reduce":
        return _cmd_series_reduce(args)
    if job.command == "dieudonne":
        return _cmd_dieudonne(args)
    if job.command == "deform":
        return _cmd_deform(args)
    if job.command == "local-model":
        return _cmd_local_model(args)
    raise ValidationError(f"unknown command {job.command!r}")


def main(argv=None):
    try:
        doc = run(argv)
    except (ValidationError, DomainError, PreconditionError) as exc:
        print(json.dumps({"error": {"kind": type(exc).__name__, "message": str(exc)}},
                         sort_keys=True))
        return 2
    except OSError as exc:
        print(json.dumps({"error": {"kind": "io", "message": str(exc)}}, sort_keys=True))
        return 3
    except (InternalInvariantError, AlgebraError) as exc:
        print(json.dumps({"error": {"kind": "internal", "message": str(exc)}},
                         sort_keys=True))
        return 4
    print(json.dumps(doc, sort_keys=True, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
