"""Command line front end.

Canonical JSON goes to stdout, human-readable summaries to stderr.  Exit
codes: 0 success (including inapplicable checks), 2 failed mathematical
check or rejected classification (diagnostic JSON on stdout), 1 usage or
format errors.  All randomised paths honour --seed.

Gram shorthand: "hyp:k" (k hyperbolic pairs in the block layout f..g..h),
"diag:a,b,..." (orthogonal anisotropic part), "symp:k" (standard symplectic
form), combined with "+" for orthogonal sums; symp cannot be mixed with the
others.  Flag shorthand "std:k" takes the first k standard basis vectors;
"@file.json" reads a serialised flag.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import serialize
from .bilinear import ALTERNATING, SYMMETRIC, BilinearForm, witt_decompose
from .checks import theorem_check
from .classify import classify_classical, classify_structured
from .errors import (BadParameters, BudgetExceeded, CharTwoUnsupported,
                     FieldMismatch, KindMismatch, NilformsError,
                     UnsupportedExtension)
from .extend import extend_scalars
from .fields import parse_field
from .flags import Flag
from .linalg import Matrix
from .oracle import ORACLE_PROPERTIES, exhaustive_verify, maximality_probe
from .profile import generic_profile
from .spaces import build_canonical_space
from .sweeps import DEFAULT_BUDGET
from .witnesses import build_witness

USAGE_ERRORS = (BadParameters, KindMismatch, CharTwoUnsupported,
                UnsupportedExtension, FieldMismatch, BudgetExceeded)


def _emit(payload, output=None):
    text = serialize.dump(payload)
    print(text)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")


def _note(msg):
    print(msg, file=sys.stderr)


def parse_gram(field, spec: str) -> BilinearForm:
    hyp = 0
    diag = []
    symp = 0
    for term in spec.split("+"):
        term = term.strip()
        if term.startswith("hyp:"):
            hyp += int(term[4:])
        elif term.startswith("diag:"):
            diag.extend(field.parse(s) for s in term[5:].split(","))
        elif term.startswith("symp:"):
            symp += int(term[5:])
        else:
            raise BadParameters(f"unknown gram term {term!r}")
    if symp and (hyp or diag):
        raise BadParameters("symp cannot be combined with hyp/diag")
    if symp:
        n = 2 * symp
        rows = [[field.zero()] * n for _ in range(n)]
        for i in range(symp):
            rows[i][symp + i] = field.one()
            rows[symp + i][i] = -field.one()
        return BilinearForm(Matrix(field, rows), ALTERNATING)
    n = 2 * hyp + len(diag)
    if n == 0:
        raise BadParameters("empty gram specification")
    rows = [[field.zero()] * n for _ in range(n)]
    for i in range(hyp):
        rows[i][n - hyp + i] = field.one()
        rows[n - hyp + i][i] = field.one()
    for k, a in enumerate(diag):
        rows[hyp + k][hyp + k] = a
    return BilinearForm(Matrix(field, rows), SYMMETRIC)


def parse_flag(field, n: int, spec: str) -> Flag:
    if spec.startswith("std:"):
        return Flag.standard(field, n, int(spec[4:]))
    if spec.startswith("@"):
        with open(spec[1:]) as fh:
            return serialize.flag_from_json(json.load(fh), field, n)
    raise BadParameters(f"unknown flag spec {spec!r}")


def _parse_vector(field, text: str):
    return tuple(field.parse(s) for s in text.split(","))


def _load_space(path: str):
    with open(path) as fh:
        return serialize.space_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_form(args):
    field = parse_field(args.field)
    form = parse_gram(field, args.gram)
    payload = {"form": form, "nondegenerate": form.is_nondegenerate,
               "radical_dim": form.radical().dim}
    if form.is_nondegenerate:
        payload["witt"] = serialize.witt_json(witt_decompose(form))
    _emit(payload, args.output)
    _note(f"form: {form.kind}, n={form.n}, nondegenerate={form.is_nondegenerate}")
    return 0


def _cmd_space(args):
    field = parse_field(args.field)
    kind = args.kind.lower()
    if kind == "nf":
        if args.n is None:
            raise BadParameters("nf needs --n")
        n = args.n
        flag = parse_flag(field, n, args.flag or f"std:{n}")
        space = build_canonical_space("nf", flag)
    else:
        if not args.gram:
            raise BadParameters(f"{kind} needs --gram")
        form = parse_gram(field, args.gram)
        n = form.n
        flag_spec = args.flag or f"std:{form.witt_index()}"
        flag = parse_flag(field, n, flag_spec)
        space = build_canonical_space(kind, flag, form)
    _emit(space, args.output)
    _note(f"built {kind} space: n={space.n}, dim={space.dim}")
    return 0


def _cmd_profile(args):
    space = _load_space(args.input)
    prof = generic_profile(space, budget=args.budget, samples=args.samples,
                           seed=args.seed, threads=args.threads)
    payload = {"nilindex": prof.nilindex, "status": prof.status,
               "pure": prof.pure, "cap": prof.cap, "inspected": prof.inspected,
               "attained_count": prof.attained_count,
               "top_images": [serialize.vector_json(v) for v in prof.top_images[:16]],
               "span_dim": prof.span.dim,
               "span": prof.span,
               "witness_coeffs": prof.witness_coeffs}
    _emit(payload, args.output)
    _note(f"generic nilindex {prof.nilindex} ({prof.status}); pure={prof.pure}")
    return 0


def _cmd_check(args):
    space = _load_space(args.input)
    x = _parse_vector(space.field, args.x) if args.x else None
    verdict = theorem_check(space, args.which, x=x, k=args.k,
                            budget=args.budget, samples=args.samples,
                            seed=args.seed, threads=args.threads)
    payload = {"check": verdict.check, "status": verdict.status,
               "witness": verdict.witness, "counters": verdict.counters,
               "detail": verdict.detail}
    _emit(payload, args.output)
    _note(f"{verdict.check}: {verdict.status}")
    return 2 if verdict.status == "fail" else 0


def _cmd_classify(args):
    space = _load_space(args.input)
    if space.form is None:
        flag = classify_classical(space, force=args.force)
        kind = "NF"
    else:
        flag = classify_structured(space, force=args.force)
        kind = "WS" if space.adaptation == "S_b" else "WA"
    payload = {"flag": flag, "verified": True, "kind": kind}
    _emit(payload, args.output)
    _note(f"classified as {kind}, flag length {flag.length}")
    return 0


def _cmd_witness(args):
    field = parse_field(args.field)
    result = build_witness(args.which, field, n=args.n, nu=args.nu,
                           epsilon=args.epsilon, kind=args.kind)
    payload = {"certificate": result.certificate}
    if result.space is not None:
        payload["space"] = result.space
    if result.endo is not None:
        payload["endo"] = result.endo.matrix
        payload["adaptation"] = result.endo.adaptation
    if result.form is not None:
        payload["form"] = result.form
    if result.flag is not None:
        payload["flag"] = result.flag
    _emit(payload, args.output)
    _note(f"witness {args.which}: certificate ok")
    return 0


def _cmd_oracle(args):
    space = _load_space(args.space)
    if args.action == "verify":
        if not args.property:
            raise BadParameters("oracle verify needs --property")
        verdict = exhaustive_verify(space, args.property, budget=args.budget,
                                    samples=args.samples, seed=args.seed,
                                    threads=args.threads,
                                    require_exhaustive=args.exhaustive)
    else:
        verdict = maximality_probe(space, budget=args.budget,
                                   samples=args.samples, seed=args.seed,
                                   all_directions=args.exhaustive)
    payload = {"property": verdict.property, "status": verdict.status,
               "mode": verdict.mode, "counters": verdict.counters,
               "witness": verdict.witness, "coverage": verdict.coverage}
    _emit(payload, args.output)
    _note(f"oracle {verdict.property}: {verdict.status} ({verdict.mode})")
    return 2 if verdict.status == "fail" else 0


def _cmd_extend(args):
    space = _load_space(args.input)
    target = parse_field(args.target)
    extended, report = extend_scalars(space, target, checks=args.checks,
                                      seed=args.seed)
    payload = {"space": extended,
               "report": {"hypothesis_met": report.hypothesis_met,
                          "required_cardinality": report.required_cardinality,
                          "base_cardinality": report.base_cardinality,
                          "checked": report.checked,
                          "max_nilindex_seen": report.max_nilindex_seen,
                          "failures": report.failures,
                          "distinguished_nilindex": report.distinguished_nilindex}}
    _emit(payload, args.output)
    _note(f"extended to {target.spec}; hypothesis_met={report.hypothesis_met}")
    return 2 if report.failures else 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="nilforms",
                                  description="exact nilpotent-space toolkit")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, budget=True):
        p.add_argument("--output", help="also write the JSON to this file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--samples", type=int, default=512)
        if budget:
            p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("form", help="build and analyse a bilinear form")
    p.add_argument("--field", required=True)
    p.add_argument("--gram", required=True)
    common(p)
    p.set_defaults(fn=_cmd_form)

    p = sub.add_parser("space", help="build a canonical space")
    p.add_argument("action", choices=["build"])
    p.add_argument("--kind", required=True, choices=["nf", "ws", "wa"])
    p.add_argument("--field", required=True)
    p.add_argument("--gram")
    p.add_argument("--flag")
    p.add_argument("--n", type=int)
    common(p)
    p.set_defaults(fn=_cmd_space)

    p = sub.add_parser("profile", help="generic nilindex profile")
    p.add_argument("--input", required=True)
    common(p)
    p.set_defaults(fn=_cmd_profile)

    p = sub.add_parser("check", help="structural property checks")
    p.add_argument("--input", required=True)
    p.add_argument("--which", required=True)
    p.add_argument("--x", help="comma-separated vector")
    p.add_argument("--k", type=int)
    common(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("classify", help="recover the defining flag")
    p.add_argument("--input", required=True)
    p.add_argument("--force", action="store_true",
                   help="skip the dimension gate and attempt the recursion")
    common(p)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("witness", help="explicit witnesses and counterexamples")
    p.add_argument("which", choices=["n3", "six_dim", "wa_max", "ws_max"])
    p.add_argument("--field", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--nu", type=int)
    p.add_argument("--epsilon", type=int, default=1, choices=[1, -1])
    p.add_argument("--kind", default="sym", choices=["sym", "alt"])
    common(p)
    p.set_defaults(fn=_cmd_witness)

    p = sub.add_parser("oracle", help="brute-force verification")
    p.add_argument("action", choices=["verify", "maximality"])
    p.add_argument("--space", required=True)
    p.add_argument("--property", choices=list(ORACLE_PROPERTIES))
    p.add_argument("--exhaustive", action="store_true")
    common(p)
    p.set_defaults(fn=_cmd_oracle)

    p = sub.add_parser("extend", help="extension of scalars")
    p.add_argument("--input", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--checks", type=int, default=50)
    common(p, budget=False)
    p.set_defaults(fn=_cmd_extend)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return args.fn(args)
    except USAGE_ERRORS as exc:
        _emit({"error": type(exc).__name__, "detail": str(exc)})
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        _emit({"error": type(exc).__name__, "detail": str(exc)})
        return 1
    except NilformsError as exc:
        _emit({"error": type(exc).__name__, "detail": str(exc)})
        return 2


if __name__ == "__main__":
    sys.exit(main())
