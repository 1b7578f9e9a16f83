"""JSON encoding and decoding for the library's value types.

Scalars serialize as decimal strings ("3", "-2/7", "(t^2+1)/(t+2)");
matrices as {"field", "rows", "cols", "entries"}; forms as {"kind", "gram"};
operator spaces as {"field", "n", "form"?, "adaptation"?, "basis"}.  Flags
serialize as ordered lists of basis matrices.  `dump` produces canonical,
byte-stable output (sorted keys, no whitespace).
"""
from __future__ import annotations

import json
from fractions import Fraction

from .bilinear import BilinearForm, WittDecomposition
from .errors import BadParameters
from .fields import Field, FpElement, RationalFunction, parse_field
from .flags import Flag
from .linalg import Matrix, Subspace
from .spaces import OperatorSpace


def scalar_str(x) -> str:
    if isinstance(x, (FpElement, RationalFunction)):
        return repr(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    raise BadParameters(f"cannot serialise scalar {x!r}")


def vector_json(v) -> list:
    return [scalar_str(x) for x in v]


def matrix_json(M: Matrix) -> dict:
    return {"field": M.field.spec, "rows": M.rows, "cols": M.cols,
            "entries": [[scalar_str(x) for x in row] for row in M.entries]}


def matrix_from_json(obj: dict, field: Field | None = None) -> Matrix:
    field = parse_field(obj["field"]) if field is None else field
    entries = [[field.parse(s) for s in row] for row in obj["entries"]]
    return Matrix(field, entries, obj["rows"], obj["cols"])


def form_json(form: BilinearForm) -> dict:
    return {"kind": form.kind, "gram": matrix_json(form.gram)}


def form_from_json(obj: dict, field: Field | None = None) -> BilinearForm:
    return BilinearForm(matrix_from_json(obj["gram"], field), obj["kind"])


def subspace_json(S: Subspace) -> dict:
    return {"ambient_dim": S.ambient_dim, "dim": S.dim,
            "basis": [vector_json(v) for v in S.basis]}


def flag_json(flag: Flag) -> list:
    """Ordered list of basis matrices, one per flag subspace."""
    return [matrix_json(S.matrix()) for S in flag.subspaces]


def flag_from_json(obj: list, field: Field, ambient_dim: int) -> Flag:
    subs = []
    for item in obj:
        M = matrix_from_json(item, field)
        subs.append(Subspace.span(field, ambient_dim, M.entries))
    return Flag(field, ambient_dim, subs)


def space_json(space: OperatorSpace) -> dict:
    out = {"field": space.field.spec, "n": space.n,
           "basis": [matrix_json(M) for M in space.basis_matrices()]}
    if space.form is not None:
        out["form"] = form_json(space.form)
        out["adaptation"] = space.adaptation
    return out


def space_from_json(obj: dict) -> OperatorSpace:
    field = parse_field(obj["field"])
    form = None
    adaptation = None
    if obj.get("form") is not None:
        form = form_from_json(obj["form"], field)
        adaptation = obj["adaptation"]
    mats = [matrix_from_json(m, field) for m in obj["basis"]]
    return OperatorSpace.from_matrices(mats, field=field, n=obj["n"],
                                       form=form, adaptation=adaptation)


def witt_json(w: WittDecomposition) -> dict:
    return {"witt_index": w.witt_index,
            "hyperbolic_pairs": [[vector_json(f), vector_json(h)]
                                 for f, h in w.hyperbolic_pairs],
            "anisotropic_basis": [vector_json(v) for v in w.anisotropic_basis],
            "basis_change": matrix_json(w.basis_change),
            "block_gram": matrix_json(w.block_gram),
            "anisotropic_certified": w.anisotropic_certified}


def jsonable(value):
    """Recursively convert library values into plain JSON data."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, (FpElement, RationalFunction, Fraction)):
        return scalar_str(value)
    if isinstance(value, Matrix):
        return matrix_json(value)
    if isinstance(value, Subspace):
        return subspace_json(value)
    if isinstance(value, Flag):
        return flag_json(value)
    if isinstance(value, BilinearForm):
        return form_json(value)
    if isinstance(value, OperatorSpace):
        return space_json(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    raise BadParameters(f"cannot serialise {type(value).__name__}")


def dump(obj) -> str:
    """Canonical byte-stable JSON text."""
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))
