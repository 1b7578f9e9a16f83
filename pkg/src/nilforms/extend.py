"""Extension of scalars for nilpotent operator spaces.

A purely transcendental extension F_p -> F_p(t) preserves Witt indices, and
nilpotency of the whole space survives the extension provided the base field
has at least d elements, where d is the largest nilindex available in the
ambient adapted class:

  alternating form, S_b space:            d = n
  symmetric form, A_b space, n != 2 nu:   d = 2 nu + 1
  symmetric form, A_b space, n  = 2 nu:   d = n - 1
  otherwise (adapted):                    d = min(n, 2 nu + 1)
  form-free:                              d = n

The extension is always produced; when the cardinality bound fails the
report flags the hypothesis instead of refusing, and the sampled nilpotency
checks still run.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .bilinear import ALTERNATING, SYMMETRIC, BilinearForm
from .errors import UnsupportedExtension
from .fields import Field, PrimeField, RationalFunctionField
from .linalg import Matrix, Subspace
from .spaces import A_B, S_B, OperatorSpace


@dataclass(frozen=True)
class ExtensionReport:
    hypothesis_met: bool
    required_cardinality: int
    base_cardinality: int | None
    checked: int
    max_nilindex_seen: int
    failures: tuple          # coefficient tuples of non-nilpotent combinations
    distinguished_nilindex: int | None   # nilindex of sum t^(i-1) u_i


def _required_cardinality(space: OperatorSpace) -> int:
    n = space.n
    if space.form is None:
        return n
    nu = space.form.witt_index()
    if space.form.kind == ALTERNATING and space.adaptation == S_B:
        return n
    if space.form.kind == SYMMETRIC and space.adaptation == A_B:
        return (n - 1) if n == 2 * nu else (2 * nu + 1)
    return min(n, 2 * nu + 1)


def _lift_matrix(M: Matrix, target: Field) -> Matrix:
    return Matrix(target, [[target.of(x.v) for x in row] for row in M.entries])


def extend_scalars(space: OperatorSpace, target: Field, checks: int = 50,
                   seed: int = 0):
    """Reinterpret the space over `target`; verify sampled nilpotency.

    Supported targets: the space's own field (identity) and gf(p)(t) over a
    base gf(p).  Returns (extended space, ExtensionReport).  The report
    always includes the distinguished combination sum_i t^(i-1) u_i over the
    echelon basis.
    """
    base = space.field
    if target == base:
        report = ExtensionReport(
            hypothesis_met=True, required_cardinality=_required_cardinality(space),
            base_cardinality=base.order, checked=0, max_nilindex_seen=0,
            failures=(), distinguished_nilindex=None)
        return space, report
    if not (isinstance(base, PrimeField) and isinstance(target, RationalFunctionField)
            and target.p == base.p):
        raise UnsupportedExtension(f"cannot extend {base} to {target}")

    mats = [_lift_matrix(M, target) for M in space.basis_matrices()]
    form = None
    if space.form is not None:
        form = BilinearForm(_lift_matrix(space.form.gram, target), space.form.kind)
    n = space.n
    sub = Subspace.span(target, n * n, [M.flatten() for M in mats])
    extended = OperatorSpace(target, n, sub, form, space.adaptation)

    required = _required_cardinality(space)
    met = base.order >= required

    def nilindex_or_none(M):
        P = Matrix.identity(target, n)
        for k in range(1, n + 1):
            P = P @ M
            if P.is_zero():
                return k
        return None

    failures = []
    max_seen = 0
    t = target.variable()
    distinguished = None
    combo = Matrix.zero(target, n, n)
    power = target.one()
    for M in mats:
        combo = combo + M.scale(power)
        power = power * t
    if mats:
        distinguished = nilindex_or_none(combo)
        if distinguished is None:
            failures.append(("distinguished",))
        else:
            max_seen = max(max_seen, distinguished)

    rng = random.Random(seed)
    done = 1 if mats else 0
    while done < checks and space.dim > 0:
        coeffs = tuple(target.random(rng) for _ in range(space.dim))
        M = extended.element(coeffs)
        ind = nilindex_or_none(M)
        if ind is None:
            failures.append(coeffs)
        else:
            max_seen = max(max_seen, ind)
        done += 1

    report = ExtensionReport(
        hypothesis_met=met, required_cardinality=required,
        base_cardinality=base.order, checked=done,
        max_nilindex_seen=max_seen, failures=tuple(failures),
        distinguished_nilindex=distinguished)
    return extended, report
