"""Recover the defining flag of a maximal-dimension nilpotent space.

Both classifiers run the same certified recursion: find a non-zero vector x
annihilated by the whole space (isotropic in the form-bearing case), pass to
the quotient, classify there, and lift the recovered flag through preimages
with F_1 = Fx.  The final answer is always verified by rebuilding the
canonical space from the recovered flag and comparing it with the input; a
mismatch raises VerificationFailed rather than returning a guess.

classify_classical handles form-free spaces of dimension n(n-1)/2 over a
field with at least n elements (characteristic 2 included).
classify_structured handles form-adapted spaces of dimension nu(n-nu) for
S_b and nu(n-nu-1) for A_b.
"""
from __future__ import annotations

from .bilinear import ALTERNATING, SYMMETRIC, find_isotropic, quotient_form
from .errors import (CommonKernelEmpty, DimensionMismatch,
                     NoIsotropicCommonKernelVector, PreconditionViolated,
                     VerificationFailed)
from .flags import Flag
from .linalg import Subspace, line_quotient
from .spaces import A_B, S_B, OperatorSpace, build_canonical_space


def _lift_flag_vectors(x, section_apply, levels):
    """Flag vector lists for F_1 = span(x), F_{k+1} = span(x, lifted G_k)."""
    out = [[x]]
    for level in levels:
        out.append([x] + [section_apply(v) for v in level])
    return out


def classify_classical(space: OperatorSpace, force: bool = False) -> Flag:
    """The unique complete flag F with `space` = nf(F).

    Preconditions: |F| >= n, dim = n(n-1)/2, all elements nilpotent.  With
    force=True the dimension gate is skipped and the recursion is attempted
    anyway; it then fails with CommonKernelEmpty on spaces that annihilate
    no vector (for instance the 3x3 counterexample pencil).
    """
    if space.form is not None:
        raise PreconditionViolated("classical classification is form-free")
    field = space.field
    if field.order is not None and field.order < space.n:
        raise PreconditionViolated(
            f"needs |F| >= n = {space.n}, field has {field.order} elements")
    for B in space.basis_matrices():
        if not B.power(space.n).is_zero():
            raise PreconditionViolated("space contains a non-nilpotent element")

    def recurse(spc: OperatorSpace):
        n = spc.n
        expected = n * (n - 1) // 2
        if spc.dim != expected and not force:
            raise DimensionMismatch(
                f"dim {spc.dim} != n(n-1)/2 = {expected} at n = {n}")
        if n == 0:
            return []
        if n == 1:
            return [[(spc.field.one(),)]]
        C = spc.common_kernel()
        if C.dim == 0:
            raise CommonKernelEmpty(
                "no non-zero vector is annihilated by the whole space")
        x = C.basis[0]
        proj, sect = line_quotient(spc.field, x)
        quot = OperatorSpace.from_matrices(
            [proj @ M @ sect for M in spc.basis_matrices()],
            field=spc.field, n=n - 1)
        levels = recurse(quot)
        return _lift_flag_vectors(x, lambda v: tuple(sect.apply(v)), levels)

    levels = recurse(space)
    flag = Flag(field, space.n,
                [Subspace.span(field, space.n, vecs) for vecs in levels])
    rebuilt = build_canonical_space("nf", flag)
    if rebuilt.basis_subspace != space.basis_subspace:
        raise VerificationFailed("recovered flag does not rebuild the space")
    return flag


_CARDINALITY_BOUNDS = {
    # (form kind, adaptation) -> required |F| as a function of (n, nu);
    # None means the classification carries no cardinality hypothesis
    (SYMMETRIC, A_B): lambda n, nu: min(n, 2 * nu + 1),
    (ALTERNATING, S_B): lambda n, nu: n,
    (SYMMETRIC, S_B): None,
    (ALTERNATING, A_B): None,
}


def classify_structured(space: OperatorSpace, force: bool = False) -> Flag:
    """The maximal singular flag F with `space` = ws(F) or wa(F).

    The recursion needs a non-zero isotropic vector in the common kernel; at
    maximal dimension its existence is guaranteed under the cardinality
    hypotheses, and the final rebuild certifies the answer in all cases.
    """
    if space.form is None or space.adaptation is None:
        raise PreconditionViolated("structured classification needs a form")
    field = space.field
    if field.char == 2:
        raise PreconditionViolated("structured classification rejects char 2")
    bound = _CARDINALITY_BOUNDS[(space.form.kind, space.adaptation)]
    nu0 = space.form.witt_index()
    if bound is not None and field.order is not None:
        need = bound(space.n, nu0)
        if field.order < need:
            raise PreconditionViolated(
                f"needs |F| >= {need}, field has {field.order} elements")
    for B in space.basis_matrices():
        if not B.power(space.n).is_zero():
            raise PreconditionViolated("space contains a non-nilpotent element")
    kind = "ws" if space.adaptation == S_B else "wa"

    def recurse(spc: OperatorSpace):
        n = spc.n
        nu = spc.form.witt_index()
        expected = nu * (n - nu) if kind == "ws" else nu * (n - nu - 1)
        if spc.dim != expected and not force:
            raise DimensionMismatch(
                f"dim {spc.dim} != {expected} at (n, nu) = ({n}, {nu})")
        if nu == 0:
            if spc.dim != 0:
                raise DimensionMismatch("Witt index 0 admits only the zero space")
            return []
        C = spc.common_kernel()
        x = find_isotropic(spc.form, within=C) if C.dim else None
        if x is None:
            raise NoIsotropicCommonKernelVector(
                "the common kernel holds no non-zero isotropic vector")
        q = quotient_form(spc.form, x)
        quot = OperatorSpace.from_matrices(
            [q.projection @ M @ q.section for M in spc.basis_matrices()],
            field=spc.field, n=n - 2, form=q.form, adaptation=spc.adaptation)
        levels = recurse(quot)
        return _lift_flag_vectors(x, lambda v: tuple(q.section.apply(v)), levels)

    levels = recurse(space)
    flag = Flag(field, space.n,
                [Subspace.span(field, space.n, vecs) for vecs in levels])
    rebuilt = build_canonical_space(kind, flag, space.form)
    if rebuilt.basis_subspace != space.basis_subspace:
        raise VerificationFailed("recovered flag does not rebuild the space")
    return flag
