"""Derived data of an operator space at a vector x.

For a form-adapted space V and an isotropic x != 0 this produces:

  applied          V x = {u(x) : u in V}
  tensor_preimage  L = {y : (adapted tensor of x and y) in V}
  annihilator      U = {u in V : u(x) = 0}
  quotient         V mod x = induced operators on {x}^perp / Fx, carrying
                   the induced form and the same adaptation.

The dimension bookkeeping then reads
  dim V = dim Vx + dim L + dim (V mod x)        for S_b spaces,
  dim V = dim Vx + dim L - 1 + dim (V mod x)    for A_b spaces.

For a form-free space the classical analogues are produced instead:
dual_functionals = {f : f (.) x in V} (functionals f with the rank-one map
y -> f(y) x inside V), and the quotient lives on F^n / Fx with
  dim V = dim Vx + dim dual + dim (V mod x).
"""
from __future__ import annotations

from dataclasses import dataclass

from .bilinear import QuotientForm, quotient_form
from .endo import tensor_for_class
from .errors import NonIsotropicVector, ZeroVector
from .linalg import (Matrix, Subspace, coerce_vec, kernel_basis, line_quotient,
                     unit_vec, vec_is_zero)
from .spaces import A_B, OperatorSpace


@dataclass(frozen=True)
class ReductionData:
    x: tuple
    applied: Subspace                       # V x
    tensor_preimage: Subspace | None        # L (form case)
    dual_functionals: Subspace | None       # classical V^x (form-free case)
    annihilator: OperatorSpace              # {u in V : u(x) = 0}
    quotient: OperatorSpace                 # V mod x
    quotient_data: QuotientForm | tuple     # maps used to build the quotient

    def dimension_identity(self, space_dim: int) -> tuple[int, int]:
        """(lhs, rhs) of the bookkeeping identity for the parent dimension."""
        if self.tensor_preimage is not None:
            adjust = -1 if self.quotient.adaptation == A_B else 0
            rhs = self.applied.dim + self.tensor_preimage.dim + adjust + self.quotient.dim
        else:
            rhs = self.applied.dim + self.dual_functionals.dim + self.quotient.dim
        return space_dim, rhs


def _preimage_under_linear_map(space: OperatorSpace, columns: list) -> Subspace:
    """{y : T y in V} for the map with the given flattened matrix columns."""
    field = space.field
    n = space.n
    T = Matrix.from_rows(field, columns).transpose()     # (n*n) x n
    ann = space.basis_subspace.annihilator()
    if ann.dim == 0:
        return Subspace.full(field, n)
    A = Matrix.from_rows(field, ann.basis, cols=n * n)
    return Subspace.span(field, n, kernel_basis(A @ T))


def reduction_data(space: OperatorSpace, x) -> ReductionData:
    field = space.field
    n = space.n
    x = coerce_vec(field, x)
    if vec_is_zero(x):
        raise ZeroVector("reduction needs x != 0")

    applied = space.applied_to(x)

    # U = kernel of u -> u(x), as a subspace of the space
    apply_cols = [B.apply(x) for B in space.basis_matrices()]
    if apply_cols:
        applym = Matrix.from_rows(field, apply_cols).transpose()   # n x dim
        U_coeffs = kernel_basis(applym)
    else:
        U_coeffs = []
    U_mats = [space.element(c) for c in U_coeffs]

    if space.form is not None:
        if bool(space.form.evaluate(x, x)):
            raise NonIsotropicVector("reduction needs b(x, x) = 0")
        tensor_cols = [tensor_for_class(space.form, x, unit_vec(field, n, j),
                                        space.adaptation).flatten()
                       for j in range(n)]
        L = _preimage_under_linear_map(space, tensor_cols)
        q = quotient_form(space.form, x)
        quot_mats = [q.projection @ M @ q.section for M in U_mats]
        quotient = OperatorSpace.from_matrices(
            quot_mats, field=field, n=n - 2, form=q.form,
            adaptation=space.adaptation)
        annihilator = OperatorSpace.from_matrices(
            U_mats, field=field, n=n, form=space.form,
            adaptation=space.adaptation)
        return ReductionData(x=x, applied=applied, tensor_preimage=L,
                             dual_functionals=None, annihilator=annihilator,
                             quotient=quotient, quotient_data=q)

    # classical, form-free case
    dual_cols = [Matrix.outer(field, x, unit_vec(field, n, j)).flatten()
                 for j in range(n)]
    dual = _preimage_under_linear_map(space, dual_cols)
    proj, sect = line_quotient(field, x)
    quot_mats = [proj @ M @ sect for M in U_mats]
    quotient = OperatorSpace.from_matrices(quot_mats, field=field, n=n - 1)
    annihilator = OperatorSpace.from_matrices(U_mats, field=field, n=n)
    return ReductionData(x=x, applied=applied, tensor_preimage=None,
                         dual_functionals=dual, annihilator=annihilator,
                         quotient=quotient, quotient_data=(proj, sect))
