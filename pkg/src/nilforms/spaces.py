"""Linear subspaces of End(V) and the canonical maximal nilpotent spaces.

An OperatorSpace stores its basis as the reduced row echelon basis of a
subspace of F^(n*n) (row-major flattening), so two spaces are equal exactly
when their stored bases agree.  The builders assemble the three canonical
families as solution spaces of linear constraints:

  nf   strictly flag-decreasing endomorphisms of a complete flag,
       dimension n(n-1)/2;
  ws   nilpotent b-symmetric endomorphisms stabilising a maximal singular
       flag, dimension nu(n-nu);
  wa   the b-alternating analogue, dimension nu(n-nu-1).

For ws/wa the constraints are {gram.U symmetric (resp. alternating),
U F_i <= F_{i-1} for i = 1..nu, U F_nu^perp <= F_nu}; the third constraint
forces nilpotency through the strictly decreasing chain
0 < F_1 < ... < F_nu <= F_nu^perp < ... < F_1^perp < V, and a post-build
audit plus the exact dimension formula guard the construction.
"""
from __future__ import annotations

import itertools
import random

from .bilinear import BilinearForm
from .endo import B_ALTERNATING, B_SYMMETRIC
from .errors import (DimensionMismatch, FlagNotMaximal, FlagNotSingular,
                     NotNilpotent, PreconditionViolated)
from .fields import Field
from .flags import Flag
from .linalg import Matrix, Subspace, kernel_basis

S_B = "S_b"
A_B = "A_b"
_ADAPT_CLASS = {S_B: B_SYMMETRIC, A_B: B_ALTERNATING}


class OperatorSpace:
    """Canonicalised subspace of End(F^n), optionally adapted to a form."""

    __slots__ = ("field", "n", "basis_subspace", "form", "adaptation", "_mats")

    def __init__(self, field: Field, n: int, basis_subspace: Subspace,
                 form: BilinearForm | None = None, adaptation: str | None = None,
                 check_adapted: bool = True):
        if basis_subspace.ambient_dim != n * n:
            raise DimensionMismatch("basis subspace must live in F^(n*n)")
        if (form is None) != (adaptation is None):
            raise PreconditionViolated("form and adaptation come together")
        if form is not None:
            if form.n != n or form.field != field:
                raise DimensionMismatch("form does not match the space")
            if adaptation not in _ADAPT_CLASS:
                raise PreconditionViolated(f"unknown adaptation {adaptation!r}")
        self.field = field
        self.n = n
        self.basis_subspace = basis_subspace
        self.form = form
        self.adaptation = adaptation
        self._mats = None
        if form is not None and check_adapted:
            for M in self.basis_matrices():
                GM = form.gram @ M
                ok = GM.is_symmetric() if adaptation == S_B else GM.is_alternating()
                if not ok:
                    raise PreconditionViolated(
                        f"basis element is not {_ADAPT_CLASS[adaptation]} for the form")

    @classmethod
    def from_matrices(cls, matrices, field=None, n=None,
                      form: BilinearForm | None = None,
                      adaptation: str | None = None) -> "OperatorSpace":
        matrices = list(matrices)
        if matrices:
            field = matrices[0].field if field is None else field
            n = matrices[0].rows if n is None else n
        if field is None or n is None:
            raise DimensionMismatch("empty space needs explicit field and n")
        sub = Subspace.span(field, n * n, [M.flatten() for M in matrices])
        return cls(field, n, sub, form, adaptation)

    @property
    def dim(self) -> int:
        return self.basis_subspace.dim

    def basis_matrices(self) -> list[Matrix]:
        if self._mats is None:
            self._mats = [Matrix.unflatten(self.field, self.n, row)
                          for row in self.basis_subspace.basis]
        return self._mats

    def element(self, coeffs) -> Matrix:
        M = Matrix.zero(self.field, self.n, self.n)
        for c, B in zip(coeffs, self.basis_matrices()):
            c = self.field.of(c)
            if bool(c):
                M = M + B.scale(c)
        return M

    def contains(self, M: Matrix) -> bool:
        return self.basis_subspace.contains(M.flatten())

    def coordinates(self, M: Matrix):
        return self.basis_subspace.coordinates(M.flatten())

    def common_kernel(self) -> Subspace:
        """Intersection of the kernels of all elements (basis suffices)."""
        stacked = [row for B in self.basis_matrices() for row in B.entries]
        if not stacked:
            return Subspace.full(self.field, self.n)
        return Subspace.span(self.field, self.n,
                             kernel_basis(Matrix.from_rows(self.field, stacked,
                                                           cols=self.n)))

    def applied_to(self, x) -> Subspace:
        """The subspace {u(x) : u in the space}."""
        return Subspace.span(self.field, self.n,
                             [B.apply(x) for B in self.basis_matrices()])

    def iterate_elements(self):
        """All elements over a finite field, lexicographic in coefficients."""
        elems = list(self.field.elements())
        for coeffs in itertools.product(elems, repeat=self.dim):
            yield coeffs, self.element(coeffs)

    def __eq__(self, other):
        return (isinstance(other, OperatorSpace) and self.field == other.field
                and self.n == other.n
                and self.basis_subspace == other.basis_subspace
                and self.form == other.form and self.adaptation == other.adaptation)

    def __hash__(self):
        return hash((self.field, self.n, self.basis_subspace))

    def __repr__(self):
        tag = f", {self.adaptation}" if self.adaptation else ""
        return f"OperatorSpace(dim {self.dim} in End(F^{self.n}){tag})"


# ---------------------------------------------------------------------------
# constraint assembly
# ---------------------------------------------------------------------------

def _stability_rows(field, n, source_vectors, target: Subspace):
    """Rows forcing U w in target for each listed w (unknowns U_ij at i*n+j)."""
    rows = []
    ann = target.annihilator().basis
    z = field.zero()
    for w in source_vectors:
        for f in ann:
            row = [z] * (n * n)
            for i in range(n):
                if bool(f[i]):
                    for j in range(n):
                        if bool(w[j]):
                            row[i * n + j] = f[i] * w[j]
            rows.append(tuple(row))
    return rows


def _adapted_rows(form: BilinearForm, adaptation: str):
    """Rows forcing gram @ U symmetric (S_b) or alternating (A_b)."""
    G = form.gram
    n = form.n
    field = form.field
    z = field.zero()
    rows = []
    sign = field.of(-1) if adaptation == S_B else field.one()
    for i in range(n):
        for j in range(i):
            row = [z] * (n * n)
            for k in range(n):
                if bool(G.entries[i][k]):
                    row[k * n + j] = row[k * n + j] + G.entries[i][k]
                if bool(G.entries[j][k]):
                    row[k * n + i] = row[k * n + i] + sign * G.entries[j][k]
            rows.append(tuple(row))
    if adaptation == A_B:
        for i in range(n):
            row = [z] * (n * n)
            for k in range(n):
                if bool(G.entries[i][k]):
                    row[k * n + i] = G.entries[i][k]
            rows.append(tuple(row))
    return rows


def build_canonical_space(kind: str, flag: Flag,
                          form: BilinearForm | None = None,
                          audit_samples: int = 32) -> OperatorSpace:
    """Construct nf / ws / wa for the given flag (and form, for ws/wa).

    The computed dimension is checked against the exact formula and a
    deterministic audit verifies nilpotency of sample elements; violations
    raise (they would signal a bad flag or an internal bug).
    """
    kind = kind.lower()
    field = flag.field
    n = flag.ambient_dim
    if kind == "nf":
        if form is not None:
            raise PreconditionViolated("nf takes no bilinear form")
        if not flag.is_complete:
            raise DimensionMismatch("nf needs a complete flag")
        rows = []
        for i in range(1, n + 1):
            rows.extend(_stability_rows(field, n, flag.subspace(i).basis,
                                        flag.subspace(i - 1)))
        expected = n * (n - 1) // 2
        space_form, adaptation = None, None
    elif kind in ("ws", "wa"):
        if form is None:
            raise PreconditionViolated(f"{kind} needs a bilinear form")
        if form.field != field or form.n != n:
            raise DimensionMismatch("form does not match the flag")
        nu = form.witt_index()
        top = flag.top
        if not form.orthogonal_complement(top).contains_subspace(top):
            raise FlagNotSingular("top flag subspace is not totally singular")
        if flag.length != nu:
            raise FlagNotMaximal(f"flag length {flag.length}, Witt index {nu}")
        adaptation = S_B if kind == "ws" else A_B
        rows = list(_adapted_rows(form, adaptation))
        for i in range(1, nu + 1):
            rows.extend(_stability_rows(field, n, flag.subspace(i).basis,
                                        flag.subspace(i - 1)))
        perp = form.orthogonal_complement(top)
        rows.extend(_stability_rows(field, n, perp.basis, top))
        expected = nu * (n - nu) if kind == "ws" else nu * (n - nu - 1)
        space_form = form
    else:
        raise PreconditionViolated(f"unknown space kind {kind!r}")

    if rows:
        basis = kernel_basis(Matrix.from_rows(field, rows, cols=n * n))
    else:
        basis = list(Subspace.full(field, n * n).basis)
    sub = Subspace.span(field, n * n, basis)
    if sub.dim != expected:
        raise DimensionMismatch(
            f"built {kind} space has dim {sub.dim}, formula gives {expected}")
    space = OperatorSpace(field, n, sub, space_form, adaptation)
    _audit_nilpotency(space, audit_samples)
    return space


def _audit_nilpotency(space: OperatorSpace, samples: int):
    for B in space.basis_matrices():
        if not B.power(space.n).is_zero():
            raise NotNilpotent("basis element is not nilpotent", witness=B)
    if space.dim == 0 or samples <= 0:
        return
    rng = random.Random(421)
    for _ in range(samples):
        coeffs = [space.field.random(rng) for _ in range(space.dim)]
        M = space.element(coeffs)
        if not M.power(space.n).is_zero():
            raise NotNilpotent("audited combination is not nilpotent", witness=M)


def adapted_ambient(form: BilinearForm, adaptation: str) -> OperatorSpace:
    """All of S_b or A_b as an operator space."""
    rows = _adapted_rows(form, adaptation)
    field, n = form.field, form.n
    basis = kernel_basis(Matrix.from_rows(field, rows, cols=n * n))
    return OperatorSpace(field, n, Subspace.span(field, n * n, basis),
                         form, adaptation, check_adapted=False)


def full_endomorphism_space(field: Field, n: int) -> OperatorSpace:
    return OperatorSpace(field, n, Subspace.full(field, n * n))
