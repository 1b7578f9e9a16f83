"""Symmetric and alternating bilinear forms over fields of characteristic != 2.

Covers validation and evaluation, radicals and orthogonal complements,
isotropic-vector searches, constructive Witt decomposition, and the induced
form on {x}^perp / Fx for an isotropic x.  Degenerate forms are legal values
(they arise as restrictions); non-degeneracy is a queryable property.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (CharTwoUnsupported, DegenerateForm, DimensionMismatch,
                     IncompleteSearchWarning, KindMismatch, NonIsotropicVector,
                     ZeroVector)
from .fields import Field, PrimeField
from .linalg import (Matrix, Subspace, Vector, coerce_vec, kernel_basis,
                     matrix_kernel, solve, vec_is_zero, vec_scale, vec_sub)

SYMMETRIC = "symmetric"
ALTERNATING = "alternating"


class BilinearForm:
    """A bilinear form given by its Gram matrix and declared kind."""

    __slots__ = ("gram", "kind", "field", "n", "_witt")

    def __init__(self, gram: Matrix, kind: str):
        if gram.field.char == 2:
            raise CharTwoUnsupported("bilinear forms need characteristic != 2")
        if not gram.is_square:
            raise DimensionMismatch("Gram matrix must be square")
        if kind == SYMMETRIC:
            if not gram.is_symmetric():
                raise KindMismatch("Gram matrix is not symmetric")
        elif kind == ALTERNATING:
            if not gram.is_alternating():
                raise KindMismatch("Gram matrix is not alternating")
        else:
            raise KindMismatch(f"unknown kind {kind!r}")
        self.gram = gram
        self.kind = kind
        self.field = gram.field
        self.n = gram.rows
        self._witt = None

    def evaluate(self, x, y):
        """b(x, y) = x^T . gram . y."""
        x = coerce_vec(self.field, x)
        y = coerce_vec(self.field, y)
        if len(x) != self.n or len(y) != self.n:
            raise DimensionMismatch("vector length vs form dimension")
        acc = self.field.zero()
        for i, xi in enumerate(x):
            if bool(xi):
                row = self.gram.entries[i]
                for j, yj in enumerate(y):
                    if bool(yj) and bool(row[j]):
                        acc = acc + xi * row[j] * yj
        return acc

    def is_isotropic_vector(self, x) -> bool:
        return not bool(self.evaluate(x, x))

    def radical(self) -> Subspace:
        """Vectors orthogonal to the whole space."""
        return matrix_kernel(self.gram)

    @property
    def is_nondegenerate(self) -> bool:
        return self.radical().dim == 0

    def orthogonal_complement(self, W: Subspace) -> Subspace:
        """W^perp = {v : b(w, v) = 0 for all w in W}."""
        if W.ambient_dim != self.n:
            raise DimensionMismatch("subspace vs form dimension")
        if W.dim == 0:
            return Subspace.full(self.field, self.n)
        rows = Matrix.from_rows(self.field, W.basis, cols=self.n) @ self.gram
        return matrix_kernel(rows)

    def vector_complement(self, x) -> Subspace:
        """{x}^perp for a single vector."""
        return self.orthogonal_complement(Subspace.span(self.field, self.n, [x]))

    def restricted_gram(self, W: Subspace) -> Matrix:
        """Gram matrix of the restriction to W, in W's echelon basis coordinates."""
        B = Matrix.from_rows(self.field, W.basis, cols=self.n)
        return B @ self.gram @ B.transpose()

    def restriction_radical(self, W: Subspace) -> Subspace:
        """Radical of b|_W, returned in ambient coordinates."""
        res = self.restricted_gram(W)
        return Subspace.span(self.field, self.n,
                             [W.from_coordinates(c) for c in kernel_basis(res)])

    def witt_index(self) -> int:
        return self.witt_decomposition().witt_index

    def witt_decomposition(self) -> "WittDecomposition":
        if self._witt is None:
            self._witt = witt_decompose(self)
        return self._witt

    def __eq__(self, other):
        return (isinstance(other, BilinearForm) and self.kind == other.kind
                and self.gram == other.gram)

    def __hash__(self):
        return hash((self.kind, self.gram))

    def __repr__(self):
        return f"BilinearForm({self.kind}, n={self.n}, {self.field})"


# ---------------------------------------------------------------------------
# isotropic vectors
# ---------------------------------------------------------------------------

def _coefficient_vectors(field: Field, k: int, limit: int):
    """Non-zero coefficient tuples in a fixed deterministic order.

    Finite fields: lexicographic over the canonical element order, exhaustive
    when |F|^k <= limit.  Infinite fields: graded sweep over the field's
    small-element ladder, truncated at `limit` tuples.
    """
    if field.is_finite:
        elems = list(field.elements())
        total = len(elems) ** k
        count = 0
        for tup in itertools.product(elems, repeat=k):
            if count >= limit and count < total:
                warnings.warn("isotropic search truncated by the vector limit",
                              IncompleteSearchWarning)
                return
            count += 1
            if any(bool(c) for c in tup):
                yield tup
        return
    # graded radius sweep: all tuples with ladder index < r, increasing r
    count = 0
    r = 2
    seen_radius = 0
    while count < limit:
        ladder = list(itertools.islice(field.small_elements(), r))
        for tup in itertools.product(range(r), repeat=k):
            if max(tup) < seen_radius:    # already emitted at a smaller radius
                continue
            vec = tuple(ladder[i] for i in tup)
            if any(bool(c) for c in vec):
                count += 1
                yield vec
                if count >= limit:
                    warnings.warn("isotropic search truncated by the vector limit",
                                  IncompleteSearchWarning)
                    return
        seen_radius = r
        r += 1


def find_isotropic(form: BilinearForm, within: Subspace | None = None,
                   limit: int = 10 ** 6) -> Vector | None:
    """First non-zero x with b(x, x) = 0 in `within`, or None if none exists.

    Deterministic for fixed input.  For alternating forms every non-zero
    vector qualifies.  Over finite fields the search is exhaustive whenever
    the space has at most `limit` vectors, so None is then a certificate.
    """
    W = within if within is not None else Subspace.full(form.field, form.n)
    if W.dim == 0:
        return None
    if form.kind == ALTERNATING:
        return W.basis[0]
    res = form.restricted_gram(W)
    k = W.dim
    field = form.field
    if isinstance(field, PrimeField) and field.p ** k <= limit:
        p = field.p
        G = np.array([[x.v for x in row] for row in res.entries], dtype=np.int64)
        block = 1 << 14
        total = p ** k
        powers = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
        for start in range(0, total, block):
            idx = np.arange(start, min(start + block, total), dtype=np.int64)
            C = (idx[:, None] // powers[None, :]) % p
            vals = np.einsum("mi,ij,mj->m", C, G, C) % p
            hits = np.nonzero((vals == 0) & (idx > 0))[0]
            if hits.size:
                coeffs = coerce_vec(field, [int(c) for c in C[hits[0]]])
                return W.from_coordinates(coeffs)
        return None
    for coeffs in _coefficient_vectors(field, k, limit):
        acc = field.zero()
        for i, ci in enumerate(coeffs):
            if bool(ci):
                for j, cj in enumerate(coeffs):
                    if bool(cj) and bool(res.entries[i][j]):
                        acc = acc + ci * res.entries[i][j] * cj
        if not bool(acc):
            return W.from_coordinates(coeffs)
    return None


# ---------------------------------------------------------------------------
# Witt decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WittDecomposition:
    """Hyperbolic pairs (f_i, h_i), an orthogonal anisotropic basis, and the
    change of basis T whose columns are (f_1..f_nu, g_1..g_p, h_1..h_nu);
    T^T . gram . T is the block Gram matrix stored in `block_gram`."""

    hyperbolic_pairs: tuple
    anisotropic_basis: tuple
    witt_index: int
    basis_change: Matrix
    block_gram: Matrix
    anisotropic_certified: bool


def witt_decompose(form: BilinearForm, isotropy_limit: int = 10 ** 6) -> WittDecomposition:
    """Constructive Witt decomposition of a non-degenerate form.

    Repeatedly finds an isotropic f in the current complement, solves
    b(f, h) = 1 for h there, makes h isotropic via h <- h - (b(h,h)/2) f,
    and passes to the orthogonal complement of the pair.
    """
    if not form.is_nondegenerate:
        raise DegenerateForm("Witt decomposition needs a non-degenerate form")
    field = form.field
    n = form.n
    half = field.inv(field.of(2))
    pairs = []
    current = Subspace.full(field, n)
    while True:
        f = find_isotropic(form, within=current, limit=isotropy_limit)
        if f is None:
            break
        # solve b(f, y) = 1 with y constrained to the current subspace
        row = Matrix.from_rows(field, [f], cols=n) @ form.gram
        Wmat = Matrix.from_rows(field, current.basis, cols=n)
        coeffs = solve(row @ Wmat.transpose(), [field.one()])
        h = current.from_coordinates(coeffs)
        h = vec_sub(h, vec_scale(form.evaluate(h, h) * half, f))
        pairs.append((f, h))
        span_fh = Subspace.span(field, n, [f, h])
        current = current.intersect(form.orthogonal_complement(span_fh))
    certified = form.field.is_finite and form.field.order ** current.dim <= isotropy_limit
    if not certified and current.dim > 0:
        warnings.warn("anisotropic part not certified over an infinite field",
                      IncompleteSearchWarning)
    # orthogonalise the anisotropic part; every non-zero vector there is
    # non-isotropic, so the projections never divide by zero
    aniso = []
    for v in current.basis:
        w = v
        for g in aniso:
            coef = form.evaluate(v, g) * field.inv(form.evaluate(g, g))
            w = vec_sub(w, vec_scale(coef, g))
        aniso.append(w)
    cols = [p[0] for p in pairs] + aniso + [p[1] for p in pairs]
    T = Matrix.from_rows(field, cols, cols=n).transpose() if cols else Matrix.zero(field, n, 0)
    block = T.transpose() @ form.gram @ T
    return WittDecomposition(
        hyperbolic_pairs=tuple(pairs),
        anisotropic_basis=tuple(aniso),
        witt_index=len(pairs),
        basis_change=T,
        block_gram=block,
        anisotropic_certified=certified,
    )


# ---------------------------------------------------------------------------
# quotient form on {x}^perp / Fx
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientForm:
    """Form induced on {x}^perp / Fx together with quotient coordinates.

    `projection` is (n-2) x n and only meaningful on {x}^perp; `section` is
    n x (n-2), maps onto a fixed complement of Fx inside {x}^perp, and
    satisfies projection @ section = id.
    """

    form: BilinearForm
    x: Vector
    projection: Matrix
    section: Matrix


def quotient_form(form: BilinearForm, x) -> QuotientForm:
    """Induced form on {x}^perp / Fx for an isotropic x != 0.

    The coset section is pinned by the echelon basis of {x}^perp: drop the
    basis vector carrying the first non-zero coordinate of x.
    """
    field = form.field
    x = coerce_vec(field, x)
    if vec_is_zero(x):
        raise ZeroVector("quotient by the zero vector")
    if bool(form.evaluate(x, x)):
        raise NonIsotropicVector("quotient needs b(x, x) = 0")
    if not form.is_nondegenerate:
        raise DegenerateForm("quotient form needs a non-degenerate form")
    n = form.n
    W = form.vector_complement(x)            # contains x, dim n-1
    lam = W.coordinates(x)
    j = next(i for i, c in enumerate(lam) if bool(c))
    keep = [i for i in range(W.dim) if i != j]
    inv = field.inv(lam[j])
    z, o = field.zero(), field.one()
    # projection: extract echelon coordinates at pivot columns, then kill the
    # x-component; rows are indexed by the kept basis vectors
    proj_rows = []
    for i in keep:
        row = [z] * n
        row[W.pivots[i]] = o
        coef = lam[i] * inv
        if bool(coef):
            row[W.pivots[j]] = row[W.pivots[j]] - coef
        proj_rows.append(row)
    projection = Matrix(field, proj_rows, n - 2, n)
    section = Matrix.from_rows(field, [W.basis[i] for i in keep], cols=n).transpose()
    gram_bar = section.transpose() @ form.gram @ section
    qform = BilinearForm(gram_bar, form.kind)
    if not qform.is_nondegenerate:
        raise DegenerateForm("induced quotient form is degenerate")
    return QuotientForm(form=qform, x=x, projection=projection, section=section)
