"""Individual endomorphisms adapted to a bilinear form.

An endomorphism u is b-symmetric (class S_b) when (x, y) -> b(x, u(y)) is a
symmetric bilinear form, b-alternating (class A_b) when that form is
alternating; equivalently, gram @ u is a symmetric (resp. alternating)
matrix.  This module classifies single endomorphisms, builds the rank <= 2
adapted tensors, extracts nilpotency profiles, decomposes a nilpotent
b-alternating endomorphism over a symmetric form into orthogonal
indecomposable blocks, and produces a stable maximal singular flag.
"""
from __future__ import annotations

from dataclasses import dataclass

from .bilinear import ALTERNATING, BilinearForm, find_isotropic, quotient_form
from .errors import (DegenerateForm, DimensionMismatch, NotNilpotent,
                     PreconditionViolated, VerificationFailed)
from .flags import Flag
from .linalg import (Matrix, Subspace, Vector, coerce_vec, matrix_image,
                     matrix_kernel, rank, solve, vec_is_zero)

B_SYMMETRIC = "b_symmetric"
B_ALTERNATING = "b_alternating"
NEITHER = "neither"

_CLASS_TO_SPACE = {B_SYMMETRIC: "S_b", B_ALTERNATING: "A_b"}
_SPACE_TO_CLASS = {"S_b": B_SYMMETRIC, "A_b": B_ALTERNATING}


def adaptedness(u: Matrix, form: BilinearForm) -> str:
    """Classify u via the Gram product criterion."""
    if not u.is_square or u.rows != form.n:
        raise DimensionMismatch("endomorphism vs form dimension")
    if u.field != form.field:
        raise DimensionMismatch("endomorphism and form over different fields")
    M = form.gram @ u
    if M.is_symmetric():
        return B_SYMMETRIC
    if M.is_alternating():
        return B_ALTERNATING
    return NEITHER


def adaptedness_check(u: Matrix, form: BilinearForm):
    """(classification, nilpotent flag); nilpotency decided by u^n = 0."""
    cls = adaptedness(u, form)
    return cls, u.power(u.rows).is_zero()


@dataclass(frozen=True)
class AdaptedEndo:
    """An endomorphism together with its form and verified adaptation class."""

    matrix: Matrix
    form: BilinearForm
    adaptation: str

    def __post_init__(self):
        GM = self.form.gram @ self.matrix
        ok = (GM.is_symmetric() if self.adaptation == B_SYMMETRIC
              else GM.is_alternating())
        if not ok:
            raise PreconditionViolated(
                f"matrix is {adaptedness(self.matrix, self.form)}, "
                f"not {self.adaptation}")


def tensor(form: BilinearForm, x, y, kind: str) -> Matrix:
    """Rank <= 2 adapted tensor of x and y.

    kind 'sym' gives z -> b(y,z) x + b(x,z) y  (lies in S_b);
    kind 'alt' gives z -> b(y,z) x - b(x,z) y  (lies in A_b).
    """
    field = form.field
    x = coerce_vec(field, x)
    y = coerce_vec(field, y)
    if len(x) != form.n or len(y) != form.n:
        raise DimensionMismatch("vector length vs form dimension")
    gx = form.gram.transpose().apply(x)       # row x^T . gram
    gy = form.gram.transpose().apply(y)
    first = Matrix.outer(field, x, gy)
    second = Matrix.outer(field, y, gx)
    if kind == "sym":
        return first + second
    if kind == "alt":
        return first - second
    raise PreconditionViolated(f"unknown tensor kind {kind!r}")


def tensor_for_class(form: BilinearForm, x, y, adaptation: str) -> Matrix:
    """The tensor landing in the given adaptation class ('S_b' or 'A_b')."""
    return tensor(form, x, y, "sym" if adaptation == "S_b" else "alt")


# ---------------------------------------------------------------------------
# nilpotency profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NilProfile:
    nilindex: int
    partition: tuple

    @property
    def jordan_cells(self):
        return self.partition


def nil_profile(u: Matrix) -> NilProfile:
    """Least k with u^k = 0 plus the Jordan partition from the rank sequence.

    The multiplicity of cell size s is rk(u^{s-1}) - 2 rk(u^s) + rk(u^{s+1}).
    Raises NotNilpotent when u^n != 0.
    """
    if not u.is_square:
        raise DimensionMismatch("nilpotency profile of a non-square matrix")
    n = u.rows
    if n == 0:
        return NilProfile(0, ())
    ranks = [n]
    P = u
    k = 1
    while k <= n:
        if P.is_zero():
            break
        ranks.append(rank(P))
        P = P @ u
        k += 1
    else:
        raise NotNilpotent(f"u^{n} != 0", witness=u)
    ranks.extend([0, 0])
    parts = []
    for s in range(1, k + 1):
        mult = ranks[s - 1] - 2 * ranks[s] + ranks[s + 1]
        parts.extend([s] * mult)
    parts.sort(reverse=True)
    return NilProfile(k, tuple(parts))


def nilindex(u: Matrix) -> int:
    return nil_profile(u).nilindex


# ---------------------------------------------------------------------------
# decomposition into indecomposable orthogonal blocks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrthogonalBlock:
    """One b-regular u-stable block of an orthogonal decomposition.

    shape is ('odd_cell', q) with q odd, or ('double_even_cell', q) with q
    even; chains holds one Jordan chain per cell, each ordered bottom-up
    (e_1, ..., e_q) with u(e_i) = e_{i-1}, in ambient coordinates.
    """

    subspace: Subspace
    shape: tuple
    chains: tuple


def _restricted_map(field, rows, images):
    """Matrix of a map on span(rows) given the images of the rows.

    Column i holds the coordinates of images[i] in the `rows` basis.
    """
    B = Matrix.from_rows(field, rows).transpose()
    cols = [solve(B, img) for img in images]
    return Matrix.from_rows(field, cols).transpose()


def indecomposable_decompose(form: BilinearForm, u: Matrix) -> list[OrthogonalBlock]:
    """Split V into b-orthogonal u-stable blocks, one indecomposable each.

    Requires b symmetric non-degenerate and u nilpotent b-alternating.  Each
    block is either one Jordan cell of odd size or two Jordan cells of the
    same even size, found constructively: with q the smallest cell size, the
    pairing (v, w) -> b(v, u^{q-1}(w)) on Ker u^q is non-zero, and a vector
    (q odd) or pair (q even) realising it spans off a regular block.
    """
    if form.kind != "symmetric":
        raise PreconditionViolated("decomposition needs a symmetric form")
    if not form.is_nondegenerate:
        raise DegenerateForm("decomposition needs a non-degenerate form")
    cls, nil = adaptedness_check(u, form)
    if cls != B_ALTERNATING:
        raise PreconditionViolated(f"u is {cls}, needs {B_ALTERNATING}")
    if not nil:
        raise PreconditionViolated("u is not nilpotent")

    field = form.field
    ambient = Matrix.identity(field, form.n).entries

    def recurse(basis_rows, gram_res, u_res):
        k = len(basis_rows)
        if k == 0:
            return []
        prof = nil_profile(u_res)
        q = min(prof.partition)
        ker = matrix_kernel(u_res.power(q))
        # pairing (v, w) -> b(v, u^{q-1} w) in current coordinates
        M = gram_res @ u_res.power(q - 1)

        def pair(a, b):
            acc = field.zero()
            for i, ai in enumerate(a):
                if bool(ai):
                    row = M.entries[i]
                    for j, bj in enumerate(b):
                        if bool(bj) and bool(row[j]):
                            acc = acc + ai * row[j] * bj
            return acc

        kb = ker.basis
        x = y = None
        if q % 2 == 1:
            # symmetric pairing: a basis vector or a sum of two realises it
            for v in kb:
                if bool(pair(v, v)):
                    x = v
                    break
            if x is None:
                for i in range(len(kb)):
                    for j in range(i):
                        if bool(pair(kb[i], kb[j])):
                            x = tuple(a + b for a, b in zip(kb[i], kb[j]))
                            break
                    if x is not None:
                        break
            if x is None:
                raise VerificationFailed("no odd-block generator found")
            chain_x = [x]
            for _ in range(q - 1):
                chain_x.append(u_res.apply(chain_x[-1]))
            chain_x.reverse()                  # e_1, ..., e_q
            block_rows = chain_x
            chains_local = (tuple(chain_x),)
            shape = ("odd_cell", q)
        else:
            # alternating pairing: some basis pair realises it
            for i in range(len(kb)):
                for j in range(i):
                    if bool(pair(kb[i], kb[j])):
                        x, y = kb[i], kb[j]
                        break
                if x is not None:
                    break
            if x is None:
                raise VerificationFailed("no even-block generator pair found")
            chain_x = [x]
            chain_y = [y]
            for _ in range(q - 1):
                chain_x.append(u_res.apply(chain_x[-1]))
                chain_y.append(u_res.apply(chain_y[-1]))
            chain_x.reverse()
            chain_y.reverse()
            block_rows = chain_x + chain_y
            chains_local = (tuple(chain_x), tuple(chain_y))
            shape = ("double_even_cell", q)

        W = Subspace.span(field, k, block_rows)
        if W.dim != len(block_rows):
            raise VerificationFailed("block chains are dependent")
        Bmat = Matrix.from_rows(field, block_rows, cols=k)
        if rank(Bmat @ gram_res @ Bmat.transpose()) != W.dim:
            raise VerificationFailed("block is not b-regular")
        # orthogonal complement of the block inside the current space
        comp = matrix_kernel(Bmat @ gram_res)
        comp_rows = list(comp.basis)
        u_comp = _restricted_map(field, comp_rows, [u_res.apply(r) for r in comp_rows])
        Cmat = Matrix.from_rows(field, comp_rows, cols=k)
        gram_comp = Cmat @ gram_res @ Cmat.transpose()

        def lift(vec_local):
            out = [field.zero()] * len(basis_rows[0])
            for c, row in zip(vec_local, basis_rows):
                if bool(c):
                    out = [a + c * b for a, b in zip(out, row)]
            return tuple(out)

        block = OrthogonalBlock(
            subspace=Subspace.span(field, form.n, [lift(r) for r in block_rows]),
            shape=shape,
            chains=tuple(tuple(lift(v) for v in ch) for ch in chains_local),
        )
        rest = recurse([lift(r) for r in comp_rows], gram_comp, u_comp)
        return [block] + rest

    return recurse(list(ambient), form.gram, u)


# ---------------------------------------------------------------------------
# stable maximal singular flags
# ---------------------------------------------------------------------------

def is_singular_flag(flag: Flag, form: BilinearForm) -> bool:
    """True when the top flag subspace is totally singular for the form."""
    top = flag.top
    return form.orthogonal_complement(top).contains_subspace(top)


def stable_singular_flag(form: BilinearForm, u: Matrix) -> Flag:
    """A maximal partially complete singular flag stable under u.

    For u != 0 any vector of im u^{ind-1} lies in Ker u and in im u, hence is
    isotropic and annihilated by u; passing to {x}^perp / Fx reduces the Witt
    index by one, and the recursion lifts its flag through preimages.  Also
    certifies that u maps the orthogonal complement of the top subspace into
    the top subspace.
    """
    if not form.is_nondegenerate:
        raise DegenerateForm("stable flag needs a non-degenerate form")
    cls, nil = adaptedness_check(u, form)
    if cls == NEITHER:
        raise PreconditionViolated("u is not adapted to the form")
    if not nil:
        raise PreconditionViolated("u is not nilpotent")

    def recurse(form_cur, u_cur):
        nu = form_cur.witt_index()
        if nu == 0:
            return []
        if u_cur.is_zero():
            x = find_isotropic(form_cur)
        else:
            ind = nil_profile(u_cur).nilindex
            x = matrix_image(u_cur.power(ind - 1)).basis[0]
        q = quotient_form(form_cur, x)
        u_bar = q.projection @ u_cur @ q.section
        lower = recurse(q.form, u_bar)
        out = [[x]]
        for level in lower:
            out.append([x] + [tuple(q.section.apply(v)) for v in level])
        return out

    field = form.field
    levels = recurse(form, u)
    flag = Flag(field, form.n,
                [Subspace.span(field, form.n, vecs) for vecs in levels])
    nu = form.witt_index()
    if flag.length != nu:
        raise VerificationFailed("constructed flag has the wrong length")
    if not is_singular_flag(flag, form):
        raise VerificationFailed("constructed flag is not singular")
    top = flag.top
    perp = form.orthogonal_complement(top)
    if not all(top.contains(u.apply(w)) for w in perp.basis):
        raise VerificationFailed("u does not map top-perp into top")
    for S in flag.subspaces:
        if not all(S.contains(u.apply(v)) for v in S.basis):
            raise VerificationFailed("flag is not stable under u")
    return flag
