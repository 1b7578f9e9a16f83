"""Generic nilindex profiling of nilpotent operator spaces.

The generic nilindex of a nilpotent space is the greatest nilindex among its
elements.  Writing p for it, the profile also gathers the union of the
images im v^(p-1) over the space (`top_images` holds a sample of those
vectors, `span` their full linear span) and decides purity: whether every
element of nilindex p has rk v^(p-1) <= 1.

Over a finite field with |F|^dim within budget the sweep is exhaustive and
the result is exact.  Otherwise elements are sampled and the nilindex is a
certified lower bound, upgraded to exact when it meets the theoretical cap
(ind u <= min(n, 2 nu + 1) for adapted u, further n - 1 for b-alternating u
when n = 2 nu).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .endo import nil_profile
from .errors import NotNilpotent
from .linalg import Subspace, coerce_vec, image_basis, rank
from .spaces import A_B, OperatorSpace
from .sweeps import (DEFAULT_BUDGET, batched_nilindex, batched_power,
                     coeff_blocks, int_basis, int_rref, is_fast_field,
                     map_blocks, materialize, rank_le1_mask,
                     sample_coefficients)

TOP_IMAGE_SAMPLE = 128


@dataclass(frozen=True)
class GenericProfile:
    nilindex: int
    status: str                # 'exact' | 'lower_bound'
    pure: bool
    top_images: tuple          # sample of vectors from the top-image union
    span: Subspace             # linear span of the whole top-image union
    cap: int
    inspected: int
    attained_count: int        # inspected elements of maximal nilindex
    witness_coeffs: tuple | None


def nilindex_cap(space: OperatorSpace) -> int:
    """Largest nilindex any element may have, from the ambient structure."""
    n = space.n
    if space.form is None:
        return n
    nu = space.form.witt_index()
    cap = min(n, 2 * nu + 1)
    if space.adaptation == A_B and n == 2 * nu:
        cap = min(cap, n - 1)
    return cap


def _fast_profile(space: OperatorSpace, threads: int):
    p = space.field.p
    n = space.n
    d = space.dim
    basis = int_basis(space)
    total = p ** d

    # pass 1: nilindex of every element
    best = 0
    best_idx = None
    inspected = 0

    def scan(blk):
        start, digits = blk
        U = materialize(digits, basis, p)
        return start, digits, batched_nilindex(U, p)

    for start, digits, ind in map_blocks(scan, coeff_blocks(p, d), threads):
        inspected += len(ind)
        bad = np.nonzero(ind > n)[0]
        if bad.size:
            coeffs = coerce_vec(space.field, [int(c) for c in digits[bad[0]]])
            raise NotNilpotent("element is not nilpotent",
                               witness=(coeffs, space.element(coeffs)))
        mx = int(ind.max()) if len(ind) else 0
        if mx > best:
            best = mx
            best_idx = start + int(np.nonzero(ind == mx)[0][0])
    pmax = max(best, 0)

    # pass 2: top images, purity, and the count of extremal elements
    pure = True
    attained = 0
    columns = set()

    def collect(blk):
        # pass 1 proved every element nilpotent with ind <= pmax, so an
        # element attains pmax exactly when u^(pmax-1) != 0
        start, digits = blk
        U = materialize(digits, basis, p)
        P = batched_power(U, pmax - 1, p)
        sel = P.reshape(len(P), -1).any(axis=1)
        return int(sel.sum()), P[sel]

    for count, P in map_blocks(collect, coeff_blocks(p, d), threads):
        attained += count
        if P.shape[0] == 0:
            continue
        if not rank_le1_mask(P, p).all():
            pure = False
        cols = np.transpose(P, (0, 2, 1)).reshape(-1, n)
        cols = cols[cols.any(axis=1)]
        if cols.size:
            columns.update(map(tuple, np.unique(cols, axis=0).tolist()))

    span_rows, _ = int_rref(sorted(columns), p)
    span = Subspace.span(space.field, n,
                         [coerce_vec(space.field, r) for r in span_rows])
    top = tuple(coerce_vec(space.field, c) for c in sorted(columns)[:TOP_IMAGE_SAMPLE])
    witness = None
    if best_idx is not None:
        digits = [(best_idx // p ** (d - 1 - j)) % p for j in range(d)]
        witness = coerce_vec(space.field, digits)
    return GenericProfile(
        nilindex=pmax, status="exact", pure=pure, top_images=top, span=span,
        cap=nilindex_cap(space), inspected=inspected, attained_count=attained,
        witness_coeffs=witness)


def _sampled_profile(space: OperatorSpace, samples: int, seed: int):
    field = space.field
    n = space.n
    cap = nilindex_cap(space)
    coeff_list = sample_coefficients(field, space.dim, samples, seed)
    best = 0
    witness = None
    tops = []
    pure = True
    attained = 0
    for coeffs in coeff_list:
        M = space.element(coeffs)
        try:
            prof = nil_profile(M)
        except NotNilpotent:
            raise NotNilpotent("element is not nilpotent", witness=(coeffs, M))
        if prof.nilindex > best:
            best = prof.nilindex
            witness = coeffs
            tops = []
            attained = 0
            pure = True
        if prof.nilindex == best and best >= 1:
            attained += 1
            P = M.power(best - 1)
            if rank(P) > 1:
                pure = False
            tops.extend(image_basis(P))
    span = Subspace.span(field, n, tops)
    status = "exact" if best == cap else "lower_bound"
    return GenericProfile(
        nilindex=best, status=status, pure=pure,
        top_images=tuple(tops[:TOP_IMAGE_SAMPLE]), span=span, cap=cap,
        inspected=len(coeff_list), attained_count=attained,
        witness_coeffs=witness)


def generic_profile(space: OperatorSpace, budget: int = DEFAULT_BUDGET,
                    samples: int = 512, seed: int = 0,
                    threads: int = 1) -> GenericProfile:
    """Profile the space; exhaustive and exact within budget over gf(p).

    Raises NotNilpotent (with a witness pair of coefficients and matrix) when
    the space is not nilpotent after all.
    """
    if space.dim == 0:
        # only the zero map: nilindex 1 on a non-zero space, 0 on F^0;
        # its 0th power is the identity, so the top-image union is everything
        n = space.n
        pmax = 1 if n else 0
        return GenericProfile(
            nilindex=pmax, status="exact", pure=(n <= 1),
            top_images=tuple(Subspace.full(space.field, n).basis),
            span=Subspace.full(space.field, n), cap=nilindex_cap(space),
            inspected=1, attained_count=1, witness_coeffs=())
    if is_fast_field(space.field) and space.field.p ** space.dim <= budget:
        return _fast_profile(space, threads)
    return _sampled_profile(space, samples, seed)
