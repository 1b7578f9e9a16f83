"""Structural property checks for nilpotent operator spaces.

Each check validates the cardinality / dimension hypotheses of the property
it tests and reports `hypothesis_unmet` when they fail, `pass` when the
property held over the exhaustive or sampled sweep, and `fail` with a
concrete witness otherwise.

Available checks:

  trace                  tr(u^k v) = 0 for k < |F|
  cubes                  u^3 stays in the space (|F| > 3)
  jordan_product_triple  u^2 v + u v u + v u^2 stays in the space (|F| > 3)
  strong_orthogonality   Fx + Vx is exactly the orthogonal of L at maximal
                         dimension
  tangent_inclusion      V x lies in u(K) for x in im u^(p-1), |F| >= p
  reducibility           K inside Fx + Vx forces Vx = 0, |F| >= p
  tensor_orthogonality   b(y, v^k(x)) = 0 for odd k < |F| when the (x,y)
                         tensor lies in the space
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .endo import nil_profile
from .errors import NonIsotropicVector, PreconditionViolated, ZeroVector
from .linalg import Subspace, coerce_vec, matrix_image, vec_is_zero
from .profile import generic_profile
from .reduction import reduction_data
from .spaces import A_B, S_B, OperatorSpace
from .sweeps import (DEFAULT_BUDGET, batched_power, coeff_blocks, int_basis,
                     int_matrix, is_fast_field, map_blocks, materialize,
                     membership_mask, sample_coefficients)

PASS = "pass"
FAIL = "fail"
HYPOTHESIS_UNMET = "hypothesis_unmet"

CHECK_NAMES = ("trace", "cubes", "jordan_product_triple", "strong_orthogonality",
               "tangent_inclusion", "reducibility", "tensor_orthogonality")


@dataclass(frozen=True)
class Verdict:
    check: str
    status: str
    witness: dict | None = None
    counters: dict = dc_field(default_factory=dict)
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == PASS


def _unmet(check, reason):
    return Verdict(check, HYPOTHESIS_UNMET, detail=reason)


def _coeffs_of(field, digits):
    return tuple(field.of(int(c)) for c in digits)


def _exhaustible(space, budget):
    return is_fast_field(space.field) and space.field.p ** space.dim <= budget


# ---------------------------------------------------------------------------
# stability checks: trace, cubes, triple
# ---------------------------------------------------------------------------

def _check_trace(space, k, budget, samples, seed, threads):
    if k is None:
        k = 1
    order = space.field.order
    if order is not None and k >= order:
        return _unmet("trace", f"needs k < |F| but k={k}, |F|={order}")
    basis = space.basis_matrices()
    counters = {"k": k, "pairs": 0}
    if _exhaustible(space, budget):
        p = space.field.p
        ibasis = int_basis(space)
        bts = [int_matrix(B).T.copy() for B in basis]
        for start, digits in coeff_blocks(p, space.dim):
            U = materialize(digits, ibasis, p)
            Uk = batched_power(U, k, p)
            for j, Bt in enumerate(bts):
                tr = np.einsum("mij,ij->m", Uk, Bt) % p
                counters["pairs"] += len(tr)
                bad = np.nonzero(tr)[0]
                if bad.size:
                    cf = _coeffs_of(space.field, digits[bad[0]])
                    return Verdict("trace", FAIL,
                                   witness={"u_coeffs": cf, "v_index": j, "k": k},
                                   counters=counters)
        counters["mode"] = "exhaustive"
    else:
        for coeffs in sample_coefficients(space.field, space.dim, samples, seed):
            u = space.element(coeffs)
            uk = u.power(k)
            for j, B in enumerate(basis):
                counters["pairs"] += 1
                if bool((uk @ B).trace()):
                    return Verdict("trace", FAIL,
                                   witness={"u_coeffs": coeffs, "v_index": j, "k": k},
                                   counters=counters)
        counters["mode"] = "sampled"
    return Verdict("trace", PASS, counters=counters)


def _space_membership_tools(space):
    rows = np.array([[x.v for x in row] for row in space.basis_subspace.basis],
                    dtype=np.int64)
    if rows.size == 0:
        rows = rows.reshape(0, space.n * space.n)
    return rows, list(space.basis_subspace.pivots)


def _check_cubes(space, budget, samples, seed, threads):
    order = space.field.order
    if order is not None and order <= 3:
        return _unmet("cubes", f"needs |F| > 3 but |F|={order}")
    counters = {"elements": 0}
    if _exhaustible(space, budget):
        p = space.field.p
        ibasis = int_basis(space)
        rows, pivots = _space_membership_tools(space)
        for start, digits in coeff_blocks(p, space.dim):
            U = materialize(digits, ibasis, p)
            U3 = batched_power(U, 3, p)
            member = membership_mask(U3.reshape(len(U3), -1), rows, pivots, p)
            counters["elements"] += len(member)
            bad = np.nonzero(~member)[0]
            if bad.size:
                cf = _coeffs_of(space.field, digits[bad[0]])
                return Verdict("cubes", FAIL, witness={"u_coeffs": cf},
                               counters=counters)
        counters["mode"] = "exhaustive"
    else:
        for coeffs in sample_coefficients(space.field, space.dim, samples, seed):
            u = space.element(coeffs)
            counters["elements"] += 1
            if not space.contains(u.power(3)):
                return Verdict("cubes", FAIL, witness={"u_coeffs": coeffs},
                               counters=counters)
        counters["mode"] = "sampled"
    return Verdict("cubes", PASS, counters=counters)


def _check_triple(space, budget, samples, seed, threads):
    order = space.field.order
    if order is not None and order <= 3:
        return _unmet("jordan_product_triple", f"needs |F| > 3 but |F|={order}")
    basis = space.basis_matrices()
    counters = {"pairs": 0}
    if _exhaustible(space, budget):
        p = space.field.p
        ibasis = int_basis(space)
        rows, pivots = _space_membership_tools(space)
        ibs = [int_matrix(B) for B in basis]
        for start, digits in coeff_blocks(p, space.dim):
            U = materialize(digits, ibasis, p)
            U2 = np.matmul(U, U) % p
            for j, B in enumerate(ibs):
                W = (np.matmul(U2, B) + np.matmul(np.matmul(U, B), U)
                     + np.matmul(B, U2)) % p
                member = membership_mask(W.reshape(len(W), -1), rows, pivots, p)
                counters["pairs"] += len(member)
                bad = np.nonzero(~member)[0]
                if bad.size:
                    cf = _coeffs_of(space.field, digits[bad[0]])
                    return Verdict("jordan_product_triple", FAIL,
                                   witness={"u_coeffs": cf, "v_index": j},
                                   counters=counters)
        counters["mode"] = "exhaustive"
    else:
        for coeffs in sample_coefficients(space.field, space.dim, samples, seed):
            u = space.element(coeffs)
            u2 = u @ u
            for j, B in enumerate(basis):
                counters["pairs"] += 1
                w = u2 @ B + u @ B @ u + B @ u2
                if not space.contains(w):
                    return Verdict("jordan_product_triple", FAIL,
                                   witness={"u_coeffs": coeffs, "v_index": j},
                                   counters=counters)
        counters["mode"] = "sampled"
    return Verdict("jordan_product_triple", PASS, counters=counters)


# ---------------------------------------------------------------------------
# orthogonality / reducibility checks
# ---------------------------------------------------------------------------

def _max_dimension(space):
    if space.form is None:
        return space.n * (space.n - 1) // 2
    nu = space.form.witt_index()
    n = space.n
    return nu * (n - nu) if space.adaptation == S_B else nu * (n - nu - 1)


def _check_strong_orthogonality(space, x):
    if space.form is None:
        return _unmet("strong_orthogonality", "needs a form-adapted space")
    if x is None:
        raise PreconditionViolated("strong_orthogonality needs a vector x")
    x = coerce_vec(space.field, x)
    if vec_is_zero(x):
        raise ZeroVector("x must be non-zero")
    if bool(space.form.evaluate(x, x)):
        raise NonIsotropicVector("x must be isotropic")
    want = _max_dimension(space)
    if space.dim != want:
        return _unmet("strong_orthogonality",
                      f"needs maximal dimension {want}, space has {space.dim}")
    rd = reduction_data(space, x)
    line = Subspace.span(space.field, space.n, [x])
    left = line.add(rd.applied)
    right = space.form.orthogonal_complement(rd.tensor_preimage)
    counters = {"dim_FxVx": left.dim, "dim_L": rd.tensor_preimage.dim,
                "dim_quotient": rd.quotient.dim}
    lhs, rhs = rd.dimension_identity(space.dim)
    if left == right and left.dim + rd.tensor_preimage.dim == space.n and lhs == rhs:
        return Verdict("strong_orthogonality", PASS, counters=counters)
    return Verdict("strong_orthogonality", FAIL,
                   witness={"x": x, "FxVx_equals_Lperp": left == right,
                            "dim_identity": (lhs, rhs)},
                   counters=counters)


def _top_image_pairs(space, budget, samples, seed):
    """(coeffs, u, p, top image subspace) for elements of maximal nilindex."""
    prof = generic_profile(space, budget=budget, samples=samples, seed=seed)
    pmax = prof.nilindex
    pairs = []
    for coeffs in sample_coefficients(space.field, space.dim, samples, seed):
        u = space.element(coeffs)
        prof_u = nil_profile(u)
        if prof_u.nilindex == pmax:
            pairs.append((coeffs, u, matrix_image(u.power(pmax - 1))))
    return prof, pairs


def _check_tangent(space, budget, samples, seed):
    prof, pairs = _top_image_pairs(space, budget, samples, seed)
    order = space.field.order
    if order is not None and order < prof.nilindex:
        return _unmet("tangent_inclusion",
                      f"needs |F| >= {prof.nilindex}, |F|={order}")
    counters = {"pairs": 0, "nilindex": prof.nilindex}
    K = prof.span
    for coeffs, u, image in pairs:
        uK = Subspace.span(space.field, space.n,
                           [u.apply(v) for v in K.basis])
        for x in image.basis:
            counters["pairs"] += 1
            Vx = space.applied_to(x)
            if not uK.contains_subspace(Vx):
                return Verdict("tangent_inclusion", FAIL,
                               witness={"u_coeffs": coeffs, "x": x},
                               counters=counters)
    return Verdict("tangent_inclusion", PASS, counters=counters)


def _check_reducibility(space, x, budget, samples, seed):
    if x is None:
        raise PreconditionViolated("reducibility needs a vector x")
    x = coerce_vec(space.field, x)
    if vec_is_zero(x):
        raise ZeroVector("x must be non-zero")
    prof, pairs = _top_image_pairs(space, budget, samples, seed)
    order = space.field.order
    if order is not None and order < prof.nilindex:
        return _unmet("reducibility", f"needs |F| >= {prof.nilindex}, |F|={order}")
    if not any(image.contains(x) for _, _, image in pairs):
        return _unmet("reducibility",
                      "x was not observed in the top-image union")
    line = Subspace.span(space.field, space.n, [x])
    Vx = space.applied_to(x)
    enlarged = line.add(Vx)
    counters = {"nilindex": prof.nilindex, "dim_Vx": Vx.dim}
    if not enlarged.contains_subspace(prof.span):
        return _unmet("reducibility", "condition K inside Fx + Vx does not hold")
    if Vx.dim == 0:
        return Verdict("reducibility", PASS, counters=counters)
    return Verdict("reducibility", FAIL,
                   witness={"x": x, "dim_Vx": Vx.dim}, counters=counters)


def _check_tensor_orthogonality(space, x, budget, samples, seed):
    if space.form is None:
        return _unmet("tensor_orthogonality", "needs a form-adapted space")
    if x is None:
        raise PreconditionViolated("tensor_orthogonality needs a vector x")
    x = coerce_vec(space.field, x)
    if vec_is_zero(x):
        raise ZeroVector("x must be non-zero")
    if bool(space.form.evaluate(x, x)):
        raise NonIsotropicVector("x must be isotropic")
    rd = reduction_data(space, x)
    ys = list(rd.tensor_preimage.basis)
    order = space.field.order
    kmax = space.n if order is None else min(space.n, order - 1)
    ks = [k for k in range(1, kmax + 1) if k % 2 == 1]
    counters = {"triples": 0, "odd_powers": ks, "dim_L": len(ys)}
    if not ys or not ks:
        return Verdict("tensor_orthogonality", PASS, counters=counters)
    if _exhaustible(space, budget):
        p = space.field.p
        ibasis = int_basis(space)
        G = int_matrix(space.form.gram)
        xi = np.array([c.v for c in x], dtype=np.int64)
        rows_y = [np.matmul(np.array([c.v for c in y], dtype=np.int64), G) % p
                  for y in ys]
        for start, digits in coeff_blocks(p, space.dim):
            U = materialize(digits, ibasis, p)
            P = U
            for k in range(1, max(ks) + 1):
                if k in ks:
                    w = np.matmul(P, xi) % p           # v^k(x) per element
                    for j, row in enumerate(rows_y):
                        vals = np.matmul(w, row) % p
                        counters["triples"] += len(vals)
                        bad = np.nonzero(vals)[0]
                        if bad.size:
                            cf = _coeffs_of(space.field, digits[bad[0]])
                            return Verdict(
                                "tensor_orthogonality", FAIL,
                                witness={"v_coeffs": cf, "y_index": j, "k": k},
                                counters=counters)
                if k < max(ks):
                    P = np.matmul(P, U) % p
        counters["mode"] = "exhaustive"
    else:
        for coeffs in sample_coefficients(space.field, space.dim, samples, seed):
            v = space.element(coeffs)
            w = x
            for k in range(1, max(ks) + 1):
                w = v.apply(w)
                if k in ks:
                    for j, y in enumerate(ys):
                        counters["triples"] += 1
                        if bool(space.form.evaluate(y, w)):
                            return Verdict(
                                "tensor_orthogonality", FAIL,
                                witness={"v_coeffs": coeffs, "y_index": j, "k": k},
                                counters=counters)
        counters["mode"] = "sampled"
    return Verdict("tensor_orthogonality", PASS, counters=counters)


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------

def theorem_check(space: OperatorSpace, which: str, x=None, k: int | None = None,
                  budget: int = DEFAULT_BUDGET, samples: int = 512,
                  seed: int = 0, threads: int = 1) -> Verdict:
    """Run one named check against the space.  See the module docstring."""
    which = which.lower()
    if which == "trace":
        return _check_trace(space, k, budget, samples, seed, threads)
    if which == "cubes":
        return _check_cubes(space, budget, samples, seed, threads)
    if which == "jordan_product_triple":
        return _check_triple(space, budget, samples, seed, threads)
    if which == "strong_orthogonality":
        return _check_strong_orthogonality(space, x)
    if which == "tangent_inclusion":
        return _check_tangent(space, budget, samples, seed)
    if which == "reducibility":
        return _check_reducibility(space, x, budget, samples, seed)
    if which == "tensor_orthogonality":
        return _check_tensor_orthogonality(space, x, budget, samples, seed)
    raise PreconditionViolated(f"unknown check {which!r}; "
                               f"expected one of {CHECK_NAMES}")
