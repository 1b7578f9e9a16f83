"""Brute-force verification engine.

Verdicts here come from powering matrices directly over enumerated (or
sampled) elements; nothing is inferred from the flag constraints that built
a space, so oracle numbers independently confirm the analytic claims.

Properties:

  all_nilpotent             u^n = 0 for every element
  nilindex_cap              ind u <= min(n, 2 nu + 1) (n - 1 for A_b, n = 2 nu)
  rank_bound                rk u <= min(2 nu, n - 1), and <= n - 2 for
                            b-alternating u when n = 2 nu
  purity                    every u of maximal nilindex has rk u^(p-1) <= 1
  isotropic_top_images      every vector of im u^(p-1) is isotropic
  tangent_inclusion         V x inside u(K) for x in im u^(p-1)
  reducibility_contrapositive  V x != 0 forces K outside Fx + Vx

maximality_probe refutes strict nilpotent enlargements direction by
direction inside the ambient adapted space (or all of End(V) for form-free
spaces): pass means every tested enlargement contains a non-nilpotent
element at this budget.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .endo import nil_profile
from .errors import BudgetExceeded, NotNilpotent, PreconditionViolated
from .linalg import Matrix, Subspace, coerce_vec, matrix_image, rank
from .linalg import _rref_int
from .spaces import (A_B, OperatorSpace, adapted_ambient,
                     full_endomorphism_space)
from .sweeps import (DEFAULT_BUDGET, coeff_blocks, int_basis, int_matrix,
                     is_fast_field, map_blocks, materialize, rank_le1_mask,
                     sample_coefficients)

ORACLE_PROPERTIES = ("all_nilpotent", "nilindex_cap", "rank_bound", "purity",
                     "isotropic_top_images", "tangent_inclusion",
                     "reducibility_contrapositive")


@dataclass(frozen=True)
class OracleVerdict:
    property: str
    status: str                 # 'pass' | 'fail'
    mode: str                   # 'exhaustive' | 'sampled'
    counters: dict = dc_field(default_factory=dict)
    witness: dict | None = None
    coverage: float = 1.0

    @property
    def ok(self):
        return self.status == "pass"


def _structural_caps(space: OperatorSpace):
    n = space.n
    if space.form is None:
        return n, n - 1 if n else 0
    nu = space.form.witt_index()
    ind_cap = min(n, 2 * nu + 1)
    rank_cap = min(2 * nu, n - 1)
    if space.adaptation == A_B and n == 2 * nu:
        ind_cap = min(ind_cap, n - 1)
        rank_cap = min(rank_cap, n - 2)
    return ind_cap, rank_cap


def _fast_mode(space, budget):
    return is_fast_field(space.field) and space.field.p ** space.dim <= budget


def _digit_coeffs(space, digits):
    return tuple(space.field.of(int(c)) for c in digits)


def _direct_nilindex_block(U: np.ndarray, p: int, n: int):
    """Sequential power loop: per-element nilindex, 0 marking non-nilpotent."""
    m = len(U)
    ind = np.zeros(m, dtype=np.int64)
    P = U % p
    for k in range(1, n + 1):
        dead = ~P.reshape(m, -1).any(axis=1)
        ind[(ind == 0) & dead] = k
        if k == n or not (ind == 0).any():
            break
        P = np.matmul(P, U) % p
    return ind


def _direct_power_block(U: np.ndarray, k: int, p: int):
    P = np.broadcast_to(np.eye(U.shape[1], dtype=np.int64), U.shape).copy()
    for _ in range(k):
        P = np.matmul(P, U) % p
    return P


def _rank_int(rows, p):
    return len(_rref_int([list(r) for r in rows], p)[0])


def _iterate_exact(space, samples, seed):
    for coeffs in sample_coefficients(space.field, space.dim, samples, seed):
        yield coeffs, space.element(coeffs)


def exhaustive_verify(space: OperatorSpace, property: str,
                      budget: int = DEFAULT_BUDGET, samples: int = 512,
                      seed: int = 0, threads: int = 1,
                      require_exhaustive: bool = False) -> OracleVerdict:
    """Check one property over every element (within budget) or a sample."""
    if property not in ORACLE_PROPERTIES:
        raise PreconditionViolated(f"unknown oracle property {property!r}; "
                                   f"expected one of {ORACLE_PROPERTIES}")
    fast = _fast_mode(space, budget)
    if require_exhaustive and not fast:
        if not space.field.is_finite:
            raise BudgetExceeded("cannot enumerate an infinite field")
        raise BudgetExceeded(
            f"{space.field.order}^{space.dim} elements exceed budget {budget}")
    if property == "all_nilpotent":
        return _verify_nilindex(space, None, fast, budget, samples, seed, threads)
    if property == "nilindex_cap":
        cap, _ = _structural_caps(space)
        return _verify_nilindex(space, cap, fast, budget, samples, seed, threads)
    if property == "rank_bound":
        return _verify_rank_bound(space, fast, budget, samples, seed, threads)
    if property == "purity":
        return _verify_top_images(space, "purity", fast, budget, samples, seed, threads)
    if property == "isotropic_top_images":
        return _verify_top_images(space, "isotropic", fast, budget, samples, seed, threads)
    if property == "tangent_inclusion":
        return _verify_tangent(space, budget, samples, seed)
    return _verify_reducibility_contrapositive(space, budget, samples, seed)


# ---------------------------------------------------------------------------
# nilindex / rank sweeps
# ---------------------------------------------------------------------------

def _verify_nilindex(space, cap, fast, budget, samples, seed, threads):
    name = "all_nilpotent" if cap is None else "nilindex_cap"
    n = space.n
    counters = {"inspected": 0, "max_nilindex": 0}
    if cap is not None:
        counters["cap"] = cap
    if fast:
        p = space.field.p
        basis = int_basis(space)

        def scan(blk):
            start, digits = blk
            return digits, _direct_nilindex_block(materialize(digits, basis, p), p, n)

        for digits, ind in map_blocks(scan, coeff_blocks(p, space.dim), threads):
            counters["inspected"] += len(ind)
            bad = np.nonzero(ind == 0)[0]
            if bad.size:
                return OracleVerdict(name, "fail", "exhaustive", counters,
                                     {"coeffs": _digit_coeffs(space, digits[bad[0]]),
                                      "reason": "not nilpotent"})
            mx = int(ind.max()) if len(ind) else 0
            counters["max_nilindex"] = max(counters["max_nilindex"], mx)
            if cap is not None and mx > cap:
                over = np.nonzero(ind > cap)[0][0]
                return OracleVerdict(name, "fail", "exhaustive", counters,
                                     {"coeffs": _digit_coeffs(space, digits[over]),
                                      "nilindex": int(ind[over])})
        return OracleVerdict(name, "pass", "exhaustive", counters)
    total = None if not space.field.is_finite else space.field.order ** space.dim
    for coeffs, M in _iterate_exact(space, samples, seed):
        counters["inspected"] += 1
        try:
            prof = nil_profile(M)
        except NotNilpotent:
            return OracleVerdict(name, "fail", "sampled", counters,
                                 {"coeffs": coeffs, "reason": "not nilpotent"},
                                 coverage=0.0)
        counters["max_nilindex"] = max(counters["max_nilindex"], prof.nilindex)
        if cap is not None and prof.nilindex > cap:
            return OracleVerdict(name, "fail", "sampled", counters,
                                 {"coeffs": coeffs, "nilindex": prof.nilindex})
    cov = counters["inspected"] / total if total else 0.0
    return OracleVerdict(name, "pass", "sampled", counters, coverage=min(cov, 1.0))


def _verify_rank_bound(space, fast, budget, samples, seed, threads):
    _, rank_cap = _structural_caps(space)
    counters = {"inspected": 0, "max_rank": 0, "cap": rank_cap}
    if fast:
        p = space.field.p
        basis = int_basis(space)
        for start, digits in coeff_blocks(p, space.dim):
            U = materialize(digits, basis, p)
            for i in range(len(U)):
                r = _rank_int(U[i].tolist(), p)
                counters["inspected"] += 1
                counters["max_rank"] = max(counters["max_rank"], r)
                if r > rank_cap:
                    return OracleVerdict(
                        "rank_bound", "fail", "exhaustive", counters,
                        {"coeffs": _digit_coeffs(space, digits[i]), "rank": r})
        return OracleVerdict("rank_bound", "pass", "exhaustive", counters)
    for coeffs, M in _iterate_exact(space, samples, seed):
        r = rank(M)
        counters["inspected"] += 1
        counters["max_rank"] = max(counters["max_rank"], r)
        if r > rank_cap:
            return OracleVerdict("rank_bound", "fail", "sampled", counters,
                                 {"coeffs": coeffs, "rank": r})
    return OracleVerdict("rank_bound", "pass", "sampled", counters)


# ---------------------------------------------------------------------------
# top-image sweeps: purity and isotropy
# ---------------------------------------------------------------------------

def _verify_top_images(space, what, fast, budget, samples, seed, threads):
    name = "purity" if what == "purity" else "isotropic_top_images"
    n = space.n
    counters = {"inspected": 0, "max_nilindex": 0, "extremal": 0}
    if what == "isotropic" and space.form is None:
        raise PreconditionViolated("isotropy needs a form-adapted space")
    if fast:
        p = space.field.p
        basis = int_basis(space)
        pmax = 0
        for start, digits in coeff_blocks(p, space.dim):
            ind = _direct_nilindex_block(materialize(digits, basis, p), p, n)
            if (ind == 0).any():
                raise NotNilpotent("space is not nilpotent")
            pmax = max(pmax, int(ind.max()) if len(ind) else 0)
        counters["max_nilindex"] = pmax
        G = int_matrix(space.form.gram) if space.form is not None else None
        for start, digits in coeff_blocks(p, space.dim):
            U = materialize(digits, basis, p)
            P = _direct_power_block(U, pmax - 1, p) if pmax else U
            sel = P.reshape(len(P), -1).any(axis=1)
            counters["inspected"] += len(U)
            counters["extremal"] += int(sel.sum())
            Psel = P[sel]
            if what == "purity":
                good = rank_le1_mask(Psel, p)
                bad = np.nonzero(~good)[0]
            else:
                vals = np.matmul(np.transpose(Psel, (0, 2, 1)),
                                 np.matmul(G, Psel)) % p
                bad = np.nonzero(vals.reshape(len(Psel), -1).any(axis=1))[0]
            if bad.size:
                glob = np.nonzero(sel)[0][bad[0]]
                return OracleVerdict(name, "fail", "exhaustive", counters,
                                     {"coeffs": _digit_coeffs(space, digits[glob])})
        return OracleVerdict(name, "pass", "exhaustive", counters)
    # sampled
    elems = list(_iterate_exact(space, samples, seed))
    pmax = 0
    profs = []
    for coeffs, M in elems:
        prof = nil_profile(M)
        profs.append(prof)
        pmax = max(pmax, prof.nilindex)
    counters["max_nilindex"] = pmax
    for (coeffs, M), prof in zip(elems, profs):
        counters["inspected"] += 1
        if prof.nilindex != pmax:
            continue
        counters["extremal"] += 1
        P = M.power(pmax - 1)
        if what == "purity":
            if rank(P) > 1:
                return OracleVerdict(name, "fail", "sampled", counters,
                                     {"coeffs": coeffs})
        else:
            img = matrix_image(P)
            for v in img.basis:
                for w in img.basis:
                    if bool(space.form.evaluate(v, w)):
                        return OracleVerdict(name, "fail", "sampled", counters,
                                             {"coeffs": coeffs, "vector": v})
    return OracleVerdict(name, "pass", "sampled", counters)


# ---------------------------------------------------------------------------
# tangent / reducibility re-checks
# ---------------------------------------------------------------------------

def _collect_extremal(space, budget, samples, seed, cap_pairs=200):
    """Sampled (coeffs, u, top image) triples plus the span of seen images."""
    pmax = 0
    kept = []
    for coeffs, M in _iterate_exact(space, samples, seed):
        prof = nil_profile(M)
        if prof.nilindex > pmax:
            pmax = prof.nilindex
            kept = []
        if prof.nilindex == pmax:
            kept.append((coeffs, M))
    span_vectors = []
    triples = []
    for coeffs, M in kept[:cap_pairs]:
        img = matrix_image(M.power(pmax - 1))
        triples.append((coeffs, M, img))
        span_vectors.extend(img.basis)
    span = Subspace.span(space.field, space.n, span_vectors)
    return pmax, triples, span


def _verify_tangent(space, budget, samples, seed):
    pmax, triples, span = _collect_extremal(space, budget, samples, seed)
    counters = {"nilindex": pmax, "pairs": 0}
    order = space.field.order
    if order is not None and order < pmax:
        return OracleVerdict("tangent_inclusion", "pass", "sampled",
                             {"skipped": f"needs |F| >= {pmax}"}, coverage=0.0)
    for coeffs, u, img in triples:
        uK = Subspace.span(space.field, space.n, [u.apply(v) for v in span.basis])
        for x in img.basis:
            counters["pairs"] += 1
            if not uK.contains_subspace(space.applied_to(x)):
                return OracleVerdict("tangent_inclusion", "fail", "sampled",
                                     counters, {"coeffs": coeffs, "x": x})
    return OracleVerdict("tangent_inclusion", "pass", "sampled", counters)


def _verify_reducibility_contrapositive(space, budget, samples, seed):
    pmax, triples, span = _collect_extremal(space, budget, samples, seed)
    counters = {"nilindex": pmax, "vectors": 0, "nonzero_Vx": 0}
    seen = set()
    for _, _, img in triples:
        for x in img.basis:
            if x in seen:
                continue
            seen.add(x)
            counters["vectors"] += 1
            Vx = space.applied_to(x)
            if Vx.dim == 0:
                continue
            counters["nonzero_Vx"] += 1
            hull = Subspace.span(space.field, space.n, [x]).add(Vx)
            if hull.contains_subspace(span):
                return OracleVerdict("reducibility_contrapositive", "fail",
                                     "sampled", counters, {"x": x})
    return OracleVerdict("reducibility_contrapositive", "pass", "sampled",
                         counters)


# ---------------------------------------------------------------------------
# maximality probe
# ---------------------------------------------------------------------------

def maximality_probe(space: OperatorSpace, budget: int = DEFAULT_BUDGET,
                     samples: int = 64, seed: int = 0,
                     all_directions: bool = False) -> OracleVerdict:
    """Refutation probe: no direction A outside the space may extend it to a
    larger nilpotent space.

    For each tested direction the probe searches the coset {A + w : w in V}
    for a non-nilpotent element (scaling reduces every coset of the enlarged
    space to this one).  Directions default to a complement basis of the
    space inside its adapted ambient; all_directions=True enumerates every
    projective direction when the budget allows.
    """
    if space.n == 0:
        return OracleVerdict("maximality_probe", "pass", "exhaustive",
                             {"directions": 0}, coverage=1.0)
    ambient = (full_endomorphism_space(space.field, space.n) if space.form is None
               else adapted_ambient(space.form, space.adaptation))
    # complement basis of the space inside the ambient
    complement = []
    seen = space.basis_subspace
    for row in ambient.basis_subspace.basis:
        cand = Subspace.span(space.field, space.n * space.n,
                             list(seen.basis) + list(complement) + [row])
        if cand.dim > seen.dim + len(complement):
            complement.append(row)
    m = len(complement)
    field = space.field
    counters = {"ambient_dim": ambient.dim, "space_dim": space.dim,
                "complement_dim": m, "directions": 0, "cosets": 0}
    if m == 0:
        return OracleVerdict("maximality_probe", "pass", "exhaustive", counters)

    directions = []
    total_directions = m
    if all_directions:
        if not field.is_finite:
            raise BudgetExceeded("cannot enumerate directions over an infinite field")
        q = field.order
        total_directions = (q ** m - 1) // (q - 1)
        if total_directions > budget:
            raise BudgetExceeded(f"{total_directions} directions exceed budget")
        elems = list(field.elements())
        nonzero = elems[1:]
        # projective representatives: first non-zero coordinate equals 1
        import itertools as _it
        for lead in range(m):
            for tail in _it.product(elems, repeat=m - lead - 1):
                coeffs = ([field.zero()] * lead + [field.one()] + list(tail))
                directions.append(coeffs)
    else:
        for i in range(m):
            directions.append([field.one() if j == i else field.zero()
                               for j in range(m)])

    exhaustive_cosets = (field.is_finite and
                         field.order ** space.dim * len(directions) <= budget)
    fast = exhaustive_cosets and is_fast_field(field)
    basis_int = int_basis(space) if fast else None

    for dir_coeffs in directions:
        counters["directions"] += 1
        flat = [field.zero()] * (space.n * space.n)
        for c, row in zip(dir_coeffs, complement):
            if bool(c):
                flat = [a + c * b for a, b in zip(flat, row)]
        A = Matrix.unflatten(field, space.n, flat)
        refuted = False
        if fast:
            p = field.p
            Ai = int_matrix(A)
            for start, digits in coeff_blocks(p, space.dim):
                U = (materialize(digits, basis_int, p) + Ai[None, :, :]) % p
                ind = _direct_nilindex_block(U, p, space.n)
                counters["cosets"] += len(ind)
                if (ind == 0).any():
                    refuted = True
                    break
        else:
            for coeffs, w in _iterate_exact(space, samples, seed):
                counters["cosets"] += 1
                try:
                    nil_profile(A + w)
                except NotNilpotent:
                    refuted = True
                    break
        if not refuted:
            return OracleVerdict(
                "maximality_probe", "fail",
                "exhaustive" if exhaustive_cosets else "sampled", counters,
                {"direction": tuple(dir_coeffs),
                 "reason": "every tested element of the enlargement is nilpotent"},
                coverage=counters["directions"] / total_directions)
    return OracleVerdict("maximality_probe", "pass",
                         "exhaustive" if exhaustive_cosets else "sampled",
                         counters,
                         coverage=counters["directions"] / total_directions)
