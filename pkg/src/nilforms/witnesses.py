"""Explicit counterexample spaces and maximal-nilindex witnesses.

Four families, each checked against its asserted properties on construction
(CertificateFailed signals an implementation bug, never user error):

  n3                 the 3x3 pencil [[0,0,x],[0,0,y],[-y,x,0]]: cube-zero,
                     trivial common kernel, and no non-degenerate symmetric
                     or alternating form on F^3 makes it adapted;
  six_dim            its 6x6 block extension over the form [[0,I],[eps I,0]],
                     one unit below the critical dimension, cube-stable,
                     not classifiable;
  wa_max             a b-alternating element of a built wa space attaining
                     the generic nilindex (2 nu + 1, or n - 1 when n = 2 nu);
  ws_max             a b-symmetric element over a symplectic form attaining
                     generic nilindex n.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .bilinear import ALTERNATING, SYMMETRIC, BilinearForm
from .checks import theorem_check
from .endo import AdaptedEndo, B_ALTERNATING, B_SYMMETRIC, nil_profile
from .errors import BadParameters, CertificateFailed
from .fields import Field, RationalField
from .flags import Flag
from .linalg import Matrix, Subspace, kernel_basis, rank
from .spaces import A_B, S_B, OperatorSpace, build_canonical_space


@dataclass(frozen=True)
class WitnessResult:
    space: OperatorSpace | None
    endo: AdaptedEndo | None
    form: BilinearForm | None
    flag: Flag | None
    certificate: dict


def _require(cond, message):
    if not cond:
        raise CertificateFailed(message)


def _pencil_matrix(field, x, y):
    z = field.zero()
    return Matrix(field, [[z, z, x], [z, z, y], [-y, x, z]])


def _cube_zero_everywhere(field: Field, certificate: dict):
    """All pencil members have cube zero; exhaustive over finite fields.

    Over q the cube's entries are forms of degree <= 3 in (x, y), so
    vanishing on a 4x4 integer grid makes them identically zero.
    """
    if field.is_finite:
        pts = list(field.elements())
    else:
        pts = [field.of(i) for i in (-1, 0, 1, 2)]
    count = 0
    for x, y in itertools.product(pts, repeat=2):
        M = _pencil_matrix(field, x, y)
        _require((M @ M @ M).is_zero(), f"pencil cube non-zero at {(x, y)}")
        count += 1
    certificate["cube_zero_points"] = count
    certificate["cube_zero"] = True


def _sym_basis3(field):
    out = []
    for i in range(3):
        for j in range(i, 3):
            M = [[field.zero()] * 3 for _ in range(3)]
            M[i][j] = field.one()
            M[j][i] = field.one()
            out.append(Matrix(field, M))
    return out


def _alt_basis3(field):
    out = []
    for i in range(3):
        for j in range(i + 1, 3):
            M = [[field.zero()] * 3 for _ in range(3)]
            M[i][j] = field.one()
            M[j][i] = -field.one()
            out.append(Matrix(field, M))
    return out


def _no_adapted_form_search(field: Field, certificate: dict):
    """Solve the adaptedness system in the Gram unknowns; every solution
    must be degenerate, for all four (form kind, adaptation) combinations."""
    n10 = _pencil_matrix(field, field.one(), field.zero())
    n01 = _pencil_matrix(field, field.zero(), field.one())
    results = {}
    for kind, gram_basis in ((SYMMETRIC, _sym_basis3(field)),
                             (ALTERNATING, _alt_basis3(field))):
        for adaptation in (S_B, A_B):
            rows = []
            for N in (n10, n01):
                prods = [E @ N for E in gram_basis]
                for i in range(3):
                    js = range(i + 1, 3) if adaptation == S_B else range(i, 3)
                    for j in js:
                        if adaptation == S_B:
                            row = [P.entries[i][j] - P.entries[j][i] for P in prods]
                        else:
                            row = [P.entries[i][j] + P.entries[j][i] for P in prods]
                        rows.append(row)
            sol = kernel_basis(Matrix.from_rows(field, rows, cols=len(gram_basis)))
            dim = len(sol)

            def gram_of(coeffs):
                G = Matrix.zero(field, 3, 3)
                for c, E in zip(coeffs, gram_basis):
                    if bool(c):
                        G = G + E.scale(c)
                return G

            if field.is_finite:
                combos = itertools.product(field.elements(), repeat=dim)
            else:
                pts = [field.of(i) for i in (-1, 0, 1, 2)]  # det has degree 3
                combos = itertools.product(pts, repeat=dim)
            all_degenerate = True
            for coeffs in combos:
                sol_coeffs = [field.zero()] * len(gram_basis)
                for c, vec in zip(coeffs, sol):
                    if bool(c):
                        sol_coeffs = [a + c * b for a, b in zip(sol_coeffs, vec)]
                G = gram_of(sol_coeffs)
                if rank(G) == 3:
                    all_degenerate = False
                    break
            _require(all_degenerate,
                     f"found a non-degenerate adapted Gram for {kind}/{adaptation}")
            results[f"{kind}/{adaptation}"] = {"solution_dim": dim,
                                               "all_degenerate": True}
    certificate["no_adapted_form"] = results


def n3_counterexample(field: Field) -> WitnessResult:
    """The 2-dimensional cube-zero pencil with no common kernel vector."""
    if field.char == 2:
        raise BadParameters("the pencil needs characteristic != 2")
    n10 = _pencil_matrix(field, field.one(), field.zero())
    n01 = _pencil_matrix(field, field.zero(), field.one())
    space = OperatorSpace.from_matrices([n10, n01], field=field, n=3)
    cert: dict = {"dim": space.dim}
    _require(space.dim == 2, "pencil span must have dimension 2")
    _cube_zero_everywhere(field, cert)
    ck = space.common_kernel()
    cert["common_kernel_dim"] = ck.dim
    _require(ck.dim == 0, "pencil must have trivial common kernel")
    _no_adapted_form_search(field, cert)
    return WitnessResult(space=space, endo=None, form=None, flag=None,
                         certificate=cert)


def six_dim_counterexample(field: Field, epsilon: int, kind: str,
                           budget: int = 500_000) -> WitnessResult:
    """Block extension of the pencil, one unit under the critical dimension.

    epsilon in {1, -1} fixes the form [[0, I], [eps I, 0]] (symmetric for
    +1, symplectic for -1); kind 'sym' pairs the pencil with symmetric
    blocks M into an S_b space of dimension nu(n-nu) - 1 = 8, kind 'alt'
    with alternating blocks into an A_b space of dimension
    nu(n-nu-1) - 1 = 5.
    """
    if epsilon not in (1, -1):
        raise BadParameters("epsilon must be +1 or -1")
    if kind not in ("sym", "alt"):
        raise BadParameters("kind must be 'sym' or 'alt'")
    if field.char == 2:
        raise BadParameters("needs characteristic != 2")
    eps = field.of(epsilon)
    I3 = Matrix.identity(field, 3)
    Z3 = Matrix.zero(field, 3, 3)
    from .linalg import block_matrix
    gram = block_matrix(field, [[Z3, I3], [I3.scale(eps), Z3]])
    form = BilinearForm(gram, SYMMETRIC if epsilon == 1 else ALTERNATING)
    eps_prime = eps if kind == "sym" else -eps
    adaptation = S_B if kind == "sym" else A_B

    mats = []
    for x, y in ((field.one(), field.zero()), (field.zero(), field.one())):
        N = _pencil_matrix(field, x, y)
        mats.append(block_matrix(field, [[N, Z3],
                                         [Z3, N.transpose().scale(eps_prime)]]))
    m_basis = _sym_basis3(field) if kind == "sym" else _alt_basis3(field)
    for M in m_basis:
        mats.append(block_matrix(field, [[Z3, M], [Z3, Z3]]))
    space = OperatorSpace.from_matrices(mats, field=field, n=6,
                                        form=form, adaptation=adaptation)

    nu = form.witt_index()
    n = 6
    expected = (nu * (n - nu) - 1) if kind == "sym" else (nu * (n - nu - 1) - 1)
    cert: dict = {"dim": space.dim, "expected_dim": expected, "witt_index": nu}
    _require(nu == 3, "the 6x6 form must have Witt index 3")
    _require(space.dim == expected, "wrong counterexample dimension")
    for B in space.basis_matrices():
        _require(B.power(6).is_zero(), "basis element is not nilpotent")
    verdict = theorem_check(space, "cubes", budget=budget, samples=256)
    cert["cube_stable"] = verdict.status
    _require(verdict.status in ("pass", "hypothesis_unmet"),
             "cube stability failed on the counterexample")
    ck = space.common_kernel()
    cert["common_kernel_dim"] = ck.dim
    _require(ck.dim == 0, "counterexample must have trivial common kernel")
    return WitnessResult(space=space, endo=None, form=form, flag=None,
                         certificate=cert)


# ---------------------------------------------------------------------------
# maximal-nilindex witnesses inside built spaces
# ---------------------------------------------------------------------------

def _jordan_block(field, nu):
    J = [[field.zero()] * nu for _ in range(nu)]
    for i in range(nu - 1):
        J[i][i + 1] = field.one()
    return Matrix(field, J)


def anisotropic_diagonal(field: Field, count: int) -> list:
    """Diagonal entries of an anisotropic symmetric form of the given size.

    Over the rationals any sum of squares works.  Over characteristic p the
    prime subfield supplies diag(a) for count 1 and diag(1, a) with -a a
    non-square for count 2; no anisotropic part of dimension >= 3 exists
    over a finite field.
    """
    if count == 0:
        return []
    if field.char == 0:
        return [field.one()] * count
    if count == 1:
        return [field.one()]
    if count == 2:
        p = field.char
        squares = {(x * x) % p for x in range(1, p)}
        for a in range(1, p):
            if (-a) % p not in squares:
                return [field.one(), field.of(a)]
        raise BadParameters(f"no anisotropic plane over characteristic {p}")
    raise BadParameters(
        "anisotropic parts of dimension >= 3 need characteristic 0")


def _standard_symmetric_setup(field, n, nu):
    """Gram [[0,0,I],[0,P,0],[I,0,0]] in coordinates (f.., g.., h..),
    with P an anisotropic diagonal block of size n - 2 nu."""
    rows = [[field.zero()] * n for _ in range(n)]
    for i in range(nu):
        rows[i][n - nu + i] = field.one()
        rows[n - nu + i][i] = field.one()
    for k, a in enumerate(anisotropic_diagonal(field, n - 2 * nu)):
        rows[nu + k][nu + k] = a
    return BilinearForm(Matrix(field, rows), SYMMETRIC)


def wa_max_witness(field: Field, n: int, nu: int) -> WitnessResult:
    """Element of the wa space over the standard symmetric form attaining the
    generic nilindex: 2 nu + 1 when n > 2 nu, n - 1 when n = 2 nu."""
    if field.char == 2:
        raise BadParameters("needs characteristic != 2")
    if not (0 < 2 * nu <= n):
        raise BadParameters("wa_max needs 0 < 2 nu <= n")
    form = _standard_symmetric_setup(field, n, nu)
    flag = Flag.standard(field, n, nu)
    space = build_canonical_space("wa", flag, form)
    J = _jordan_block(field, nu)
    p = n - 2 * nu
    from .linalg import block_matrix
    if p == 0:
        K = [[field.zero()] * nu for _ in range(nu)]
        if nu >= 2:
            K[nu - 1][nu - 2] = field.one()
            K[nu - 2][nu - 1] = -field.one()
        M = block_matrix(field, [[J, Matrix(field, K)],
                                 [Matrix.zero(field, nu, nu), -J.transpose()]])
        expected = n - 1
    else:
        C = [[field.zero()] * nu for _ in range(p)]
        C[p - 1][nu - 1] = field.one()
        Cm = Matrix(field, C)
        diag = anisotropic_diagonal(field, p)
        Pm = Matrix.from_function(field, p, p,
                                  lambda i, j: diag[i] if i == j else field.zero())
        PC = Pm @ Cm
        M = block_matrix(field, [
            [J, -PC.transpose(), Matrix.zero(field, nu, nu)],
            [Matrix.zero(field, p, nu), Matrix.zero(field, p, p), Cm],
            [Matrix.zero(field, nu, nu), Matrix.zero(field, nu, p), -J.transpose()],
        ])
        expected = 2 * nu + 1
    endo = AdaptedEndo(M, form, B_ALTERNATING)
    prof = nil_profile(M)
    cert = {"nilindex": prof.nilindex, "expected_nilindex": expected,
            "partition": prof.partition, "in_space": space.contains(M),
            "space_dim": space.dim}
    _require(prof.nilindex == expected, "witness misses the generic nilindex")
    _require(space.contains(M), "witness escapes the built space")
    # the witness attains the structural cap, so it certifies exact equality
    # of the space's generic nilindex with the cap
    cert["generic_nilindex"] = expected
    return WitnessResult(space=space, endo=endo, form=form, flag=flag,
                         certificate=cert)


def ws_max_witness(field: Field, n: int) -> WitnessResult:
    """Element of the ws space over the standard symplectic form with
    nilindex n."""
    if field.char == 2:
        raise BadParameters("needs characteristic != 2")
    if n <= 0 or n % 2:
        raise BadParameters("ws_max needs positive even n")
    nu = n // 2
    rows = [[field.zero()] * n for _ in range(n)]
    for i in range(nu):
        rows[i][nu + i] = field.one()
        rows[nu + i][i] = -field.one()
    form = BilinearForm(Matrix(field, rows), ALTERNATING)
    flag = Flag.standard(field, n, nu)
    space = build_canonical_space("ws", flag, form)
    J = _jordan_block(field, nu)
    D = [[field.zero()] * nu for _ in range(nu)]
    D[nu - 1][nu - 1] = field.one()
    from .linalg import block_matrix
    M = block_matrix(field, [[J, Matrix(field, D)],
                             [Matrix.zero(field, nu, nu), -J.transpose()]])
    endo = AdaptedEndo(M, form, B_SYMMETRIC)
    prof = nil_profile(M)
    cert = {"nilindex": prof.nilindex, "expected_nilindex": n,
            "partition": prof.partition, "in_space": space.contains(M),
            "space_dim": space.dim, "generic_nilindex": n}
    _require(prof.nilindex == n, "witness misses the generic nilindex")
    _require(space.contains(M), "witness escapes the built space")
    return WitnessResult(space=space, endo=endo, form=form, flag=flag,
                         certificate=cert)


def build_witness(which: str, field: Field, n: int | None = None,
                  nu: int | None = None, epsilon: int = 1,
                  kind: str = "sym") -> WitnessResult:
    """Dispatcher used by the command line."""
    which = which.lower()
    if which == "n3":
        return n3_counterexample(field)
    if which == "six_dim":
        return six_dim_counterexample(field, epsilon, kind)
    if which == "wa_max":
        if n is None or nu is None:
            raise BadParameters("wa_max needs n and nu")
        return wa_max_witness(field, n, nu)
    if which == "ws_max":
        if n is None:
            raise BadParameters("ws_max needs n")
        return ws_max_witness(field, n)
    raise BadParameters(f"unknown witness {which!r}")
