"""Coefficient-sweep plumbing shared by profiling, checks, and the oracle.

Exhaustive sweeps over prime fields run on int64 numpy blocks: coefficient
tuples are enumerated lexicographically (first coefficient most significant,
field elements in canonical order 0..p-1), materialised as stacked matrices,
and processed with batched modular arithmetic.  Infinite fields fall back to
seeded exact-arithmetic samples.

All entries stay far below 2^63 for desk-scale primes, so the integer path
is exact.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .fields import Field, PrimeField
from .linalg import Matrix
from .linalg import _rref_int  # shared elimination core

DEFAULT_BUDGET = 2_000_000
BLOCK = 1 << 15


def is_fast_field(field: Field) -> bool:
    return isinstance(field, PrimeField)


def int_matrix(M: Matrix) -> np.ndarray:
    return np.array([[x.v for x in row] for row in M.entries], dtype=np.int64)


def int_basis(space) -> np.ndarray:
    """Stacked (dim, n, n) integer basis of an operator space over gf(p)."""
    mats = space.basis_matrices()
    if not mats:
        return np.zeros((0, space.n, space.n), dtype=np.int64)
    return np.stack([int_matrix(M) for M in mats])


def digits_block(q: int, d: int, start: int, stop: int) -> np.ndarray:
    """Coefficient tuples for global indices [start, stop), shape (m, d)."""
    idx = np.arange(start, stop, dtype=np.int64)
    if d == 0:
        return np.zeros((len(idx), 0), dtype=np.int64)
    powers = q ** np.arange(d - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


def coeff_blocks(q: int, d: int, block: int = BLOCK):
    total = q ** d
    for start in range(0, total, block):
        stop = min(start + block, total)
        yield start, digits_block(q, d, start, stop)


def materialize(digits: np.ndarray, basis: np.ndarray, p: int) -> np.ndarray:
    """Elements sum_i c_i B_i for each coefficient row, shape (m, n, n)."""
    if basis.shape[0] == 0:
        n = basis.shape[1]
        return np.zeros((digits.shape[0], n, n), dtype=np.int64)
    return np.tensordot(digits, basis, axes=(1, 0)) % p


def batched_power(U: np.ndarray, k: int, p: int) -> np.ndarray:
    m, n, _ = U.shape
    out = np.broadcast_to(np.eye(n, dtype=np.int64), (m, n, n)).copy()
    base = U % p
    while k:
        if k & 1:
            out = np.matmul(out, base) % p
        k >>= 1
        if k:
            base = np.matmul(base, base) % p
    return out


def batched_nilindex(U: np.ndarray, p: int) -> np.ndarray:
    """Per-element least k with u^k = 0; n+1 marks a non-nilpotent element."""
    m, n, _ = U.shape
    if n == 0:
        return np.zeros(m, dtype=np.int64)
    ind = np.full(m, n + 1, dtype=np.int64)
    P = U % p
    for k in range(1, n + 1):
        zero = ~P.reshape(m, -1).any(axis=1)
        ind[zero & (ind == n + 1)] = k
        if k == n or not (ind == n + 1).any():
            break
        P = np.matmul(P, U) % p
    return ind


def rank_le1_mask(P: np.ndarray, p: int) -> np.ndarray:
    """True where all 2x2 minors vanish, i.e. rank <= 1."""
    m, n, _ = P.shape
    bad = np.zeros(m, dtype=bool)
    iu = np.triu_indices(n, k=1)
    for i in range(n):
        for k in range(i + 1, n):
            outer = np.einsum("mj,ml->mjl", P[:, i, :], P[:, k, :])
            minors = (outer - np.transpose(outer, (0, 2, 1))) % p
            bad |= minors[:, iu[0], iu[1]].any(axis=1)
    return ~bad


def membership_mask(flat: np.ndarray, rref_rows: np.ndarray,
                    pivots: list[int], p: int) -> np.ndarray:
    """Row-wise membership of flat vectors in the span of an echelon basis."""
    if rref_rows.shape[0] == 0:
        return ~flat.any(axis=1)
    coords = flat[:, pivots]
    recon = np.matmul(coords, rref_rows) % p
    return ~((recon - flat) % p).any(axis=1)


def int_rref(rows, p: int):
    """RREF of integer rows mod p; returns (rows, pivots) as plain lists."""
    return _rref_int([list(r) for r in rows], p)


def map_blocks(fn, blocks, threads: int = 1):
    """Apply fn to (start, digits) pairs, preserving order; optionally threaded."""
    if threads <= 1:
        for blk in blocks:
            yield fn(blk)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(fn, blocks)


def sample_coefficients(field: Field, dim: int, count: int, seed: int):
    """Deterministic exact-path samples: unit tuples first, then seeded draws."""
    rng = random.Random(seed)
    out = []
    z, o = field.zero(), field.one()
    for i in range(dim):
        out.append(tuple(o if j == i else z for j in range(dim)))
    for _ in range(max(0, count - dim)):
        out.append(tuple(field.random(rng) for _ in range(dim)))
    return out
