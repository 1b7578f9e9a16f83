"""Flags: strictly increasing chains of subspaces with dim F_i = i."""
from __future__ import annotations

from .errors import DimensionMismatch
from .fields import Field
from .linalg import Matrix, Subspace, unit_vec


class Flag:
    """Chain F_1 < F_2 < ... < F_p with dim F_i = i (F_0 = {0} implicit).

    A flag of length n in an n-dimensional ambient space is complete.
    """

    __slots__ = ("field", "ambient_dim", "subspaces")

    def __init__(self, field: Field, ambient_dim: int, subspaces):
        subspaces = tuple(subspaces)
        for i, S in enumerate(subspaces):
            if S.field != field or S.ambient_dim != ambient_dim:
                raise DimensionMismatch("flag subspace in wrong ambient space")
            if S.dim != i + 1:
                raise DimensionMismatch(f"flag member {i + 1} has dim {S.dim}")
            if i > 0 and not S.contains_subspace(subspaces[i - 1]):
                raise DimensionMismatch("flag subspaces do not form a chain")
        self.field = field
        self.ambient_dim = ambient_dim
        self.subspaces = subspaces

    @classmethod
    def standard(cls, field: Field, ambient_dim: int, length: int) -> "Flag":
        """F_i spanned by the first i standard basis vectors."""
        vecs = [unit_vec(field, ambient_dim, i) for i in range(length)]
        return cls(field, ambient_dim,
                   [Subspace.span(field, ambient_dim, vecs[:i + 1]) for i in range(length)])

    @classmethod
    def from_vectors(cls, field: Field, ambient_dim: int, vectors) -> "Flag":
        vecs = [tuple(field.of(x) for x in v) for v in vectors]
        return cls(field, ambient_dim,
                   [Subspace.span(field, ambient_dim, vecs[:i + 1]) for i in range(len(vecs))])

    @property
    def length(self) -> int:
        return len(self.subspaces)

    @property
    def is_complete(self) -> bool:
        return self.length == self.ambient_dim

    def subspace(self, i: int) -> Subspace:
        """F_i, with F_0 the zero subspace."""
        if i == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        return self.subspaces[i - 1]

    @property
    def top(self) -> Subspace:
        return self.subspace(self.length)

    def transformed(self, T: Matrix) -> "Flag":
        """Image flag under an invertible matrix (columns act on vectors)."""
        return Flag(self.field, self.ambient_dim,
                    [Subspace.span(self.field, self.ambient_dim,
                                   [T.apply(v) for v in S.basis])
                     for S in self.subspaces])

    def __eq__(self, other):
        return (isinstance(other, Flag) and self.field == other.field
                and self.ambient_dim == other.ambient_dim
                and self.subspaces == other.subspaces)

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.subspaces))

    def __repr__(self):
        return f"Flag(length {self.length} in F^{self.ambient_dim})"
