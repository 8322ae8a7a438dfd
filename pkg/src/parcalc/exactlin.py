"""Exact linear algebra over Q on coordinate spaces.

Rationals are ``fractions.Fraction`` throughout; nothing here ever touches a
float. Subspaces are kept in reduced row-echelon form so that equal subspaces
compare (and hash) equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import StructuralError

Vector = tuple[Fraction, ...]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise StructuralError(f"floats are not accepted as exact values: {x!r}")
    try:
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise StructuralError(f"not a rational: {x!r}") from exc


def rational_from_json(x) -> Fraction:
    """Wire-format rational: a string like "p/q" or a plain integer, never a JSON float."""
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise StructuralError(f"rationals are encoded as strings, got {x!r}")
    return as_fraction(x)


def _rows(matrix: Iterable[Sequence], ncols: int | None) -> tuple[list[list[Fraction]], int]:
    rows = [[as_fraction(x) for x in row] for row in matrix]
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise StructuralError(f"ragged matrix, row lengths {sorted(widths)}")
    if widths:
        width = widths.pop()
        if ncols is not None and ncols != width:
            raise StructuralError(f"expected {ncols} columns, got {width}")
        return rows, width
    if ncols is None:
        raise StructuralError("empty matrix needs an explicit column count")
    return rows, ncols


def _reduce(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Gauss-Jordan elimination in place; returns nonzero rows and pivot columns."""
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        if lead != 1:
            rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim stored by its RREF basis.

    Build through :func:`span` (or :func:`rref`) rather than directly; the
    constructor trusts that ``basis`` is already canonical.
    """

    ambient_dim: int
    basis: tuple[Vector, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __repr__(self) -> str:
        rows = ", ".join("(" + ", ".join(str(x) for x in row) + ")" for row in self.basis)
        return f"Subspace({self.ambient_dim}, [{rows}])"


def rref(matrix: Iterable[Sequence], ncols: int | None = None) -> tuple[int, Subspace]:
    """Row-reduce ``matrix``; return its rank and row space in canonical form.

    >>> rref([[1, 2], [2, 4]])
    (1, Subspace(2, [(1, 2)]))
    """
    rows, width = _rows(matrix, ncols)
    reduced, _ = _reduce(rows, width)
    basis = tuple(tuple(row) for row in reduced)
    return len(basis), Subspace(width, basis)


def span(vectors: Iterable[Sequence], ambient_dim: int | None = None) -> Subspace:
    return rref(vectors, ambient_dim)[1]


def zero(n: int) -> Subspace:
    return Subspace(n, ())


def full(n: int) -> Subspace:
    return Subspace(n, tuple(_unit(n, i) for i in range(n)))


def _unit(n: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(n))


def _check_same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise StructuralError(f"ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")


def rank(matrix: Iterable[Sequence], ncols: int | None = None) -> int:
    return rref(matrix, ncols)[0]


def nullspace(matrix: Iterable[Sequence], ncols: int | None = None) -> Subspace:
    """Right kernel {x : M x = 0} as a subspace of Q^ncols."""
    rows, width = _rows(matrix, ncols)
    reduced, pivots = _reduce(rows, width)
    free = [c for c in range(width) if c not in set(pivots)]
    vecs = []
    for f in free:
        v = [Fraction(0)] * width
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        vecs.append(v)
    return span(vecs, width)


def complement(a: Subspace) -> Subspace:
    """Annihilator of ``a`` under the standard dot product."""
    if not a.basis:
        return full(a.ambient_dim)
    return nullspace(a.basis, a.ambient_dim)


def add(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    return span(a.basis + b.basis, a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    ca, cb = complement(a), complement(b)
    if not ca.basis and not cb.basis:
        return full(a.ambient_dim)
    return nullspace(ca.basis + cb.basis, a.ambient_dim)


def contains(a: Subspace, v: Sequence) -> bool:
    v = [as_fraction(x) for x in v]
    if len(v) != a.ambient_dim:
        raise StructuralError("vector length does not match ambient dimension")
    return rank(a.basis + (tuple(v),), a.ambient_dim) == a.dim


def is_subspace(a: Subspace, b: Subspace) -> bool:
    """True iff a is contained in b."""
    _check_same_ambient(a, b)
    return add(a, b).dim == b.dim


def inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(matrix)
    rows, width = _rows(matrix, n if n else 0)
    if width != n:
        raise StructuralError("inverse of a non-square matrix")
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    reduced, pivots = _reduce(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        raise StructuralError("matrix is singular")
    return [row[n:] for row in reduced]


def quotient_complement(kernel: Subspace) -> list[int]:
    """Indices of unit vectors completing ``kernel`` to a basis, chosen greedily in order."""
    n = kernel.ambient_dim
    chosen: list[int] = []
    current = list(kernel.basis)
    for i in range(n):
        if len(current) == n:
            break
        e = _unit(n, i)
        if rank(current + [e], n) > len(current):
            current.append(e)
            chosen.append(i)
    return chosen


def quotient_map(kernel: Subspace) -> list[list[Fraction]]:
    """Matrix sending ambient coordinates to coordinates on ambient/kernel.

    The quotient is identified with the span of the unit vectors from
    :func:`quotient_complement`; row q of the result reads off the coefficient
    of the q-th such unit vector.
    """
    n = kernel.ambient_dim
    units = quotient_complement(kernel)
    basis = [list(row) for row in kernel.basis] + [list(_unit(n, i)) for i in units]
    if not basis:
        return []
    inv = inverse(basis)
    k = kernel.dim
    # v = c . basis  =>  c = v . inv ; coordinate q is column k+q of inv.
    return [[inv[r][k + q] for r in range(n)] for q in range(len(units))]


def apply_map(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector:
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m)


def project_to_quotient(s: Subspace, kernel: Subspace) -> Subspace:
    """Image of ``s`` in ambient/kernel, in the coordinate model of :func:`quotient_map`."""
    _check_same_ambient(s, kernel)
    m = quotient_map(kernel)
    qdim = len(m)
    return span([apply_map(m, v) for v in s.basis], qdim)
