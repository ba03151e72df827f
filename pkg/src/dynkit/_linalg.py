"""Exact dense linear algebra over the rationals.

Matrices are immutable tuples of tuples of Fraction. Everything here is
plain Gaussian elimination; sizes in this package stay small (a few
hundred rows at most), so no pivoting strategy beyond "first nonzero".

Subspaces are represented by tuples of row vectors; `span` returns the
canonical reduced row echelon basis, which makes equality of subspaces a
tuple comparison.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(entries: Iterable) -> Vector:
    return tuple(frac(x) for x in entries)


def mat(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(vec(r) for r in rows)
    if out:
        width = len(out[0])
        if any(len(r) != width for r in out):
            raise ValueError("ragged matrix")
    return out


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    zero = Fraction(0)
    return tuple(tuple(zero for _ in range(m)) for _ in range(n))


def identity(n: int) -> Matrix:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a: Matrix) -> Matrix:
    c = frac(c)
    return tuple(tuple(c * x for x in row) for row in a)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return ()
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Tensor product of operators: (a ⊗ b) acting on the tensor of the
    column spaces, row index (i, k) -> i * rows(b) + k."""
    if not a or not b:
        return ()
    p = len(b)
    q = len(b[0])
    out = []
    for i in range(len(a)):
        for k in range(p):
            out.append(
                tuple(a[i][j] * b[k][l] for j in range(len(a[0])) for l in range(q))
            )
    return tuple(out)


def swap_matrix(d1: int, d2: int) -> Matrix:
    """Permutation matrix sending basis e_i ⊗ e_k of V1 ⊗ V2 to
    e_k ⊗ e_i of V2 ⊗ V1."""
    n = d1 * d2
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(d1):
        for k in range(d2):
            rows[k * d1 + i][i * d2 + k] = Fraction(1)
    return tuple(tuple(r) for r in rows)


def rref(a: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    rows = [list(r) for r in a]
    if not rows:
        return (), ()
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows), tuple(pivots)


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def nullspace(a: Matrix) -> tuple[Vector, ...]:
    """Basis of {x : a x = 0}, one vector per free column."""
    if not a:
        return ()
    ncols = len(a[0])
    red, pivots = rref(a)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return tuple(basis)


def mat_inv(a: Matrix) -> Matrix:
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("inverse requires a square matrix")
    aug = [list(r) + list(e) for r, e in zip(a, identity(n))]
    red, pivots = rref(tuple(tuple(r) for r in aug))
    if list(pivots) != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in red)


def solve(a: Matrix, b: Vector) -> Vector | None:
    """One solution of a x = b, or None if inconsistent."""
    if not a:
        return () if all(x == 0 for x in b) else None
    ncols = len(a[0])
    aug = tuple(tuple(r) + (x,) for r, x in zip(a, b))
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return tuple(x)


# -- subspaces as tuples of row vectors --------------------------------------


def span(vectors: Sequence[Vector], dim: int | None = None) -> Matrix:
    """Canonical basis (RREF, no zero rows) of the span."""
    vecs = tuple(vectors)
    if not vecs:
        return ()
    red, pivots = rref(vecs)
    return red[: len(pivots)]


def in_span(v: Vector, basis: Matrix) -> bool:
    if all(x == 0 for x in v):
        return True
    if not basis:
        return False
    return rank(basis + (v,)) == len(span(basis))


def subspace_sum(u: Matrix, w: Matrix) -> Matrix:
    return span(tuple(u) + tuple(w))


def subspace_intersect(u: Matrix, w: Matrix, dim: int) -> Matrix:
    """Intersection of two row-span subspaces of Q^dim.

    Uses double orthogonal complement under the standard dot product,
    valid over the rationals."""
    u_perp = nullspace(u) if u else identity(dim)
    w_perp = nullspace(w) if w else identity(dim)
    stacked = span(tuple(u_perp) + tuple(w_perp))
    if not stacked:
        return identity(dim)
    return span(nullspace(stacked))


def subspace_eq(u: Matrix, w: Matrix) -> bool:
    return span(u) == span(w)


def subspace_contains(u: Matrix, w: Matrix) -> bool:
    """True when every row of w lies in the span of u."""
    return all(in_span(v, span(u)) for v in w)
