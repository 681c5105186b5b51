"""Abelianization via integer Smith normal form.

Everything here is exact, arbitrary-precision integer arithmetic; the
matrices are tiny (relators x generators), so the SNF uses plain
gcd-driven elimination and carries unimodular row/column witnesses that
are verified by multiplication.

This module is the independent consistency oracle for the rest of the
package: H1 of p/q surgery on a knot in the 3-sphere is Z/p whenever
the peripheral data is a true meridian / preferred-longitude pair, so a
mismatch flags bad peripheral data rather than a homology bug.
"""

from __future__ import annotations

from dataclasses import dataclass

from .presentations import FilledPresentation, Presentation
from .words import Word, exponent_sum

Matrix = list[list[int]]


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return []
    rows, inner, cols = len(a), len(b), len(b[0])
    assert all(len(r) == inner for r in a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def det(mat: Matrix) -> int:
    """Exact determinant by cofactor expansion (matrices here are tiny)."""
    n = len(mat)
    if n == 0:
        return 1
    if n == 1:
        return mat[0][0]
    total = 0
    sign = 1
    for j in range(n):
        if mat[0][j]:
            minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
            total += sign * mat[0][j] * det(minor)
        sign = -sign
    return total


def relator_matrix(pres: Presentation) -> Matrix:
    """One row per relator, one column per generator, exponent sums."""
    names = pres.alphabet.names
    return [[exponent_sum(rel, n) for n in names] for rel in pres.relators]


@dataclass(frozen=True)
class SmithNormalForm:
    """Diagonal factors with unimodular witnesses: row * mat * col = diag."""

    diagonal: tuple[int, ...]
    row_ops: Matrix
    col_ops: Matrix
    rows: int
    cols: int

    def diagonal_matrix(self) -> Matrix:
        d = [[0] * self.cols for _ in range(self.rows)]
        for i, x in enumerate(self.diagonal):
            d[i][i] = x
        return d


def smith_normal_form(mat: Matrix) -> SmithNormalForm:
    """Diagonalize an integer matrix by unimodular row/column operations.

    The returned witnesses satisfy row_ops * mat * col_ops = diag exactly
    and have determinant +-1; both facts are checked before returning.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    a = [row[:] for row in mat]
    if any(len(row) != cols for row in a):
        raise ValueError("ragged matrix")
    u = identity_matrix(rows)
    v = identity_matrix(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best = abs(a[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            # clear the pivot column, then the pivot row
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(i, t)
                    dirty = True
            if any(a[i][t] for i in range(t + 1, rows)):
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(j, t)
                    dirty = True
            if any(a[t][j] for j in range(t + 1, cols)):
                continue
            if not dirty:
                break

        # enforce the divisibility chain: fold any non-multiple entry in
        if a[t][t] < 0:
            negate_row(t)
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % a[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        t += 1

    diagonal = tuple(a[i][i] for i in range(min(rows, cols)) if a[i][i])
    snf = SmithNormalForm(diagonal, u, v, rows, cols)
    if mat_mul(mat_mul(u, [row[:] for row in mat]), v) != snf.diagonal_matrix():
        raise AssertionError("SNF witness product mismatch")
    if abs(det(u)) != 1 or abs(det(v)) != 1:
        raise AssertionError("SNF witnesses are not unimodular")
    return snf


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors d1 | d2 | ... (each >= 2) plus the free rank."""

    torsion: tuple[int, ...]
    free_rank: int

    @property
    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def abelian_invariants(mat: Matrix) -> AbelianInvariants:
    cols = len(mat[0]) if mat else 0
    if not mat:
        return AbelianInvariants((), cols)
    snf = smith_normal_form(mat)
    torsion = tuple(d for d in snf.diagonal if d > 1)
    return AbelianInvariants(torsion, cols - len(snf.diagonal))


def abelianization(pres: Presentation) -> AbelianInvariants:
    if len(pres.alphabet) and not pres.relators:
        return AbelianInvariants((), len(pres.alphabet))
    return abelian_invariants(relator_matrix(pres))


def class_vector(pres: Presentation, word: Word) -> list[int]:
    return [exponent_sum(word, n) for n in pres.alphabet.names]


def longitude_class(pres: Presentation, meridian: Word, longitude: Word) -> int:
    """The longitude's class in H1(complement) as a multiple of the meridian.

    Requires H1 = Z with the meridian generating it, which holds for
    every knot group this package produces.
    """
    mat = relator_matrix(pres)
    snf = smith_normal_form(mat)

    # coordinates: y = x . col_ops; column j is free iff j >= len(diagonal)
    def transform(x: list[int]) -> list[int]:
        return [sum(x[i] * snf.col_ops[i][j] for i in range(len(x))) for j in range(len(x))]

    ndiag = len(snf.diagonal)
    mu = transform(class_vector(pres, meridian))
    lam = transform(class_vector(pres, longitude))
    for j in range(ndiag):
        if snf.diagonal[j] != 1:
            raise ValueError("H1(complement) has torsion; class ratio undefined")
    free = list(range(ndiag, len(mu)))
    if len(free) != 1:
        raise ValueError(f"H1(complement) has rank {len(free)}, expected Z")
    j = free[0]
    if abs(mu[j]) != 1:
        raise ValueError("meridian does not generate H1(complement)")
    return lam[j] * mu[j]


@dataclass(frozen=True)
class H1Report:
    """H1 of a filled presentation against the surgery-formula oracle.

    ``expected_order`` is |p| (None meaning infinite, for p = 0); it is
    an external fact that holds only if the peripheral data is a true
    meridian / preferred-longitude pair, so ``match = False`` diagnoses
    the peripheral data, not the Smith form.
    """

    invariants: AbelianInvariants
    computed_order: int | None
    expected_order: int | None
    match: bool
    longitude_class_multiple: int

    def to_struct(self) -> dict:
        return {
            "h1": str(self.invariants),
            "torsion": list(self.invariants.torsion),
            "free_rank": self.invariants.free_rank,
            "computed_order": self.computed_order,
            "expected_order_if_peripheral_true": self.expected_order,
            "match": self.match,
            "longitude_class_multiple_of_meridian": self.longitude_class_multiple,
        }


def h1_diagnostic(filled: FilledPresentation) -> H1Report:
    """Compare H1 of the filled group with Z/|p|, and locate the
    longitude's class in H1 of the complement."""
    invs = abelianization(filled.presentation())
    computed = invs.order
    p = filled.slope.p
    expected = abs(p) if p != 0 else None
    if expected is None:
        match = invs.free_rank == 1 and not invs.torsion
    else:
        match = computed == expected
    lclass = longitude_class(
        filled.base, filled.peripheral.meridian, filled.peripheral.longitude
    )
    return H1Report(invs, computed, expected, match, lclass)
