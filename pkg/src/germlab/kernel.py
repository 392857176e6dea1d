"""Exact sparse linear algebra over the rationals.

Rows enter as integer vectors (callers clear denominators; scaling does not
change a row space) and the echelon basis stays primitive-integer
throughout.  Row-level operations come from a compiled Cython kernel when
available, with a pure-Python twin as fallback; both produce identical
output, and the reduced row echelon form extracted at the end is the
canonical one, so every result in the package is independent of which
kernel ran.  Set GERMLAB_PURE=1 to force the pure kernel.
"""

from __future__ import annotations

import os
from fractions import Fraction

if os.environ.get("GERMLAB_PURE"):
    from . import _kernel_py as _impl

    KERNEL = "python"
else:
    try:
        from . import _kernel_c as _impl  # type: ignore[attr-defined]

        KERNEL = "cython"
    except ImportError:
        from . import _kernel_py as _impl

        KERNEL = "python"

normalize_row = _impl.normalize_row
axpy = _impl.axpy
reduce_row = _impl.reduce_row
term_mul = _impl.term_mul

Row = tuple["array", list[int]]


def row_from_fractions(entries: dict[int, Fraction]) -> Row:
    """Clear denominators of a sparse rational row."""
    from array import array

    den = 1
    for v in entries.values():
        d = v.denominator
        g = _gcd(den, d)
        den = den // g * d
    cols = sorted(entries)
    vals = [int(entries[c] * den) for c in cols]
    return normalize_row(array("l", cols), vals)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


class Echelon:
    """Incremental row echelon basis; pivots are each row's lowest column."""

    def __init__(self) -> None:
        self.rows: dict[int, Row] = {}

    def insert(self, cols: list[int], vals: list[int]) -> int | None:
        """Reduce a row against the basis and adopt the remainder.

        Returns the new pivot column, or None if the row was dependent.
        """
        cols, vals = reduce_row(cols, vals, self.rows)
        if not cols:
            return None
        self.rows[cols[0]] = (cols, vals)
        return cols[0]

    def reduce(self, cols: list[int], vals: list[int]) -> Row:
        return reduce_row(cols, vals, self.rows)

    def contains(self, cols: list[int], vals: list[int]) -> bool:
        c, _ = self.reduce(cols, vals)
        return not c

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def rref(self) -> dict[int, Row]:
        """Back-eliminate to the canonical reduced form (idempotent).

        A row's tail can only touch pivots larger than its own, so
        reducing each row (popped out first) against the rest suffices.
        """
        for p in sorted(self.rows, reverse=True):
            cols, vals = self.rows.pop(p)
            self.rows[p] = reduce_row(cols, vals, self.rows)
        return self.rows

    def rational_rows(self) -> dict[int, dict[int, Fraction]]:
        """RREF rows as rational vectors with pivot entry 1."""
        out = {}
        for p, (cols, vals) in self.rref().items():
            pv = vals[0]
            out[p] = {c: Fraction(v, pv) for c, v in zip(cols, vals)}
        return out


class LinearSolve:
    """Exact solver for A x = b systems assembled row by row.

    Equations are rows over columns 0..n-1 plus a right-hand-side column
    RHS (one past the largest unknown).  Solutions and nullspace vectors
    are canonical: they come from the unique RREF, free variables set to 0
    resp. to unit vectors.
    """

    def __init__(self, ncols: int) -> None:
        self.ncols = ncols
        self.rhs_col = ncols
        self.ech = Echelon()
        self.inconsistent_marker: int | None = None

    def add_equation(self, coeffs: dict[int, Fraction], rhs: Fraction, tag: int | None = None) -> bool:
        """Insert one equation; returns False when it contradicts the system.

        `tag` is remembered on first contradiction (used to report at which
        jet level a degree-ordered system failed).
        """
        entries = dict(coeffs)
        if rhs:
            entries[self.rhs_col] = -rhs
        if not entries:
            return True
        cols, vals = row_from_fractions(entries)
        piv = self.ech.insert(cols, vals)
        if piv == self.rhs_col:
            if self.inconsistent_marker is None:
                self.inconsistent_marker = tag if tag is not None else -1
            return False
        return True

    @property
    def consistent(self) -> bool:
        return self.inconsistent_marker is None

    def solution(self) -> dict[int, Fraction] | None:
        """Particular solution with all free variables 0."""
        if not self.consistent:
            return None
        out: dict[int, Fraction] = {}
        for p, row in self.ech.rational_rows().items():
            if p == self.rhs_col:
                continue
            out[p] = -row.get(self.rhs_col, Fraction(0))
        return out

    def nullspace(self) -> list[dict[int, Fraction]]:
        """Basis of the homogeneous solution space, one vector per free column."""
        rows = self.ech.rational_rows()
        pivots = set(rows)
        basis = []
        for free in range(self.ncols):
            if free in pivots:
                continue
            vec = {free: Fraction(1)}
            for p, row in rows.items():
                if p == self.rhs_col:
                    continue
                c = row.get(free)
                if c:
                    vec[p] = -c
            basis.append(vec)
        return basis

    def free_columns(self) -> list[int]:
        pivots = set(self.ech.rows)
        return [c for c in range(self.ncols) if c not in pivots]
