"""Dense exact matrices over the rationals and spectra of small matrices.

These are the small-matrix utilities (1-jets, weight systems, witness
grids); the big sparse jet systems go through kernel.py directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .kernel import LinearSolve
from .poly import Polynomial


class RationalMatrix:
    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        self.entries = [[Fraction(e) for e in row] for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls([[Fraction(0)] * cols for _ in range(rows)])

    def __eq__(self, other):
        return isinstance(other, RationalMatrix) and self.entries == other.entries

    def __repr__(self):
        return f"RationalMatrix({[[str(e) for e in row] for row in self.entries]})"

    def __mul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            return RationalMatrix(
                [
                    [sum((self.entries[i][k] * other.entries[k][j] for k in range(self.cols)), Fraction(0))
                     for j in range(other.cols)]
                    for i in range(self.rows)
                ]
            )
        return RationalMatrix([[e * Fraction(other) for e in row] for row in self.entries])

    def apply(self, vec: list[Fraction]) -> list[Fraction]:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((self.entries[i][j] * vec[j] for j in range(self.cols)), Fraction(0)) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def rank(self) -> int:
        sv = LinearSolve(self.cols)
        for row in self.entries:
            sv.add_equation({j: e for j, e in enumerate(row) if e}, Fraction(0))
        return sv.ech.rank

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        # fraction-free Bareiss on a copy
        n = self.rows
        den = 1
        for row in self.entries:
            for e in row:
                den = den * e.denominator // math.gcd(den, e.denominator)
        m = [[int(e * den) for e in row] for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((r for r in range(k + 1, n) if m[r][k]), None)
                if swap is None:
                    return Fraction(0)
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return Fraction(sign * m[n - 1][n - 1], den**n)

    def inverse(self) -> "RationalMatrix | None":
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        cols_out = []
        for j in range(n):
            sv = LinearSolve(n)
            for i in range(n):
                sv.add_equation({k: self.entries[i][k] for k in range(n) if self.entries[i][k]},
                                Fraction(int(i == j)))
            if not sv.consistent or len(sv.free_columns()) > 0:
                return None
            sol = sv.solution()
            cols_out.append([sol.get(i, Fraction(0)) for i in range(n)])
        return RationalMatrix([[cols_out[j][i] for j in range(n)] for i in range(n)])

    def char_poly(self) -> Polynomial:
        """det(t*I - M) as an exact polynomial in t."""
        if self.rows != self.cols:
            raise ValueError("characteristic polynomial of a non-square matrix")
        n = self.rows
        t = Polynomial.var(("t",), "t")
        entries = [
            [t - self.entries[i][j] if i == j else Polynomial.const(("t",), -self.entries[i][j])
             for j in range(n)]
            for i in range(n)
        ]
        return poly_det(entries)


def poly_det(entries: list[list[Polynomial]]) -> Polynomial:
    """Determinant of a square matrix of polynomials.

    Laplace expansion along rows with memoisation on the active column
    set; fine for the Sylvester/charpoly sizes this package meets.
    """
    n = len(entries)
    if n == 0:
        raise ValueError("empty matrix")
    amb = entries[0][0].vars
    memo: dict[int, Polynomial] = {}

    def minor(row: int, colmask: int) -> Polynomial:
        if row == n:
            return Polynomial.const(amb, 1)
        key = colmask
        got = memo.get(key)
        if got is not None:
            return got
        total = Polynomial.zero(amb)
        sign = 1
        for j in range(n):
            if not (colmask >> j) & 1:
                continue
            e = entries[row][j]
            if not e.is_zero():
                sub = minor(row + 1, colmask & ~(1 << j))
                term = e * sub
                total = total + (term if sign > 0 else -term)
            sign = -sign
        memo[key] = total
        return total

    return minor(0, (1 << n) - 1)


@dataclass
class SpectrumReport:
    """Rational eigenvalue data of an exact square matrix."""

    char_poly: Polynomial
    roots: list[tuple[Fraction, int]]  # (eigenvalue, multiplicity), sorted
    residual: Polynomial  # factor with no rational roots (constant when all_rational)
    all_rational: bool
    all_nonzero: bool
    all_positive: bool | None  # asserted only when all_rational

    def multiset(self) -> list[Fraction]:
        out: list[Fraction] = []
        for r, k in self.roots:
            out.extend([r] * k)
        return out


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _univ_coeffs(p: Polynomial) -> list[int]:
    """Integer coefficients (low to high) of a primitive univariate polynomial."""
    prim = p.primitive()
    deg = int(prim.degree())
    out = [0] * (deg + 1)
    for m, c in prim.terms.items():
        out[m[0]] = int(c)
    return out


def char_poly_spectrum(mat: RationalMatrix) -> SpectrumReport:
    """Characteristic polynomial plus its rational roots with multiplicity.

    Roots found by the rational root bound on the primitive integer form;
    whatever does not split over Q is returned as the residual factor.
    all_nonzero is equivalent to a nonzero constant term of the char poly.
    """
    if mat.rows != mat.cols:
        raise ValueError("spectrum of a non-square matrix")
    cp = mat.char_poly()
    coeffs = _univ_coeffs(cp)
    roots: list[tuple[Fraction, int]] = []
    # strip zero roots
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k:
        roots.append((Fraction(0), k))
        coeffs = coeffs[k:]
    # deflate rational roots
    def eval_at(cs: list[int], r: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(cs):
            acc = acc * r + c
        return acc

    def deflate(cs: list[int], r: Fraction) -> list[int]:
        # synthetic division by (x - r); exact since r is a root; rescale to integers
        out = [Fraction(0)] * (len(cs) - 1)
        acc = Fraction(0)
        for i in range(len(cs) - 1, 0, -1):
            acc = acc * r + cs[i]
            out[i - 1] = acc
        den = 1
        for c in out:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return [int(c * den) for c in out]

    changed = True
    while len(coeffs) > 1 and changed:
        changed = False
        cands: list[Fraction] = []
        for pnum in _divisors(coeffs[0]):
            for qden in _divisors(coeffs[-1]):
                cands.extend((Fraction(pnum, qden), Fraction(-pnum, qden)))
        for r in sorted(set(cands)):
            while len(coeffs) > 1 and eval_at(coeffs, r) == 0:
                mult = 0
                while len(coeffs) > 1 and eval_at(coeffs, r) == 0:
                    coeffs = deflate(coeffs, r)
                    mult += 1
                roots.append((r, mult))
                changed = True
    residual_terms = {(i,): Fraction(c) for i, c in enumerate(coeffs)}
    residual = Polynomial(("t",), residual_terms)
    roots.sort(key=lambda rk: rk[0])
    all_rational = residual.degree() <= 0
    const = cp.coeff((0,))
    all_nonzero = const != 0
    all_positive = all(r > 0 for r, _ in roots) if all_rational else None
    return SpectrumReport(
        char_poly=cp,
        roots=roots,
        residual=residual,
        all_rational=all_rational,
        all_nonzero=all_nonzero,
        all_positive=all_positive,
    )


@dataclass
class SolveResult:
    solution: list[Fraction] | None
    nullspace: list[list[Fraction]]
    certificate: list[Fraction] | None  # left-kernel row with r.A = 0, r.b != 0

    @property
    def consistent(self) -> bool:
        return self.solution is not None


def linear_solve_exact(a: RationalMatrix, b: list[Fraction]) -> SolveResult:
    """Solve A x = b exactly.

    Returns one particular solution (free variables 0) and a basis of the
    homogeneous solutions, or an inconsistency certificate: a rational row
    r with r.A = 0 and r.b != 0.
    """
    if len(b) != a.rows:
        raise ValueError("dimension mismatch between matrix and right-hand side")
    sv = LinearSolve(a.cols)
    for i, row in enumerate(a.entries):
        sv.add_equation({j: e for j, e in enumerate(row) if e}, Fraction(b[i]))
    if sv.consistent:
        sol = sv.solution()
        vec = [sol.get(j, Fraction(0)) for j in range(a.cols)]
        null = [[ns.get(j, Fraction(0)) for j in range(a.cols)] for ns in sv.nullspace()]
        return SolveResult(vec, null, None)
    # find a certificate in the left kernel
    at = a.transpose()
    lk = LinearSolve(a.rows)
    for i, row in enumerate(at.entries):
        lk.add_equation({j: e for j, e in enumerate(row) if e}, Fraction(0))
    for ns in lk.nullspace():
        r = [ns.get(i, Fraction(0)) for i in range(a.rows)]
        if sum((ri * bi for ri, bi in zip(r, b)), Fraction(0)) != 0:
            return SolveResult(None, [], r)
    raise AssertionError("inconsistent system without certificate")  # unreachable
