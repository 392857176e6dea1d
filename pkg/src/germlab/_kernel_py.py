"""Pure-Python sparse integer row operations.

Rows are pairs (cols, vals): strictly increasing column indices in an
array('l') and nonzero arbitrary-precision integer values in a list.  A
row stands for the rational vector it spans; scaling is irrelevant to
every caller, so rows are kept primitive (gcd 1, leading value positive).
The compiled twin in _kernel_c.pyx implements the same three functions
with identical semantics; kernel.py picks one at import time.
"""

from array import array
from fractions import Fraction
from math import gcd


def term_mul(a, b):
    """General sparse product of two term maps (exponent tuple -> Fraction).

    Accumulates raw numerator/denominator pairs and normalizes once per
    output term, saving two gcd passes per elementary product.
    """
    acc = {}
    for m1, c1 in a.items():
        n1, d1 = c1.numerator, c1.denominator
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            pn = n1 * c2.numerator
            pd = d1 * c2.denominator
            s = acc.get(m)
            if s is None:
                acc[m] = (pn, pd)
            else:
                sn, sd = s
                acc[m] = (sn * pd + pn * sd, sd * pd)
    out = {}
    for m, (sn, sd) in acc.items():
        if sn:
            out[m] = Fraction(sn, sd)
    return out


def normalize_row(cols, vals):
    if not vals:
        return cols, vals
    g = 0
    for v in vals:
        g = gcd(g, v)
        if g == 1:
            break
    if vals[0] < 0:
        g = -g
    if g != 1:
        vals = [v // g for v in vals]
    return cols, vals


def axpy(p, rc, rv, q, bc, bv):
    """Merged combination p*r + q*b of two sparse rows; drops zeros."""
    cols = array("l")
    vals = []
    i = j = 0
    nr, nb = len(rc), len(bc)
    while i < nr and j < nb:
        a, b = rc[i], bc[j]
        if a < b:
            cols.append(a)
            vals.append(p * rv[i])
            i += 1
        elif a > b:
            cols.append(b)
            vals.append(q * bv[j])
            j += 1
        else:
            v = p * rv[i] + q * bv[j]
            if v:
                cols.append(a)
                vals.append(v)
            i += 1
            j += 1
    while i < nr:
        cols.append(rc[i])
        vals.append(p * rv[i])
        i += 1
    while j < nb:
        cols.append(bc[j])
        vals.append(q * bv[j])
        j += 1
    return cols, vals


def reduce_row(rc, rv, basis):
    """Eliminate every basis pivot occurring in the row.

    basis maps a pivot column to its row; each basis row's lowest column
    is its pivot, so eliminating column c only introduces columns > c and
    one left-to-right sweep suffices.  Result is gcd-normalized.
    """
    rc = array("l", rc)
    rv = list(rv)
    i = 0
    while i < len(rc):
        c = rc[i]
        hit = basis.get(c)
        if hit is None:
            i += 1
            continue
        bc, bv = hit
        rc, rv = axpy(bv[0], rc, rv, -rv[i], bc, bv)
        # the eliminated column is gone; entries at columns < c are untouched
        lo, hi = i, len(rc)
        while lo < hi:
            mid = (lo + hi) // 2
            if rc[mid] < c:
                lo = mid + 1
            else:
                hi = mid
        i = lo
        if len(rv) > 64:
            rc, rv = normalize_row(rc, rv)
    return normalize_row(rc, rv)
