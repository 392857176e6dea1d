# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled twin of _kernel_py: sparse integer row operations.

Column indices live in typed array('l') buffers so merges and binary
searches run as C loops; values stay arbitrary-precision Python ints.
Semantics are identical to the pure module.
"""

from cpython cimport array
import array as _arraymod

from fractions import Fraction
from math import gcd

cdef array.array _L_TEMPLATE = _arraymod.array("l", [])


def term_mul(dict a, dict b):
    """General sparse product of two term maps (exponent tuple -> Fraction).

    Accumulates raw numerator/denominator pairs and normalizes once per
    output term, saving two gcd passes per elementary product.
    """
    cdef dict acc = {}
    cdef dict out = {}
    cdef tuple m1, m2, m, s
    cdef Py_ssize_t n, i
    cdef list buf
    for m1, c1 in a.items():
        n = len(m1)
        n1 = c1.numerator
        d1 = c1.denominator
        for m2, c2 in b.items():
            buf = [0] * n
            for i in range(n):
                buf[i] = (<object> m1[i]) + (<object> m2[i])
            m = tuple(buf)
            pn = n1 * c2.numerator
            pd = d1 * c2.denominator
            s = <tuple> acc.get(m)
            if s is None:
                acc[m] = (pn, pd)
            else:
                acc[m] = (s[0] * pd + pn * s[1], s[1] * pd)
    for m, s in acc.items():
        if s[0]:
            out[m] = Fraction(s[0], s[1])
    return out


cdef inline array.array _as_long_array(object cols):
    if isinstance(cols, _arraymod.array):
        return <array.array> cols
    return _arraymod.array("l", cols)


def normalize_row(cols, list vals):
    cdef Py_ssize_t n = len(vals)
    cdef Py_ssize_t i
    if n == 0:
        return cols, vals
    g = 0
    for i in range(n):
        g = gcd(g, vals[i])
        if g == 1:
            break
    if vals[0] < 0:
        g = -g
    cdef list out
    if g != 1:
        out = [0] * n
        for i in range(n):
            out[i] = vals[i] // g
        return cols, out
    return cols, vals


def axpy(p, cols1, list rv, q, cols2, list bv):
    cdef array.array rc = _as_long_array(cols1)
    cdef array.array bc = _as_long_array(cols2)
    cdef long[:] a = rc
    cdef long[:] b = bc
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef Py_ssize_t nr = len(rc), nb = len(bc)
    cdef array.array out_cols = array.clone(_L_TEMPLATE, nr + nb, zero=False)
    cdef long[:] oc = out_cols
    cdef list out_vals = []
    while i < nr and j < nb:
        if a[i] < b[j]:
            oc[k] = a[i]
            out_vals.append(p * rv[i])
            i += 1
            k += 1
        elif a[i] > b[j]:
            oc[k] = b[j]
            out_vals.append(q * bv[j])
            j += 1
            k += 1
        else:
            v = p * rv[i] + q * bv[j]
            if v:
                oc[k] = a[i]
                out_vals.append(v)
                k += 1
            i += 1
            j += 1
    while i < nr:
        oc[k] = a[i]
        out_vals.append(p * rv[i])
        i += 1
        k += 1
    while j < nb:
        oc[k] = b[j]
        out_vals.append(q * bv[j])
        j += 1
        k += 1
    array.resize(out_cols, k)
    return out_cols, out_vals


def reduce_row(cols_in, vals_in, dict basis):
    cdef array.array rc = _as_long_array(cols_in)
    if rc is cols_in:
        rc = array.copy(rc)
    cdef list rv = list(vals_in)
    cdef long[:] rcv
    cdef Py_ssize_t i = 0, lo, hi, mid
    cdef long c
    while i < len(rc):
        rcv = rc
        c = rcv[i]
        hit = basis.get(c)
        if hit is None:
            i += 1
            continue
        bc, bv = <tuple> hit
        out = axpy((<list> bv)[0], rc, rv, -rv[i], bc, bv)
        rc = <array.array> out[0]
        rv = <list> out[1]
        rcv = rc
        lo = i
        hi = len(rc)
        while lo < hi:
            mid = (lo + hi) // 2
            if rcv[mid] < c:
                lo = mid + 1
            else:
                hi = mid
        i = lo
        if len(rv) > 64:
            _, rv = normalize_row(rc, rv)
    return normalize_row(rc, rv)
