"""Sylvester resultants, multivariate gcd, squarefree parts.

The resultant is the workhorse behind every discriminant equation in the
package.  Outputs are normalized primitive (content divided out, leading
coefficient positive); callers treat them up to a nonzero constant, which
is all a discriminant equation is determined up to anyway.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import poly_det
from .poly import AmbientMismatch, Polynomial, mono_div, mono_divides, mono_mul


def exact_div(f: Polynomial, g: Polynomial) -> Polynomial:
    """Quotient f/g when the division is exact; raises otherwise.

    Greedy leading-term elimination; a lazy max-heap tracks the current
    leading monomial of the remainder so each step costs O(|g| log |f|).
    """
    import heapq

    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return f
    if f.vars != g.vars:
        raise AmbientMismatch("exact_div over different ambients")
    gm, gc = g.leading()
    gterms = list(g.terms.items())
    rem = dict(f.terms)
    out: dict = {}
    heap = [(-sum(m), tuple(-e for e in m)) for m in rem]
    heapq.heapify(heap)
    while heap:
        _, negm = heapq.heappop(heap)
        m = tuple(-e for e in negm)
        c = rem.get(m)
        if not c:
            continue
        if not mono_divides(gm, m):
            raise ValueError("division is not exact")
        q = mono_div(m, gm)
        qc = c / gc
        out[q] = qc
        for mg, cg in gterms:
            mm = mono_mul(q, mg)
            s = rem.get(mm)
            if s is None:
                v = -qc * cg
                if v:
                    rem[mm] = v
                    heapq.heappush(heap, (-sum(mm), tuple(-e for e in mm)))
            else:
                v = s - qc * cg
                if v:
                    rem[mm] = v
                else:
                    del rem[mm]
    if rem:
        raise ValueError("division is not exact")  # pragma: no cover
    return Polynomial._raw(f.vars, out)


def _coeffs_in(p: Polynomial, var: str) -> list[Polynomial]:
    """Coefficients of p as a polynomial in var, degree 0 upward."""
    i = p.vars.index(var)
    d = p.degree_in(var)
    out = [Polynomial.zero(p.vars) for _ in range(d + 1)]
    for m, c in p.terms.items():
        m2 = list(m)
        k = m2[i]
        m2[i] = 0
        out[k] = out[k] + Polynomial.monomial(p.vars, tuple(m2), c)
    return out


def _from_coeffs(coeffs: list[Polynomial], var: str, amb: tuple[str, ...]) -> Polynomial:
    i = amb.index(var)
    out = Polynomial.zero(amb)
    for k, c in enumerate(coeffs):
        if c.is_zero():
            continue
        shift = {}
        for m, v in c.terms.items():
            m2 = list(m)
            m2[i] += k
            shift[tuple(m2)] = v
        out = out + Polynomial(amb, shift)
    return out


def sylvester_matrix(p: Polynomial, q: Polynomial, var: str) -> list[list[Polynomial]]:
    if p.vars != q.vars:
        raise AmbientMismatch("resultant over different ambients")
    m = p.degree_in(var)
    n = q.degree_in(var)
    if m < 1 or n < 1:
        raise ValueError(f"both inputs must have positive degree in {var!r}")
    pc = _coeffs_in(p, var)[::-1]  # leading first
    qc = _coeffs_in(q, var)[::-1]
    size = m + n
    zero = Polynomial.zero(p.vars)
    rows = []
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (size - i - len(pc)))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (size - i - len(qc)))
    return rows


def sylvester_resultant(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    """Resultant of p and q with respect to var, primitive-normalized.

    The result does not involve var; it vanishes exactly on parameter
    values where p and q share a root in var (leading coefficients
    permitting).
    """
    det = poly_det(sylvester_matrix(p, q, var))
    if det.degree_in(var) > 0:
        raise AssertionError("resultant still involves the eliminated variable")
    if det.is_zero():
        return det
    return det.primitive()


# -- gcd ---------------------------------------------------------------------

def _content_of(coeffs: list[Polynomial], amb) -> Polynomial:
    c = Polynomial.zero(amb)
    for co in coeffs:
        if not co.is_zero():
            c = poly_gcd(c, co)
            if c.is_constant():
                return Polynomial.const(amb, 1)
    return c


def _strip(cs: list[Polynomial]) -> list[Polynomial]:
    while len(cs) > 1 and cs[-1].is_zero():
        cs.pop()
    return cs


def _pseudo_rem(u: list[Polynomial], v: list[Polynomial]) -> list[Polynomial]:
    """prem(u, v) in the main variable: lc(v)^(deg u - deg v + 1) u mod v."""
    dv = len(v) - 1
    du = len(u) - 1
    lead_v = v[-1]
    r = list(u)
    steps = du - dv + 1
    while True:
        r = _strip(r)
        if len(r) - 1 < dv or all(c.is_zero() for c in r):
            break
        k = len(r) - 1 - dv
        lead_r = r[-1]
        r = [c * lead_v for c in r]
        for j in range(dv + 1):
            r[j + k] = r[j + k] - lead_r * v[j]
        r.pop()
        steps -= 1
    # pad with lc(v) powers so the result is exactly the classical prem
    for _ in range(max(0, steps)):
        r = [c * lead_v for c in r]
    return _strip(r)


def _poly_gcd_univ(f: Polynomial, g: Polynomial, var: str) -> Polynomial:
    """Primitive gcd via the Collins subresultant PRS in the main variable.

    The subresultant beta-factors keep coefficient growth polynomial with
    no per-step content extraction; contents are handled once, at entry
    and on the final candidate.
    """
    amb = f.vars
    fc = _coeffs_in(f, var)
    gc = _coeffs_in(g, var)
    if len(fc) < len(gc):
        fc, gc = gc, fc
    cont_f = _content_of(fc, amb)
    cont_g = _content_of(gc, amb)
    cont = poly_gcd(cont_f, cont_g)
    one = Polynomial.const(amb, 1)
    a = [exact_div(c, cont_f) if not c.is_zero() else c for c in fc] if not cont_f.is_constant() else list(fc)
    b = [exact_div(c, cont_g) if not c.is_zero() else c for c in gc] if not cont_g.is_constant() else list(gc)
    a, b = _strip(a), _strip(b)
    gpol = one
    h = one
    while True:
        if all(c.is_zero() for c in b):
            res = a
            break
        if len(b) - 1 == 0:
            res = [one]
            break
        delta = (len(a) - 1) - (len(b) - 1)
        rem = _pseudo_rem(a, b)
        if all(c.is_zero() for c in rem):
            res = b
            break
        divisor = gpol
        for _ in range(delta):
            divisor = divisor * h
        a = b
        if divisor.is_constant():
            d = divisor.constant_term()
            b = [c * (1 / d) for c in rem]
        else:
            b = [exact_div(c, divisor) if not c.is_zero() else c for c in rem]
        gpol = a[-1]
        if delta >= 1:
            hd = gpol
            for _ in range(delta - 1):
                hd = hd * gpol
            if delta > 1:
                den = h
                for _ in range(delta - 2):
                    den = den * h
                h = exact_div(hd, den) if not den.is_constant() else hd * (1 / den.constant_term())
            else:
                h = hd
    res_cont = _content_of(res, amb)
    if not res_cont.is_constant():
        res = [exact_div(c, res_cont) if not c.is_zero() else c for c in res]
    out = _from_coeffs(res, var, amb)
    if not cont.is_constant():
        out = out * cont
    return out.primitive()


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Primitive gcd over Q[vars] (subresultant-style recursion)."""
    if f.is_zero():
        return g.primitive() if not g.is_zero() else g
    if g.is_zero():
        return f.primitive()
    if f.vars != g.vars:
        raise AmbientMismatch("gcd over different ambients")
    if f.is_constant() or g.is_constant():
        return Polynomial.const(f.vars, 1)
    var = next(v for v in f.vars if f.degree_in(v) > 0 or g.degree_in(v) > 0)
    if f.degree_in(var) == 0 or g.degree_in(var) == 0:
        # gcd divides the var-free one, so recurse on contents only
        fc = _coeffs_in(f, var) if f.degree_in(var) else [f]
        gc = _coeffs_in(g, var) if g.degree_in(var) else [g]
        c = Polynomial.zero(f.vars)
        for co in fc + gc:
            if not co.is_zero():
                c = poly_gcd(c, co)
        return c.primitive()
    return _poly_gcd_univ(f, g, var)


def _euclid_gcd_deg(a: list[Fraction], b: list[Fraction]) -> int:
    """Degree of the gcd of two univariate polynomials (low-to-high lists)."""
    def deg(c):
        i = len(c) - 1
        while i >= 0 and not c[i]:
            i -= 1
        return i

    a, b = list(a), list(b)
    while True:
        db = deg(b)
        if db < 0:
            return deg(a)
        da = deg(a)
        if da < db:
            a, b = b, a
            continue
        lead = a[da] / b[db]
        for i in range(db + 1):
            a[i + da - db] -= lead * b[i]


def _squarefree_certified_by_specialization(p: Polynomial) -> bool:
    """Sound fast test: p has no repeated factor.

    A repeated factor q^2 with positive degree in x_i survives every
    specialization of the other variables that preserves deg_{x_i}(p)
    (degrees are subadditive, and d/dx_i commutes with the substitution),
    so finding one degree-preserving point per variable with univariate
    gcd(p, dp/dx_i) = 1 certifies squarefreeness.
    """
    points = [
        [Fraction(c) for c in (2, 3, 5, 7, 11, 13, 17, 19)],
        [Fraction(c) for c in (3, 5, 2, 11, 7, 19, 13, 17)],
        [Fraction(c) for c in (5, 2, 7, 3, 13, 11, 19, 23)],
        [Fraction(c) for c in (7, 11, 3, 5, 2, 17, 23, 13)],
    ]
    for vi, v in enumerate(p.vars):
        dv = p.degree_in(v)
        if dv == 0:
            continue
        certified = False
        for pt in points:
            coeffs = [Fraction(0)] * (dv + 1)
            ok = True
            for mono, c in p.terms.items():
                t = c
                for j, e in enumerate(mono):
                    if j == vi or not e:
                        continue
                    t *= pt[j % len(pt)] ** e
                coeffs[mono[vi]] += t
            if not coeffs[dv]:
                continue  # degree dropped: unusable point
            deriv = [coeffs[k] * k for k in range(1, dv + 1)]
            if _euclid_gcd_deg(coeffs, deriv) == 0:
                certified = True
                break
        if not certified:
            return False
    return True


def squarefree_part(p: Polynomial) -> Polynomial:
    """Generator of the radical of <p>, up to a nonzero constant.

    Iterates p -> p / gcd(p, all partials) to a fixed point; over Q one
    pass already removes all repeated factors.  Squarefree inputs are
    recognized first by per-variable specialization, which skips the
    multivariate gcd entirely in the common reduced case.
    """
    if p.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    p = p.primitive()
    while True:
        if _squarefree_certified_by_specialization(p):
            return p
        g = Polynomial.zero(p.vars)
        for v in p.vars:
            d = p.diff(v)
            if not d.is_zero():
                g = poly_gcd(g, d)
        g = poly_gcd(g, p)
        if g.is_zero() or g.is_constant():
            return p
        nxt = exact_div(p, g).primitive()
        if nxt == p:
            return p
        p = nxt
