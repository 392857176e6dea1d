"""Exact sparse multivariate polynomials over the rationals.

A polynomial knows its ambient variable list and stores a map from exponent
tuples to nonzero Fraction coefficients.  All arithmetic is exact; results
are always canonical (no zero terms).  Values are immutable by contract:
no operation mutates its inputs, so instances can be shared freely across
threads.

Term order: monomials are compared by (total degree, exponent tuple), both
ascending.  This is a genuine monomial order (graded, translation
invariant), used for leading terms, canonical printing and jet coordinate
enumeration everywhere else in the package.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping

from .kernel import term_mul

Exponent = tuple[int, ...]


def mono_key(m: Exponent) -> tuple[int, Exponent]:
    return (sum(m), m)


def mono_mul(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Exponent, b: Exponent) -> bool:
    """Does x^a divide x^b."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Exponent, b: Exponent) -> Exponent:
    """Exponent of x^a / x^b; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))


class AmbientMismatch(ValueError):
    """Operation mixed polynomials over different variable lists."""


class Polynomial:
    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple[str, ...], terms: Mapping[Exponent, Fraction]):
        self.vars = tuple(vars)
        clean = {}
        for m, c in terms.items():
            if c:
                clean[tuple(m)] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean

    @classmethod
    def _raw(cls, vars: tuple[str, ...], terms: dict) -> "Polynomial":
        """Internal constructor: terms already canonical (no zeros, Fractions)."""
        self = object.__new__(cls)
        self.vars = vars
        self.terms = terms
        return self

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, vars: Iterable[str]) -> "Polynomial":
        return cls(tuple(vars), {})

    @classmethod
    def const(cls, vars: Iterable[str], c) -> "Polynomial":
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): Fraction(c)})

    @classmethod
    def var(cls, vars: Iterable[str], name: str) -> "Polynomial":
        vars = tuple(vars)
        if name not in vars:
            raise AmbientMismatch(f"unknown variable {name!r} in ambient {vars}")
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, vars: Iterable[str], exps: Exponent, c=1) -> "Polynomial":
        return cls(tuple(vars), {tuple(exps): Fraction(c)})

    # -- basic queries ---------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_term(self) -> Fraction:
        z = (0,) * len(self.vars)
        return self.terms.get(z, Fraction(0))

    def degree(self) -> float:
        """Total degree; -inf for the zero polynomial."""
        if not self.terms:
            return -math.inf
        return max(sum(m) for m in self.terms)

    def order(self) -> float:
        """Minimal total degree of a term; +inf for the zero polynomial."""
        if not self.terms:
            return math.inf
        return min(sum(m) for m in self.terms)

    def leading(self) -> tuple[Exponent, Fraction]:
        """Leading (monomial, coefficient) under the graded order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=mono_key)
        return m, self.terms[m]

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]))

    def coeff(self, exps: Exponent) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def degree_in(self, name: str) -> int:
        if name not in self.vars:
            raise AmbientMismatch(f"unknown variable {name!r}")
        i = self.vars.index(name)
        return max((m[i] for m in self.terms), default=0)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.vars != other.vars:
            raise AmbientMismatch(f"ambient mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.vars, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
                continue
            s = s + c
            if s:
                out[m] = s
            else:
                del out[m]
        return Polynomial._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return Polynomial.zero(self.vars)
            return Polynomial._raw(self.vars, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        # single-term operands are exponent shifts, the common hot case
        if len(self.terms) == 1:
            ((m1, c1),) = self.terms.items()
            if c1 == 1:
                return Polynomial._raw(other.vars, {mono_mul(m1, m2): c2 for m2, c2 in other.terms.items()})
            return Polynomial._raw(other.vars, {mono_mul(m1, m2): c1 * c2 for m2, c2 in other.terms.items()})
        if len(other.terms) == 1:
            ((m2, c2),) = other.terms.items()
            if c2 == 1:
                return Polynomial._raw(self.vars, {mono_mul(m1, m2): c1 for m1, c1 in self.terms.items()})
            return Polynomial._raw(self.vars, {mono_mul(m1, m2): c1 * c2 for m1, c1 in self.terms.items()})
        return Polynomial._raw(self.vars, term_mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Polynomial.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.vars, other)
        return isinstance(other, Polynomial) and self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- calculus and substitution ----------------------------------------

    def diff(self, name: str) -> "Polynomial":
        if name not in self.vars:
            raise AmbientMismatch(f"unknown variable {name!r} in ambient {self.vars}")
        i = self.vars.index(name)
        out: dict[Exponent, Fraction] = {}
        for m, c in self.terms.items():
            if m[i]:
                m2 = list(m)
                m2[i] -= 1
                out[tuple(m2)] = c * m[i]
        return Polynomial(self.vars, out)

    def truncate(self, n: int) -> "Polynomial":
        """Keep terms of total degree <= n."""
        return Polynomial(self.vars, {m: c for m, c in self.terms.items() if sum(m) <= n})

    def compose(self, subst: Mapping[str, "Polynomial"], trunc: int | None = None) -> "Polynomial":
        """Substitute a polynomial for every ambient variable.

        All substitutes must share one ambient.  With trunc=N every
        intermediate product is cut at total degree N, which is sound when
        each substitute has order >= 1.
        """
        missing = [v for v in self.vars if v not in subst]
        if missing:
            raise AmbientMismatch(f"no substitute for variable(s) {missing}")
        imgs = [subst[v] for v in self.vars]
        amb = imgs[0].vars if imgs else ()
        for g in imgs:
            if g.vars != amb:
                raise AmbientMismatch("substitutes live over different ambients")
        if trunc is not None:
            for v, g in zip(self.vars, imgs):
                if not g.is_zero() and g.order() < 1:
                    raise ValueError(f"substitute for {v!r} has a constant term; truncation unsound")
        if not self.vars:
            amb = amb or ()
        out = Polynomial.zero(amb)
        # Cache powers of each substitute.
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.const(amb, 1)} for _ in imgs]

        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            if e not in cache:
                p = power(i, e - 1) * imgs[i]
                if trunc is not None:
                    p = p.truncate(trunc)
                cache[e] = p
            return cache[e]

        for m, c in self.terms.items():
            term = Polynomial.const(amb, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
                    if trunc is not None:
                        term = term.truncate(trunc)
            out = out + term
        return out

    def rename(self, mapping: Mapping[str, str], new_vars: Iterable[str]) -> "Polynomial":
        """Move to a new ambient, renaming variables via `mapping`."""
        new_vars = tuple(new_vars)
        pos = {v: i for i, v in enumerate(new_vars)}
        out: dict[Exponent, Fraction] = {}
        for m, c in self.terms.items():
            e = [0] * len(new_vars)
            for i, ei in enumerate(m):
                if ei:
                    tgt = mapping.get(self.vars[i], self.vars[i])
                    if tgt not in pos:
                        raise AmbientMismatch(f"variable {tgt!r} not in new ambient {new_vars}")
                    e[pos[tgt]] += ei
            k = tuple(e)
            out[k] = out.get(k, Fraction(0)) + c
        return Polynomial(new_vars, out)

    def extend(self, new_vars: Iterable[str]) -> "Polynomial":
        """Reinterpret over a larger ambient containing all current variables."""
        return self.rename({}, new_vars)

    def eval(self, point: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        vals = [Fraction(point[v]) for v in self.vars]
        for m, c in self.terms.items():
            t = c
            for ei, xv in zip(m, vals):
                if ei:
                    t *= xv**ei
            total += t
        return total

    def content(self) -> Fraction:
        """Positive rational content (gcd of coefficients); 0 for the zero polynomial."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Polynomial":
        """Divide by content and make the leading coefficient positive."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading()[1] < 0:
            c = -c
        return self * (1 / c)

    # -- text form ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for v, e in zip(self.vars, m):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            body = "*".join(factors)
            ac = abs(c)
            if not body:
                piece = str(ac)
            elif ac == 1:
                piece = body
            else:
                piece = f"{ac}*{body}"
            if not parts:
                parts.append(piece if c > 0 else f"-{piece}")
            else:
                parts.append(f"+ {piece}" if c > 0 else f"- {piece}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.vars)}, {str(self)!r})"


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\*\*|[()^*/+-])")


class PolyParseError(ValueError):
    pass


def parse_polynomial(text: str, vars: Iterable[str]) -> Polynomial:
    """Parse the package's polynomial syntax.

    Identifiers are variables, `^` (or `**`) raises to a non-negative
    integer power, `*` is optional between factors, `/` divides by a
    nonzero constant, so rationals read `a/b`.
    """
    vars = tuple(vars)
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise PolyParseError(f"unexpected character {text[pos]!r} at offset {pos}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append("<end>")
    idx = 0

    def peek() -> str:
        return tokens[idx]

    def take() -> str:
        nonlocal idx
        t = tokens[idx]
        idx += 1
        return t

    def parse_atom() -> Polynomial:
        t = take()
        if t == "(":
            e = parse_sum()
            if take() != ")":
                raise PolyParseError("expected ')'")
            return e
        if t.isdigit():
            return Polynomial.const(vars, int(t))
        if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", t):
            if t not in vars:
                raise PolyParseError(f"unknown variable {t!r} (ambient {list(vars)})")
            return Polynomial.var(vars, t)
        raise PolyParseError(f"unexpected token {t!r}")

    def parse_power() -> Polynomial:
        base = parse_atom()
        if peek() in ("^", "**"):
            take()
            t = take()
            if not t.isdigit():
                raise PolyParseError("exponent must be a non-negative integer")
            return base ** int(t)
        return base

    def parse_term() -> Polynomial:
        out = parse_power()
        while True:
            t = peek()
            if t == "*":
                take()
                out = out * parse_power()
            elif t == "/":
                take()
                d = parse_power()
                if not d.is_constant() or d.is_zero():
                    raise PolyParseError("division only by a nonzero constant")
                out = out * (1 / d.constant_term())
            elif t == "(" or t.isdigit() or re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", t):
                out = out * parse_power()
            else:
                return out

    def parse_sum() -> Polynomial:
        neg = False
        while peek() in ("+", "-"):
            if take() == "-":
                neg = not neg
        out = parse_term()
        if neg:
            out = -out
        while peek() in ("+", "-"):
            sign = 1
            while peek() in ("+", "-"):
                if take() == "-":
                    sign = -sign
            nxt = parse_term()
            out = out + (nxt if sign > 0 else -nxt)
        return out

    result = parse_sum()
    if take() != "<end>":
        raise PolyParseError(f"trailing input near token {tokens[idx - 1]!r}")
    return result


# -- formal inversion --------------------------------------------------------

def formal_inverse_jet(phi: tuple[Polynomial, ...], degree: int) -> tuple[Polynomial, ...]:
    """Inverse jet of a diffeomorphism germ, through total degree `degree`.

    `phi` is an s-tuple over s variables with phi(0)=0 and invertible linear
    part.  Returns psi with phi(psi(X)) = X modulo terms of degree > `degree`,
    computed by Newton iteration on the truncated composition.
    """
    from .linalg import RationalMatrix

    if not phi:
        return phi
    amb = phi[0].vars
    s = len(phi)
    if len(amb) != s:
        raise ValueError("need as many components as variables")
    for p in phi:
        if p.constant_term():
            raise ValueError("not a diffeomorphism germ: does not fix the origin")
    jac = [[p.coeff(tuple(1 if k == j else 0 for k in range(s))) for j in range(s)] for p in phi]
    inv = RationalMatrix(jac).inverse()
    if inv is None:
        raise ValueError("not a diffeomorphism germ: singular 1-jet")

    idvec = [Polynomial.var(amb, v) for v in amb]
    psi = [sum((inv.entries[i][j] * idvec[j] for j in range(s)), Polynomial.zero(amb)) for i in range(s)]
    for _ in range(degree):
        err = [phi[i].compose(dict(zip(amb, psi)), trunc=degree) - idvec[i] for i in range(s)]
        if all(e.is_zero() for e in err):
            break
        psi = [
            (psi[i] - sum((inv.entries[i][j] * err[j] for j in range(s)), Polynomial.zero(amb))).truncate(degree)
            for i in range(s)
        ]
    return tuple(psi)
