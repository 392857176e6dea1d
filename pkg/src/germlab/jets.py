"""Degree-truncated computations in local rings and free modules over them.

Everything here reduces finitely generated submodule questions to exact
sparse linear algebra on jet spaces.  A ModuleSpan denotes the set of
admissible-multiplier combinations of its generators; what is computable
is its image in each jet space J^N = O^r / m^{N+1} O^r, and Nakayama-style
certificates turn jet facts into honest statements about the module.

Jet coordinates are pairs (component, monomial), ordered by total degree,
then component index, then exponent tuple.  Quotient cobases are the
non-pivot coordinates of the reduced span, which matches how minimal
generator sets are usually written down in practice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .kernel import Echelon, LinearSolve, row_from_fractions
from .poly import Exponent, Polynomial, mono_key

DEFAULT_DEGREE = 12


def monomials_upto(nvars: int, n: int) -> list[Exponent]:
    out = [m for m in itertools.product(range(n + 1), repeat=nvars) if sum(m) <= n]
    out.sort(key=mono_key)
    return out


def monomials_of_degree(nvars: int, n: int) -> list[Exponent]:
    out = [m for m in itertools.product(range(n + 1), repeat=nvars) if sum(m) == n]
    out.sort(key=mono_key)
    return out


def jet_coordinates(nvars: int, rank: int, n: int) -> list[tuple[int, Exponent]]:
    coords = [(c, m) for m in monomials_upto(nvars, n) for c in range(rank)]
    coords.sort(key=lambda cm: (sum(cm[1]), cm[0], cm[1]))
    return coords


class MultiplierRing:
    """Which multipliers a span admits: full O_s, pullbacks h∘f, or constants."""

    def __init__(self, kind: str, via_components: tuple[Polynomial, ...] | None = None):
        if kind not in ("full", "via_map", "constants"):
            raise ValueError(f"unknown multiplier kind {kind!r}")
        if kind == "via_map":
            if not via_components:
                raise ValueError("via_map needs the germ components it pulls back through")
            for c in via_components:
                if c.constant_term():
                    raise ValueError("via_map germ must fix the origin")
        self.kind = kind
        self.via_components = tuple(via_components) if via_components else None
        self._cache: dict[int, list[tuple[Exponent, Polynomial]]] = {}

    FULL: "MultiplierRing"
    CONSTANTS: "MultiplierRing"

    def pullback_monomials(self, n: int) -> list[tuple[Exponent, Polynomial]]:
        """(target exponent, composed-and-truncated multiplier) pairs, degree <= n."""
        assert self.kind == "via_map" and self.via_components is not None
        got = self._cache.get(n)
        if got is not None:
            return got
        comps = self.via_components
        amb = comps[0].vars
        out = []
        for beta in monomials_upto(len(comps), n):
            h = Polynomial.const(amb, 1)
            for e, c in zip(beta, comps):
                for _ in range(e):
                    h = (h * c).truncate(n)
            if not h.is_zero():
                out.append((beta, h))
        self._cache[n] = out
        return out

    def pullback_exact(self, n: int) -> list[tuple[Exponent, Polynomial]]:
        """Same monomials but composed without truncation (for exact witnesses)."""
        assert self.kind == "via_map" and self.via_components is not None
        comps = self.via_components
        amb = comps[0].vars
        out = []
        for beta in monomials_upto(len(comps), n):
            h = Polynomial.const(amb, 1)
            for e, c in zip(beta, comps):
                for _ in range(e):
                    h = h * c
            out.append((beta, h))
        return out

    def __repr__(self):
        return f"MultiplierRing({self.kind})"


MultiplierRing.FULL = MultiplierRing("full")
MultiplierRing.CONSTANTS = MultiplierRing("constants")


@dataclass
class ModuleSpan:
    """Degree-truncated presentation of a submodule of O_s^r.

    Denotes { sum a_i g_i } with a_i ranging over the multiplier ring;
    known exactly through jet degree trunc_degree (None: generators exact).
    """

    ambient_vars: tuple[str, ...]
    ambient_rank: int
    generators: list[tuple[Polynomial, ...]]
    multipliers: MultiplierRing = field(default_factory=lambda: MultiplierRing.FULL)
    trunc_degree: int | None = None

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.ambient_rank:
                raise ValueError("generator has wrong number of components")
            for comp in g:
                if comp.vars != tuple(self.ambient_vars):
                    raise ValueError("generator component over wrong ambient")


def _gen_order(g: tuple[Polynomial, ...]) -> float:
    return min((comp.order() for comp in g), default=float("inf"))


def multiplier_polys(span: ModuleSpan, n: int, gens_order: float) -> list[Polynomial]:
    """Admissible multiplier generators through the degree useful at jet level n."""
    amb = tuple(span.ambient_vars)
    if span.multipliers.kind == "constants":
        return [Polynomial.const(amb, 1)]
    if span.multipliers.kind == "full":
        top = n if gens_order == float("inf") else max(0, n - int(gens_order))
        return [Polynomial.monomial(amb, m) for m in monomials_upto(len(amb), top)]
    return [h for _, h in span.multipliers.pullback_monomials(n)]


def vector_to_row(vec: tuple[Polynomial, ...], index: dict[tuple[int, Exponent], int], n: int) -> dict[int, Fraction]:
    row: dict[int, Fraction] = {}
    for c, comp in enumerate(vec):
        for m, v in comp.terms.items():
            if sum(m) <= n:
                col = index[(c, m)]
                row[col] = row.get(col, Fraction(0)) + v
    return {k: v for k, v in row.items() if v}


@dataclass
class JetBasis:
    """Echelonized image of one or more spans in the order-N jet space."""

    degree: int
    coordinates: list[tuple[int, Exponent]]
    index: dict[tuple[int, Exponent], int]
    echelon: Echelon

    @property
    def rank(self) -> int:
        return self.echelon.rank

    def contains_vector(self, vec: tuple[Polynomial, ...]) -> bool:
        row = vector_to_row(vec, self.index, self.degree)
        if not row:
            return True
        cols, vals = row_from_fractions(row)
        return self.echelon.contains(cols, vals)

    def contains_coordinate(self, coord: tuple[int, Exponent]) -> bool:
        cols, vals = [self.index[coord]], [1]
        return self.echelon.contains(cols, vals)

    def pivot_coordinates(self) -> list[tuple[int, Exponent]]:
        return [self.coordinates[p] for p in self.echelon.pivots()]

    def non_pivot_coordinates(self) -> list[tuple[int, Exponent]]:
        piv = set(self.echelon.pivots())
        return [cm for i, cm in enumerate(self.coordinates) if i not in piv]

    def rows_as_fractions(self) -> list[dict[tuple[int, Exponent], Fraction]]:
        out = []
        for p in sorted(self.echelon.rows):
            row = self.echelon.rational_rows()[p]
            out.append({self.coordinates[c]: v for c, v in row.items()})
        return out


def _spans_list(spans) -> list[ModuleSpan]:
    return list(spans) if isinstance(spans, (list, tuple)) else [spans]


def jet_span(spans, n: int) -> JetBasis:
    """Image of the span(s) in the order-n jet space, as a reduced basis."""
    spans = _spans_list(spans)
    amb = tuple(spans[0].ambient_vars)
    rank = spans[0].ambient_rank
    for s in spans:
        if tuple(s.ambient_vars) != amb or s.ambient_rank != rank:
            raise ValueError("spans live in different ambient modules")
        # trunc_degree records how far the generator SEARCH went; the
        # generators themselves are exact polynomials, so any jet level
        # of their span is well defined.
    coords = jet_coordinates(len(amb), rank, n)
    index = {cm: i for i, cm in enumerate(coords)}
    ech = Echelon()
    for s in spans:
        for g in s.generators:
            for mult in multiplier_polys(s, n, _gen_order(g)):
                row = {}
                for c, comp in enumerate(g):
                    prod = mult * comp
                    for m, v in prod.terms.items():
                        if sum(m) <= n:
                            col = index[(c, m)]
                            row[col] = row.get(col, Fraction(0)) + v
                row = {k: v for k, v in row.items() if v}
                if row:
                    cols, vals = row_from_fractions(row)
                    ech.insert(cols, vals)
    ech.rref()
    return JetBasis(n, coords, index, ech)


@dataclass
class CodimCertificate:
    codim: int
    cobasis: list[tuple[int, Exponent]]
    certified_at: int
    computed_at: int


@dataclass
class NotFiniteUpTo:
    degree: int


class UncertifiableMultipliers(ValueError):
    """Nakayama certification impossible for this multiplier structure."""


def _pullback_finiteness_bound(ring: MultiplierRing, max_degree: int) -> int:
    """Least k with m^k inside the ideal generated by the germ components.

    This is the finiteness certificate for the pulled-back ring; it exists
    exactly when the germ has an isolated zero at the origin.
    """
    comps = ring.via_components
    assert comps is not None
    amb = comps[0].vars
    ideal = ModuleSpan(amb, 1, [(c,) for c in comps], MultiplierRing.FULL)
    for k in range(1, max_degree + 1):
        basis = jet_span(ideal, k)
        if all(basis.contains_coordinate((0, m)) for m in monomials_of_degree(len(amb), k)):
            return k
    raise UncertifiableMultipliers(
        f"pulled-back germ not finite through degree {max_degree}: cannot certify via_map Nakayama"
    )


def finite_codim_certified(spans, max_degree: int = DEFAULT_DEGREE):
    """Certified codimension of a span (or combined spans) in its free module.

    Searches for the least N such that every monomial vector of total
    degree exactly N lies in the order-N image of the module part of the
    span.  For full multipliers that is the Nakayama condition m^N subset
    span directly; for via_map multipliers the condition is additionally
    required on a window of k consecutive degrees, where k is the
    pullback finiteness bound, which makes the certificate sound over the
    pulled-back ring.  Constant-multiplier parts never enter the
    certificate condition (they are not modules), only the final
    codimension count.
    """
    spans = _spans_list(spans)
    module_spans = [s for s in spans if s.multipliers.kind != "constants"]
    if not module_spans:
        raise UncertifiableMultipliers("no module part to certify against")
    window = 0
    for s in module_spans:
        if s.multipliers.kind == "via_map":
            window = max(window, _pullback_finiteness_bound(s.multipliers, max_degree))
    amb = tuple(spans[0].ambient_vars)
    rank = spans[0].ambient_rank
    degree_monos: dict[int, list[Exponent]] = {}

    def condition_at(d: int) -> bool:
        basis = jet_span(module_spans, d)
        monos = degree_monos.setdefault(d, monomials_of_degree(len(amb), d))
        return all(basis.contains_coordinate((c, m)) for m in monos for c in range(rank))

    passed: dict[int, bool] = {}

    def cond(d: int) -> bool:
        if d not in passed:
            passed[d] = condition_at(d)
        return passed[d]

    for n in range(0, max_degree + 1):
        if not cond(n):
            continue
        if all(cond(n + j) for j in range(1, window + 1)):
            work = n + window
            basis = jet_span(spans, work)
            codim = len(basis.coordinates) - basis.rank
            return CodimCertificate(
                codim=codim,
                cobasis=basis.non_pivot_coordinates(),
                certified_at=n,
                computed_at=work,
            )
    return NotFiniteUpTo(max_degree)


# -- membership ---------------------------------------------------------------


@dataclass
class Witness:
    multipliers: list[Polynomial]  # one per generator, in span order
    exact: bool
    degree: int


@dataclass
class NotInSpanAt:
    degree: int
    remainder: tuple[Polynomial, ...]  # nonzero reduced representative mod the span


def _mult_basis(span: ModuleSpan, n: int, exact: bool) -> list[Polynomial]:
    amb = tuple(span.ambient_vars)
    if span.multipliers.kind == "constants":
        return [Polynomial.const(amb, 1)]
    if span.multipliers.kind == "full":
        return [Polynomial.monomial(amb, m) for m in monomials_upto(len(amb), n)]
    pairs = span.multipliers.pullback_exact(n) if exact else span.multipliers.pullback_monomials(n)
    return [h for _, h in pairs]


def _membership_solve(vec, spans, n, jet_level):
    """Solve sum of multiplier combinations = vec; jet_level None means exact."""
    spans = _spans_list(spans)
    amb = tuple(spans[0].ambient_vars)
    rank = spans[0].ambient_rank
    columns: list[tuple[int, int, Polynomial]] = []  # (span idx, gen idx, multiplier poly)
    for si, s in enumerate(spans):
        for gi in range(len(s.generators)):
            for mult in _mult_basis(s, n, exact=jet_level is None):
                columns.append((si, gi, mult))
    eqs: dict[tuple[int, Exponent], dict[int, Fraction]] = {}
    for col, (si, gi, mult) in enumerate(columns):
        g = spans[si].generators[gi]
        for c, comp in enumerate(g):
            prod = mult * comp
            for m, v in prod.terms.items():
                if jet_level is not None and sum(m) > jet_level:
                    continue
                row = eqs.setdefault((c, m), {})
                row[col] = row.get(col, Fraction(0)) + v
    rhs: dict[tuple[int, Exponent], Fraction] = {}
    for c, comp in enumerate(vec):
        for m, v in comp.terms.items():
            if jet_level is not None and sum(m) > jet_level:
                continue
            rhs[(c, m)] = v
            eqs.setdefault((c, m), {})
    solver = LinearSolve(len(columns))
    for key in sorted(eqs, key=lambda cm: (sum(cm[1]), cm[0], cm[1])):
        coeffs = {k: v for k, v in eqs[key].items() if v}
        solver.add_equation(coeffs, rhs.get(key, Fraction(0)), tag=sum(key[1]))
    if not solver.consistent:
        return None, columns, spans
    return solver.solution(), columns, spans


def membership_witness(vec: tuple[Polynomial, ...], spans, n: int):
    """Multipliers writing vec as a span combination, or a refutation.

    Tries for an exact polynomial identity first (so the exact flag is as
    strong as the degree bound allows); otherwise solves modulo degree > n.
    """
    spans = _spans_list(spans)
    sol, columns, _ = _membership_solve(vec, spans, n, jet_level=None)
    jet = False
    if sol is None:
        sol, columns, _ = _membership_solve(vec, spans, n, jet_level=n)
        jet = True
    if sol is None:
        basis = jet_span(spans, n)
        row = vector_to_row(vec, basis.index, n)
        if row:
            cols, vals = row_from_fractions(row)
            rc, rv = basis.echelon.reduce(cols, vals)
        else:  # pragma: no cover - vec zero is always in span
            rc, rv = [], []
        remainder: dict[int, dict[Exponent, Fraction]] = {}
        for c, v in zip(rc, rv):
            comp, mono = basis.coordinates[c]
            remainder.setdefault(comp, {})[mono] = Fraction(v)
        rem = tuple(
            Polynomial(tuple(spans[0].ambient_vars), remainder.get(c, {}))
            for c in range(spans[0].ambient_rank)
        )
        return NotInSpanAt(n, rem)
    # assemble per-generator multipliers
    amb = tuple(spans[0].ambient_vars)
    gen_flat: list[tuple[int, int]] = []
    for si, s in enumerate(spans):
        for gi in range(len(s.generators)):
            gen_flat.append((si, gi))
    mults = {key: Polynomial.zero(amb) for key in gen_flat}
    for col, x in (sol or {}).items():
        si, gi, mult = columns[col]
        mults[(si, gi)] = mults[(si, gi)] + mult * x
    ordered = [mults[key] for key in gen_flat]
    # residual check by full expansion
    residual = list(vec)
    i = 0
    for si, s in enumerate(spans):
        for gi, g in enumerate(s.generators):
            a = ordered[i]
            i += 1
            if a.is_zero():
                continue
            for c in range(len(residual)):
                residual[c] = residual[c] - a * g[c]
    exact = all(r.is_zero() for r in residual)
    if not jet:
        assert exact, "exact solve produced a nonzero residual"
    return Witness(multipliers=ordered, exact=exact, degree=n)


# -- linear systems over polynomial unknowns -----------------------------------


class PolySystem:
    """Exact linear system whose unknowns are bounded-degree polynomials.

    Unknowns are declared with an ambient and a degree cap; identities are
    linear expressions sum coeff * unknown = rhs, imposed either exactly
    (every output monomial) or through a jet level, optionally restricted
    to a monomial filter.  Equations are indexed by output monomials, so
    sparsity of the data carries through to the solver.
    """

    def __init__(self) -> None:
        self.columns: list[tuple[int, Exponent]] = []  # (unknown id, monomial)
        self.col_index: dict[tuple[int, Exponent], int] = {}
        self.unknowns: list[tuple[tuple[str, ...], int]] = []
        self.equations: dict[tuple[int, Exponent], dict[int, Fraction]] = {}
        self.rhs: dict[tuple[int, Exponent], Fraction] = {}
        self._solver: LinearSolve | None = None

    def unknown(self, vars: tuple[str, ...], max_degree: int) -> int:
        uid = len(self.unknowns)
        self.unknowns.append((tuple(vars), max_degree))
        for m in monomials_upto(len(vars), max_degree):
            self.col_index[(uid, m)] = len(self.columns)
            self.columns.append((uid, m))
        return uid

    def add_identity(
        self,
        terms: list[tuple[Polynomial, int]],
        rhs: Polynomial | None = None,
        *,
        jet: int | None = None,
        monomial_filter=None,
        block: int = 0,
    ) -> None:
        """Impose sum coeff*u = rhs on all (filtered) output monomials.

        `block` distinguishes independent vector components so their
        equations do not merge.
        """
        for coeff, uid in terms:
            uvars, udeg = self.unknowns[uid]
            for mu in monomials_upto(len(uvars), udeg):
                col = self.col_index[(uid, mu)]
                for m, v in coeff.terms.items():
                    out = tuple(a + b for a, b in zip(m, mu))
                    if jet is not None and sum(out) > jet:
                        continue
                    if monomial_filter is not None and not monomial_filter(out):
                        continue
                    key = (block, out)
                    row = self.equations.setdefault(key, {})
                    row[col] = row.get(col, Fraction(0)) + v
        if rhs is not None:
            for m, v in rhs.terms.items():
                if jet is not None and sum(m) > jet:
                    continue
                if monomial_filter is not None and not monomial_filter(m):
                    continue
                key = (block, m)
                self.rhs[key] = self.rhs.get(key, Fraction(0)) + v
                self.equations.setdefault(key, {})

    def solve(self) -> LinearSolve:
        solver = LinearSolve(len(self.columns))
        for key in sorted(self.equations, key=lambda bm: (sum(bm[1]), bm[0], bm[1])):
            coeffs = {k: v for k, v in self.equations[key].items() if v}
            solver.add_equation(coeffs, self.rhs.get(key, Fraction(0)), tag=sum(key[1]))
        self._solver = solver
        return solver

    def assignment(self, values: dict[int, Fraction], uid: int) -> Polynomial:
        uvars, udeg = self.unknowns[uid]
        terms = {}
        for m in monomials_upto(len(uvars), udeg):
            v = values.get(self.col_index[(uid, m)])
            if v:
                terms[m] = v
        return Polynomial(uvars, terms)


def normalize_vector(vec: tuple[Polynomial, ...]) -> tuple[Polynomial, ...]:
    """Scale a generator tuple to primitive integer form, leading part positive."""
    import math

    num = 0
    den = 1
    for comp in vec:
        for c in comp.terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
    if num == 0:
        return vec
    scale = Fraction(den, num)
    lead = next(comp.leading()[1] for comp in vec if not comp.is_zero())
    if lead * scale < 0:
        scale = -scale
    return tuple(comp * scale for comp in vec)


def minimize_generators(
    gens: list[tuple[Polynomial, ...]],
    ambient_vars: tuple[str, ...],
    rank: int,
    n: int,
    multipliers: MultiplierRing | None = None,
) -> list[tuple[Polynomial, ...]]:
    """Select a Nakayama-minimal generating subset.

    Seeds the running span with every maximal-ideal multiple of every
    candidate (the jet image of m*V), then keeps, in increasing vector
    order, each candidate that is independent modulo it.  The kept images
    form a basis of V / mV through jet degree n, so they generate.
    """
    multipliers = multipliers or MultiplierRing.FULL
    coords = jet_coordinates(len(ambient_vars), rank, n)
    index = {cm: i for i, cm in enumerate(coords)}
    ech = Echelon()
    for g in gens:
        span = ModuleSpan(ambient_vars, rank, [g], multipliers)
        for mult in multiplier_polys(span, n, _gen_order(g)):
            if mult.order() < 1:  # only maximal-ideal multipliers seed m*V
                continue
            r: dict[int, Fraction] = {}
            for c, comp in enumerate(g):
                prod = mult * comp
                for m, v in prod.terms.items():
                    if sum(m) <= n:
                        col = index[(c, m)]
                        r[col] = r.get(col, Fraction(0)) + v
            r = {k: v for k, v in r.items() if v}
            if r:
                c2, v2 = row_from_fractions(r)
                ech.insert(c2, v2)
    kept: list[tuple[Polynomial, ...]] = []
    order = sorted(range(len(gens)), key=lambda i: (_gen_order(gens[i]), i))
    for i in order:
        row = vector_to_row(gens[i], index, n)
        if not row:
            continue
        cols, vals = row_from_fractions(row)
        if ech.contains(cols, vals):
            continue
        kept.append(gens[i])
        ech.insert(cols, vals)
    return kept


def syzygy_solve(
    coefficients: list[Polynomial],
    unknown_degrees: list[int],
    n: int,
    *,
    drop_last: int = 0,
    minimize: bool = True,
) -> ModuleSpan:
    """Generators of { (u_1..u_k) : sum coeff_i * u_i = 0 } through degree n.

    The identity is imposed exactly (all output monomials), which is the
    right notion for Derlog-style tangency conditions on polynomial data.
    The last `drop_last` unknowns are auxiliary and removed from the
    reported generators.
    """
    if len(coefficients) != len(unknown_degrees):
        raise ValueError("one degree bound per unknown")
    amb = coefficients[0].vars
    sys = PolySystem()
    uids = [sys.unknown(amb, d) for d in unknown_degrees]
    sys.add_identity([(c, u) for c, u in zip(coefficients, uids)], None)
    solver = sys.solve()
    rank = len(coefficients) - drop_last
    gens = []
    for vecdict in solver.nullspace():
        tup = tuple(sys.assignment(vecdict, uids[i]) for i in range(rank))
        if any(not p.is_zero() for p in tup):
            gens.append(tup)
    if minimize:
        gens = minimize_generators(gens, amb, rank, n)
    gens = [normalize_vector(g) for g in gens]
    return ModuleSpan(amb, rank, gens, MultiplierRing.FULL, trunc_degree=n)
