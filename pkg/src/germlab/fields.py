"""Liftable and lowerable vector fields of polynomial map-germs.

Lift(F) is computed as Derlog of a reduced discriminant equation
(legitimate for stable germs and for A-finite ones away from the excluded
dimension pairs), so everything here runs through resultant elimination
plus degree-bounded syzygy solving.  YES-type facts (a field is liftable,
a pair is F-related) are certified exactly; absence results are qualified
by the degree at which they were established.
"""

from __future__ import annotations

from dataclasses import dataclass

from .germs import MapGerm, Unfolding
from .jets import (
    DEFAULT_DEGREE,
    ModuleSpan,
    MultiplierRing,
    PolySystem,
    minimize_generators,
    normalize_vector,
    syzygy_solve,
)
from .linalg import RationalMatrix, SpectrumReport, char_poly_spectrum
from .poly import Polynomial, formal_inverse_jet, parse_polynomial
from .resultant import squarefree_part, sylvester_resultant
from .verdicts import UnsupportedShape


@dataclass
class VectorField:
    ambient_vars: tuple[str, ...]
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        self.ambient_vars = tuple(self.ambient_vars)
        self.components = tuple(self.components)
        if len(self.components) != len(self.ambient_vars):
            raise ValueError("a vector field has one component per ambient variable")
        for c in self.components:
            if c.vars != self.ambient_vars:
                raise ValueError("component over wrong ambient")

    @classmethod
    def from_strings(cls, vars, components) -> "VectorField":
        vars = tuple(vars)
        return cls(vars, tuple(parse_polynomial(c, vars) for c in components))

    def vanishes_at_zero(self) -> bool:
        return all(not c.constant_term() for c in self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def apply_to(self, h: Polynomial) -> Polynomial:
        """Derivation action: sum eta_j dh/dX_j."""
        out = Polynomial.zero(self.ambient_vars)
        for v, comp in zip(self.ambient_vars, self.components):
            out = out + comp * h.diff(v)
        return out

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def one_jet(vf: VectorField) -> RationalMatrix:
    """Matrix of the linear part; defined for fields vanishing at 0."""
    if not vf.vanishes_at_zero():
        raise ValueError("1-jet matrix needs a field vanishing at the origin")
    s = len(vf.ambient_vars)
    rows = []
    for comp in vf.components:
        row = []
        for j in range(s):
            unit = tuple(1 if k == j else 0 for k in range(s))
            row.append(comp.coeff(unit))
        rows.append(row)
    return RationalMatrix(rows)


def spectrum(vf: VectorField) -> SpectrumReport:
    return char_poly_spectrum(one_jet(vf))


@dataclass
class DiscriminantEq:
    H: Polynomial  # over the target variables
    reduced: bool
    smooth: bool = False
    note: str = ""


def _presentation(f: MapGerm):
    """Split components into plain-variable ones and the essential rest.

    Returns (matched: dict comp_index -> source var, rest: list of comp
    indices, essential: list of unmatched source vars).
    """
    matched: dict[int, str] = {}
    used: set[str] = set()
    for j, comp in enumerate(f.components):
        for v in f.source_vars:
            if v not in used and comp == Polynomial.var(f.source_vars, v):
                matched[j] = v
                used.add(v)
                break
    rest = [j for j in range(f.p) if j not in matched]
    essential = [v for v in f.source_vars if v not in used]
    return matched, rest, essential


def discriminant_equation(f: MapGerm) -> DiscriminantEq:
    """Reduced equation of the discriminant (n >= p) or image (n = p-1).

    Supported shapes: submersions (empty discriminant), the monogenic
    equidimensional presentation (x, g(x, y)) up to permutation, and
    one-essential-variable parametrizations with p = n + 1, which covers
    plane curves and their unfoldings.  Everything else refuses.
    """
    if f.jacobian_at_zero().rank() == f.p:
        return DiscriminantEq(
            Polynomial.const(f.target_vars, 1), reduced=True, smooth=True,
            note="smooth: every target field is liftable",
        )
    matched, rest, essential = _presentation(f)
    if len(essential) != 1 or len(rest) not in (1, 2):
        raise UnsupportedShape(
            "discriminant method unavailable: need a monogenic presentation "
            "(one essential source variable) with n = p or n = p - 1"
        )
    y = essential[0]
    amb = f.target_vars + (y,)
    rename = {matched[j]: f.target_vars[j] for j in matched}

    def to_amb(p: Polynomial) -> Polynomial:
        return p.rename(rename, amb)

    if len(rest) == 1:
        if f.n != f.p:
            raise UnsupportedShape("monogenic discriminant needs an equidimensional germ")
        j0 = rest[0]
        g = to_amb(f.components[j0])
        gy = g.diff(y)
        a = g - Polynomial.var(amb, f.target_vars[j0])
        if a.degree_in(y) < 1:
            raise UnsupportedShape("essential component does not involve the essential variable")
        if gy.degree_in(y) >= 1:
            res = sylvester_resultant(a, gy, y)
        elif gy.is_zero():
            raise UnsupportedShape("derivative vanishes identically: non-isolated fold locus")
        else:
            res = (gy ** a.degree_in(y)).primitive()
    else:
        if f.n != f.p - 1:
            raise UnsupportedShape("parametrized case needs p = n + 1")
        j1, j2 = rest
        a = to_amb(f.components[j1]) - Polynomial.var(amb, f.target_vars[j1])
        b = to_amb(f.components[j2]) - Polynomial.var(amb, f.target_vars[j2])
        if a.degree_in(y) < 1 or b.degree_in(y) < 1:
            raise UnsupportedShape("both essential components must involve the essential variable")
        res = sylvester_resultant(a, b, y)
    if res.degree_in(y) != 0:
        raise AssertionError("elimination left the essential variable behind")
    drop = {v: Polynomial.var(f.target_vars, v) for v in f.target_vars}
    drop[y] = Polynomial.zero(f.target_vars)
    h = res.compose(drop)
    h = squarefree_part(h)
    return DiscriminantEq(h, reduced=True)


def lift_module(
    f: MapGerm,
    degree: int = DEFAULT_DEGREE,
    *,
    assume_hypotheses: bool = True,
    disc: DiscriminantEq | None = None,
) -> ModuleSpan:
    """Generators of Lift(f) = Derlog(discriminant) through the given degree.

    Every generator is an exact member (it satisfies eta(H) = a H as a
    polynomial identity); completeness of the list is only guaranteed for
    combinations with multipliers of degree <= `degree`.  Callers assert
    the Lift = Derlog hypotheses (stability, or A-finiteness outside
    n > p <= 2); the structurally excluded zone refuses outright.
    """
    if not assume_hypotheses and f.n > f.p and f.p <= 2:
        raise UnsupportedShape(
            "Lift = Derlog is not available for n > p <= 2 unless the germ is stable"
        )
    d = disc or discriminant_equation(f)
    amb = f.target_vars
    zero = Polynomial.zero(amb)
    one = Polynomial.const(amb, 1)
    if d.smooth:
        gens = []
        for j in range(f.p):
            vec = [zero] * f.p
            vec[j] = one
            gens.append(tuple(vec))
        return ModuleSpan(amb, f.p, gens, MultiplierRing.FULL, trunc_degree=None)
    h = d.H
    partials = [h.diff(v) for v in amb]
    max_partial = max((int(p.degree()) for p in partials if not p.is_zero()), default=0)
    a_degree = max(0, degree + max_partial - int(h.degree()))
    span = syzygy_solve(partials + [-h], [degree] * f.p + [a_degree], degree, drop_last=1)
    return span


@dataclass
class LiftPair:
    eta: VectorField
    xi: VectorField
    exact: bool
    degree: int | None = None  # jet validity when not exact

    def residual(self, f: MapGerm) -> tuple[Polynomial, ...]:
        """eta o f - df(xi), exactly."""
        lhs = f.wf(self.eta.components)
        rhs = f.tf(self.xi.components)
        return tuple(a - b for a, b in zip(lhs, rhs))


@dataclass
class NotLiftableAt:
    level: int


def _lower_fast_path(f: MapGerm, eta: VectorField) -> "LiftPair | None":
    """Exact lowering by substitution and one division.

    Components of f that are plain source variables force the matching xi
    components outright; with a single essential variable left, its xi
    component comes from an exact division.  Any failure falls back to
    the general linear solve.
    """
    from .resultant import exact_div

    matched, rest, essential = _presentation(f)
    if len(essential) > 1:
        return None
    known: dict[str, Polynomial] = {}
    for j, v in matched.items():
        known[v] = f.pullback(eta.components[j])
    jac = f.jacobian()
    if essential:
        y = essential[0]
        solved = None
        for j in rest:
            dy = jac[j][f.source_vars.index(y)]
            if dy.is_zero():
                continue
            r = f.pullback(eta.components[j])
            for i, v in enumerate(f.source_vars):
                if v == y or v not in known:
                    continue
                r = r - jac[j][i] * known[v]
            try:
                solved = exact_div(r, dy)
            except (ValueError, ZeroDivisionError):
                return None
            break
        if solved is None:
            return None
        known[y] = solved
    if set(known) != set(f.source_vars):
        return None
    xi = VectorField(f.source_vars, tuple(known[v] for v in f.source_vars))
    pair = LiftPair(eta, xi, exact=True)
    if all(r.is_zero() for r in pair.residual(f)):
        return pair
    return None


def lower_partner(f: MapGerm, eta: VectorField, degree: int = DEFAULT_DEGREE):
    """Solve df(xi) = eta o f for a source field xi.

    The unknown runs through degree `degree` + max component degree of f;
    an exact polynomial solution is preferred, otherwise the jet system
    decides between a truncated pair and a certified failure level.
    """
    if eta.ambient_vars != f.target_vars:
        raise ValueError("eta must live over the target variables")
    fast = _lower_fast_path(f, eta)
    if fast is not None:
        return fast
    maxdeg = max((int(c.degree()) for c in f.components if not c.is_zero()), default=1)
    xi_degree = degree + maxdeg
    rhs = f.wf(eta.components)
    jac = f.jacobian()

    def build(jet: int | None):
        sys = PolySystem()
        uids = [sys.unknown(f.source_vars, xi_degree) for _ in range(f.n)]
        for j in range(f.p):
            sys.add_identity(
                [(jac[j][i], uids[i]) for i in range(f.n)],
                rhs[j],
                jet=jet,
                block=j,
            )
        return sys, uids

    sys, uids = build(None)
    solver = sys.solve()
    if solver.consistent:
        sol = solver.solution()
        xi = VectorField(f.source_vars, tuple(sys.assignment(sol, u) for u in uids))
        pair = LiftPair(eta, xi, exact=True)
        assert all(r.is_zero() for r in pair.residual(f))
        return pair
    sys, uids = build(xi_degree)
    solver = sys.solve()
    if not solver.consistent:
        return NotLiftableAt(solver.inconsistent_marker)
    sol = solver.solution()
    xi = VectorField(f.source_vars, tuple(sys.assignment(sol, u) for u in uids))
    pair = LiftPair(eta, xi, exact=False, degree=xi_degree)
    if all(r.is_zero() for r in pair.residual(f)):
        pair.exact = True
    return pair


def projectable_filter(lift: ModuleSpan, m: int, degree: int = DEFAULT_DEGREE) -> ModuleSpan:
    """Generators of the projectable part of a lift module.

    A combination sum a_i g_i is projectable when every monomial of its
    last m components is divisible by one of the parameter variables; the
    condition is imposed exactly on multipliers of degree <= `degree`.
    """
    amb = tuple(lift.ambient_vars)
    p = lift.ambient_rank - m
    if m < 0 or p < 0:
        raise ValueError("bad parameter count")
    if m == 0:
        return lift  # no parameter block: everything is vacuously projectable

    def lam_free(mono) -> bool:
        return all(mono[len(amb) - m + s] == 0 for s in range(m))

    sys = PolySystem()
    uids = [sys.unknown(amb, degree) for _ in lift.generators]
    for c in range(p, p + m):
        sys.add_identity(
            [(g[c], uid) for g, uid in zip(lift.generators, uids) if not g[c].is_zero()],
            None,
            monomial_filter=lam_free,
            block=c,
        )
    solver = sys.solve()
    gens = []
    for vec in solver.nullspace():
        mults = [sys.assignment(vec, u) for u in uids]
        combo = [Polynomial.zero(amb) for _ in range(lift.ambient_rank)]
        for a, g in zip(mults, lift.generators):
            if a.is_zero():
                continue
            for c in range(lift.ambient_rank):
                combo[c] = combo[c] + a * g[c]
        if any(not c.is_zero() for c in combo):
            gens.append(tuple(combo))
    gens = minimize_generators(gens, amb, lift.ambient_rank, degree)
    gens = [normalize_vector(g) for g in gens]
    return ModuleSpan(amb, lift.ambient_rank, gens, MultiplierRing.FULL, trunc_degree=degree)


def restrict_lift_to_base(unf: Unfolding, projectable: ModuleSpan) -> ModuleSpan:
    """Lift(f) generators from the projectable lift module of an unfolding.

    Sets the target parameters to zero and keeps the first p components;
    with the projectable module this realizes pi_1(i*(Lift(F) cap M)).
    """
    total = unf.total
    m = unf.m
    if m == 0:
        return projectable
    base_tgt = unf.base.target_vars
    subst = {v: Polynomial.var(base_tgt, v) for v in base_tgt}
    for _, lam in unf.param_pairs:
        subst[lam] = Polynomial.zero(base_tgt)
    gens = []
    for g in projectable.generators:
        vec = tuple(g[j].compose(subst) for j in range(unf.base.p))
        if any(not c.is_zero() for c in vec):
            gens.append(vec)
    n = projectable.trunc_degree or DEFAULT_DEGREE
    gens = minimize_generators(gens, base_tgt, unf.base.p, n)
    gens = [normalize_vector(g) for g in gens]
    return ModuleSpan(base_tgt, unf.base.p, gens, MultiplierRing.FULL, trunc_degree=n)


def analytic_stratum_dim(lift: ModuleSpan) -> int:
    """Dimension of the span of generator values at the origin."""
    rows = [[comp.constant_term() for comp in g] for g in lift.generators]
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    return RationalMatrix(rows).rank()


def transport(eta: VectorField, psi: tuple[Polynomial, ...], degree: int = DEFAULT_DEGREE) -> VectorField:
    """Push a field through a diffeomorphism germ: d(psi) o eta o psi^{-1}.

    When psi has an exact polynomial inverse the result is exact;
    otherwise it is the jet through the given degree.
    """
    amb = eta.ambient_vars
    if len(psi) != len(amb):
        raise ValueError("diffeomorphism has wrong number of components")
    inv = formal_inverse_jet(psi, degree)
    id_check = [
        psi[i].compose(dict(zip(amb, inv))) - Polynomial.var(amb, amb[i])
        for i in range(len(amb))
    ]
    exact_inverse = all(e.is_zero() for e in id_check)
    trunc = None if exact_inverse else degree
    inv_subst = dict(zip(amb, inv))
    comps = []
    for i in range(len(amb)):
        total = Polynomial.zero(amb)
        for j, v in enumerate(amb):
            dij = psi[i].diff(v)
            if dij.is_zero() or eta.components[j].is_zero():
                continue
            term = dij.compose(inv_subst, trunc=trunc) * eta.components[j].compose(inv_subst, trunc=trunc)
            total = total + term
        comps.append(total if trunc is None else total.truncate(degree))
    return VectorField(amb, tuple(comps))
