"""Weighted homogeneity, Milnor/Tjurina numbers, Saito's criterion,
and truncated Poincare-Dulac normalization.

Weight detection is exact: the linear constraints from the monomial
supports are solved over Q and the solution cone is searched for a
strictly positive integer point by Fourier-Motzkin elimination, then
canonicalized to the positive solution of least total weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .fields import VectorField, one_jet, transport
from .germs import MapGerm
from .jets import (
    DEFAULT_DEGREE,
    ModuleSpan,
    MultiplierRing,
    NotFiniteUpTo,
    Witness,
    finite_codim_certified,
    membership_witness,
)
from .linalg import RationalMatrix, char_poly_spectrum, linear_solve_exact
from .poly import Polynomial
from .verdicts import NO, UNKNOWN, YES, UnsupportedShape, Verdict


@dataclass
class WeightSystem:
    weights: tuple[int, ...]  # one per source variable, strictly positive
    degrees: tuple[int, ...]  # one per target component, strictly positive

    def __post_init__(self):
        self.weights = tuple(int(w) for w in self.weights)
        self.degrees = tuple(int(d) for d in self.degrees)
        if any(w <= 0 for w in self.weights) or any(d <= 0 for d in self.degrees):
            raise ValueError("weights and degrees must be strictly positive")
        g = 0
        for v in self.weights + self.degrees:
            g = gcd(g, v)
        if g != 1:
            raise ValueError("weight system must be normalized (gcd 1)")

    def weighted_degree(self, mono) -> int:
        return sum(e * w for e, w in zip(mono, self.weights))


def _fourier_motzkin_positive(basis: list[list[Fraction]]) -> list[Fraction] | None:
    """A point c with (B c)_k > 0 for every row k of the basis-combination.

    basis[i] is the i-th spanning vector; the inequalities say each
    coordinate of sum c_i basis[i] is positive.  Returns None when the
    open cone is empty.
    """
    s = len(basis)
    if s == 0:
        return None
    ncoords = len(basis[0])
    # inequality rows: for each coordinate k: sum_i basis[i][k] * c_i > 0
    ineqs = [[basis[i][k] for i in range(s)] for k in range(ncoords)]
    systems = [ineqs]
    for var in range(s - 1, 0, -1):
        cur = systems[-1]
        pos = [r for r in cur if r[var] > 0]
        neg = [r for r in cur if r[var] < 0]
        zero = [r for r in cur if r[var] == 0]
        new = [r[:var] for r in zero]
        for rp in pos:
            for rn in neg:
                comb = [rp[j] * (-rn[var]) + rn[j] * rp[var] for j in range(var)]
                new.append(comb)
        systems.append(new)
    # feasibility of the 1-variable system
    point: list[Fraction] = []
    for var in range(0, s):
        cur = systems[s - 1 - var]
        lo, hi = None, None
        feasible_without = True
        for r in cur:
            val = sum((r[j] * point[j] for j in range(var)), Fraction(0))
            c = r[var]
            if c > 0:
                bound = -val / c
                lo = bound if lo is None else max(lo, bound)
            elif c < 0:
                bound = -val / c
                hi = bound if hi is None else min(hi, bound)
            else:
                if val <= 0:
                    feasible_without = False
        if not feasible_without:
            return None
        if lo is not None and hi is not None:
            if lo >= hi:
                return None
            point.append((lo + hi) / 2)
        elif lo is not None:
            point.append(lo + 1)
        elif hi is not None:
            point.append(hi - 1)
        else:
            point.append(Fraction(1))
    return point


def wh_detect(f: MapGerm) -> WeightSystem | None:
    """Positive integer weights/degrees making every component weighted
    homogeneous, or None.

    The constraint system ties each support monomial's weighted degree to
    its component degree; among all positive integer solutions the one
    minimizing total weight plus total degree (then lexicographically
    least weight vector) is returned.
    """
    n, p = f.n, f.p
    nullsolver_cols = n + p
    from .kernel import LinearSolve

    solver = LinearSolve(nullsolver_cols)
    for j, comp in enumerate(f.components):
        for mono in comp.terms:
            coeffs = {i: Fraction(e) for i, e in enumerate(mono) if e}
            coeffs[n + j] = Fraction(-1)
            solver.add_equation(coeffs, Fraction(0))
    basis_vecs = [
        [ns.get(i, Fraction(0)) for i in range(nullsolver_cols)] for ns in solver.nullspace()
    ]
    # components with empty support leave their degree slot free; require > 0 anyway
    point = _fourier_motzkin_positive(basis_vecs)
    if point is None:
        return None
    vec = [sum((point[i] * basis_vecs[i][k] for i in range(len(basis_vecs))), Fraction(0))
           for k in range(nullsolver_cols)]
    den = 1
    for v in vec:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    baseline = sum(ints)

    # canonical minimal-sum choice: enumerate weight vectors by total sum
    def degrees_for(w: tuple[int, ...]) -> tuple[int, ...] | None:
        ds = []
        for comp in f.components:
            if comp.is_zero():
                ds.append(1)
                continue
            vals = {sum(e * wi for e, wi in zip(m, w)) for m in comp.terms}
            if len(vals) != 1:
                return None
            d = vals.pop()
            if d <= 0:
                return None
            ds.append(d)
        return tuple(ds)

    best: tuple[int, tuple[int, ...], tuple[int, ...]] | None = None
    max_wsum = baseline - p
    for wsum in range(n, max_wsum + 1):
        if best is not None and wsum >= best[0]:
            break
        for w in _compositions(wsum, n):
            ds = degrees_for(w)
            if ds is None:
                continue
            total = wsum + sum(ds)
            key = (total, w, ds)
            if best is None or key < best:
                best = key
    if best is None:
        # the rational cone was nonempty, so the scaled point must work
        w = tuple(ints[:n])
        d = tuple(ints[n:])
        return WeightSystem(w, d)
    _, w, d = best
    g = 0
    for v in w + d:
        g = gcd(g, v)
    if g > 1:
        w = tuple(v // g for v in w)
        d = tuple(v // g for v in d)
    return WeightSystem(w, d)


def _compositions(total: int, parts: int):
    """Ordered tuples of positive integers with the given sum."""
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass
class EulerPair:
    eta: VectorField  # sum d_j X_j d/dX_j
    xi: VectorField  # sum w_i x_i d/dx_i


def euler_pair(f: MapGerm, ws: WeightSystem) -> EulerPair:
    """The diagonal Euler fields of a weight system, verified f-related."""
    if len(ws.weights) != f.n or len(ws.degrees) != f.p:
        raise ValueError("weight system does not match the germ's dimensions")
    eta = VectorField(
        f.target_vars,
        tuple(Polynomial.var(f.target_vars, v) * d for v, d in zip(f.target_vars, ws.degrees)),
    )
    xi = VectorField(
        f.source_vars,
        tuple(Polynomial.var(f.source_vars, v) * w for v, w in zip(f.source_vars, ws.weights)),
    )
    for j, comp in enumerate(f.components):
        lhs = xi.apply_to(comp)
        if lhs != comp * ws.degrees[j]:
            raise ValueError(f"Euler relation fails on component {j}: weight system invalid")
    return EulerPair(eta, xi)


def good_weights_check(f: MapGerm, ws: WeightSystem, basis) -> Verdict:
    """Good weights: each unfolding monomial's degree differs from its
    component's degree (vacuously true for stable germs)."""
    pairs = []
    ok = True
    for k, q in enumerate(basis):
        d_unf = ws.weighted_degree(q.monomial)
        d_comp = ws.degrees[q.component_index]
        pairs.append({"k": k + 1, "d_p_plus_k": d_unf, "d_j_k": d_comp})
        if d_unf == d_comp:
            ok = False
    v = Verdict(YES if ok else NO, 0, witness=pairs if ok else None,
                certificate=None if ok else pairs)
    v.note("good_weights", pairs=pairs)
    return v


# -- function invariants -------------------------------------------------------


def jacobian_ideal_span(g: Polynomial) -> ModuleSpan:
    gens = [(g.diff(v),) for v in g.vars]
    gens = [t for t in gens if not t[0].is_zero()]
    if not gens:
        gens = [(Polynomial.zero(g.vars),)]
    return ModuleSpan(g.vars, 1, gens, MultiplierRing.FULL)


def milnor_number(g: Polynomial, max_degree: int = DEFAULT_DEGREE):
    """dim O_n / Jg, certified; NotFiniteUpTo for non-isolated singularities."""
    if g.constant_term():
        raise ValueError("function germ must vanish at the origin")
    res = finite_codim_certified(jacobian_ideal_span(g), max_degree)
    return res.codim if not isinstance(res, NotFiniteUpTo) else res


def tjurina_number(g: Polynomial, max_degree: int = DEFAULT_DEGREE):
    """dim O_n / (Jg + <g>), certified."""
    if g.constant_term():
        raise ValueError("function germ must vanish at the origin")
    spans = [jacobian_ideal_span(g), ModuleSpan(g.vars, 1, [(g,)], MultiplierRing.FULL)]
    res = finite_codim_certified(spans, max_degree)
    return res.codim if not isinstance(res, NotFiniteUpTo) else res


@dataclass
class SaitoWitness:
    """Exact identity unit * g = sum multipliers[i] * dg/dx_i, unit(0) != 0."""

    multipliers: list[Polynomial]
    unit: Polynomial
    degree: int
    exact: bool = True

    def verify(self, g: Polynomial) -> bool:
        total = Polynomial.zero(g.vars)
        for a, v in zip(self.multipliers, g.vars):
            total = total + a * g.diff(v)
        return (self.unit * g - total).is_zero() and self.unit.constant_term() != 0


def _unit_membership(g: Polynomial, degree: int) -> SaitoWitness | None:
    """Solve u*g = sum a_i dg/dx_i exactly with u a unit (u(0) = 1).

    Membership of g in its jacobian ideal in the local ring always clears
    to such a polynomial identity at some degree; searching for it keeps
    YES verdicts sound for germs that are only quasi-homogeneous after a
    coordinate change.
    """
    from .jets import PolySystem

    partials = [g.diff(v) for v in g.vars]
    sys = PolySystem()
    uids = [sys.unknown(g.vars, degree) for _ in partials]
    uu = sys.unknown(g.vars, degree)
    sys.add_identity([(p, uid) for p, uid in zip(partials, uids)] + [(-g, uu)], g)
    solver = sys.solve()
    if not solver.consistent:
        return None
    sol = solver.solution()
    unit = 1 + sys.assignment(sol, uu)
    if unit.constant_term() == 0:
        const_col = sys.col_index[(uu, (0,) * len(g.vars))]
        for vec in solver.nullspace():
            if vec.get(const_col):
                sol = {k: sol.get(k, Fraction(0)) + vec.get(k, Fraction(0)) for k in set(sol) | set(vec)}
                unit = 1 + sys.assignment(sol, uu)
                break
    if unit.constant_term() == 0:
        return None
    witness = SaitoWitness([sys.assignment(sol, u) for u in uids], unit, degree)
    assert witness.verify(g)
    return witness


def saito_check(g: Polynomial, max_degree: int = DEFAULT_DEGREE) -> Verdict:
    """Quasi-homogeneity of a function germ by Saito's criterion.

    YES iff g lies in its jacobian ideal, certified by an exact polynomial
    identity unit * g = sum a_i dg/dx_i (the weighted Euler relation when
    g is weighted-homogeneous as given); when both invariants are finite
    this is cross-checked against mu = tau.  A genuine mismatch downgrades
    to UNKNOWN rather than guess.
    """
    mu = milnor_number(g, max_degree)
    tau = tjurina_number(g, max_degree)
    both_finite = not isinstance(mu, NotFiniteUpTo) and not isinstance(tau, NotFiniteUpTo)
    span = jacobian_ideal_span(g)
    witness: SaitoWitness | None = None
    one = Polynomial.const(g.vars, 1)
    for n in (1, 2, 4, max(8, int(g.degree()))):
        if n > max_degree:
            break
        w = membership_witness((g,), span, n)
        if isinstance(w, Witness) and w.exact:
            witness = SaitoWitness(w.multipliers, one, w.degree)
            break
    if witness is None and not (both_finite and mu != tau):
        for n in (2, 4, max(8, int(g.degree()))):
            if n > max_degree:
                break
            witness = _unit_membership(g, n)
            if witness is not None:
                break
    if witness is not None:
        v = Verdict(YES, witness.degree, witness=witness)
        if both_finite and mu != tau:
            return Verdict(UNKNOWN, max_degree,
                           certificate={"mu": mu, "tau": tau, "conflict": "exact witness despite mu != tau"})
        v.note("saito", mu=None if isinstance(mu, NotFiniteUpTo) else mu,
               tau=None if isinstance(tau, NotFiniteUpTo) else tau)
        return v
    if both_finite:
        if mu == tau:
            return Verdict(UNKNOWN, max_degree,
                           certificate={"mu": mu, "tau": tau,
                                        "note": "mu = tau but no exact witness through the degree bound"})
        return Verdict(NO, max_degree, certificate={"mu": mu, "tau": tau})
    return Verdict(UNKNOWN, max_degree,
                   certificate={"note": "no exact witness and invariants not both finite"})


# -- Poincare-Dulac ------------------------------------------------------------


def pd_normalize(vf: VectorField, degree: int = DEFAULT_DEGREE) -> tuple[tuple[Polynomial, ...], VectorField]:
    """Truncated Poincare-Dulac normalization of a vector field.

    Requires the 1-jet to be diagonalizable with rational eigenvalues.
    Returns (psi, normal) with normal = d(psi) o vf o psi^{-1} through the
    given degree: the diagonal linear part plus resonant terms only.  A
    term X^beta in component j is resonant iff <beta, d> = d_j.
    """
    if not vf.vanishes_at_zero():
        raise ValueError("normalization needs a field vanishing at the origin")
    amb = vf.ambient_vars
    s = len(amb)
    a = one_jet(vf)
    spec = char_poly_spectrum(a)
    if not spec.all_rational:
        raise UnsupportedShape("1-jet spectrum is not rational: unsupported")
    # eigenbasis, eigenvalues ascending
    columns: list[list[Fraction]] = []
    diag: list[Fraction] = []
    for lam, mult in spec.roots:
        shifted = RationalMatrix([[a.entries[i][j] - (lam if i == j else 0) for j in range(s)]
                                  for i in range(s)])
        res = linear_solve_exact(shifted, [Fraction(0)] * s)
        eig = res.nullspace
        if len(eig) != mult:
            raise UnsupportedShape("1-jet is not diagonalizable: unsupported")
        for v in eig:
            columns.append(v)
            diag.append(lam)
    pmat = RationalMatrix([[columns[j][i] for j in range(s)] for i in range(s)])
    pinv = pmat.inverse()
    assert pinv is not None
    xs = [Polynomial.var(amb, v) for v in amb]
    psi = tuple(
        sum((pinv.entries[i][j] * xs[j] for j in range(s)), Polynomial.zero(amb))
        for i in range(s)
    )
    cur = transport(vf, psi, degree)
    cur = VectorField(amb, tuple(c.truncate(degree) for c in cur.components))
    for k in range(2, degree + 1):
        h = [Polynomial.zero(amb) for _ in range(s)]
        any_term = False
        for i in range(s):
            for mono, c in cur.components[i].terms.items():
                if sum(mono) != k:
                    continue
                r = sum((Fraction(e) * diag[j] for j, e in enumerate(mono)), Fraction(0)) - diag[i]
                if r != 0:
                    h[i] = h[i] + Polynomial.monomial(amb, mono, -c / r)
                    any_term = True
        if not any_term:
            continue
        phi = tuple(xs[i] + h[i] for i in range(s))
        cur = transport(cur, phi, degree)
        cur = VectorField(amb, tuple(c.truncate(degree) for c in cur.components))
        psi = tuple(phi[i].compose(dict(zip(amb, psi)), trunc=degree) for i in range(s))
    return psi, cur
