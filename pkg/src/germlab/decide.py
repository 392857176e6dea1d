"""Substantiality and quasi-homogeneity decisions for unfoldings.

Reduction used throughout (with Lambda the target parameters, p base
components, m parameters):

    A liftable field eta has the substantial shape
    dLambda_k(eta) = Lambda_k u_k + q_k (u_k a unit, q_k in m_L m_{p+m})
    for every k  <=>  eta is projectable and the 1-jet of its Lambda
    block is diag(c_1..c_m) with every c_k nonzero.

Proof: j^1(Lambda_k u_k + q_k) = u_k(0) Lambda_k since q_k starts
quadratically, giving c_k = u_k(0) != 0; conversely a projectable
eta_{p+k} lies in <Lambda>, so splitting off its Lambda-linear part c_k
Lambda_k leaves sum_s Lambda_s h_{ks} with h in the maximal ideal, which
is the required q_k with unit u_k = c_k + h_{kk}.

So substantiality is exact linear algebra on the space L of achievable
Lambda-block 1-jets of projectable liftable fields; weak substantiality
asks instead for an element of L with nonzero determinant.  Module
multiples add nothing to L because projectable generators have Lambda
parts vanishing at the origin.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .fields import (
    VectorField,
    analytic_stratum_dim,
    lift_module,
    lower_partner,
    projectable_filter,
    spectrum,
)
from .germs import (
    MapGerm,
    Unfolding,
    build_standard_unfolding,
    corank,
    minimal_unfolding_data,
    multiplicity,
)
from .jets import DEFAULT_DEGREE, ModuleSpan, NotFiniteUpTo
from .kernel import Echelon, row_from_fractions
from .linalg import RationalMatrix, poly_det
from .poly import Polynomial
from .verdicts import NO, YES, Inapplicable, UnsupportedShape, Verdict
from .weights import pd_normalize, saito_check, tjurina_number


@dataclass
class LambdaJetSpace:
    """Q-span of achievable Lambda-block 1-jets of projectable lift fields."""

    m: int
    basis: list[RationalMatrix]
    generator_indices: list[int]  # basis[k] is the jet of source.generators[generator_indices[k]]
    source: ModuleSpan

    def field_for(self, coeffs: list[Fraction]) -> VectorField:
        """The projectable field whose Lambda jet is sum coeffs[k] * basis[k]."""
        amb = tuple(self.source.ambient_vars)
        comps = [Polynomial.zero(amb) for _ in range(self.source.ambient_rank)]
        for c, gi in zip(coeffs, self.generator_indices):
            if not c:
                continue
            g = self.source.generators[gi]
            for j in range(len(comps)):
                comps[j] = comps[j] + g[j] * c
        return VectorField(amb, tuple(comps))


def lambda_jet_space(projectable: ModuleSpan, m: int) -> LambdaJetSpace:
    """Extract the independent Lambda-block 1-jets of the generators.

    Generators' Lambda parts vanish at 0, so multiplying by a function a
    scales the jet by a(0): the generator jets already span everything."""
    amb = tuple(projectable.ambient_vars)
    p = projectable.ambient_rank - m
    ech = Echelon()
    basis: list[RationalMatrix] = []
    idxs: list[int] = []
    for gi, g in enumerate(projectable.generators):
        mat = []
        for k in range(m):
            row = []
            comp = g[p + k]
            for l in range(m):
                unit = tuple(1 if t == len(amb) - m + l else 0 for t in range(len(amb)))
                row.append(comp.coeff(unit))
            mat.append(row)
        flat = {i: v for i, v in enumerate(x for row in mat for x in row) if v}
        if not flat:
            continue
        cols, vals = row_from_fractions(flat)
        if ech.insert(cols, vals) is not None:
            basis.append(RationalMatrix(mat))
            idxs.append(gi)
    return LambdaJetSpace(m, basis, idxs, projectable)


def _grid_search(vectors: list[list[Fraction]], k_max: int):
    """First integer point c in {1..k_max}^r making every coordinate of
    sum c_i vectors[i] nonzero; None if the grid has no such point."""
    r = len(vectors)
    m = len(vectors[0]) if vectors else 0
    for c in itertools.product(range(1, k_max + 1), repeat=r):
        vals = [sum((Fraction(ci) * vectors[i][k] for i, ci in enumerate(c)), Fraction(0))
                for k in range(m)]
        if all(v != 0 for v in vals):
            return [Fraction(ci) for ci in c], vals
    return None


def decide_substantial(space: LambdaJetSpace) -> Verdict:
    """Does L contain a diagonal matrix with every diagonal entry nonzero.

    Intersects L with the diagonal subspace exactly; a YES carries the
    witness field (an exact member of the lift module), a NO carries the
    index of a parameter direction whose diagonal entry vanishes on the
    whole intersection.
    """
    m = space.m
    if m == 0:
        return Verdict(YES, 0, witness={"note": "no parameters: vacuously substantial"})
    degree = space.source.trunc_degree or 0
    r = len(space.basis)
    if r == 0:
        return Verdict(NO, degree, certificate={"vanishing_index": 1, "reason": "no nonzero Lambda jets"})
    # solve for combinations with zero off-diagonal part
    from .kernel import LinearSolve

    solver = LinearSolve(r)
    for k in range(m):
        for l in range(m):
            if k == l:
                continue
            coeffs = {i: space.basis[i].entries[k][l] for i in range(r)
                      if space.basis[i].entries[k][l]}
            if coeffs:
                solver.add_equation(coeffs, Fraction(0))
    null = solver.nullspace()
    diags: list[list[Fraction]] = []
    combos: list[list[Fraction]] = []
    for vec in null:
        t = [vec.get(i, Fraction(0)) for i in range(r)]
        diag = [sum((t[i] * space.basis[i].entries[k][k] for i in range(r)), Fraction(0))
                for k in range(m)]
        diags.append(diag)
        combos.append(t)
    for k in range(m):
        if all(d[k] == 0 for d in diags):
            return Verdict(NO, degree, certificate={
                "vanishing_index": k + 1,
                "reason": "every diagonal matrix in L has a zero in this parameter direction",
            })
    found = _grid_search(diags, m + 1)
    assert found is not None, "grid of side m+1 must contain a nonvanishing point"
    c, entries = found
    t = [sum((c[i] * combos[i][j] for i in range(len(c))), Fraction(0)) for j in range(r)]
    field = space.field_for(t)
    v = Verdict(YES, degree, witness={
        "field": field,
        "diagonal": entries,
        "basis_coefficients": t,
    })
    v.note("substantial", diagonal=[str(e) for e in entries])
    return v


def decide_weak_substantial(space: LambdaJetSpace) -> Verdict:
    """Does L contain a matrix with no zero eigenvalue.

    Equivalent to det(sum t_i B_i) not vanishing identically; a witness
    point is found on an integer grid of side exceeding the degree of the
    determinant polynomial.
    """
    m = space.m
    if m == 0:
        return Verdict(YES, 0, witness={"note": "no parameters: vacuously weakly substantial"})
    degree = space.source.trunc_degree or 0
    r = len(space.basis)
    if r == 0:
        return Verdict(NO, degree, certificate={"reason": "no nonzero Lambda jets"})
    tvars = tuple(f"t{i+1}" for i in range(r))
    entries = [
        [
            sum(
                (Polynomial.var(tvars, tvars[i]) * space.basis[i].entries[k][l] for i in range(r)),
                Polynomial.zero(tvars),
            )
            for l in range(m)
        ]
        for k in range(m)
    ]
    det = poly_det(entries)
    if det.is_zero():
        return Verdict(NO, degree, certificate={"reason": "det of the Lambda-jet pencil is identically zero"})
    k_max = int(det.degree()) + 1
    for c in itertools.product(range(1, k_max + 1), repeat=r):
        val = det.eval({tvars[i]: Fraction(c[i]) for i in range(r)})
        if val != 0:
            coeffs = [Fraction(ci) for ci in c]
            field = space.field_for(coeffs)
            v = Verdict(YES, degree, witness={
                "field": field,
                "det": val,
                "basis_coefficients": coeffs,
            })
            v.note("weak_substantial", det=str(val))
            return v
    raise AssertionError("grid wider than deg(det) must contain a nonvanishing point")


# -- unfolding pipeline ---------------------------------------------------------


@dataclass
class SubstantialAnalysis:
    unfolding: Unfolding
    lift: ModuleSpan
    projectable: ModuleSpan
    space: LambdaJetSpace
    substantial: Verdict
    weak: Verdict


def analyze_unfolding(unf: Unfolding, degree: int = DEFAULT_DEGREE, *, lift: ModuleSpan | None = None) -> SubstantialAnalysis:
    """Lift module, projectable filter, Lambda jets and both verdicts."""
    if lift is None:
        lift = lift_module(unf.total, degree)
    proj = projectable_filter(lift, unf.m, degree)
    space = lambda_jet_space(proj, unf.m)
    sub = decide_substantial(space)
    weak = decide_weak_substantial(space)
    if unf.m == 1 and sub.status != weak.status:
        raise AssertionError("substantial and weakly substantial must agree for one parameter")
    return SubstantialAnalysis(unf, lift, proj, space, sub, weak)


# -- multiplicity 3 -------------------------------------------------------------


@dataclass
class Mult3Data:
    q: Polynomial  # over the n-1 non-essential source variables
    essential_var: str
    component_index: int
    source_change: dict[str, Polynomial]  # substitution realizing y -> y - b/(3a)
    target_shift: Polynomial  # subtracted from the essential target component
    target_scale: Fraction

    @property
    def normal_form_stable_or_regular(self) -> bool:
        return self.q.order() < 2


def mult3_extract(f: MapGerm) -> Mult3Data:
    """Coordinates for the (x, y^3 + q(x) y) normal form.

    Handles germs already presented monogenically with cubic essential
    component: a Tschirnhaus shift removes the quadratic term, a target
    translation removes the constant-in-y part, a target scaling makes
    the cube monic.  Anything needing Weierstrass preparation refuses.
    """
    if f.n != f.p:
        raise UnsupportedShape("multiplicity-3 pipeline needs an equidimensional germ")
    if corank(f) != 1:
        raise UnsupportedShape("multiplicity-3 pipeline needs corank exactly 1")
    mult = multiplicity(f)
    if isinstance(mult, NotFiniteUpTo) or mult != 3:
        raise UnsupportedShape(f"multiplicity is {mult}, not 3")
    from .fields import _presentation

    matched, rest, essential = _presentation(f)
    if len(rest) != 1 or len(essential) != 1:
        raise UnsupportedShape("germ is not in a monogenic presentation (x, g(x, y))")
    y = essential[0]
    j0 = rest[0]
    g = f.components[j0]
    if g.degree_in(y) > 3:
        raise UnsupportedShape(
            "essential component has y-degree > 3: reduction would need Weierstrass preparation"
        )
    src = f.source_vars
    yi = src.index(y)
    coeffs: dict[int, Polynomial] = {}
    for mono, c in g.terms.items():
        k = mono[yi]
        m2 = list(mono)
        m2[yi] = 0
        coeffs.setdefault(k, Polynomial.zero(src))
        coeffs[k] = coeffs[k] + Polynomial.monomial(src, tuple(m2), c)
    c3 = coeffs.get(3, Polynomial.zero(src))
    if not c3.is_constant() or c3.is_zero():
        raise UnsupportedShape("cubic coefficient must be a nonzero constant for the implemented reduction")
    a = c3.constant_term()
    b = coeffs.get(2, Polynomial.zero(src))
    shift = b * (Fraction(-1) / (3 * a))
    subst = {v: Polynomial.var(src, v) for v in src}
    subst[y] = Polynomial.var(src, y) + shift
    g2 = g.compose(subst)
    # after the shift the y^2 coefficient is gone
    c0 = Polynomial.zero(src)
    c1 = Polynomial.zero(src)
    for mono, c in g2.terms.items():
        k = mono[yi]
        m2 = list(mono)
        m2[yi] = 0
        if k == 0:
            c0 = c0 + Polynomial.monomial(src, tuple(m2), c)
        elif k == 1:
            c1 = c1 + Polynomial.monomial(src, tuple(m2), c)
        elif k == 2:
            raise AssertionError("Tschirnhaus shift failed to remove the quadratic term")
    q = c1 * (1 / a)
    xvars = tuple(v for v in src if v != y)
    q_x = q.rename({}, xvars) if q.degree_in(y) == 0 else None
    if q_x is None:
        raise AssertionError("linear-in-y coefficient still involves the essential variable")
    return Mult3Data(
        q=q_x,
        essential_var=y,
        component_index=j0,
        source_change=subst,
        target_shift=c0,
        target_scale=Fraction(1) / a,
    )


def mult3_opsu(data: Mult3Data, degree_hint: str = "l") -> Unfolding:
    """The stable 1-parameter unfolding (x, y^3 + (q(x) + lambda) y, lambda)."""
    xv = data.q.vars
    y = data.essential_var
    lam = degree_hint
    while lam in xv or lam == y:
        lam += "_"
    src = xv + (y, lam)
    taken = set(src)

    def fresh(name: str) -> str:
        while name in taken:
            name += "_"
        taken.add(name)
        return name

    tgt = tuple(fresh(f"X{i+1}") for i in range(len(xv))) + (fresh("Y"), fresh("L"))
    qe = data.q.extend(src)
    ye = Polynomial.var(src, y)
    le = Polynomial.var(src, lam)
    comps = [Polynomial.var(src, v) for v in xv]
    comps.append(ye ** 3 + (qe + le) * ye)
    comps.append(le)
    total = MapGerm(src, tgt, tuple(comps))
    return Unfolding.from_total(total, 1)


def decide_qh_mult3(f: MapGerm, degree: int = DEFAULT_DEGREE, *, cross_validate: bool = True) -> Verdict:
    """Quasi-homogeneity of a corank-1, multiplicity-3 equidimensional germ.

    After normalization to (x, y^3 + q(x) y): A-finiteness amounts to q
    having an isolated singularity (finite Tjurina number); the verdict
    is then Saito's criterion on q, cross-validated against the
    substantiality of the canonical one-parameter stable unfolding.
    """
    data = mult3_extract(f)
    if not data.q.vars:
        # n = 1: the normal form is y^3 itself, weighted-homogeneous outright
        v = Verdict(YES, degree, witness={"note": "normal form y^3", "weights": (1,), "degrees": (3,)})
        v.note("mult3_base_case", q="0 (no unfolding variables)")
        return v
    tau = tjurina_number(data.q, degree) if not data.q.is_zero() else NotFiniteUpTo(degree)
    if isinstance(tau, NotFiniteUpTo):
        raise Inapplicable(
            "not A-finite: q has non-isolated singularity, the multiplicity-3 theorem does not apply"
        )
    verdict = saito_check(data.q, degree)
    out = Verdict(verdict.status, degree, witness=verdict.witness, certificate=verdict.certificate)
    out.note("saito_on_q", q=str(data.q), status=verdict.status, tau=tau)
    if cross_validate:
        unf = mult3_opsu(data)
        analysis = analyze_unfolding(unf, max(2, min(degree, 4)))
        out.note("opsu_substantial", status=analysis.substantial.status)
        if verdict.status == NO and analysis.substantial.status == YES:
            raise AssertionError("Saito NO but OPSU substantial YES: pipeline inconsistency")
        if verdict.status == YES and analysis.substantial.status != YES:
            out.note("opsu_substantial_degree_limited", degree=analysis.substantial.degree)
    return out


# -- minimal stable unfolding ---------------------------------------------------


@dataclass
class ConstructedCoordinates:
    target_change: tuple[Polynomial, ...]
    source_change: tuple[Polynomial, ...]
    eta_diag: list[Fraction]
    xi_diag: list[Fraction]
    verified_to_degree: int


def decide_qh_minimal(
    f: MapGerm,
    degree: int = DEFAULT_DEGREE,
    *,
    construct_coords: bool = False,
) -> Verdict:
    """Quasi-homogeneity via substantiality of the minimal stable unfolding.

    Requires an equidimensional corank-1 germ whose standard unfolding is
    minimal (analytic stratum of dimension 0).  The verdict is
    decide_substantial on the unfolding's Lambda-jet space; on YES the
    weighted-homogeneous coordinates can optionally be constructed by
    Poincare-Dulac normalization of the witness and its lower partner.
    """
    if f.n != f.p:
        raise UnsupportedShape("unsupported shape: the minimal-unfolding theorem needs n = p")
    if corank(f) != 1:
        raise UnsupportedShape("unsupported shape: corank must be 1")
    basis = minimal_unfolding_data(f)
    if not basis:
        v = Verdict(YES, degree, witness={"note": "stable germ: equivalent to a weighted-homogeneous normal form"})
        return v
    unf = build_standard_unfolding(f, basis)
    lift = lift_module(unf.total, degree)
    stratum = analytic_stratum_dim(lift)
    if stratum != 0:
        raise UnsupportedShape(
            f"standard unfolding is not minimal: analytic stratum has dimension {stratum}"
        )
    analysis = analyze_unfolding(unf, degree, lift=lift)
    verdict = Verdict(
        analysis.substantial.status,
        analysis.substantial.degree,
        witness=analysis.substantial.witness,
        certificate=analysis.substantial.certificate,
    )
    verdict.note("minimal_unfolding", m=unf.m, stratum=stratum)
    if verdict.status == YES and construct_coords:
        try:
            verdict.witness["coordinates"] = _construct_coordinates(f, unf, analysis, degree)
        except (UnsupportedShape, ValueError) as exc:
            verdict.note("coordinate_construction_failed", reason=str(exc))
    return verdict


def _construct_coordinates(f: MapGerm, unf: Unfolding, analysis: SubstantialAnalysis, degree: int) -> ConstructedCoordinates:
    """Theorem-style construction of weighted-homogeneous coordinates."""
    field: VectorField = analysis.substantial.witness["field"]
    maxdeg = max(int(c.degree()) for c in f.components)
    work = degree + maxdeg  # jets must carry the germ itself plus the slack
    # restrict the witness to the base (projectable, so set Lambda = 0, keep p comps)
    base_tgt = unf.base.target_vars
    subst = {v: Polynomial.var(base_tgt, v) for v in base_tgt}
    for _, lam in unf.param_pairs:
        subst[lam] = Polynomial.zero(base_tgt)
    eta0 = VectorField(base_tgt, tuple(field.components[j].compose(subst) for j in range(unf.base.p)))
    sp = spectrum(eta0)
    if not sp.all_rational:
        raise UnsupportedShape("restricted witness has irrational spectrum")
    if all(r < 0 for r, _ in sp.roots):
        eta0 = VectorField(base_tgt, tuple(-c for c in eta0.components))
        sp = spectrum(eta0)
    if not sp.all_positive:
        raise UnsupportedShape("restricted witness spectrum is not positive")
    psi, eta_s = pd_normalize(eta0, work)
    f1 = MapGerm(
        f.source_vars,
        base_tgt,
        tuple(p.compose(dict(zip(base_tgt, f.components)), trunc=work) for p in psi),
    )
    pair = lower_partner(f1, eta_s, degree)
    if not hasattr(pair, "xi"):
        raise UnsupportedShape("normalized witness does not lower against the transformed germ")
    phi, xi_s = pd_normalize(pair.xi, work)
    from .poly import formal_inverse_jet

    phi_inv = formal_inverse_jet(phi, work)
    f2 = MapGerm(
        f.source_vars,
        base_tgt,
        tuple(c.compose(dict(zip(f.source_vars, phi_inv)), trunc=work) for c in f1.components),
    )
    # Euler relation through the construction degree
    lhs = f2.tf(xi_s.components)
    rhs = f2.wf(eta_s.components)
    check = degree
    for a, b in zip(lhs, rhs):
        if not (a - b).truncate(max(1, check)).is_zero():
            raise UnsupportedShape("Euler relation fails within the verified degree")
    eta_diag = [r for r, k in spectrum(eta_s).roots for _ in range(k)]
    xi_diag = [r for r, k in spectrum(xi_s).roots for _ in range(k)]
    return ConstructedCoordinates(
        target_change=psi,
        source_change=phi_inv,
        eta_diag=eta_diag,
        xi_diag=xi_diag,
        verified_to_degree=max(1, check),
    )
