"""Polynomial map-germs, their tangent spaces and unfolding data.

A MapGerm is a polynomial map (Q^n, 0) -> (Q^p, 0) with named source and
target variables.  An Unfolding splits the variables into base and
parameter blocks; parameters are identified positionally between source
(lambda) and target (Lambda).
"""

from __future__ import annotations

from dataclasses import dataclass

from .jets import (
    DEFAULT_DEGREE,
    CodimCertificate,
    ModuleSpan,
    MultiplierRing,
    NotFiniteUpTo,
    UncertifiableMultipliers,
    finite_codim_certified,
    jet_span,
)
from .linalg import RationalMatrix
from .poly import Exponent, Polynomial
from .verdicts import NO, UNKNOWN, YES, UnsupportedShape, Verdict


@dataclass
class MapGerm:
    source_vars: tuple[str, ...]
    target_vars: tuple[str, ...]
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        self.source_vars = tuple(self.source_vars)
        self.target_vars = tuple(self.target_vars)
        self.components = tuple(self.components)
        if not self.source_vars or not self.target_vars:
            raise ValueError("need at least one source and one target variable")
        if len(self.components) != len(self.target_vars):
            raise ValueError("one component per target variable")
        if len(set(self.source_vars) | set(self.target_vars)) != len(self.source_vars) + len(self.target_vars):
            raise ValueError("source and target variable names must be disjoint")
        for c in self.components:
            if c.vars != self.source_vars:
                raise ValueError("component over wrong ambient")
            if c.constant_term():
                raise ValueError("germ must fix the origin")

    @property
    def n(self) -> int:
        return len(self.source_vars)

    @property
    def p(self) -> int:
        return len(self.target_vars)

    @classmethod
    def from_strings(cls, source, target, components) -> "MapGerm":
        from .poly import parse_polynomial

        source = tuple(source)
        return cls(source, tuple(target), tuple(parse_polynomial(c, source) for c in components))

    def jacobian(self) -> list[list[Polynomial]]:
        return [[c.diff(v) for v in self.source_vars] for c in self.components]

    def jacobian_at_zero(self) -> RationalMatrix:
        return RationalMatrix([[c.diff(v).constant_term() for v in self.source_vars] for c in self.components])

    def pullback(self, h: Polynomial, trunc: int | None = None) -> Polynomial:
        """h o f for h over the target variables."""
        if h.vars != self.target_vars:
            raise ValueError("pullback input must live over the target variables")
        return h.compose(dict(zip(self.target_vars, self.components)), trunc=trunc)

    def tf(self, xi: tuple[Polynomial, ...]) -> tuple[Polynomial, ...]:
        """df applied to a source vector field (a tuple over source vars)."""
        jac = self.jacobian()
        return tuple(
            sum((jac[j][i] * xi[i] for i in range(self.n)), Polynomial.zero(self.source_vars))
            for j in range(self.p)
        )

    def wf(self, eta: tuple[Polynomial, ...], trunc: int | None = None) -> tuple[Polynomial, ...]:
        """eta o f for a target vector field."""
        return tuple(self.pullback(c, trunc=trunc) for c in eta)

    def __str__(self) -> str:
        comps = ", ".join(str(c) for c in self.components)
        return f"({', '.join(self.source_vars)}) -> ({comps})"


@dataclass
class Unfolding:
    base: MapGerm
    param_pairs: tuple[tuple[str, str], ...]  # (source lambda, target Lambda), positional
    total: MapGerm

    @property
    def m(self) -> int:
        return len(self.param_pairs)

    def __post_init__(self):
        self.param_pairs = tuple((a, b) for a, b in self.param_pairs)
        m = self.m
        tot = self.total
        if m == 0:
            if tot != self.base:
                raise ValueError("a 0-parameter unfolding must equal its base")
            return
        if tot.source_vars[-m:] != tuple(a for a, _ in self.param_pairs):
            raise ValueError("unfolding source must end with the parameter variables")
        if tot.target_vars[-m:] != tuple(b for _, b in self.param_pairs):
            raise ValueError("unfolding target must end with the parameter variables")
        for k, (lam, _) in enumerate(self.param_pairs):
            comp = tot.components[tot.p - m + k]
            if comp != Polynomial.var(tot.source_vars, lam):
                raise ValueError("last components must be exactly the parameters")
        # f_0 must be the base germ
        zero_subst = {v: Polynomial.var(self.base.source_vars, v) for v in self.base.source_vars}
        for lam, _ in self.param_pairs:
            zero_subst[lam] = Polynomial.zero(self.base.source_vars)
        for j in range(self.base.p):
            if tot.components[j].compose(zero_subst) != self.base.components[j]:
                raise ValueError("setting the parameters to zero must recover the base germ")

    @classmethod
    def from_total(cls, total: MapGerm, m: int) -> "Unfolding":
        if m < 1 or m >= total.p or m >= total.n:
            raise ValueError("parameter count out of range")
        pairs = tuple(zip(total.source_vars[-m:], total.target_vars[-m:]))
        base_src = total.source_vars[:-m]
        base_tgt = total.target_vars[:-m]
        subst = {v: Polynomial.var(base_src, v) for v in base_src}
        for lam in total.source_vars[-m:]:
            subst[lam] = Polynomial.zero(base_src)
        base = MapGerm(base_src, base_tgt, tuple(c.compose(subst) for c in total.components[: total.p - m]))
        return cls(base, pairs, total)


@dataclass(frozen=True)
class QuotientBasisElement:
    """One monomial in one component: x^alpha d/dX_j."""

    component_index: int  # 0-based j_k
    monomial: Exponent  # over the source variables

    def as_vector(self, germ: MapGerm) -> tuple[Polynomial, ...]:
        vec = [Polynomial.zero(germ.source_vars) for _ in range(germ.p)]
        vec[self.component_index] = Polynomial.monomial(germ.source_vars, self.monomial)
        return tuple(vec)


# -- basic invariants ----------------------------------------------------------


def presentation(f: MapGerm):
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


def corank(f: MapGerm) -> int:
    return min(f.n, f.p) - f.jacobian_at_zero().rank()


def multiplicity(f: MapGerm, max_degree: int = DEFAULT_DEGREE):
    """dim of the local algebra O_n / f*m_p; requires n = p."""
    if f.n != f.p:
        raise UnsupportedShape("multiplicity via the local algebra needs an equidimensional germ")
    ideal = ModuleSpan(f.source_vars, 1, [(c,) for c in f.components], MultiplierRing.FULL)
    res = finite_codim_certified(ideal, max_degree)
    if isinstance(res, NotFiniteUpTo):
        return res
    return res.codim


def tke_span(f: MapGerm) -> ModuleSpan:
    """T K_e f = tf(theta_n) + f*m_p theta(f) as a full-multiplier span."""
    gens = []
    jac = f.jacobian()
    for i in range(f.n):
        gens.append(tuple(jac[j][i] for j in range(f.p)))
    zero = Polynomial.zero(f.source_vars)
    for comp in f.components:
        for l in range(f.p):
            vec = [zero] * f.p
            vec[l] = comp
            gens.append(tuple(vec))
    return ModuleSpan(f.source_vars, f.p, gens, MultiplierRing.FULL)


def ke_codim(f: MapGerm, max_degree: int = DEFAULT_DEGREE):
    return finite_codim_certified(tke_span(f), max_degree)


def _tf_span(f: MapGerm) -> ModuleSpan:
    jac = f.jacobian()
    gens = [tuple(jac[j][i] for j in range(f.p)) for i in range(f.n)]
    return ModuleSpan(f.source_vars, f.p, gens, MultiplierRing.FULL)


def _wf_span(f: MapGerm) -> ModuleSpan:
    zero = Polynomial.zero(f.source_vars)
    one = Polynomial.const(f.source_vars, 1)
    gens = []
    for j in range(f.p):
        vec = [zero] * f.p
        vec[j] = one
        gens.append(tuple(vec))
    return ModuleSpan(f.source_vars, f.p, gens, MultiplierRing("via_map", f.components))


@dataclass
class HeuristicCodim:
    """Stabilized jet count without a Nakayama certificate."""

    codim: int
    stabilized_from: int
    degree: int


def _ae_spans(f: MapGerm) -> list[ModuleSpan]:
    """Spans presenting theta(f)/T A_e f, reduced along matched components.

    Components that are plain source variables contribute tf-relations
    e_j = -sum df_k/dx_sigma(j) e_k, which eliminate their slots of the
    free module outright; what remains is a module over the essential
    components only, with the same full/pullback multiplier structure.
    """
    matched, rest, _ = presentation(f)
    if not matched:
        return [_tf_span(f), _wf_span(f)]
    jac = f.jacobian()
    zero = Polynomial.zero(f.source_vars)
    one = Polynomial.const(f.source_vars, 1)
    rank = len(rest)
    var_index = {v: i for i, v in enumerate(f.source_vars)}
    tf_gens = []
    for s in f.source_vars:
        if s in matched.values():
            continue
        i = var_index[s]
        tf_gens.append(tuple(jac[k][i] for k in rest))
    wf_gens = []
    for j in range(f.p):
        if j in matched:
            i = var_index[matched[j]]
            wf_gens.append(tuple(-jac[k][i] for k in rest))
        else:
            vec = [zero] * rank
            vec[rest.index(j)] = one
            wf_gens.append(tuple(vec))
    spans = []
    if tf_gens:
        spans.append(ModuleSpan(f.source_vars, rank, tf_gens, MultiplierRing.FULL))
    spans.append(ModuleSpan(f.source_vars, rank, wf_gens, MultiplierRing("via_map", f.components)))
    return spans


def ae_codim(f: MapGerm, max_degree: int = DEFAULT_DEGREE):
    """Codimension of T A_e f = tf(theta_n) + wf(theta_p) in theta(f).

    Certified through the via_map Nakayama machinery when f has an
    isolated zero; otherwise falls back to watching the jet complement
    stabilize and flags the answer heuristic.  Plain-variable components
    are eliminated first (see _ae_spans), which cuts the jet rank down
    to the essential components.
    """
    matched, rest, _ = presentation(f)
    if not rest:
        return CodimCertificate(0, [], 0, 0)
    spans = _ae_spans(f)

    def remap(res):
        if matched and isinstance(res, CodimCertificate):
            res.cobasis = [(rest[c], m) for c, m in res.cobasis]
        return res

    try:
        return remap(finite_codim_certified(spans, max_degree))
    except UncertifiableMultipliers:
        pass
    prev = None
    streak = 0
    for n in range(1, max_degree + 1):
        basis = jet_span(spans, n)
        codim = len(basis.coordinates) - basis.rank
        if codim == prev:
            streak += 1
            if streak >= 2:
                return HeuristicCodim(codim, stabilized_from=n - streak, degree=max_degree)
        else:
            prev = codim
            streak = 0
    return NotFiniteUpTo(max_degree)


def minimal_unfolding_data(f: MapGerm, max_degree: int = DEFAULT_DEGREE) -> list[QuotientBasisElement]:
    """Monomial cobasis of theta(f) modulo T K_e f + constant fields.

    These are the unfolding monomials: adding one parameter per element
    yields a stable unfolding with the minimal number of parameters.
    Deterministic choice: non-pivot jet coordinates, i.e. lowest degree
    first, then component index, then exponent tuple.
    """
    zero = Polynomial.zero(f.source_vars)
    one = Polynomial.const(f.source_vars, 1)
    const_gens = []
    for j in range(f.p):
        vec = [zero] * f.p
        vec[j] = one
        const_gens.append(tuple(vec))
    const_span = ModuleSpan(f.source_vars, f.p, const_gens, MultiplierRing.CONSTANTS)
    res = finite_codim_certified([tke_span(f), const_span], max_degree)
    if isinstance(res, NotFiniteUpTo):
        raise UnsupportedShape(f"germ is not K_e-finite through degree {res.degree}")
    out = [QuotientBasisElement(c, m) for (c, m) in res.cobasis]
    out.sort(key=lambda q: (sum(q.monomial), q.component_index, q.monomial))
    return out


def fresh_param_names(f: MapGerm, m: int) -> tuple[list[str], list[str]]:
    taken = set(f.source_vars) | set(f.target_vars)
    lams, Lams = [], []
    for k in range(1, m + 1):
        lam, Lam = f"l{k}", f"L{k}"
        while lam in taken:
            lam += "_"
        taken.add(lam)
        while Lam in taken:
            Lam += "_"
        taken.add(Lam)
        lams.append(lam)
        Lams.append(Lam)
    return lams, Lams


def build_standard_unfolding(f: MapGerm, basis: list[QuotientBasisElement]) -> Unfolding:
    """F(x, lambda) = (f(x) + sum_k lambda_k x^alpha_k e_{j_k}, lambda)."""
    m = len(basis)
    lams, Lams = fresh_param_names(f, m)
    src = f.source_vars + tuple(lams)
    tgt = f.target_vars + tuple(Lams)
    comps = [c.extend(src) for c in f.components]
    for k, q in enumerate(basis):
        mono = Polynomial.monomial(f.source_vars, q.monomial).extend(src)
        comps[q.component_index] = comps[q.component_index] + Polynomial.var(src, lams[k]) * mono
    for lam in lams:
        comps.append(Polynomial.var(src, lam))
    total = MapGerm(src, tgt, tuple(comps))
    if m == 0:
        return Unfolding(f, (), total)
    return Unfolding(f, tuple(zip(lams, Lams)), total)


def is_stable(f: MapGerm, max_degree: int = DEFAULT_DEGREE) -> Verdict:
    res = ae_codim(f, max_degree)
    if isinstance(res, CodimCertificate):
        if res.codim == 0:
            return Verdict(YES, res.computed_at, witness=res)
        return Verdict(NO, res.computed_at, certificate=res)
    if isinstance(res, HeuristicCodim) and res.codim > 0:
        return Verdict(NO, res.degree, certificate=res)
    return Verdict(UNKNOWN, max_degree, certificate=res)
