"""Liftable vector fields: discriminants, Lift, lowering, transport."""

import random
from fractions import Fraction

import pytest

from germlab import (
    MapGerm,
    NotLiftableAt,
    Unfolding,
    UnsupportedShape,
    VectorField,
    analytic_stratum_dim,
    discriminant_equation,
    lift_module,
    lower_partner,
    membership_witness,
    one_jet,
    projectable_filter,
    restrict_lift_to_base,
    spectrum,
    transport,
)
from germlab.jets import ModuleSpan, MultiplierRing
from germlab.linalg import RationalMatrix
from germlab.poly import Polynomial, parse_polynomial
from germlab.resultant import exact_div

from conftest import an_unfolding


def P(text, vars):
    return parse_polynomial(text, vars)


def up_to_constant(a, b):
    am, ac = a.leading()
    bm, bc = b.leading()
    return am == bm and a * (1 / ac) == b * (1 / bc)


class TestDiscriminant:
    def test_a2_family(self, g_a2):
        d = discriminant_equation(g_a2.total)
        assert up_to_constant(d.H, P("4L^3 + 27Y^2", ("Y", "L")))
        assert d.reduced and not d.smooth

    def test_cusp_curve(self, cusp):
        d = discriminant_equation(cusp)
        assert up_to_constant(d.H, P("X2^2 - X1^3", ("X1", "X2")))

    def test_identity_smooth(self):
        f = MapGerm.from_strings(["y"], ["Y"], ["y"])
        d = discriminant_equation(f)
        assert d.smooth and d.H == P("1", ("Y",))

    def test_cusp_opsu_image(self, cusp_opsu):
        d = discriminant_equation(cusp_opsu.total)
        v = ("X1", "X2", "L")
        want = P("X2^2 - X1*(X1 + L)^2", v)
        assert up_to_constant(d.H, want)

    def test_corank2_refused(self):
        f = MapGerm.from_strings(["x", "y"], ["X", "Y"], ["x^2 + y^2", "x*y"])
        with pytest.raises(UnsupportedShape):
            discriminant_equation(f)


class TestLiftModule:
    def test_a2_module_equality_both_directions(self, g_a2):
        span = lift_module(g_a2.total, 8)
        v = ("Y", "L")
        known = ModuleSpan(
            v, 2,
            [(P("3Y", v), P("2L", v)), (P("-2/3*L^2", v), P("3Y", v))],
            MultiplierRing.FULL,
        )
        for g in span.generators:
            assert membership_witness(g, known, 8).exact
        for g in known.generators:
            assert membership_witness(g, span, 8).exact

    def test_an_one_jet_pattern(self):
        # generator 1-jets carry the triangular pattern: one Euler jet
        # diag(n+1, ..., 2) and one generator per lower subdiagonal,
        # fully supported there (the display's off-diagonal constants are
        # basis-dependent; the subdiagonal structure is not)
        n = 3
        F = an_unfolding(n)
        span = lift_module(F, 2)
        assert len(span.generators) == n
        jets = [one_jet(VectorField(F.target_vars, g)) for g in span.generators]
        seen_levels = set()
        for m in jets:
            levels = {r - c for r in range(n) for c in range(n) if m.entries[r][c] != 0}
            assert len(levels) == 1  # supported on a single subdiagonal
            (k,) = levels
            assert k not in seen_levels
            seen_levels.add(k)
            support = [(r, c) for r in range(n) for c in range(n) if r - c == k]
            assert all(m.entries[r][c] != 0 for r, c in support)
            if k == 0:
                scale = m.entries[0][0] / Fraction(n + 1)
                want = [[Fraction(n + 1 - i) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
                assert m == RationalMatrix(want) * scale
        assert seen_levels == set(range(n))

    def test_prism_contains_constant_fields(self):
        # Id_1 x G: d/dX is liftable for the prism direction
        f = MapGerm.from_strings(["x", "y", "l"], ["X", "Y", "L"], ["x", "y^3 + l*y", "l"])
        span = lift_module(f, 3)
        v = f.target_vars
        const = (P("1", v), Polynomial.zero(v), Polynomial.zero(v))
        assert membership_witness(const, span, 3).exact

    def test_generators_are_exact_derlog_members(self, g_a2):
        d = discriminant_equation(g_a2.total)
        span = lift_module(g_a2.total, 6, disc=d)
        for g in span.generators:
            action = Polynomial.zero(d.H.vars)
            for comp, var in zip(g, d.H.vars):
                action = action + comp * d.H.diff(var)
            if not action.is_zero():
                exact_div(action, d.H)


class TestLowerPartner:
    def test_cusp_unfolding_euler_pair(self, cusp_opsu):
        eta = VectorField.from_strings(("X1", "X2", "L"), ["2X1", "3X2", "2L"])
        pair = lower_partner(cusp_opsu.total, eta, 4)
        assert pair.exact
        assert [str(c) for c in pair.xi.components] == ["x", "2*l"]

    def test_identity(self):
        f = MapGerm.from_strings(["y"], ["Y"], ["y"])
        eta = VectorField.from_strings(("Y",), ["Y^2 - 5Y"])
        pair = lower_partner(f, eta, 3)
        assert pair.exact and pair.xi.components[0] == P("y^2 - 5y", ("y",))

    def test_augmented_cube_field(self):
        v = ("X", "Y", "Z", "W", "L")
        F = MapGerm.from_strings(
            ["x", "y", "z", "w", "l"], list(v),
            ["x", "y", "z", "w^3 + (l + x*y^3*z^3 + y^5 + z^5)*w", "l"],
        )
        eta = VectorField.from_strings(v, ["-2X", "2Y", "2Z", "15W", "10L"])
        pair = lower_partner(F, eta, 2)
        assert pair.exact
        assert [str(c) for c in pair.xi.components] == ["-2*x", "2*y", "2*z", "5*w", "10*l"]
        assert all(r.is_zero() for r in pair.residual(F))

    def test_not_liftable(self, cusp):
        eta = VectorField.from_strings(("X1", "X2"), ["X2", "0"])
        res = lower_partner(cusp, eta, 4)
        assert isinstance(res, NotLiftableAt)
        # the contradiction surfaces at a definite jet level
        assert isinstance(res.level, int) and 1 <= res.level <= 6


class TestProjectable:
    def test_a2_filter(self, g_a2):
        span = lift_module(g_a2.total, 6)
        proj = projectable_filter(span, 1, 6)
        v = ("Y", "L")
        euler = (P("3Y", v), P("2L", v))
        l_eta2 = (P("-2/3*L^3", v), P("3Y*L", v))
        for target in (euler, l_eta2):
            assert membership_witness(target, proj, 6).exact
        # eta2 itself is not projectable: its last component is 3Y
        for g in proj.generators:
            last = g[-1]
            assert all(m[-1] >= 1 for m in last.terms)

    def test_prism_direction_projectable(self):
        f = MapGerm.from_strings(["x", "y", "l"], ["X", "Y", "L"], ["x", "y^3 + l*y", "l"])
        span = lift_module(f, 3)
        proj = projectable_filter(span, 1, 3)
        v = f.target_vars
        const = (P("1", v), Polynomial.zero(v), Polynomial.zero(v))
        assert membership_witness(const, proj, 3).exact

    def test_euler_field_of_wh_unfolding_projectable(self, cusp_opsu):
        span = lift_module(cusp_opsu.total, 4)
        proj = projectable_filter(span, 1, 4)
        v = cusp_opsu.total.target_vars
        euler = (P("2X1", v), P("3X2", v), P("2L", v))
        assert membership_witness(euler, proj, 4).exact


class TestRestrictToBase:
    def test_cusp_unfolding_restriction(self, cusp_opsu):
        span = lift_module(cusp_opsu.total, 4)
        proj = projectable_filter(span, 1, 4)
        base = restrict_lift_to_base(cusp_opsu, proj)
        v = cusp_opsu.base.target_vars
        want = (P("2X1", v), P("3X2", v))
        assert membership_witness(want, base, 4).exact

    def test_zero_parameters_identity(self, cusp):
        span = ModuleSpan(cusp.target_vars, 2, [(P("2X1", cusp.target_vars), P("3X2", cusp.target_vars))])
        unf = Unfolding(cusp, (), cusp)
        assert restrict_lift_to_base(unf, span) is span

    def test_a2_base_lift(self, g_a2):
        span = lift_module(g_a2.total, 6)
        proj = projectable_filter(span, 1, 6)
        base = restrict_lift_to_base(g_a2, proj)
        # Lift(y^3) = Derlog(Y = 0)-ish: contains Y d/dY
        v = g_a2.base.target_vars
        assert membership_witness((P("3Y", v),), base, 5).exact


class TestRestrictionSpectrum:
    def test_projection_spectrum_is_submultiset(self, cusp_opsu):
        # projectable field: the base projection's eigenvalues sit inside
        # the unfolding field's (block-triangular 1-jet)
        v = cusp_opsu.total.target_vars
        eta = VectorField.from_strings(v, ["2X1", "3X2", "2L"])
        full = [r for r, k in spectrum(eta).roots for _ in range(k)]
        base_v = cusp_opsu.base.target_vars
        eta0 = VectorField(
            base_v,
            tuple(
                eta.components[j].compose(
                    {"X1": Polynomial.var(base_v, "X1"), "X2": Polynomial.var(base_v, "X2"),
                     "L": Polynomial.zero(base_v)}
                )
                for j in range(2)
            ),
        )
        sub = [r for r, k in spectrum(eta0).roots for _ in range(k)]
        rest = list(full)
        for r in sub:
            assert r in rest
            rest.remove(r)


class TestEulerTangency:
    def test_euler_field_tangent_to_corpus_discriminants(self, cusp, g_a2):
        from germlab import euler_pair, wh_detect

        for germ in (cusp,):
            d = discriminant_equation(germ)
            pair = euler_pair(germ, wh_detect(germ))
            action = pair.eta.apply_to(d.H)
            if not action.is_zero():
                exact_div(action, d.H)
        # the A_2 family unfolding carries weights (2; 3, 2)
        d = discriminant_equation(g_a2.total)
        v = g_a2.total.target_vars
        eta = VectorField.from_strings(v, ["3Y", "2L"])
        exact_div(eta.apply_to(d.H), d.H)


class TestStratum:
    def test_an_minimal(self):
        F = an_unfolding(2)
        assert analytic_stratum_dim(lift_module(F, 2)) == 0

    def test_prism_positive(self):
        f = MapGerm.from_strings(["x", "y", "l"], ["X", "Y", "L"], ["x", "y^3 + l*y", "l"])
        assert analytic_stratum_dim(lift_module(f, 2)) >= 1

    def test_identity_full(self):
        f = MapGerm.from_strings(["y"], ["Y"], ["y"])
        assert analytic_stratum_dim(lift_module(f, 2)) == 1


class TestOneJet:
    def test_diagonal(self):
        vf = VectorField.from_strings(("X1", "X2", "L"), ["2X1", "3X2", "2L"])
        assert one_jet(vf) == RationalMatrix([[2, 0, 0], [0, 3, 0], [0, 0, 2]])

    def test_a2_second_generator(self):
        vf = VectorField.from_strings(("Y", "L"), ["-2/3*L^2", "3Y"])
        assert one_jet(vf) == RationalMatrix([[0, 0], [3, 0]])

    def test_zero_field(self):
        vf = VectorField(("X",), (Polynomial.zero(("X",)),))
        assert one_jet(vf) == RationalMatrix([[0]])

    def test_nonvanishing_rejected(self):
        vf = VectorField.from_strings(("X",), ["1 + X"])
        with pytest.raises(ValueError):
            one_jet(vf)


class TestTransport:
    def test_identity(self):
        v = ("X", "Y")
        eta = VectorField.from_strings(v, ["X^2 - Y", "X*Y"])
        psi = (P("X", v), P("Y", v))
        got = transport(eta, psi, 5)
        assert got.components == eta.components

    def test_parameter_shear(self):
        v = ("X", "Y", "L")
        q = P("X^2", v)
        psi_inv = (P("X", v), P("Y", v), P("L", v) - q)
        e1 = VectorField.from_strings(v, ["1", "0", "0"])
        got = transport(e1, psi_inv, 6)
        assert [str(c) for c in got.components] == ["1", "0", "-2*X"]

    def test_linear_conjugation_preserves_spectrum(self):
        v = ("X", "Y")
        eta = VectorField.from_strings(v, ["2X + Y^2", "3Y + X^3"])
        rng = random.Random(13)
        base = spectrum(eta).roots
        for _ in range(10):
            while True:
                a, b, c, d = (rng.randint(-3, 3) for _ in range(4))
                if a * d - b * c != 0:
                    break
            psi = (
                P(f"{a}X + {b}Y" if b >= 0 else f"{a}X - {abs(b)}Y", v),
                P(f"{c}X + {d}Y" if d >= 0 else f"{c}X - {abs(d)}Y", v),
            )
            assert spectrum(transport(eta, psi, 5)).roots == base

    def test_functorial_composition(self):
        v = ("X", "Y")
        eta = VectorField.from_strings(v, ["X + X*Y", "Y - X^2"])
        psi1 = (P("X + Y^2", v), P("Y", v))
        psi2 = (P("X", v), P("Y + X^2", v))
        deg = 4
        comp = tuple(p.compose(dict(zip(v, psi1)), trunc=deg) for p in psi2)
        once = transport(eta, comp, deg)
        twice = transport(transport(eta, psi1, deg), psi2, deg)
        for a, b in zip(once.components, twice.components):
            assert a.truncate(deg) == b.truncate(deg)
