"""Jet spans, certified codimensions, membership and syzygies."""

from fractions import Fraction

import pytest

from germlab.jets import (
    ModuleSpan,
    MultiplierRing,
    NotFiniteUpTo,
    NotInSpanAt,
    Witness,
    finite_codim_certified,
    jet_span,
    membership_witness,
    syzygy_solve,
)
from germlab.poly import Polynomial, parse_polynomial

from oracle import jet_quotient, opoly


def P(text, vars):
    return parse_polynomial(text, vars)


X = ("x",)
XY = ("x", "y")


def span1(vars, *gens, mult=None):
    return ModuleSpan(vars, 1, [(g,) for g in gens], mult or MultiplierRing.FULL)


class TestJetSpan:
    def test_principal_ideal(self):
        b = jet_span(span1(X, P("x^2", X)), 3)
        assert b.pivot_coordinates() == [(0, (2,)), (0, (3,))]

    def test_tre_of_x_cubed(self):
        b = jet_span(span1(X, P("3x^2", X)), 4)
        assert b.pivot_coordinates() == [(0, (2,)), (0, (3,)), (0, (4,))]

    def test_via_map_multipliers(self):
        ring = MultiplierRing("via_map", (P("x^2", X),))
        b = jet_span(span1(X, P("1", X), mult=ring), 4)
        assert b.pivot_coordinates() == [(0, (0,)), (0, (2,)), (0, (4,))]

    def test_monotone_in_degree(self):
        # the order-3 span equals the order-5 span truncated to degree <= 3
        from oracle import dense_rref

        span = span1(XY, P("x^2 + y^3", XY), P("x*y", XY))
        small = jet_span(span, 3)
        big = jet_span(span, 5)
        small_coords = small.coordinates
        pos = {cm: i for i, cm in enumerate(small_coords)}
        projected = []
        for row in big.rows_as_fractions():
            vec = [Fraction(0)] * len(small_coords)
            nz = False
            for cm, val in row.items():
                if cm in pos:
                    vec[pos[cm]] = val
                    nz = True
            if nz:
                projected.append(vec)
        _, proj_pivots = dense_rref(projected)
        assert [small_coords[i] for i in proj_pivots] == small.pivot_coordinates()


class TestFiniteCodim:
    def test_mu_x_cubed(self):
        res = finite_codim_certified(span1(X, P("3x^2", X)))
        assert res.codim == 2
        assert res.cobasis == [(0, (0,)), (0, (1,))]

    def test_tau_x_cubed(self):
        res = finite_codim_certified([span1(X, P("3x^2", X)), span1(X, P("x^3", X))])
        assert res.codim == 2

    def test_node(self):
        res = finite_codim_certified(span1(XY, P("y", XY), P("x", XY)))
        assert res.codim == 1
        assert res.cobasis == [(0, (0, 0))]

    @pytest.mark.parametrize("k", range(2, 9))
    def test_mu_of_cusp_family(self, k):
        g = P(f"x^{k + 1}", X)
        jac = span1(X, g.diff("x"))
        assert finite_codim_certified(jac).codim == k
        assert finite_codim_certified([jac, span1(X, g)]).codim == k

    def test_not_finite(self):
        res = finite_codim_certified(span1(XY, P("x", XY)), 6)
        assert isinstance(res, NotFiniteUpTo) and res.degree == 6

    def test_independent_of_degree(self):
        span = span1(XY, P("x^2", XY), P("y^3", XY), P("x*y", XY))
        a = finite_codim_certified(span, 8)
        b = finite_codim_certified(span, 12)
        assert a.codim == b.codim
        rank, codim, nonpiv = jet_quotient(
            [(opoly({(2, 0): 1}),), (opoly({(0, 3): 1}),), (opoly({(1, 1): 1}),)], 2, 1, 6
        )
        assert codim == a.codim
        assert sorted(nonpiv) == sorted((c, m) for c, m in a.cobasis)


class TestMembership:
    def test_euler_relation(self):
        w = membership_witness((P("x^2", X),), span1(X, P("2x", X)), 4)
        assert isinstance(w, Witness) and w.exact
        assert w.multipliers[0] == P("x/2", X)

    def test_mixed_weight_euler(self):
        v = ("x", "y", "z")
        g = P("x*y^3*z^3 + y^5 + z^5", v)
        span = ModuleSpan(v, 1, [(g.diff("x"),), (g.diff("y"),), (g.diff("z"),)], MultiplierRing.FULL)
        w = membership_witness((g,), span, 3)
        assert isinstance(w, Witness) and w.exact
        # re-expansion really is the identity
        total = Polynomial.zero(v)
        for a, gen in zip(w.multipliers, span.generators):
            total = total + a * gen[0]
        assert total == g

    @pytest.mark.parametrize("n", [2, 5, 9])
    def test_units_never_in_maximal_ideal(self, n):
        r = membership_witness((P("1", X),), span1(X, P("x", X)), n)
        assert isinstance(r, NotInSpanAt) and r.degree == n
        assert r.remainder[0] == P("1", X)


class TestSyzygy:
    def test_cusp_derlog(self):
        v = ("X1", "X2")
        h = P("X2^2 - X1^3", v)
        span = syzygy_solve([h.diff("X1"), h.diff("X2"), -h], [2, 2, 1], 2, drop_last=1)
        expect_a = (P("2X1", v), P("3X2", v))
        expect_b = (P("2X2", v), P("3X1^2", v))
        for target in (expect_a, expect_b):
            w = membership_witness(target, span, 4)
            assert isinstance(w, Witness) and w.exact
        # every generator satisfies eta(H) in <H> by direct expansion
        for g in span.generators:
            action = g[0] * h.diff("X1") + g[1] * h.diff("X2")
            from germlab.resultant import exact_div

            if not action.is_zero():
                exact_div(action, h)

    def test_a2_derlog_known_generators(self):
        v = ("Y", "L")
        h = P("4L^3 + 27Y^2", v)
        span = syzygy_solve([h.diff("Y"), h.diff("L"), -h], [3, 3, 2], 3, drop_last=1)
        first = (P("3Y", v), P("2L", v))
        second = (P("-2/3*L^2", v), P("3Y", v))
        for target in (first, second):
            w = membership_witness(target, span, 5)
            assert isinstance(w, Witness) and w.exact

    def test_smooth_hypersurface(self):
        v = ("X", "Y")
        h = P("X", v)
        span = syzygy_solve([h.diff("X"), h.diff("Y"), -h], [2, 2, 2], 2, drop_last=1)
        w = membership_witness((P("X", v), Polynomial.zero(v)), span, 3)
        assert isinstance(w, Witness) and w.exact
        w2 = membership_witness((Polynomial.zero(v), P("1", v)), span, 3)
        assert isinstance(w2, Witness) and w2.exact
        # d/dX itself is not tangent to {X = 0}
        r = membership_witness((P("1", v), Polynomial.zero(v)), span, 3)
        assert isinstance(r, NotInSpanAt)

    def test_resubstitution_vanishes(self):
        v = ("Y", "L")
        h = P("4L^3 + 27Y^2", v)
        span = syzygy_solve([h.diff("Y"), h.diff("L"), -h], [4, 4, 3], 4, drop_last=1)
        from germlab.resultant import exact_div

        for g in span.generators:
            action = g[0] * h.diff("Y") + g[1] * h.diff("L")
            if not action.is_zero():
                exact_div(action, h)  # raises unless exactly divisible
