"""Resultants, gcd and squarefree parts, with hand/permutation oracles."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from germlab.poly import Polynomial, parse_polynomial
from germlab.resultant import exact_div, poly_gcd, squarefree_part, sylvester_matrix, sylvester_resultant

from oracle import perm_det


def P(text, vars):
    return parse_polynomial(text, vars)


def up_to_constant(a, b):
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    am, ac = a.leading()
    bm, bc = b.leading()
    if am != bm:
        return False
    return a * (1 / ac) == b * (1 / bc)


class TestSylvester:
    def test_cusp_resultant_vs_permutation_oracle(self):
        v = ("X1", "X2", "y")
        p = P("y^2 - X1", v)
        q = P("y^3 - X2", v)
        got = sylvester_resultant(p, q, "y")
        mat = sylvester_matrix(p, q, "y")
        want = perm_det([[dict(e.terms) for e in row] for row in mat])
        want_poly = Polynomial(v, want)
        assert up_to_constant(got, want_poly)
        assert up_to_constant(got, P("X2^2 - X1^3", v))

    def test_linear_resultant(self):
        v = ("a", "b", "y")
        assert up_to_constant(sylvester_resultant(P("y - a", v), P("y - b", v), "y"), P("a - b", v))

    def test_cubic_discriminant(self):
        v = ("Y", "L", "y")
        got = sylvester_resultant(P("y^3 + L*y - Y", v), P("3y^2 + L", v), "y")
        assert up_to_constant(got, P("4L^3 + 27Y^2", v))

    def test_degree_zero_rejected(self):
        v = ("a", "y")
        with pytest.raises(ValueError):
            sylvester_resultant(P("y - a", v), P("a", v), "y")

    def test_common_factor_means_zero(self):
        v = ("a", "y")
        p = P("(y - a)*(y + 1)", v)
        q = P("(y - a)*(y + 2)", v)
        assert sylvester_resultant(p, q, "y").is_zero()

    def test_planted_common_factor_property(self):
        # resultant vanishes iff a common positive-degree factor exists
        v = ("a", "y")
        for extra in ("y + 1", "y^2 + a", "a*y + 1"):
            shared = P("y^2 + a*y + 1", v)
            r = sylvester_resultant(shared * P(extra, v), shared * P("y - 3", v), "y")
            assert r.is_zero()
        r = sylvester_resultant(P("y - a", v), P("y + a + 1", v), "y")
        assert not r.is_zero()


class TestSquarefree:
    def test_square_removed(self):
        v = ("X1", "X2")
        p = P("(X2^2 - X1^3)^2", v)
        assert up_to_constant(squarefree_part(p), P("X2^2 - X1^3", v))

    def test_idempotent(self):
        v = ("X1", "X2")
        p = P("X2^2 - X1^3 + X1*X2", v)
        s = squarefree_part(p)
        assert up_to_constant(squarefree_part(s), s)

    def test_monomial_radical(self):
        v = ("X1", "X2")
        assert up_to_constant(squarefree_part(P("X1^2*X2^3", v)), P("X1*X2", v))

    def test_divides_input(self):
        v = ("x", "y")
        p = P("(x + y)^3*(x - y)", v)
        s = squarefree_part(p)
        assert up_to_constant(s, P("(x + y)*(x - y)", v))
        q = exact_div(p.primitive(), s)
        assert not q.is_zero()

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            squarefree_part(Polynomial.zero(("x",)))


class TestGcd:
    def test_gcd_divides_both(self):
        v = ("x", "y")
        a = P("(x + 2y)*(x^2 + y^3)", v)
        b = P("(x + 2y)*(x - y)^2", v)
        g = poly_gcd(a, b)
        assert up_to_constant(g, P("x + 2y", v))
        exact_div(a, g)
        exact_div(b, g)

    def test_coprime(self):
        v = ("x", "y")
        assert poly_gcd(P("x + 1", v), P("y", v)).is_constant()


small = st.integers(-3, 3)


@st.composite
def poly_pairs_with_common_factor(draw):
    v = ("x", "y")
    def rand_poly():
        terms = draw(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), small, min_size=1, max_size=3))
        return Polynomial(v, {k: Fraction(c) for k, c in terms.items()})
    shared = rand_poly()
    a, b = rand_poly(), rand_poly()
    return shared, a, b


@settings(max_examples=30, deadline=None)
@given(poly_pairs_with_common_factor())
def test_gcd_contains_planted_factor(data):
    shared, a, b = data
    if shared.is_zero() or a.is_zero() or b.is_zero():
        return
    g = poly_gcd(shared * a, shared * b)
    # the planted factor divides the gcd, and the gcd divides both inputs
    assert up_to_constant(poly_gcd(g, shared), shared.primitive())
    exact_div((shared * a).primitive(), g)
    exact_div((shared * b).primitive(), g)
