from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from germlab.linalg import RationalMatrix, char_poly_spectrum, linear_solve_exact, poly_det
from germlab.poly import parse_polynomial

from oracle import perm_det


def F(x):
    return Fraction(x)


class TestLinearSolveExact:
    def test_identity(self):
        r = linear_solve_exact(RationalMatrix([[1, 0], [0, 1]]), [F(1), F(2)])
        assert r.solution == [F(1), F(2)]
        assert r.nullspace == []

    def test_one_equation(self):
        r = linear_solve_exact(RationalMatrix([[1, 1]]), [F(0)])
        assert r.consistent
        assert len(r.nullspace) == 1
        a, b = r.nullspace[0]
        assert a + b == 0 and (a, b) != (0, 0)

    def test_contradiction_certificate(self):
        a = RationalMatrix([[1], [1]])
        r = linear_solve_exact(a, [F(0), F(1)])
        assert not r.consistent
        cert = r.certificate
        assert [sum(cert[i] * a.entries[i][j] for i in range(2)) for j in range(1)] == [F(0)]
        assert cert[0] * F(0) + cert[1] * F(1) != 0


class TestSpectrum:
    def test_diag_2_3(self):
        sp = char_poly_spectrum(RationalMatrix([[2, 0], [0, 3]]))
        assert sp.roots == [(F(2), 1), (F(3), 1)]
        assert sp.all_rational and sp.all_nonzero and sp.all_positive

    def test_zero_matrix(self):
        sp = char_poly_spectrum(RationalMatrix([[0, 0], [0, 0]]))
        assert sp.roots == [(F(0), 2)]
        assert not sp.all_nonzero

    def test_rotation(self):
        sp = char_poly_spectrum(RationalMatrix([[0, 1], [-1, 0]]))
        assert sp.roots == []
        assert str(sp.residual) in ("1 + t^2", "t^2 + 1")
        assert sp.all_nonzero and not sp.all_rational
        assert sp.all_positive is None

    def test_rational_eigenvalues(self):
        sp = char_poly_spectrum(RationalMatrix([[Fraction(1, 2), 0], [1, Fraction(-3, 4)]]))
        assert sp.roots == [(Fraction(-3, 4), 1), (Fraction(1, 2), 1)]

    def test_nonsquare_rejected(self):
        with pytest.raises(ValueError):
            char_poly_spectrum(RationalMatrix([[1, 2]]))


entries = st.integers(-4, 4)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(entries, min_size=3, max_size=3), min_size=3, max_size=3))
def test_root_product_matches_det(rows):
    m = RationalMatrix(rows)
    sp = char_poly_spectrum(m)
    det = m.det()
    prod = F(1)
    for r, k in sp.roots:
        prod *= r**k
    residual_const = sp.residual.coeff((0,))
    deg = int(sp.residual.degree()) if not sp.residual.is_zero() else 0
    # det(M) = (-1)^n charpoly(0); contributions split between roots and residual
    total = prod * residual_const * F(-1) ** deg
    assert abs(total) == abs(det)
    assert sp.all_nonzero == (det != 0)


def test_poly_det_matches_permanent_oracle():
    v = ("a", "b")
    m = [
        [parse_polynomial("a + b", v), parse_polynomial("a^2", v)],
        [parse_polynomial("b", v), parse_polynomial("a - 2b", v)],
    ]
    got = poly_det(m)
    want = perm_det([[dict(p.terms) for p in row] for row in m])
    assert dict(got.terms) == {k: v for k, v in want.items()}


def test_inverse_roundtrip():
    m = RationalMatrix([[2, 1], [1, 1]])
    inv = m.inverse()
    assert m * inv == RationalMatrix.identity(2)
    assert RationalMatrix([[1, 1], [1, 1]]).inverse() is None
