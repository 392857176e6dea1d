"""Kernel twins and the exact solver against the dense oracle."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from germlab import _kernel_py
from germlab.kernel import KERNEL, Echelon, LinearSolve, row_from_fractions

from oracle import dense_rref

try:
    from germlab import _kernel_c
except ImportError:
    _kernel_c = None


def to_sparse(row):
    return row_from_fractions({i: Fraction(v) for i, v in enumerate(row) if v})


def test_selected_kernel_reported():
    assert KERNEL in ("cython", "python")


matrices = st.lists(
    st.lists(st.integers(-6, 6), min_size=4, max_size=4),
    min_size=1,
    max_size=6,
)


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_echelon_matches_dense_rref(rows):
    ech = Echelon()
    for r in rows:
        if any(r):
            cols, vals = to_sparse(r)
            ech.insert(cols, vals)
    want, pivots = dense_rref(rows)
    assert sorted(ech.rows) == pivots
    got = ech.rational_rows()
    for red_row, pivot in zip(want, pivots):
        rational = got[pivot]
        assert [rational.get(i, Fraction(0)) for i in range(4)] == red_row


@settings(max_examples=60, deadline=None)
@given(matrices, st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_membership_reduction(rows, probe):
    ech = Echelon()
    for r in rows:
        if any(r):
            cols, vals = to_sparse(r)
            ech.insert(cols, vals)
    # any row of the span reduces to zero
    if rows and any(rows[0]):
        c, v = to_sparse(rows[0])
        assert ech.contains(c, v)
    # reduction is idempotent
    if any(probe):
        c, v = to_sparse(probe)
        rc, rv = ech.reduce(c, v)
        if rc:
            rc2, rv2 = ech.reduce(list(rc), list(rv))
            assert (rc2, rv2) == (rc, rv)


def test_twins_agree_if_compiled():
    if _kernel_c is None:
        return
    rows = [[3, 0, -2, 5, 0], [0, 7, 1, 0, -4], [6, 7, -3, 10, -4], [1, 1, 1, 1, 1]]
    for impl in (_kernel_py, _kernel_c):
        assert impl.normalize_row([0, 2], [4, -6]) == ([0, 2], [2, -3])
    for r in rows:
        c, v = to_sparse(r)
        a = _kernel_py.axpy(3, list(c), list(v), -2, [0, 4], [1, 1])
        b = _kernel_c.axpy(3, list(c), list(v), -2, [0, 4], [1, 1])
        assert list(a[0]) == list(b[0]) and a[1] == b[1]
    basis = {}
    c0, v0 = to_sparse(rows[0])
    basis[c0[0]] = (c0, v0)
    for r in rows[1:]:
        c, v = to_sparse(r)
        pa = _kernel_py.reduce_row(c, v, basis)
        pb = _kernel_c.reduce_row(c, v, basis)
        assert list(pa[0]) == list(pb[0]) and pa[1] == pb[1]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=5, max_size=5), min_size=1, max_size=7))
def test_twin_echelons_identical(rows):
    if _kernel_c is None:
        return

    def build(impl):
        basis = {}
        for r in rows:
            if not any(r):
                continue
            c, v = to_sparse(r)
            rc, rv = impl.reduce_row(c, v, basis)
            if len(rc):
                basis[rc[0]] = (rc, rv)
        for p in sorted(basis, reverse=True):
            c, v = basis.pop(p)
            basis[p] = impl.reduce_row(c, v, basis)
        return {p: (list(c), list(v)) for p, (c, v) in basis.items()}

    assert build(_kernel_py) == build(_kernel_c)


@settings(max_examples=40, deadline=None)
@given(
    st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-5, 5), max_size=4),
    st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-5, 5), max_size=4),
)
def test_twin_term_mul_identical(a, b):
    if _kernel_c is None:
        return
    fa = {k: Fraction(v, 3) for k, v in a.items() if v}
    fb = {k: Fraction(v, 2) for k, v in b.items() if v}
    assert _kernel_py.term_mul(fa, fb) == _kernel_c.term_mul(fa, fb)


class TestLinearSolve:
    def test_identity(self):
        sv = LinearSolve(2)
        sv.add_equation({0: Fraction(1)}, Fraction(1))
        sv.add_equation({1: Fraction(1)}, Fraction(2))
        assert sv.solution() == {0: Fraction(1), 1: Fraction(2)}
        assert sv.nullspace() == []

    def test_underdetermined(self):
        sv = LinearSolve(2)
        sv.add_equation({0: Fraction(1), 1: Fraction(1)}, Fraction(0))
        ns = sv.nullspace()
        assert len(ns) == 1
        v = ns[0]
        assert v.get(0, Fraction(0)) + v.get(1, Fraction(0)) == 0

    def test_inconsistent_tagged(self):
        sv = LinearSolve(1)
        assert sv.add_equation({0: Fraction(1)}, Fraction(0), tag=1)
        assert not sv.add_equation({0: Fraction(1)}, Fraction(1), tag=3)
        assert sv.inconsistent_marker == 3
        assert sv.solution() is None
