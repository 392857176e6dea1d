"""Benchmark the compiled sparse-row kernel against the pure-Python twin.

Builds representative exact linear systems from the package's own
workloads (jacobian-ideal and tangent-space jet spans), times reduced
echelon construction with each kernel, and checks the outputs are
bit-identical (the reduced form is canonical, so they must be).

Run:  python benchmarks/bench_kernel.py
"""

import os
import sys
import time
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))


def span_rows(span, n):
    from germlab.jets import jet_coordinates, multiplier_polys
    from germlab.kernel import row_from_fractions

    coords = jet_coordinates(len(span.ambient_vars), span.ambient_rank, n)
    index = {cm: i for i, cm in enumerate(coords)}
    rows = []
    for g in span.generators:
        order = min((int(c.order()) for c in g if not c.is_zero()), default=0)
        for mult in multiplier_polys(span, n, order):
            row = {}
            for c, comp in enumerate(g):
                prod = mult * comp
                for m, v in prod.terms.items():
                    if sum(m) <= n:
                        col = index[(c, m)]
                        row[col] = row.get(col, Fraction(0)) + v
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row_from_fractions(row))
    return rows


def echelonize(rows, reduce_row):
    basis = {}
    for cols, vals in rows:
        c, v = reduce_row(cols, vals, basis)
        if c:
            basis[c[0]] = (c, v)
    for p in sorted(basis, reverse=True):
        c, v = basis.pop(p)
        basis[p] = reduce_row(c, v, basis)
    return basis


def main():
    from germlab import _kernel_py
    from germlab.germs import MapGerm, tke_span
    from germlab.jets import ModuleSpan, MultiplierRing
    from germlab.poly import parse_polynomial

    try:
        from germlab import _kernel_c
    except ImportError:
        _kernel_c = None
        print("compiled kernel not built; run `python setup.py build_ext --inplace` first")

    v3 = ("x", "y", "z")
    g = parse_polynomial("x^3 + y^4 + z^5 + x*y*z", v3)
    jac = ModuleSpan(v3, 1, [(g.diff(w),) for w in v3], MultiplierRing.FULL)
    h2 = MapGerm.from_strings(["x", "y"], ["X1", "X2", "X3"], ["x", "y^3", "y^5 + x*y"])
    # the A_e tangent space of the multiplicity-4 germ with codimension 16,
    # reduced to its essential component: the heaviest span in the test suite
    from germlab.germs import _ae_spans

    f47 = MapGerm.from_strings(
        ["x", "y", "z", "w"], ["X", "Y", "Z", "W"],
        ["x", "y", "z", "w^4 + x*w + (x*y^3*z^3 + y^5 + z^5)*w^2"],
    )
    ae_rows = []
    for s in _ae_spans(f47):
        ae_rows.extend(span_rows(s, 11))
    workloads = [
        ("jacobian ideal jets, 3 vars, N=10", span_rows(jac, 10)),
        ("jacobian ideal jets, 3 vars, N=13", span_rows(jac, 13)),
        ("T K_e jets of the H2 germ, N=9", span_rows(tke_span(h2), 9)),
        ("A_e tangent jets, codim-16 germ, N=11", ae_rows),
    ]

    impls = [("python", _kernel_py)]
    if _kernel_c is not None:
        impls.append(("cython", _kernel_c))

    header = f"{'workload':<38}{'rows':>7}" + "".join(f"{name:>12}" for name, _ in impls)
    if len(impls) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for title, rows in workloads:
        times, results = [], []
        for _, impl in impls:
            start = time.perf_counter()
            basis = echelonize(rows, impl.reduce_row)
            times.append(time.perf_counter() - start)
            results.append(basis)
        assert all(r == results[0] for r in results), "kernels disagree"
        line = f"{title:<38}{len(rows):>7}" + "".join(f"{t:>11.3f}s" for t in times)
        if len(times) > 1:
            line += f"{times[0] / times[1]:>9.2f}x"
        print(line)
    print("reduced forms bit-identical across kernels: yes")


if __name__ == "__main__":
    main()
