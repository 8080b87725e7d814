"""Walk through H*(K^A(2,4)) for A = Z_p[sqrt p] at p = 7.

Run:  python3 demos/formal_height_two.py
"""
from stabcoh.charts import shipped_chart, verify_chart
from stabcoh.cohomology import class_filtration, is_coboundary, poincare_polynomial, reduce_to_basis
from stabcoh.dga import dga_presentation, differential, standard_definitions
from stabcoh.lie import LieParams

P = 7

params = LieParams.formal_module(P, 2, 1, 2, 4)
dga = dga_presentation(params)
defs = standard_definitions(dga)
x = lambda text: dga.parse(text, defs)  # noqa: E731

print(params.label(), "with", dga.rank, "exterior generators")
print("Poincare polynomial:", poincare_polynomial(dga))

# low-degree differentials
for name in ("h30", "eta4"):
    print(f"d({name}) =", differential(dga, x(name)))

# e40 dies once eta4 is present, but is a genuine class one truncation lower
k3 = dga_presentation(LieParams.formal_module(P, 2, 1, 2, 3))
print("e40 a coboundary in m=4:", is_coboundary(dga, x("e40")))
print("e40 Ravenel filtration in m=3:", class_filtration(k3, k3.parse("e40", standard_definitions(k3))))

# a product relation
lhs = x("h10 (h10 eta4 - eta2 h30)")
print("h10 (h10 eta4 - eta2 h30) coordinates:", reduce_to_basis(dga, lhs))
print("h10 eta2 h30 coordinates:         ", reduce_to_basis(dga, x("h10 eta2 h30")))

# chart verification: the verbatim transcription and the corrected one
for name in ("K_2_4", "K_2_4_corrected"):
    report = verify_chart(shipped_chart(name), P)
    print()
    print(report.summary())
    for r in report.failures():
        print("   ", r.line(report.chart))
