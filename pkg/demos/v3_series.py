"""Regrade chart 4 into topological degrees and compare the V(3) series windows.

Run:  python3 demos/v3_series.py
"""
from stabcoh.charts import shipped_chart
from stabcoh.regrade import compare_topological_table, compare_v3_series

P = 7
fx = shipped_chart("K_2_4")
print("name".ljust(24), "stated", "computed")
for name, want, got, ok in compare_topological_table(fx, P):
    print(name.ljust(24), want, got, "" if ok else "MISMATCH")

rep = compare_v3_series(fx, P, (-30, 100))
print()
print("first factor terms:", rep["first_factor_terms"], "difference:", rep["first_factor_difference"])
for choice, block in rep["periods"].items():
    print(f"period {block['period']} ({choice}): match={block['match']} difference={block['difference']}")
