"""Check the shipped cobar cochains and show where the transcribed h10 eta2 lift breaks.

Run:  python3 demos/cobar_cocycles.py
"""
from stabcoh.cobar import SHIPPED_COCYCLES, HopfSpec, SparsePoly, TensorCochain, cobar_d, shipped_cocycle, verify_cocycle

for p in (7, 11):
    spec = HopfSpec(p)
    t2 = TensorCochain.from_poly(SparsePoly.var(spec, 2))
    print(f"p={p}: d(t2) = {cobar_d(spec, t2)}")
    for name in SHIPPED_COCYCLES:
        print("   ", verify_cocycle(shipped_cocycle(name), p).line())
