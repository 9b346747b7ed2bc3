"""Contracting a polynomial onto its constant term, one coordinate at a time.

Run:  python3 demos/04_poincare.py
"""
from logjet import Chain, DeltaSymbol, Params, differential, pi, poincare_contract
from logjet.homotopy import h_coordinate

P = Params(3, 1, 2)
v = Chain(3, 0, {DeltaSymbol(I, ()): c for I, c in [((0, 0), 2), ((1, 0), 1), ((2, 3), 1), ((0, 4), 2)]})
print(f"v = {v.render()}")

# each stage v - h_i d v agrees with the projector pi_i
w = v
for i in (2, 1):
    w = w - h_coordinate(P, i, differential(P, w))
    print(f"after coordinate {i}: {w.render()}")
assert w == pi(P, 1, pi(P, 2, v))
assert poincare_contract(P, v) == w
print("constant part recovered.")
