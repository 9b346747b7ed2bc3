"""The homotopy identity h d + d h = id worked on one symbol.

Run:  python3 demos/03_homotopy_anchor.py
"""
from logjet import Chain, Params, delta, differential, h, h1, homotopy_check

P = Params(2, 1)
x = Chain.from_symbol(2, delta((2,), (1,)))
print(f"x        = {x.render()}")
print(f"h(x)     = {h1(P, delta((2,), (1,))).render()}")

dx = differential(P, x)
print(f"d(x)     = {dx.render()}")
hd = h(P, dx)
dh = differential(P, h(P, x))
print(f"h(d(x))  = {hd.render()}")
print(f"d(h(x))  = {dh.render()}")
print(f"sum      = {(hd + dh).render()}")
assert hd + dh == x

print()
print("Same check in degree 2 (equality now only holds modulo relations):")
for sym in [delta((2,), (1,), (1,)), delta((2,), (2,), (1,)), delta((1,), (2,), (2,))]:
    res = homotopy_check(P, sym)
    print(f"  {str(sym):<20} pass={res.passed}  rows used={res.relations_used}")
