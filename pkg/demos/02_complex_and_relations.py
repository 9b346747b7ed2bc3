"""Differentials, relations and the quotient in low degree.

Run:  python3 demos/02_complex_and_relations.py
"""
from logjet import Chain, Params, RelationSpec, delta, diff0, diff1_slot, differential, quotient_zero, relation_chain
from logjet.jet_complex import quotient_reduce

P = Params(2, 1)
for i in range(1, 5):
    print(f"d(eta^{i}) = {diff0(P, (i,)).render()}")
print(f"d((dlog t)^1) = {diff1_slot(P, (1,)).render()}")
print(f"d((dlog t)^2) = {diff1_slot(P, (2,)).render()}")

print()
# Products of slots that overflow p^m are not simply dropped: relations
# tie the surviving pieces together.
P3 = Params(3, 1)
rel = relation_chain(P3, RelationSpec((0,), 1, (4,)))
print(f"p = 3 relation from J = 4:  {rel.render()}  (= 0)")
x = Chain.from_symbol(3, delta((0,), (1,), (3,)))
nf, _ = quotient_reduce(P3, x)
print(f"normal form of {x.render()}:  {nf.render()}")

print()
print("d o d vanishes only in the quotient:")
x = Chain.from_symbol(2, delta((3,), (2,)))
dd = differential(P, differential(P, x))
print(f"  d(d({x.render()})) = {dd.render()}")
print(f"  zero in the quotient: {quotient_zero(P, dd)}")
