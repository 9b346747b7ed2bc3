"""Level-m binomials: three flavours and why one of them is a fraction.

Run:  python3 demos/01_binomials.py
"""
from logjet import Params, binom, gamma, mbinom, mod_p, qbinom

P = Params(2, 1)
print("p = 2, m = 1")
print(f"{'k':>3} {'k`':>3} {'binom':>6} {'mbinom':>7} {'qbinom':>7} {'mod 2':>6}")
for k, kp in [(2, 1), (3, 2), (4, 2), (6, 3), (8, 4)]:
    q = qbinom(P, k, kp)
    print(f"{k:>3} {kp:>3} {binom(k, kp):>6} {mbinom(P, k, kp):>7} {str(q):>7} {mod_p(q, 2):>6}")

# {6 choose 3} = 10/3 is not an integer, but 3 is invertible mod 2, which is
# all the complex ever needs.
print()
print("Residues of {p^m q + k choose t} for p = 3, m = 1 (q = 2):")
P3 = Params(3, 1)
for k in range(3):
    row = [mod_p(qbinom(P3, 3 * 2 + k, t), 3) for t in range(4)]
    print(f"  k={k}: t=0..3 -> {row}")
print("(zero past the diagonal t > k except at t = p^m, where it is 1)")

print()
print("Structure constants Gamma_{a,b,c} for p = 2, a + b + c = 3:")
for a in range(4):
    for b in range(4 - a):
        c = 3 - a - b
        if a + c <= 2:
            print(f"  Gamma({a},{b},{c}) = {gamma(P, (a,), (b,), (c,))}")
