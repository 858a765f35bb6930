"""Hermite-Hadamard type chains for the (n - alpha)-convex class.

The chain 2^(p-1) f((a+b)/2) <= mean of f <= (f(a)+f(b))/(p+1) is
evaluated for a few functions and exponents. At p = 1 it is the classical
inequality. The Jensen-type display that follows it is also evaluated,
exactly as printed, and fails for ordinary convex functions.
"""

from fracconvex.claims import evaluate_claim

functions = ["x", "x^2", "exp(x)", "x^2*ln(x)"]

print("HH chain on [1, 2]")
for f in functions:
    for p in (1.0, 0.5, 0.1, -0.5):
        r = evaluate_claim("HH-THM1", {"a": 1.0, "b": 2.0, "p": p}, f)
        s = {v.name: v.re for v in r.sides}
        print(f"  {f:>10} p={p:>5}: {s['left']:9.5f} <= {s['mean']:9.5f} <= {s['right']:9.5f}"
              f"  -> {r.verdict.kind.value}")

print("\nthe choice n = 1/k, alpha = (s-1)/s")
for k, s in [(1, 1), (2, 2), (1, 3), (4, 4)]:
    r = evaluate_claim("COR1", {"k": k, "s": s, "a": 1.0, "b": 2.0}, "x^2")
    print(f"  k={k} s={s}: {r.verdict.kind.value}, margin {r.verdict.min_margin:+.5f}")

print("\nJensen-type display as printed")
for f in functions:
    r = evaluate_claim("JENSEN-TYPE", {"a": 1.0, "b": 2.0, "p": 1.0}, f)
    s = {v.name: v.re for v in r.sides}
    print(f"  {f:>10}: lhs {s['lhs']:.5f} vs rhs {s['rhs']:.5f} -> {r.verdict.kind.value}")

# The complex factor 1 - (-1)^(p+1) on the principal branch
print("\nmidpoint bound with a complex factor")
for p in (1.0, 0.5, 0.25):
    r = evaluate_claim("THM2", {"a": 1.0, "b": 2.0, "p": p}, "x^2")
    z = r.side("rhs_proof")
    print(f"  p={p}: lhs {r.side('lhs').real:.5f}, rhs {z.real:.5f}{z.imag:+.5f}i -> {r.verdict.kind.value}")
