"""Searching parameter boxes for counterexamples.

The search spends a fixed budget on a jittered grid, a compass refinement
and seeded random samples. The same seed always returns the same witness.
"""

from fracconvex.claims import search_counterexample, to_json
from fracconvex.claims.core import violation
from fracconvex.convexity import check_def2

seed = 2024

print("defining inequality with f = x, p = 1")
r = search_counterexample("DEF1", "t=0:1,x=1:2,y=1:2", ["x"], budget=5000, seed=seed, fixed={"p": 1.0})
print("  witness:", r.params, "violation", round(violation(r), 6))

print("\nthe elementary inequality over p in [-0.99, 1]")
print("  witness:", search_counterexample("THM5-ELEM", "p=-0.99:1", [], budget=5000, seed=seed))

print("\nJensen-type display over a small corpus")
r = search_counterexample("JENSEN-TYPE", "a=1:2,b=1:2,p=0:1", ["x", "exp(x)", "x^2"], budget=3000, seed=seed)
print("  worst function:", r.verdict.witness["f"], "params", r.params)

print("\ndyadic class: printed vs corrected argument")
for x, y, k in [(4, 2, 1), (2, 1, 1), (8, 4, 2), (2, 1, 3)]:
    lit = check_def2("x^2", x, y, 1.0, k, literal=True)
    cor = check_def2("x^2", x, y, 1.0, k, literal=False)
    print(f"  x={x} y={y} k={k}: printed {lit.kind.value:<13} corrected {cor.kind.value}")

print("\nfull JSON of a witness report:")
print(to_json(search_counterexample("DEF1", "t=0:1,x=1:2,y=1:2", ["x"], budget=500, seed=1, fixed={"p": 1.0})))
