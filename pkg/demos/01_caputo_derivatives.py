"""Caputo derivatives of simple functions, checked against closed forms.

For f(x) = (x - a)^m the left-sided derivative with n = 1 is
Gamma(m+1)/Gamma(m+1-alpha) (x - a)^(m-alpha). We compare the numerical
value with that formula, then watch the derivative slide between f(x)-f(a)
and f'(x) as alpha moves across [0, 1).
"""

import numpy as np

from fracconvex import FracOrder, caputo_left, caputo_right, gamma
from fracconvex.fraccalc import caputo_limit_check

a, x = 1.0, 2.0

print("power functions on [1, 2]")
print(f"{'m':>2} {'alpha':>6} {'numeric':>20} {'closed form':>20} {'rel err':>9}")
for m in (1, 2, 3):
    for alpha in (0.1, 0.5, 0.9):
        value = caputo_left(f"(x-1)^{m}", a, x, FracOrder(1, alpha))
        exact = gamma(m + 1) / gamma(m + 1 - alpha) * (x - a) ** (m - alpha)
        print(f"{m:>2} {alpha:>6} {value:>20.16f} {exact:>20.16f} {abs(value - exact) / exact:>9.1e}")

# the right-sided derivative picks up the sign (-1)^n
print("\nright-sided, f = x on [1, 2]:", caputo_right("x", 1.0, 2.0, FracOrder(1, 0.5)))
print("  closed form -1/Gamma(1.5)    :", -1 / gamma(1.5))

print("\nsweeping alpha for f = exp(x) on [1, 2]")
for alpha in np.linspace(0.0, 0.95, 6):
    print(f"  alpha = {alpha:.2f}  D = {caputo_left('exp(x)', a, x, FracOrder(1, alpha)):.10f}")

lim = caputo_limit_check("exp(x)", a, x)
print(f"\nalpha -> 1: {lim.at_alpha_near_1:.6f}  vs f'(x)      = {lim.classical_derivative:.6f}")
print(f"alpha -> 0: {lim.at_alpha_near_0:.6f}  vs f(x)-f(a)  = {lim.increment:.6f}")

# functions without an expression fall back on finite differences
value = caputo_left(lambda s: np.cosh(s), a, x, FracOrder(1, 0.5))
print("\ncosh via finite differences:", value)
