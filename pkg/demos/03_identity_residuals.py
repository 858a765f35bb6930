"""How far the printed integral identities are from their integrals.

Each identity equates a Gamma-weighted Caputo expression with a weighted
integral of f' along [y, x]. The evaluation point u of the Caputo term is
never fixed, so every reading is tried and the residual is printed.
"""

from fracconvex import FracOrder
from fracconvex.claims import IdentityInterpretation, verify_identity
from fracconvex.claims.identities import LEM1, LEM2

order = FracOrder.from_p(0.5)

for which in (LEM1, LEM2):
    print(which)
    for interp in IdentityInterpretation.all():
        tag = f"u={interp.u_point.value},kernel={interp.caputo_kernel_base.value}"
        for f, (y, x) in [("x^2", (1.0, 2.0)), ("x^2", (1.0, 3.0)), ("exp(x)", (1.0, 2.0))]:
            c = verify_identity(which, f, y, x, order, interp)
            print(f"  {tag:<18} {f:>7} [{y:g},{x:g}]  lhs {c.lhs:+.6f}  rhs {c.rhs:+.6f}"
                  f"  residual {c.residual:+.2e}")
    print()

# With unit length x - y = 1 the missing powers of (x - y) are invisible,
# which is why the first identity matches on [1, 2] and drifts on [1, 3].
