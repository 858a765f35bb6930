"""Numerical lab for (n - alpha)-convex functions and Caputo derivatives.

Submodules:

* ``specfun``   Gamma, log-Gamma, Beta and principal-branch powers
* ``quad``      adaptive Gauss-Kronrod quadrature with endpoint singularities
* ``exprlang``  a small expression language with symbolic derivatives
* ``fraccalc``  left and right Caputo derivatives
* ``convexity`` grid checks of the convexity classes
* ``claims``    the claim registry, reports and counterexample search
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DomainError,
    EvaluationError,
    ExprSyntaxError,
    FracConvexError,
    RangeError,
    UnsupportedOperationError,
    UsageError,
)
from .exprlang import RealFunction, as_function, differentiate, parse  # noqa: E402
from .fraccalc import FracOrder, caputo_left, caputo_right  # noqa: E402
from .quad import QuadratureSpec, integrate  # noqa: E402
from .specfun import beta, gamma, lgamma, principal_power  # noqa: E402

__all__ = [
    "__version__",
    "ConvergenceError", "DomainError", "EvaluationError", "ExprSyntaxError", "FracConvexError",
    "RangeError", "UnsupportedOperationError", "UsageError",
    "RealFunction", "as_function", "differentiate", "parse",
    "FracOrder", "caputo_left", "caputo_right",
    "QuadratureSpec", "integrate",
    "beta", "gamma", "lgamma", "principal_power",
]
