"""Real-argument Gamma and Beta functions and principal-branch powers.

Gamma uses a fixed Lanczos approximation (g = 7, nine terms), which is
accurate to a few ulps on the moderate arguments needed here. Arguments in
(0, 1/2) go through the reflection formula.
"""

from __future__ import annotations

import math

from .errors import DomainError, RangeError

ComplexValue = complex

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
# Largest x with Gamma(x) < DBL_MAX.
_GAMMA_MAX_ARG = 171.6243769563027


def _lanczos_sum(z: float) -> float:
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    return acc


def _check_positive(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"{name} must be finite, got {x!r}")
    if x <= 0.0:
        raise DomainError(f"{name} must be positive, got {x!r}")
    return x


def lgamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    x = _check_positive("x", x)
    if x < 0.5:
        # Gamma(x) Gamma(1-x) = pi / sin(pi x), with sin(pi x) > 0 on (0, 1/2).
        return math.log(math.pi / math.sin(math.pi * x)) - lgamma(1.0 - x)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_sum(z))


def gamma(x: float) -> float:
    """Gamma function for positive real arguments.

    Raises DomainError for x <= 0 and RangeError when Gamma(x) overflows.

    >>> gamma(5.0)
    24.0
    """
    x = _check_positive("x", x)
    if x > _GAMMA_MAX_ARG:
        raise RangeError(f"gamma({x!r}) overflows a double")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    # Split t**(z+0.5) to avoid intermediate overflow near the upper limit.
    half = t ** (0.5 * (z + 0.5))
    value = math.sqrt(2.0 * math.pi) * half * (half * math.exp(-t)) * _lanczos_sum(z)
    if not math.isfinite(value):
        raise RangeError(f"gamma({x!r}) overflows a double")
    return value


def beta(a: float, b: float) -> float:
    """Euler Beta function B(a, b), evaluated in log space."""
    a = _check_positive("a", a)
    b = _check_positive("b", b)
    log_value = lgamma(a) + lgamma(b) - lgamma(a + b)
    try:
        return math.exp(log_value)
    except OverflowError as exc:
        raise RangeError(f"beta({a!r}, {b!r}) overflows a double") from exc


def cos_sin_pi(p: float) -> tuple[float, float]:
    """(cos(pi p), sin(pi p)), exact when p is a multiple of 1/2."""
    r = math.fmod(p, 2.0)
    if r < 0.0:
        r += 2.0
    quarter = r * 2.0
    if quarter == int(quarter):
        return ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[int(quarter) % 4]
    return math.cos(math.pi * r), math.sin(math.pi * r)


def principal_power(base: float, p: float) -> ComplexValue:
    """``base ** p`` on the principal branch, always as a complex number.

    Negative bases give ``|base|**p * exp(i*pi*p)``; the imaginary part is
    exactly zero for positive bases and for integer ``p``.
    """
    base = float(base)
    p = float(p)
    if not (math.isfinite(base) and math.isfinite(p)):
        raise DomainError(f"principal_power needs finite inputs, got ({base!r}, {p!r})")
    if base == 0.0:
        if p <= 0.0:
            raise DomainError(f"0 ** {p!r} is undefined")
        return complex(0.0, 0.0)
    try:
        magnitude = abs(base) ** p
    except OverflowError as exc:
        raise RangeError(f"|{base!r}| ** {p!r} overflows") from exc
    if not math.isfinite(magnitude):
        raise RangeError(f"|{base!r}| ** {p!r} overflows")
    if base > 0.0:
        return complex(magnitude, 0.0)
    c, s = cos_sin_pi(p)
    return complex(magnitude * c, magnitude * s)
