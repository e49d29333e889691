"""Regularized incomplete beta function.

Continued fraction in modified Lentz form, with the symmetry
I_x(a, b) = 1 - I_{1-x}(b, a) used for x > (a + 1)/(a + b + 2).
"""

import math

from scipy.special import gammaln

from rmcca.core.exceptions import ConvergenceError, OutOfRangeError

MAX_ITERATIONS = 10000
CF_EPS = 1e-15
TINY = 1e-300


def _continued_fraction(x: float, a: float, b: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < TINY:
        d = TINY
    d = 1.0 / d
    h = d

    for m in range(1, MAX_ITERATIONS + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < TINY:
            d = TINY
        c = 1.0 + aa / c
        if abs(c) < TINY:
            c = TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_EPS:
            return h

    raise ConvergenceError(
        "incomplete beta continued fraction did not converge",
        {"x": x, "a": a, "b": b, "iterations": MAX_ITERATIONS},
    )


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b), the Beta(a, b) cumulative distribution at x.

    Args:
        x: Point in [0, 1]
        a: First shape parameter, > 0
        b: Second shape parameter, > 0

    Raises:
        OutOfRangeError: If x is outside [0, 1] or a shape is not positive
    """
    x, a, b = float(x), float(a), float(b)
    if not 0.0 <= x <= 1.0:
        raise OutOfRangeError("x must lie in [0, 1]", {"x": x})
    if not (a > 0.0 and b > 0.0) or math.isinf(a) or math.isinf(b):
        raise OutOfRangeError("shape parameters must be positive and finite", {"a": a, "b": b})
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0

    log_front = gammaln(a + b) - gammaln(a) - gammaln(b) + a * math.log(x) + b * math.log1p(-x)
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        value = front * _continued_fraction(x, a, b) / a
    else:
        value = 1.0 - front * _continued_fraction(1.0 - x, b, a) / b
    return min(1.0, max(0.0, value))
