"""Extended-real arithmetic helpers.

Infinite masses and scale limits are first-class values here: they arise from
symbolic decisions (a divergent closed-form antiderivative, an infinite block
count), never from floating-point overflow.  ``math.inf`` is the carrier; the
helpers below guard the undefined forms (inf - inf) so they fail loudly
instead of producing NaN.
"""

from __future__ import annotations

import math

INF = math.inf
NEG_INF = -math.inf


def is_finite(x: float) -> bool:
    return math.isfinite(x)


def xadd(a: float, b: float) -> float:
    """a + b on the extended reals; raises on inf + (-inf)."""
    if math.isinf(a) and math.isinf(b) and (a > 0) != (b > 0):
        raise ArithmeticError("undefined extended-real sum inf + (-inf)")
    return a + b


def xsub(a: float, b: float) -> float:
    return xadd(a, -b)


def xsum(values) -> float:
    total = 0.0
    for v in values:
        total = xadd(total, v)
    return total


def parse_extended(text: str) -> float:
    """Parse 'inf', '-inf', a decimal, or a rational 'p/q' literal."""
    t = text.strip()
    if t in ("inf", "+inf", "Infinity", "+Infinity"):
        return INF
    if t in ("-inf", "-Infinity"):
        return NEG_INF
    if "/" in t:
        num, _, den = t.partition("/")
        return float(num) / float(den)
    return float(t)


def fmt(x: float) -> str:
    """Render an extended real for reports (17 significant digits)."""
    if x == INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    return format(x, ".17g")
