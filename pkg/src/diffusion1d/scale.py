"""Scale functions: strictly increasing coordinates of one-dimensional
diffusions, represented through their Lebesgue-Stieltjes measures.

A scale function is normalized to vanish at a base point in the interior of
its domain.  Endpoint values at open ends are one-sided limits, evaluated
exactly (possibly +-inf) from the measure's closed-form antiderivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import (
    ConstDensity,
    ExpRecipDensity,
    Interval,
    MeasureSpec,
    PowerDensity,
    default_base_point,
)
from .xreal import INF, NEG_INF, fmt

_INV_TOL = 1e-12


@dataclass(frozen=True)
class ScaleFunction:
    """A continuous, strictly increasing function with s(base_point) = 0."""

    domain: Interval
    base_point: float
    measure: MeasureSpec
    form: str | None = None  # catalog tag, for reports only

    def __post_init__(self):
        if not (self.domain.a < self.base_point < self.domain.b):
            raise ValueError(
                f"base point {self.base_point} must be interior to {self.domain}"
            )
        if self.measure.atoms:
            raise ValueError("scale measures must have no atoms (continuity)")
        if not self.measure.is_fully_supported():
            raise ValueError("scale measure not fully supported: not strictly increasing")

    # -- catalog constructors ---------------------------------------------

    @staticmethod
    def natural(domain: Interval, base_point: float | None = None, density: float = 1.0):
        e = default_base_point(domain) if base_point is None else base_point
        m = MeasureSpec(domain, (ConstDensity(domain, density),))
        return ScaleFunction(domain, e, m, "linear")

    @staticmethod
    def log_scale(domain: Interval, base_point: float | None = None, center: float = 0.0):
        if domain.a < center:
            raise ValueError("log scale needs the domain right of its center")
        e = default_base_point(domain) if base_point is None else base_point
        m = MeasureSpec(domain, (PowerDensity(domain, 1.0, center, -1.0),))
        return ScaleFunction(domain, e, m, "log")

    @staticmethod
    def power_scale(
        domain: Interval,
        exponent: float,
        base_point: float | None = None,
        center: float = 0.0,
    ):
        """Scale with derivative |x - center|**exponent (exponent -1 is log)."""
        if exponent == -1.0:
            return ScaleFunction.log_scale(domain, base_point, center)
        e = default_base_point(domain) if base_point is None else base_point
        if exponent == 0.0:
            return ScaleFunction.natural(domain, e)
        m = MeasureSpec(domain, (PowerDensity(domain, 1.0, center, exponent),))
        return ScaleFunction(domain, e, m, f"power({exponent:g})")

    @staticmethod
    def neg_exp_recip(
        domain: Interval,
        base_point: float | None = None,
        center: float = 0.0,
        rate: float = 1.0,
    ):
        """The scale x -> -exp(rate/(x-center)) + const on a domain right of center."""
        e = default_base_point(domain) if base_point is None else base_point
        m = MeasureSpec(domain, (ExpRecipDensity(domain, 1.0, center, rate),))
        return ScaleFunction(domain, e, m, "neg_exp_recip")

    @staticmethod
    def from_measure(
        domain: Interval,
        measure: MeasureSpec,
        base_point: float | None = None,
        form: str | None = None,
    ):
        e = default_base_point(domain) if base_point is None else base_point
        return ScaleFunction(domain, e, measure, form)

    # -- evaluation ---------------------------------------------------------

    def eval(self, x: float) -> float:
        """s(x); at open endpoints the exact one-sided limit, possibly +-inf."""
        return self.measure.stieltjes(self.base_point, x)

    __call__ = eval

    def limit_left(self) -> float:
        return self.eval(self.domain.a)

    def limit_right(self) -> float:
        return self.eval(self.domain.b)

    def eval_array(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation (closed forms for one-segment measures)."""
        segs = self.measure.segments
        if (
            len(segs) == 1
            and not self.measure.has_singular_part()
            and isinstance(segs[0], (ConstDensity, PowerDensity, ExpRecipDensity))
        ):
            seg = segs[0]
            e = self.base_point
            if isinstance(seg, ConstDensity):
                return seg.c * (np.asarray(xs, dtype=float) - e)
            if isinstance(seg, PowerDensity):
                u = np.asarray(xs, dtype=float) - seg.center
                p = seg.exponent
                if p == -1.0:
                    anti = seg.c * np.sign(u) * np.log(np.abs(u))
                else:
                    anti = seg.c * np.sign(u) * np.abs(u) ** (p + 1.0) / (p + 1.0)
                return anti - self._anti_scalar(seg, e)
            u = np.asarray(xs, dtype=float) - seg.center
            if seg.mirrored:
                anti = seg.c * np.exp(seg.rate / (seg.center - np.asarray(xs, dtype=float)))
            else:
                anti = -seg.c * np.exp(seg.rate / u)
            return anti - self._anti_scalar(seg, e)
        return np.array([self.eval(float(x)) for x in np.asarray(xs, dtype=float)])

    @staticmethod
    def _anti_scalar(seg, x: float) -> float:
        if isinstance(seg, ConstDensity):
            return seg.c * x
        if isinstance(seg, PowerDensity):
            return seg._anti(x, 1 if x >= seg.center else -1)
        return seg._anti(x)

    def inverse(self, y: float, tol: float = _INV_TOL) -> float:
        """The unique x with s(x) = y, by monotone bisection to ``tol`` in x."""
        lo_lim, hi_lim = self.limit_left(), self.limit_right()
        if y == 0.0:
            return self.base_point
        if not (lo_lim <= y <= hi_lim):
            raise ValueError(f"value {fmt(y)} outside the scale range ({fmt(lo_lim)}, {fmt(hi_lim)})")
        if y == lo_lim:
            if self.domain.left_closed:
                return self.domain.a
            raise ValueError("value attained only in the limit at the left endpoint")
        if y == hi_lim:
            if self.domain.right_closed:
                return self.domain.b
            raise ValueError("value attained only in the limit at the right endpoint")

        # bracket the root, expanding from the base point toward an endpoint
        if y > 0:
            lo = self.base_point
            hi = self._expand(self.base_point, self.domain.b, y, +1)
        else:
            hi = self.base_point
            lo = self._expand(self.base_point, self.domain.a, y, -1)
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break  # float resolution reached
            if self.eval(mid) < y:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def _expand(self, start: float, end: float, y: float, direction: int) -> float:
        x = start
        step = 1.0
        for _ in range(4000):
            if math.isinf(end):
                cand = x + direction * step
                step *= 2.0
            else:
                cand = 0.5 * (x + end)
            v = self.eval(cand)
            if (direction > 0 and v >= y) or (direction < 0 and v <= y):
                return cand
            x = cand
        raise ArithmeticError("bracketing failed (value too close to an endpoint limit)")

    # -- decomposition -------------------------------------------------------

    def ac_part(self) -> "AcPart":
        """The absolutely continuous part, per the Lebesgue decomposition of
        the scale measure.  Degenerate (non-strictly-increasing) results are
        flagged, not raised: merging consumes them as measures."""
        ac, _sing = self.measure.lebesgue_decompose()
        strictly = ac.is_fully_supported()
        scale = None
        if strictly:
            form = self.form if not self.measure.has_singular_part() else None
            scale = ScaleFunction(self.domain, self.base_point, ac, form)
        return AcPart(measure=ac, strictly_increasing=strictly, scale=scale)

    def describe(self) -> str:
        if self.form:
            return f"{self.form} scale on {self.domain}, base {self.base_point:g}"
        return f"Stieltjes scale on {self.domain} from " + "; ".join(self.measure.describe())


@dataclass(frozen=True)
class AcPart:
    measure: MeasureSpec
    strictly_increasing: bool
    scale: ScaleFunction | None


# ---------------------------------------------------------------------------
# Adaptedness (conditions on endpoint membership vs. scale limits)


@dataclass(frozen=True)
class EndpointVerdict:
    endpoint: float
    applies: bool
    ok: bool
    limit: float
    reason: str


@dataclass(frozen=True)
class AdaptReport:
    left: EndpointVerdict
    right: EndpointVerdict

    @property
    def ok(self) -> bool:
        return self.left.ok and self.right.ok

    def __bool__(self) -> bool:
        return self.ok


def is_adapted(s: ScaleFunction, j: Interval, i: Interval) -> AdaptReport:
    """Check the endpoint dichotomy of an adapted scale on j inside the state
    interval i: where it applies, an endpoint belongs to j exactly when the
    scale limit there is finite.  Endpoints coinciding with open endpoints of
    i are unconstrained here (the absorbing case is decided elsewhere, since
    it also involves the speed measure)."""
    left = _endpoint_verdict(s, j, i, left=True)
    right = _endpoint_verdict(s, j, i, left=False)
    return AdaptReport(left, right)


def _endpoint_verdict(s: ScaleFunction, j: Interval, i: Interval, left: bool) -> EndpointVerdict:
    if left:
        pt, member = j.a, j.left_closed
        applies = pt > i.a or (pt == i.a and i.left_closed)
        limit = s.eval(pt)
        infinite = limit == NEG_INF
        inf_label = "-inf"
    else:
        pt, member = j.b, j.right_closed
        applies = pt < i.b or (pt == i.b and i.right_closed)
        limit = s.eval(pt)
        infinite = limit == INF
        inf_label = "inf"
    if not applies:
        return EndpointVerdict(pt, False, True, limit, "open endpoint of the state interval: unconstrained")
    if member and not infinite and math.isfinite(limit):
        return EndpointVerdict(pt, True, True, limit, f"member endpoint, finite limit {fmt(limit)}")
    if not member and infinite:
        return EndpointVerdict(pt, True, True, limit, f"non-member endpoint, limit {inf_label}")
    if member:
        return EndpointVerdict(pt, True, False, limit, f"member endpoint but scale limit {fmt(limit)}")
    return EndpointVerdict(
        pt, True, False, limit, f"non-member endpoint but finite limit {fmt(limit)}"
    )
