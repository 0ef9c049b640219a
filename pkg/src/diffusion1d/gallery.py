"""Classic one-dimensional diffusions as ready-made specs.

These builders mirror the JSON configs shipped under configs/ and are used
heavily by the test suite: absorbing Brownian motion, Bessel processes,
two-ray systems with an inaccessible origin, Cantor-gap extensions of
Brownian motion (thin, normalized, and fat variants), and the reflected
Brownian motion hiding inside a singular-augmented scale.
"""

from __future__ import annotations

from fractions import Fraction

from .cantorsets import ConstantRemoval, GeometricRemoval
from .dirichlet import DiffusionSpec
from .gapsystems import NATURAL, NORMALIZED, build_gap_system
from .measures import (
    CantorTower,
    ConstDensity,
    Interval,
    MeasureSpec,
    PowerDensity,
)
from .scale import ScaleFunction
from .xreal import INF, NEG_INF


def absorbing_bm(state: Interval | None = None) -> DiffusionSpec:
    """Brownian motion on (0,1) killed at both ends: single interval with the
    natural scale, both absorbing cases active."""
    state = state or Interval(0.0, 1.0)
    iv = Interval(0.0, 1.0)
    return DiffusionSpec.create(
        state,
        MeasureSpec.lebesgue(state),
        [(iv, ScaleFunction.natural(iv))],
    )


def absorbing_bm_on_closed_state() -> DiffusionSpec:
    """The same form placed on the closed unit interval; the adaptedness
    conditions fail at both ends (the paradigm non-regular placement)."""
    state = Interval.closed(0.0, 1.0)
    iv = Interval(0.0, 1.0)
    return DiffusionSpec.create(
        state,
        MeasureSpec.lebesgue(state),
        [(iv, ScaleFunction.natural(iv))],
    )


def bessel(d: int, state: Interval | None = None) -> DiffusionSpec:
    """d-dimensional Bessel process on [0, infinity): speed x^(d-1) dx, scale
    log x (d = 2) or (x^(2-d) - 1)/(2-d) (d >= 3), origin unreachable."""
    if d < 2:
        raise ValueError("needs d >= 2 (otherwise the origin is reachable)")
    state = state or Interval(0.0, INF, True, False)
    iv = Interval(0.0, INF)
    speed = MeasureSpec(state, (PowerDensity(state, 1.0, 0.0, float(d - 1)),))
    if d == 2:
        sc = ScaleFunction.log_scale(iv, base_point=1.0)
    else:
        sc = ScaleFunction.power_scale(iv, float(1 - d), base_point=1.0)
    return DiffusionSpec.create(state, speed, [(iv, sc)])


def two_rays() -> DiffusionSpec:
    """Two effective intervals filling the line: the natural scale on
    (-inf, 0] and the scale -exp(1/x) on (0, inf), which makes the origin
    unreachable from the right.  Scale-isolated, smooth functions are a
    core."""
    state = Interval.real_line()
    left = Interval(NEG_INF, 0.0, False, True)
    right = Interval(0.0, INF, False, False)
    return DiffusionSpec.create(
        state,
        MeasureSpec.lebesgue(state),
        [
            (left, ScaleFunction.natural(left)),
            (right, ScaleFunction.neg_exp_recip(right, base_point=1.0)),
        ],
    )


def cantor_gap_bm(depth: int = 12, normalized: bool = False, ratio=Fraction(1, 3)) -> DiffusionSpec:
    """Reflected Brownian motions on the gap closures of the standard Cantor
    set plus two outer rays.  With natural scales every interval is
    scale-connected to every other (the closure of the smooth functions is
    Brownian motion); with normalized scales the total scale mass between any
    two base points is infinite and every interval is isolated."""
    state = Interval.real_line()
    intervals, family = build_gap_system(
        Interval.closed(0.0, 1.0),
        ConstantRemoval(ratio),
        depth,
        recipe=NORMALIZED if normalized else NATURAL,
    )
    return DiffusionSpec.create(
        state, MeasureSpec.lebesgue(state), intervals, families=(family,)
    )


def fat_cantor_gap_bm(depth: int = 12, first=Fraction(1, 4), factor=Fraction(1, 4)) -> DiffusionSpec:
    """The same construction over a fat Cantor set (summable removal ratios):
    the leftover set has positive length, so the leftover Lebesgue mass
    isolates every interval even though scale masses stay finite."""
    state = Interval.real_line()
    intervals, family = build_gap_system(
        Interval.closed(0.0, 1.0),
        GeometricRemoval(first, factor),
        depth,
        recipe=NATURAL,
    )
    return DiffusionSpec.create(
        state, MeasureSpec.lebesgue(state), intervals, families=(family,)
    )


def cantor_tower_interval() -> DiffusionSpec:
    """One effective interval (0, 1] whose scale measure is Lebesgue plus a
    tower of Cantor blocks accumulating at 0 (infinite total mass, so the
    left limit is -inf and the scale is adapted).  The absolutely continuous
    part is Lebesgue alone: merging yields reflected Brownian motion on
    [0, 1]."""
    state = Interval.real_line()
    iv = Interval(0.0, 1.0, False, True)
    tower = CantorTower(Interval(0.0, 1.0), ConstantRemoval(Fraction(1, 3)), 1.0, True)
    measure = MeasureSpec(iv, (ConstDensity(iv, 1.0),), (), (), (tower,))
    sc = ScaleFunction.from_measure(iv, measure, base_point=0.5)
    return DiffusionSpec.create(state, MeasureSpec.lebesgue(state), [(iv, sc)])
