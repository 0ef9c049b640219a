"""Families of effective intervals built from the gaps of a Cantor-type set.

The gap closures of a Cantor construction form countably many disjoint closed
intervals.  Only the gaps of the first ``depth`` generations are materialized
as explicit effective intervals; all deeper structure lives inside the
2**depth kept "nodes", for which this module carries exact closed-form tail
sums (total scale mass, residual Lebesgue length, integral of the reciprocal
density).  Any query between base points of enumerated members covers each
node either fully or not at all, so the tails make span queries exact for the
full infinite system, not just its truncation.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from . import cantorsets
from .cantorsets import RemovalRule
from .measures import ConstDensity, Interval, MeasureSpec
from .scale import ScaleFunction
from .xreal import INF

NATURAL = "natural"
NORMALIZED = "normalized"


@dataclass(frozen=True)
class GapFamily:
    """Bookkeeping for one truncated gap system inside a diffusion spec."""

    support: Interval  # closed span of the construction
    rule: RemovalRule
    depth: int
    recipe: str  # NATURAL or NORMALIZED
    density: float  # scale density on gaps (NATURAL recipe only)
    member_indices: tuple[int, ...]  # positions among the spec's effective intervals
    node_bounds: tuple[tuple[float, float], ...]
    node_starts: tuple[float, ...]
    node_ends: tuple[float, ...]
    node_extents: tuple[float, ...]  # end - start per node (float-exact vs. pieces)
    residual_fraction: float  # surviving length fraction of one node, prod (1-r_k), k > depth
    node_length: float
    node_inv_sq_unit: float  # integral of 1/(scale density) over one node's tail gaps

    # -- span queries -------------------------------------------------------

    def _node_range(self, lo: float, hi: float) -> tuple[int, int]:
        """Indices of nodes fully contained in [lo, hi].  Any span between
        base points of enumerated intervals contains each node either fully
        or not at all."""
        first = bisect.bisect_left(self.node_starts, lo)
        last = bisect.bisect_right(self.node_ends, hi)
        return first, max(first, last)

    def nodes_within(self, lo: float, hi: float) -> int:
        first, last = self._node_range(lo, hi)
        return last - first

    def _extent_sum(self, lo: float, hi: float) -> float:
        first, last = self._node_range(lo, hi)
        return sum(self.node_extents[first:last])

    def lambda_s_tail(self, lo: float, hi: float) -> float:
        if self.nodes_within(lo, hi) == 0:
            return 0.0
        if self.recipe == NORMALIZED:
            return INF  # infinitely many tail gaps, unit scale mass each
        return self.density * self._extent_sum(lo, hi) * (1.0 - self.residual_fraction)

    def gap_tail(self, lo: float, hi: float) -> float:
        """Total length of the not-yet-enumerated gaps inside nodes within
        [lo, hi]; for a thin rule this equals the node extents bit-for-bit,
        so leftover-mass computations cancel exactly."""
        return self._extent_sum(lo, hi) * (1.0 - self.residual_fraction)

    def residual_tail(self, lo: float, hi: float) -> float:
        return self._extent_sum(lo, hi) * self.residual_fraction

    def inv_sq_tail(self, lo: float, hi: float) -> float:
        if self.recipe == NATURAL:
            return self.gap_tail(lo, hi) / self.density
        return self.nodes_within(lo, hi) * self.node_inv_sq_unit

    def node_segments(self, lo: float, hi: float) -> tuple[ConstDensity, ...]:
        """The limit scale measure on nodes inside [lo, hi] as density
        segments.  Valid only when the residual is zero and the recipe is
        NATURAL: then the tail gaps fill each node up to Lebesgue-null
        leftovers, so the measure is exactly ``density * dx`` there."""
        if self.recipe != NATURAL or self.residual_fraction != 0.0:
            raise ValueError("node measures collapse to Lebesgue only for thin natural systems")
        first, last = self._node_range(lo, hi)
        return tuple(
            ConstDensity(Interval(a, b), self.density) for a, b in self.node_bounds[first:last]
        )

    def classify_point(self, x: float) -> str:
        """'node-gap' (an effective interval beyond the truncation depth),
        'limit-set' (a trap to evaluation resolution), or 'outside'."""
        if not (self.support.a <= x <= self.support.b):
            return "outside"
        t = (x - self.support.a) / self.support.length
        if cantorsets.in_limit_set(self.rule, t, 52):
            return "limit-set"
        # not in the limit set: x lies in some gap; beyond-depth gaps are the
        # ones inside nodes
        for a, b in self.node_bounds:
            if a <= x <= b:
                return "node-gap"
        return "enumerated-gap"

    def describe(self) -> str:
        return (
            f"gap system on {self.support} ({self.rule.describe()}), "
            f"{2 ** self.depth - 1} gaps enumerated to depth {self.depth}, "
            f"{self.recipe} scales"
        )


def build_gap_system(
    support: Interval,
    rule: RemovalRule,
    depth: int,
    recipe: str = NATURAL,
    density: float = 1.0,
    rays: bool = True,
    index_offset: int = 0,
) -> tuple[list[tuple[Interval, ScaleFunction]], GapFamily]:
    """Effective intervals for the gap closures of a Cantor set, plus the
    family record holding the truncation tails.

    With ``rays`` the two unbounded intervals hugging the support from
    outside (closed at the support endpoints, natural scale) are included
    first, as in the classical extensions of Brownian motion.
    """
    if recipe not in (NATURAL, NORMALIZED):
        raise ValueError(f"unknown gap scale recipe {recipe!r}")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    a, b = support.a, support.b
    span = support.length

    intervals: list[tuple[Interval, ScaleFunction]] = []
    if rays:
        left = Interval(-INF, a, False, True)
        right = Interval(b, INF, True, False)
        intervals.append((left, ScaleFunction.natural(left)))
        intervals.append((right, ScaleFunction.natural(right)))

    member_indices = []
    for lo_u, hi_u, _gen in cantorsets.gaps(rule, depth):
        lo, hi = a + span * lo_u, a + span * hi_u
        gap = Interval.closed(lo, hi)
        if recipe == NATURAL:
            sc = ScaleFunction.natural(gap, density=density)
        else:
            sc = ScaleFunction.natural(gap, density=1.0 / (hi - lo))
        intervals.append((gap, sc))

    # canonical order: by left endpoint
    order = sorted(range(len(intervals)), key=lambda k: intervals[k][0].a)
    intervals = [intervals[k] for k in order]
    ray_count = 2 if rays else 0
    member_indices = [
        index_offset + pos
        for pos, k in enumerate(order)
        if k >= ray_count  # gap members only
    ]

    node_bounds = tuple(
        (a + span * lo_u, a + span * hi_u) for lo_u, hi_u in cantorsets.nodes(rule, depth)
    )
    node_len = span * cantorsets.node_length(rule, depth)
    if recipe == NATURAL:
        inv_sq_unit = 0.0  # derived from gap_tail at query time
    else:
        inv_sq_unit = node_len * node_len * cantorsets.future_gap_sq_sum(rule, depth)

    family = GapFamily(
        support=support,
        rule=rule,
        depth=depth,
        recipe=recipe,
        density=density,
        member_indices=tuple(member_indices),
        node_bounds=node_bounds,
        node_starts=tuple(nb[0] for nb in node_bounds),
        node_ends=tuple(nb[1] for nb in node_bounds),
        node_extents=tuple(nb[1] - nb[0] for nb in node_bounds),
        residual_fraction=rule.residual_fraction(depth),
        node_length=node_len,
        node_inv_sq_unit=inv_sq_unit,
    )
    return intervals, family
