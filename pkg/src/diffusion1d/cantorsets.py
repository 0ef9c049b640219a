"""Cantor-type constructions on the unit interval.

A construction removes, at level k = 1, 2, ..., the open middle fraction
``r_k`` of every remaining piece, keeping two side pieces of fraction
``(1 - r_k)/2`` each.  Two ratio rules are provided:

* ``ConstantRemoval(ratio)`` -- the classical self-similar family
  (ratio = 1/3 gives the standard middle-thirds set, residual length zero);
* ``GeometricRemoval(first, factor)`` -- summable ratios, so the limit set
  keeps positive Lebesgue length ("fat" Cantor sets).

Everything here works on the unit domain [0, 1]; callers map affinely onto
their own supports.  All dichotomies (zero vs. positive residual, finite
vs. infinite gap counts) are decided from the rule itself, not from float
thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_TINY = 1e-300
_ONE = Fraction(1)
_SNAP = Fraction(1, 2**50)  # inputs this close to a construction boundary mean it
_SNAP_CAP = Fraction(1, 2**40)  # drift allowance stops growing here (false-snap chance ~2**-39/level)


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


@dataclass(frozen=True)
class ConstantRemoval:
    """Middle fraction ``ratio`` removed at every level.  The ratio is held
    as an exact rational so construction boundaries (gap endpoints) are exact
    points, e.g. ``ConstantRemoval(Fraction(1, 3))`` for the classical set."""

    ratio: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ratio", _as_fraction(self.ratio))
        if not 0 < self.ratio < 1:
            raise ValueError(f"removal ratio must lie in (0,1), got {self.ratio}")

    def removed(self, level: int) -> float:
        return float(self.ratio)

    def keep(self, level: int) -> float:
        return float(self.keep_exact(level))

    def keep_exact(self, level: int) -> Fraction:
        return (1 - self.ratio) / 2

    def residual_fraction(self, consumed: int = 0) -> float:
        # prod_{k>consumed} (1 - ratio) = 0 exactly for a constant positive ratio
        return 0.0

    def describe(self) -> str:
        return f"constant middle removal {self.ratio}"


@dataclass(frozen=True)
class GeometricRemoval:
    """Level-k removal ``first * factor**(k-1)``; summable, so the set is fat."""

    first: Fraction
    factor: Fraction

    def __post_init__(self):
        object.__setattr__(self, "first", _as_fraction(self.first))
        object.__setattr__(self, "factor", _as_fraction(self.factor))
        if not 0 < self.first < 1:
            raise ValueError("first removal must lie in (0,1)")
        if not 0 < self.factor < 1:
            raise ValueError("decay factor must lie in (0,1)")

    def removed(self, level: int) -> float:
        return float(self.first) * float(self.factor) ** (level - 1)

    def keep(self, level: int) -> float:
        return (1.0 - self.removed(level)) / 2.0

    def keep_exact(self, level: int) -> Fraction:
        return (1 - self.first * self.factor ** (level - 1)) / 2

    def residual_fraction(self, consumed: int = 0) -> float:
        # prod_{k>consumed} (1 - r_k) > 0 since sum r_k < inf
        log_sum = 0.0
        k = consumed + 1
        while True:
            r = self.removed(k)
            if r < 1e-18:
                # remaining sum of a geometric tail; (1-r) ~ exp(-r) to 1e-36
                log_sum -= r / (1.0 - float(self.factor))
                break
            log_sum += math.log1p(-r)
            k += 1
        return math.exp(log_sum)

    def describe(self) -> str:
        return f"geometric middle removal {self.first}*{self.factor}^(k-1)"


RemovalRule = ConstantRemoval | GeometricRemoval


def mass_cdf(rule: RemovalRule, t: float, depth: int) -> float:
    """Distribution function of the equal-split measure on the limit set.

    The measure gives each side piece half of its parent's mass.  The rescaled
    position is tracked in exact rational arithmetic (float recursions drift
    off plateau boundaries at rate 1/keep per level), so the value is exact
    once the recursion resolves into a gap and otherwise off by at most
    ``2**-(depth+1)``.
    """
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    tf = Fraction(t)
    eta = _SNAP  # float inputs within a few ulps of a gap endpoint mean it
    acc = 0.0
    mass = 1.0
    for level in range(1, depth + 1):
        kp = rule.keep_exact(level)
        if abs(tf - kp) <= eta or abs(tf - (_ONE - kp)) <= eta:
            return acc + mass / 2.0  # plateau boundary: exact value
        if tf < kp:
            tf = tf / kp
            mass /= 2.0
        elif tf > _ONE - kp:
            acc += mass / 2.0
            tf = (tf - (_ONE - kp)) / kp
            mass /= 2.0
        else:
            return acc + mass / 2.0  # strictly inside the gap: exact value
        eta = min(eta / kp, _SNAP_CAP)
        if tf <= 0:
            return acc
        if tf >= 1:
            return acc + mass
    return acc + mass / 2.0


def gap_length_below(rule: RemovalRule, t: float, depth: int) -> float:
    """Total length of removed gaps (all generations) inside [0, t].

    For a thin rule this converges to ``t`` itself; for a fat rule to
    ``t - |K ∩ [0, t]|``.  Resolution error is bounded by the depth-``depth``
    piece length.
    """
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return 1.0 - rule.residual_fraction(0)
    tf = Fraction(t)
    eta = _SNAP
    total = 0.0
    length = 1.0
    for level in range(1, depth + 1):
        kp = rule.keep_exact(level)
        r = rule.removed(level)
        if abs(tf - kp) <= eta:
            return total  # at the gap's left edge: nothing of the gap below
        if abs(tf - (_ONE - kp)) <= eta:
            return total + r * length  # at the gap's right edge: whole gap below
        if tf < kp:
            tf = tf / kp
            length *= float(kp)
        elif tf < _ONE - kp:
            # inside the removed middle: add the removed part below t and stop
            total += float(tf - kp) * length
            return total
        else:
            # right piece: the whole middle gap plus every future gap of the
            # left sibling lies below t
            total += r * length + float(kp) * length * (1.0 - rule.residual_fraction(level))
            tf = (tf - (_ONE - kp)) / kp
            length *= float(kp)
        eta = min(eta / kp, _SNAP_CAP)
        if tf <= 0:
            return total
        if tf >= 1:
            return total + (1.0 - rule.residual_fraction(level)) * length
    return total + (1.0 - rule.residual_fraction(depth)) * length * float(tf)


def in_limit_set(rule: RemovalRule, t: float, depth: int) -> bool:
    """Whether ``t`` survives ``depth`` removal rounds (gap endpoints survive)."""
    if t < 0.0 or t > 1.0:
        return False
    tf = Fraction(t)
    eta = _SNAP
    for level in range(1, depth + 1):
        kp = rule.keep_exact(level)
        if abs(tf - kp) <= eta or abs(tf - (_ONE - kp)) <= eta:
            return True  # gap endpoints belong to the limit set
        if tf <= kp:
            tf = tf / kp
        elif tf >= _ONE - kp:
            tf = (tf - (_ONE - kp)) / kp
        else:
            return False
        eta = min(eta / kp, _SNAP_CAP)
    return True


def _subdivide(rule: RemovalRule, depth: int):
    """Pieces and removed gaps with every shared boundary the *same* float:
    children inherit their parent's outer endpoints verbatim, so the depth-d
    tiling (node, gap, node, gap, ..., node) has bit-exact seams."""
    pieces = [(0.0, 1.0)]
    all_gaps: list[tuple[float, float, int]] = []
    for level in range(1, depth + 1):
        kp = rule.keep(level)
        nxt = []
        for lo, hi in pieces:
            side = kp * (hi - lo)
            left_end = lo + side
            right_start = hi - side
            all_gaps.append((left_end, right_start, level))
            nxt.append((lo, left_end))
            nxt.append((right_start, hi))
        pieces = nxt
    all_gaps.sort()
    pieces.sort()
    return pieces, all_gaps


def gaps(rule: RemovalRule, depth: int) -> list[tuple[float, float, int]]:
    """Removed middles of generations 1..depth as (lo, hi, generation), sorted."""
    return _subdivide(rule, depth)[1]


def nodes(rule: RemovalRule, depth: int) -> list[tuple[float, float]]:
    """The 2**depth kept pieces after ``depth`` rounds (equal lengths), sorted."""
    return _subdivide(rule, depth)[0]


def node_length(rule: RemovalRule, depth: int) -> float:
    ln = 1.0
    for level in range(1, depth + 1):
        ln *= rule.keep(level)
    return ln


def future_gap_sq_sum(rule: RemovalRule, consumed: int) -> float:
    """Sum of squared gap lengths of all generations beyond ``consumed``,
    for a unit-length piece that already went through ``consumed`` rounds."""
    total = 0.0
    prefix = 1.0  # prod of squared keeps of levels consumed+1 .. consumed+i-1
    count = 1.0
    for i in range(1, 20000):
        r = rule.removed(consumed + i)
        term = count * (r * r) * prefix
        total += term
        if term < _TINY and i > 4:
            break
        prefix *= rule.keep(consumed + i) ** 2
        count *= 2.0
    return total
