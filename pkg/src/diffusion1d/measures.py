"""Exact Radon measures on intervals.

A measure is a finite list of closed-form components: density segments
(constant, power, exponential-of-reciprocal, Cantor-complement indicator),
point atoms, self-similar Cantor components, and geometric towers of Cantor
blocks accumulating at an endpoint.  Every component knows its antiderivative
in closed form, including one-sided limits at support endpoints; masses are
therefore exact extended reals and finiteness questions are decided
symbolically, never by quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .cantorsets import (
    RemovalRule,
    gap_length_below,
    in_limit_set,
    mass_cdf,
)
from .xreal import INF, NEG_INF, xadd

_EVAL_DEPTH = 52


# ---------------------------------------------------------------------------
# Intervals


@dataclass(frozen=True)
class Interval:
    """An interval <a, b> whose endpoints may or may not be members."""

    a: float
    b: float
    left_closed: bool = False
    right_closed: bool = False

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"interval needs a < b, got [{self.a}, {self.b}]")
        if math.isinf(self.a) and self.left_closed:
            raise ValueError("an infinite endpoint cannot be closed")
        if math.isinf(self.b) and self.right_closed:
            raise ValueError("an infinite endpoint cannot be closed")

    @staticmethod
    def closed(a: float, b: float) -> "Interval":
        return Interval(a, b, True, True)

    @staticmethod
    def open(a: float, b: float) -> "Interval":
        return Interval(a, b, False, False)

    @staticmethod
    def real_line() -> "Interval":
        return Interval(NEG_INF, INF)

    def contains(self, x: float) -> bool:
        if x < self.a or x > self.b:
            return False
        if x == self.a:
            return self.left_closed
        if x == self.b:
            return self.right_closed
        return True

    def closure_contains(self, x: float) -> bool:
        return self.a <= x <= self.b

    def contains_interval(self, other: "Interval") -> bool:
        if other.a < self.a or other.b > self.b:
            return False
        if other.a == self.a and other.left_closed and not self.left_closed:
            return False
        if other.b == self.b and other.right_closed and not self.right_closed:
            return False
        return True

    def intersect(self, other: "Interval") -> "Interval | None":
        a, b = max(self.a, other.a), min(self.b, other.b)
        if a > b:
            return None
        lc = (self.contains(a)) and (other.contains(a))
        rc = (self.contains(b)) and (other.contains(b))
        if a == b:
            return None  # single points are not intervals here
        return Interval(a, b, lc, rc)

    def overlaps(self, other: "Interval") -> bool:
        """True when the two intervals share at least one point."""
        if self.b < other.a or other.b < self.a:
            return False
        if self.b == other.a:
            return self.right_closed and other.left_closed
        if other.b == self.a:
            return other.right_closed and self.left_closed
        return True

    @property
    def length(self) -> float:
        return self.b - self.a

    def is_bounded(self) -> bool:
        return math.isfinite(self.a) and math.isfinite(self.b)

    def __str__(self) -> str:
        lb = "[" if self.left_closed else "("
        rb = "]" if self.right_closed else ")"
        from .xreal import fmt

        return f"{lb}{fmt(self.a)}, {fmt(self.b)}{rb}"


def default_base_point(iv: Interval) -> float:
    """The canonical normalization point: midpoint, a+1, b-1, or 0."""
    fin_a, fin_b = math.isfinite(iv.a), math.isfinite(iv.b)
    if fin_a and fin_b:
        return 0.5 * (iv.a + iv.b)
    if fin_a:
        return iv.a + 1.0
    if fin_b:
        return iv.b - 1.0
    return 0.0


# ---------------------------------------------------------------------------
# Density segments


@dataclass(frozen=True)
class DensitySegment:
    """Base class: a nonnegative density with a closed-form antiderivative."""

    support: Interval

    def cmass(self, lo: float, hi: float) -> float:
        """Integral of the density over (lo, hi) clipped to the support."""
        lo = max(lo, self.support.a)
        hi = min(hi, self.support.b)
        if lo >= hi:
            return 0.0
        return self._integrate(lo, hi)

    # interface stubs -------------------------------------------------
    def _integrate(self, lo: float, hi: float) -> float:
        raise NotImplementedError

    def density(self, x: float) -> float:
        raise NotImplementedError

    def covers_fully(self) -> bool:
        """Whether every open subinterval of the support has positive mass."""
        raise NotImplementedError

    def positive_ae(self) -> bool:
        """Whether the density is > 0 Lebesgue-a.e. on the support."""
        raise NotImplementedError

    def infinite_mass_points(self) -> tuple[float, ...]:
        """Finite points every neighbourhood of which carries infinite mass."""
        return ()

    def reciprocal(self) -> "DensitySegment | None":
        """The segment with density 1/g on the same support, if in catalog."""
        return None

    def inv_mass(self, lo: float, hi: float) -> float | None:
        """Integral of 1/density over (lo, hi) within the support.

        Returns an extended real, or None when finite but without a closed
        form (the caller may then fall back to labeled numerics).
        """
        rec = self.reciprocal()
        if rec is not None:
            return rec.cmass(max(lo, self.support.a), min(hi, self.support.b))
        return None

    def inv_integrable_near(self, p: float, side: int) -> bool:
        """Whether 1/density is integrable on a one-sided neighbourhood of p."""
        raise NotImplementedError

    def pushforward(self, alpha: float, beta: float) -> "DensitySegment":
        raise NotImplementedError

    def same_density(self, other: "DensitySegment") -> bool:
        """Same primitive and parameters (supports may differ)."""
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


def _map_interval(iv: Interval, alpha: float, beta: float) -> Interval:
    pts = (alpha * iv.a + beta, alpha * iv.b + beta)
    if alpha > 0:
        return Interval(pts[0], pts[1], iv.left_closed, iv.right_closed)
    return Interval(pts[1], pts[0], iv.right_closed, iv.left_closed)


@dataclass(frozen=True)
class ConstDensity(DensitySegment):
    c: float = 1.0

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("density must be nonnegative")

    def _integrate(self, lo, hi):
        if self.c == 0.0:
            return 0.0
        if math.isinf(hi) or math.isinf(lo):
            return INF
        return self.c * (hi - lo)

    def density(self, x):
        return self.c

    def covers_fully(self):
        return self.c > 0

    def positive_ae(self):
        return self.c > 0

    def reciprocal(self):
        if self.c == 0:
            return None
        return ConstDensity(self.support, 1.0 / self.c)

    def inv_mass(self, lo, hi):
        lo = max(lo, self.support.a)
        hi = min(hi, self.support.b)
        if lo >= hi:
            return 0.0
        if self.c == 0.0:
            return INF
        if math.isinf(hi) or math.isinf(lo):
            return INF
        return (hi - lo) / self.c

    def inv_integrable_near(self, p, side):
        return self.c > 0

    def pushforward(self, alpha, beta):
        return ConstDensity(_map_interval(self.support, alpha, beta), self.c / abs(alpha))

    def same_density(self, other):
        return isinstance(other, ConstDensity) and other.c == self.c

    def describe(self):
        return f"const {self.c:g} on {self.support}"


@dataclass(frozen=True)
class PowerDensity(DensitySegment):
    """Density c * |x - center|**exponent."""

    c: float = 1.0
    center: float = 0.0
    exponent: float = 1.0

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("power density needs c > 0")
        if self.exponent == 0:
            raise ValueError("use ConstDensity for exponent 0")

    def _anti(self, x: float, side: int) -> float:
        """Antiderivative; ``side`` (+1/-1) selects the one-sided limit at the
        center and at infinite arguments."""
        p = self.exponent
        u = x - self.center
        if u == 0.0:
            if p > -1.0:
                return 0.0
            return NEG_INF if side > 0 else INF
        sgn = 1.0 if u > 0 else -1.0
        if math.isinf(u):
            if p == -1.0 or p + 1.0 > 0:
                return sgn * INF
            return 0.0
        if p == -1.0:
            return self.c * sgn * math.log(abs(u))
        return self.c * sgn * abs(u) ** (p + 1.0) / (p + 1.0)

    def _integrate(self, lo, hi):
        if lo >= self.center or hi <= self.center:
            side = 1 if lo >= self.center else -1
            return self._anti(hi, side) - self._anti(lo, side)
        left = self._anti(self.center, -1) - self._anti(lo, -1)
        right = self._anti(hi, +1) - self._anti(self.center, +1)
        return xadd(left, right)

    def density(self, x):
        u = abs(x - self.center)
        if u == 0.0:
            return 0.0 if self.exponent > 0 else INF
        return self.c * u ** self.exponent

    def covers_fully(self):
        return True

    def positive_ae(self):
        return True

    def infinite_mass_points(self):
        if self.exponent <= -1.0 and self.support.closure_contains(self.center):
            return (self.center,)
        return ()

    def reciprocal(self):
        return PowerDensity(self.support, 1.0 / self.c, self.center, -self.exponent)

    def inv_integrable_near(self, p, side):
        if p != self.center:
            return True
        return self.exponent < 1.0

    def pushforward(self, alpha, beta):
        c_new = self.c * abs(alpha) ** (-self.exponent - 1.0)
        return PowerDensity(
            _map_interval(self.support, alpha, beta),
            c_new,
            alpha * self.center + beta,
            self.exponent,
        )

    def same_density(self, other):
        return (
            isinstance(other, PowerDensity)
            and other.c == self.c
            and other.center == self.center
            and other.exponent == self.exponent
        )

    def describe(self):
        return f"{self.c:g}*|x-{self.center:g}|^{self.exponent:g} on {self.support}"


@dataclass(frozen=True)
class ExpRecipDensity(DensitySegment):
    """Density c*rate*exp(rate/(x-center))/(x-center)^2 to the right of the
    center (mirrored: to the left).  Its antiderivative is -c*exp(rate/u):
    the Lebesgue-Stieltjes measure of the scale -exp(1/x)."""

    c: float = 1.0
    center: float = 0.0
    rate: float = 1.0
    mirrored: bool = False

    def __post_init__(self):
        if self.c <= 0 or self.rate <= 0:
            raise ValueError("exp-reciprocal density needs c, rate > 0")
        if not self.mirrored and self.support.a < self.center:
            raise ValueError("support must lie right of the center")
        if self.mirrored and self.support.b > self.center:
            raise ValueError("mirrored support must lie left of the center")

    def _anti(self, x: float) -> float:
        if not self.mirrored:
            u = x - self.center
            if u <= 0.0:
                return NEG_INF
            if math.isinf(u):
                return -self.c
            return -self.c * math.exp(self.rate / u)
        u = self.center - x
        if u <= 0.0:
            return INF
        if math.isinf(u):
            return self.c
        return self.c * math.exp(self.rate / u)

    def _integrate(self, lo, hi):
        return self._anti(hi) - self._anti(lo)

    def density(self, x):
        u = (x - self.center) if not self.mirrored else (self.center - x)
        if u <= 0:
            return 0.0
        return self.c * self.rate * math.exp(self.rate / u) / (u * u)

    def covers_fully(self):
        return True

    def positive_ae(self):
        return True

    def infinite_mass_points(self):
        if self.support.closure_contains(self.center):
            return (self.center,)
        return ()

    def inv_mass(self, lo, hi):
        lo = max(lo, self.support.a)
        hi = min(hi, self.support.b)
        if lo >= hi:
            return 0.0
        if math.isinf(lo) or math.isinf(hi):
            return INF  # 1/density grows like u^2/rate at infinity
        return None  # finite, no elementary closed form

    def inv_integrable_near(self, p, side):
        return True  # 1/density -> 0 at the center, bounded on compacts

    def pushforward(self, alpha, beta):
        return ExpRecipDensity(
            _map_interval(self.support, alpha, beta),
            self.c,
            alpha * self.center + beta,
            self.rate * abs(alpha),
            self.mirrored ^ (alpha < 0),
        )

    def same_density(self, other):
        return (
            isinstance(other, ExpRecipDensity)
            and other.c == self.c
            and other.center == self.center
            and other.rate == self.rate
            and other.mirrored == self.mirrored
        )

    def describe(self):
        side = "left" if self.mirrored else "right"
        return (
            f"{self.c:g}*d/dx[-exp({self.rate:g}/(x-{self.center:g}))]"
            f" ({side} branch) on {self.support}"
        )


@dataclass(frozen=True)
class CantorComplementDensity(DensitySegment):
    """Density c on the support minus a Cantor-type set, 0 on the set.

    For a thin rule this equals c*dx as a measure; for a fat rule the limit
    set keeps positive length, which is exactly what makes {0,1}-valued
    scale densities nontrivial.
    """

    rule: RemovalRule = None  # type: ignore[assignment]
    c: float = 1.0
    eval_depth: int = _EVAL_DEPTH

    def __post_init__(self):
        if self.rule is None:
            raise ValueError("rule required")
        if self.c <= 0:
            raise ValueError("density must be positive")
        if not self.support.is_bounded():
            raise ValueError("Cantor constructions need a bounded support")

    def _unit(self, x: float) -> float:
        return (x - self.support.a) / self.support.length

    def _gap_below(self, x: float) -> float:
        if self.rule.residual_fraction(0) == 0.0:
            # thin set: the measure is exactly c*dx on the support
            return max(0.0, min(x, self.support.b) - self.support.a)
        t = self._unit(x)
        return self.support.length * gap_length_below(self.rule, t, self.eval_depth)

    def _integrate(self, lo, hi):
        return self.c * (self._gap_below(hi) - self._gap_below(lo))

    def density(self, x):
        t = self._unit(x)
        return 0.0 if in_limit_set(self.rule, t, self.eval_depth) else self.c

    def covers_fully(self):
        return True  # the removed set is dense-in-gaps: every open piece meets a gap

    def positive_ae(self):
        return self.rule.residual_fraction(0) == 0.0

    def inv_mass(self, lo, hi):
        lo = max(lo, self.support.a)
        hi = min(hi, self.support.b)
        if lo >= hi:
            return 0.0
        if self.rule.residual_fraction(0) == 0.0:
            return (hi - lo) / self.c
        leftover = (hi - lo) - (self._gap_below(hi) - self._gap_below(lo))
        if leftover > 0:
            return INF
        return (hi - lo) / self.c

    def inv_integrable_near(self, p, side):
        if self.rule.residual_fraction(0) == 0.0:
            return True
        return not in_limit_set(self.rule, self._unit(p), self.eval_depth)

    def pushforward(self, alpha, beta):
        return CantorComplementDensity(
            _map_interval(self.support, alpha, beta),
            self.rule,
            self.c / abs(alpha),
            self.eval_depth,
        )

    def same_density(self, other):
        return (
            isinstance(other, CantorComplementDensity)
            and other.c == self.c
            and other.rule == self.rule
        )

    def describe(self):
        return f"const {self.c:g} off a Cantor set ({self.rule.describe()}) on {self.support}"


# ---------------------------------------------------------------------------
# Atoms and singular components


@dataclass(frozen=True)
class Atom:
    point: float
    mass: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError("atom mass must be positive")
        if math.isinf(self.point):
            raise ValueError("atoms sit at finite points")


@dataclass(frozen=True)
class CantorComponent:
    """The equal-split measure on a Cantor-type subset of ``support``."""

    support: Interval
    rule: RemovalRule
    total_mass: float = 1.0
    eval_depth: int = _EVAL_DEPTH

    def __post_init__(self):
        if self.total_mass <= 0:
            raise ValueError("mass must be positive")
        if not self.support.is_bounded():
            raise ValueError("Cantor components need a bounded support")

    def cdf(self, x: float) -> float:
        """Mass of (-inf, x]; continuous, constant on every removed gap."""
        t = (x - self.support.a) / self.support.length
        return self.total_mass * mass_cdf(self.rule, t, self.eval_depth)

    def cmass(self, lo: float, hi: float) -> float:
        lo = max(lo, self.support.a)
        hi = min(hi, self.support.b)
        if lo >= hi:
            return 0.0
        return self.cdf(hi) - self.cdf(lo)

    def pushforward(self, alpha, beta):
        return CantorComponent(
            _map_interval(self.support, alpha, beta),
            self.rule,
            self.total_mass,
            self.eval_depth,
        )

    def describe(self):
        return (
            f"Cantor measure mass {self.total_mass:g} ({self.rule.describe()}) on {self.support}"
        )


@dataclass(frozen=True)
class CantorTower:
    """Countably many Cantor blocks accumulating at one support endpoint.

    Block p >= 1 occupies the dyadic cell (a + D/2^p, a + D/2^(p-1)) of the
    support (a, b), D = b - a, for accumulation at the left endpoint (the
    mirror image for accumulation at the right).  Every block carries an
    affine copy of the same Cantor measure with mass ``block_mass``, so any
    neighbourhood of the accumulation point has infinite mass while compact
    sets away from it meet only finitely many blocks.
    """

    support: Interval
    rule: RemovalRule
    block_mass: float = 1.0
    accumulate_left: bool = True
    eval_depth: int = _EVAL_DEPTH

    def __post_init__(self):
        if self.block_mass <= 0:
            raise ValueError("block mass must be positive")
        if not self.support.is_bounded():
            raise ValueError("towers need a bounded support")

    @property
    def accumulation_point(self) -> float:
        return self.support.a if self.accumulate_left else self.support.b

    def _block(self, p: int) -> Interval:
        d = self.support.length
        if self.accumulate_left:
            return Interval(self.support.a + d * 2.0 ** (-p), self.support.a + d * 2.0 ** (-p + 1))
        return Interval(self.support.b - d * 2.0 ** (-p + 1), self.support.b - d * 2.0 ** (-p))

    def _block_component(self, p: int) -> CantorComponent:
        return CantorComponent(self._block(p), self.rule, self.block_mass, self.eval_depth)

    def blocks_intersecting(self, lo: float, hi: float) -> list[CantorComponent]:
        """Blocks meeting (lo, hi); finite whenever (lo, hi) avoids the
        accumulation point."""
        d = self.support.length
        if self.accumulate_left:
            gap = max(lo, self.support.a) - self.support.a
        else:
            gap = self.support.b - min(hi, self.support.b)
        if gap <= 0.0:
            raise ArithmeticError("infinitely many blocks in range")
        p_max = max(1, math.ceil(math.log2(d / gap)) + 1)
        out = []
        for p in range(1, p_max + 1):
            blk = self._block(p)
            if blk.b > lo and blk.a < hi:
                out.append(self._block_component(p))
        return out

    def cmass(self, lo: float, hi: float) -> float:
        lo = max(lo, self.support.a)
        hi = min(hi, self.support.b)
        if lo >= hi:
            return 0.0
        acc = self.accumulation_point
        if (self.accumulate_left and lo <= acc) or (not self.accumulate_left and hi >= acc):
            return INF
        return sum(b.cmass(lo, hi) for b in self.blocks_intersecting(lo, hi))

    def infinite_mass_points(self):
        return (self.accumulation_point,)

    def pushforward(self, alpha, beta):
        return CantorTower(
            _map_interval(self.support, alpha, beta),
            self.rule,
            self.block_mass,
            self.accumulate_left ^ (alpha < 0),
            self.eval_depth,
        )

    def describe(self):
        side = "left" if self.accumulate_left else "right"
        return (
            f"tower of Cantor blocks (mass {self.block_mass:g} each, {self.rule.describe()})"
            f" accumulating at the {side} end of {self.support}"
        )


# ---------------------------------------------------------------------------
# MeasureSpec


@dataclass(frozen=True)
class MeasureSpec:
    """A Radon measure on ``carrier`` as a sum of closed-form components."""

    carrier: Interval
    segments: tuple[DensitySegment, ...] = ()
    atoms: tuple[Atom, ...] = ()
    cantor_components: tuple[CantorComponent, ...] = ()
    towers: tuple[CantorTower, ...] = ()

    def __post_init__(self):
        for comp in (*self.segments, *self.cantor_components, *self.towers):
            s = comp.support
            if s.a < self.carrier.a or s.b > self.carrier.b:
                raise ValueError(f"component support {s} escapes carrier {self.carrier}")
        for atom in self.atoms:
            if not self.carrier.closure_contains(atom.point):
                raise ValueError(f"atom at {atom.point} outside carrier {self.carrier}")

    # -- construction helpers ------------------------------------------

    @staticmethod
    def lebesgue(carrier: Interval, c: float = 1.0) -> "MeasureSpec":
        return MeasureSpec(carrier, (ConstDensity(carrier, c),))

    @staticmethod
    def zero(carrier: Interval) -> "MeasureSpec":
        return MeasureSpec(carrier)

    def _continuous(self):
        return (*self.segments, *self.cantor_components, *self.towers)

    # -- operations ------------------------------------------------------

    def measure_of(self, j: Interval) -> float:
        """Mass of ``j`` (clipped to the carrier; atoms per closedness)."""
        return self.measure_of_clipped(j)[0]

    def measure_of_clipped(self, j: Interval) -> tuple[float, bool]:
        clipped = not self.carrier.contains_interval(j)
        jj = self.carrier.intersect(j)
        if jj is None:
            return 0.0, clipped
        total = 0.0
        for comp in self._continuous():
            total = xadd(total, comp.cmass(jj.a, jj.b))
        for atom in self.atoms:
            if jj.contains(atom.point):
                total = xadd(total, atom.mass)
        return total, clipped

    def stieltjes(self, base: float, x: float) -> float:
        """F(x) with F(base) = 0 and F(x2) - F(x1) = mass of (x1, x2].

        At an open carrier endpoint the value is the one-sided limit, which
        may be +-inf; it is exact because every component's antiderivative
        is closed-form.
        """
        if not self.carrier.closure_contains(x):
            raise ValueError(f"point {x} outside the carrier closure of {self.carrier}")
        if not self.carrier.closure_contains(base):
            raise ValueError(f"base {base} outside the carrier closure of {self.carrier}")
        if x == base:
            return 0.0
        lo, hi = (base, x) if x > base else (x, base)
        total = 0.0
        for comp in self._continuous():
            total = xadd(total, comp.cmass(lo, hi))
        for atom in self.atoms:
            if lo < atom.point <= hi and self.carrier.contains(atom.point):
                total = xadd(total, atom.mass)
        return total if x > base else -total

    def lebesgue_decompose(self) -> tuple["MeasureSpec", "MeasureSpec"]:
        """(absolutely continuous part, singular part); they sum back to self."""
        ac = MeasureSpec(self.carrier, self.segments)
        sing = MeasureSpec(self.carrier, (), self.atoms, self.cantor_components, self.towers)
        return ac, sing

    def pushforward_affine(self, scale_factor: float, shift: float) -> "MeasureSpec":
        """Image measure under x -> scale_factor*x + shift."""
        if scale_factor == 0:
            raise ValueError("scale factor must be nonzero")
        return MeasureSpec(
            _map_interval(self.carrier, scale_factor, shift),
            tuple(s.pushforward(scale_factor, shift) for s in self.segments),
            tuple(Atom(scale_factor * a.point + shift, a.mass) for a in self.atoms),
            tuple(c.pushforward(scale_factor, shift) for c in self.cantor_components),
            tuple(t.pushforward(scale_factor, shift) for t in self.towers),
        )

    def is_fully_supported(self) -> bool:
        """True iff every open subinterval of the carrier has positive mass."""
        covers = sorted(
            (s.support for s in self.segments if s.covers_fully()),
            key=lambda s: (s.a, s.b),
        )
        reach = self.carrier.a
        for sup in covers:
            if sup.a > reach:
                return False  # a genuine hole of positive length
            reach = max(reach, sup.b)
            if reach >= self.carrier.b:
                return True
        return reach >= self.carrier.b

    # -- structural queries ----------------------------------------------

    def has_singular_part(self) -> bool:
        return bool(self.atoms or self.cantor_components or self.towers)

    def infinite_mass_points(self) -> tuple[float, ...]:
        pts: list[float] = []
        for comp in self._continuous():
            pts.extend(getattr(comp, "infinite_mass_points", tuple)())
        return tuple(sorted(set(pts)))

    def radon_violations(self, region: Interval | None = None) -> tuple[float, ...]:
        """Points of ``region`` (default: the carrier) with infinite local mass."""
        region = region or self.carrier
        return tuple(q for q in self.infinite_mass_points() if region.contains(q))

    def density_positive_ae_on(self, j: Interval) -> bool:
        """Whether Lebesgue << (this measure) on ``j``: the a.c. density must
        be positive a.e. there."""
        covers = sorted(
            (s.support for s in self.segments if s.positive_ae()),
            key=lambda s: (s.a, s.b),
        )
        reach = j.a
        for sup in covers:
            if sup.a > reach:
                return False
            reach = max(reach, sup.b)
            if reach >= j.b:
                return True
        return reach >= j.b

    def _disjoint_segments(self) -> bool:
        segs = sorted(self.segments, key=lambda s: (s.support.a, s.support.b))
        for s1, s2 in zip(segs, segs[1:]):
            if s1.support.overlaps(s2.support) and s1.support.b != s2.support.a:
                return False
        return True

    def inv_density_mass(self, lo: float, hi: float) -> tuple[bool, float | None]:
        """(finite?, value) of the integral of 1/g over (lo, hi), g the a.c.
        density.  Regions not covered by any segment count as g = 0.  The
        value is None when finite but lacking a closed form."""
        if lo >= hi:
            return True, 0.0
        if not self._disjoint_segments():
            raise ValueError("overlapping density segments: pointwise density undefined")
        total: float | None = 0.0
        finite = True
        cursor = lo
        for seg in sorted(self.segments, key=lambda s: s.support.a):
            s = seg.support
            if s.b <= lo or s.a >= hi:
                continue
            if s.a > cursor:
                return False, INF  # uncovered stretch: 1/g = inf there
            piece = seg.inv_mass(max(lo, s.a), min(hi, s.b))
            if piece is None:
                total = None
            elif piece == INF:
                return False, INF
            elif total is not None:
                total += piece
            cursor = max(cursor, s.b)
            if cursor >= hi:
                break
        if cursor < hi:
            return False, INF
        return finite, total

    def describe(self) -> list[str]:
        out = [comp.describe() for comp in self._continuous()]
        out.extend(f"atom mass {a.mass:g} at {a.point:g}" for a in self.atoms)
        return out or ["zero measure"]
