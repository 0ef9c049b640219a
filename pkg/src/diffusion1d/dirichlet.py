"""Effective-interval systems: the structured data of a symmetric
one-dimensional diffusion and the quadratic form it generates.

A diffusion spec is a state interval, a fully supported Radon speed measure,
at most countably many disjoint effective intervals each carrying an adapted
scale function (deeper-than-truncation members of a Cantor gap system are
summarized by ``GapFamily`` records), and an optional killing measure.  Points
outside every effective interval are traps.

The quadratic form acts on test functions that are piecewise linear in each
interval's scale coordinate (or in the space coordinate), making every energy
a finite sum, exact up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .gapsystems import GapFamily
from .measures import (
    Atom,
    CantorComplementDensity,
    CantorComponent,
    CantorTower,
    ConstDensity,
    DensitySegment,
    Interval,
    MeasureSpec,
)
from .scale import AdaptReport, ScaleFunction, is_adapted
from .xreal import INF, NEG_INF, fmt, xadd

_L2_PANELS = 512


class SpanError(ValueError):
    """Raised when points straddle several effective intervals."""


class ExtendError(ValueError):
    """Raised when a state interval cannot be opened up."""


# ---------------------------------------------------------------------------
# The spec


@dataclass(frozen=True)
class EffectiveInterval:
    interval: Interval
    scale: ScaleFunction


@dataclass(frozen=True)
class DiffusionSpec:
    state: Interval
    speed: MeasureSpec
    intervals: tuple[EffectiveInterval, ...] = ()
    killing: MeasureSpec | None = None
    families: tuple[GapFamily, ...] = ()

    def __post_init__(self):
        for k, ei in enumerate(self.intervals[1:], start=1):
            if ei.interval.a < self.intervals[k - 1].interval.a:
                raise ValueError("effective intervals must be in canonical order; use create()")

    @staticmethod
    def create(
        state: Interval,
        speed: MeasureSpec,
        intervals: list[tuple[Interval, ScaleFunction]],
        killing: MeasureSpec | None = None,
        families: tuple[GapFamily, ...] = (),
    ) -> "DiffusionSpec":
        """Build a spec with intervals put into canonical order (sorted by
        left endpoint); family member indices are remapped accordingly."""
        order = sorted(range(len(intervals)), key=lambda k: intervals[k][0].a)
        remap = {old: new for new, old in enumerate(order)}
        fams = tuple(
            replace(f, member_indices=tuple(sorted(remap[i] for i in f.member_indices)))
            for f in families
        )
        evs = tuple(EffectiveInterval(iv, sc) for iv, sc in (intervals[k] for k in order))
        return DiffusionSpec(state, speed, evs, killing, fams)

    # -- location helpers ---------------------------------------------------

    def locate(self, x: float) -> int | None:
        """Index of the effective interval containing x, or None."""
        for k, ei in enumerate(self.intervals):
            if ei.interval.contains(x):
                return k
        return None

    def complement_pieces(self) -> tuple[list[Interval], list[float]]:
        """The state minus all effective intervals, as intervals plus isolated
        points (single shared endpoints belonging to neither neighbour)."""
        pieces: list[Interval] = []
        points: list[float] = []
        cur = self.state.a
        cur_closed = self.state.left_closed
        for ei in self.intervals:
            iv = ei.interval
            if iv.a > cur:
                pieces.append(Interval(cur, iv.a, cur_closed, not iv.left_closed))
            elif iv.a == cur and cur_closed and not iv.left_closed:
                points.append(cur)
            cur = iv.b
            cur_closed = not iv.right_closed
        if cur < self.state.b:
            pieces.append(Interval(cur, self.state.b, cur_closed, self.state.right_closed))
        elif cur == self.state.b and cur_closed and self.state.right_closed:
            points.append(cur)
        return pieces, points

    def digest_data(self) -> str:
        return "; ".join(
            f"{ei.interval}:{ei.scale.describe()}" for ei in self.intervals
        )


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class CheckLine:
    name: str
    passed: bool | None  # None = undecidable
    detail: str = ""

    def render(self) -> str:
        tag = "PASS" if self.passed else ("UNDECIDABLE" if self.passed is None else "FAIL")
        return f"{self.name}: {tag}" + (f"  # {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckLine, ...]
    boundary_flags: tuple[tuple[bool, bool], ...]  # (L0, R0) activation per interval

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def undecidable(self) -> bool:
        return any(c.passed is None for c in self.checks) and not any(
            c.passed is False for c in self.checks
        )

    def to_text(self) -> str:
        lines = [c.render() for c in self.checks]
        lines.append(f"verdict: {'VALID' if self.ok else ('UNDECIDABLE' if self.undecidable else 'INVALID')}")
        return "\n".join(lines)


def _speed_finite_near(spec: DiffusionSpec, pt: float) -> bool:
    """Whether the speed measure is finite on some one-sided neighbourhood of
    ``pt`` (only an infinite-local-mass component at ``pt`` itself can
    prevent this)."""
    return pt not in spec.speed.infinite_mass_points()


def boundary_condition_flags(spec: DiffusionSpec, n: int) -> tuple[bool, bool]:
    """Activation of the Dirichlet (absorbing) boundary cases at the two ends
    of interval n: the interval shares an open state endpoint, the scale limit
    there is finite, and the speed mass nearby is finite."""
    ei = spec.intervals[n]
    iv, s = ei.interval, ei.scale
    left = (
        iv.a == spec.state.a
        and not spec.state.left_closed
        and s.eval(iv.a) > NEG_INF
        and _speed_finite_near(spec, iv.a)
    )
    right = (
        iv.b == spec.state.b
        and not spec.state.right_closed
        and s.eval(iv.b) < INF
        and _speed_finite_near(spec, iv.b)
    )
    return left, right


def _killing_abs_continuity(spec: DiffusionSpec) -> list[CheckLine]:
    """Check k << m on the trap region (the state minus all effective
    intervals), componentwise on the closed-form algebra."""
    k = spec.killing
    if k is None:
        return [CheckLine("killing.absolutely_continuous_off_intervals", True, "no killing")]
    lines: list[CheckLine] = []
    pieces, points = spec.complement_pieces()
    m_atoms = {a.point for a in spec.speed.atoms}

    for atom in k.atoms:
        in_trap_region = any(p.contains(atom.point) for p in pieces) or atom.point in points
        if in_trap_region and atom.point not in m_atoms:
            lines.append(
                CheckLine(
                    f"killing.atom_at_{fmt(atom.point)}",
                    False,
                    "atom off the effective intervals without a matching speed atom",
                )
            )
    for seg in k.segments:
        for piece in pieces:
            ov = piece.intersect(seg.support)
            if ov is None:
                continue
            if isinstance(seg, ConstDensity) and seg.c == 0.0:
                continue
            if spec.speed.density_positive_ae_on(ov):
                continue
            lines.append(
                CheckLine(
                    f"killing.density_on_{ov}",
                    False,
                    "killing density off the effective intervals not dominated by the speed density",
                )
            )
    for comp in (*k.cantor_components, *k.towers):
        for piece in pieces:
            ov = piece.intersect(comp.support)
            if ov is None:
                continue
            twin = any(
                type(other) is type(comp) and other == comp
                for other in (*spec.speed.cantor_components, *spec.speed.towers)
            )
            if twin:
                continue
            if spec.speed.density_positive_ae_on(ov) or not spec.speed.has_singular_part():
                lines.append(
                    CheckLine(
                        f"killing.singular_on_{ov}",
                        False,
                        "singular killing component off the effective intervals, speed has no matching singular part",
                    )
                )
            else:
                lines.append(
                    CheckLine(
                        f"killing.singular_on_{ov}",
                        None,
                        "singular-vs-singular domination not decidable on this component algebra",
                    )
                )
    if not lines:
        lines.append(CheckLine("killing.absolutely_continuous_off_intervals", True))
    return lines


def validate(spec: DiffusionSpec) -> ValidationReport:
    """Check every structural hypothesis of the representation: interval
    containment and disjointness, adaptedness of each scale, full support and
    Radon property of the speed, and domination of the killing measure off
    the effective intervals.  Malformed specs are reported, not raised."""
    checks: list[CheckLine] = []
    flags: list[tuple[bool, bool]] = []

    # speed measure
    checks.append(
        CheckLine(
            "speed.fully_supported",
            spec.speed.is_fully_supported(),
            "every open subinterval of the state must have positive speed mass",
        )
    )
    bad = spec.speed.radon_violations(spec.state)
    checks.append(
        CheckLine(
            "speed.radon",
            not bad,
            "" if not bad else "infinite local mass at " + ", ".join(fmt(q) for q in bad),
        )
    )
    if spec.killing is not None:
        badk = spec.killing.radon_violations(spec.state)
        checks.append(
            CheckLine(
                "killing.radon",
                not badk,
                "" if not badk else "infinite local mass at " + ", ".join(fmt(q) for q in badk),
            )
        )

    # intervals: containment, disjointness, adaptedness
    prev: Interval | None = None
    for n, ei in enumerate(spec.intervals):
        iv, s = ei.interval, ei.scale
        name = f"interval.{n}"
        checks.append(
            CheckLine(
                f"{name}.inside_state",
                spec.state.contains_interval(iv),
                f"{iv} within {spec.state}",
            )
        )
        if s.domain != iv:
            checks.append(
                CheckLine(f"{name}.scale_domain", False, f"scale domain {s.domain} != {iv}")
            )
        if prev is not None:
            checks.append(
                CheckLine(
                    f"{name}.disjoint_from_previous",
                    not prev.overlaps(iv),
                    f"{prev} vs {iv} (common endpoints allowed when shared by neither or one side only)",
                )
            )
        prev = iv

        rep = is_adapted(s, iv, spec.state)
        checks.append(CheckLine(f"{name}.adapted.A", rep.left.ok, rep.left.reason))
        checks.append(CheckLine(f"{name}.adapted.B", rep.right.ok, rep.right.reason))
        l0, r0 = boundary_condition_flags(spec, n)
        flags.append((l0, r0))
        if l0:
            checks.append(
                CheckLine(f"{name}.L0", True, "absorbing condition active at the left state endpoint")
            )
        if r0:
            checks.append(
                CheckLine(f"{name}.R0", True, "absorbing condition active at the right state endpoint")
            )

    checks.extend(_killing_abs_continuity(spec))
    return ValidationReport(tuple(checks), tuple(flags))


# ---------------------------------------------------------------------------
# Boundary classification


@dataclass(frozen=True)
class BoundaryVerdict:
    endpoint: float
    kind: str  # reflecting | absorbing | unreachable | trap-adjacent
    detail: str = ""


def boundary_classification(spec: DiffusionSpec, n: int) -> tuple[BoundaryVerdict, BoundaryVerdict]:
    """Classify the two endpoints of effective interval n from membership and
    limit data alone: members reflect, active absorbing cases absorb, infinite
    scale limits are unreachable; the leftover case (finite limit at an open
    state endpoint with infinite nearby speed mass) is approachable in scale
    but never reached, and is labeled trap-adjacent when the endpoint is an
    actual point of the state."""
    ei = spec.intervals[n]
    iv, s = ei.interval, ei.scale
    l0, r0 = boundary_condition_flags(spec, n)
    out = []
    for left in (True, False):
        pt = iv.a if left else iv.b
        member = iv.left_closed if left else iv.right_closed
        limit = s.eval(pt)
        infinite = limit == (NEG_INF if left else INF)
        absorbing = l0 if left else r0
        if member:
            out.append(BoundaryVerdict(pt, "reflecting", f"member endpoint, scale {fmt(limit)}"))
        elif absorbing:
            out.append(
                BoundaryVerdict(
                    pt, "absorbing", "open state endpoint with finite scale and finite speed mass"
                )
            )
        elif infinite:
            detail = "infinite scale limit"
            if spec.state.contains(pt) and spec.locate(pt) is None:
                detail += "; the endpoint itself is a trap of the state space"
            out.append(BoundaryVerdict(pt, "unreachable", detail))
        elif spec.state.contains(pt):
            out.append(
                BoundaryVerdict(pt, "trap-adjacent", "finite scale limit, infinite speed mass nearby")
            )
        else:
            out.append(
                BoundaryVerdict(
                    pt,
                    "unreachable",
                    "finite scale limit but infinite speed mass: approachable in scale, never in time",
                )
            )
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Test functions


@dataclass(frozen=True)
class IntervalPiece:
    """Knots (x, value) on one effective interval; linear interpolation in
    the scale coordinate (``in_scale``) or in x, constant beyond the outer
    knots toward the interval's endpoints."""

    index: int
    knots: tuple[tuple[float, float], ...]
    in_scale: bool = True

    def __post_init__(self):
        xs = [x for x, _ in self.knots]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("knots must be strictly increasing")
        if len(self.knots) < 1:
            raise ValueError("need at least one knot")


@dataclass(frozen=True)
class ConstPiece:
    span: Interval
    value: float


@dataclass(frozen=True)
class FamilySpan:
    """A linear-in-x stretch riding over the non-enumerated nodes of a gap
    family; the enumerated members under the same stretch carry their own
    IntervalPieces."""

    family_index: int
    x_lo: float
    x_hi: float
    u_lo: float
    slope: float


@dataclass(frozen=True)
class TestFunction:
    pieces: tuple[IntervalPiece, ...] = ()
    plateaus: tuple[ConstPiece, ...] = ()
    family_spans: tuple[FamilySpan, ...] = ()
    compact_support: bool = True

    def clamped(self, lo: float, hi: float) -> "TestFunction":
        """Knotwise clamp of all values into [lo, hi] (the unit-contraction
        surrogate on the piecewise-linear class)."""
        clip = lambda v: min(hi, max(lo, v))
        return TestFunction(
            tuple(
                IntervalPiece(p.index, tuple((x, clip(u)) for x, u in p.knots), p.in_scale)
                for p in self.pieces
            ),
            tuple(ConstPiece(c.span, clip(c.value)) for c in self.plateaus),
            tuple(
                FamilySpan(f.family_index, f.x_lo, f.x_hi, clip(f.u_lo), f.slope)
                for f in self.family_spans
            ),
            self.compact_support,
        )

    def scaled(self, c: float) -> "TestFunction":
        return TestFunction(
            tuple(
                IntervalPiece(p.index, tuple((x, c * u) for x, u in p.knots), p.in_scale)
                for p in self.pieces
            ),
            tuple(ConstPiece(pc.span, c * pc.value) for pc in self.plateaus),
            tuple(
                FamilySpan(f.family_index, f.x_lo, f.x_hi, c * f.u_lo, c * f.slope)
                for f in self.family_spans
            ),
            self.compact_support,
        )


def _piece_value(spec: DiffusionSpec, piece: IntervalPiece, x: float) -> float:
    knots = piece.knots
    if x <= knots[0][0]:
        return knots[0][1]
    if x >= knots[-1][0]:
        return knots[-1][1]
    s = spec.intervals[piece.index].scale
    for (x1, u1), (x2, u2) in zip(knots, knots[1:]):
        if x1 <= x <= x2:
            if piece.in_scale:
                y1, y2, y = s.eval(x1), s.eval(x2), s.eval(x)
                if not (math.isfinite(y1) and math.isfinite(y2)):
                    return u1 if not math.isfinite(y1) else u2
                return u1 + (u2 - u1) * (y - y1) / (y2 - y1)
            return u1 + (u2 - u1) * (x - x1) / (x2 - x1)
    return knots[-1][1]


def evaluate(spec: DiffusionSpec, u: TestFunction, x: float) -> float:
    """Pointwise value of a test function (0 where nothing is specified)."""
    for piece in u.pieces:
        if spec.intervals[piece.index].interval.contains(x):
            return _piece_value(spec, piece, x)
    for fam_span in u.family_spans:
        if fam_span.x_lo <= x <= fam_span.x_hi:
            return fam_span.u_lo + fam_span.slope * (x - fam_span.x_lo)
    for plateau in u.plateaus:
        if plateau.span.contains(x):
            return plateau.value
    return 0.0


# ---------------------------------------------------------------------------
# Energy and domain membership


def _piece_energy(spec: DiffusionSpec, piece: IntervalPiece) -> float:
    ei = spec.intervals[piece.index]
    s = ei.scale
    total = 0.0
    if piece.in_scale:
        ys = [s.eval(x) for x, _ in piece.knots]
        for (y1, (_, u1)), (y2, (_, u2)) in zip(
            zip(ys, piece.knots), zip(ys[1:], piece.knots[1:])
        ):
            du = u2 - u1
            dy = y2 - y1
            if math.isinf(dy):
                if du != 0.0:
                    return INF
                continue
            total += 0.5 * du * du / dy
        return total
    # linear in x: the derivative against the scale is slope * dx/ds
    for (x1, u1), (x2, u2) in zip(piece.knots, piece.knots[1:]):
        slope = (u2 - u1) / (x2 - x1)
        if slope == 0.0:
            continue
        finite, val = s.measure.inv_density_mass(x1, x2)
        if not finite:
            return INF
        if val is None:
            val = _inv_mass_numeric(s.measure, x1, x2)
        total += 0.5 * slope * slope * val
    return total


def _inv_mass_numeric(measure: MeasureSpec, lo: float, hi: float, panels: int = 4096) -> float:
    # labeled numeric fallback: 1/density integrated by midpoints; used only
    # for catalog entries without an elementary reciprocal antiderivative
    h = (hi - lo) / panels
    total = 0.0
    for k in range(panels):
        x = lo + (k + 0.5) * h
        g = sum(seg.density(x) for seg in measure.segments if seg.support.a < x < seg.support.b)
        if g <= 0.0:
            return INF
        total += h / g
    return total


def energy(spec: DiffusionSpec, u: TestFunction) -> float:
    """The quadratic form: half the summed squared scale-derivatives over the
    effective intervals (a finite sum, exact for this function class), plus
    the killing integral when a killing measure is present.  A nonconstant
    stretch across an infinite scale gap yields +inf."""
    total = 0.0
    for piece in u.pieces:
        e = _piece_energy(spec, piece)
        if e == INF:
            return INF
        total += e
    for fam_span in u.family_spans:
        if fam_span.slope == 0.0:
            continue
        fam = spec.families[fam_span.family_index]
        tail = fam.inv_sq_tail(fam_span.x_lo, fam_span.x_hi)
        if tail == INF:
            return INF
        total += 0.5 * fam_span.slope * fam_span.slope * tail
    if spec.killing is not None:
        total = xadd(total, _integral_u_sq(spec, spec.killing, u))
    return total


def _integral_u_sq(spec: DiffusionSpec, mu: MeasureSpec, u: TestFunction) -> float:
    """integral of u^2 d(mu); exact on atoms and constant stretches, panelized
    midpoint Stieltjes sums on linear stretches (not acceptance-graded)."""
    total = 0.0
    for atom in mu.atoms:
        if mu.carrier.contains(atom.point):
            total += atom.mass * evaluate(spec, u, atom.point) ** 2

    def add_span(lo: float, hi: float, value_fn, constant: float | None):
        nonlocal total
        if hi <= lo:
            return
        piece_mass = mu.measure_of(Interval(lo, hi)) if lo < hi else 0.0
        if constant is not None:
            if piece_mass == INF and constant != 0.0:
                total = INF
                return
            if constant != 0.0:
                total += piece_mass * constant * constant
            return
        if piece_mass == 0.0:
            return
        step = (hi - lo) / _L2_PANELS
        for k in range(_L2_PANELS):
            a, b = lo + k * step, lo + (k + 1) * step
            cell = mu.measure_of(Interval(a, b))
            if cell:
                total += cell * value_fn(0.5 * (a + b)) ** 2

    for piece in u.pieces:
        iv = spec.intervals[piece.index].interval
        knots = piece.knots
        lo = max(iv.a, mu.carrier.a)
        hi = min(iv.b, mu.carrier.b)
        if hi <= lo:
            continue
        # constant head and tail, linear interior cells
        add_span(lo, min(hi, knots[0][0]), None, knots[0][1])
        for (x1, u1), (x2, u2) in zip(knots, knots[1:]):
            if u1 == u2:
                add_span(max(lo, x1), min(hi, x2), None, u1)
            else:
                add_span(max(lo, x1), min(hi, x2), lambda x: _piece_value(spec, piece, x), None)
        add_span(max(lo, knots[-1][0]), hi, None, knots[-1][1])
        if total == INF:
            return INF
    for plateau in u.plateaus:
        add_span(plateau.span.a, plateau.span.b, None, plateau.value)
        if total == INF:
            return INF
    for fam_span in u.family_spans:
        if fam_span.slope == 0.0:
            add_span(fam_span.x_lo, fam_span.x_hi, None, fam_span.u_lo)
        else:
            fs = fam_span
            add_span(
                fs.x_lo,
                fs.x_hi,
                lambda x: fs.u_lo + fs.slope * (x - fs.x_lo),
                None,
            )
    return total


@dataclass(frozen=True)
class DomainVerdict:
    ok: bool
    reasons: tuple[str, ...]

    def __bool__(self):
        return self.ok


def in_domain(spec: DiffusionSpec, u: TestFunction) -> DomainVerdict:
    """Membership of u in the form domain: finite energy, square
    integrability against speed plus killing, and zero boundary values where
    the absorbing cases are active."""
    reasons: list[str] = []
    e = energy(spec, u)
    if e == INF:
        reasons.append("infinite energy")

    if not u.compact_support:
        # the only escape from square integrability for this class is a
        # nonzero eventual constant against an infinite tail mass
        for near_right in (False, True):
            tail_value = _eventual_value(spec, u, near_right)
            if tail_value != 0.0:
                pt = spec.state.b if near_right else spec.state.a
                c = _last_specified_bound(spec, u, near_right)
                tail = Interval(c, pt) if near_right else Interval(pt, c)
                mass = spec.speed.measure_of(tail)
                if spec.killing is not None:
                    mass = xadd(mass, spec.killing.measure_of(tail))
                if mass == INF:
                    side = "right" if near_right else "left"
                    reasons.append(f"not square integrable: constant {fmt(tail_value)} against infinite {side} tail mass")

    for n, (l0, r0) in enumerate(_all_flags(spec)):
        if not (l0 or r0):
            continue
        piece = next((p for p in u.pieces if p.index == n), None)
        if l0:
            val = piece.knots[0][1] if piece else 0.0
            if val != 0.0:
                reasons.append(f"interval {n}: absorbing left endpoint needs u = 0, got {fmt(val)}")
        if r0:
            val = piece.knots[-1][1] if piece else 0.0
            if val != 0.0:
                reasons.append(f"interval {n}: absorbing right endpoint needs u = 0, got {fmt(val)}")
    return DomainVerdict(not reasons, tuple(reasons))


def _all_flags(spec: DiffusionSpec) -> list[tuple[bool, bool]]:
    return [boundary_condition_flags(spec, n) for n in range(len(spec.intervals))]


def _eventual_value(spec: DiffusionSpec, u: TestFunction, near_right: bool) -> float:
    best_bound, value = NEG_INF if near_right else INF, 0.0
    for piece in u.pieces:
        iv = spec.intervals[piece.index].interval
        if near_right and iv.b > best_bound:
            best_bound, value = iv.b, piece.knots[-1][1]
        if not near_right and iv.a < best_bound:
            best_bound, value = iv.a, piece.knots[0][1]
    for plateau in u.plateaus:
        if near_right and plateau.span.b >= best_bound:
            best_bound, value = plateau.span.b, plateau.value
        if not near_right and plateau.span.a <= best_bound:
            best_bound, value = plateau.span.a, plateau.value
    if near_right and best_bound < spec.state.b:
        return 0.0
    if not near_right and best_bound > spec.state.a:
        return 0.0
    return value


def _last_specified_bound(spec: DiffusionSpec, u: TestFunction, near_right: bool) -> float:
    xs: list[float] = []
    for piece in u.pieces:
        xs.extend([piece.knots[0][0], piece.knots[-1][0]])
    for plateau in u.plateaus:
        if math.isfinite(plateau.span.a):
            xs.append(plateau.span.a)
        if math.isfinite(plateau.span.b):
            xs.append(plateau.span.b)
    if not xs:
        xs = [0.0]
    return max(xs) if near_right else min(xs)


# ---------------------------------------------------------------------------
# Regular subspace test


def is_dirichlet_subspace(s_tilde: ScaleFunction, s: ScaleFunction) -> str:
    """'yes' / 'no' / 'undecidable': whether the form generated by s_tilde is
    a regular subspace of the one generated by s on the same interval, i.e.
    the measure of s_tilde has a {0,1}-valued density against the measure of
    s.  Decided on the closed-form component algebra."""
    if s_tilde.domain != s.domain:
        raise ValueError("subspace comparison requires matching domains")
    mt, ms = s_tilde.measure, s.measure

    for comp in (*mt.cantor_components, *mt.towers):
        twins = [
            c
            for c in (*ms.cantor_components, *ms.towers)
            if type(c) is type(comp) and c.support.overlaps(comp.support)
        ]
        if any(c == comp for c in twins):
            continue
        if not twins:
            return "no"  # singular component with nothing to dominate it
        return "undecidable"

    for seg in mt.segments:
        cursor = seg.support.a
        for other in sorted(ms.segments, key=lambda o: o.support.a):
            ov = seg.support.intersect(other.support)
            if ov is None:
                continue
            if ov.a > cursor:
                return "no"  # a stretch of seg not dominated at all
            if not _ratio_zero_or_one(seg, other):
                return "no"
            cursor = max(cursor, ov.b)
        if cursor < seg.support.b:
            return "no"
    return "yes"


def _ratio_zero_or_one(seg: DensitySegment, other: DensitySegment) -> bool:
    if seg.same_density(other):
        return True
    # an indicator-type density against the matching full density (either way
    # around) keeps the ratio in {0, 1}
    if isinstance(seg, CantorComplementDensity) and isinstance(other, ConstDensity):
        return seg.c == other.c
    if isinstance(seg, ConstDensity) and isinstance(other, CantorComplementDensity):
        # seg = c dx is NOT dominated on the limit set unless it is null
        return other.c == seg.c and other.rule.residual_fraction(0) == 0.0
    return False


# ---------------------------------------------------------------------------
# Extension to an open state interval


def extend_to_open(spec: DiffusionSpec) -> DiffusionSpec:
    """The essentially equivalent spec on an enlarged open state interval:
    finite endpoints are pushed to infinity and the speed is extended by
    Lebesgue measure outside the old state.  Opening a half-open side needs
    finite speed mass near the endpoint and no active absorbing case there."""
    state = spec.state
    flags = _all_flags(spec)
    new_a, new_b = state.a, state.b
    extra: list[DensitySegment] = []

    if math.isfinite(state.a):
        if not state.left_closed:
            if any(l0 for n, (l0, _) in enumerate(flags) if spec.intervals[n].interval.a == state.a):
                raise ExtendError("absorbing condition active at the left endpoint")
            if not _speed_finite_near(spec, state.a):
                raise ExtendError("infinite speed mass near the open left endpoint")
        new_a = NEG_INF
        extra.append(ConstDensity(Interval(NEG_INF, state.a), 1.0))
    if math.isfinite(state.b):
        if not state.right_closed:
            if any(r0 for n, (_, r0) in enumerate(flags) if spec.intervals[n].interval.b == state.b):
                raise ExtendError("absorbing condition active at the right endpoint")
            if not _speed_finite_near(spec, state.b):
                raise ExtendError("infinite speed mass near the open right endpoint")
        new_b = INF
        extra.append(ConstDensity(Interval(state.b, INF), 1.0))

    if (new_a, new_b) == (state.a, state.b):
        return spec
    new_state = Interval(new_a, new_b)
    new_speed = MeasureSpec(
        new_state,
        spec.speed.segments + tuple(extra),
        spec.speed.atoms,
        spec.speed.cantor_components,
        spec.speed.towers,
    )
    new_killing = None
    if spec.killing is not None:
        new_killing = MeasureSpec(
            new_state,
            spec.killing.segments,
            spec.killing.atoms,
            spec.killing.cantor_components,
            spec.killing.towers,
        )
    return DiffusionSpec(new_state, new_speed, spec.intervals, new_killing, spec.families)


# ---------------------------------------------------------------------------
# Hitting probabilities (closed form)


def hitting_probability(spec: DiffusionSpec, x: float, left: float, right: float) -> float:
    """Probability of reaching ``right`` before ``left`` from x, by the scale
    ratio on the effective interval containing x.  Trap starts return 0; an
    infinite scale limit at a target makes that target unreachable."""
    if not (left < x < right):
        raise ValueError("need left < x < right")
    n = spec.locate(x)
    if n is None:
        return 0.0
    iv = spec.intervals[n].interval
    if not (iv.closure_contains(left) and iv.closure_contains(right)):
        raise SpanError("targets must lie in the closure of one effective interval")
    s = spec.intervals[n].scale
    y_x, y_l, y_r = s.eval(x), s.eval(left), s.eval(right)
    if y_r == INF:
        return 0.0
    if y_l == NEG_INF:
        return 1.0
    return (y_x - y_l) / (y_r - y_l)


# ---------------------------------------------------------------------------
# Test-function builders


def scale_linear_function(
    spec: DiffusionSpec, index: int, knots: list[tuple[float, float]], compact: bool = True
) -> TestFunction:
    return TestFunction((IntervalPiece(index, tuple(knots), True),), compact_support=compact)


def linear_in_x_function(
    spec: DiffusionSpec, knots: list[tuple[float, float]], compact: bool = True
) -> TestFunction:
    """Decompose a global piecewise-linear-in-x function (given by knots,
    constant outside) into per-interval pieces, family spans over the
    non-enumerated nodes, and plateaus on trap intervals."""
    if len(knots) < 2:
        raise ValueError("need at least two knots")
    xs = [x for x, _ in knots]
    x_lo, x_hi = xs[0], xs[-1]

    def val(x: float) -> float:
        if x <= x_lo:
            return knots[0][1]
        if x >= x_hi:
            return knots[-1][1]
        for (x1, u1), (x2, u2) in zip(knots, knots[1:]):
            if x1 <= x <= x2:
                return u1 + (u2 - u1) * (x - x1) / (x2 - x1)
        return knots[-1][1]

    pieces = []
    for k, ei in enumerate(spec.intervals):
        iv = ei.interval
        lo, hi = max(iv.a, x_lo), min(iv.b, x_hi)
        if hi <= lo:
            continue
        inner = [x for x in xs if lo < x < hi]
        grid = [lo, *inner, hi]
        pieces.append(
            IntervalPiece(k, tuple((x, val(x)) for x in grid), in_scale=False)
        )
    spans = []
    for fi, fam in enumerate(spec.families):
        for (x1, _), (x2, _) in zip(knots, knots[1:]):
            lo, hi = max(x1, fam.support.a), min(x2, fam.support.b)
            if hi <= lo:
                continue
            slope = (val(x2) - val(x1)) / (x2 - x1)
            spans.append(FamilySpan(fi, lo, hi, val(lo), slope))
    plateaus = []
    comp, _pts = spec.complement_pieces()
    for piece_iv in comp:
        if any(f.support.overlaps(piece_iv) for f in spec.families):
            continue
        ov = piece_iv.intersect(Interval(x_lo, x_hi, True, True)) if x_hi > x_lo else None
        if ov is not None:
            plateaus.append(ConstPiece(ov, val(0.5 * (ov.a + ov.b))))
    return TestFunction(tuple(pieces), tuple(plateaus), tuple(spans), compact)
