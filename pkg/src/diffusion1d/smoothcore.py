"""Smooth functions inside the form: containment, core criterion, closability
of densities, and the merging that identifies the closure of the smooth
compactly supported functions.

The operations here revolve around two exact quantities between base points
e_i, e_j of effective intervals:

* the total scale mass lambda_s([e_i, e_j]) (sum of all scale measures), and
* the leftover Lebesgue mass lambda_l([e_i, e_j]) of the trap region.

Two intervals are scale-connected when the first is finite and the second is
zero; this is an equivalence relation whose classes are contiguous runs, so
only adjacent pairs ever need testing.  Gap-family tails keep both quantities
exact for truncated Cantor systems.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, replace

from .dirichlet import DiffusionSpec, EffectiveInterval
from .gapsystems import NATURAL, GapFamily, build_gap_system
from .measures import (
    CantorComplementDensity,
    ConstDensity,
    DensitySegment,
    ExpRecipDensity,
    Interval,
    MeasureSpec,
    PowerDensity,
    default_base_point,
)
from .scale import ScaleFunction
from .xreal import INF, NEG_INF, fmt, xadd


class SmoothContainmentError(ValueError):
    """The smooth compactly supported functions are not all in the form."""


# ---------------------------------------------------------------------------
# Containment of smooth functions


@dataclass(frozen=True)
class SmoothReport:
    ok: bool
    reason: str = ""
    window_sum: float | None = None

    def __bool__(self):
        return self.ok


def _inv_blow_points(seg: DensitySegment) -> tuple[float, ...]:
    if isinstance(seg, PowerDensity) and seg.exponent >= 1.0:
        if seg.support.closure_contains(seg.center):
            return (seg.center,)
    return ()


def contains_smooth(spec: DiffusionSpec, window: Interval | None = None) -> SmoothReport:
    """Whether every smooth compactly supported function belongs to the form:
    Lebesgue measure must be absolutely continuous against each scale measure
    and the reciprocal scale densities must be summably integrable, either on
    the given window or (window=None) locally around every point."""
    for n, ei in enumerate(spec.intervals):
        iv = ei.interval
        if not ei.scale.measure.density_positive_ae_on(Interval(iv.a, iv.b)):
            return SmoothReport(
                False, f"Lebesgue measure not absolutely continuous against the scale on interval {n}"
            )

    if window is None:
        for n, ei in enumerate(spec.intervals):
            for seg in ei.scale.measure.segments:
                for q in _inv_blow_points(seg):
                    if ei.interval.closure_contains(q):
                        return SmoothReport(
                            False,
                            f"reciprocal scale density not locally integrable at {fmt(q)} (interval {n})",
                        )
        return SmoothReport(True)

    total: float | None = 0.0
    for n, ei in enumerate(spec.intervals):
        iv = ei.interval
        lo, hi = max(iv.a, window.a), min(iv.b, window.b)
        if hi <= lo:
            continue
        finite, val = ei.scale.measure.inv_density_mass(lo, hi)
        if not finite:
            return SmoothReport(
                False, f"reciprocal scale density not integrable on interval {n} within {window}"
            )
        total = None if (val is None or total is None) else total + val
    for fam in spec.families:
        lo, hi = max(window.a, fam.support.a), min(window.b, fam.support.b)
        if hi <= lo:
            continue
        tail = fam.inv_sq_tail(lo, hi)
        if tail == INF:
            return SmoothReport(False, "reciprocal scale densities diverge over the family tail")
        if total is not None:
            total += tail
    return SmoothReport(True, "", total)


# ---------------------------------------------------------------------------
# Scale connection


@dataclass(frozen=True)
class ConnectionWitness:
    i: int
    j: int
    connected: bool
    lambda_s: float
    lambda_l: float
    endpoints_consistent: bool | None = None


def scale_connected(
    spec: DiffusionSpec, i: int, j: int, use_ac_parts: bool = False, _comp=None
) -> ConnectionWitness:
    """Exact witness masses between the base points of intervals i and j and
    the resulting verdict.  With ``use_ac_parts`` the scale measures are
    replaced by their absolutely continuous parts (the variant driving the
    merging)."""
    if i == j:
        return ConnectionWitness(i, j, True, 0.0, 0.0)
    i, j = min(i, j), max(i, j)
    lo = spec.intervals[i].scale.base_point
    hi = spec.intervals[j].scale.base_point

    lam_s = 0.0
    # intervals are sorted and disjoint, so only indices i..j can meet [lo, hi]
    for ei in spec.intervals[i : j + 1]:
        iv = ei.interval
        olo, ohi = max(iv.a, lo), min(iv.b, hi)
        if ohi <= olo:
            continue
        measure = ei.scale.ac_part().measure if use_ac_parts else ei.scale.measure
        lam_s = xadd(lam_s, measure.measure_of(Interval(olo, ohi)))
    for fam in spec.families:
        lam_s = xadd(lam_s, fam.lambda_s_tail(lo, hi))

    # leftover Lebesgue mass: complement pieces minus the not-yet-enumerated
    # effective gaps hiding in family nodes (exact by shared endpoints)
    if _comp is None:
        pieces = spec.complement_pieces()[0]
        ends = [p.b for p in pieces]
    else:
        pieces, ends = _comp
    lam_l = 0.0
    for piece in pieces[bisect.bisect_right(ends, lo) :]:
        if piece.a >= hi:
            break
        plo, phi = max(piece.a, lo), min(piece.b, hi)
        if phi <= plo:
            continue
        future = sum(fam.gap_tail(plo, phi) for fam in spec.families)
        lam_l += (phi - plo) - future

    connected = lam_s < INF and lam_l == 0.0
    consistent = None
    if connected:
        consistent = _closed_endpoints_between(spec, i, j)
    return ConnectionWitness(i, j, connected, lam_s, lam_l, consistent)


def _closed_endpoints_between(spec: DiffusionSpec, i: int, j: int) -> bool:
    """Post-hoc consistency: between connected intervals, every enumerated
    interval is closed and the two facing endpoints are closed."""
    if not (spec.intervals[i].interval.right_closed and spec.intervals[j].interval.left_closed):
        return False
    lo = spec.intervals[i].interval.b
    hi = spec.intervals[j].interval.a
    for k in range(i + 1, j):
        iv = spec.intervals[k].interval
        if iv.a >= lo and iv.b <= hi:
            if not (iv.left_closed and iv.right_closed):
                return False
    return True


@dataclass(frozen=True)
class ConnectionGraph:
    classes: tuple[tuple[int, ...], ...]
    adjacent_witnesses: tuple[ConnectionWitness, ...]
    use_ac_parts: bool

    def class_of(self, n: int) -> int:
        for k, cls in enumerate(self.classes):
            if n in cls:
                return k
        raise IndexError(n)


def connection_classes(spec: DiffusionSpec, use_ac_parts: bool = False) -> ConnectionGraph:
    """Equivalence classes of the scale connection.  The relation is monotone
    in the spanned interval, so classes are contiguous runs and adjacent-pair
    tests determine everything."""
    n = len(spec.intervals)
    pieces = spec.complement_pieces()[0]
    comp = (pieces, [p.b for p in pieces])
    witnesses = [scale_connected(spec, k, k + 1, use_ac_parts, _comp=comp) for k in range(n - 1)]
    classes: list[tuple[int, ...]] = []
    current = [0] if n else []
    for k, w in enumerate(witnesses):
        if w.connected:
            current.append(k + 1)
        else:
            classes.append(tuple(current))
            current = [k + 1]
    if current:
        classes.append(tuple(current))
    return ConnectionGraph(tuple(classes), tuple(witnesses), use_ac_parts)


# ---------------------------------------------------------------------------
# The core criterion


def _fmt_indices(idx) -> str:
    idx = list(idx)
    if len(idx) <= 8:
        return str(idx)
    return f"[{idx[0]}..{idx[-1]}] ({len(idx)} intervals)"


@dataclass(frozen=True)
class CoreReport:
    verdict: str  # "yes" | "no" | "no-smooth-containment"
    smooth: SmoothReport
    scales_absolutely_continuous: tuple[bool, ...]
    graph: ConnectionGraph | None

    @property
    def is_core(self) -> bool:
        return self.verdict == "yes"

    def to_lines(self) -> list[str]:
        lines = [f"core: {'YES' if self.is_core else 'NO'} ({self.verdict})"]
        if self.verdict == "no-smooth-containment":
            lines.append(f"  smooth functions not contained: {self.smooth.reason}")
            return lines
        bad = [n for n, ok in enumerate(self.scales_absolutely_continuous) if not ok]
        if bad:
            lines.append(f"  scales with singular parts: {_fmt_indices(bad)}")
        else:
            lines.append("  all scales absolutely continuous")
        if self.graph is not None:
            for k, cls in enumerate(self.graph.classes):
                tag = "isolated" if len(cls) == 1 else "connected"
                lines.append(f"  class {k}: intervals {_fmt_indices(cls)} ({tag})")
        return lines


def is_special_standard_core(spec: DiffusionSpec) -> CoreReport:
    """Whether the smooth compactly supported functions are a special standard
    core: every scale absolutely continuous and every interval scale-isolated.
    When they are not even contained in the form, the verdict is the distinct
    'no-smooth-containment'."""
    smooth = contains_smooth(spec)
    if not smooth.ok:
        return CoreReport("no-smooth-containment", smooth, (), None)
    ac_flags = tuple(not ei.scale.measure.has_singular_part() for ei in spec.intervals)
    graph = connection_classes(spec, use_ac_parts=False)
    singleton = all(len(cls) == 1 for cls in graph.classes)
    verdict = "yes" if (all(ac_flags) and singleton) else "no"
    return CoreReport(verdict, smooth, ac_flags, graph)


# ---------------------------------------------------------------------------
# Closability of density-driven forms


@dataclass(frozen=True)
class HamzaDensity:
    """The measure nu(dx) = a(x) dx (plus optional non-a.c. parts) feeding the
    smooth-function energy form."""

    measure: MeasureSpec

    @staticmethod
    def from_segments(segments: tuple[DensitySegment, ...]) -> "HamzaDensity":
        return HamzaDensity(MeasureSpec(Interval.real_line(), segments))

    def a(self, x: float) -> float:
        return sum(
            seg.density(x) for seg in self.measure.segments if seg.support.closure_contains(x)
        )


@dataclass(frozen=True)
class RegularSetResult:
    intervals: tuple[Interval, ...]  # maximal open intervals of regular points
    truncated: bool
    notes: tuple[str, ...]
    covering: tuple[tuple[Interval, DensitySegment | None], ...]  # per regular component


def _expand_segments(
    nu: HamzaDensity, gap_depth: int
) -> tuple[list[DensitySegment], list[tuple[CantorComplementDensity, bool]], bool]:
    """Replace fat Cantor-complement densities by their enumerated gap pieces;
    thin ones act as plain constants."""
    plain: list[DensitySegment] = []
    fat: list[tuple[CantorComplementDensity, bool]] = []
    truncated = False
    for seg in nu.measure.segments:
        if isinstance(seg, CantorComplementDensity):
            if seg.rule.residual_fraction(0) == 0.0:
                plain.append(ConstDensity(seg.support, seg.c))
            else:
                fat.append((seg, True))
                truncated = True
                from . import cantorsets

                a, span = seg.support.a, seg.support.length
                for lo_u, hi_u, _gen in cantorsets.gaps(seg.rule, gap_depth):
                    plain.append(ConstDensity(Interval(a + span * lo_u, a + span * hi_u), seg.c))
        else:
            plain.append(seg)
    plain.sort(key=lambda s: (s.support.a, s.support.b))
    for s1, s2 in zip(plain, plain[1:]):
        if s1.support.overlaps(s2.support) and s1.support.b != s2.support.a:
            raise ValueError("overlapping density segments: pointwise density undefined")
    return plain, fat, truncated


def regular_set(nu: HamzaDensity, gap_depth: int = 12) -> RegularSetResult:
    """The maximal open intervals of points near which 1/a is integrable,
    decided segmentwise from local exponents.  Fat Cantor-complement
    densities contribute their gaps to the chosen generation depth (reported
    as truncated)."""
    segments, fat, truncated = _expand_segments(nu, gap_depth)
    notes = []
    if truncated:
        notes.append(
            f"fat Cantor-complement density: regular gaps enumerated to generation {gap_depth};"
            " deeper gaps omitted"
        )

    # elementary regions over the whole line
    cuts: set[float] = set()
    for seg in segments:
        for p in (seg.support.a, seg.support.b):
            if math.isfinite(p):
                cuts.add(p)
        if isinstance(seg, PowerDensity) and seg.support.a < seg.center < seg.support.b:
            cuts.add(seg.center)
    grid = [NEG_INF, *sorted(cuts), INF]

    def covering_segment(lo: float, hi: float) -> DensitySegment | None:
        for seg in segments:
            if seg.support.a <= lo and seg.support.b >= hi:
                return seg
        return None

    def region_regular(seg: DensitySegment | None) -> bool:
        if seg is None:
            return False
        if isinstance(seg, ConstDensity):
            return seg.c > 0
        return True

    regions = []
    for lo, hi in zip(grid, grid[1:]):
        seg = covering_segment(lo, hi)
        regions.append((lo, hi, seg, region_regular(seg)))

    # join regular regions across regular breakpoints
    out: list[Interval] = []
    covering: list[tuple[Interval, DensitySegment | None]] = []
    open_lo: float | None = None
    for k, (lo, hi, seg, reg) in enumerate(regions):
        if reg and open_lo is None:
            open_lo = lo
        if not reg and open_lo is not None:
            out.append(Interval(open_lo, lo))
            open_lo = None
        if reg and k + 1 < len(regions):
            nxt = regions[k + 1]
            join = (
                nxt[3]
                and seg.inv_integrable_near(hi, -1)
                and nxt[2].inv_integrable_near(hi, +1)
            )
            if not join:
                out.append(Interval(open_lo, hi))
                open_lo = None
    if open_lo is not None:
        out.append(Interval(open_lo, INF))

    for iv in out:
        covering.append((iv, covering_segment(iv.a, iv.b)))
    return RegularSetResult(tuple(out), truncated, tuple(notes), tuple(covering))


@dataclass(frozen=True)
class HamzaDecision:
    closable: bool
    reason: str
    regular: RegularSetResult | None

    def __bool__(self):
        return self.closable


def hamza_closable(nu: HamzaDensity, gap_depth: int = 12) -> HamzaDecision:
    """Closability of the smooth-function energy form driven by nu: the
    measure must be absolutely continuous and its density must vanish a.e. on
    the singular set.  Both checks are symbolic on the component algebra."""
    if nu.measure.has_singular_part():
        return HamzaDecision(
            False, "condition (1): the measure is not absolutely continuous", None
        )
    rs = regular_set(nu, gap_depth)
    # a positive-length singular region carrying a positive density would
    # violate condition (2); catalog densities produce singular regions only
    # where they vanish, so scan for the (defensive) counterexample
    segments, _fat, _trunc = _expand_segments(nu, gap_depth)
    for seg in segments:
        if isinstance(seg, ConstDensity) and seg.c == 0.0:
            continue
        sup = seg.support
        uncovered_lo = sup.a
        for iv in rs.intervals:
            ov_lo, ov_hi = max(sup.a, iv.a), min(sup.b, iv.b)
            if ov_hi <= ov_lo:
                continue
            if ov_lo > uncovered_lo and not isinstance(seg, CantorComplementDensity):
                return HamzaDecision(
                    False,
                    "condition (2): positive density on a positive-length singular region",
                    rs,
                )
            uncovered_lo = max(uncovered_lo, ov_hi)
        if uncovered_lo < sup.b and not isinstance(seg, CantorComplementDensity):
            return HamzaDecision(
                False,
                "condition (2): positive density on a positive-length singular region",
                rs,
            )
    return HamzaDecision(True, "closable", rs)


def intervals_from_density(
    nu: HamzaDensity,
    state: Interval | None = None,
    speed: MeasureSpec | None = None,
    gap_depth: int = 12,
) -> DiffusionSpec:
    """The effective-interval system generated by the closure of the
    smooth-function form with density a: one interval per regular component,
    scale with derivative 1/a, endpoint membership by finiteness of the
    endpoint and of the scale limit."""
    decision = hamza_closable(nu, gap_depth)
    if not decision.closable:
        raise ValueError(f"density not closable: {decision.reason}")
    state = state or Interval.real_line()
    speed = speed or MeasureSpec.lebesgue(state)
    rs = decision.regular
    assert rs is not None

    segments, fat, _trunc = _expand_segments(nu, gap_depth)
    intervals: list[tuple[Interval, ScaleFunction]] = []
    families: list[GapFamily] = []

    fat_supports = [seg.support for seg, _ in fat]
    plain_components = [
        iv for iv in rs.intervals if not any(fs.overlaps(iv) for fs in fat_supports)
    ]

    for iv in plain_components:
        covers = []
        for seg in segments:
            lo, hi = max(seg.support.a, iv.a), min(seg.support.b, iv.b)
            if hi <= lo:
                continue
            rec = seg.reciprocal()
            if rec is None:
                raise ValueError(
                    f"scale density 1/a outside the closed-form catalog for {seg.describe()}"
                )
            covers.append(replace(rec, support=Interval(lo, hi)))
        e = default_base_point(iv)
        probe = MeasureSpec(Interval(iv.a, iv.b, math.isfinite(iv.a), math.isfinite(iv.b)), tuple(covers))
        left_in = math.isfinite(iv.a) and probe.measure_of(Interval(iv.a, e)) < INF
        right_in = math.isfinite(iv.b) and probe.measure_of(Interval(e, iv.b)) < INF
        domain = Interval(iv.a, iv.b, left_in, right_in)
        measure = MeasureSpec(domain, tuple(covers))
        intervals.append((domain, ScaleFunction(domain, e, measure, None)))

    for seg, _ in fat:
        fam_intervals, family = build_gap_system(
            Interval.closed(seg.support.a, seg.support.b),
            seg.rule,
            gap_depth,
            recipe=NATURAL,
            density=1.0 / seg.c,
            rays=False,
            index_offset=len(intervals),
        )
        intervals.extend(fam_intervals)
        families.append(family)

    return DiffusionSpec.create(state, speed, intervals, None, tuple(families))


# ---------------------------------------------------------------------------
# The merging of connection classes


class MergeError(ValueError):
    pass


@dataclass(frozen=True)
class MergeResult:
    classes: tuple[tuple[int, ...], ...]
    merged: tuple[EffectiveInterval, ...]
    spec: DiffusionSpec
    smooth: SmoothReport

    def to_lines(self) -> list[str]:
        lines = [f"{len(self.classes)} equivalence class(es)"]
        for k, (cls, ei) in enumerate(zip(self.classes, self.merged)):
            iv = ei.interval
            lines.append(
                f"class {k}: intervals {_fmt_indices(cls)} -> {iv}"
                f" [{'closed' if iv.left_closed else 'open'} left,"
                f" {'closed' if iv.right_closed else 'open'} right];"
                f" scale: {ei.scale.describe()}"
            )
        return lines

    def csv_members(self, cls) -> str:
        return _fmt_indices(cls)

    def csv_rows(self) -> list[dict]:
        rows = []
        for k, (cls, ei) in enumerate(zip(self.classes, self.merged)):
            iv = ei.interval
            rows.append(
                {
                    "class": k,
                    "members": len(cls),
                    "a": iv.a,
                    "b": iv.b,
                    "a_member": int(iv.left_closed),
                    "b_member": int(iv.right_closed),
                    "scale": ei.scale.form or "stieltjes",
                }
            )
        return rows


def _consolidate(segments: list[DensitySegment]) -> list[DensitySegment]:
    segs = sorted(segments, key=lambda s: (s.support.a, s.support.b))
    out: list[DensitySegment] = []
    for seg in segs:
        if (
            out
            and isinstance(seg, ConstDensity)
            and isinstance(out[-1], ConstDensity)
            and out[-1].c == seg.c
            and math.isclose(out[-1].support.b, seg.support.a, rel_tol=1e-12, abs_tol=1e-15)
        ):
            prev = out.pop()
            out.append(
                ConstDensity(
                    Interval(
                        prev.support.a,
                        seg.support.b,
                        prev.support.left_closed,
                        seg.support.right_closed,
                    ),
                    seg.c,
                )
            )
        else:
            out.append(seg)
    return out


def cinf_merge(spec: DiffusionSpec) -> MergeResult:
    """Fuse each equivalence class of the a.c.-scale connection into one
    effective interval whose scale integrates the summed a.c. parts; the
    result is the system of the closure of the smooth compactly supported
    functions inside the form."""
    smooth = contains_smooth(spec)
    if not smooth.ok:
        raise SmoothContainmentError(smooth.reason)
    graph = connection_classes(spec, use_ac_parts=True)

    class_of_member: dict[int, int] = {}
    for k, cls in enumerate(graph.classes):
        for n in cls:
            class_of_member[n] = k

    merged_list: list[tuple[Interval, ScaleFunction]] = []
    old_to_new: dict[int, int] = {}
    for cls in graph.classes:
        lo = min(spec.intervals[n].interval.a for n in cls)
        hi = max(spec.intervals[n].interval.b for n in cls)
        segments: list[DensitySegment] = []
        for n in cls:
            ac = spec.intervals[n].scale.ac_part()
            if not ac.strictly_increasing:
                raise MergeError(f"degenerate absolutely continuous part on interval {n}")
            segments.extend(ac.measure.segments)
        for fam in spec.families:
            if len(cls) > 1 and any(m in cls for m in fam.member_indices):
                segments.extend(fam.node_segments(lo, hi))
        segments = _consolidate(segments)

        # membership of the merged endpoints: the endpoint must be finite, a
        # point of the state, and carry a finite merged-scale limit
        probe_carrier = Interval(lo, hi, math.isfinite(lo), math.isfinite(hi))
        probe = MeasureSpec(probe_carrier, tuple(segments))
        e = default_base_point(Interval(lo, hi))
        left_in = (
            math.isfinite(lo)
            and spec.state.contains(lo)
            and probe.measure_of(Interval(lo, e)) < INF
        )
        right_in = (
            math.isfinite(hi)
            and spec.state.contains(hi)
            and probe.measure_of(Interval(e, hi)) < INF
        )
        domain = Interval(lo, hi, left_in, right_in)
        measure = MeasureSpec(domain, tuple(segments))
        form = None
        if len(segments) == 1 and isinstance(segments[0], ConstDensity):
            form = "linear" if segments[0].c == 1.0 else f"linear (density {segments[0].c:g})"
        scale = ScaleFunction(domain, e, measure, form)
        for n in cls:
            old_to_new[n] = len(merged_list)
        merged_list.append((domain, scale))

    kept_families = []
    for fam in spec.families:
        member_classes = {class_of_member[m] for m in fam.member_indices}
        if all(len(graph.classes[k]) == 1 for k in member_classes):
            kept_families.append(
                replace(fam, member_indices=tuple(old_to_new[m] for m in fam.member_indices))
            )

    new_spec = DiffusionSpec.create(
        spec.state, spec.speed, merged_list, spec.killing, tuple(kept_families)
    )
    merged = new_spec.intervals
    return MergeResult(graph.classes, merged, new_spec, smooth)
