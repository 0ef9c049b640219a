"""Effective-interval systems: validation verdicts on the classical
examples, boundary classification, exact energies, domain membership,
subspace comparison, state extension, hitting probabilities."""

import math
from fractions import Fraction

import pytest

from diffusion1d import gallery
from diffusion1d.cantorsets import ConstantRemoval, GeometricRemoval
from diffusion1d.dirichlet import (
    DiffusionSpec,
    SpanError,
    ExtendError,
    boundary_classification,
    energy,
    extend_to_open,
    hitting_probability,
    in_domain,
    is_dirichlet_subspace,
    linear_in_x_function,
    scale_linear_function,
    validate,
)
from diffusion1d.measures import (
    Atom,
    CantorComplementDensity,
    ConstDensity,
    Interval,
    MeasureSpec,
)
from diffusion1d.scale import ScaleFunction

INF = math.inf


class TestValidate:
    def test_two_rays_valid(self):
        assert validate(gallery.two_rays()).ok

    def test_closed_state_placement_invalid(self):
        rep = validate(gallery.absorbing_bm_on_closed_state())
        assert not rep.ok
        failed = [c.name for c in rep.checks if c.passed is False]
        assert "interval.0.adapted.A" in failed and "interval.0.adapted.B" in failed

    def test_empty_interval_list_is_trivially_valid(self):
        state = Interval.real_line()
        spec = DiffusionSpec.create(state, MeasureSpec.lebesgue(state), [])
        assert validate(spec).ok

    def test_overlapping_intervals_reported(self):
        state = Interval.real_line()
        a = Interval.closed(0.0, 2.0)
        b = Interval.closed(1.0, 3.0)
        spec = DiffusionSpec.create(
            state,
            MeasureSpec.lebesgue(state),
            [(a, ScaleFunction.natural(a)), (b, ScaleFunction.natural(b))],
        )
        rep = validate(spec)
        assert not rep.ok
        assert any("disjoint" in c.name and c.passed is False for c in rep.checks)

    def test_interval_outside_state_reported(self):
        state = Interval(0.0, 1.0)
        iv = Interval.closed(0.5, 2.0)
        speed = MeasureSpec.lebesgue(Interval(0.0, 2.5))
        with pytest.raises(ValueError):
            # the speed carrier must cover the state; mismatched carrier is a
            # construction error, interval containment is a report
            DiffusionSpec.create(state, MeasureSpec.lebesgue(state), [(iv, ScaleFunction.natural(iv))])
            raise ValueError  # reached only if create did not raise

    def test_killing_atom_needs_speed_atom(self):
        state = Interval.real_line()
        iv = Interval.closed(1.0, 2.0)
        killing = MeasureSpec(state, atoms=(Atom(0.0, 1.0),))
        spec = DiffusionSpec.create(
            state,
            MeasureSpec.lebesgue(state),
            [(iv, ScaleFunction.natural(iv))],
            killing=killing,
        )
        rep = validate(spec)
        assert not rep.ok
        speed2 = MeasureSpec(state, (ConstDensity(state, 1.0),), (Atom(0.0, 2.0),))
        spec2 = DiffusionSpec.create(state, speed2, [(iv, ScaleFunction.natural(iv))], killing=killing)
        assert validate(spec2).ok

    def test_boundary_flags(self):
        rep = validate(gallery.absorbing_bm())
        assert rep.ok
        assert rep.boundary_flags == ((True, True),)


class TestBoundaryClassification:
    def test_bessel2(self):
        left, right = boundary_classification(gallery.bessel(2), 0)
        assert left.kind == "unreachable" and "trap" in left.detail
        assert right.kind == "unreachable"

    def test_absorbing_bm(self):
        left, right = boundary_classification(gallery.absorbing_bm(), 0)
        assert left.kind == "absorbing" and right.kind == "absorbing"

    def test_reflecting_closed_interval(self):
        state = Interval.real_line()
        iv = Interval.closed(0.0, 1.0)
        spec = DiffusionSpec.create(
            state, MeasureSpec.lebesgue(state), [(iv, ScaleFunction.natural(iv))]
        )
        left, right = boundary_classification(spec, 0)
        assert left.kind == "reflecting" and right.kind == "reflecting"


class TestEnergy:
    def test_tent(self):
        bm = gallery.absorbing_bm()
        tent = scale_linear_function(bm, 0, [(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)])
        assert energy(bm, tent) == pytest.approx(2.0)

    def test_constant_zero_energy(self):
        bm = gallery.absorbing_bm()
        const = scale_linear_function(bm, 0, [(0.25, 1.0), (0.75, 1.0)])
        assert energy(bm, const) == 0.0

    def test_killing_term_for_constant(self):
        state = Interval.real_line()
        iv = Interval.closed(0.0, 1.0)
        killing = MeasureSpec(state, (ConstDensity(Interval(0.0, 1.0), 2.0),))
        spec = DiffusionSpec.create(
            state, MeasureSpec.lebesgue(state), [(iv, ScaleFunction.natural(iv))], killing=killing
        )
        const = scale_linear_function(spec, 0, [(0.0, 3.0), (1.0, 3.0)])
        # zero derivative, killing contributes 9 * k([0,1]) = 18
        assert energy(spec, const) == pytest.approx(18.0)

    def test_infinite_scale_gap_with_jump_is_infinite(self):
        b2 = gallery.bessel(2)
        u = scale_linear_function(b2, 0, [(0.0, 1.0), (1.0, 0.0)])
        assert energy(b2, u) == INF
        flat = scale_linear_function(b2, 0, [(0.0, 1.0), (1.0, 1.0)])
        assert energy(b2, flat) == 0.0

    def test_off_interval_support_contributes_nothing(self):
        spec = gallery.two_rays()
        from diffusion1d.dirichlet import ConstPiece, TestFunction

        u = TestFunction(plateaus=(ConstPiece(Interval(5.0, 6.0), 3.0),))
        assert energy(spec, u) == 0.0

    def test_log_scale_exact_energy(self):
        b2 = gallery.bessel(2)
        # knots at e^0, e^1: du/ds = 1 over one unit of scale
        u = scale_linear_function(b2, 0, [(1.0, 0.0), (math.e, 1.0)])
        assert energy(b2, u) == pytest.approx(0.5, rel=1e-12)


class TestInDomain:
    def test_tent_in_absorbing_domain(self):
        bm = gallery.absorbing_bm()
        tent = scale_linear_function(bm, 0, [(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)])
        assert in_domain(bm, tent).ok

    def test_boundary_violation(self):
        bm = gallery.absorbing_bm()
        u = scale_linear_function(bm, 0, [(0.0, 1.0), (1.0, 0.0)])
        verdict = in_domain(bm, u)
        assert not verdict.ok and any("absorbing left" in r for r in verdict.reasons)

    def test_compact_tent_on_line(self):
        state = Interval.real_line()
        iv = Interval.real_line()
        spec = DiffusionSpec.create(
            state, MeasureSpec.lebesgue(state), [(iv, ScaleFunction.natural(iv))]
        )
        tent = scale_linear_function(spec, 0, [(-1.0, 0.0), (0.0, 1.0), (1.0, 0.0)])
        assert in_domain(spec, tent).ok

    def test_nonzero_tail_against_infinite_mass(self):
        state = Interval.real_line()
        iv = Interval.real_line()
        spec = DiffusionSpec.create(
            state, MeasureSpec.lebesgue(state), [(iv, ScaleFunction.natural(iv))]
        )
        u = scale_linear_function(spec, 0, [(-1.0, 1.0), (1.0, 1.0)], compact=False)
        verdict = in_domain(spec, u)
        assert not verdict.ok and any("square integrable" in r for r in verdict.reasons)


class TestSubspace:
    def test_same_scale(self):
        s = ScaleFunction.natural(Interval.real_line())
        assert is_dirichlet_subspace(s, s) == "yes"

    def test_double_speed_is_not(self):
        dom = Interval.real_line()
        s2 = ScaleFunction.natural(dom, density=2.0)
        s1 = ScaleFunction.natural(dom)
        assert is_dirichlet_subspace(s2, s1) == "no"

    def test_fat_complement_inside_lebesgue(self):
        dom = Interval.real_line()
        rule = GeometricRemoval(Fraction(1, 4), Fraction(1, 4))
        seg = CantorComplementDensity(Interval.closed(0.0, 1.0), rule, 1.0)
        m = MeasureSpec(
            dom,
            (
                ConstDensity(Interval(-INF, 0.0), 1.0),
                seg,
                ConstDensity(Interval(1.0, INF), 1.0),
            ),
        )
        s_tilde = ScaleFunction.from_measure(dom, m)
        s = ScaleFunction.natural(dom)
        assert is_dirichlet_subspace(s_tilde, s) == "yes"
        # the converse direction fails: Lebesgue is not dominated on the fat set
        assert is_dirichlet_subspace(s, s_tilde) == "no"


class TestExtend:
    def test_bessel_state_opens_to_line(self):
        b3 = gallery.bessel(3)
        out = extend_to_open(b3)
        assert out.state == Interval.real_line()
        assert out.speed.measure_of(Interval(-2.0, -1.0)) == pytest.approx(1.0)
        assert validate(out).ok
        # effective intervals unchanged
        assert out.intervals == b3.intervals

    def test_already_open_identity(self):
        spec = gallery.two_rays()
        assert extend_to_open(spec) is spec

    def test_absorbing_side_blocks(self):
        with pytest.raises(ExtendError):
            extend_to_open(gallery.absorbing_bm())


class TestHitting:
    def test_natural_scale_linear(self):
        bm = gallery.absorbing_bm()
        assert hitting_probability(bm, 0.3, 0.0, 1.0) == pytest.approx(0.3)

    def test_bessel3(self):
        b3 = gallery.bessel(3)
        assert hitting_probability(b3, 1.0, 0.5, 2.0) == pytest.approx(2.0 / 3.0)

    def test_bessel2(self):
        b2 = gallery.bessel(2)
        assert hitting_probability(b2, 1.0, 0.01, 10.0) == pytest.approx(2.0 / 3.0)

    def test_trap_start_returns_zero(self):
        spec = gallery.cantor_tower_interval()
        assert hitting_probability(spec, -3.0, -4.0, -2.0) == 0.0

    def test_unreachable_left_target(self):
        b2 = gallery.bessel(2)
        # target at the origin: s(0) = -inf, so the right target is certain
        assert hitting_probability(b2, 1.0, 0.0, 10.0) == 1.0

    def test_span_error(self):
        spec = gallery.two_rays()
        with pytest.raises(SpanError):
            hitting_probability(spec, -0.5, -1.0, 1.0)

    def test_affine_invariance(self):
        state = Interval.real_line()
        iv = Interval.closed(0.0, 1.0)
        spec1 = DiffusionSpec.create(
            state, MeasureSpec.lebesgue(state), [(iv, ScaleFunction.natural(iv))]
        )
        spec2 = DiffusionSpec.create(
            state, MeasureSpec.lebesgue(state), [(iv, ScaleFunction.natural(iv, density=7.5))]
        )
        for x in (0.2, 0.5, 0.8):
            assert hitting_probability(spec1, x, 0.1, 0.9) == pytest.approx(
                hitting_probability(spec2, x, 0.1, 0.9), rel=1e-12
            )


class TestMergedEnergyConsistency:
    def test_thin_gap_system(self):
        from diffusion1d.smoothcore import cinf_merge

        spec = gallery.cantor_gap_bm(depth=10)
        merged = cinf_merge(spec).spec
        knots = [(-0.5, 0.0), (0.5, 1.0), (1.5, 0.0)]  # knots off the Cantor set
        u = linear_in_x_function(spec, knots)
        um = linear_in_x_function(merged, knots)
        e0, e1 = energy(spec, u), energy(merged, um)
        assert e0 == pytest.approx(e1, rel=1e-9)
