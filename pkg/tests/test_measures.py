"""Measure components: exact masses, Stieltjes values, decomposition,
pushforwards, support checks.  Oracles are independent: the Cantor
distribution function is recomputed from ternary digits, densities are
cross-checked by midpoint quadrature."""

import math
import random

import pytest

from diffusion1d.cantorsets import ConstantRemoval, GeometricRemoval
from diffusion1d.measures import (
    Atom,
    CantorComplementDensity,
    CantorComponent,
    CantorTower,
    ConstDensity,
    ExpRecipDensity,
    Interval,
    MeasureSpec,
    PowerDensity,
)

INF = math.inf


def cantor_cdf_ternary(x: float, digits: int = 130) -> float:
    """Independent oracle: the standard Cantor distribution function from the
    exact ternary expansion of Fraction(x) (binary digits 0/1 until the first
    ternary digit 1)."""
    from fractions import Fraction

    t = Fraction(x)
    if t <= 0:
        return 0.0
    if t >= 1:
        return 1.0
    value = Fraction(0)
    w = Fraction(1, 2)
    for _ in range(digits):
        t *= 3
        d = int(t)
        t -= d
        if d == 1:
            return float(value + w)
        if d == 2:
            value += w
        if t == 0:
            break
        w /= 2
    return float(value)


def std_cantor(mass=1.0):
    from fractions import Fraction

    return CantorComponent(Interval(0.0, 1.0), ConstantRemoval(Fraction(1, 3)), mass)


class TestIntervals:
    def test_invariants(self):
        with pytest.raises(ValueError):
            Interval(1.0, 0.0)
        with pytest.raises(ValueError):
            Interval(-INF, 0.0, left_closed=True)
        iv = Interval(0.0, 1.0, True, False)
        assert iv.contains(0.0) and not iv.contains(1.0)

    def test_overlap_through_shared_endpoint(self):
        a = Interval(0.0, 1.0, False, True)
        b = Interval(1.0, 2.0, False, True)
        assert not a.overlaps(b)
        c = Interval(1.0, 2.0, True, True)
        assert a.overlaps(c)


class TestMeasureOf:
    def test_unit_lebesgue(self):
        m = MeasureSpec.lebesgue(Interval(0.0, 1.0))
        assert m.measure_of(Interval(0.0, 1.0)) == 1.0

    def test_cantor_prefix_mass_matches_digit_oracle(self):
        m = MeasureSpec(Interval.closed(0.0, 1.0), cantor_components=(std_cantor(),))
        # gap-boundary queries resolve to the exact plateau values
        assert m.measure_of(Interval(0.0, 1.0 / 3.0, True, True)) == 0.5
        assert m.measure_of(Interval(0.0, 1.0 / 9.0, True, True)) == 0.25
        # generic points match the exact ternary-digit oracle
        for x in (0.1, 0.25, 0.5, 0.77, 0.9031):
            assert m.measure_of(Interval(0.0, x, True, True)) == pytest.approx(
                cantor_cdf_ternary(x), abs=1e-14
            )

    def test_atom_plus_lebesgue_additivity(self):
        carrier = Interval(-1.0, 1.0)
        m = MeasureSpec(carrier, (ConstDensity(carrier, 1.0),), (Atom(0.0, 1.0),))
        assert m.measure_of(Interval(0.0, 1.0, True, False)) == pytest.approx(2.0)
        # atom excluded when the interval is open at 0
        assert m.measure_of(Interval(0.0, 1.0, False, False)) == pytest.approx(1.0)

    def test_clipping_reported(self):
        m = MeasureSpec.lebesgue(Interval(0.0, 1.0))
        mass, clipped = m.measure_of_clipped(Interval(-1.0, 2.0))
        assert clipped and mass == pytest.approx(1.0)

    def test_finite_partition_additivity(self):
        carrier = Interval(0.0, 4.0)
        m = MeasureSpec(
            carrier,
            (PowerDensity(carrier, 2.0, 1.0, 0.5),),
            (Atom(2.0, 0.25),),
            (CantorComponent(Interval(2.5, 3.5), ConstantRemoval(1.0 / 3.0), 0.7),),
        )
        rng = random.Random(42)
        for _ in range(50):
            cuts = sorted(rng.uniform(0.0, 4.0) for _ in range(5))
            pts = [0.0, *cuts, 4.0]
            total = sum(
                m.measure_of(Interval(a, b, False, True))
                for a, b in zip(pts, pts[1:])
                if a < b
            )
            whole = m.measure_of(Interval(0.0, 4.0, True, True))
            assert total == pytest.approx(whole, rel=1e-12)


class TestStieltjes:
    def test_lebesgue_identity(self):
        m = MeasureSpec.lebesgue(Interval.real_line())
        assert m.stieltjes(0.0, 2.0) == pytest.approx(2.0)
        assert m.stieltjes(1.0, -1.0) == pytest.approx(-2.0)

    def test_cantor_value(self):
        m = MeasureSpec(Interval.closed(0.0, 1.0), cantor_components=(std_cantor(),))
        assert m.stieltjes(0.0, 1.0 / 3.0) == pytest.approx(0.5, abs=1e-12)

    def test_inverse_square_divergence_at_origin(self):
        carrier = Interval(0.0, INF)
        m = MeasureSpec(carrier, (PowerDensity(carrier, 1.0, 0.0, -2.0),))
        assert m.stieltjes(1.0, 0.0) == -INF
        assert m.stieltjes(1.0, 4.0) == pytest.approx(1.0 - 0.25)

    def test_monotone(self):
        carrier = Interval(0.0, 2.0)
        m = MeasureSpec(carrier, (PowerDensity(carrier, 1.0, 1.0, 2.0),))
        rng = random.Random(7)
        xs = sorted(rng.uniform(0.0, 2.0) for _ in range(20))
        vals = [m.stieltjes(1.0, x) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_quadrature_cross_check(self):
        carrier = Interval(0.5, 3.0)
        m = MeasureSpec(
            carrier,
            (PowerDensity(carrier, 1.3, 0.0, -1.0), ),
        )
        lo, hi, n = 0.7, 2.5, 400_000
        h = (hi - lo) / n
        quad = sum(1.3 / (lo + (k + 0.5) * h) for k in range(n)) * h
        assert m.stieltjes(lo, hi) == pytest.approx(quad, rel=1e-9)


class TestDecomposition:
    def test_pure_lebesgue(self):
        m = MeasureSpec.lebesgue(Interval(0.0, 1.0))
        ac, sing = m.lebesgue_decompose()
        assert ac.segments == m.segments
        assert not sing.segments and not sing.atoms

    def test_mixed(self):
        carrier = Interval(0.0, 1.0, False, True)
        tower = CantorTower(Interval(0.0, 1.0), ConstantRemoval(1.0 / 3.0), 1.0)
        m = MeasureSpec(carrier, (ConstDensity(carrier, 1.0),), (), (), (tower,))
        ac, sing = m.lebesgue_decompose()
        assert not ac.towers and sing.towers == (tower,)
        # parts sum back
        j = Interval(0.3, 0.9)
        assert ac.measure_of(j) + sing.measure_of(j) == pytest.approx(m.measure_of(j))

    def test_atom_is_singular(self):
        m = MeasureSpec(Interval.real_line(), atoms=(Atom(0.0, 1.0),))
        ac, sing = m.lebesgue_decompose()
        assert ac.measure_of(Interval(-1, 1)) == 0.0
        assert sing.measure_of(Interval(-1, 1)) == 1.0


class TestPushforward:
    def test_cantor_block_map(self):
        m = MeasureSpec(Interval.closed(0.0, 1.0), cantor_components=(std_cantor(),))
        out = m.pushforward_affine(0.5, 0.5)  # x -> (1+x)/2
        comp = out.cantor_components[0]
        assert comp.support.a == pytest.approx(0.5)
        assert comp.support.b == pytest.approx(1.0)
        assert out.measure_of(Interval(0.5, 1.0, True, True)) == pytest.approx(1.0)

    def test_mass_preserved_under_stretch(self):
        m = MeasureSpec.lebesgue(Interval(0.0, 1.0))
        out = m.pushforward_affine(2.0, 0.0)
        assert out.segments[0].c == pytest.approx(0.5)
        assert out.measure_of(Interval(0.0, 2.0)) == pytest.approx(1.0)

    def test_identity(self):
        carrier = Interval(0.0, 2.0)
        m = MeasureSpec(carrier, (PowerDensity(carrier, 1.0, 1.0, 2.0),), (Atom(1.0, 2.0),))
        out = m.pushforward_affine(1.0, 0.0)
        assert out == m

    def test_reflection_matches_masses(self):
        carrier = Interval(0.0, 2.0)
        m = MeasureSpec(carrier, (PowerDensity(carrier, 1.5, 0.0, 2.0),))
        out = m.pushforward_affine(-1.0, 0.0)
        assert out.measure_of(Interval(-2.0, -1.0)) == pytest.approx(
            m.measure_of(Interval(1.0, 2.0)), rel=1e-12
        )

    def test_zero_factor_rejected(self):
        m = MeasureSpec.lebesgue(Interval(0.0, 1.0))
        with pytest.raises(ValueError):
            m.pushforward_affine(0.0, 1.0)


class TestFullSupport:
    def test_lebesgue_everywhere(self):
        assert MeasureSpec.lebesgue(Interval.real_line()).is_fully_supported()

    def test_cantor_alone_has_gaps(self):
        m = MeasureSpec(Interval.closed(0.0, 1.0), cantor_components=(std_cantor(),))
        assert not m.is_fully_supported()

    def test_atom_does_not_matter(self):
        carrier = Interval(0.0, 1.0)
        m = MeasureSpec(carrier, (ConstDensity(carrier, 1.0),), (Atom(0.5, 1.0),))
        assert m.is_fully_supported()

    def test_hole_detected(self):
        carrier = Interval(0.0, 2.0)
        m = MeasureSpec(
            carrier,
            (ConstDensity(Interval(0.0, 0.7), 1.0), ConstDensity(Interval(1.0, 2.0), 1.0)),
        )
        assert not m.is_fully_supported()

    def test_fat_complement_fully_supports(self):
        carrier = Interval.closed(0.0, 1.0)
        seg = CantorComplementDensity(carrier, GeometricRemoval(0.25, 0.25), 1.0)
        m = MeasureSpec(carrier, (seg,))
        assert m.is_fully_supported()
        assert not m.density_positive_ae_on(Interval(0.0, 1.0))


class TestCantorShapes:
    def test_symmetry_of_standard_cdf(self):
        comp = std_cantor(mass=2.0)
        # dyadic points, where 1 - x is float-exact
        for x in (0.125, 0.25, 0.4375, 0.8125):
            assert comp.cdf(x) + comp.cdf(1.0 - x) == pytest.approx(2.0, abs=1e-12)

    def test_depth_refinement_bound(self):
        rng = random.Random(3)
        for _ in range(50):
            x = rng.random()
            depth = rng.randint(8, 40)
            a = CantorComponent(Interval(0.0, 1.0), ConstantRemoval(1 / 3), 1.0, depth)
            b = CantorComponent(Interval(0.0, 1.0), ConstantRemoval(1 / 3), 1.0, depth + 1)
            assert abs(a.cdf(x) - b.cdf(x)) <= 2.0 ** (-depth)

    def test_tower_masses(self):
        tower = CantorTower(Interval(0.0, 1.0), ConstantRemoval(1 / 3), 1.0)
        m = MeasureSpec(Interval(0.0, 1.0, False, True), towers=(tower,))
        # block 1 is (1/2, 1): full unit mass
        assert m.measure_of(Interval(0.5, 1.0, True, True)) == pytest.approx(1.0)
        # any neighbourhood of the accumulation point is infinite
        assert m.measure_of(Interval(0.0, 0.25, False, False)) == INF
        # compacts away from 0 are finite
        assert math.isfinite(m.measure_of(Interval(0.125, 1.0, True, True)))

    def test_fat_residual_positive(self):
        rule = GeometricRemoval(0.25, 0.25)
        assert 0.0 < rule.residual_fraction(0) < 1.0
        assert ConstantRemoval(1 / 3).residual_fraction(0) == 0.0


class TestRadon:
    def test_tower_accumulation_point_flags(self):
        tower = CantorTower(Interval(0.0, 1.0), ConstantRemoval(1 / 3), 1.0)
        m = MeasureSpec(Interval(0.0, 1.0, False, True), towers=(tower,))
        assert m.radon_violations(Interval(0.0, 1.0, False, True)) == ()
        assert m.radon_violations(Interval.closed(0.0, 1.0)) == (0.0,)

    def test_inverse_square_center(self):
        carrier = Interval(0.0, 1.0, True, False)
        m = MeasureSpec(carrier, (PowerDensity(carrier, 1.0, 0.0, -2.0),))
        assert m.radon_violations() == (0.0,)
