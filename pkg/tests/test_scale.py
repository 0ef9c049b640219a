"""Scale functions: catalog evaluation with exact endpoint limits,
adaptedness verdicts, absolutely continuous parts, inverses."""

import math
import random
from fractions import Fraction

import pytest

from diffusion1d.cantorsets import ConstantRemoval
from diffusion1d.measures import (
    CantorComponent,
    CantorTower,
    ConstDensity,
    Interval,
    MeasureSpec,
)
from diffusion1d.scale import ScaleFunction, is_adapted

INF = math.inf


class TestEval:
    def test_natural(self):
        s = ScaleFunction.natural(Interval(0.0, 1.0), base_point=0.0 + 0.5)
        assert s.eval(0.3) == pytest.approx(-0.2)
        s0 = ScaleFunction.natural(Interval(-1.0, 1.0), base_point=0.0)
        assert s0.eval(0.3) == pytest.approx(0.3)

    def test_log_limits(self):
        s = ScaleFunction.log_scale(Interval(0.0, INF), base_point=1.0)
        assert s.eval(0.0) == -INF
        assert s.eval(INF) == INF
        assert s.eval(math.e) == pytest.approx(1.0)

    def test_power_scale_finite_upper_limit(self):
        # derivative x^-2: the scale 1 - 1/x with base point 1
        s = ScaleFunction.power_scale(Interval(0.0, INF), -2.0, base_point=1.0)
        assert s.eval(INF) == pytest.approx(1.0)
        assert s.eval(0.0) == -INF
        assert s.eval(2.0) == pytest.approx(0.5)

    def test_neg_exp_recip_limits(self):
        s = ScaleFunction.neg_exp_recip(Interval(0.0, INF), base_point=1.0)
        assert s.eval(0.0) == -INF
        assert math.isfinite(s.eval(INF))
        # s(x) = -exp(1/x) + e
        assert s.eval(2.0) == pytest.approx(-math.exp(0.5) + math.e)

    def test_normalization(self):
        for s in (
            ScaleFunction.natural(Interval(-2.0, 5.0)),
            ScaleFunction.log_scale(Interval(0.0, INF)),
            ScaleFunction.power_scale(Interval(0.0, INF), -2.0),
        ):
            assert s.eval(s.base_point) == 0.0

    def test_outside_closure_rejected(self):
        s = ScaleFunction.natural(Interval(0.0, 1.0))
        with pytest.raises(ValueError):
            s.eval(1.5)

    def test_eval_array_matches_scalar(self):
        import numpy as np

        for s in (
            ScaleFunction.natural(Interval(-2.0, 5.0)),
            ScaleFunction.log_scale(Interval(0.0, INF), base_point=1.0),
            ScaleFunction.power_scale(Interval(0.0, INF), -2.0, base_point=1.0),
            ScaleFunction.neg_exp_recip(Interval(0.0, INF), base_point=1.0),
        ):
            xs = np.array([0.25, 0.5, 1.5, 2.0, 3.75])
            got = s.eval_array(xs)
            want = [s.eval(float(x)) for x in xs]
            assert got == pytest.approx(want, rel=1e-14)


class TestAdapted:
    def test_neg_exp_recip_adapted_inside_line(self):
        j = Interval(0.0, INF)
        s = ScaleFunction.neg_exp_recip(j, base_point=1.0)
        rep = is_adapted(s, j, Interval.real_line())
        assert rep.ok
        assert rep.left.applies and rep.left.ok

    def test_natural_on_open_interval_fails_inside_closed_state(self):
        j = Interval(0.0, 1.0)
        s = ScaleFunction.natural(j)
        rep = is_adapted(s, j, Interval.closed(0.0, 1.0))
        assert not rep.left.ok and not rep.right.ok

    def test_closed_interval_with_bounded_scale(self):
        j = Interval.closed(0.0, 1.0)
        s = ScaleFunction.natural(j)
        rep = is_adapted(s, j, Interval.real_line())
        assert rep.ok

    def test_state_open_endpoints_unconstrained(self):
        j = Interval(0.0, 1.0)
        s = ScaleFunction.natural(j)
        rep = is_adapted(s, j, Interval(0.0, 1.0))
        assert rep.ok
        assert not rep.left.applies and not rep.right.applies


class TestAcPart:
    def _tower_scale(self):
        iv = Interval(0.0, 1.0, False, True)
        tower = CantorTower(Interval(0.0, 1.0), ConstantRemoval(Fraction(1, 3)), 1.0)
        m = MeasureSpec(iv, (ConstDensity(iv, 1.0),), (), (), (tower,))
        return ScaleFunction.from_measure(iv, m, base_point=0.5)

    def test_tower_scale_drops_to_lebesgue(self):
        s = self._tower_scale()
        ac = s.ac_part()
        assert ac.strictly_increasing
        assert not ac.measure.has_singular_part()
        assert ac.scale is not None
        assert ac.scale.eval(0.9) == pytest.approx(0.4)
        # the original scale diverges at the accumulation endpoint, the
        # absolutely continuous part does not
        assert s.eval(0.0) == -INF
        assert ac.scale.eval(0.0) == pytest.approx(-0.5)

    def test_already_ac_is_fixed_point(self):
        s = ScaleFunction.log_scale(Interval(0.0, INF), base_point=1.0)
        ac = s.ac_part()
        assert ac.scale is not None
        assert ac.scale.measure == s.measure
        again = ac.scale.ac_part()
        assert again.measure == ac.measure

    def test_pure_singular_is_degenerate(self):
        iv = Interval.closed(0.0, 1.0)
        m = MeasureSpec(
            iv, (), (), (CantorComponent(iv, ConstantRemoval(Fraction(1, 3)), 1.0),)
        )
        s = ScaleFunction.from_measure(iv, m, base_point=0.5)
        ac = s.ac_part()
        assert not ac.strictly_increasing and ac.scale is None

    def test_ac_dominated_by_full_measure(self):
        s = self._tower_scale()
        ac = s.ac_part()
        rng = random.Random(5)
        for _ in range(50):
            a, b = sorted((rng.uniform(0.01, 1.0), rng.uniform(0.01, 1.0)))
            if a == b:
                continue
            j = Interval(a, b)
            assert ac.measure.measure_of(j) <= s.measure.measure_of(j) + 1e-12


class TestInverse:
    def test_trivial(self):
        s = ScaleFunction.natural(Interval(0.0, 1.0), base_point=0.0 + 0.5)
        assert s.inverse(0.2) == pytest.approx(0.7, abs=1e-12)

    def test_log_unit(self):
        s = ScaleFunction.log_scale(Interval(0.0, INF), base_point=1.0)
        assert s.inverse(0.0) == pytest.approx(1.0, abs=1e-12)
        assert s.inverse(1.0) == pytest.approx(math.e, abs=1e-10)

    def test_bessel_like(self):
        s = ScaleFunction.power_scale(Interval(0.0, INF), -2.0, base_point=1.0)
        assert s.inverse(0.5) == pytest.approx(2.0, abs=1e-10)

    def test_out_of_range_rejected(self):
        s = ScaleFunction.power_scale(Interval(0.0, INF), -2.0, base_point=1.0)
        with pytest.raises(ValueError):
            s.inverse(2.0)  # range is (-inf, 1)

    def test_monotonicity_random(self):
        rng = random.Random(11)
        s = ScaleFunction.log_scale(Interval(0.0, INF), base_point=1.0)
        for _ in range(100):
            x1, x2 = sorted((rng.uniform(0.01, 50), rng.uniform(0.01, 50)))
            if x1 < x2:
                assert s.eval(x1) < s.eval(x2)
