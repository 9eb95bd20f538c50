import numpy as np
import pytest

from pbcjones.errors import StateSumTooLargeError
from pbcjones.fixtures import (figure_eight, hopf_link, open_trefoil, trefoil,
                               unlinked_circles)
from pbcjones.jones3d import (SamplingConfig, jones, jones_single_direction,
                              project_generic)
from pbcjones.laurent import LaurentPoly, d_power


class TestClosedCurves:
    def test_single_direction_is_exact(self):
        res = jones(list(hopf_link()), SamplingConfig(directions=50))
        assert res.exact
        assert res.poly.mode == "exact"
        assert res.directions_used == 1

    def test_direction_count_does_not_matter_when_closed(self):
        a = jones([trefoil()], SamplingConfig(directions=1))
        b = jones([trefoil()], SamplingConfig(directions=200))
        assert a.poly == b.poly

    def test_hopf_values(self):
        plus = jones(list(hopf_link()), SamplingConfig())
        minus = jones(list(hopf_link(reverse_second=True)), SamplingConfig())
        assert plus.poly == LaurentPoly({-2: -1, -10: -1})
        assert minus.poly == LaurentPoly({2: -1, 10: -1})

    def test_figure_eight_published_value(self):
        res = jones([figure_eight()], SamplingConfig())
        assert res.poly == LaurentPoly({-8: 1, -4: -1, 0: 1, 4: -1, 8: 1})

    @pytest.mark.parametrize("n", range(1, 6))
    def test_unlinks(self, n):
        res = jones(list(unlinked_circles(n)), SamplingConfig())
        assert res.poly == d_power(n - 1)

    def test_empty_input_gives_one(self):
        res = jones([], SamplingConfig())
        assert res.poly == LaurentPoly.one()
        assert res.exact


class TestSphereAverage:
    def test_open_curves_average_in_float_mode(self):
        res = jones([open_trefoil(0.5)], SamplingConfig(directions=40))
        assert not res.exact
        assert res.poly.mode == "float"
        assert res.directions_used == 40

    def test_same_seed_same_result(self):
        cfg = SamplingConfig(directions=30, mode="random", seed=9)
        a = jones([open_trefoil(0.3)], cfg)
        b = jones([open_trefoil(0.3)], cfg)
        assert a.poly == b.poly

    def test_worker_count_changes_nothing(self):
        cfg1 = SamplingConfig(directions=30, workers=1)
        cfg2 = SamplingConfig(directions=30, workers=2)
        cfg3 = SamplingConfig(directions=30, workers=5)
        r1 = jones([open_trefoil(0.4)], cfg1)
        r2 = jones([open_trefoil(0.4)], cfg2)
        r3 = jones([open_trefoil(0.4)], cfg3)
        assert r1.poly == r2.poly == r3.poly

    def test_coefficients_at_one_sum_to_unlink_value(self):
        # every per-direction polynomial evaluates to (-2)^(n-1) at A = 1
        curves = [open_trefoil(0.2), trefoil().translated([8, 0, 0])]
        res = jones(curves, SamplingConfig(directions=25))
        assert res.poly.evaluate(1.0) == pytest.approx(-2.0, abs=1e-9)

    def test_average_value_lies_in_per_direction_hull(self):
        res = jones([open_trefoil(0.5)], SamplingConfig(directions=60))
        lo = min(float(v) for _, v in res.poly.terms())
        hi = max(float(v) for _, v in res.poly.terms())
        assert -2.0 < lo <= hi < 2.0

    def test_gap_closing_approaches_closed_value(self):
        cfg = SamplingConfig(directions=200)
        closed = jones([trefoil()], cfg).poly.to_float()

        def dist(gap):
            open_poly = jones([open_trefoil(gap)], cfg).poly
            exps = set(e for e, _ in open_poly.terms()) | set(e for e, _ in closed.terms())
            return max(abs(open_poly.coefficient(e) - closed.coefficient(e)) for e in exps)

        d_wide, d_tight = dist(0.5), dist(0.05)
        assert d_tight < d_wide


class TestCapHandling:
    def test_error_policy_raises(self):
        cfg = SamplingConfig(directions=5, crossing_cap=4, on_cap="error")
        with pytest.raises(StateSumTooLargeError):
            jones([figure_eight()], cfg)

    def test_skip_policy_accounts_directions(self):
        cfg = SamplingConfig(directions=24, crossing_cap=5, on_cap="skip")
        res = jones([open_trefoil(0.3)], cfg)
        assert res.directions_used + res.directions_skipped == 24
        assert res.directions_skipped > 0

    def test_all_skipped_raises(self):
        cfg = SamplingConfig(directions=5, crossing_cap=1, on_cap="skip")
        with pytest.raises(StateSumTooLargeError):
            jones([open_trefoil(0.3)], cfg)

    def test_single_direction_ignores_skip_policy(self):
        cfg = SamplingConfig(crossing_cap=2, on_cap="skip")
        with pytest.raises(StateSumTooLargeError):
            jones_single_direction([figure_eight()], [0.3, 0.4, 0.9], cfg)


class TestConfig:
    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError):
            SamplingConfig(mode="radial")

    def test_bad_cap_policy_rejected(self):
        with pytest.raises(ValueError):
            SamplingConfig(on_cap="ignore")

    def test_result_json_fields(self):
        res = jones(list(hopf_link()), SamplingConfig())
        obj = res.to_json_obj()
        assert obj["exact"] is True
        assert obj["polynomial"]["coeffs"] == {"-2": -1, "-10": -1}
        assert obj["directions_used"] == 1


class TestProjectGeneric:
    def test_returns_direction_actually_used(self):
        curves = [trefoil()]
        xi = np.array([0.2, 0.1, 0.95])
        diagram, used, tries = project_generic(curves, xi, 1e-9, 50)
        assert tries == 0
        assert np.allclose(used / np.linalg.norm(used), xi / np.linalg.norm(xi))
