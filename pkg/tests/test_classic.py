import numpy as np
import pytest

from robustcenter import ClassicLossSpec, classic_curvature, classic_grad, classic_value

ALL_KINDS = [
    "quadratic",
    "absolute",
    "piecewise_unit",
    "piecewise_delta",
    "huber",
    "pseudo_huber",
]


def spec(kind, delta=1.0):
    return ClassicLossSpec(kind, delta)


class TestSpecValidation:
    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="unknown loss kind"):
            ClassicLossSpec("cauchy")

    @pytest.mark.parametrize("kind", ["piecewise_delta", "huber", "pseudo_huber"])
    @pytest.mark.parametrize("delta", [0.0, -1.0, float("nan"), float("inf")])
    def test_bad_delta_rejected(self, kind, delta):
        with pytest.raises(ValueError, match="delta > 0"):
            ClassicLossSpec(kind, delta)

    def test_delta_ignored_for_scale_free_kinds(self):
        # delta is not consumed, so even a nonsense value constructs
        assert ClassicLossSpec("quadratic", -3.0).delta == -3.0

    def test_non_finite_input_rejected(self):
        s = spec("huber")
        for bad in (float("nan"), float("inf"), -float("inf")):
            with pytest.raises(ValueError, match="finite"):
                classic_value(s, bad)
            with pytest.raises(ValueError, match="finite"):
                classic_grad(s, bad)


class TestValues:
    @pytest.mark.parametrize(
        "kind,delta,x,expected",
        [
            ("huber", 1.0, 0.0, 0.5),
            ("huber", 1.0, 1.0, 1.0),
            ("huber", 1.0, 5.0, 5.0),
            ("pseudo_huber", 1.0, 0.0, 1.0),
            # independent arithmetic: sqrt(10001)
            ("pseudo_huber", 1.0, 100.0, 100.00499987500625),
            ("pseudo_huber", 2.0, 2.0, 2.8284271247461903),  # 2*sqrt(2)
            ("quadratic", 1.0, 3.0, 9.0),
            ("absolute", 1.0, -4.5, 4.5),
            ("piecewise_unit", 1.0, 0.5, 0.25),
            ("piecewise_unit", 1.0, 2.0, 2.0),
            ("piecewise_delta", 2.0, 1.0, 0.5),
            ("piecewise_delta", 2.0, 3.0, 3.0),
        ],
    )
    def test_value_anchors(self, kind, delta, x, expected):
        np.testing.assert_allclose(classic_value(spec(kind, delta), x), expected, rtol=1e-14)

    @pytest.mark.parametrize(
        "kind,delta,x,expected",
        [
            ("huber", 2.0, 1.0, 0.5),  # inner branch x/delta
            ("huber", 1.0, 5.0, 1.0),
            ("absolute", 1.0, 0.0, 0.0),  # midpoint of the subgradient interval
            ("quadratic", 1.0, 3.0, 6.0),
            ("pseudo_huber", 1.0, 3.0, 0.9486832980505138),  # 3/sqrt(10)
        ],
    )
    def test_grad_anchors(self, kind, delta, x, expected):
        np.testing.assert_allclose(classic_grad(spec(kind, delta), x), expected, rtol=1e-14)

    @pytest.mark.parametrize(
        "kind,delta,x,expected",
        [
            ("quadratic", 1.0, 7.0, 2.0),
            ("pseudo_huber", 1.0, 0.0, 1.0),  # 1/delta, checked by fd below
            ("huber", 4.0, 1.0, 0.25),
            ("huber", 1.0, 9.0, 0.0),
            ("absolute", 1.0, 3.0, 0.0),
        ],
    )
    def test_curvature_anchors(self, kind, delta, x, expected):
        np.testing.assert_allclose(
            classic_curvature(spec(kind, delta), x), expected, rtol=1e-14
        )

    def test_vectorized_evaluation(self):
        s = spec("huber", 2.0)
        xs = np.array([-3.0, -1.0, 0.0, 1.0, 3.0])
        got = classic_value(s, xs)
        expected = np.array([classic_value(s, float(x)) for x in xs])
        np.testing.assert_array_equal(got, expected)


BREAKPOINTS = {
    "quadratic": [],
    "absolute": [0.0],
    "piecewise_unit": [-1.0, 0.0, 1.0],
    "piecewise_delta": None,  # +-delta and 0
    "huber": None,
    "pseudo_huber": [],
}


class TestInvariants:
    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_even_symmetry_exact(self, kind):
        s = spec(kind, 1.7)
        xs = np.random.default_rng(1).uniform(-30, 30, 500)
        np.testing.assert_array_equal(classic_value(s, xs), classic_value(s, -xs))
        np.testing.assert_array_equal(classic_grad(s, xs), -classic_grad(s, -xs))

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_minimum_at_zero(self, kind):
        s = spec(kind, 0.8)
        xs = np.random.default_rng(2).uniform(-50, 50, 500)
        v0 = classic_value(s, 0.0)
        assert np.all(classic_value(s, xs) >= v0)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_grad_matches_finite_difference(self, kind):
        delta = 1.3
        s = spec(kind, delta)
        kinks = BREAKPOINTS[kind]
        if kinks is None:
            kinks = [-delta, 0.0, delta]
        rng = np.random.default_rng(3)
        h = 1e-6
        count = 0
        while count < 1000:
            x = float(rng.uniform(-20, 20))
            if any(abs(x - k) < 1e-3 for k in kinks):
                continue
            count += 1
            g = classic_grad(s, x)
            fd = (classic_value(s, x + h) - classic_value(s, x - h)) / (2 * h)
            assert abs(fd - g) <= 1e-6 * max(1.0, abs(g))

    def test_huber_branches_agree_at_breakpoint(self):
        for delta in (0.25, 1.0, 3.0):
            inner_v = delta * delta / (2 * delta) + 0.5 * delta
            outer_v = delta
            assert abs(inner_v - outer_v) <= 1e-12
            inner_g = delta / delta
            outer_g = 1.0
            assert abs(inner_g - outer_g) <= 1e-12
            s = spec("huber", delta)
            assert abs(classic_value(s, delta) - delta) <= 1e-12
            assert abs(classic_grad(s, delta) - 1.0) <= 1e-12

    def test_pseudo_huber_approaches_absolute(self):
        rng = np.random.default_rng(4)
        for delta in (0.5, 1.0, 2.0):
            s = spec("pseudo_huber", delta)
            xs = rng.uniform(10 * delta, 100 * delta, 200) * rng.choice([-1, 1], 200)
            gap = np.abs(classic_value(s, xs) - np.abs(xs))
            assert np.all(gap <= delta * delta / np.abs(xs))
