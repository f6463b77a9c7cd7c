"""Tests for slowdown functions."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kmc_traffic import InvalidConfiguration, Slowdown, SlowdownConfig, SlowdownKind, build_slowdown


class TestSlowdown:
    """Tests for the three slowdown families."""

    @pytest.mark.parametrize(
        "g", [Slowdown.arrhenius(), Slowdown.linear(), Slowdown.quadratic()]
    )
    def test_no_slowdown_at_zero(self, g):
        assert g.eval(0.0) == 1.0

    def test_linear(self):
        g = Slowdown.linear()
        assert g.eval(0.25) == pytest.approx(0.75)
        assert g.eval(1.0) == 0.0
        assert g.eval(1.5) == 0.0

    def test_quadratic(self):
        g = Slowdown.quadratic()
        assert g.eval(0.5) == pytest.approx(0.25)
        assert g.eval(2.0) == 0.0

    def test_arrhenius(self):
        g = Slowdown.arrhenius(2.0)
        assert g.eval(0.5) == pytest.approx(math.exp(-1.0))
        assert g.eval(100.0) > 0.0

    def test_negative_weight_rejected(self):
        with pytest.raises(InvalidConfiguration):
            Slowdown.linear().eval(-0.1)

    def test_arrhenius_coefficient_must_be_positive(self):
        with pytest.raises(InvalidConfiguration):
            Slowdown.arrhenius(0.0)

    def test_vectorised_matches_scalar(self):
        x = np.linspace(0.0, 2.0, 41)
        for g in (Slowdown.arrhenius(1.5), Slowdown.linear(), Slowdown.quadratic()):
            assert g.evaluate(x) == pytest.approx([g.eval(v) for v in x])

    def test_labels_round_trip_through_config(self):
        for text in ("arrhenius:2.5", "linear", "quadratic"):
            config = SlowdownConfig.parse(text)
            assert build_slowdown(config).label() == text
            assert config.label() == text

    def test_parse_defaults(self):
        assert SlowdownConfig.parse("arrhenius").coefficient == 1.0
        assert SlowdownConfig.parse("Quadratic").kind == SlowdownKind.QUADRATIC
        with pytest.raises(ValueError):
            SlowdownConfig.parse("linear:3")
        with pytest.raises(ValueError):
            SlowdownConfig.parse("cubic")


@given(
    kind=st.sampled_from(list(SlowdownKind)),
    a=st.floats(min_value=0.0, max_value=5.0),
    b=st.floats(min_value=0.0, max_value=5.0),
)
def test_nonincreasing_and_bounded(kind, a, b):
    g = Slowdown(kind, 1.3)
    lo, hi = min(a, b), max(a, b)
    assert 0.0 <= g.eval(hi) <= g.eval(lo) <= 1.0
