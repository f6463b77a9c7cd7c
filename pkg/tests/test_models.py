"""Tests for data models."""

import pytest
from pydantic import ValidationError

from kmc_traffic import (
    EngineKind,
    EventRecord,
    KernelConfig,
    KernelKind,
    SimConfig,
    SimSummary,
    SlowdownConfig,
    SlowdownKind,
    ValidationReport,
)
from kmc_traffic.models import BenchReport, BenchRow, SlopeFit

LINEAR_50 = KernelConfig(kind=KernelKind.LINEAR, look_ahead=50)
LINEAR_5 = KernelConfig(kind=KernelKind.LINEAR, look_ahead=5)


class TestKernelConfig:
    """Tests for KernelConfig model."""

    def test_parse(self):
        assert KernelConfig.parse("linear:50") == LINEAR_50
        exp = KernelConfig.parse("Exponential:1e4")
        assert exp.kind == KernelKind.EXPONENTIAL
        assert exp.strength == 10000.0
        assert exp.parameter() == "10000"
        assert KernelConfig.parse("constant:3").parameter() == "3"

    @pytest.mark.parametrize("text", ["linear", "gaussian:3", "linear:0", "exponential:-1"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            KernelConfig.parse(text)

    def test_missing_parameter(self):
        with pytest.raises(ValidationError):
            KernelConfig(kind=KernelKind.EXPONENTIAL)
        with pytest.raises(ValidationError):
            KernelConfig(kind=KernelKind.CUSTOM, values=[])

    def test_frozen(self):
        with pytest.raises(ValidationError):
            LINEAR_50.look_ahead = 3


class TestSlowdownConfig:
    """Tests for SlowdownConfig model."""

    def test_defaults(self):
        config = SlowdownConfig()
        assert config.kind == SlowdownKind.LINEAR
        assert config.coefficient == 1.0

    def test_parse(self):
        assert SlowdownConfig.parse("arrhenius:2").coefficient == 2.0
        assert SlowdownConfig.parse("arrhenius").label() == "arrhenius:1"
        assert SlowdownConfig.parse("quadratic").kind == SlowdownKind.QUADRATIC
        with pytest.raises(ValueError):
            SlowdownConfig.parse("linear:2")


class TestSimConfig:
    """Tests for SimConfig model."""

    def test_density_resolution(self):
        config = SimConfig(n_cells=500, density=1 / 3, kernel=LINEAR_50)
        assert config.n_cars == 167
        assert config.rho_bar == pytest.approx(167 / 500)

    def test_density_rounds_half_up(self):
        assert SimConfig(n_cells=10, density=0.25, kernel=LINEAR_5).cars == 3

    def test_defaults(self):
        config = SimConfig(n_cells=500, n_cars=100, kernel=LINEAR_50)
        assert config.jump == 1
        assert config.omega0 == 4.0
        assert config.t_final == 3600.0
        assert config.burn_in == pytest.approx(360.0)
        assert config.engine == EngineKind.ACCELERATED
        assert config.refresh_every == 10_000
        assert config.detector_cell == 0
        assert config.dt_rate_convention.value == "post"

    def test_matching_density_and_cars(self):
        config = SimConfig(n_cells=500, n_cars=167, density=1 / 3, kernel=LINEAR_50)
        assert config.cars == 167

    def test_disagreeing_density_and_cars(self):
        with pytest.raises(ValidationError):
            SimConfig(n_cells=500, n_cars=100, density=0.5, kernel=LINEAR_50)

    @pytest.mark.parametrize(
        "changes",
        [
            {},  # neither n_cars nor density
            {"n_cars": 501},
            {"n_cars": 10, "jump": 500},
            {"n_cars": 10, "burn_in": 10.0, "t_final": 5.0},
            {"n_cars": 10, "burn_in": 5.0, "t_final": 5.0},
            {"n_cars": 10, "detector_cell": 500},
            {"n_cars": 10, "kernel": KernelConfig(kind=KernelKind.LINEAR, look_ahead=501)},
            {"n_cars": 10, "engine": EngineKind.LIST_BASED},
            {"n_cars": 10, "seed": -1},
        ],
    )
    def test_invalid(self, changes):
        data = {"n_cells": 500, "kernel": LINEAR_50, **changes}
        with pytest.raises(ValidationError):
            SimConfig(**data)

    def test_zero_horizon_is_allowed(self):
        config = SimConfig(n_cells=50, n_cars=10, kernel=LINEAR_50, t_final=0.0)
        assert config.burn_in == 0.0

    def test_look_ahead_equal_to_size(self):
        config = SimConfig(n_cells=50, n_cars=10, kernel=LINEAR_50)
        assert config.kernel.look_ahead == config.n_cells

    def test_with_updates(self):
        config = SimConfig(n_cells=500, density=0.2, kernel=LINEAR_50, t_final=100.0)
        denser = config.with_updates(density=0.4)
        assert denser.cars == 200
        counted = config.with_updates(n_cars=7)
        assert counted.cars == 7 and counted.density is None
        longer = config.with_updates(t_final=1000.0)
        assert longer.burn_in == pytest.approx(100.0)
        assert config.cars == 100
        with pytest.raises(ValidationError):
            config.with_updates(jump=0)


class TestEventRecord:
    """Tests for EventRecord model."""

    def test_executed_needs_cells(self):
        record = EventRecord(time_before=0.0, dt=0.1, car=2, old_cell=3, new_cell=4, executed=True)
        assert record.new_cell == 4
        with pytest.raises(ValidationError):
            EventRecord(time_before=0.0, dt=0.1, car=2, executed=True)

    def test_null_has_no_cells(self):
        record = EventRecord(time_before=1.0, dt=0.1, car=2, executed=False)
        assert record.old_cell is None
        with pytest.raises(ValidationError):
            EventRecord(time_before=1.0, dt=0.1, car=2, old_cell=1, new_cell=2, executed=False)

    def test_dt_positive(self):
        with pytest.raises(ValidationError):
            EventRecord(time_before=0.0, dt=0.0, car=0, executed=False)


class TestSummaries:
    """Tests for result models."""

    def test_null_fraction(self):
        config = SimConfig(n_cells=50, n_cars=10, kernel=LINEAR_50)
        summary = SimSummary(config=config, flow=0.5, events_executed=30, events_null=10)
        assert summary.null_fraction == pytest.approx(0.25)
        assert summary.flow_per_hour == pytest.approx(1800.0)
        assert SimSummary(config=config).null_fraction == 0.0

    def test_validation_report(self):
        report = ValidationReport()
        assert report.passed
        check = report.add("suite", "error", 1e-12, 1e-9)
        assert check.passed
        report.add("suite", "p_value", 0.5, 1e-3, comparison=">=")
        assert report.passed
        report.add("suite", "error", 0.1, 0.05)
        assert not report.passed
        with pytest.raises(ValueError):
            report.add("suite", "x", 1.0, 1.0, comparison="==")

    def test_bench_report_slope_gap(self):
        row = BenchRow(
            engine=EngineKind.STANDARD,
            n_cells=100,
            n_cars=30,
            events_executed=1,
            steps=1,
            wall_time=0.1,
        )
        report = BenchReport(
            rows=[row],
            fits=[
                SlopeFit(engine="standard", slope=2.1, intercept=0.0),
                SlopeFit(engine="accelerated", slope=1.0, intercept=0.0),
            ],
        )
        assert report.slope("standard") == 2.1
        assert report.slope("list_based") is None
        assert report.slope_gap() == pytest.approx(1.1)
        assert report.slope_gap("list_based") is None
