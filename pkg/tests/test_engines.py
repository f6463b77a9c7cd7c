"""Tests for the KMC engines."""

import math

import numpy as np
import pytest

from kmc_traffic import (
    AcceleratedEngine,
    EngineKind,
    FrozenSystem,
    InvalidConfiguration,
    KernelConfig,
    KernelKind,
    LatticeState,
    ListBasedEngine,
    RateConvention,
    SimConfig,
    StandardEngine,
    create_engine,
    run_simulation,
)
from kmc_traffic.engines import ENGINES, ListTable, select_event_listbased
from kmc_traffic.rates import weights_direct
from kmc_traffic.utils import UniformStream


def _frozen_config(n_cells: int = 8) -> SimConfig:
    """Full lattice whose kernel only sees the next cell, so every rate is 0."""
    values = [0.0, float(n_cells)] + [0.0] * (n_cells - 2)
    return SimConfig(
        n_cells=n_cells,
        n_cars=n_cells,
        kernel=KernelConfig(kind=KernelKind.CUSTOM, values=values),
        t_final=10.0,
    )


class TestFactory:
    """Tests for engine creation."""

    def test_create_each_kind(self, exponential_config, constant_config):
        assert isinstance(create_engine(exponential_config), AcceleratedEngine)
        standard = exponential_config.with_updates(engine=EngineKind.STANDARD)
        engine = create_engine(standard)
        assert isinstance(engine, StandardEngine)
        assert not isinstance(engine, AcceleratedEngine)
        assert isinstance(create_engine(constant_config), ListBasedEngine)
        assert set(ENGINES) == set(EngineKind)

    def test_state_size_must_match(self, exponential_config):
        with pytest.raises(ValueError):
            create_engine(exponential_config, state=LatticeState.init_random(10, 3, seed=0))


class TestRun:
    """Tests for full runs and their summaries."""

    @pytest.mark.parametrize("kind", list(EngineKind))
    def test_run_conserves_cars(self, kind, local_config):
        kernel = KernelConfig(kind=KernelKind.CONSTANT, look_ahead=8)
        config = local_config.with_updates(engine=kind, kernel=kernel)
        engine = create_engine(config)
        summary = engine.run()
        assert engine.state.n_cars == config.cars
        engine.state.check_invariants()
        assert summary.steps == engine.steps > 0
        assert engine.clock >= config.t_final

    def test_velocity_identity(self, exponential_config):
        summary = run_simulation(exponential_config)
        config = summary.config
        expected = config.jump * summary.events_executed / (config.cars * summary.measure_time)
        assert summary.velocity == pytest.approx(expected, rel=1e-12)
        assert summary.measure_time == pytest.approx(config.t_final - config.burn_in)
        assert summary.velocity_defined

    def test_repeatable(self, exponential_config):
        a = run_simulation(exponential_config).model_dump(exclude={"wall_time"})
        b = run_simulation(exponential_config).model_dump(exclude={"wall_time"})
        assert a == b

    def test_seed_changes_outcome(self, exponential_config):
        a = run_simulation(exponential_config)
        b = run_simulation(exponential_config.with_updates(seed=12))
        assert a.final_clock != b.final_clock

    def test_empty_system_is_frozen(self, exponential_config):
        summary = run_simulation(exponential_config.with_updates(n_cars=0))
        assert summary.frozen
        assert summary.flow == 0.0
        assert summary.steps == 0
        assert not summary.velocity_defined

    def test_zero_horizon(self, exponential_config):
        summary = run_simulation(exponential_config.with_updates(t_final=0.0))
        assert summary.steps == 0
        assert summary.flow == 0.0
        assert summary.measure_time == 0.0

    def test_full_lattice_only_null_events(self, local_config):
        # a finite look-ahead keeps every rate positive on a full lattice
        kernel = KernelConfig(kind=KernelKind.CONSTANT, look_ahead=8)
        config = local_config.with_updates(
            n_cars=local_config.n_cells, kernel=kernel, t_final=2.0
        )
        summary = run_simulation(config)
        assert summary.events_executed == 0
        assert summary.events_null > 0
        assert summary.flow == 0.0
        assert summary.null_fraction == 1.0
        assert not summary.frozen

    def test_frozen_rates(self):
        config = _frozen_config()
        engine = create_engine(config)
        assert engine.frozen
        with pytest.raises(FrozenSystem) as exc_info:
            engine.step()
        assert exc_info.value.clock == 0.0
        summary = engine.run()
        assert summary.frozen
        assert summary.steps == 0

    def test_events_are_recorded(self, local_config):
        events = []
        engine = create_engine(local_config.with_updates(t_final=5.0))
        engine.run(events)
        assert len(events) == engine.steps
        clock = 0.0
        for event in events:
            assert event.time_before == pytest.approx(clock)
            assert event.dt > 0
            clock += event.dt
            if event.executed:
                assert event.new_cell == (event.old_cell + local_config.jump) % local_config.n_cells
        assert clock == pytest.approx(engine.clock)
        assert events[-1].time_before < local_config.t_final


class TestStep:
    """Tests for single steps and the waiting-time conventions."""

    def test_step_record(self, local_config):
        engine = create_engine(local_config)
        record = engine.step()
        assert record.car is not None and 0 <= record.car < local_config.cars
        assert engine.steps == 1
        assert engine.clock == pytest.approx(record.dt)

    @pytest.mark.parametrize("convention", list(RateConvention))
    def test_waiting_time_uses_configured_total(self, local_config, convention):
        config = local_config.with_updates(
            engine=EngineKind.STANDARD, dt_rate_convention=convention
        )
        state = LatticeState.init_random(config.n_cells, config.cars, seed=99)
        engine = create_engine(config, state=state, stream=UniformStream(123))
        mirror = UniformStream(123)
        for _ in range(20):
            before = engine.total_rate
            record = engine.step()
            mirror.uniform()  # selection
            xi2 = mirror.open_uniform()
            rate = engine.total_rate if convention == RateConvention.POST else before
            assert record.dt == pytest.approx(-math.log(xi2) / rate, rel=1e-12)

    def test_run_events(self, local_config):
        engine = create_engine(local_config)
        steps = engine.run_events(50)
        assert engine.executed == 50
        assert steps == engine.steps >= 50

    def test_run_events_on_full_lattice(self, local_config):
        engine = create_engine(local_config.with_updates(n_cars=local_config.n_cells))
        with pytest.raises(InvalidConfiguration):
            engine.run_events(1)


class TestEngineAgreement:
    """Standard and accelerated engines follow the same trajectory."""

    @pytest.mark.parametrize("jump", [1, 2])
    def test_identical_trajectories(self, exponential_config, jump):
        config = exponential_config.with_updates(jump=jump)
        state = LatticeState.init_random(config.n_cells, config.cars, seed=21)
        standard = StandardEngine(config, state=state.copy(), stream=UniformStream(8))
        accelerated = AcceleratedEngine(config, state=state.copy(), stream=UniformStream(8))
        for _ in range(1500):
            a, b = standard.step(), accelerated.step()
            assert (a.car, a.executed) == (b.car, b.executed)
        assert standard.clock == pytest.approx(accelerated.clock, rel=1e-9)
        assert np.allclose(standard.weights(), accelerated.weights(), atol=1e-10)

    def test_refresh_cadence(self, exponential_config):
        engine = create_engine(exponential_config.with_updates(refresh_every=10))
        engine.run_events(100)
        assert engine.refreshes == 10

    def test_refresh_disabled(self, exponential_config):
        engine = create_engine(exponential_config.with_updates(refresh_every=0))
        engine.run_events(100)
        assert engine.refreshes == 0


class TestListBased:
    """Tests for the list-based engine and its table."""

    def test_table_selection(self):
        table = ListTable(np.array([0, 1, 1, 2]), np.array([3.0, 2.0, 1.0]))
        assert table.total == pytest.approx(8.0)
        assert select_event_listbased(table, 0.1, 0.5) == 0
        assert select_event_listbased(table, 0.5, 0.0) == 1
        assert select_event_listbased(table, 0.5, 0.99) == 2
        assert select_event_listbased(table, 0.95, 0.3) == 3

    def test_table_move(self):
        table = ListTable(np.array([0, 1, 1, 2]), np.array([3.0, 2.0, 1.0]))
        table.move(1, 2)
        table.check_invariants()
        assert table.multiplicities().tolist() == [1.0, 1.0, 2.0]
        assert table.total == pytest.approx(7.0)
        assert table.rate_of_car(1) == 1.0

    def test_frozen_table(self):
        table = ListTable(np.array([1, 1]), np.array([1.0, 0.0]))
        with pytest.raises(FrozenSystem):
            select_event_listbased(table, 0.5, 0.5)

    @pytest.mark.parametrize("jump", [1, 2, 3])
    def test_counts_track_lattice(self, constant_config, jump):
        config = constant_config.with_updates(jump=jump)
        engine = create_engine(config)
        for _ in range(1500):
            engine.step()
        engine.lists.check_invariants()
        direct = weights_direct(engine.state, engine.kernel, engine.state.car_cells)
        assert engine.weights() == pytest.approx(direct, abs=1e-12)

    def test_global_constant_kernel(self, constant_config):
        kernel = KernelConfig(kind=KernelKind.CONSTANT, look_ahead=constant_config.n_cells)
        engine = create_engine(constant_config.with_updates(kernel=kernel))
        for _ in range(500):
            engine.step()
        direct = weights_direct(engine.state, engine.kernel, engine.state.car_cells)
        assert engine.weights() == pytest.approx(direct, abs=1e-12)

    def test_requires_constant_kernel(self, local_config):
        with pytest.raises(InvalidConfiguration):
            ListBasedEngine(local_config)
