"""Test package initialization."""


def test_imports():
    """Test that all public APIs are importable."""
    from kmc_traffic import (
        __version__,
        AcceleratedEngine,
        BaseEngine,
        FrozenSystem,
        InvalidConfiguration,
        KMCTrafficException,
        Kernel,
        LatticeState,
        ListBasedEngine,
        MeasurementError,
        SimConfig,
        Slowdown,
        StandardEngine,
        Timer,
        UnknownCar,
        ValidationFailed,
        create_engine,
        flux_limit,
        get_logger,
        run_simulation,
        setup_logging,
        sweep,
    )

    assert __version__ is not None
    assert issubclass(AcceleratedEngine, BaseEngine)
    assert issubclass(InvalidConfiguration, ValueError)
    assert issubclass(UnknownCar, KeyError)
    for exc in (FrozenSystem, MeasurementError, ValidationFailed):
        assert issubclass(exc, KMCTrafficException)


def test_version():
    """Test version string."""
    from kmc_traffic import __version__

    assert isinstance(__version__, str)
    assert len(__version__) > 0


def test_all_names_resolve():
    import kmc_traffic

    for name in kmc_traffic.__all__:
        assert hasattr(kmc_traffic, name), name
