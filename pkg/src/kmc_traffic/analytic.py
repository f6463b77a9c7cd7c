"""Closed-form limiting fluxes and critical densities for the exponential kernel.

These serve as test oracles only and are never used by the engines.

When lambda -> infinity the kernel concentrates on the next cell, which is
always vacant for a car that can move, so no slowdown applies:
    F = omega0 rho (1 - rho)^J,        v = omega0 (1 - rho)^J.
When lambda -> 0 the kernel becomes uniform and every weight tends to rho:
    F = omega0 rho (1 - rho)^J g(rho),  v = omega0 (1 - rho)^J g(rho),
which for g(x) = 1 - x and g(x) = (1 - x)^2 raises the exponent by 1 and 2.

The two limits N -> infinity and lambda -> infinity do not commute; the local
PDE obtained from the continuum kernel has flux rho (1 - rho)^J g(rho) instead.
"""

from typing import Optional

from .exceptions import InvalidConfiguration
from .models import SECONDS_PER_HOUR, LimitKind, SlowdownKind
from .slowdown import Slowdown

FEET_PER_CELL = 22.0
CELLS_PER_MILE = 240.0
TAU0_SECONDS = 0.25
OMEGA0 = 1.0 / TAU0_SECONDS

# Interaction strengths used for the fundamental-diagram family.
STRENGTH_GRID = (0.1, 10.0, 100.0, 500.0, 1000.0, 10000.0)


def cells_per_second_to_mph(velocity: float) -> float:
    """Convert cells/s to miles per hour (240 cells per mile)."""
    return velocity * SECONDS_PER_HOUR / CELLS_PER_MILE


def cars_per_hour(flow: float) -> float:
    """Convert cars/s to cars/h."""
    return flow * SECONDS_PER_HOUR


def _check_density(rho_bar: float) -> None:
    if not 0.0 <= rho_bar <= 1.0:
        raise InvalidConfiguration(f"rho_bar must lie in [0, 1], got {rho_bar}", key="rho_bar")


def velocity_limit(
    rho_bar: float,
    jump: int,
    omega0: float,
    limit: LimitKind,
    g: Optional[Slowdown] = None,
) -> float:
    """Limiting ensemble velocity, cells/s.

    Args:
        rho_bar: Average density in [0, 1]
        jump: Multiple move parameter J
        omega0: Base hop frequency, 1/s
        limit: Which lambda limit
        g: Slowdown function; required for the lambda -> 0 limit

    Returns:
        v-bar in the requested limit
    """
    _check_density(rho_bar)
    free = omega0 * (1.0 - rho_bar) ** jump
    limit = LimitKind(limit)
    if limit == LimitKind.LAMBDA_TO_INFINITY:
        return free
    if g is None:
        raise InvalidConfiguration("the lambda -> 0 limit needs a slowdown function", key="g")
    return free * g.eval(rho_bar)


def flux_limit(
    rho_bar: float,
    jump: int,
    omega0: float,
    limit: LimitKind,
    g: Optional[Slowdown] = None,
) -> float:
    """Limiting average flow, cars/s; equals rho_bar * velocity_limit."""
    return rho_bar * velocity_limit(rho_bar, jump, omega0, limit, g)


def critical_density(jump: int, limit: LimitKind, g_kind: Optional[SlowdownKind] = None) -> float:
    """Density maximising the limiting flux.

    Raises:
        InvalidConfiguration: For lambda -> 0 with an Arrhenius slowdown, which
            has no closed form
    """
    limit = LimitKind(limit)
    if limit == LimitKind.LAMBDA_TO_INFINITY:
        return 1.0 / (jump + 1)
    if g_kind is None:
        raise InvalidConfiguration("the lambda -> 0 limit needs a slowdown kind", key="g")
    g_kind = SlowdownKind(g_kind)
    if g_kind == SlowdownKind.LINEAR:
        return 1.0 / (jump + 2)
    if g_kind == SlowdownKind.QUADRATIC:
        return 1.0 / (jump + 3)
    raise InvalidConfiguration(
        "no closed-form critical density for an Arrhenius slowdown as lambda -> 0", key="g"
    )


def critical_velocity(
    jump: int, limit: LimitKind, g_kind: Optional[SlowdownKind] = None, omega0: float = OMEGA0
) -> float:
    """Velocity at the critical density, cells/s."""
    rho_c = critical_density(jump, limit, g_kind)
    g = Slowdown(g_kind) if g_kind is not None else None
    return velocity_limit(rho_c, jump, omega0, limit, g)
