import numpy as np
import pytest

from ncwigner import (
    RankOneOperator,
    default_state_grid,
    gaussian_state,
    make_orbit_label,
    momentum_representation,
)


@pytest.fixture(scope="session")
def generic_label():
    return make_orbit_label(1.0, -1.0, 1.0)


@pytest.fixture(scope="session")
def state_grid():
    return default_state_grid(128, 10.0)


@pytest.fixture(scope="session")
def gauss_position(state_grid):
    return gaussian_state(state_grid)


@pytest.fixture(scope="session")
def gauss_momentum(gauss_position):
    return momentum_representation(gauss_position, 1.0)


@pytest.fixture(scope="session")
def gauss_op(gauss_momentum):
    return RankOneOperator(ket=gauss_momentum, bra=gauss_momentum)


def sup_rel(a, b):
    """Sup-norm difference normalised by the sup of the reference."""
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))
