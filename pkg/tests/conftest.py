import numpy as np
import pytest

from cavraman.config import build_workspace, data_dir, load_config


def _workspace(config_name, **overrides):
    cfg = load_config(data_dir() / config_name)
    for key, value in overrides.items():
        setattr(cfg, key, value)
    return build_workspace(cfg)


@pytest.fixture(scope="session")
def oh_ws():
    """OH defaults as shipped (v=0, J <= 30)."""
    return _workspace("defaults-oh.cfg")


@pytest.fixture(scope="session")
def oh_small():
    """OH restricted to the nine thermally occupied levels."""
    return _workspace("defaults-oh.cfg", j_max=8)


@pytest.fixture(scope="session")
def oh_rovib_ws():
    """OH with two vibrational levels, artificially hot start in v=1."""
    return _workspace("defaults-oh.cfg", v_max=1, j_max=8,
                      initial_state="v1:thermalJ")


@pytest.fixture(scope="session")
def oh_tiny():
    """OH with a single allowed anti-Stokes transition (J2 -> J0)."""
    return _workspace("defaults-oh.cfg", j_max=2)


@pytest.fixture(scope="session")
def no_ws():
    return _workspace("defaults-no.cfg")


@pytest.fixture(scope="session")
def no_small():
    return _workspace("defaults-no.cfg", j_max=8)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)
