"""Shared fixtures: the reference channel and the bundled scenario configs."""

import pathlib

import numpy as np
import pytest

from formlink.channel import ChannelParams

REPO_ROOT = pathlib.Path(__file__).resolve().parents[1]
CONFIG_DIR = REPO_ROOT / "configs"

# free-space reference: isotropic antennas, 0.25 m wavelength, 1 m reference distance
REF_GAIN = 1.0 / (16.0 * np.pi) ** 2


@pytest.fixture(scope="session")
def channel() -> ChannelParams:
    return ChannelParams(
        bandwidth_hz=1e6,
        ref_distance_m=1.0,
        ref_gain=REF_GAIN,
        path_loss_exponent=2.0,
        channel_noise_psd=1e-11,
        jamming_noise_psd=2.5e-10,
    )


@pytest.fixture(scope="session")
def config_dir() -> pathlib.Path:
    return CONFIG_DIR


@pytest.fixture(scope="session")
def six_cycle_eigs():
    # ring of six with unit weights: 2 - 2*cos(2*pi*k/6), k = 1..5
    return [1.0, 1.0, 3.0, 3.0, 4.0]
