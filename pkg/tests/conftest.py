import numpy as np
import pytest

from src.coding.rs_codec import OuterCode
from src.models.channel_model import InnerChannelModel


@pytest.fixture(scope="session")
def rs255_code() -> OuterCode:
    """RS(255,144,112) over GF(2^8)."""
    return OuterCode.rs(255, 144)


@pytest.fixture(scope="session")
def small_code() -> OuterCode:
    """RS(15,7,9) over GF(2^4)."""
    return OuterCode.rs(15, 7, m=4)


@pytest.fixture(scope="session")
def tiny_code() -> OuterCode:
    """RS(3,1,3) over GF(4)."""
    return OuterCode.rs(3, 1, m=2)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def pinned_channel(e0: float, n_inner: float = 16.0, s: float = 0.5) -> InnerChannelModel:
    """Channel with a pinned exponent so that E0 * n_inner is chosen directly."""
    return InnerChannelModel.from_bsc(0.02, 0.5, n_inner=n_inner, s=s, e0=e0)
