"""Shared fixtures"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.marginals import MarginalModel
from core.streams import StreamFactory

# KS checks run at the 99% level; the margin keeps fixed-seed tests off the edge
KS_MARGIN = 1.25

MINIMAL_CONFIG = """\
claims.x.family = "exponential"
counting.kind = "poisson"
counting.lambda = 1.0
treaty1.scheme = "ecomor"
treaty1.p = 2
horizons = [100]
replicates = 10
"""


@pytest.fixture
def factory():
    return StreamFactory(20240917)


@pytest.fixture
def rng(factory):
    return factory.stream(99)


@pytest.fixture
def exponential():
    return MarginalModel.exponential()


@pytest.fixture
def minimal_config_text():
    return MINIMAL_CONFIG
