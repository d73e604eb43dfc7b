import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from storyloom.assets import AssetStore
from storyloom.providers.mock import mock_provider_set


@pytest.fixture
def store():
    return AssetStore()


@pytest.fixture
def providers():
    return mock_provider_set()


@pytest.fixture
def fixed_clock():
    return lambda: "2024-01-01T00:00:00+00:00"
