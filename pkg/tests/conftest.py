import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from primepairs import build_table


@pytest.fixture(scope="session")
def table_100():
    return build_table(100)


@pytest.fixture(scope="session")
def table_10k():
    return build_table(10**4)


@pytest.fixture(scope="session")
def table_9240():
    # 9240 = 2310 * 4, the largest multiple of both 30 and 2310 under 1e4
    return build_table(9240)


@pytest.fixture(scope="session")
def table_1e6():
    return build_table(10**6)
