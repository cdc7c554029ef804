from __future__ import annotations

import pytest

from psiverify.primes import build_table


@pytest.fixture(scope="session")
def table():
    """Shared table covering p_100000 = 1299709 (and then some)."""
    return build_table(1_400_000)


@pytest.fixture(scope="session")
def small_table():
    return build_table(1000)
