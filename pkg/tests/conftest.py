import pytest
from mpmath import mp


@pytest.fixture(autouse=True)
def _reset_mp_precision():
    """mpmath precision is process-global; keep tests from leaking it."""
    saved = mp.prec
    yield
    mp.prec = saved
