import pytest

try:
    from hypothesis import HealthCheck, settings

    settings.register_profile(
        "suite",
        max_examples=25,
        deadline=None,
        suppress_health_check=[HealthCheck.too_slow],
    )
    settings.load_profile("suite")
except ImportError:  # pragma: no cover - hypothesis is a test extra
    pass


@pytest.fixture
def unit_window():
    from isomean.intervals import Interval

    return Interval(0.0, 1.0)
