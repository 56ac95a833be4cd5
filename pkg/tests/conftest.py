import sys
from fractions import Fraction

import pytest

RATIONAL_PS = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)]


@pytest.fixture(params=RATIONAL_PS, ids=str)
def rational_p(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for i in sorted(results):
            terminalreporter.write_line(results[i])
