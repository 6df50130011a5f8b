import sympy
from hypothesis import settings

settings.register_profile("default", deadline=None)
settings.load_profile("default")

ODD_PRIMES_200 = [p for p in sympy.primerange(3, 200)]
SMALL_ODD_PRIMES = [3, 5, 7, 11, 13]

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
