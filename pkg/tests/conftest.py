import random

import pytest


@pytest.fixture
def rng():
    return random.Random(1234)


def bits_of(x, n):
    return tuple((x >> i) & 1 for i in range(n))


def int_of(bits):
    return sum(b << i for i, b in enumerate(bits))


def naive_threshold(k, args):
    """Standard threshold function: 1 iff at least k arguments are 1."""
    return int(sum(args) >= k)


def naive_bithreshold(graph, kup, kdown, bits, v):
    """Vertex function written straight from the definition (1-based v, tuple state)."""
    closed = [v] + list(graph.neighbors(v))
    args = [bits[u - 1] for u in sorted(closed)]
    k = kup[v - 1] if bits[v - 1] == 0 else kdown[v - 1]
    return naive_threshold(k, args)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
