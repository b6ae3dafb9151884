import os
import sys

import numpy as np
import pytest

from tailcens.censoring import CensoredSample, CensoringDesign, generate, sort_with_concomitants

sys.path.insert(0, os.path.dirname(__file__))


def make_sorted(z, delta):
    return sort_with_concomitants(CensoredSample(np.asarray(z, float), np.asarray(delta, bool)))


def random_sorted(seed, n, p, gamma1=0.5, family="burr"):
    return sort_with_concomitants(generate(CensoringDesign(family, gamma1, p), n, seed))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
