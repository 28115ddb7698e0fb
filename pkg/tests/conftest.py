import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bsvm.data import LabeledDataset  # noqa: E402
from bsvm.solver import available_backends  # noqa: E402


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


def blobs(seed, n_per_class=20, classes=("a", "b", "c"), dim=2, spread=0.3, sep=3.0):
    """Well separated Gaussian clusters on a circle of radius ``sep``."""
    rng = np.random.default_rng(seed)
    X, labels = [], []
    for k, label in enumerate(classes):
        center = np.zeros(dim)
        ang = 2 * np.pi * k / len(classes)
        center[0], center[1 % dim] = sep * np.cos(ang), sep * np.sin(ang)
        X.append(center + spread * rng.standard_normal((n_per_class, dim)))
        labels += [label] * n_per_class
    return LabeledDataset(np.vstack(X), labels)


def random_binary(rng, n_max=60, d_range=(2, 10)):
    n = int(rng.integers(4, n_max + 1))
    d = int(rng.integers(d_range[0], d_range[1] + 1))
    y = rng.choice([-1.0, 1.0], n)
    y[0], y[1] = 1.0, -1.0
    X = rng.standard_normal((n, d)) + 0.8 * y[:, None]
    return X, y


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
