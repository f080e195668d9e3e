import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def assert_close(a, b, tol, label=""):
    gap = float(np.linalg.norm(np.asarray(a) - np.asarray(b)))
    assert gap <= tol, f"{label} deviates by {gap:.3e} (> {tol:.1e})"
