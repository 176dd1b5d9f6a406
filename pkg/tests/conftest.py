import numpy as np
import pytest
from hypothesis import strategies as st

from gaussclone.gaussian import (
    GaussianState,
    apply,
    beam_splitter,
    rotation,
    squeezer,
)


def random_state(rng: np.random.Generator, n: int) -> GaussianState:
    """Mixed Gaussian state: thermal noise pushed through random optics."""
    nu = 0.25 + rng.exponential(0.3, size=n)
    s = GaussianState(rng.normal(size=2 * n), np.diag(np.repeat(nu, 2)))
    for _ in range(3 * n):
        k = int(rng.integers(n))
        s = apply(squeezer(rng.normal(scale=0.5), k, n), s)
        s = apply(rotation(rng.uniform(0, 2 * np.pi), k, n), s)
        if n > 1:
            i, j = rng.choice(n, size=2, replace=False)
            s = apply(beam_splitter(rng.uniform(), int(i), int(j), n), s)
    return s


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


seeds = st.integers(min_value=0, max_value=2**32 - 1)


#: (criterion number, passed, detail) lines filled in by the acceptance suite
ACCEPTANCE: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
