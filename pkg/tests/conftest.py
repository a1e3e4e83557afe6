import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from starspin.exterior import AlgebraSignature, Multivector  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

E3 = AlgebraSignature.euclidean(3)

coeffs = st.complex_numbers(min_magnitude=0, max_magnitude=5, allow_nan=False, allow_infinity=False)


def multivectors(sig: AlgebraSignature = E3, max_terms: int | None = None):
    """Sparse random multivectors over ``sig`` with bounded complex coefficients."""
    size = 1 << sig.n
    return st.dictionaries(st.integers(0, size - 1), coeffs,
                           max_size=max_terms or size).map(lambda d: Multivector(sig, d))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def e3():
    return E3


@pytest.fixture
def gens():
    return tuple(Multivector.generator(E3, l) for l in E3.labels)


def pytest_terminal_summary(terminalreporter):
    report = sys.modules.get("test_acceptance")
    lines = getattr(report, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
