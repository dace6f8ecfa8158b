import numpy as np
import pytest

from bbcodes import CodeSpec, LogicalTestContext, build_checks
from bbcodes.cli import load_fixtures


@pytest.fixture(scope="session")
def fixtures():
    return {r.label: r for r in load_fixtures()}


@pytest.fixture(scope="session")
def code_54():
    return CodeSpec.xy(3, 9, "1+y2+y4", "y3+x+x2")


@pytest.fixture(scope="session")
def code_30():
    return CodeSpec.pi(3, 5, "1+p+p2", "p+p3+p8")


@pytest.fixture(scope="session")
def code_18():
    return CodeSpec.xy(3, 3, "1+x+y", "1+x2+y2")


@pytest.fixture(scope="session")
def ctx_30(code_30):
    return LogicalTestContext(build_checks(code_30))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_spec(rng, l, m, weight=3):
    """Random weight-``weight`` bivariate pair over ``Z_l x Z_m``."""
    def poly():
        cells = rng.choice(l * m, size=weight, replace=False)
        return "+".join(f"x{c // m}y{c % m}" for c in cells)
    return CodeSpec.xy(l, m, poly(), poly())
