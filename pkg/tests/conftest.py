import numpy as np
import pytest

from momax.core import FunctionOracle, MultiObjectiveInstance
from momax.generators import GeneratorSpec, cover_instance, gen_er
from momax.objectives import CoverInstance

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[c]
        terminalreporter.write_line(f"criterion {c}: {'PASS' if ok else 'FAIL'} ({detail})")


def random_cover(n, k, p, seed, name="test"):
    rng = np.random.default_rng(seed)
    return CoverInstance([gen_er(n, p, rng) for _ in range(k)], name)


def counting_instance(fns, n):
    """Plain-callable oracles: every evaluation goes through the Python fallback path."""
    return MultiObjectiveInstance([FunctionOracle(n, f) for f in fns], "fn")


@pytest.fixture
def small_cover():
    return random_cover(10, 3, 0.3, 7)


@pytest.fixture
def kron_cover():
    return cover_instance(GeneratorSpec("kronecker", k=4, seed=3))
