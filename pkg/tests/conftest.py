import numpy as np
import pytest

from axineo import DeformationField, DomainSpec, MaterialLaw, build_grid


@pytest.fixture
def law():
    return MaterialLaw()


@pytest.fixture
def annulus():
    return build_grid(DomainSpec("annulus-rect", 1.0, 2.0, 0.0, 1.0, 17, 17))


@pytest.fixture
def axis_grid():
    return build_grid(DomainSpec("axis-rect", 0.0, 1.0, 0.0, 1.0, 17, 17))


def random_feasible_field(grid, seed=0, amplitude=0.02):
    """Smooth non-affine map plus small nodal noise; det Dv stays near 1."""
    rng = np.random.default_rng(seed)
    r, z = grid.nodes[:, 0], grid.nodes[:, 1]
    v1 = r * (1.0 + 0.2 * z) + 0.05 * np.sin(np.pi * z) * r
    v2 = z + 0.1 * r + 0.05 * np.sin(np.pi * r) * z
    v1 = v1 + amplitude * grid.h * rng.standard_normal(r.size) * (r > 0)
    v2 = v2 + amplitude * grid.h * rng.standard_normal(r.size)
    return DeformationField(v1, v2)


_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


@pytest.fixture
def criterion(request):
    """``record(number, ok, detail)`` logs one acceptance line and returns ``ok``."""
    log = request.config.stash[_CRITERIA]

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        log[number] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_CRITERIA, {})
    if log:
        terminalreporter.section("acceptance criteria")
        for k in sorted(log):
            terminalreporter.write_line(log[k])
