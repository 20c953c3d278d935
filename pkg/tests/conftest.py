import numpy as np
import pytest

from reur._backend import compiled_kernels, python_kernels

BACKENDS = [pytest.param(python_kernels, id="python")]
if compiled_kernels is not None:
    BACKENDS.append(pytest.param(compiled_kernels, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance bookkeeping: tests record sub-checks, the summary prints one line per criterion
ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    def record(criterion, title, check, passed, detail=""):
        entry = ACCEPTANCE.setdefault(criterion, {"title": title, "checks": []})
        entry["checks"].append((check, bool(passed), detail))
        return bool(passed)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    from reur._backend import BACKEND
    terminalreporter.section(f"acceptance criteria (kernels: {BACKEND})")
    for criterion in sorted(ACCEPTANCE, key=lambda c: (isinstance(c, str), str(c))):
        entry = ACCEPTANCE[criterion]
        failed = [(c, d) for c, ok, d in entry["checks"] if not ok]
        status = "PASS" if not failed else "FAIL"
        label = f"criterion {criterion}" if isinstance(criterion, int) else criterion
        line = f"[{status}] {label}: {entry['title']}"
        if failed:
            line += " | failing: " + "; ".join(f"{c} ({d})" for c, d in failed)
        terminalreporter.write_line(line)
