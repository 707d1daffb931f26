import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from tailscore import backend  # noqa: E402

ACCEPTANCE = {}


def record(number: int, ok: bool, detail: str):
    """Store an acceptance outcome for the terminal summary."""
    ACCEPTANCE[number] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


BACKENDS = [pytest.param(backend.python_kernels, id="python")]
if backend.compiled_kernels is not None:
    BACKENDS.append(pytest.param(backend.compiled_kernels, id="cython"))


@pytest.fixture(params=BACKENDS, scope="module")
def kernels(request):
    return request.param
