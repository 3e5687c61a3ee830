import numpy as np
import pytest

from aimd_sampling import kernel
from aimd_sampling.traces import HarvestTrace


@pytest.fixture(params=kernel.available_backends())
def backend(request):
    return request.param


@pytest.fixture
def flat_trace():
    def make(energy, days):
        return HarvestTrace("flat", np.full(days, float(energy)))
    return make


_ACCEPTANCE = {}


class _Criterion:
    def __init__(self, key, title):
        self.key, self.title, self.notes = key, title, []

    def note(self, text):
        self.notes.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        _ACCEPTANCE[self.key] = (self.title, exc_type is None, "; ".join(self.notes))
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k)):
        title, ok, notes = _ACCEPTANCE[key]
        line = f"[{'PASS' if ok else 'FAIL'}] {key}. {title}"
        if notes:
            line += f" -- {notes}"
        terminalreporter.write_line(line)
