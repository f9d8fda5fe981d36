import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gearevo import kernels  # noqa: E402

BACKENDS = ["python"] + (["cython"] if kernels.compiled_backend is not None else [])

# filled by test_acceptance; printed at the end of the session
CRITERIA = {}


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per kernel backend by swapping the selected module's functions."""
    mod = kernels.python_backend if request.param == "python" else kernels.compiled_backend
    for name in ("rnn_forward", "decode_rnn", "decode_rnn_batch", "feasibility_breaches",
                 "min_distances"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    monkeypatch.setattr(kernels, "BACKEND", request.param)
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA, key=lambda k: int(k.split()[0][1:])):
        ok, note = CRITERIA[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {key}  {note}")


