import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from encounter_net import _pykernels

try:
    from encounter_net import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = [pytest.param(_pykernels, id="python")]
if _ckernels is not None:
    BACKENDS.append(pytest.param(_ckernels, id="cython"))


@pytest.fixture(params=BACKENDS)
def kernel_module(request, monkeypatch):
    """Run a test once per available kernel backend."""
    from encounter_net import diffusion, growth, structural

    for mod in (diffusion, growth, structural):
        monkeypatch.setattr(mod, "kernels", request.param)
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
