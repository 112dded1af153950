from __future__ import annotations

from pathlib import Path

import pytest

from unitrans import _kernels
from unitrans.ctc import Vocabulary

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(params=sorted(_kernels.AVAILABLE))
def kernels(request):
    """Each available kernel backend in turn."""
    return _kernels.AVAILABLE[request.param]


@pytest.fixture(scope="session")
def vocab():
    return Vocabulary.default()


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
