from __future__ import annotations

import pytest

from foonbridge.kb import load_assembly, load_disassembly


@pytest.fixture(scope="session")
def assembly():
    return load_assembly()


@pytest.fixture(scope="session")
def disassembly():
    return load_disassembly()
