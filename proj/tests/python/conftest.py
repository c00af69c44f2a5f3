import os
import pathlib
import shutil

import pytest

ROOT = pathlib.Path(os.environ.get("JENSEN_SHARP_ROOT", pathlib.Path(__file__).resolve().parents[2]))


@pytest.fixture(scope="session")
def root():
    return ROOT


@pytest.fixture(scope="session")
def cli():
    exe = os.environ.get("JENSEN_SHARP_CLI") or shutil.which("jensen-sharp")
    if not exe:
        candidate = ROOT / "build" / "jensen-sharp"
        exe = str(candidate) if candidate.exists() else None
    if not exe:
        pytest.skip("jensen-sharp executable not found")
    return exe
