from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from sentimarket.ingest import default_attitude_lexicon, default_emotion_lexicon
from sentimarket.sentiment import Lexicons

settings.register_profile("repo", max_examples=50, deadline=None)
settings.load_profile("repo")

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def lexicons() -> Lexicons:
    return Lexicons(default_attitude_lexicon(), default_emotion_lexicon())


@pytest.fixture
def white_noise() -> np.ndarray:
    from sentimarket.rng import SplitMix64

    return SplitMix64(11).normal(400)


@pytest.fixture
def random_walk() -> np.ndarray:
    from sentimarket.rng import SplitMix64

    return np.cumsum(SplitMix64(12).normal(400))


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        ok, detail = RESULTS[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
