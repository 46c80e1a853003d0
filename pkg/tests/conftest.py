import os
import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from lattice import EvaluationPoint, IndexSet  # noqa: E402
from models.fixtures import example2_pair, example2_triple  # noqa: E402

np.seterr(all="warn")

hypothesis.settings.register_profile("ci", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

SPECS = ROOT / "specs"
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def triple():
    return example2_triple()


@pytest.fixture
def pair():
    return example2_pair()


@pytest.fixture
def ones(triple):
    return EvaluationPoint.constant(triple.ground)


@pytest.fixture
def shifted():
    return EvaluationPoint.from_mapping({1: 0.5, 4: 2.0, 5: 1.0})


@pytest.fixture
def ground3():
    return IndexSet.of(1, 2, 3)
