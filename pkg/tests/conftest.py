import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from synth import reference_corpus  # noqa: E402

from corsica.extract import build_feature_vector  # noqa: E402
from corsica.tree import build_tree  # noqa: E402


@pytest.fixture(scope="session")
def reference_filesets():
    return reference_corpus()


@pytest.fixture(scope="session")
def reference_vectors(reference_filesets):
    return [build_feature_vector(fs) for fs in reference_filesets]


@pytest.fixture(scope="session")
def reference_tree(reference_vectors):
    return build_tree(reference_vectors)
