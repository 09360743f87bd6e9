import pytest

from sketchparts import synth


@pytest.fixture(scope="session")
def synth_root(tmp_path_factory):
    """Synthetic dataset with partial epitomes (the default demo data)."""
    root = tmp_path_factory.mktemp("synth-data")
    synth.generate_dataset(root, sketches_per_category=5)
    return root


@pytest.fixture(scope="session")
def identity_root(tmp_path_factory):
    """Synthetic dataset whose epitomes keep every stroke."""
    root = tmp_path_factory.mktemp("synth-identity")
    synth.generate_dataset(root, sketches_per_category=5, keep_fraction=1.0)
    return root
