"""Shared test fixtures and helpers for toric_diagonal tests."""

import random
from pathlib import Path

import pytest

from toric_diagonal.config import VerificationConfig, load_config
from toric_diagonal.lattice import Patch, Vertex, box_patch
from toric_diagonal.toric import Configuration

# Root directory for test resource files
RESOURCES_DIR = Path(__file__).parent / "resources"

ORIGIN = Vertex(0, 0)


@pytest.fixture
def resources_dir() -> Path:
    """Return the path to the test resources directory."""
    return RESOURCES_DIR


@pytest.fixture
def box1() -> Patch:
    """box(1) around the origin: 12 edges, 1 interior star, 4 interior faces."""
    return box_patch(ORIGIN, 1)


@pytest.fixture
def box2() -> Patch:
    """box(2) around the origin: 40 edges, 9 interior stars, 16 interior faces."""
    return box_patch(ORIGIN, 2)


@pytest.fixture
def rng() -> random.Random:
    """A seeded RNG so randomized sweeps are reproducible."""
    return random.Random(20240601)


@pytest.fixture
def unsigned() -> Configuration:
    """``f ≡ 1`` on the whole lattice."""
    return Configuration.constant(1)


@pytest.fixture
def box1_uniform(box1: Patch) -> Configuration:
    """``f ≡ 1`` on the interior of box(1) only."""
    return Configuration.uniform(box1.interior_sites())


@pytest.fixture
def small_config() -> VerificationConfig:
    """Bundled defaults shrunk to desk-test size."""
    return load_config().with_overrides(samples=5, box_size=2, time_budget=600.0)


@pytest.fixture
def patch_json(resources_dir: Path) -> Path:
    """Return the path to patch.json (box(1))."""
    return resources_dir / "patch.json"


@pytest.fixture
def path_json(resources_dir: Path) -> Path:
    """Return the path to path.json (a 3-step dual path)."""
    return resources_dir / "path.json"


@pytest.fixture
def pauli_json(resources_dir: Path) -> Path:
    """Return the path to pauli.json (``-i·X Z`` on two edges)."""
    return resources_dir / "pauli.json"


@pytest.fixture
def user_config_yaml(resources_dir: Path) -> Path:
    """Return the path to user_config.yaml."""
    return resources_dir / "user_config.yaml"
