"""Tests for the dyadic Bellman toolkit."""

import json
from pathlib import Path
from typing import Any


def _fixture_path(filename: str) -> Path:
    return Path(__file__).parent / "fixtures" / filename


def load_fixtures(filename: str) -> str:
    """Load a fixture."""
    return _fixture_path(filename).read_text(encoding="utf-8")


def load_json_fixture(filename: str) -> Any:
    """Load a JSON fixture."""
    return json.loads(load_fixtures(filename))


def fixture_path(filename: str) -> Path:
    """Return the path of a fixture, for code that reads files itself."""
    return _fixture_path(filename)
