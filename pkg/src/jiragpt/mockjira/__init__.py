"""Mock Jira: bundled fixture loading and the search API server."""

from jiragpt.mockjira.fixture import Fixture, FixtureInvalid, default_fixture, load_fixture
from jiragpt.mockjira.server import create_app

__all__ = ["Fixture", "FixtureInvalid", "create_app", "default_fixture", "load_fixture"]
