import pytest

from jiragpt.evalharness import default_corpus, scripted_backend
from jiragpt.mockjira import default_fixture
from jiragpt.prompts import PromptKit


@pytest.fixture(scope="session")
def fixture():
    return default_fixture()


@pytest.fixture(scope="session")
def corpus():
    return default_corpus()


@pytest.fixture(scope="session")
def prompt_kit():
    return PromptKit()


@pytest.fixture
def golden_backend(corpus):
    return scripted_backend("golden", corpus)


@pytest.fixture
def jira(fixture):
    return fixture.issue_source()
