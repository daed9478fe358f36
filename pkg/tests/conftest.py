import pytest

from copekit import boxworld, extended_boxworld, spekkens


@pytest.fixture
def spekkens_matrix():
    return spekkens()


@pytest.fixture
def boxworld_matrix():
    return boxworld()


@pytest.fixture
def ebw_matrix():
    return extended_boxworld()
