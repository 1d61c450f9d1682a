import os

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from lplab_py.core.groups import GroupSpec

settings.register_profile("lplab", max_examples=60, deadline=None)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "lplab"))


@pytest.fixture
def Z():
    return GroupSpec.free_abelian(1)


@pytest.fixture
def Z2():
    return GroupSpec.free_abelian(2)


@pytest.fixture
def F2():
    return GroupSpec.free(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(autouse=True)
def _single_worker(monkeypatch):
    monkeypatch.delenv("LPLAB_WORKERS", raising=False)
    monkeypatch.delenv("LPLAB_MAX_VERTICES", raising=False)


def letters(rank):
    return st.integers(-rank, rank).filter(lambda x: x != 0)


@st.composite
def free_words(draw, rank=2, max_size=6):
    """Reduced words in F_rank."""
    group = GroupSpec.free(rank)
    word = ()
    for letter in draw(st.lists(letters(rank), max_size=max_size)):
        word = group.mul(word, (letter,))
    return word


def lattice_points(d=2, bound=4):
    return st.tuples(*[st.integers(-bound, bound)] * d)
