import functools

import pytest

from toric_mirror.cohomology import RingPresentation
from toric_mirror.models import FIXTURES, load_fixture


@functools.lru_cache(maxsize=None)
def model(name):
    return load_fixture(name)


@functools.lru_cache(maxsize=None)
def ring(name):
    mf = model(name)
    return RingPresentation(mf.fan, mf.git)


@pytest.fixture(params=FIXTURES)
def fixture_name(request):
    return request.param
