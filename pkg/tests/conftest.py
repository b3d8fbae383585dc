import pytest

from vaguelab.family import FamilyBuilder
from vaguelab.filters import (FilterPair, FractionalFilter, MSTApproxFilter,
                              OUFilter, unit_pair)
from vaguelab.mra import WaveletSpec


@pytest.fixture(scope="session")
def meyer():
    return WaveletSpec("meyer")


@pytest.fixture(scope="session")
def db4():
    return WaveletSpec("daubechies", n_moments=4)


@pytest.fixture(scope="session")
def ou_pair():
    return FilterPair(OUFilter(), OUFilter())


@pytest.fixture(scope="session")
def mst_pair():
    return FilterPair(MSTApproxFilter(0.7), FractionalFilter(0.7))


@pytest.fixture(scope="session")
def unit_builder(meyer):
    return FamilyBuilder(meyer, unit_pair())


@pytest.fixture(scope="session")
def ou_builder(meyer, ou_pair):
    return FamilyBuilder(meyer, ou_pair)
