import pytest

from milnorfib import WeightSystem, gallery


@pytest.fixture
def germ_a():
    return gallery.complex_square()


@pytest.fixture
def germ_b():
    return gallery.weighted_twist()


@pytest.fixture
def germ_d():
    return gallery.conjugate_product()


@pytest.fixture
def germ_ex2():
    return gallery.milnor_nonfibering()


@pytest.fixture
def ws_11():
    return WeightSystem((1, 1), 2, 2)


@pytest.fixture
def ws_21():
    return WeightSystem((2, 1), 4, 4)


@pytest.fixture
def ws_1111():
    return WeightSystem((1, 1, 1, 1), 2, 2)
