import pytest

from pursuitkb.layout import build_layout
from pursuitkb.prediction import train_model
from pursuitkb.simharness.phrases import default_phrase_text


@pytest.fixture(scope="session")
def corpus():
    return default_phrase_text()


@pytest.fixture(scope="session")
def model(corpus):
    return train_model(corpus)


@pytest.fixture(scope="session")
def nop_layout():
    return build_layout("NoP", "exp1")


@pytest.fixture(scope="session")
def lp_layout():
    return build_layout("LP", "exp1")


@pytest.fixture(scope="session")
def lwp_layout():
    return build_layout("L_WP", "exp1")


@pytest.fixture(scope="session")
def lwp_exp2_layout():
    return build_layout("L_WP", "exp2")
