import numpy as np
import pytest
from hypothesis import strategies as st

import catalog
from config_utils import get_default_config
from poset import FinPoset, reflexive_transitive_closure


@pytest.fixture(scope="session")
def config():
    return get_default_config()


@pytest.fixture(scope="session")
def ps10(config):
    return catalog.build("PS-1-0", config)


@pytest.fixture(scope="session")
def ps20(config):
    return catalog.build("PS-2-0", config)


@pytest.fixture(scope="session")
def ps11(config):
    return catalog.build("PS-1-1", config)


@pytest.fixture(scope="session")
def sier(config):
    return catalog.build("SIER", config)


@pytest.fixture(scope="session")
def disc2(config):
    return catalog.build("DISC2", config)


@pytest.fixture(scope="session")
def triv(config):
    return catalog.build("TRIV", config)


@pytest.fixture(scope="session")
def triv_ps(config):
    return catalog.build("TRIV-PS", config)


@pytest.fixture(scope="session")
def sl3(config):
    return catalog.build("SL-3chain", config)


# ---------------------------
# Oraculos de conjuntos (bitmasks)
# ---------------------------
def image_mask(table, mask):
    out = 0
    for x, fx in enumerate(table):
        if (mask >> x) & 1:
            out |= 1 << fx
    return out


def forall_image_mask(table, mask, cod_size):
    "{b : f^-1(b) incluido en mask}"
    out = 0
    for b in range(cod_size):
        if all((mask >> x) & 1 for x, fx in enumerate(table) if fx == b):
            out |= 1 << b
    return out


# ---------------------------
# Estrategias
# ---------------------------
@st.composite
def posets(draw, min_size=1, max_size=4):
    "Orden parcial aleatorio: clausura de una relacion triangular (sin ciclos)"
    n = draw(st.integers(min_size, max_size))
    rel = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            rel[i, j] = draw(st.booleans())
    return FinPoset([f"p{i}" for i in range(n)], reflexive_transitive_closure(rel))


@st.composite
def chains(draw, min_size=1, max_size=4):
    n = draw(st.integers(min_size, max_size))
    return FinPoset.chain([f"c{i}" for i in range(n)])
