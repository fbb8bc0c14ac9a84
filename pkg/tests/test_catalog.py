import pytest

import catalog
from logic import ac_check, has_comprehension
from utils import FindocError


@pytest.mark.parametrize("cid", catalog.catalog_ids())
def test_every_catalog_id_builds(cid, config):
    D = catalog.build(cid, config)
    assert D.base.objects()
    assert D.fiber(D.base.terminal()).n >= 1


def test_powerset_ids_beyond_the_registry(config):
    D = catalog.build("PS-3-0", config)
    assert D.window() == "FinSet<=3"
    assert D.fiber("3").n == 8


def test_unknown_id(config):
    with pytest.raises(FindocError, match="desconocido"):
        catalog.build("PS-x", config)


def test_discrete_space_behaves_like_powersets(disc2):
    P = disc2.fiber("D")
    assert P.n == 4
    assert disc2.fiber("1").n == 2


def test_semilattice_fibers_are_principal(config):
    D = catalog.build("SL-3chain", config)
    assert [D.fiber(u).n for u in D.base.objects()] == [1, 2, 3]
    assert has_comprehension(D).holds
    assert ac_check(D)[0].refuted


def test_build_from_generator_reference(config):
    D = catalog.build_from_window({"generator": "finset", "max_size": 1, "doctrine": "trivial"}, config)
    assert D.fiber("1").n == 1
    D = catalog.build_from_window({"generator": "fintop", "spaces": catalog.SIERPINSKI, "dual": True},
                                config)
    assert D.fiber("S").labels[D.fiber("S").top] == "{}"
    with pytest.raises(FindocError):
        catalog.build_from_window({"generator": "finset", "doctrine": "other"}, config)
