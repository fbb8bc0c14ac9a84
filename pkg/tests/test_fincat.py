import pytest

from catalog import SIERPINSKI
from fincat import (ExplicitCategory, FinSetWindow, FinTopWindow, chain_category, find_isomorphism,
                    is_iso, is_monic, is_pullback_square, is_stable_initial, projection_class,
                    stable_initial_objects, subobject_poset, validate_category)
from utils import MalformedCategory, WindowExceeded


@pytest.fixture
def sets2():
    return FinSetWindow(2)


def test_finset_core_and_homs(sets2):
    assert sets2.objects() == ["0", "1", "2"]
    assert len(sets2.hom("2", "2")) == 4
    assert len(sets2.hom("0", "1")) == 1
    assert sets2.hom("1", "0") == []
    assert sets2.identity("2").id == "2>2:0,1"


def test_finset_products_encode_pairs(sets2):
    p = sets2.product("2", "2")
    assert p.obj == "4"
    assert p.left.table == (0, 0, 1, 1)
    assert p.right.table == (0, 1, 0, 1)
    assert sets2.diagonal("2").table == (0, 3)


def test_finset_arrow_ids_round_trip(sets2):
    f = sets2.arrow("2>1:0,0")
    assert (f.dom, f.cod, f.table) == ("2", "1", (0, 0))
    with pytest.raises(MalformedCategory):
        sets2.arrow("2>1:0,3")


def test_finset_window_is_a_category_with_products(sets2):
    assert validate_category(sets2).holds


def test_finset_empty_set_is_stable_initial(sets2):
    assert is_stable_initial(sets2, "0").holds
    assert stable_initial_objects(sets2) == ["0"]


def test_monic_and_iso(sets2):
    assert is_monic(sets2, sets2.arrow("1>2:1")).holds
    v = is_monic(sets2, sets2.arrow("2>1:0,0"))
    assert v.refuted and v.payload["law"] == "monic"
    swap = sets2.arrow("2>2:1,0")
    assert is_iso(sets2, swap)
    assert not is_iso(sets2, sets2.arrow("1>2:0"))
    assert find_isomorphism(sets2, "1", "2") is None


def test_finset_pullback_of_a_point(sets2):
    point = sets2.arrow("1>2:0")
    sq = sets2.pullback(point, sets2.identity("2"))
    assert sq.apex == "1"
    assert is_pullback_square(sets2, sq).holds


def test_subobjects_of_two_element_set(sets2):
    P = subobject_poset(sets2, "2")
    assert P.labels == ("0>2:", "1>2:0", "1>2:1", "2>2:0,1")
    assert P.le(P.index("1>2:0"), P.index("2>2:0,1"))
    assert not P.le(P.index("1>2:0"), P.index("1>2:1"))


def test_projection_class_contains_projections(sets2):
    cls = projection_class(sets2)
    p = sets2.product("2", "1")
    assert p.left in cls
    assert cls.closed


def test_finset_ceiling_guards_materialization():
    small = FinSetWindow(2, ceiling=3)
    with pytest.raises(WindowExceeded):
        small.product("2", "2")
    with pytest.raises(WindowExceeded):
        FinSetWindow(2, power_depth=1, ceiling=3)


def test_chain_category_tables():
    C = chain_category(2)
    assert C.objects() == ["0", "1"]
    assert [f.id for f in C.all_arrows()] == ["0<=0", "0<=1", "1<=1"]
    assert C.product("0", "1").obj == "0"
    assert C.terminal() == "1"
    assert validate_category(C).holds


def test_explicit_category_rejects_undeclared_composite():
    with pytest.raises(MalformedCategory):
        ExplicitCategory(objects=["a"], arrows={"id": ("a", "a")}, identities={"a": "id"},
                         composition={("id", "id"): "ghost"}, products={("a", "a"): ("a", "id", "id")},
                         terminal="a")


def test_incomplete_composition_table_is_reported():
    C = ExplicitCategory(
        objects=["a", "b"],
        arrows={"ia": ("a", "a"), "ib": ("b", "b"), "f": ("a", "b"), "g": ("b", "a")},
        identities={"a": "ia", "b": "ib"},
        composition={},
        products={}, terminal="a")
    with pytest.raises(MalformedCategory, match="incomplete table"):
        C.compose(C.arrow("g"), C.arrow("f"))


def test_sierpinski_continuous_maps():
    T = FinTopWindow(SIERPINSKI)
    assert T.objects() == ["0", "1", "S"]
    assert [f.id for f in T.hom("S", "S")] == ["S>S:0,0", "S>S:0,1", "S>S:1,1"]
    assert len(T.hom("1", "S")) == 2


def test_fintop_products_materialize_from_names():
    T = FinTopWindow(SIERPINSKI)
    assert T.size("(SxS)") == 4
    assert T.product("S", "S").obj == "(SxS)"
    assert T.size("S|1") == 1
    with pytest.raises(MalformedCategory):
        T.space("nowhere")


def test_invalid_topology_is_rejected():
    with pytest.raises(MalformedCategory, match="invalid topology"):
        FinTopWindow({"X": {"points": ["a", "b"], "opens": [[], ["a"], ["b"]]}})
