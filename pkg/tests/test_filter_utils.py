import pytest

from filter_utils import DoctrineFlags, Filter, FilterError, compile_filter, tokenize


def test_tokenize_accepts_keywords():
    assert tokenize("a and not b") == [("name", "a"), "&", "!", ("name", "b")]
    assert tokenize("(x|y)") == ["(", ("name", "x"), "|", ("name", "y"), ")"]


def test_and_binds_tighter_than_or():
    f = Filter("tripos | classical & !comp")
    flags = {"tripos": False, "classical": True, "comp": True}
    assert f.evaluate(flags) is False
    flags["tripos"] = True
    assert f.evaluate(flags) is True
    assert f.names == ["classical", "comp", "tripos"]


def test_parentheses():
    f = Filter("(tripos | classical) & !comp")
    assert f.evaluate({"tripos": True, "classical": False, "comp": True}) is False
    assert f.evaluate({"tripos": True, "classical": False, "comp": False}) is True


@pytest.mark.parametrize("expr", ["", "tripos &", "(tripos", "tripos classical", "tripos $"])
def test_malformed_filters(expr):
    with pytest.raises(FilterError):
        Filter(expr)


def test_unknown_flags_are_rejected():
    with pytest.raises(FilterError, match="desconocidos"):
        compile_filter("tripos & wobbly")
    with pytest.raises(FilterError):
        compile_filter("concl.nope")
    assert compile_filter("hyp.bingo & concl.bingo").names == ["concl.bingo", "hyp.bingo"]


def test_filter_on_a_doctrine(ps10):
    assert compile_filter("valid & full_comp & classical")(ps10)
    assert not compile_filter("!valid")(ps10)


def test_doctrine_flags_cache(ps20):
    flags = DoctrineFlags(ps20)
    assert flags["concl.zero"] is True
    assert flags["hyp.zero"] is True
    assert "concl.zero" in flags._cache


def test_intuitionistic_witness_on_the_three_chain(sl3):
    assert compile_filter("full_comp & !classical")(sl3)
