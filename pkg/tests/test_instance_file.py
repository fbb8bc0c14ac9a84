import json

import pytest

import catalog
from doctrine import TabulatedDoctrine, validate_doctrine
from theorems import check_theorem
from instance_file import load_instance, locate, parse, save_instance, serialize
from utils import InstanceFormatError

ROUND_TRIP = ["TRIV", "TRIV-PS", "PS-1-0", "PS-2-0", "SIER", "SL-2chain", "SL-3chain"]

TWO_CHAIN = {
    "base": {
        "objects": ["0", "1"],
        "arrows": {"0<=0": {"dom": "0", "cod": "0"}, "0<=1": {"dom": "0", "cod": "1"},
                   "1<=1": {"dom": "1", "cod": "1"}},
        "identity": {"0": "0<=0", "1": "1<=1"},
        "composition": [["0<=1", "0<=0", "0<=1"], ["0<=0", "0<=0", "0<=0"],
                        ["1<=1", "0<=1", "0<=1"], ["1<=1", "1<=1", "1<=1"]],
        "products": [["0", "0", "0", "0<=0", "0<=0"], ["0", "1", "0", "0<=0", "0<=1"],
                     ["1", "0", "0", "0<=1", "0<=0"], ["1", "1", "1", "1<=1", "1<=1"]],
        "terminal": "1",
    },
    "fibers": {"0": {"elements": ["f", "t"], "order": [["f", "t"]]},
               "1": {"elements": ["f", "t"], "order": [["f", "t"]]}},
    "reindex": {"0<=1": {"f": "f", "t": "t"}},
    "meta": {"name": "two"},
}


def _text(data):
    return json.dumps(data, indent=2)


@pytest.mark.parametrize("cid", ROUND_TRIP)
def test_serialization_is_a_fixpoint(cid, config):
    D = catalog.build(cid, config)
    text = serialize(D)
    again = parse(text, config)
    assert serialize(again) == text


def test_explicit_emission_round_trips(ps10, config):
    text = serialize(ps10, explicit=True)
    D = parse(text, config)
    assert isinstance(D, TabulatedDoctrine)
    assert validate_doctrine(D).holds
    assert serialize(D) == text


def test_generator_reference_keeps_the_window(config):
    D = parse(serialize(catalog.build("SIER", config)), config)
    assert D.name == "SIER"
    assert D.window() == "FinTop[S]"


def test_tabulated_instance(config):
    D = parse(_text(TWO_CHAIN), config)
    assert D.name == "two"
    assert validate_doctrine(D).holds
    assert list(D.reindex(D.base.arrow("0<=1")).table) == [0, 1]


def test_load_and_save(tmp_path, config):
    data = dict(TWO_CHAIN, meta={})
    path = tmp_path / "chain.json"
    path.write_text(_text(data), encoding="utf-8")
    D = load_instance(str(path), config)
    assert D.name == "chain"
    out = save_instance(D, str(tmp_path / "sub" / "copy.json"))
    assert load_instance(out, config).describe()["fibers"] == D.describe()["fibers"]


def test_syntax_error_has_a_position():
    with pytest.raises(InstanceFormatError) as info:
        parse('{\n  "meta": {,}\n}')
    assert info.value.line == 2
    assert info.value.column is not None


def test_undeclared_composite_is_located():
    data = json.loads(json.dumps(TWO_CHAIN))
    data["base"]["composition"][0] = ["0<=1", "0<=0", "ghost"]
    text = _text(data)
    with pytest.raises(InstanceFormatError) as info:
        parse(text)
    e = info.value
    assert e.path == "$.base.composition[0]"
    assert "ghost" in str(e)
    assert e.line == text.splitlines().index('    "composition": [') + 1


def test_non_composable_pair():
    data = json.loads(json.dumps(TWO_CHAIN))
    data["base"]["composition"][0] = ["0<=1", "1<=1", "0<=1"]
    with pytest.raises(InstanceFormatError, match="componible"):
        parse(_text(data))


def test_cyclic_order_is_not_a_poset():
    data = json.loads(json.dumps(TWO_CHAIN))
    data["fibers"]["1"]["order"] = [["f", "t"], ["t", "f"]]
    with pytest.raises(InstanceFormatError) as info:
        parse(_text(data))
    assert info.value.path == "$.fibers.1.order"


def test_incomplete_reindex_table():
    data = json.loads(json.dumps(TWO_CHAIN))
    data["reindex"]["0<=1"] = {"f": "f"}
    with pytest.raises(InstanceFormatError, match="incompleta"):
        parse(_text(data))
    data["reindex"] = {}
    with pytest.raises(InstanceFormatError, match="falta el reindexado"):
        parse(_text(data))


def test_missing_base_and_window():
    with pytest.raises(InstanceFormatError, match="meta.window"):
        parse('{"meta": {"name": "x"}}')
    with pytest.raises(InstanceFormatError) as info:
        parse('{"meta": {"window": {"generator": "nope"}}}')
    assert info.value.path == "$.meta.window"


def test_locate_counts_lines():
    text = '{\n  "a": {\n    "b": [1, 2]\n  }\n}'
    assert locate(text, ["a", "b"]) == (3, 5)


def test_empty_fiber_is_accepted():
    data = {
        "base": {
            "objects": ["0"],
            "arrows": {"0<=0": {"dom": "0", "cod": "0"}},
            "identity": {"0": "0<=0"},
            "composition": [["0<=0", "0<=0", "0<=0"]],
            "products": [["0", "0", "0", "0<=0", "0<=0"]],
            "terminal": "0",
        },
        "fibers": {"0": {"elements": [], "order": []}},
        "reindex": {"0<=0": {}},
    }
    D = parse(_text(data))
    assert D.fiber("0").n == 0
    assert validate_doctrine(D).holds
    report = check_theorem("zero", D)
    assert report.conclusion.not_applicable
    assert report.conclusion.payload["hypothesis"] == "nonempty_fibers"
    assert serialize(parse(serialize(D))) == serialize(D)
