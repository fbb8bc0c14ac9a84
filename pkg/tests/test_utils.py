from utils import (InstanceFormatError, Verdict, WindowExceeded, compute_instance_hash, conjoin,
                   guarded)


def test_verdict_dict_round_trip():
    for v in (Verdict.hold("FinSet<=2"),
              Verdict.refute({"law": "monotone", "arrow": "f"}, "w"),
              Verdict.skip("no tops", object="1")):
        assert Verdict.from_dict(v.to_dict()) == v
        assert Verdict.from_dict(v.to_dict()).payload == v.payload


def test_conjoin_prefers_refutation():
    skip = Verdict.skip("first")
    bad = Verdict.refute({"law": "x"})
    assert conjoin([Verdict.hold("w"), skip, bad], "w") is bad
    assert conjoin([Verdict.hold("w"), skip, Verdict.skip("second")], "w") is skip
    assert conjoin([], "w").holds


def test_conjoin_is_lazy():
    calls = []

    def later():
        calls.append(1)
        return Verdict.hold("w")

    conjoin([Verdict.refute({"law": "x"}), later], "w")
    assert calls == []


def test_guarded_turns_window_overflow_into_skip():
    def boom(_):
        raise WindowExceeded("too big")

    v = guarded(boom)(None)
    assert v.not_applicable
    assert v.reason == "window"
    assert v.payload["detail"] == "too big"


def test_instance_hash_ignores_key_order():
    assert compute_instance_hash({"a": 1, "b": [1, 2]}) == compute_instance_hash({"b": [1, 2], "a": 1})
    assert len(compute_instance_hash({})) == 16


def test_format_error_message_carries_position():
    e = InstanceFormatError("bad", "$.base", 3, 7)
    assert "$.base" in str(e) and "3" in str(e)
    assert (e.line, e.column) == (3, 7)
