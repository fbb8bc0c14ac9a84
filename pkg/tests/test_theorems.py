import pytest

from doctrine import recheck
from enumeration import enumerate_doctrines, semilattice_bases
from theorems import THEOREMS, check_all, check_theorem
from utils import UnknownTheorem


def test_bingo_on_powersets(ps20):
    report = check_theorem("bingo", ps20)
    assert report.hypotheses_hold
    assert report.conclusion.holds


def test_zero_on_powersets(ps20):
    report = check_theorem("zero", ps20)
    assert report.conclusion.holds
    assert report.witnesses == {"stable_initial": ["0"]}


def test_frodo_without_heaco_is_not_applicable(sier):
    report = check_theorem("frodo", sier)
    assert not report.hypotheses_hold
    assert report.conclusion.not_applicable
    assert report.conclusion.payload["hypothesis"] == "heaco"
    assert "heaco" in report.hypotheses


def test_unknown_theorem(ps10):
    with pytest.raises(UnknownTheorem):
        check_theorem("nope", ps10)
    with pytest.raises(UnknownTheorem):
        check_all(ps10, ids=["bingo", "nope"])


def test_check_all_keeps_registry_order(triv):
    reports = check_all(triv, workers=4)
    assert [r.theorem for r in reports] == list(THEOREMS)
    assert not any(r.counterexample for r in reports)
    assert all(r.instance == triv.instance_hash for r in reports)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["ps10", "ps20", "sier", "disc2", "sl3"])
def test_no_counterexamples_in_the_catalog(name, request):
    D = request.getfixturevalue(name)
    for report in check_all(D):
        assert not report.counterexample, (report.theorem, report.conclusion.payload)


def test_refuted_conclusions_recheck(ps10):
    for report in check_all(ps10):
        if report.conclusion.refuted:
            assert recheck(ps10, report.conclusion.payload)


def test_report_dict_shape(ps20):
    out = check_theorem("zero", ps20).to_dict()
    assert set(out) == {"theorem", "instance", "hypotheses", "conclusion", "witnesses"}
    assert out["conclusion"] == {"kind": "holds", "window": ps20.window()}
    assert "elapsed" in check_theorem("zero", ps20).to_dict(include_timing=True)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["ps11", "triv_ps"])
@pytest.mark.parametrize("tid", ["checazzo2", "baggins", "frodo", "finite_joins", "caratterino"])
def test_heaco_consequences_hold(name, tid, request):
    report = check_theorem(tid, request.getfixturevalue(name))
    assert report.hypotheses_hold
    assert report.conclusion.holds, report.conclusion


@pytest.mark.parametrize("tid", ["bc_lemma", "nonne0", "nonne1"])
def test_choice_consequences_on_powersets(ps20, tid):
    report = check_theorem(tid, ps20)
    assert report.hypotheses_hold
    assert report.conclusion.holds, report.conclusion


@pytest.mark.slow
def test_biconditionals_over_small_semilattices():
    seen = 0
    for D in enumerate_doctrines(bases=semilattice_bases(3), max_fiber_size=3, budget=3000):
        seen += 1
        for tid in ("bingo_converse", "negation_iii"):
            report = check_theorem(tid, D)
            assert not report.counterexample, (tid, D.describe(), report.conclusion.payload)
    assert seen > 0


@pytest.mark.slow
def test_registry_over_an_enumerated_stream():
    seen = 0
    for D in enumerate_doctrines(bases=semilattice_bases(2), max_fiber_size=3, budget=400):
        seen += 1
        for report in check_all(D):
            assert not report.counterexample, (report.theorem, report.conclusion.payload)
    assert seen > 0
