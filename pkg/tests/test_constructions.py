import pytest

import catalog
from constructions import (cocomp_from_negation, derived_implication_table, derived_sigma,
                           derived_sigma_check, dual_correspondence, dualize, eaco_compat_all,
                           graph, heaco_to_tripos, is_eaco, is_heaco)
from doctrine import TabulatedDoctrine
from fincat import chain_category
from logic import (cocomprehension, is_full_comprehension, is_tripos,
                   is_tripos_via_characterization)
from poset import FinPoset
from theorems import check_theorem


def test_derived_sigma_agrees_with_the_adjoint(ps20):
    assert derived_sigma_check(ps20).holds
    f = ps20.base.arrow("2>1:0,0")
    alpha = ps20.element("2", "{1}")
    assert ps20.label("1", derived_sigma(ps20, f, alpha)) == "{0}"


def test_derived_sigma_needs_equality():
    C = chain_category(2)
    D = TabulatedDoctrine(C, {"0": FinPoset.chain(["f", "t"]), "1": FinPoset.powerset(["x", "y"])},
                          {"0<=1": [0, 1, 1, 1]})
    assert derived_sigma(D, C.arrow("0<=1"), 0) is None
    v = derived_sigma_check(D)
    assert v.not_applicable
    assert v.reason == "not elementary and existential"


def test_derived_implication_is_boolean_on_powersets(ps20):
    table = derived_implication_table(ps20, "2")
    for i in range(4):
        for j in range(4):
            mi, mj = ps20.mask("2", i), ps20.mask("2", j)
            assert ps20.mask("2", table[i, j]) == ((3 & ~mi) | mj)


def test_cocomprehension_from_negation(ps20):
    alpha = ps20.element("2", "{1}")
    w = cocomp_from_negation(ps20, "2", alpha)
    assert w.arrow == cocomprehension(ps20, "2", alpha).arrow
    assert w.arrow.id == "1>2:0"


def test_graph_of_the_swap(ps20):
    swap = ps20.base.arrow("2>2:1,0")
    assert ps20.label("4", graph(ps20, swap)) == "{1,2}"
    ident = ps20.base.identity("2")
    assert ps20.label("4", graph(ps20, ident)) == "{0,3}"


def test_dual_correspondence(ps20):
    assert dual_correspondence(ps20).holds


def test_dualize_tabulated_is_an_involution(sl3):
    dual = dualize(sl3)
    assert isinstance(dual, TabulatedDoctrine)
    assert dual.fiber("2").leq.T.tolist() == sl3.fiber("2").leq.tolist()
    assert dualize(dual).describe() == sl3.describe()


def test_dualize_swaps_declared_witnesses(config):
    D = catalog.build("SL-2chain", config)
    D = TabulatedDoctrine(D.base, D.fibers, D.tables, name="SL-2chain",
                          declared={"sigma": {"0<=1": {}}, "comprehension": {"1": {}},
                                    "delta": {"1": "{0,1}"}})
    dual = dualize(D)
    assert set(dual.declared) == {"pi", "cocomprehension", "dual"}
    assert dual.declared["dual"] == {"delta": {"1": "{0,1}"}}
    assert dualize(dual).declared == D.declared


def test_powerset_is_eaco(ps20):
    assert eaco_compat_all(ps20).holds
    assert is_eaco(ps20).holds


@pytest.mark.slow
@pytest.mark.parametrize("name", ["ps11", "triv_ps"])
def test_heaco_pipeline(name, request):
    D = request.getfixturevalue(name)
    assert is_heaco(D).holds
    dual, verdict = heaco_to_tripos(D)
    assert verdict.holds, verdict
    assert is_tripos(dual).holds
    assert is_tripos_via_characterization(dual).holds
    assert check_theorem("prop1_equiv", dual).conclusion.holds
    assert is_full_comprehension(dual).holds


def test_heaco_to_tripos_names_the_missing_clause(sier):
    _, verdict = heaco_to_tripos(sier)
    assert verdict.not_applicable
    assert verdict.payload["clause"] == "elementary"
    assert verdict.reason == "not elementary"


def test_dual_is_built_once_per_instance(ps20, sl3):
    assert dualize(ps20) is dualize(ps20)
    dual = dualize(sl3)
    assert dualize(sl3) is dual
    assert dualize(dual) is sl3
