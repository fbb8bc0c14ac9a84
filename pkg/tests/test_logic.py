import numpy as np
import pytest

from constructions import derived_implication_provider
from doctrine import recheck
from logic import (ac_check, check_declared, check_substitutive, cocomprehension, comprehension,
                   comprehension_square, epsilon, find_equality, has_comprehension,
                   has_diagonal_equality, implication_axioms, is_classical, is_elementary,
                   is_full_cocomprehension, is_full_comprehension, is_higher_order,
                   is_implicational, is_tripos, is_tripos_via_characterization, negation,
                   negation_check, weak_power_object)
from fincat import is_pullback_square


# ---------------------------
# Igualdad
# ---------------------------
def test_powerset_equality_is_the_diagonal(ps20):
    assert is_elementary(ps20).holds
    w = find_equality(ps20)
    assert w.describe(ps20) == {"0": "{}", "1": "{0}", "2": "{0,3}"}
    assert check_substitutive(ps20, w).holds


def test_diagonal_equality(ps20):
    verdict, deltas = has_diagonal_equality(ps20)
    assert verdict.holds
    assert ps20.label("4", deltas["2"]) == "{0,3}"


# ---------------------------
# Comprehension
# ---------------------------
def test_powerset_comprehension_is_the_inclusion(ps20):
    alpha = ps20.element("2", "{1}")
    w = comprehension(ps20, "2", alpha)
    assert w.arrow.id == "1>2:1"
    assert w.monic
    co = cocomprehension(ps20, "2", alpha)
    assert co.arrow.id == "1>2:0"


def test_powerset_comprehension_of_bottom_is_the_empty_set(ps20):
    w = comprehension(ps20, "2", ps20.bottom("2"))
    assert w.arrow.id == "0>2:"


@pytest.mark.parametrize("check", [has_comprehension, is_full_comprehension,
                                   is_full_cocomprehension, is_classical, is_implicational])
def test_powerset_logic(ps20, check):
    assert check(ps20).holds


def test_comprehension_squares_are_pullbacks(ps20):
    C = ps20.base
    alpha = ps20.element("2", "{0}")
    for h in C.hom("2", "2"):
        sq = comprehension_square(ps20, h, alpha)
        assert sq is not None
        assert is_pullback_square(C, sq).holds


def test_sierpinski_comprehension_is_full(sier):
    assert is_full_comprehension(sier).holds
    assert is_full_cocomprehension(sier).holds


def test_sierpinski_has_no_natural_negation(sier):
    verdict, table = negation_check(sier)
    assert verdict.refuted
    assert table is None
    assert verdict.payload["law"] == "negation_natural"
    assert verdict.payload["arrow"] == "1>S:1"
    assert verdict.payload["beta"] == "{a}"
    assert recheck(sier, verdict.payload)
    assert is_classical(sier).refuted


def test_semilattice_comprehension(sl3):
    assert has_comprehension(sl3).holds


# ---------------------------
# Negacion e implicacion
# ---------------------------
def test_powerset_negation_is_complement(ps20):
    neg = negation(ps20)
    for i in range(ps20.fiber("2").n):
        assert ps20.mask("2", neg("2", i)) == 3 ^ ps20.mask("2", i)


def test_derived_implication_passes_the_axioms(ps20):
    v = implication_axioms(ps20, derived_implication_provider(ps20))
    assert v.holds, v


def test_implication_axioms_refute_a_bad_table(ps10):
    def constant_bottom(obj):
        n = ps10.fiber(obj).n
        return np.full((n, n), ps10.bottom(obj))
    constant_bottom.name = "bottom"
    v = implication_axioms(ps10, constant_bottom)
    assert v.refuted
    assert v.payload["impl"] == "bottom"
    assert v.payload["law"].startswith("implication_")


# ---------------------------
# Objetos potencia, eleccion, tripos
# ---------------------------
def test_higher_order_needs_the_powerset_step(ps20, ps11):
    v = is_higher_order(ps20)
    assert v.not_applicable and v.reason == "window"
    assert is_higher_order(ps11).holds
    w = weak_power_object(ps11, "1")
    assert w.power == "2"


def test_powerset_choice(ps20):
    verdict, table = ac_check(ps20)
    assert verdict.holds
    assert table.entries
    # Gamma = 1, A = 2, psi = {(0,1)}: epsilon elige el punto 1
    psi = ps20.element("2", "{1}")
    e = epsilon(ps20, "1", "2", psi)
    assert e.id == "1>2:1"


def test_choice_fails_without_global_sections(sl3):
    verdict, _ = ac_check(sl3)
    assert verdict.refuted
    assert verdict.payload["law"] == "choice"
    assert (verdict.payload["gamma"], verdict.payload["object"]) == ("2", "1")
    assert recheck(sl3, verdict.payload)


def test_tripos_and_its_characterization_agree(ps11):
    assert is_tripos(ps11).holds
    assert is_tripos_via_characterization(ps11).holds


def test_trivial_doctrine_is_a_tripos(triv):
    assert is_tripos(triv).holds
    assert is_tripos_via_characterization(triv).holds


def test_declared_witnesses_are_compared(ps10):
    ps10.declared = {"comprehension": {"1": {"{0}": "1>1:0"}}}
    try:
        assert check_declared(ps10).holds
        ps10.declared = {"comprehension": {"1": {"{}": "1>1:0"}}}
        v = check_declared(ps10)
        assert v.refuted
        assert v.payload["kind"] == "comprehension"
        assert v.payload["computed"] == "0>1:"
    finally:
        ps10.declared = {}
