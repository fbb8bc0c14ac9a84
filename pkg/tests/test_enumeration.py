import pytest

from doctrine import validate_doctrine
from enumeration import (automorphisms, canonical_form, enumerate_doctrines, labeled_posets,
                         posets_up_to_iso, semilattice_bases)
from fincat import chain_category
from filter_utils import compile_filter
from logic import is_full_comprehension
from poset import FinPoset
from utils import BudgetExceeded


@pytest.mark.parametrize("n,labeled,unlabeled", [(1, 1, 1), (2, 3, 2), (3, 19, 5)])
def test_poset_counts(n, labeled, unlabeled):
    assert sum(1 for _ in labeled_posets(n)) == labeled
    assert len(posets_up_to_iso(n)) == unlabeled


def test_canonical_form_identifies_isomorphic_orders():
    a = FinPoset.from_pairs(["x", "y", "z"], [("x", "y")])
    b = FinPoset.from_pairs(["x", "y", "z"], [("z", "x")])
    assert canonical_form(a.leq)[0] == canonical_form(b.leq)[0]
    assert len(automorphisms(FinPoset.antichain(["p", "q"]))) == 2
    assert len(automorphisms(FinPoset.chain(["p", "q"]))) == 1


def test_semilattice_bases_up_to_three():
    # con tres elementos solo la cadena tiene top e infimos
    sizes = sorted(len(C.objects()) for C in semilattice_bases(3))
    assert sizes == [1, 2, 3]


def test_single_object_base_counts_fibers():
    base = [chain_category(1)]
    assert len(list(enumerate_doctrines(bases=base, max_fiber_size=2))) == 3
    assert len(list(enumerate_doctrines(bases=base, min_fiber_size=2, max_fiber_size=2))) == 2


def test_enumerated_doctrines_are_valid_and_distinct():
    found = list(enumerate_doctrines(bases=[chain_category(2)], max_fiber_size=2))
    assert found
    assert all(validate_doctrine(D).holds for D in found)
    hashes = [D.instance_hash for D in found]
    assert len(hashes) == len(set(hashes))


def test_limit_and_filter():
    accept = compile_filter("full_comp")
    found = list(enumerate_doctrines(bases=[chain_category(1)], max_fiber_size=2,
                                     accept=accept, limit=1))
    assert len(found) == 1
    assert is_full_comprehension(found[0]).holds


def test_budget_is_enforced():
    gen = enumerate_doctrines(bases=[chain_category(3)], max_fiber_size=3, budget=5, strict=True)
    with pytest.raises(BudgetExceeded):
        list(gen)
    truncated = list(enumerate_doctrines(bases=[chain_category(3)], max_fiber_size=3, budget=5))
    assert len(truncated) <= 5
