import threading

import numpy as np
import pytest

from conftest import forall_image_mask, image_mask
from constructions import dualize
from doctrine import (DualDoctrine, TabulatedDoctrine, frobenius, has_tops, is_existential,
                      is_pi_doctrine, is_primary, is_propositional, is_sigma_doctrine, materialize,
                      recheck, validate_doctrine)
from fincat import chain_category
from poset import FinPoset
from utils import MalformedCategory


def two_chain_doctrine(table, top_fiber=None):
    "Base 0 <= 1; fiber(0) = 2-cadena, fiber(1) = top_fiber (por defecto 2-cadena)"
    C = chain_category(2)
    fibers = {"0": FinPoset.chain(["f", "t"]),
              "1": top_fiber or FinPoset.chain(["f", "t"])}
    return TabulatedDoctrine(C, fibers, {"0<=1": table}, name="test")


CATALOG_FIXTURES = ["ps10", "ps20", "ps11", "sier", "disc2", "triv", "triv_ps", "sl3"]


@pytest.mark.parametrize("name", CATALOG_FIXTURES)
def test_catalog_instances_are_valid(name, request):
    assert validate_doctrine(request.getfixturevalue(name)).holds


def test_powerset_structure(ps20):
    for check in (is_primary, is_propositional, is_sigma_doctrine, is_pi_doctrine, frobenius,
                  is_existential):
        v = check(ps20)
        assert v.holds, (check.__name__, v)
        assert v.window == "FinSet<=2"


def test_adjoints_along_projections_match_set_oracles(ps20):
    C = ps20.base
    for a in C.objects():
        for b in C.objects():
            p = C.product(a, b)
            for proj in (p.left, p.right):
                S, Pi = ps20.sigma(proj), ps20.pi(proj)
                cod_size = C.size(proj.cod)
                for i in range(ps20.fiber(p.obj).n):
                    mask = ps20.mask(p.obj, i)
                    assert ps20.mask(proj.cod, S(i)) == image_mask(proj.table, mask)
                    assert ps20.mask(proj.cod, Pi(i)) == forall_image_mask(proj.table, mask, cod_size)


def test_non_monotone_reindexing_is_refuted_and_rechecked():
    D = two_chain_doctrine([1, 0])
    v = validate_doctrine(D)
    assert v.refuted
    assert v.payload["law"] == "monotone"
    assert v.payload["arrow"] == "0<=1"
    assert recheck(D, v.payload)


def test_meet_preservation_failure_is_rechecked():
    D = two_chain_doctrine([0, 1, 1, 1], top_fiber=FinPoset.powerset(["x", "y"]))
    assert validate_doctrine(D).holds
    v = is_primary(D)
    assert v.refuted
    assert v.payload["law"] == "preserves_meet"
    assert v.payload["arrow"] == "0<=1"
    assert recheck(D, v.payload)


def test_missing_reindexing_table():
    D = TabulatedDoctrine(chain_category(2), {"0": FinPoset.chain(["a"]), "1": FinPoset.chain(["b"])}, {})
    with pytest.raises(MalformedCategory):
        validate_doctrine(D)


def test_wrong_shape_reindexing_table():
    D = two_chain_doctrine([0, 1, 1])
    with pytest.raises(MalformedCategory):
        D.reindex(D.base.arrow("0<=1"))


def test_missing_tops_is_not_applicable():
    D = two_chain_doctrine([0, 0], top_fiber=FinPoset.antichain(["l", "r"]))
    assert validate_doctrine(D).holds
    v = has_tops(D)
    assert v.not_applicable
    assert v.payload["object"] == "1"


def test_dual_swaps_adjoints(ps10):
    dual = dualize(ps10)
    assert isinstance(dual, DualDoctrine)
    assert dualize(dual) is ps10
    C = ps10.base
    for a in C.objects():
        for b in C.objects():
            proj = C.product(a, b).left
            assert np.array_equal(dual.sigma(proj).table, ps10.pi(proj).table)
            assert np.array_equal(dual.pi(proj).table, ps10.sigma(proj).table)


def test_trivial_doctrine_dualizes_to_itself(triv):
    assert dualize(triv) is triv


def test_materialize_keeps_fibers_and_tables(ps10):
    M = materialize(ps10)
    assert M.base.is_explicit
    assert sorted(M.base.objects()) == sorted(ps10.base.objects())
    assert validate_doctrine(M).holds
    for f in M.base.all_arrows():
        assert M.reindex(f).same_table(ps10.reindex(ps10.base.arrow(f.id)))


def test_instance_hash_is_stable(ps20, config):
    import catalog
    assert catalog.build("PS-2-0", config).instance_hash == ps20.instance_hash
    assert ps20.instance_hash != dualize(ps20).instance_hash


@pytest.mark.parametrize("name", CATALOG_FIXTURES)
@pytest.mark.parametrize("check", [is_sigma_doctrine, is_pi_doctrine])
def test_full_beck_chevalley_implies_restricted(name, check, request):
    D = request.getfixturevalue(name)
    if check(D).holds:
        assert check(D, restricted=True).holds


def test_restricted_beck_chevalley_can_hold_alone():
    # fiber(1) = {*} -> t en fiber(0): Sigma existe, pero r(Sigma f) = t != f
    D = two_chain_doctrine([1], top_fiber=FinPoset.chain(["*"]))
    assert validate_doctrine(D).holds
    full = is_sigma_doctrine(D)
    assert full.refuted
    assert full.payload["law"] == "beck_chevalley"
    assert full.payload["gamma"] == "f"
    assert is_sigma_doctrine(D, restricted=True).holds


def test_memo_does_not_hold_the_lock_while_computing():
    D = two_chain_doctrine([0, 1])
    barrier = threading.Barrier(2, timeout=5)
    results = []

    def compute():
        barrier.wait()
        return object()

    def worker():
        results.append(D.memo("shared", compute))

    threads = [threading.Thread(target=worker) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(results) == 2
    assert results[0] is results[1]
    assert not barrier.broken
