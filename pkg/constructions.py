"""
Construcciones derivadas: Sigma desde la igualdad, implicacion desde Pi y
comprehension, co-comprehension desde la negacion, grafos, doctrina dual,
compatibilidad eaco y el paso heaco -> tripos.
"""
import copy
import logging

import numpy as np

from doctrine import (DualDoctrine, TabulatedDoctrine, TrivialDoctrine, is_existential,
                      is_sigma_doctrine)
from fincat import is_stable_initial
from logic import (CoComprehensionWitness, comprehension, cocomprehension, cocomprehension_class,
                   epsilon, find_equality, is_elementary, is_full_cocomprehension,
                   is_full_comprehension, is_higher_order, is_tripos, negation, satisfies_ac)
from utils import StructureMissing, Verdict, conjoin

logger = logging.getLogger(__name__)


# ---------------------------
# Sigma_f desde la igualdad
# ---------------------------
def derived_sigma(D, f, alpha):
    """
    Sigma_f alpha = Sigma_{pi_B}[(f x id_B)* delta_B ^ pi_A* alpha], f: A -> B.
    None si falta estructura (elemental + existencial).
    """
    if not (is_elementary(D).holds and is_existential(D).holds):
        return None
    C = D.base
    a, b = f.dom, f.cod
    delta = find_equality(D).deltas.get(b)
    if delta is None:
        return None
    p = C.product(a, b)
    graph_f = D.reindex(C.cross(f, C.identity(b)))(delta)
    meet = D.fiber(p.obj).meet
    inside = meet[graph_f, D.reindex(p.left)(alpha)]
    S = D.sigma(p.right)
    return None if S is None else S(inside)


def derived_sigma_check(D):
    "La formula coincide con el adjunto calculado en toda flecha de la ventana"
    window = D.window()
    if not (is_elementary(D).holds and is_existential(D).holds):
        return Verdict.skip("not elementary and existential")
    for f in D.base.arrows():
        S = D.sigma(f)
        for alpha in range(D.fiber(f.dom).n):
            value = derived_sigma(D, f, alpha)
            if S is None or value != S(alpha):
                return Verdict.refute({
                    "law": "derived_sigma", "arrow": f.id, "alpha": D.label(f.dom, alpha),
                    "derived": None if value is None else D.label(f.cod, value),
                    "adjoint": None if S is None else D.label(f.cod, S(alpha))}, window)
    return Verdict.hold(window)


# ---------------------------
# Implicacion desde Pi y comprehension
# ---------------------------
def derived_implication(D, a, phi, psi):
    "phi -> psi = Pi_[phi] [phi]* psi"
    w = comprehension(D, a, phi)
    if w is None:
        return None
    Pi = D.pi(w.arrow)
    if Pi is None:
        return None
    return Pi(D.reindex(w.arrow)(psi))


def derived_implication_table(D, a):
    def compute():
        n = D.fiber(a).n
        table = np.zeros((n, n), dtype=np.int64)
        for phi in range(n):
            w = comprehension(D, a, phi)
            if w is None:
                raise StructureMissing(f"no comprehension for {D.label(a, phi)} over {a}")
            Pi = D.pi(w.arrow)
            if Pi is None:
                raise StructureMissing(f"adjoint missing at {w.arrow.id}")
            table[phi] = Pi.table[D.reindex(w.arrow).table]
        return table
    return D.memo(("derived_implication", a), compute)


def derived_implication_provider(D):
    def provider(obj):
        return derived_implication_table(D, obj)
    provider.name = "derived"
    return provider


# ---------------------------
# Co-comprehension desde la negacion
# ---------------------------
def cocomp_from_negation(D, a, alpha):
    "[alpha]^o := [not alpha]"
    neg = negation(D)
    if neg is None:
        return None
    w = comprehension(D, a, neg(a, alpha))
    if w is None:
        return None
    return CoComprehensionWitness(a, int(alpha), w.arrow, w.monic)


# ---------------------------
# Grafo
# ---------------------------
def graph(D, f):
    "G(f) = (f x id_A)* delta_A en fiber(X x A), f: X -> A"
    eq = find_equality(D)
    if eq is None or f.cod not in eq.deltas:
        return None
    C = D.base
    return D.reindex(C.cross(f, C.identity(f.cod)))(eq.deltas[f.cod])


# ---------------------------
# Dual
# ---------------------------
_SWAPPED = {"sigma": "pi", "pi": "sigma",
            "comprehension": "cocomprehension", "cocomprehension": "comprehension"}


def _dual_declared(declared):
    out, kept = {}, {}
    for key, value in declared.items():
        if key == "dual":
            out.update(copy.deepcopy(value))
        elif key in _SWAPPED:
            out[_SWAPPED[key]] = copy.deepcopy(value)
        else:
            kept[key] = copy.deepcopy(value)
    if kept:
        out["dual"] = kept
    return out


def _make_dual(D):
    if isinstance(D, TabulatedDoctrine):
        fibers = {a: P.dual() for a, P in D.fibers.items()}
        dual = TabulatedDoctrine(D.base, fibers, D.tables, name=D.name,
                                 fiber_ceiling=D.fiber_ceiling,
                                 declared=_dual_declared(D.declared))
        # involucion: el dual del dual es la misma instancia
        dual.memo("dual", lambda: D)
        return dual
    return DualDoctrine(D)


def dualize(D):
    "Doctrina dual, una sola por instancia"
    if isinstance(D, DualDoctrine):
        return D.inner
    if isinstance(D, TrivialDoctrine):
        return D
    return D.memo("dual", lambda: _make_dual(D))


def dual_correspondence(D):
    "Comprehension de P^o = co-comprehension de P, y la plenitud coincide"
    window = D.window()
    dual = dualize(D)
    for a in D.base.objects():
        for alpha in range(D.fiber(a).n):
            w, v = cocomprehension(D, a, alpha), comprehension(dual, a, alpha)
            if (w is None) != (v is None) or (w is not None and w.arrow != v.arrow):
                return Verdict.refute({"law": "dual_correspondence", "object": a,
                                       "alpha": D.label(a, alpha),
                                       "cocomprehension": w and w.arrow.id,
                                       "dual_comprehension": v and v.arrow.id}, window)
    full_p = is_full_cocomprehension(D).holds
    full_d = is_full_comprehension(dual).holds
    if full_p != full_d:
        return Verdict.refute({"law": "dual_fullness", "full_cocomprehension": full_p,
                               "dual_full_comprehension": full_d}, window)
    return Verdict.hold(window)


# ---------------------------
# eaco / heaco
# ---------------------------
def _eaco_side(D, a, alpha):
    """
    <eps_G, id_A>* G([alpha]^o) en fiber(A). Si el dominio de la
    co-comprehension es inicial estable se usa Sigma_pi G.
    Devuelve (valor, motivo) con valor None si falta estructura.
    """
    def compute():
        C = D.base
        w = cocomprehension(D, a, alpha)
        if w is None:
            return None, "no cocomprehension"
        c = w.arrow
        g = graph(D, c)
        if g is None:
            return None, "no equality"
        if is_stable_initial(C, c.dom).holds:
            S = D.sigma(C.product(c.dom, a).right)
            return (None, "adjoint missing") if S is None else (S(g), "")
        e = epsilon(D, a, c.dom, g, order="gamma_second")
        if e is None:
            return None, "no epsilon"
        section = C.pair(e, C.identity(a))
        return D.reindex(section)(g), ""
    return D.memo(("eaco_side", a, int(alpha)), compute)


def eaco_compat(D, f, alpha):
    "f* <eps, id_A>* G([alpha]^o) = <eps', id_X>* G([f* alpha]^o)"
    window = D.window()
    lhs, why = _eaco_side(D, f.cod, alpha)
    if lhs is None:
        return Verdict.skip(why, object=f.cod)
    beta = D.reindex(f)(alpha)
    rhs, why = _eaco_side(D, f.dom, beta)
    if rhs is None:
        return Verdict.skip(why, object=f.dom)
    lhs = D.reindex(f)(lhs)
    if lhs != rhs:
        return Verdict.refute({"law": "eaco_compat", "arrow": f.id, "alpha": D.label(f.cod, alpha),
                               "lhs": D.label(f.dom, lhs), "rhs": D.label(f.dom, rhs)}, window)
    return Verdict.hold(window)


def eaco_compat_all(D):
    def compute():
        checks = (lambda f=f, alpha=alpha: eaco_compat(D, f, alpha)
                  for f in D.base.arrows() for alpha in range(D.fiber(f.cod).n))
        return conjoin(checks, D.window())
    return D.memo("eaco_compat", compute)


def _heaco_clauses(D, higher_order):
    clauses = [
        ("elementary", lambda: is_elementary(D)),
        ("full_cocomprehension", lambda: is_full_cocomprehension(D)),
        ("ac", lambda: satisfies_ac(D)),
        ("eaco_compat", lambda: eaco_compat_all(D)),
    ]
    if higher_order:
        clauses.append(("higher_order", lambda: is_higher_order(D)))
    return clauses


def _checklist(D, higher_order):
    window = D.window()
    skipped = None
    for name, check in _heaco_clauses(D, higher_order):
        v = check()
        if v.refuted:
            return Verdict.refute(dict(v.payload, clause=name), window)
        if v.not_applicable and skipped is None:
            skipped = Verdict.skip(f"{name}: {v.reason}", clause=name)
    return skipped or Verdict.hold(window)


def is_eaco(D):
    return D.memo("eaco", lambda: _checklist(D, False))


def is_heaco(D):
    return D.memo("heaco", lambda: _checklist(D, True))


def heaco_to_tripos(D):
    """
    (dual, veredicto): si D es heaco, P^o debe ser tripos con comprehension
    plena; se re-verifica ademas Sigma(C_P^o) restringido sobre D.
    """
    dual = dualize(D)
    for name, check in _heaco_clauses(D, True):
        v = check()
        if not v.holds:
            return dual, Verdict.skip(f"not {name}" if v.refuted else f"{name}: {v.reason}",
                                      clause=name)
    verdict = conjoin([
        lambda: is_sigma_doctrine(D, cocomprehension_class(D), restricted=True),
        lambda: is_tripos(dual),
        lambda: is_full_comprehension(dual),
    ], D.window())
    return dual, verdict
