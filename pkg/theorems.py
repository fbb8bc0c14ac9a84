"""
Registro de proposiciones como chequeos hipotesis -> conclusion sobre una
instancia. La conclusion solo se evalua si todas las hipotesis valen; si no,
el reporte lleva NotApplicable con la hipotesis que fallo.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from tqdm import tqdm

from constructions import derived_implication_provider, dualize, is_eaco, is_heaco
from doctrine import (_is_least_solution, frobenius, has_bottoms, is_existential, is_pi_doctrine,
                      is_primary, is_sigma_doctrine, nonempty_fibers, register_recheck)
from fincat import is_iso, stable_initial_objects
from logic import (ac_check, comprehension, comprehension_class, cocomprehension_class,
                   has_cocomprehension, has_comprehension, implication_axioms,
                   is_classical, is_full_cocomprehension, is_full_comprehension,
                   is_higher_order, is_implicational, is_tripos, is_tripos_via_characterization,
                   negation_check, satisfies_ac)
from utils import UnknownTheorem, Verdict, conjoin, guarded

logger = logging.getLogger(__name__)


# ---------------------------
# Tipos
# ---------------------------
@dataclass(frozen=True)
class TheoremCheck:
    id: str
    statement: str
    hypotheses: tuple  # ((nombre, D -> Verdict), ...)
    conclusion: object  # D -> Verdict
    witnesses: object = None  # D -> dict


@dataclass
class TheoremReport:
    theorem: str
    instance: str
    hypotheses: dict
    conclusion: Verdict
    witnesses: dict = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def hypotheses_hold(self):
        return all(v.holds for v in self.hypotheses.values())

    @property
    def counterexample(self):
        "Hipotesis satisfechas y conclusion refutada"
        return self.hypotheses_hold and self.conclusion.refuted

    def to_dict(self, include_timing=False):
        out = {
            "theorem": self.theorem,
            "instance": self.instance,
            "hypotheses": {k: v.to_dict() for k, v in self.hypotheses.items()},
            "conclusion": self.conclusion.to_dict(),
        }
        if self.witnesses:
            out["witnesses"] = self.witnesses
        if include_timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out


# ---------------------------
# Chequeos auxiliares
# ---------------------------
def _sigma_along_comprehension(D):
    "Existen los adjuntos izquierdos a lo largo de C_P"
    cls = comprehension_class(D)
    for f in cls.members:
        if D.sigma(f) is None:
            return Verdict.refute({"law": "sigma_missing", "arrow": f.id}, D.window())
    return Verdict.hold(D.window())


def _sigma_of_comprehension_top(D):
    "Sigma_[alpha] top = alpha"
    window = D.window()
    for a in D.base.objects():
        for alpha in range(D.fiber(a).n):
            w = comprehension(D, a, alpha)
            if w is None:
                return Verdict.skip("no comprehension", object=a)
            S = D.sigma(w.arrow)
            if S is None:
                return Verdict.skip(f"adjoint missing at {w.arrow.id}", arrow=w.arrow.id)
            value = S(D.top(w.arrow.dom))
            if value != alpha:
                return Verdict.refute({"law": "sigma_comprehension_top", "arrow": w.arrow.id,
                                       "alpha": D.label(a, alpha), "value": D.label(a, value)}, window)
    return Verdict.hold(window)


def _has_stable_initial(D):
    objs = stable_initial_objects(D.base)
    if not objs:
        return Verdict.skip("no stable initial object")
    return Verdict.hold(D.window())


def _initial_fibers_singleton(D, law="initial_fiber"):
    window = D.window()
    for z in stable_initial_objects(D.base):
        n = D.fiber(z).n
        if n != 1:
            return Verdict.refute({"law": law, "object": z, "size": n}, window)
    return Verdict.hold(window)


def _arrows_into_initial_are_isos(D):
    window = D.window()
    C = D.base
    for z in stable_initial_objects(C):
        for x in C.objects():
            for k in C.hom(x, z):
                if not is_iso(C, k):
                    return Verdict.refute({"law": "zero", "arrow": k.id}, window)
    return Verdict.hold(window)


def _bc_lemma(D):
    "<id,h>* psi <= <id,eps_psi>* psi para todo h"
    window = D.window()
    verdict, table = ac_check(D)
    if not verdict.holds:
        return Verdict.skip("no ac")
    C = D.base
    for (gamma, a, psi, _), e in sorted(table.entries.items(), key=lambda kv: kv[0]):
        idg = C.identity(gamma)
        G = D.fiber(gamma)
        best = D.reindex(C.pair(idg, e))(psi)
        for h in C.hom(gamma, a):
            value = D.reindex(C.pair(idg, h))(psi)
            if not G.le(value, best):
                p = C.product(gamma, a)
                return Verdict.refute({"law": "bc_lemma", "gamma": gamma, "object": a,
                                       "psi": D.label(p.obj, psi), "h": h.id, "epsilon": e.id,
                                       "lhs": G.label(value), "rhs": G.label(best)}, window)
    return Verdict.hold(window)


def _finite_joins(D):
    window = D.window()
    for a in D.base.objects():
        P = D.fiber(a)
        if P.join is None or P.bottom is None:
            return Verdict.refute({"law": "finite_joins", "object": a}, window)
    return Verdict.hold(window)


def iff(left_name, left, right_name, right, D):
    "Bicondicional entre dos veredictos, solo donde ambos son aplicables"
    lv, rv = left(D), right(D)
    for name, v in ((left_name, lv), (right_name, rv)):
        if v.not_applicable:
            return Verdict.skip(f"{name}: {v.reason}")
    if lv.holds != rv.holds:
        return Verdict.refute({"law": "equivalence", "left": left_name, "right": right_name,
                               "left_holds": lv.holds, "right_holds": rv.holds}, D.window())
    return Verdict.hold(D.window())


def _dual_tripos(D):
    dual = dualize(D)
    return conjoin([lambda: is_tripos(dual), lambda: is_full_comprehension(dual)], D.window())


def _restricted(quantifier, dual=False):
    def check(D):
        cls = cocomprehension_class(D) if dual else comprehension_class(D)
        fn = is_sigma_doctrine if quantifier == "sigma" else is_pi_doctrine
        return fn(D, cls, restricted=True)
    return check


def _derived_axioms(D):
    return implication_axioms(D, derived_implication_provider(D))


def _negation(D):
    return negation_check(D)[0]


# ---------------------------
# Registro
# ---------------------------
_NONNE0 = (("ac", satisfies_ac), ("bottoms", has_bottoms), ("initial_fiber", _initial_fibers_singleton))

THEOREMS = {}


def _register(tid, statement, hypotheses, conclusion, witnesses=None):
    THEOREMS[tid] = TheoremCheck(tid, statement, tuple(hypotheses), conclusion, witnesses)


_register("nonloso",
          "primary + full comprehension + Frobenius along C_P => restricted Sigma(C_P)",
          [("primary", is_primary), ("full_comprehension", is_full_comprehension),
           ("sigma_along_C_P", _sigma_along_comprehension),
           ("frobenius_C_P", lambda D: frobenius(D, comprehension_class(D)))],
          lambda D: conjoin([lambda: _restricted("sigma")(D),
                             lambda: _sigma_of_comprehension_top(D)], D.window()))
_register("bingo",
          "Pi-doctrine + full comprehension + restricted Pi(C_P) => implicational",
          [("pi", is_pi_doctrine), ("full_comprehension", is_full_comprehension),
           ("restricted_pi_C_P", _restricted("pi"))],
          _derived_axioms)
_register("bingo_converse",
          "Pi-doctrine with comprehension whose derived implication passes => full comprehension",
          [("pi", is_pi_doctrine), ("comprehension", has_comprehension),
           ("derived_implication", _derived_axioms)],
          is_full_comprehension)
_register("negation_i",
          "comprehension + negation => co-comprehension",
          [("comprehension", has_comprehension), ("negation", _negation)],
          has_cocomprehension)
_register("negation_ii",
          "comprehension + negation + restricted Sigma(C_P) => restricted Sigma(C_P^o)",
          [("comprehension", has_comprehension), ("negation", _negation),
           ("restricted_sigma_C_P", _restricted("sigma"))],
          _restricted("sigma", dual=True))
_register("negation_iii",
          "full comprehension + negation => (full co-comprehension <=> classical)",
          [("full_comprehension", is_full_comprehension), ("negation", _negation)],
          lambda D: iff("full_cocomprehension", is_full_cocomprehension,
                        "classical", is_classical, D))
_register("zero",
          "AC + stable initial 0 + nonempty fibers => arrows into 0 are isos",
          [("ac", satisfies_ac), ("stable_initial", _has_stable_initial),
           ("nonempty_fibers", nonempty_fibers)],
          _arrows_into_initial_are_isos,
          lambda D: {"stable_initial": stable_initial_objects(D.base)})
_register("bc_lemma",
          "AC => <id,h>* psi <= <id,eps>* psi",
          [("ac", satisfies_ac)],
          _bc_lemma,
          lambda D: {"epsilon": ac_check(D)[1].describe(D)})
_register("nonne0",
          "AC + bottoms + singleton P(0) => Sigma-doctrine",
          _NONNE0,
          is_sigma_doctrine)
_register("nonne1",
          "primary + AC + bottoms + singleton P(0) => existential",
          (("primary", is_primary),) + _NONNE0,
          is_existential)
_register("sinistra",
          "higher order + Sigma + full co-comprehension + restricted Sigma(C_P^o) => dual tripos",
          [("higher_order", is_higher_order), ("sigma", is_sigma_doctrine),
           ("full_cocomprehension", is_full_cocomprehension),
           ("restricted_sigma_C_P^o", _restricted("sigma", dual=True))],
          _dual_tripos)
_register("checazzo2",
          "eaco + stable initial 0 => P(0) singleton",
          [("eaco", is_eaco), ("stable_initial", _has_stable_initial)],
          lambda D: _initial_fibers_singleton(D, "checazzo2"))
_register("eaco_existential", "eaco => existential",
          [("eaco", is_eaco)], is_existential)
_register("baggins", "eaco => restricted Sigma(C_P^o)",
          [("eaco", is_eaco)], _restricted("sigma", dual=True))
_register("frodo", "heaco => Pi-doctrine",
          [("heaco", is_heaco)], is_pi_doctrine)
_register("finite_joins", "heaco => fibers with finite joins",
          [("heaco", is_heaco)], _finite_joins)
_register("caratterino", "heaco => (implicational <=> tripos)",
          [("heaco", is_heaco)],
          lambda D: iff("implicational", is_implicational, "tripos", is_tripos, D))
_register("prop1_equiv", "tripos <=> Pi + implicational + higher order",
          [],
          lambda D: iff("tripos", is_tripos,
                        "tripos_via_characterization", is_tripos_via_characterization, D))
_register("impl_frobenius",
          "primary + Sigma + implicational => Frobenius",
          [("primary", is_primary), ("sigma", is_sigma_doctrine),
           ("implicational", is_implicational)],
          frobenius)
_register("tripos_nonloso",
          "tripos + full comprehension => restricted Sigma(C_P)",
          [("tripos", is_tripos), ("full_comprehension", is_full_comprehension)],
          _restricted("sigma"))


# ---------------------------
# Evaluacion
# ---------------------------
def _failure_reason(name, v):
    if v.refuted:
        return f"not {v.payload.get('clause', name)}"
    return f"{name}: {v.reason}"


def check_theorem(theorem_id, D):
    thm = THEOREMS.get(theorem_id)
    if thm is None:
        raise UnknownTheorem(f"Teorema desconocido: {theorem_id!r} (conocidos: {', '.join(THEOREMS)})")
    start = time.perf_counter()
    hypotheses = {}
    conclusion = None
    for name, check in thm.hypotheses:
        v = guarded(check)(D)
        hypotheses[name] = v
        if not v.holds:
            conclusion = Verdict.skip(_failure_reason(name, v), hypothesis=name)
            break
    witnesses = {}
    if conclusion is None:
        conclusion = guarded(thm.conclusion)(D)
        if thm.witnesses is not None and conclusion.holds:
            witnesses = thm.witnesses(D)
    report = TheoremReport(thm.id, D.instance_hash, hypotheses, conclusion, witnesses,
                           time.perf_counter() - start)
    if report.counterexample:
        logger.error(f"{thm.id} refutado en {D.name or D.instance_hash}: {conclusion.payload}")
    else:
        logger.debug(f"{thm.id}: {conclusion}")
    return report


def check_all(D, ids=None, workers=None, progress=False):
    "Reportes en el orden del registro, independientemente del scheduling"
    ids = list(ids or THEOREMS)
    for tid in ids:
        if tid not in THEOREMS:
            raise UnknownTheorem(f"Teorema desconocido: {tid!r}")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = pool.map(lambda tid: check_theorem(tid, D), ids)
        return list(tqdm(results, total=len(ids), desc="theorems", disable=not progress))


# ---------------------------
# Re-verificaciones
# ---------------------------
@register_recheck("zero")
def _recheck_zero(D, p):
    C = D.base
    k = C.arrow(p["arrow"])
    return not any(C.compose(g, k) == C.identity(k.dom) and C.compose(k, g) == C.identity(k.cod)
                   for g in C.hom(k.cod, k.dom))


@register_recheck("bc_lemma")
def _recheck_bc_lemma(D, p):
    C = D.base
    gamma = p["gamma"]
    prod = C.product(gamma, p["object"])
    psi = D.element(prod.obj, p["psi"])
    idg = C.identity(gamma)
    lhs = D.reindex(C.pair(idg, C.arrow(p["h"])))(psi)
    rhs = D.reindex(C.pair(idg, C.arrow(p["epsilon"])))(psi)
    return not D.fiber(gamma).le(lhs, rhs)


@register_recheck("finite_joins")
def _recheck_finite_joins(D, p):
    P = D.fiber(p["object"])
    if P.n == 0 or not any(P.leq[i, :].all() for i in range(P.n)):
        return True
    return any(P.least(P.leq[x, :] & P.leq[y, :]) is None for x in range(P.n) for y in range(P.n))


def _recheck_fiber_size(D, p):
    return D.fiber(p["object"]).n != 1


for _law in ("initial_fiber", "checazzo2"):
    register_recheck(_law)(_recheck_fiber_size)


@register_recheck("sigma_comprehension_top")
def _recheck_sigma_top(D, p):
    m = D.base.arrow(p["arrow"])
    top = D.top(m.dom)
    value = D.element(m.cod, p["value"])
    return _is_least_solution(D, m, top, value) and value != D.element(m.cod, p["alpha"])


_EQUIVALENCE_CHECKS = {
    "full_cocomprehension": is_full_cocomprehension,
    "classical": is_classical,
    "implicational": is_implicational,
    "tripos": is_tripos,
    "tripos_via_characterization": is_tripos_via_characterization,
}


@register_recheck("equivalence")
def _recheck_equivalence(D, p):
    left = _EQUIVALENCE_CHECKS[p["left"]](D)
    right = _EQUIVALENCE_CHECKS[p["right"]](D)
    return left.holds != right.holds and not (left.not_applicable or right.not_applicable)
