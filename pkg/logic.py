"""
Busqueda y verificacion de estructura logica sobre una doctrina:
igualdad, comprehension y co-comprehension, negacion, axiomas de implicacion,
objetos potencia debiles, eleccion con epsilon y trípos.

Toda busqueda recorre candidatos en orden canonico y devuelve el primero que
pasa; los testigos quedan en cache por instancia.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from doctrine import (RECHECKS, has_bottoms, has_tops, is_pi_doctrine, is_primary,
                      is_propositional, is_sigma_doctrine, projections, register_recheck)
from fincat import ArrowClass, Square, _isos, factors_through, is_monic, stable_initial_objects
from utils import StructureMissing, Verdict, WindowExceeded, conjoin

logger = logging.getLogger(__name__)


# ---------------------------
# Testigos
# ---------------------------
@dataclass(frozen=True)
class EqualityWitness:
    deltas: dict  # obj -> indice en fiber(obj x obj)

    def describe(self, D):
        C = D.base
        return {a: D.label(C.product(a, a).obj, d) for a, d in sorted(self.deltas.items())}


@dataclass(frozen=True)
class ComprehensionWitness:
    obj: str
    alpha: int
    arrow: object
    monic: bool = True

    @property
    def domain(self):
        return self.arrow.dom


@dataclass(frozen=True)
class CoComprehensionWitness(ComprehensionWitness):
    pass


@dataclass(frozen=True)
class PowerObjectWitness:
    obj: str
    power: str
    member: int
    chi: dict = field(default_factory=dict, compare=False, hash=False)


@dataclass(frozen=True)
class NegationTable:
    tables: dict  # obj -> ndarray

    def __call__(self, obj, i):
        return int(self.tables[obj][i])


@dataclass
class EpsilonTable:
    entries: dict = field(default_factory=dict)  # (gamma, obj, psi, order) -> Arrow

    def describe(self, D):
        out = []
        for (gamma, obj, psi, order), e in sorted(self.entries.items(), key=lambda kv: kv[0]):
            C = D.base
            p = C.product(gamma, obj) if order == "gamma_first" else C.product(obj, gamma)
            out.append({"gamma": gamma, "object": obj, "psi": D.label(p.obj, psi),
                        "order": order, "arrow": e.id})
        return out


# ---------------------------
# Igualdad
# ---------------------------
def _equality_arrows(D, x, a):
    "<pi1,pi2>, <pi2,pi3> e id_X x Delta_A sobre (X x A) x A"
    C = D.base
    xa = C.product(x, a)
    top = C.product(xa.obj, a)
    p12 = top.left
    p23 = C.pair(C.compose(xa.right, top.left), top.right)
    id_delta = C.pair(C.identity(xa.obj), xa.right)
    return p12, p23, id_delta


def _delta_is_valid(D, a, delta):
    for x in D.base.objects():
        p12, p23, id_delta = _equality_arrows(D, x, a)
        L = D.sigma(id_delta)
        if L is None:
            return x
        meet = D.fiber(p12.dom).meet
        if meet is None:
            return x
        formula = meet[D.reindex(p12).table, D.reindex(p23)(delta)]
        if not np.array_equal(formula, L.table):
            return x
    return None


def equality_candidates(D, a):
    "Todos los delta_A que validan la adjuncion en la ventana"
    aa = D.base.product(a, a).obj
    return [d for d in range(D.fiber(aa).n) if _delta_is_valid(D, a, d) is None]


def _equality(D):
    window = D.window()
    if not is_primary(D).holds:
        return Verdict.skip("not primary"), None
    deltas = {}
    for a in D.base.objects():
        aa = D.base.product(a, a).obj
        found = None
        for d in range(D.fiber(aa).n):
            if _delta_is_valid(D, a, d) is None:
                found = d
                break
        if found is None:
            return Verdict.refute({"law": "equality", "object": a,
                                   "candidates": D.fiber(aa).n}, window), None
        deltas[a] = found
    return Verdict.hold(window), EqualityWitness(deltas)


def find_equality(D):
    return D.memo("equality", lambda: _equality(D))[1]


def is_elementary(D):
    return D.memo("equality", lambda: _equality(D))[0]


def check_substitutive(D, witness):
    "pi1* psi ^ delta = pi2* psi ^ delta"
    window = D.window()
    C = D.base
    for a, d in sorted(witness.deltas.items()):
        p = C.product(a, a)
        meet = D.fiber(p.obj).meet
        lhs = meet[D.reindex(p.left).table, d]
        rhs = meet[D.reindex(p.right).table, d]
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            i = int(bad[0])
            return Verdict.refute({"law": "substitutive", "object": a, "psi": D.label(a, i),
                                   "delta": D.label(p.obj, d),
                                   "lhs": D.label(p.obj, lhs[i]), "rhs": D.label(p.obj, rhs[i])}, window)
    return Verdict.hold(window)


def has_diagonal_equality(D):
    """
    Para cada X: delta_X con  top_X <= Delta_X* alpha  sii  delta_X <= alpha.
    Devuelve (Verdict, {X: delta_X}).
    """
    def compute():
        window = D.window()
        C = D.base
        if not has_tops(D).holds:
            return Verdict.skip("no tops"), {}
        deltas = {}
        for x in C.objects():
            xx = C.product(x, x).obj
            P = D.fiber(xx)
            marked = D.reindex(C.diagonal(x)).table == D.top(x)
            d = P.least(marked)
            if d is None or not np.array_equal(P.leq[d, :], marked):
                return Verdict.refute({"law": "diagonal_equality", "object": x}, window), {}
            deltas[x] = d
        return Verdict.hold(window), deltas
    return D.memo("diagonal_equality", compute)


# ---------------------------
# Comprehension y co-comprehension
# ---------------------------
def _marked(D, f, alpha, dual):
    P = D.fiber(f.dom)
    target = P.bottom if dual else P.top
    return target is not None and D.reindex(f)(alpha) == target


def _universal_failure(D, a, alpha, m, dual):
    "Primera f marcada que no factoriza de forma unica por m, o None"
    C = D.base
    for z in C.objects():
        counts = Counter(C.compose(m, k).id for k in C.hom(z, m.dom))
        for f in C.hom(z, a):
            if _marked(D, f, alpha, dual) and counts.get(f.id, 0) != 1:
                return f, counts.get(f.id, 0)
    return None


def is_comprehension_witness(D, a, alpha, m):
    return m.cod == a and _marked(D, m, alpha, False) and _universal_failure(D, a, alpha, m, False) is None


def is_cocomprehension_witness(D, a, alpha, m):
    return m.cod == a and _marked(D, m, alpha, True) and _universal_failure(D, a, alpha, m, True) is None


def _candidate_domains(C, a):
    doms = list(C.subobject_domains(a))
    order = {y: i for i, y in enumerate(doms)}
    return sorted(doms, key=lambda y: (C.size(y), order[y]))


def _search(D, a, alpha, dual):
    C = D.base
    for y in _candidate_domains(C, a):
        for m in C.hom(y, a):
            if _marked(D, m, alpha, dual) and _universal_failure(D, a, alpha, m, dual) is None:
                cls = CoComprehensionWitness if dual else ComprehensionWitness
                return cls(a, int(alpha), m, is_monic(C, m).holds)
    return None


def comprehension(D, a, alpha):
    if D.top(a) is None:
        return None
    return D.memo(("comprehension", a, int(alpha)), lambda: _search(D, a, alpha, False))


def cocomprehension(D, a, alpha):
    if D.bottom(a) is None:
        return None
    return D.memo(("cocomprehension", a, int(alpha)), lambda: _search(D, a, alpha, True))


def _witness(D, a, alpha, dual):
    return cocomprehension(D, a, alpha) if dual else comprehension(D, a, alpha)


def _has(D, dual):
    window = D.window()
    pre = has_bottoms(D) if dual else has_tops(D)
    if not pre.holds:
        return Verdict.skip("no bottoms" if dual else "no tops")
    for a in D.base.objects():
        for alpha in range(D.fiber(a).n):
            if _witness(D, a, alpha, dual) is None:
                return Verdict.refute({"law": "cocomprehension" if dual else "comprehension",
                                       "object": a, "alpha": D.label(a, alpha)}, window)
    return Verdict.hold(window)


def has_comprehension(D):
    return D.memo("has_comprehension", lambda: _has(D, False))


def has_cocomprehension(D):
    return D.memo("has_cocomprehension", lambda: _has(D, True))


def _fullness(D, dual):
    window = D.window()
    v = _has(D, dual)
    if not v.holds:
        return v
    C = D.base
    kind = "cocomprehension" if dual else "comprehension"
    for a in C.objects():
        P = D.fiber(a)
        ws = [_witness(D, a, alpha, dual) for alpha in range(P.n)]
        for x in range(P.n):
            for y in range(P.n):
                # comprehension: [x] <= [y] implica x <= y; co-comprehension: y <= x
                below = P.le(y, x) if dual else P.le(x, y)
                if factors_through(C, ws[x].arrow, ws[y].arrow) and not below:
                    return Verdict.refute({"law": f"full_{kind}", "object": a,
                                           "alpha": P.label(x), "beta": P.label(y),
                                           "through": [ws[x].arrow.id, ws[y].arrow.id]}, window)
                # test de orden
                if dual:
                    w = ws[y].arrow
                    restricted = D.reindex(w)(x) == D.bottom(w.dom)
                else:
                    w = ws[x].arrow
                    restricted = D.reindex(w)(y) == D.top(w.dom)
                if restricted != P.le(x, y):
                    return Verdict.refute({"law": f"{kind}_order", "object": a,
                                           "alpha": P.label(x), "beta": P.label(y),
                                           "arrow": w.id}, window)
    return Verdict.hold(window)


def is_full_comprehension(D):
    return D.memo("full_comprehension", lambda: _fullness(D, False))


def is_full_cocomprehension(D):
    return D.memo("full_cocomprehension", lambda: _fullness(D, True))


def _square(D, h, alpha, dual):
    "Cuadrado {h*alpha} -> {alpha} sobre h: X -> A; q por la propiedad universal"
    C = D.base
    a = h.cod
    w = _witness(D, a, alpha, dual)
    v = _witness(D, h.dom, D.reindex(h)(alpha), dual)
    if w is None or v is None:
        return None
    target = C.compose(h, v.arrow)
    qs = [q for q in C.hom(v.arrow.dom, w.arrow.dom) if C.compose(w.arrow, q) == target]
    if len(qs) != 1:
        return None
    return Square(v.arrow.dom, w.arrow, h, v.arrow, qs[0])


def comprehension_square(D, h, alpha):
    return _square(D, h, alpha, False)


def cocomprehension_square(D, h, alpha):
    return _square(D, h, alpha, True)


def _class(D, dual):
    C = D.base
    members, squares = [], []
    for a in C.objects():
        for alpha in range(D.fiber(a).n):
            w = _witness(D, a, alpha, dual)
            if w is None:
                continue
            members.append(w.arrow)
            for x in C.objects():
                for h in C.hom(x, a):
                    sq = _square(D, h, alpha, dual)
                    if sq is not None:
                        squares.append(sq)
    members = list(dict.fromkeys(members))

    def contains(g):
        for beta in range(D.fiber(g.cod).n):
            w = _witness(D, g.cod, beta, dual)
            if w is None:
                continue
            if w.arrow == g or any(C.compose(w.arrow, u) == g for u in _isos(C, g.dom, w.arrow.dom)):
                return True
        return False

    return ArrowClass("C_P^o" if dual else "C_P", members, squares, contains, closed=True)


def comprehension_class(D):
    return D.memo("class:C_P", lambda: _class(D, False))


def cocomprehension_class(D):
    return D.memo("class:C_P^o", lambda: _class(D, True))


# ---------------------------
# Negacion
# ---------------------------
def negation_check(D):
    """
    Pseudocomplemento fibra a fibra y naturalidad f*(not b) = not f*(b).
    Devuelve (Verdict, NegationTable o None).
    """
    def compute():
        window = D.window()
        if not is_primary(D).holds:
            return Verdict.skip("not primary"), None
        if not has_bottoms(D).holds:
            return Verdict.skip("no bottoms"), None
        C = D.base
        tables = {}
        for a in C.objects():
            pc = D.fiber(a).pseudocomplement
            if pc is None:
                return Verdict.skip(f"no pseudocomplement at {a}", object=a), None
            tables[a] = pc
        for f in C.arrows():
            r = D.reindex(f).table
            lhs = r[tables[f.cod]]
            rhs = tables[f.dom][r]
            bad = np.flatnonzero(lhs != rhs)
            if len(bad):
                i = int(bad[0])
                return Verdict.refute({
                    "law": "negation_natural", "arrow": f.id, "beta": D.label(f.cod, i),
                    "neg_beta": D.label(f.cod, tables[f.cod][i]),
                    "lhs": D.label(f.dom, lhs[i]), "rhs": D.label(f.dom, rhs[i])}, window), None
        return Verdict.hold(window), NegationTable(tables)
    return D.memo("negation", compute)


def negation(D):
    return negation_check(D)[1]


def is_classical(D):
    def compute():
        v, table = negation_check(D)
        if not v.holds:
            return v
        for a, neg in sorted(table.tables.items()):
            bad = np.flatnonzero(neg[neg] != np.arange(len(neg)))
            if len(bad):
                i = int(bad[0])
                return Verdict.refute({"law": "classical", "object": a, "alpha": D.label(a, i),
                                       "negation": D.label(a, neg[i]),
                                       "double_negation": D.label(a, neg[neg[i]])}, D.window())
        return Verdict.hold(D.window())
    return D.memo("classical", compute)


# ---------------------------
# Implicacion
# ---------------------------
def heyting_implication(D):
    "Proveedor obj -> tabla de la implicacion de Heyting de la fibra"
    def provider(obj):
        t = D.fiber(obj).implication
        if t is None:
            raise StructureMissing(f"fiber of {obj} has no Heyting implication")
        return t
    provider.name = "heyting"
    return provider


def implication_axioms(D, impl=None):
    """
    ii) estabilidad bajo reindexado, iii) intercambio con Pi a lo largo de
    proyecciones pi_A: X x A -> A, iv) a-d punto a punto.
    """
    impl = impl or heyting_implication(D)
    name = getattr(impl, "name", "impl")
    window = D.window()
    C = D.base
    tables = {}

    def table(obj):
        if obj not in tables:
            tables[obj] = np.asarray(impl(obj), dtype=np.int64)
        return tables[obj]

    def refute(law, **payload):
        return Verdict.refute(dict(payload, law=law, impl=name), window)

    def stability():
        for f in C.arrows():
            r = D.reindex(f).table
            tc, td = table(f.cod), table(f.dom)
            lhs = r[tc]
            rhs = td[np.ix_(r, r)]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                a, b = (int(x) for x in bad[0])
                return refute("implication_stable", arrow=f.id,
                              alpha=D.label(f.cod, a), beta=D.label(f.cod, b),
                              alpha_to_beta=D.label(f.cod, tc[a, b]),
                              lhs=D.label(f.dom, lhs[a, b]), rhs=D.label(f.dom, rhs[a, b]))
        return Verdict.hold(window)

    def pi_exchange():
        objs = C.objects()
        for x in objs:
            for a in objs:
                pa = C.product(x, a).right
                Pi = D.pi(pa)
                if Pi is None:
                    return Verdict.skip(f"adjoint missing at {pa.id}", arrow=pa.id, quantifier="pi")
                r = D.reindex(pa).table
                txa, ta = table(pa.dom), table(a)
                lhs = Pi.table[txa[r, :]]
                rhs = ta[:, Pi.table]
                bad = np.argwhere(lhs != rhs)
                if len(bad):
                    al, be = (int(v) for v in bad[0])
                    return refute("implication_pi", arrow=pa.id,
                                  alpha=D.label(a, al), beta=D.label(pa.dom, be),
                                  lhs=D.label(a, lhs[al, be]), rhs=D.label(a, rhs[al, be]))
        return Verdict.hold(window)

    def pointwise():
        for a in C.objects():
            P = D.fiber(a)
            T = table(a)
            leq = P.leq
            n = P.n
            idx = np.arange(n)
            # a) phi <= psi -> phi
            bad = np.argwhere(~leq[idx[:, None], T.T])
            if len(bad):
                phi, psi = (int(v) for v in bad[0])
                return refute("implication_iv_a", object=a, phi=P.label(phi), psi=P.label(psi),
                              value=P.label(T[psi, phi]))
            # b) g->(p->q) <= (g->p)->(g->q)
            lhs = T[idx[:, None, None], T[None, :, :]]
            rhs = T[T[:, :, None], T[:, None, :]]
            bad = np.argwhere(~leq[lhs, rhs])
            if len(bad):
                g, p, q = (int(v) for v in bad[0])
                return refute("implication_iv_b", object=a, gamma=P.label(g), phi=P.label(p),
                              psi=P.label(q), lhs=P.label(lhs[g, p, q]), rhs=P.label(rhs[g, p, q]))
            # c) g <= p->q y g <= p  =>  g <= q
            prem = leq[idx[:, None, None], T[None, :, :]] & leq[:, :, None]
            bad = np.argwhere(prem & ~leq[:, None, :])
            if len(bad):
                g, p, q = (int(v) for v in bad[0])
                return refute("implication_iv_c", object=a, gamma=P.label(g), phi=P.label(p),
                              psi=P.label(q), value=P.label(T[p, q]))
            # d) p <= q  =>  g <= p->q
            bad = np.argwhere(leq[None, :, :] & ~leq[idx[:, None, None], T[None, :, :]])
            if len(bad):
                g, p, q = (int(v) for v in bad[0])
                return refute("implication_iv_d", object=a, gamma=P.label(g), phi=P.label(p),
                              psi=P.label(q), value=P.label(T[p, q]))
        return Verdict.hold(window)

    try:
        return conjoin([stability, pi_exchange, pointwise], window)
    except StructureMissing as e:
        return Verdict.skip(str(e))


def is_implicational(D):
    return D.memo("implicational", lambda: implication_axioms(D, heyting_implication(D)))


# ---------------------------
# Objetos potencia debiles
# ---------------------------
def _classifying_tables(D, a, p, y):
    "Filas: (id_A x chi)* para cada chi: Y -> P"
    C = D.base
    ida = C.identity(a)
    chis = C.hom(y, p)
    rows = [D.reindex(C.cross(ida, chi)).table for chi in chis]
    width = D.fiber(C.product(a, p).obj).n
    mat = np.asarray(rows, dtype=np.int64).reshape(len(chis), width)
    return chis, mat


def weak_power_object(D, a):
    def compute():
        C = D.base
        ys = [C.terminal()] + [y for y in C.objects() if y != C.terminal()]
        for p in C.objects():
            members = np.arange(D.fiber(C.product(a, p).obj).n)
            per_y = []
            for y in ys:
                if len(members) == 0:
                    break
                chis, mat = _classifying_tables(D, a, p, y)
                need = D.fiber(C.product(a, y).obj).n
                keep = [m for m in members if len(np.unique(mat[:, m])) == need]
                members = np.asarray(keep, dtype=np.int64)
                per_y.append((y, need, chis, mat))
            if len(members):
                member = int(members[0])
                chi = {}
                for y, need, chis, mat in per_y:
                    for phi in range(need):
                        row = int(np.flatnonzero(mat[:, member] == phi)[0])
                        chi[(y, phi)] = chis[row]
                return PowerObjectWitness(a, p, member, chi)
        return None
    return D.memo(("power", a), compute)


def is_higher_order(D):
    def compute():
        window = D.window()
        C = D.base
        for a in C.base_objects():
            try:
                w = weak_power_object(D, a)
            except WindowExceeded as e:
                return Verdict.skip("window", object=a, detail=str(e))
            if w is None:
                if C.is_explicit:
                    return Verdict.refute({"law": "weak_power_object", "object": a}, window)
                return Verdict.skip("window", object=a)
        return Verdict.hold(window)
    return D.memo("higher_order", compute)


# ---------------------------
# Eleccion (AC) con epsilon
# ---------------------------
def _sections(D, gamma, a, order):
    "Lista de (e, tabla de <id,e>*) para e: gamma -> a"
    def compute():
        C = D.base
        idg = C.identity(gamma)
        out = []
        for e in C.hom(gamma, a):
            s = C.pair(idg, e) if order == "gamma_first" else C.pair(e, idg)
            out.append((e, D.reindex(s).table))
        return out
    return D.memo(("sections", gamma, a, order), compute)


def _quantified_projection(D, gamma, a, order):
    p = D.base.product(gamma, a) if order == "gamma_first" else D.base.product(a, gamma)
    return p, (p.left if order == "gamma_first" else p.right)


def epsilon(D, gamma, a, psi, order="gamma_first"):
    """
    Primer e: gamma -> a (orden canonico) con <id,e>* psi = Sigma_pi psi.
    order="gamma_second": psi sobre a x gamma y seccion <e, id>.
    """
    def compute():
        _, proj = _quantified_projection(D, gamma, a, order)
        S = D.sigma(proj)
        if S is None:
            return None
        target = S(psi)
        for e, table in _sections(D, gamma, a, order):
            if table[psi] == target:
                return e
        return None
    return D.memo(("epsilon", gamma, a, int(psi), order), compute)


def ac_check(D):
    def compute():
        window = D.window()
        C = D.base
        table = EpsilonTable()
        stable = set(stable_initial_objects(C))
        for a in C.objects():
            if a in stable:
                continue
            for gamma in C.objects():
                p, proj = _quantified_projection(D, gamma, a, "gamma_first")
                S = D.sigma(proj)
                if S is None:
                    return Verdict.skip(f"adjoint missing at {proj.id}", arrow=proj.id,
                                        quantifier="sigma"), table
                for psi in range(D.fiber(p.obj).n):
                    e = epsilon(D, gamma, a, psi)
                    if e is None:
                        return Verdict.refute({"law": "choice", "gamma": gamma, "object": a,
                                               "psi": D.label(p.obj, psi),
                                               "sigma": D.label(gamma, S(psi))}, window), table
                    table.entries[(gamma, a, psi, "gamma_first")] = e
        return Verdict.hold(window), table
    return D.memo("ac", compute)


def satisfies_ac(D):
    return ac_check(D)[0]


# ---------------------------
# Tripos
# ---------------------------
def is_tripos(D):
    return D.memo("tripos", lambda: conjoin([
        lambda: is_propositional(D),
        lambda: is_sigma_doctrine(D),
        lambda: is_pi_doctrine(D),
        lambda: has_diagonal_equality(D)[0],
        lambda: is_higher_order(D),
    ], D.window()))


def is_tripos_via_characterization(D, impl=None):
    def compute():
        return conjoin([
            lambda: is_pi_doctrine(D),
            lambda: implication_axioms(D, impl or heyting_implication(D)),
            lambda: is_higher_order(D),
        ], D.window())
    if impl is not None:
        return compute()
    return D.memo("tripos_characterization", compute)


# ---------------------------
# Testigos declarados
# ---------------------------
def _declared_mismatch(kind, key, declared, computed, window):
    return Verdict.refute({"law": "declared", "kind": kind, "key": key,
                           "declared": declared, "computed": computed}, window)


def check_declared(D):
    """Compara las tablas opcionales `declared` de una instancia con lo calculado."""
    window = D.window()
    C = D.base
    declared = getattr(D, "declared", {}) or {}
    for kind in ("sigma", "pi"):
        for aid, table in sorted(declared.get(kind, {}).items()):
            f = C.arrow(aid)
            adj = D.sigma(f) if kind == "sigma" else D.pi(f)
            computed = adj.describe() if adj is not None else None
            if computed != table:
                return _declared_mismatch(kind, aid, table, computed, window)
    if "delta" in declared:
        w = find_equality(D)
        computed = w.describe(D) if w is not None else None
        for a, label in sorted(declared["delta"].items()):
            if computed is None or computed.get(a) != label:
                return _declared_mismatch("delta", a, label, computed and computed.get(a), window)
    if "negation" in declared:
        neg = negation(D)
        for a, table in sorted(declared["negation"].items()):
            computed = None
            if neg is not None:
                computed = {D.label(a, i): D.label(a, j) for i, j in enumerate(neg.tables[a])}
            if computed != table:
                return _declared_mismatch("negation", a, table, computed, window)
    for kind, dual, is_witness in (("comprehension", False, is_comprehension_witness),
                                   ("cocomprehension", True, is_cocomprehension_witness)):
        for a, entries in sorted(declared.get(kind, {}).items()):
            for label, aid in sorted(entries.items()):
                alpha = D.element(a, label)
                m = C.arrow(aid)
                if not is_witness(D, a, alpha, m):
                    w = _witness(D, a, alpha, dual)
                    return _declared_mismatch(kind, f"{a}:{label}", aid, w and w.arrow.id, window)
    for entry in declared.get("epsilon", []):
        gamma, a, order = entry["gamma"], entry["object"], entry.get("order", "gamma_first")
        p, proj = _quantified_projection(D, gamma, a, order)
        psi = D.element(p.obj, entry["psi"])
        e = C.arrow(entry["arrow"])
        idg = C.identity(gamma)
        s = C.pair(idg, e) if order == "gamma_first" else C.pair(e, idg)
        S = D.sigma(proj)
        if S is None or D.reindex(s)(psi) != S(psi):
            return _declared_mismatch("epsilon", f"{gamma}:{a}:{entry['psi']}", entry["arrow"],
                                      None if S is None else D.label(gamma, S(psi)), window)
    for a, entry in sorted(declared.get("power_objects", {}).items()):
        p = entry["power"]
        member = D.element(C.product(a, p).obj, entry["member"])
        for y in C.objects():
            _, mat = _classifying_tables(D, a, p, y)
            need = D.fiber(C.product(a, y).obj).n
            if len(np.unique(mat[:, member])) != need:
                return _declared_mismatch("power_objects", a, entry, {"fails_at": y}, window)
    return Verdict.hold(window)


# ---------------------------
# Re-verificaciones
# ---------------------------
@register_recheck("monic")
def _recheck_monic(D, p):
    C = D.base
    f, g, h = (C.arrow(p[k]) for k in ("arrow", "g", "h"))
    return g != h and C.compose(f, g) == C.compose(f, h)


@register_recheck("negation_natural")
def _recheck_negation(D, p):
    f = D.base.arrow(p["arrow"])
    A, X = D.fiber(f.cod), D.fiber(f.dom)
    b = A.index(p["beta"])

    def pseudo(P, x):
        return P.greatest(np.array([P.greatest(P.leq[:, c] & P.leq[:, x]) == P.bottom
                                    for c in range(P.n)]))

    return D.reindex(f)(pseudo(A, b)) != pseudo(X, D.reindex(f)(b))


@register_recheck("classical")
def _recheck_classical(D, p):
    a = p["object"]
    P = D.fiber(a)
    x = P.index(p["alpha"])

    def pseudo(y):
        return P.greatest(np.array([P.greatest(P.leq[:, c] & P.leq[:, y]) == P.bottom
                                    for c in range(P.n)]))

    return pseudo(pseudo(x)) != x


@register_recheck("choice")
def _recheck_choice(D, p):
    C = D.base
    gamma, a = p["gamma"], p["object"]
    prod = C.product(gamma, a)
    psi = D.element(prod.obj, p["psi"])
    s = D.element(gamma, p["sigma"])
    r = D.reindex(prod.left).table
    G = D.fiber(gamma)
    sols = [b for b in range(G.n) if D.fiber(prod.obj).leq[psi, r[b]]]
    if s not in sols or not all(G.leq[s, b] for b in sols):
        return False
    idg = C.identity(gamma)
    return all(D.reindex(C.pair(idg, e))(psi) != s for e in C.hom(gamma, a))


@register_recheck("implication_stable")
def _recheck_impl_stable(D, p):
    f = D.base.arrow(p["arrow"])
    v = D.element(f.cod, p["alpha_to_beta"])
    return D.label(f.dom, D.reindex(f)(v)) != p["rhs"]


def _recheck_impl_order(D, p):
    a = p["object"]
    P = D.fiber(a)
    law = p["law"]
    if law == "implication_iv_a":
        return not P.le(P.index(p["phi"]), P.index(p["value"]))
    if law == "implication_iv_b":
        return not P.le(P.index(p["lhs"]), P.index(p["rhs"]))
    g, ph, ps, v = (P.index(p[k]) for k in ("gamma", "phi", "psi", "value"))
    if law == "implication_iv_c":
        return P.le(g, v) and P.le(g, ph) and not P.le(g, ps)
    return P.le(ph, ps) and not P.le(g, v)


for _law in ("implication_iv_a", "implication_iv_b", "implication_iv_c", "implication_iv_d"):
    RECHECKS[_law] = _recheck_impl_order


@register_recheck("substitutive")
def _recheck_substitutive(D, p):
    C = D.base
    a = p["object"]
    prod = C.product(a, a)
    Q = D.fiber(prod.obj)
    psi, d = D.element(a, p["psi"]), Q.index(p["delta"])
    sides = []
    for proj in (prod.left, prod.right):
        x = D.reindex(proj)(psi)
        sides.append(Q.greatest(Q.leq[:, x] & Q.leq[:, d]))
    return sides[0] != sides[1]


@register_recheck("equality")
def _recheck_equality(D, p):
    "Ningun delta valida la adjuncion por fuerza bruta"
    C = D.base
    a = p["object"]
    aa = C.product(a, a).obj
    for d in range(D.fiber(aa).n):
        valid = True
        for x in C.objects():
            p12, p23, id_delta = _equality_arrows(D, x, a)
            T = D.fiber(p12.dom)
            S = D.fiber(p12.cod)
            up, q, u = D.reindex(p12).table, D.reindex(p23)(d), D.reindex(id_delta).table
            formula = [T.greatest(T.leq[:, up[s]] & T.leq[:, q]) for s in range(S.n)]
            lhs = np.array([[T.le(formula[s], b) for b in range(T.n)] for s in range(S.n)])
            rhs = S.leq[:, u]
            if not np.array_equal(lhs, rhs):
                valid = False
                break
        if valid:
            return False
    return True
