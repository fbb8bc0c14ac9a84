"""
Doctrinas finitas: base + una fibra por objeto + un mapa de reindexado por flecha.

reindex(f): fiber(cod f) -> fiber(dom f)   (contravariante)

Predicados de clase: primaria, proposicional, Sigma/Pi-doctrina respecto de una
clase de flechas (Beck-Chevalley completo o restringido), Frobenius, existencial.
Cada predicado devuelve un Verdict; los contraejemplos se re-verifican con
`recheck` usando solo tablas y ordenes.
"""
import copy
import logging
import threading
from functools import cached_property

import numpy as np

from fincat import projection_class, is_pullback_stable
from poset import FinPoset, MonotoneMap, is_heyting_hom, is_msl_hom, left_adjoint, right_adjoint
from utils import (FindocError, MalformedCategory, StructureMissing, Verdict, WindowExceeded,
                   compute_instance_hash, conjoin)

logger = logging.getLogger(__name__)

_MISSING = object()


# ---------------------------
# Doctrina abstracta
# ---------------------------
class Doctrine:
    kind = "abstract"

    def __init__(self, base, name="", fiber_ceiling=4096):
        self.base = base
        self.name = name
        self.fiber_ceiling = fiber_ceiling
        self.declared = {}
        self._fibers = {}
        self._reindex = {}
        self._sigma = {}
        self._pi = {}
        self._memo = {}
        self._lock = threading.RLock()

    # Interfaz de subclases

    def _make_fiber(self, obj):
        raise NotImplementedError

    def _make_reindex(self, f):
        "Tabla de indices fiber(cod f) -> fiber(dom f)"
        raise NotImplementedError

    def describe(self):
        raise NotImplementedError

    # Acceso con cache

    def window(self):
        return self.base.window()

    def fiber(self, obj):
        P = self._fibers.get(obj)
        if P is None:
            P = self._make_fiber(obj)
            if P.n > self.fiber_ceiling:
                raise WindowExceeded(f"Fibra de {obj} con {P.n} elementos (techo {self.fiber_ceiling})")
            self._fibers[obj] = P
        return P

    def reindex(self, f):
        m = self._reindex.get(f.id)
        if m is None:
            src, tgt = self.fiber(f.cod), self.fiber(f.dom)
            table = np.asarray(self._make_reindex(f), dtype=np.int64)
            if table.shape != (src.n,) or (len(table) and (table.min() < 0 or table.max() >= tgt.n)):
                raise MalformedCategory(
                    f"Reindexado de {f.id} con forma incorrecta: se esperaba "
                    f"fiber({f.cod}) [{src.n}] -> fiber({f.dom}) [{tgt.n}]")
            m = MonotoneMap(src, tgt, table, name=f"{f.id}*")
            self._reindex[f.id] = m
        return m

    def sigma(self, f):
        "Adjunto izquierdo de f*, o None"
        s = self._sigma.get(f.id, _MISSING)
        if s is _MISSING:
            s = left_adjoint(self.reindex(f), name=f"Sigma[{f.id}]")
            self._sigma[f.id] = s
        return s

    def pi(self, f):
        "Adjunto derecho de f*, o None"
        p = self._pi.get(f.id, _MISSING)
        if p is _MISSING:
            p = right_adjoint(self.reindex(f), name=f"Pi[{f.id}]")
            self._pi[f.id] = p
        return p

    def memo(self, key, compute):
        """
        Cache por (instancia, id de chequeo); los veredictos ya llevan la ventana.
        El lock cubre solo el diccionario: dos hilos pueden calcular la misma
        clave y se queda el primer valor guardado.
        """
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        value = compute()
        with self._lock:
            return self._memo.setdefault(key, value)

    def element(self, obj, label):
        return self.fiber(obj).index(label)

    def label(self, obj, i):
        return self.fiber(obj).label(int(i))

    def top(self, obj):
        return self.fiber(obj).top

    def bottom(self, obj):
        return self.fiber(obj).bottom

    @cached_property
    def instance_hash(self):
        return compute_instance_hash(self.describe())

    def __repr__(self):
        return f"{type(self).__name__}({self.name or self.window()})"


# ---------------------------
# Presentaciones concretas
# ---------------------------
class TabulatedDoctrine(Doctrine):
    """
    Base explicita con fibras y reindexados dados por tabla.
    reindex: {arrow_id: [indice en fiber(dom) para cada elemento de fiber(cod)]}
    """
    kind = "tabulated"

    def __init__(self, base, fibers, reindex, name="", fiber_ceiling=4096, declared=None):
        super().__init__(base, name, fiber_ceiling)
        if not base.is_explicit:
            raise MalformedCategory("Una doctrina tabulada necesita una base explicita")
        missing = [a for a in base.objects() if a not in fibers]
        if missing:
            raise MalformedCategory(f"Faltan fibras para {missing}")
        self.fibers = dict(fibers)
        self.tables = {aid: list(t) for aid, t in reindex.items()}
        self.declared = dict(declared or {})

    def _make_fiber(self, obj):
        return self.fibers[obj]

    def _make_reindex(self, f):
        table = self.tables.get(f.id)
        if table is None:
            if f == self.base.identity(f.dom):
                return np.arange(self.fiber(f.dom).n)
            raise MalformedCategory(f"Falta el reindexado de {f.id}")
        return table

    def describe(self):
        reindex = {}
        for f in self.base.all_arrows():
            m = self.reindex(f)
            reindex[f.id] = m.describe()
        out = {
            "base": self.base.describe(),
            "fibers": {obj: self.fibers[obj].describe() for obj in sorted(self.fibers)},
            "reindex": reindex,
            "meta": {"name": self.name},
        }
        for obj in out["fibers"]:
            out["fibers"][obj]["order"] = sorted(out["fibers"][obj]["order"])
        if self.declared:
            out["declared"] = copy.deepcopy(self.declared)
        return out


class PreimageDoctrine(Doctrine):
    """
    Sobre una ventana de funciones: fibra = subconjuntos admitidos (todos, o
    los abiertos), reindexado = preimagen.
    """
    kind = "preimage"

    def __init__(self, base, name="", fiber_ceiling=4096):
        super().__init__(base, name, fiber_ceiling)
        self._masks = {}

    def masks(self, obj):
        if obj not in self._masks:
            masks = np.asarray(self.base.admissible(obj), dtype=np.int64)
            if len(masks) > self.fiber_ceiling:
                raise WindowExceeded(f"Fibra de {obj} con {len(masks)} elementos (techo {self.fiber_ceiling})")
            self._masks[obj] = (masks, {int(m): i for i, m in enumerate(masks)})
        return self._masks[obj]

    def mask(self, obj, i):
        return int(self.masks(obj)[0][i])

    def element_of_mask(self, obj, mask):
        return self.masks(obj)[1][int(mask)]

    def _make_fiber(self, obj):
        masks, _ = self.masks(obj)
        return FinPoset.of_subsets(masks, self.base.point_labels(obj))

    def _make_reindex(self, f):
        masks, _ = self.masks(f.cod)
        _, index = self.masks(f.dom)
        pre = self.base.preimage(f, masks)
        try:
            return [index[int(p)] for p in pre]
        except KeyError as e:
            raise MalformedCategory(f"La preimagen por {f.id} no es admisible: {e}") from None

    def describe(self):
        window = dict(self.base.describe())
        window["doctrine"] = self.kind
        return {"meta": {"name": self.name, "window": window}}


class TrivialDoctrine(Doctrine):
    "Todas las fibras son singletons"
    kind = "trivial"

    def _make_fiber(self, obj):
        return FinPoset(["*"], [[True]])

    def _make_reindex(self, f):
        return [0]

    def describe(self):
        window = dict(self.base.describe())
        window["doctrine"] = self.kind
        return {"meta": {"name": self.name, "window": window}}


class DualDoctrine(Doctrine):
    "Fibras con el orden invertido; mismas tablas de reindexado"
    kind = "dual"

    def __init__(self, inner, name=""):
        super().__init__(inner.base, name or f"{inner.name}^o", inner.fiber_ceiling)
        self.inner = inner

    def _make_fiber(self, obj):
        return self.inner.fiber(obj).dual()

    def _make_reindex(self, f):
        return self.inner.reindex(f).table

    def describe(self):
        out = copy.deepcopy(self.inner.describe())
        window = out["meta"]["window"]
        if window.get("dual"):
            del window["dual"]
        else:
            window["dual"] = True
        out["meta"]["name"] = self.name
        return out


def materialize(D):
    "Doctrina tabulada equivalente sobre la version explicita de la ventana"
    base = D.base.materialize()
    fibers = {a: D.fiber(a) for a in base.objects()}
    tables = {f.id: D.reindex(D.base.arrow(f.id)).table.tolist() for f in base.all_arrows()}
    return TabulatedDoctrine(base, fibers, tables, name=D.name, fiber_ceiling=D.fiber_ceiling)


# ---------------------------
# Validacion
# ---------------------------
def validate_doctrine(D):
    """
    Leyes de functor y monotonia sobre las flechas de la ventana. Un
    reindexado entre fibras equivocadas levanta MalformedCategory.
    """
    window = D.window()
    C = D.base
    arrows = C.arrows()
    maps = {f.id: D.reindex(f) for f in arrows}

    def identities():
        for a in C.objects():
            m = maps.get(C.identity(a).id) or D.reindex(C.identity(a))
            bad = np.flatnonzero(m.table != np.arange(m.source.n))
            if len(bad):
                i = int(bad[0])
                return Verdict.refute({"law": "identity_functor", "object": a,
                                       "element": m.source.label(i),
                                       "image": m.target.label(m(i))}, window)
        return Verdict.hold(window)

    def monotone():
        for f in arrows:
            hit = maps[f.id].monotonicity_violation()
            if hit:
                i, j = hit
                src = maps[f.id].source
                return Verdict.refute({"law": "monotone", "arrow": f.id,
                                       "pair": [src.label(i), src.label(j)]}, window)
        return Verdict.hold(window)

    def composition():
        by_dom = {}
        for g in arrows:
            by_dom.setdefault(g.dom, []).append(g)
        for f in arrows:
            for g in by_dom.get(f.cod, []):
                gf = C.compose(g, f)
                lhs = D.reindex(gf).table
                rhs = maps[f.id].table[maps[g.id].table]
                bad = np.flatnonzero(lhs != rhs)
                if len(bad):
                    i = int(bad[0])
                    return Verdict.refute({
                        "law": "composition", "triple": [g.id, f.id, gf.id],
                        "element": D.label(g.cod, i),
                        "lhs": D.label(f.dom, lhs[i]), "rhs": D.label(f.dom, rhs[i])}, window)
        return Verdict.hold(window)

    return conjoin([identities, monotone, composition], window)


# ---------------------------
# Estructura fibra a fibra
# ---------------------------
def _fiberwise(D, law, present):
    for a in D.base.objects():
        if not present(D.fiber(a)):
            return Verdict.skip(f"{law} missing at {a}", object=a)
    return Verdict.hold(D.window())


def has_meets(D):
    return D.memo("has_meets", lambda: _fiberwise(D, "meets", lambda P: P.meet is not None))


def has_tops(D):
    return D.memo("has_tops", lambda: _fiberwise(D, "top", lambda P: P.top is not None))


def has_bottoms(D):
    return D.memo("has_bottoms", lambda: _fiberwise(D, "bottom", lambda P: P.bottom is not None))


def has_joins(D):
    "Joins finitos: binarios y bottom"
    return D.memo("has_joins", lambda: _fiberwise(
        D, "joins", lambda P: P.join is not None and P.bottom is not None))


def nonempty_fibers(D):
    return D.memo("nonempty_fibers", lambda: _fiberwise(D, "element", lambda P: P.n > 0))


def is_primary(D):
    def compute():
        window = D.window()
        v = has_meets(D)
        if not v.holds:
            return Verdict.skip("no meets", **v.payload)
        for f in D.base.arrows():
            res = is_msl_hom(D.reindex(f), with_top=False)
            if res.refuted:
                return Verdict.refute(dict(res.payload, arrow=f.id), window)
        return Verdict.hold(window)
    return D.memo("primary", compute)


def is_propositional(D):
    def compute():
        window = D.window()
        for a in D.base.objects():
            P = D.fiber(a)
            if P.n == 0 or P.implication is None or P.join is None or P.top is None or P.bottom is None:
                return Verdict.skip(f"fiber of {a} is not a Heyting algebra", object=a)
        for f in D.base.arrows():
            try:
                res = is_heyting_hom(D.reindex(f))
            except StructureMissing as e:
                return Verdict.skip(str(e), arrow=f.id)
            if res.refuted:
                return Verdict.refute(dict(res.payload, arrow=f.id), window)
        return Verdict.hold(window)
    return D.memo("propositional", compute)


# ---------------------------
# Cuantificadores y Beck-Chevalley
# ---------------------------
def projections(D):
    return D.memo("class:Prj", lambda: projection_class(D.base))


def _adjoint(D, quantifier, f):
    return D.sigma(f) if quantifier == "sigma" else D.pi(f)


def _quantifier_bc(D, cls, restricted, quantifier):
    window = D.window()
    if not cls.closed:
        stable = is_pullback_stable(D.base, cls)
        if not stable.holds:
            return Verdict.skip(f"class {cls.name} not pullback-stable", **stable.payload)
    for f in cls.members:
        if _adjoint(D, quantifier, f) is None:
            return Verdict.skip(f"adjoint missing at {f.id}", arrow=f.id, quantifier=quantifier)
    for sq in cls.squares:
        adj_f = _adjoint(D, quantifier, sq.f)
        adj_g = _adjoint(D, quantifier, sq.g)
        if adj_f is None or adj_g is None:
            missing = sq.f if adj_f is None else sq.g
            return Verdict.skip(f"adjoint missing at {missing.id}", arrow=missing.id,
                                quantifier=quantifier)
        lhs = D.reindex(sq.h).table[adj_f.table]
        k_star = D.reindex(sq.k).table
        rhs = adj_g.table[k_star]
        gammas = np.unique(D.reindex(sq.f).table) if restricted else np.arange(len(lhs))
        bad = [int(i) for i in gammas if lhs[i] != rhs[i]]
        if bad:
            i = bad[0]
            A, X = sq.f.dom, sq.h.dom
            return Verdict.refute({
                "law": "beck_chevalley", "quantifier": quantifier, "class": cls.name,
                "restricted": bool(restricted), "square": sq.describe(),
                "gamma": D.label(A, i),
                "adjoint_f": D.label(sq.f.cod, adj_f(i)),
                "adjoint_g": D.label(X, adj_g(k_star[i])),
                "lhs": D.label(X, lhs[i]), "rhs": D.label(X, rhs[i])}, window)
    return Verdict.hold(window)


def is_sigma_doctrine(D, cls=None, restricted=False):
    cls = cls or projections(D)
    key = f"sigma:{cls.name}:{'restricted' if restricted else 'full'}"
    return D.memo(key, lambda: _quantifier_bc(D, cls, restricted, "sigma"))


def is_pi_doctrine(D, cls=None, restricted=False):
    cls = cls or projections(D)
    key = f"pi:{cls.name}:{'restricted' if restricted else 'full'}"
    return D.memo(key, lambda: _quantifier_bc(D, cls, restricted, "pi"))


def frobenius(D, cls=None):
    cls = cls or projections(D)

    def compute():
        window = D.window()
        if not is_primary(D).holds:
            return Verdict.skip("not primary")
        for f in cls.members:
            S = D.sigma(f)
            if S is None:
                return Verdict.skip(f"adjoint missing at {f.id}", arrow=f.id, quantifier="sigma")
            meet_a = D.fiber(f.dom).meet
            meet_b = D.fiber(f.cod).meet
            r = D.reindex(f).table
            lhs = S.table[meet_a[:, r]]
            rhs = meet_b[S.table]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                a, b = (int(x) for x in bad[0])
                return Verdict.refute({
                    "law": "frobenius", "class": cls.name, "arrow": f.id,
                    "alpha": D.label(f.dom, a), "beta": D.label(f.cod, b),
                    "sigma_meet": D.label(f.cod, lhs[a, b]),
                    "sigma_alpha": D.label(f.cod, S(a)),
                    "lhs": D.label(f.cod, lhs[a, b]), "rhs": D.label(f.cod, rhs[a, b])}, window)
        return Verdict.hold(window)

    return D.memo(f"frobenius:{cls.name}", compute)


def is_existential(D):
    return D.memo("existential", lambda: conjoin(
        [lambda: is_sigma_doctrine(D), lambda: frobenius(D)], D.window()))


# ---------------------------
# Re-verificacion de contraejemplos
# ---------------------------
RECHECKS = {}


def register_recheck(law):
    def wrap(fn):
        RECHECKS[law] = fn
        return fn
    return wrap


def recheck(D, payload):
    """
    True si el contraejemplo se reproduce usando solo tablas de reindexado y
    ordenes de fibra (sin buscar adjuntos).
    """
    law = payload.get("law")
    fn = RECHECKS.get(law)
    if fn is None:
        raise FindocError(f"No hay re-verificacion para la ley {law!r}")
    return bool(fn(D, payload))


def _is_least_solution(D, f, gamma, value, left=True):
    """
    value = Sigma_f(gamma) sii gamma <= f*(value) y value <= b para todo b con gamma <= f*b
    (dual para Pi).
    """
    r = D.reindex(f).table
    src, tgt = D.fiber(f.cod), D.fiber(f.dom)
    if left:
        sols = [b for b in range(src.n) if tgt.leq[gamma, r[b]]]
        return value in sols and all(src.leq[value, b] for b in sols)
    sols = [b for b in range(src.n) if tgt.leq[r[b], gamma]]
    return value in sols and all(src.leq[b, value] for b in sols)


@register_recheck("composition")
def _recheck_composition(D, p):
    g, f, gf = (D.base.arrow(x) for x in p["triple"])
    x = D.element(g.cod, p["element"])
    return D.reindex(f)(D.reindex(g)(x)) != D.reindex(gf)(x)


@register_recheck("identity_functor")
def _recheck_identity(D, p):
    a = p["object"]
    x = D.element(a, p["element"])
    return D.reindex(D.base.identity(a))(x) != x


@register_recheck("monotone")
def _recheck_monotone(D, p):
    f = D.base.arrow(p["arrow"])
    m = D.reindex(f)
    i, j = (D.element(f.cod, x) for x in p["pair"])
    return m.source.le(i, j) and not m.target.le(m(i), m(j))


@register_recheck("beck_chevalley")
def _recheck_bc(D, p):
    sq = p["square"]
    f, h, g, k = (D.base.arrow(sq[x]) for x in ("f", "h", "g", "k"))
    left = p["quantifier"] == "sigma"
    gamma = D.element(f.dom, p["gamma"])
    adj_f = D.element(f.cod, p["adjoint_f"])
    kg = D.reindex(k)(gamma)
    adj_g = D.element(g.cod, p["adjoint_g"])
    if not (_is_least_solution(D, f, gamma, adj_f, left) and _is_least_solution(D, g, kg, adj_g, left)):
        return False
    return D.reindex(h)(adj_f) != adj_g


@register_recheck("frobenius")
def _recheck_frobenius(D, p):
    f = D.base.arrow(p["arrow"])
    A, B = D.fiber(f.dom), D.fiber(f.cod)
    a, b = D.element(f.dom, p["alpha"]), D.element(f.cod, p["beta"])
    s_meet, s_alpha = D.element(f.cod, p["sigma_meet"]), D.element(f.cod, p["sigma_alpha"])
    meet_fb = A.greatest([A.leq[x, a] and A.leq[x, D.reindex(f)(b)] for x in range(A.n)])
    if meet_fb is None or not _is_least_solution(D, f, meet_fb, s_meet):
        return False
    if not _is_least_solution(D, f, a, s_alpha):
        return False
    rhs = B.greatest([B.leq[x, b] and B.leq[x, s_alpha] for x in range(B.n)])
    return rhs != s_meet


def _recheck_preservation(D, p):
    f = D.base.arrow(p["arrow"])
    m = D.reindex(f)
    S, T = m.source, m.target
    law = p["law"]
    if law in ("preserves_top", "preserves_bottom"):
        ext = S.greatest if law == "preserves_top" else S.least
        text = T.greatest if law == "preserves_top" else T.least
        full_s, full_t = np.ones(S.n, dtype=bool), np.ones(T.n, dtype=bool)
        return m(ext(full_s)) != text(full_t)
    a, b = (S.index(x) for x in p["args"])

    def op(P, x, y):
        if law == "preserves_meet":
            return P.greatest(P.leq[:, x] & P.leq[:, y])
        if law == "preserves_join":
            return P.least(P.leq[x, :] & P.leq[y, :])
        meets = [P.greatest(P.leq[:, c] & P.leq[:, x]) for c in range(P.n)]
        return P.greatest(np.array([P.leq[mc, y] for mc in meets]))

    return m(op(S, a, b)) != op(T, m(a), m(b))


for _law in ("preserves_meet", "preserves_join", "preserves_implication",
             "preserves_top", "preserves_bottom"):
    RECHECKS[_law] = _recheck_preservation
