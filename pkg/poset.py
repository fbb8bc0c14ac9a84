"""
Posets finitos (fibras), operaciones de reticulo, mapas monotonos y calculo de
adjuntos por la formula de la menor/mayor solucion.

Un FinPoset guarda su orden como matriz booleana de solo lectura:
leq[i, j] == True  si y solo si  i <= j.
Los elementos se identifican por indice; las etiquetas son para archivos y
reportes.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Optional

import numpy as np

from utils import FindocError, StructureMissing, Verdict

logger = logging.getLogger(__name__)


class NotAPoset(FindocError):
    pass


# ---------------------------
# Utilidades sobre relaciones
# ---------------------------
def is_partial_order(rel):
    "Reflexiva, antisimetrica y transitiva"
    if len(rel) == 0:
        return True
    if not rel[np.diag_indices_from(rel)].all():
        return False
    if (rel & rel.T).sum() > len(rel):
        return False
    rel2 = np.matmul(rel.astype(np.int64), rel.astype(np.int64)) > 0
    if ((~rel) & rel2).any():
        return False
    return True


def reflexive_transitive_closure(rel):
    rel = np.array(rel, dtype=bool)
    n = len(rel)
    if n == 0:
        return rel
    rel[np.diag_indices_from(rel)] = True
    for k in range(n):
        rel |= rel[:, k, None] & rel[None, k, :]
    return rel


def subset_label(mask, point_labels):
    return "{" + ",".join(p for i, p in enumerate(point_labels) if (mask >> i) & 1) + "}"


# ---------------------------
# FinPoset
# ---------------------------
class FinPoset:
    def __init__(self, labels, leq):
        labels = tuple(str(l) for l in labels)
        n = len(labels)
        leq = np.array(leq, dtype=bool).reshape((n, n))
        leq.flags.writeable = False
        if len(set(labels)) != n:
            raise NotAPoset(f"Etiquetas repetidas en la fibra: {labels}")
        if not is_partial_order(leq):
            raise NotAPoset(f"No es un orden parcial: {labels}")
        self.labels = labels
        self.leq = leq
        self.n = n
        self._index = {l: i for i, l in enumerate(labels)}

    # Constructores

    @classmethod
    def from_pairs(cls, labels, pairs):
        labels = tuple(str(l) for l in labels)
        index = {l: i for i, l in enumerate(labels)}
        rel = np.zeros((len(labels), len(labels)), dtype=bool)
        for a, b in pairs:
            rel[index[a], index[b]] = True
        return cls(labels, reflexive_transitive_closure(rel))

    @classmethod
    def chain(cls, labels):
        n = len(labels)
        return cls(labels, np.triu(np.ones((n, n), dtype=bool)))

    @classmethod
    def antichain(cls, labels):
        return cls(labels, np.eye(len(labels), dtype=bool))

    @classmethod
    def of_subsets(cls, masks, point_labels):
        "Subconjuntos (como bitmasks) ordenados por inclusion"
        m = np.asarray(masks, dtype=np.int64)
        leq = (m[:, None] & ~m[None, :]) == 0
        return cls([subset_label(int(x), point_labels) for x in m], leq)

    @classmethod
    def powerset(cls, point_labels):
        return cls.of_subsets(np.arange(2 ** len(point_labels)), point_labels)

    # Acceso

    def index(self, label):
        return self._index[str(label)]

    def label(self, i):
        return self.labels[i]

    def le(self, i, j):
        return bool(self.leq[i, j])

    def dual(self):
        return FinPoset(self.labels, self.leq.T)

    def describe(self):
        order = [[self.labels[i], self.labels[j]]
                 for i in range(self.n) for j in range(self.n)
                 if i != j and self.leq[i, j]]
        return {"elements": list(self.labels), "order": order}

    def __eq__(self, other):
        return (isinstance(other, FinPoset) and self.labels == other.labels
                and np.array_equal(self.leq, other.leq))

    def __hash__(self):
        return hash((self.labels, self.leq.tobytes()))

    def __repr__(self):
        return f"FinPoset({list(self.labels)})"

    # Indices de conjuntos principales (clave: bytes de la fila/columna)

    @cached_property
    def upset_index(self):
        "fila k de leq = {x : k <= x}"
        return {self.leq[k, :].tobytes(): k for k in range(self.n)}

    @cached_property
    def downset_index(self):
        "columna k de leq = {x : x <= k}"
        return {np.ascontiguousarray(self.leq[:, k]).tobytes(): k for k in range(self.n)}

    def least_of_upset(self, mask):
        "Menor elemento de un conjunto cerrado hacia arriba, o None"
        return self.upset_index.get(np.ascontiguousarray(mask, dtype=bool).tobytes())

    def greatest_of_downset(self, mask):
        "Mayor elemento de un conjunto cerrado hacia abajo, o None"
        return self.downset_index.get(np.ascontiguousarray(mask, dtype=bool).tobytes())

    def least(self, mask):
        idx = np.flatnonzero(mask)
        for k in idx:
            if self.leq[k, idx].all():
                return int(k)
        return None

    def greatest(self, mask):
        idx = np.flatnonzero(mask)
        for k in idx:
            if self.leq[idx, k].all():
                return int(k)
        return None

    # Estructura de reticulo

    @cached_property
    def top(self):
        tops = [k for k in range(self.n) if self.leq[:, k].all()]
        return tops[0] if tops else None

    @cached_property
    def bottom(self):
        bots = [k for k in range(self.n) if self.leq[k, :].all()]
        return bots[0] if bots else None

    @cached_property
    def meet(self):
        "Tabla de infimos binarios, o None si falta alguno"
        n = self.n
        table = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                k = self.greatest_of_downset(self.leq[:, i] & self.leq[:, j])
                if k is None:
                    return None
                table[i, j] = table[j, i] = k
        table.flags.writeable = False
        return table

    @cached_property
    def join(self):
        n = self.n
        table = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                k = self.least_of_upset(self.leq[i, :] & self.leq[j, :])
                if k is None:
                    return None
                table[i, j] = table[j, i] = k
        table.flags.writeable = False
        return table

    @cached_property
    def implication(self):
        "a -> b = mayor c con c ^ a <= b; None si no existe para algun par"
        meet = self.meet
        if meet is None:
            return None
        n = self.n
        table = np.zeros((n, n), dtype=np.int64)
        for a in range(n):
            below_b = self.leq[meet[:, a], :]
            for b in range(n):
                k = self.greatest_of_downset(below_b[:, b])
                if k is None:
                    return None
                table[a, b] = k
        table.flags.writeable = False
        return table

    @cached_property
    def pseudocomplement(self):
        "not b = mayor a con a ^ b = bottom; None si no existe"
        meet = self.meet
        if meet is None or self.bottom is None:
            return None
        table = np.zeros(self.n, dtype=np.int64)
        for b in range(self.n):
            k = self.greatest_of_downset(meet[:, b] == self.bottom)
            if k is None:
                return None
            table[b] = k
        table.flags.writeable = False
        return table


@dataclass(frozen=True)
class LatticeOps:
    meet: Optional[np.ndarray]
    join: Optional[np.ndarray]
    top: Optional[int]
    bottom: Optional[int]
    heyting_implication: Optional[np.ndarray]

    @property
    def is_heyting(self):
        return (self.meet is not None and self.join is not None and self.top is not None
                and self.bottom is not None and self.heyting_implication is not None)


def lattice_ops(P):
    return LatticeOps(P.meet, P.join, P.top, P.bottom, P.implication)


# ---------------------------
# Mapas monotonos
# ---------------------------
class MonotoneMap:
    def __init__(self, source, target, table, name=""):
        table = np.asarray(table, dtype=np.int64).reshape(-1)
        if len(table) != source.n:
            raise StructureMissing(
                f"Mapa {name or '?'}: tabla de {len(table)} entradas para una fibra de {source.n}")
        if len(table) and (table.min() < 0 or table.max() >= target.n):
            raise StructureMissing(f"Mapa {name or '?'}: imagen fuera de la fibra destino")
        table.flags.writeable = False
        self.source = source
        self.target = target
        self.table = table
        self.name = name

    def __call__(self, i):
        return int(self.table[i])

    @classmethod
    def identity(cls, P, name=""):
        return cls(P, P, np.arange(P.n), name)

    def is_monotone(self):
        return self.monotonicity_violation() is None

    def monotonicity_violation(self):
        t = self.table
        bad = self.source.leq & ~self.target.leq[np.ix_(t, t)]
        if bad.any():
            i, j = np.argwhere(bad)[0]
            return int(i), int(j)
        return None

    def then(self, other, name=""):
        "Primero self, despues other"
        return MonotoneMap(self.source, other.target, other.table[self.table], name)

    def same_table(self, other):
        return np.array_equal(self.table, other.table)

    def describe(self):
        return {self.source.label(i): self.target.label(int(j)) for i, j in enumerate(self.table)}

    def __repr__(self):
        return f"MonotoneMap({self.name}: {list(self.table)})"


def compose(g, f, name=""):
    "g . f como mapas de posets (primero f)"
    return f.then(g, name)


# ---------------------------
# Adjuntos
# ---------------------------
def left_adjoint(u, name=""):
    """
    L(a) = menor b con a <= u(b); existe solo si ese menor elemento existe
    para todo a. u: S -> T, L: T -> S.
    """
    S, T = u.source, u.target
    cand = T.leq[:, u.table] if S.n else np.zeros((T.n, 0), dtype=bool)
    table = []
    for a in range(T.n):
        k = S.least_of_upset(cand[a])
        if k is None:
            return None
        table.append(k)
    return MonotoneMap(T, S, table, name or f"Sigma[{u.name}]")


def right_adjoint(u, name=""):
    "R(a) = mayor b con u(b) <= a"
    S, T = u.source, u.target
    cand = T.leq[u.table, :].T if S.n else np.zeros((T.n, 0), dtype=bool)
    table = []
    for a in range(T.n):
        k = S.greatest_of_downset(cand[a])
        if k is None:
            return None
        table.append(k)
    return MonotoneMap(T, S, table, name or f"Pi[{u.name}]")


def is_left_adjoint(L, u):
    "a <= u(b) sii L(a) <= b, para todo a, b"
    lhs = u.target.leq[:, u.table]
    rhs = u.source.leq[L.table, :]
    return np.array_equal(lhs, rhs)


def is_right_adjoint(R, u):
    "u(b) <= a sii b <= R(a)"
    lhs = u.target.leq[u.table, :]
    rhs = u.source.leq[:, R.table]
    return np.array_equal(lhs, rhs)


# ---------------------------
# Homomorfismos
# ---------------------------
def _first_mismatch(lhs, rhs):
    bad = np.argwhere(lhs != rhs)
    return tuple(int(x) for x in bad[0]) if len(bad) else None


def _preservation(m, op_name, src_table, tgt_table):
    "m(op(a,b)) == op(m a, m b) para todo a, b"
    t = m.table
    lhs = t[src_table]
    rhs = tgt_table[np.ix_(t, t)]
    hit = _first_mismatch(lhs, rhs)
    if hit is None:
        return None
    a, b = hit
    return {
        "law": f"preserves_{op_name}",
        "map": m.name,
        "args": [m.source.label(a), m.source.label(b)],
        "lhs": m.target.label(int(lhs[a, b])),
        "rhs": m.target.label(int(rhs[a, b])),
    }


def _preserves_constant(m, name, src, tgt):
    if m.source.n and m(src) != tgt:
        return {"law": f"preserves_{name}", "map": m.name,
                "lhs": m.target.label(m(src)), "rhs": m.target.label(tgt)}
    return None


def is_msl_hom(m, with_top=True):
    S, T = m.source, m.target
    if S.meet is None or T.meet is None:
        raise StructureMissing(f"{m.name}: falta infimo binario en origen o destino")
    problem = _preservation(m, "meet", S.meet, T.meet)
    if problem is None and with_top and S.n:
        if S.top is None or T.top is None:
            raise StructureMissing(f"{m.name}: falta top")
        problem = _preserves_constant(m, "top", S.top, T.top)
    return Verdict.refute(problem) if problem else Verdict.hold("fiber")


def is_heyting_hom(m):
    S, T = m.source, m.target
    if not (lattice_ops(S).is_heyting and lattice_ops(T).is_heyting):
        raise StructureMissing(f"{m.name}: origen o destino no es de Heyting")
    problem = (_preservation(m, "meet", S.meet, T.meet)
               or _preservation(m, "join", S.join, T.join)
               or _preservation(m, "implication", S.implication, T.implication))
    if problem is None and S.n:
        problem = (_preserves_constant(m, "top", S.top, T.top)
                   or _preserves_constant(m, "bottom", S.bottom, T.bottom))
    return Verdict.refute(problem) if problem else Verdict.hold("fiber")


def all_monotone_maps(S, T):
    "Todos los mapas monotonos S -> T, en orden lexicografico de tablas"
    for table in product(range(T.n), repeat=S.n):
        m = MonotoneMap(S, T, table)
        if m.is_monotone():
            yield m
