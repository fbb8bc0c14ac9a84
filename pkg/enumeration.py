"""
Enumeracion de doctrinas pequenas para busqueda de contraejemplos.

Bases: categorias delgadas de meet-semilattices finitos (por defecto cadenas)
o categorias explicitas pequenas. Fibras: posets hasta isomorfismo.
Reindexados: mapas monotonos a lo largo de los cubrimientos (bases delgadas)
o de todas las flechas no identidad (resto), filtrados por validate_doctrine.
Se poda por forma canonica bajo automorfismos de las fibras.
"""
import logging
from collections import deque
from itertools import permutations, product

import numpy as np
from tqdm import tqdm

from doctrine import TabulatedDoctrine, validate_doctrine
from fincat import chain_category, thin_from_poset
from poset import FinPoset, all_monotone_maps, is_partial_order
from utils import BudgetExceeded

logger = logging.getLogger(__name__)


# ---------------------------
# Posets hasta isomorfismo
# ---------------------------
def labeled_posets(n):
    "Todos los ordenes parciales sobre {0..n-1} (etiquetados)"
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in product((False, True), repeat=len(pairs)):
        leq = np.eye(n, dtype=bool)
        for (i, j), b in zip(pairs, bits):
            leq[i, j] = b
        if is_partial_order(leq):
            yield leq


def _permuted(leq, perm):
    p = np.asarray(perm)
    return leq[np.ix_(p, p)]


def canonical_form(leq):
    "(clave, permutacion) minima sobre todas las permutaciones"
    n = len(leq)
    best = None
    for perm in permutations(range(n)):
        key = _permuted(leq, perm).tobytes()
        if best is None or key < best[0]:
            best = (key, perm)
    return best


def automorphisms(P):
    return [perm for perm in permutations(range(P.n))
            if np.array_equal(_permuted(P.leq, perm), P.leq)]


def posets_up_to_iso(n):
    "Un representante por clase de isomorfismo, en orden de clave canonica"
    reps = {}
    for leq in labeled_posets(n):
        key, perm = canonical_form(leq)
        if key not in reps:
            reps[key] = _permuted(leq, perm)
    return [FinPoset([str(i) for i in range(n)], reps[k]) for k in sorted(reps)]


# ---------------------------
# Bases
# ---------------------------
def semilattice_bases(max_size):
    "Meet-semilattices con top de hasta max_size elementos, como categorias delgadas"
    out = []
    for n in range(1, max_size + 1):
        for P in posets_up_to_iso(n):
            if P.meet is not None and P.top is not None:
                out.append(thin_from_poset(P))
    return out


def _is_thin(C):
    return all(len(C.hom(a, b)) <= 1 for a in C.objects() for b in C.objects())


def _generators(C):
    "Cubrimientos en una base delgada; todas las flechas no identidad en otro caso"
    non_id = [f for f in C.all_arrows() if f != C.identity(f.dom)]
    if not _is_thin(C):
        return non_id, False
    covers = []
    for f in non_id:
        between = any(g.cod == f.cod and C.hom(f.dom, g.dom) and g != f
                      and g.dom != f.dom
                      for g in non_id)
        if not between:
            covers.append(f)
    return covers, True


def _paths(C, covers):
    "Para cada flecha no identidad de una base delgada: camino de cubrimientos dom -> cod"
    out_edges = {}
    for f in covers:
        out_edges.setdefault(f.dom, []).append(f)
    paths = {}
    for f in C.all_arrows():
        if f == C.identity(f.dom):
            continue
        queue = deque([(f.dom, [])])
        seen = {f.dom}
        while queue:
            node, path = queue.popleft()
            if node == f.cod:
                paths[f.id] = path
                break
            for e in out_edges.get(node, []):
                if e.cod not in seen:
                    seen.add(e.cod)
                    queue.append((e.cod, path + [e]))
    return paths


# ---------------------------
# Formas canonicas de doctrinas
# ---------------------------
def _doctrine_key(fiber_key, tables, auts, arrows):
    "Minimo lexicografico de las tablas bajo automorfismos de las fibras"
    objs = sorted(auts)
    best = None
    for choice in product(*(auts[a] for a in objs)):
        sigma = dict(zip(objs, choice))
        inv = {a: np.argsort(np.asarray(s)) for a, s in sigma.items()}
        rows = []
        for f in arrows:
            t = np.asarray(tables[f.id])
            # t: fiber(cod) -> fiber(dom);  conjugado: sigma_dom . t . sigma_cod^-1
            new = np.asarray(sigma[f.dom])[t[inv[f.cod]]]
            rows.append(tuple(int(x) for x in new))
        key = tuple(rows)
        if best is None or key < best:
            best = key
    return fiber_key, best


# ---------------------------
# Enumeracion
# ---------------------------
def _fiber_choices(min_size, max_size):
    out = []
    for n in range(min_size, max_size + 1):
        out.extend(posets_up_to_iso(n))
    return out


def enumerate_doctrines(bases=None, max_fiber_size=3, min_fiber_size=1, max_base_size=3,
                        accept=None, budget=100000, strict=False, limit=None, progress=False):
    """
    Generador de doctrinas tabuladas no isomorfas (con base fija) que pasan
    validate_doctrine y el filtro `accept`.

    - bases: lista de categorias explicitas; por defecto cadenas de 1..max_base_size
    - budget: candidatos examinados como maximo; strict=True levanta BudgetExceeded
    - limit: maximo de doctrinas emitidas
    """
    if bases is None:
        bases = [chain_category(n) for n in range(1, max_base_size + 1)]
    posets = _fiber_choices(min_fiber_size, max_fiber_size)
    auts_of = {i: automorphisms(P) for i, P in enumerate(posets)}
    examined = emitted = 0

    for b_index, C in enumerate(bases):
        objs = C.objects()
        gens, thin = _generators(C)
        paths = _paths(C, gens) if thin else {}
        arrows = [f for f in C.all_arrows() if f != C.identity(f.dom)]
        seen = set()
        assignments = list(product(range(len(posets)), repeat=len(objs)))
        for assign in tqdm(assignments, desc=f"base {b_index}", disable=not progress):
            fibers = {a: posets[i] for a, i in zip(objs, assign)}
            auts = {a: auts_of[i] for a, i in zip(objs, assign)}
            choices = [list(all_monotone_maps(fibers[g.cod], fibers[g.dom])) for g in gens]
            for maps in product(*choices):
                examined += 1
                if examined > budget:
                    if strict:
                        raise BudgetExceeded(f"Presupuesto de {budget} candidatos agotado")
                    logger.warning(f"Presupuesto de {budget} candidatos agotado; busqueda truncada")
                    return
                chosen = {g.id: m.table for g, m in zip(gens, maps)}
                if thin:
                    tables = {}
                    for f in arrows:
                        t = np.arange(fibers[f.cod].n)
                        # reindex(g.f) = reindex(f) . reindex(g): recorrer el camino desde cod
                        for e in reversed(paths[f.id]):
                            t = np.asarray(chosen[e.id])[t]
                        tables[f.id] = t.tolist()
                else:
                    tables = {fid: np.asarray(t).tolist() for fid, t in chosen.items()}
                key = _doctrine_key(assign, tables, auts, arrows)
                if key in seen:
                    continue
                seen.add(key)
                D = TabulatedDoctrine(C, fibers, tables, name=f"enum-{b_index}-{len(seen)}")
                if not validate_doctrine(D).holds:
                    continue
                if accept is not None and not accept(D):
                    continue
                emitted += 1
                yield D
                if limit is not None and emitted >= limit:
                    return
    logger.info(f"{examined} candidatos examinados, {emitted} doctrinas emitidas")
