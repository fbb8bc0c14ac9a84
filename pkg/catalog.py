"""
Instancias de catalogo: conjuntos con subconjuntos (PS), espacios finitos con
abiertos (SIER, DISC2), fibras triviales (TRIV) y subconjuntos cerrados hacia
abajo sobre un semilattice (SL).
"""
import logging
import re

from constructions import dualize
from config_utils import get_default_config
from doctrine import PreimageDoctrine, TabulatedDoctrine, TrivialDoctrine
from fincat import FinSetWindow, FinTopWindow, chain_category, thin_from_poset
from poset import FinPoset
from utils import FindocError

logger = logging.getLogger(__name__)

SIERPINSKI = {"S": {"points": ["a", "b"], "opens": [[], ["a"], ["a", "b"]]}}
DISCRETE2 = {"D": {"points": ["0", "1"], "opens": [[], ["0"], ["1"], ["0", "1"]]}}


def _window(config):
    config = config or get_default_config()
    return config.get("Window", get_default_config()["Window"])


# ---------------------------
# Constructores
# ---------------------------
def powerset_finset(max_size=2, power_depth=0, config=None, name=None):
    if max_size < 1:
        raise FindocError(f"PS necesita max_size >= 1 (recibido {max_size})")
    w = _window(config)
    base = FinSetWindow(max_size, power_depth, ceiling=w["finset_ceiling"],
                        hom_ceiling=w.get("hom_ceiling", 65536))
    return PreimageDoctrine(base, name=name or f"PS-{max_size}-{power_depth}",
                            fiber_ceiling=w["fiber_ceiling"])


def openset_space(spaces, config=None, name="TOP"):
    w = _window(config)
    base = FinTopWindow(spaces, ceiling=w["top_ceiling"], hom_ceiling=w.get("hom_ceiling", 65536))
    return PreimageDoctrine(base, name=name, fiber_ceiling=w["fiber_ceiling"])


def trivial_fiber(base, name="TRIV"):
    return TrivialDoctrine(base, name=name)


def _downset_masks(L, u, principal=True):
    """
    Bitmasks (sobre los elementos de L) de los cerrados hacia abajo contenidos
    en la flecha de u. principal=True: solo los generados por un elemento.
    """
    below = [i for i in range(L.n) if L.leq[i, u]]
    if principal:
        return sorted(sum(1 << i for i in range(L.n) if L.leq[i, w]) for w in below)
    masks = []
    for bits in range(2 ** len(below)):
        chosen = [below[k] for k in range(len(below)) if (bits >> k) & 1]
        mask = sum(1 << i for i in chosen)
        closed = all(((mask >> j) & 1) for i in chosen for j in range(L.n) if L.leq[j, i])
        if closed:
            masks.append(mask)
    return sorted(masks)


def subsets_over_semilattice(L, name="SL", principal=True):
    """
    Base = L como categoria delgada; fiber(U) = cerrados hacia abajo de la
    flecha de U; reindexado a lo largo de V<=U = interseccion con la flecha de V.
    principal=True: fibras = cerrados principales {W : W <= V}, V <= U;
    principal=False: todos los cerrados hacia abajo, incluido el vacio.
    """
    C = thin_from_poset(L)
    masks = {L.label(u): _downset_masks(L, u, principal) for u in range(L.n)}
    fibers = {a: FinPoset.of_subsets(m, L.labels) for a, m in masks.items()}
    tables = {}
    for f in C.all_arrows():
        if f == C.identity(f.dom):
            continue
        below = sum(1 << i for i in range(L.n) if L.leq[i, L.index(f.dom)])
        index = {m: i for i, m in enumerate(masks[f.dom])}
        tables[f.id] = [index[m & below] for m in masks[f.cod]]
    return TabulatedDoctrine(C, fibers, tables, name=name)


# ---------------------------
# Registro
# ---------------------------
def _ps(n, d):
    return lambda config: powerset_finset(n, d, config)


CATALOG = {
    "TRIV": ("trivial fibers over the one-object base",
             lambda config: trivial_fiber(chain_category(1))),
    "TRIV-PS": ("trivial fibers over the finite-set window of PS-2-0",
                lambda config: trivial_fiber(powerset_finset(2, 0, config).base, name="TRIV-PS")),
    "PS-1-0": ("subsets of finite sets of size <= 1", _ps(1, 0)),
    "PS-2-0": ("subsets of finite sets of size <= 2", _ps(2, 0)),
    "PS-1-1": ("subsets of finite sets of size <= 1, closed under one powerset step", _ps(1, 1)),
    "SIER": ("open sets of the Sierpinski space",
             lambda config: openset_space(SIERPINSKI, config, name="SIER")),
    "DISC2": ("open sets of the discrete two-point space",
              lambda config: openset_space(DISCRETE2, config, name="DISC2")),
    "SL-2chain": ("down-sets over the 2-chain",
                  lambda config: subsets_over_semilattice(FinPoset.chain(["0", "1"]), name="SL-2chain")),
    "SL-3chain": ("down-sets over the 3-chain",
                  lambda config: subsets_over_semilattice(FinPoset.chain(["0", "1", "2"]),
                                                          name="SL-3chain")),
}

_PS_ID = re.compile(r"^PS-(\d+)-(\d+)$")


def catalog_ids():
    return list(CATALOG)


def build(catalog_id, config=None):
    """Instancia por id; acepta ademas PS-<n>-<d> arbitrario."""
    entry = CATALOG.get(catalog_id)
    if entry is not None:
        return entry[1](config)
    m = _PS_ID.match(catalog_id)
    if m:
        return powerset_finset(int(m.group(1)), int(m.group(2)), config)
    raise FindocError(f"Id de catalogo desconocido: {catalog_id!r} (conocidos: {', '.join(CATALOG)})")


def build_from_window(ref, config=None):
    """
    Instancia desde una referencia de generador (bloque meta.window de un
    archivo de instancia).
    """
    generator = ref.get("generator")
    doctrine = ref.get("doctrine", "preimage")
    if generator == "finset":
        D = powerset_finset(ref.get("max_size", 2), ref.get("power_depth", 0), config)
    elif generator == "fintop":
        D = openset_space(ref["spaces"], config)
    else:
        raise FindocError(f"Generador desconocido: {generator!r}")
    if doctrine == "trivial":
        D = trivial_fiber(D.base)
    elif doctrine != "preimage":
        raise FindocError(f"Doctrina generada desconocida: {doctrine!r}")
    if ref.get("dual"):
        D = dualize(D)
    return D

