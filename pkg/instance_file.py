"""
Formato de archivo de instancia (JSON).

Bloques:
    base      objects, arrows {id: {dom, cod}}, identity {obj: id},
              composition [[g, f, g.f], ...], products [[a, b, p, pa, pb], ...],
              terminal
    fibers    {obj: {elements: [...], order: [[x, y], ...]}}   (x <= y)
    reindex   {arrow: {elemento de fiber(cod): elemento de fiber(dom)}}
    declared  testigos opcionales (sigma, pi, delta, comprehension, ...)
    meta      {name, window}

Una instancia con `meta.window` y sin `base` es una referencia a generador
(ventana computable) y se construye con catalog.build_from_window.
Los errores de parseo llevan ruta JSON, linea y columna.
"""
import json
import logging
import os
import re

from catalog import build_from_window
from doctrine import TabulatedDoctrine, materialize
from fincat import ExplicitCategory
from poset import FinPoset
from utils import FindocError, InstanceFormatError

logger = logging.getLogger(__name__)


# ---------------------------
# Posiciones
# ---------------------------
def _format_path(path):
    out = "$"
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def locate(text, path):
    """
    (linea, columna) aproximada de una ruta JSON: se busca cada clave en
    orden a partir de la posicion de la anterior. Los indices de lista
    avanzan sobre los '[' anidados.
    """
    offset = 0
    for p in path:
        if isinstance(p, int):
            start = text.find("[", offset)
            if start < 0:
                break
            pos = start + 1
            for _ in range(p):
                nxt = text.find(",", pos)
                if nxt < 0:
                    break
                pos = nxt + 1
            offset = pos
            continue
        m = re.compile(re.escape(json.dumps(p)) + r"\s*:").search(text, offset)
        if m is None:
            break
        offset = m.start()
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


class _Reader:
    def __init__(self, text):
        self.text = text

    def fail(self, path, message):
        line, column = locate(self.text, path)
        return InstanceFormatError(message, _format_path(path), line, column)

    def mapping(self, value, path):
        if not isinstance(value, dict):
            raise self.fail(path, f"se esperaba un objeto, se encontro {type(value).__name__}")
        return value

    def sequence(self, value, path, length=None):
        if not isinstance(value, list):
            raise self.fail(path, f"se esperaba una lista, se encontro {type(value).__name__}")
        if length is not None and len(value) != length:
            raise self.fail(path, f"se esperaban {length} entradas, hay {len(value)}")
        return value

    def ident(self, value, path, known, what):
        if not isinstance(value, str):
            raise self.fail(path, f"se esperaba un id de {what}")
        if value not in known:
            raise self.fail(path, f"{what} no declarado: {value!r}")
        return value


# ---------------------------
# Bloques
# ---------------------------
def _read_base(r, block):
    path = ["base"]
    block = r.mapping(block, path)
    for key in ("objects", "arrows", "identity", "terminal"):
        if key not in block:
            raise r.fail(path, f"falta la clave {key!r}")
    objects = r.sequence(block["objects"], path + ["objects"])
    for i, obj in enumerate(objects):
        if not isinstance(obj, str):
            raise r.fail(path + ["objects", i], "los ids de objeto son cadenas")
    if len(set(objects)) != len(objects):
        raise r.fail(path + ["objects"], "ids de objeto repetidos")
    objset = set(objects)

    arrows = {}
    for aid, spec in r.mapping(block["arrows"], path + ["arrows"]).items():
        p = path + ["arrows", aid]
        spec = r.mapping(spec, p)
        if "dom" not in spec or "cod" not in spec:
            raise r.fail(p, "cada flecha necesita dom y cod")
        arrows[aid] = (r.ident(spec["dom"], p + ["dom"], objset, "objeto"),
                       r.ident(spec["cod"], p + ["cod"], objset, "objeto"))

    identities = {}
    ident_block = r.mapping(block["identity"], path + ["identity"])
    for obj in objects:
        if obj not in ident_block:
            raise r.fail(path + ["identity"], f"falta la identidad de {obj!r}")
    for obj, aid in ident_block.items():
        p = path + ["identity", obj]
        r.ident(obj, p, objset, "objeto")
        identities[obj] = r.ident(aid, p, arrows, "flecha")
        if arrows[aid] != (obj, obj):
            raise r.fail(p, f"la identidad {aid!r} no es un endo de {obj!r}")

    composition = {}
    for i, triple in enumerate(r.sequence(block.get("composition", []), path + ["composition"])):
        p = path + ["composition", i]
        g, f, h = (r.ident(x, p, arrows, "flecha") for x in r.sequence(triple, p, 3))
        if (g, f) in composition and composition[(g, f)] != h:
            raise r.fail(p, f"tabla no funcional: {g} . {f} = {composition[(g, f)]} y {h}")
        if arrows[f][1] != arrows[g][0]:
            raise r.fail(p, f"{g} . {f} no es componible")
        if (arrows[h][0], arrows[h][1]) != (arrows[f][0], arrows[g][1]):
            raise r.fail(p, f"{g} . {f} = {h} con tipo incorrecto")
        composition[(g, f)] = h

    products = {}
    for i, entry in enumerate(r.sequence(block.get("products", []), path + ["products"])):
        p = path + ["products", i]
        a, b, obj, pa, pb = r.sequence(entry, p, 5)
        for x in (a, b, obj):
            r.ident(x, p, objset, "objeto")
        for x in (pa, pb):
            r.ident(x, p, arrows, "flecha")
        if (a, b) in products and products[(a, b)] != (obj, pa, pb):
            raise r.fail(p, f"producto elegido dos veces para {a} x {b}")
        products[(a, b)] = (obj, pa, pb)

    terminal = r.ident(block["terminal"], path + ["terminal"], objset, "objeto")
    try:
        return ExplicitCategory(objects, arrows, identities, composition, products, terminal)
    except FindocError as e:
        raise r.fail(path, str(e)) from None


def _read_fibers(r, block, objects):
    path = ["fibers"]
    block = r.mapping(block, path)
    fibers = {}
    for obj in objects:
        if obj not in block:
            raise r.fail(path, f"falta la fibra de {obj!r}")
    for obj, spec in block.items():
        p = path + [obj]
        if obj not in objects:
            raise r.fail(p, f"fibra de un objeto no declarado: {obj!r}")
        spec = r.mapping(spec, p)
        elements = r.sequence(spec.get("elements"), p + ["elements"])
        if len(set(elements)) != len(elements) or not all(isinstance(e, str) for e in elements):
            raise r.fail(p + ["elements"], "elementos repetidos o no textuales")
        known = set(elements)
        pairs = []
        for i, pair in enumerate(r.sequence(spec.get("order", []), p + ["order"])):
            q = p + ["order", i]
            x, y = r.sequence(pair, q, 2)
            pairs.append((r.ident(x, q, known, "elemento"), r.ident(y, q, known, "elemento")))
        try:
            fibers[obj] = FinPoset.from_pairs(elements, pairs)
        except FindocError as e:
            raise r.fail(p + ["order"], str(e)) from None
    return fibers


def _read_reindex(r, block, base, fibers):
    path = ["reindex"]
    block = r.mapping(block, path)
    tables = {}
    for aid, mapping in block.items():
        p = path + [aid]
        if aid not in {f.id for f in base.all_arrows()}:
            raise r.fail(p, f"reindexado de una flecha no declarada: {aid!r}")
        f = base.arrow(aid)
        src, tgt = fibers[f.cod], fibers[f.dom]
        mapping = r.mapping(mapping, p)
        missing = [x for x in src.labels if x not in mapping]
        if missing:
            raise r.fail(p, f"tabla incompleta: faltan {missing} de fiber({f.cod})")
        extra = [x for x in mapping if x not in src.labels]
        if extra:
            raise r.fail(p, f"elementos ajenos a fiber({f.cod}): {extra}")
        tables[aid] = [tgt.index(r.ident(mapping[x], p + [x], set(tgt.labels), "elemento"))
                       for x in src.labels]
    for f in base.all_arrows():
        if f.id not in tables and f != base.identity(f.dom):
            raise r.fail(path, f"falta el reindexado de {f.id!r}")
    return tables


# ---------------------------
# API
# ---------------------------
def parse(text, config=None):
    "Doctrina desde el texto de un archivo de instancia"
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(e.msg, "", e.lineno, e.colno) from None
    r = _Reader(text)
    data = r.mapping(data, [])
    meta = r.mapping(data.get("meta", {}), ["meta"])
    name = meta.get("name", "")

    if "base" not in data:
        if "window" not in meta:
            raise r.fail([], "falta el bloque base (o meta.window para una ventana computable)")
        try:
            D = build_from_window(r.mapping(meta["window"], ["meta", "window"]), config)
        except (KeyError, TypeError, FindocError) as e:
            raise r.fail(["meta", "window"], f"referencia de generador invalida: {e}") from None
        D.name = name or D.name
        return D

    base = _read_base(r, data["base"])
    if "fibers" not in data:
        raise r.fail([], "falta el bloque fibers")
    fibers = _read_fibers(r, data["fibers"], set(base.objects()))
    tables = _read_reindex(r, data.get("reindex", {}), base, fibers)
    declared = r.mapping(data.get("declared", {}), ["declared"])
    return TabulatedDoctrine(base, fibers, tables, name=name, declared=declared)


def load_instance(path, config=None):
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    D = parse(text, config)
    if not D.name:
        D.name = os.path.splitext(os.path.basename(path))[0]
    logger.debug(f"{path}: {D!r}")
    return D


def serialize(D, explicit=False):
    """
    Texto canonico: claves ordenadas, elementos de fibra en el orden
    declarado. Con explicit=True (o base explicita sin tablas propias) la
    instancia se materializa como tablas.
    """
    if explicit or (D.base.is_explicit and not isinstance(D, TabulatedDoctrine)):
        D = materialize(D)
    return json.dumps(D.describe(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save_instance(D, path, explicit=False):
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize(D, explicit))
    logger.info(f"Instancia escrita en {path}")
    return path
