"""
Categorias base finitas con productos elegidos.

Dos presentaciones:
- ExplicitCategory: tablas completas (objetos, flechas, composicion, productos).
- Ventanas computables (FinSetWindow, FinTopWindow): objetos con portador
  finito {0..n-1} y flechas dadas por tablas; productos, pullbacks y dominios
  de subobjetos se materializan bajo demanda y por debajo de un techo.

Las propiedades universales se verifican solo sobre los objetos de la ventana
(`objects()`); los veredictos llevan el descriptor `window()`.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as cartesian
from typing import Callable, Optional

import numpy as np

from poset import FinPoset
from utils import MalformedCategory, NotAProduct, Verdict, WindowExceeded, conjoin

logger = logging.getLogger(__name__)


# ---------------------------
# Tipos
# ---------------------------
@dataclass(frozen=True)
class Arrow:
    id: str
    dom: str
    cod: str
    table: Optional[tuple] = field(default=None, compare=False, hash=False, repr=False)

    def __str__(self):
        return self.id


@dataclass(frozen=True)
class Product:
    obj: str
    left: Arrow
    right: Arrow


@dataclass(frozen=True)
class Square:
    """
    Cuadrado conmutativo f.k = h.g

        apex --k--> A
         |g         |f
         v          v
         X  --h-->  B

    `f` es la flecha de la clase; `h` el cambio de base.
    """
    apex: str
    f: Arrow
    h: Arrow
    g: Arrow
    k: Arrow

    def describe(self):
        return {"apex": self.apex, "f": self.f.id, "h": self.h.id,
                "g": self.g.id, "k": self.k.id}


@dataclass
class ArrowClass:
    name: str
    members: list
    squares: list
    contains: Callable[[Arrow], bool] = None
    closed: bool = False

    def __contains__(self, f):
        if self.contains is not None:
            return self.contains(f)
        return f in self.members


# ---------------------------
# Categoria abstracta
# ---------------------------
class FinCategory:
    is_explicit = False

    def objects(self):
        "Objetos de la ventana (rango de cuantificacion), en orden canonico"
        raise NotImplementedError

    def base_objects(self):
        return self.objects()

    def hom(self, a, b):
        raise NotImplementedError

    def identity(self, a):
        raise NotImplementedError

    def compose(self, g, f):
        "g . f"
        raise NotImplementedError

    def product(self, a, b):
        raise NotImplementedError

    def terminal(self):
        raise NotImplementedError

    def size(self, a):
        raise NotImplementedError

    def window(self):
        raise NotImplementedError

    def arrow(self, arrow_id):
        raise NotImplementedError

    def describe(self):
        raise NotImplementedError

    def subobject_domains(self, a):
        return self.objects()

    # Derivados

    def arrows(self):
        objs = self.objects()
        return [f for a in objs for b in objs for f in self.hom(a, b)]

    def pair(self, f, g):
        "Busqueda de la unica flecha mediadora hacia el producto elegido"
        if f.dom != g.dom:
            raise MalformedCategory(f"pair: dominios distintos {f.dom} y {g.dom}")
        p = self.product(f.cod, g.cod)
        found = [h for h in self.hom(f.dom, p.obj)
                 if self.compose(p.left, h) == f and self.compose(p.right, h) == g]
        if len(found) != 1:
            raise NotAProduct(
                f"{p.obj} no es producto de {f.cod} y {g.cod}: "
                f"{len(found)} mediadoras para <{f.id},{g.id}>")
        return found[0]

    def cross(self, f, g):
        "f x g"
        p = self.product(f.dom, g.dom)
        return self.pair(self.compose(f, p.left), self.compose(g, p.right))

    def diagonal(self, a):
        ida = self.identity(a)
        return self.pair(ida, ida)

    def terminal_arrow(self, a):
        homs = self.hom(a, self.terminal())
        if len(homs) != 1:
            raise NotAProduct(f"{self.terminal()} no es terminal: {len(homs)} flechas desde {a}")
        return homs[0]

    def pullback(self, f, h):
        "Busqueda del cuadrado limite entre los objetos de la ventana"
        if f.cod != h.cod:
            raise MalformedCategory(f"pullback: codominios distintos {f.cod} y {h.cod}")
        for apex in self.objects():
            for g in self.hom(apex, h.dom):
                hg = self.compose(h, g)
                for k in self.hom(apex, f.dom):
                    if self.compose(f, k) != hg:
                        continue
                    sq = Square(apex, f, h, g, k)
                    if is_pullback_square(self, sq).holds:
                        return sq
        return None

    def materialize(self):
        "Version explicita de la ventana; exige cierre bajo los productos elegidos"
        objs = list(self.objects())
        objset = set(objs)
        products = {}
        for a in objs:
            for b in objs:
                p = self.product(a, b)
                if p.obj not in objset:
                    raise WindowExceeded(f"La ventana no es cerrada bajo productos: {a} x {b} = {p.obj}")
                products[(a, b)] = (p.obj, p.left.id, p.right.id)
        arrows = self.arrows()
        composition = {}
        by_dom = {}
        for g in arrows:
            by_dom.setdefault(g.dom, []).append(g)
        for f in arrows:
            for g in by_dom.get(f.cod, []):
                composition[(g.id, f.id)] = self.compose(g, f).id
        return ExplicitCategory(
            objects=objs,
            arrows={f.id: (f.dom, f.cod) for f in arrows},
            identities={a: self.identity(a).id for a in objs},
            composition=composition,
            products=products,
            terminal=self.terminal(),
        )


# ---------------------------
# Presentacion explicita
# ---------------------------
class ExplicitCategory(FinCategory):
    is_explicit = True

    def __init__(self, objects, arrows, identities, composition, products, terminal):
        """
        objects: lista de ids
        arrows: {id: (dom, cod)}
        identities: {obj: id}
        composition: {(g, f): g.f}
        products: {(a, b): (obj, proj_a, proj_b)}
        """
        self._objects = list(objects)
        objset = set(self._objects)
        self._arrows = {}
        for aid, (dom, cod) in arrows.items():
            if dom not in objset or cod not in objset:
                raise MalformedCategory(f"Flecha {aid}: {dom} -> {cod} referencia un objeto no declarado")
            self._arrows[aid] = Arrow(aid, dom, cod)
        for obj in self._objects:
            iid = identities.get(obj)
            if iid not in self._arrows:
                raise MalformedCategory(f"Falta la identidad de {obj}")
            if self._arrows[iid].dom != obj or self._arrows[iid].cod != obj:
                raise MalformedCategory(f"La identidad {iid} no es un endo de {obj}")
        self._identities = dict(identities)
        self._composition = {}
        for (gid, fid), hid in composition.items():
            for x in (gid, fid, hid):
                if x not in self._arrows:
                    raise MalformedCategory(f"Composicion ({gid}, {fid}) -> {hid}: flecha {x} no declarada")
            g, f, h = self._arrows[gid], self._arrows[fid], self._arrows[hid]
            if f.cod != g.dom:
                raise MalformedCategory(f"Composicion ({gid}, {fid}) no componible")
            if h.dom != f.dom or h.cod != g.cod:
                raise MalformedCategory(f"Composicion ({gid}, {fid}) -> {hid} con tipo incorrecto")
            self._composition[(gid, fid)] = hid
        if terminal not in objset:
            raise MalformedCategory(f"Terminal {terminal} no declarado")
        self._terminal = terminal
        self._products = {}
        for (a, b), (p, pa, pb) in products.items():
            if p not in objset or pa not in self._arrows or pb not in self._arrows:
                raise MalformedCategory(f"Producto {a} x {b} referencia ids no declarados")
            left, right = self._arrows[pa], self._arrows[pb]
            if (left.dom, left.cod, right.dom, right.cod) != (p, a, p, b):
                raise MalformedCategory(f"Proyecciones de {a} x {b} con tipo incorrecto")
            self._products[(a, b)] = Product(p, left, right)
        self._hom = {}
        for aid in sorted(self._arrows):
            f = self._arrows[aid]
            self._hom.setdefault((f.dom, f.cod), []).append(f)

    def objects(self):
        return list(self._objects)

    def hom(self, a, b):
        return list(self._hom.get((a, b), []))

    def all_arrows(self):
        return [self._arrows[k] for k in sorted(self._arrows)]

    def arrows(self):
        return self.all_arrows()

    def arrow(self, arrow_id):
        try:
            return self._arrows[arrow_id]
        except KeyError:
            raise MalformedCategory(f"Flecha desconocida: {arrow_id}") from None

    def identity(self, a):
        return self._arrows[self._identities[a]]

    def compose(self, g, f):
        if f.cod != g.dom:
            raise MalformedCategory(f"No componibles: {g.id} . {f.id}")
        if f.id == self._identities[f.cod]:
            return g
        if g.id == self._identities[g.cod]:
            return f
        hid = self._composition.get((g.id, f.id))
        if hid is None:
            raise MalformedCategory(f"incomplete table: falta {g.id} . {f.id}")
        return self._arrows[hid]

    def product(self, a, b):
        try:
            return self._products[(a, b)]
        except KeyError:
            raise NotAProduct(f"Sin producto elegido para {a} x {b}") from None

    def terminal(self):
        return self._terminal

    @cached_property
    def _global_elements(self):
        return {a: len(self.hom(self._terminal, a)) for a in self._objects}

    def size(self, a):
        "Numero de elementos globales 1 -> a"
        return self._global_elements[a]

    def window(self):
        return "explicit"

    def describe(self):
        return {
            "objects": sorted(self._objects),
            "arrows": {aid: {"dom": f.dom, "cod": f.cod} for aid, f in sorted(self._arrows.items())},
            "identity": dict(sorted(self._identities.items())),
            "composition": sorted([g, f, h] for (g, f), h in self._composition.items()),
            "products": sorted([a, b, p.obj, p.left.id, p.right.id]
                               for (a, b), p in self._products.items()),
            "terminal": self._terminal,
        }


def thin_category(labels, leq, meet, top):
    """
    Categoria delgada de un meet-semilattice finito con top:
    una flecha "u<=v" por cada par comparable, productos = infimos.
    """
    labels = [str(l) for l in labels]
    n = len(labels)
    arrows, identities, composition = {}, {}, {}
    name = lambda i, j: f"{labels[i]}<={labels[j]}"
    for i in range(n):
        for j in range(n):
            if leq[i][j]:
                arrows[name(i, j)] = (labels[i], labels[j])
        identities[labels[i]] = name(i, i)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if leq[i][j] and leq[j][k]:
                    composition[(name(j, k), name(i, j))] = name(i, k)
    products = {}
    for i in range(n):
        for j in range(n):
            m = int(meet[i][j])
            products[(labels[i], labels[j])] = (labels[m], name(m, i), name(m, j))
    return ExplicitCategory(labels, arrows, identities, composition, products, labels[top])


def thin_from_poset(P):
    if P.meet is None or P.top is None:
        raise MalformedCategory(f"{P} no es un meet-semilattice con top")
    return thin_category(P.labels, P.leq, P.meet, P.top)


def chain_category(n):
    "Cadena 0 < 1 < ... < n-1 como categoria delgada"
    return thin_from_poset(FinPoset.chain([str(i) for i in range(n)]))


# ---------------------------
# Ventanas de funciones entre portadores finitos
# ---------------------------
def _table_id(dom, cod, table):
    return f"{dom}>{cod}:" + ",".join(str(int(x)) for x in table)


class FunctionWindow(FinCategory):
    """
    Objetos con portador {0..n-1}; una flecha es una tabla de valores.
    Producto de a (n puntos) y b (m puntos): punto (i, j) codificado i*m + j.
    """
    generator = "functions"

    def __init__(self, ceiling=8, hom_ceiling=65536):
        self.ceiling = ceiling
        self.hom_ceiling = hom_ceiling
        self._hom = {}
        self._products = {}

    # Interfaz de subclases

    def size(self, a):
        raise NotImplementedError

    def point_labels(self, a):
        return [str(i) for i in range(self.size(a))]

    def admissible(self, a):
        "Subconjuntos admitidos (bitmasks) en orden canonico"
        raise NotImplementedError

    def is_morphism(self, dom, cod, table):
        return True

    def product_object(self, a, b):
        raise NotImplementedError

    def subobject(self, a, mask):
        "(objeto, inclusion) para el subconjunto `mask` de a"
        raise NotImplementedError

    # Flechas

    def _check_size(self, a):
        n = self.size(a)
        if n > self.ceiling:
            raise WindowExceeded(f"{a} tiene {n} puntos (techo {self.ceiling})")
        return n

    def make_arrow(self, dom, cod, table):
        table = tuple(int(x) for x in table)
        return Arrow(_table_id(dom, cod, table), dom, cod, table)

    def arrow(self, arrow_id):
        try:
            head, body = arrow_id.rsplit(":", 1)
            dom, cod = head.split(">", 1)
            table = tuple(int(x) for x in body.split(",")) if body else ()
        except ValueError:
            raise MalformedCategory(f"Flecha mal formada: {arrow_id}") from None
        if len(table) != self.size(dom) or any(t >= self.size(cod) for t in table):
            raise MalformedCategory(f"Tabla incompatible con {dom} -> {cod}: {arrow_id}")
        if not self.is_morphism(dom, cod, table):
            raise MalformedCategory(f"No es un morfismo de la ventana: {arrow_id}")
        return self.make_arrow(dom, cod, table)

    def hom(self, a, b):
        key = (a, b)
        if key not in self._hom:
            n, m = self._check_size(a), self._check_size(b)
            if m ** n > self.hom_ceiling:
                raise WindowExceeded(f"hom({a}, {b}) tiene {m ** n} tablas (techo {self.hom_ceiling})")
            self._hom[key] = [self.make_arrow(a, b, t) for t in cartesian(range(m), repeat=n)
                              if self.is_morphism(a, b, t)]
        return list(self._hom[key])

    def identity(self, a):
        return self.make_arrow(a, a, range(self.size(a)))

    def compose(self, g, f):
        if f.cod != g.dom:
            raise MalformedCategory(f"No componibles: {g.id} . {f.id}")
        return self.make_arrow(f.dom, g.cod, (g.table[x] for x in f.table))

    def product(self, a, b):
        key = (a, b)
        if key not in self._products:
            n, m = self.size(a), self.size(b)
            obj = self.product_object(a, b)
            self._check_size(obj)
            left = self.make_arrow(obj, a, (i // m for i in range(n * m)))
            right = self.make_arrow(obj, b, (i % m for i in range(n * m)))
            self._products[key] = Product(obj, left, right)
        return self._products[key]

    def pair(self, f, g):
        if f.dom != g.dom:
            raise MalformedCategory(f"pair: dominios distintos {f.dom} y {g.dom}")
        p = self.product(f.cod, g.cod)
        m = self.size(g.cod)
        return self.make_arrow(f.dom, p.obj, (x * m + y for x, y in zip(f.table, g.table)))

    def pullback(self, f, h):
        "Subobjeto {(x, a) : h(x) = f(a)} de X x A"
        if f.cod != h.cod:
            raise MalformedCategory(f"pullback: codominios distintos {f.cod} y {h.cod}")
        p = self.product(h.dom, f.dom)
        m = self.size(f.dom)
        mask = 0
        for x, hx in enumerate(h.table):
            for a, fa in enumerate(f.table):
                if hx == fa:
                    mask |= 1 << (x * m + a)
        apex, incl = self.subobject(p.obj, mask)
        return Square(apex, f, h, self.compose(p.left, incl), self.compose(p.right, incl))

    def preimage(self, f, masks):
        "Preimagen de cada bitmask (sobre cod f) por f, vectorizado"
        masks = np.asarray(masks, dtype=np.int64)
        t = np.asarray(f.table, dtype=np.int64)
        if len(t) == 0:
            return np.zeros(len(masks), dtype=np.int64)
        bits = (masks[:, None] >> t[None, :]) & 1
        return (bits << np.arange(len(t), dtype=np.int64)[None, :]).sum(axis=1)


# ---------------------------
# Conjuntos finitos
# ---------------------------
class FinSetWindow(FunctionWindow):
    """
    Conjuntos {0..n-1} con todas las funciones. El objeto de n elementos se
    llama str(n). Nucleo: tamanos 0..max_size y, con power_depth >= 1, los
    tamanos 2^n (iterado power_depth veces).
    """
    generator = "finset"

    def __init__(self, max_size=2, power_depth=0, ceiling=8, hom_ceiling=65536):
        super().__init__(ceiling, hom_ceiling)
        if max_size < 1:
            raise MalformedCategory("max_size debe ser >= 1")
        self.max_size = max_size
        self.power_depth = power_depth
        sizes = set(range(max_size + 1))
        for _ in range(power_depth):
            sizes |= {2 ** n for n in sizes}
        big = [n for n in sizes if n > ceiling]
        if big:
            raise WindowExceeded(f"Nucleo con conjuntos de {max(big)} elementos (techo {ceiling})")
        self._core = [str(n) for n in sorted(sizes)]

    def objects(self):
        return list(self._core)

    def base_objects(self):
        return [str(n) for n in range(self.max_size + 1)]

    def size(self, a):
        try:
            return int(a)
        except ValueError:
            raise MalformedCategory(f"Objeto desconocido en FinSet: {a}") from None

    def terminal(self):
        return "1"

    def admissible(self, a):
        return list(range(2 ** self._check_size(a)))

    def product_object(self, a, b):
        return str(self.size(a) * self.size(b))

    def subobject(self, a, mask):
        points = [i for i in range(self.size(a)) if (mask >> i) & 1]
        obj = str(len(points))
        return obj, self.make_arrow(obj, a, points)

    def subobject_domains(self, a):
        return [str(n) for n in range(self.size(a) + 1)]

    def window(self):
        tag = f"FinSet<={self.max_size}"
        return tag + (f",P^{self.power_depth}" if self.power_depth else "")

    def describe(self):
        return {"generator": self.generator, "max_size": self.max_size,
                "power_depth": self.power_depth}


# ---------------------------
# Espacios topologicos finitos
# ---------------------------
@dataclass(frozen=True)
class Space:
    points: tuple
    opens: tuple

    @property
    def n(self):
        return len(self.points)


def check_topology(points, opens):
    full = (1 << len(points)) - 1
    opens = set(opens)
    if 0 not in opens or full not in opens:
        return "falta el vacio o el total"
    for u in opens:
        for v in opens:
            if (u | v) not in opens or (u & v) not in opens:
                return "no es cerrada bajo union e interseccion"
    return None


def _generated_topology(n, base):
    "Cierre bajo uniones de una base cerrada bajo intersecciones"
    opens = {0, (1 << n) - 1}
    opens.update(base)
    changed = True
    while changed:
        changed = False
        current = list(opens)
        for u in current:
            for v in current:
                for w in (u | v, u & v):
                    if w not in opens:
                        opens.add(w)
                        changed = True
    return tuple(sorted(opens))


class FinTopWindow(FunctionWindow):
    """
    Espacios finitos y funciones continuas. Nucleo: "0", "1" y los espacios
    dados por tabla. Productos "(AxB)" con la topologia de rectangulos;
    subespacios "A|mask" con la topologia inducida.
    """
    generator = "fintop"

    def __init__(self, spaces, ceiling=8, hom_ceiling=65536):
        super().__init__(ceiling, hom_ceiling)
        self.tables = {}
        self._spaces = {"0": Space((), (0,)), "1": Space(("*",), (0, 1))}
        core = ["0", "1"]
        for name in sorted(spaces):
            points = tuple(str(p) for p in spaces[name]["points"])
            index = {p: i for i, p in enumerate(points)}
            try:
                opens = {sum(1 << index[str(p)] for p in u) for u in spaces[name]["opens"]}
            except KeyError as e:
                raise MalformedCategory(f"Espacio {name}: punto desconocido {e}") from None
            problem = check_topology(points, opens)
            if problem:
                raise MalformedCategory(f"invalid topology {name}: {problem}")
            if len(points) > ceiling:
                raise WindowExceeded(f"Espacio {name} con {len(points)} puntos (techo {ceiling})")
            self._spaces[name] = Space(points, tuple(sorted(opens)))
            self.tables[name] = {"points": list(points),
                                 "opens": [sorted(p for p in u) for u in spaces[name]["opens"]]}
            core.append(name)
        self._core = core

    def objects(self):
        return list(self._core)

    def space(self, a):
        if a not in self._spaces:
            self._materialize(a)
        return self._spaces[a]

    def _materialize(self, a):
        "Reconstruye productos \"(AxB)\" y subespacios \"A|mask\" a partir del nombre"
        if a.startswith("(") and a.endswith(")"):
            depth = 0
            for i, ch in enumerate(a[1:-1], start=1):
                depth += {"(": 1, ")": -1}.get(ch, 0)
                if ch != "x" or depth != 0:
                    continue
                try:
                    self.space(a[1:i])
                    self.space(a[i + 1:-1])
                except MalformedCategory:
                    continue
                self.product_object(a[1:i], a[i + 1:-1])
                return
        head, sep, mask = a.rpartition("|")
        if sep and mask.isdigit():
            self.subobject(head, int(mask))
            return
        raise MalformedCategory(f"Espacio desconocido: {a}")

    def subobject_domains(self, a):
        "Nucleo mas los subespacios de a cortados por abiertos y por cerrados"
        out = list(self._core)
        full = (1 << self.size(a)) - 1
        for u in self.space(a).opens:
            for mask in (u, full & ~u):
                name, _ = self.subobject(a, mask)
                if name not in out:
                    out.append(name)
        return out

    def size(self, a):
        return self.space(a).n

    def point_labels(self, a):
        return list(self.space(a).points)

    def terminal(self):
        return "1"

    def admissible(self, a):
        return list(self.space(a).opens)

    def is_morphism(self, dom, cod, table):
        "Continuidad: preimagen de abierto es abierta"
        src, tgt = self.space(dom), self.space(cod)
        src_opens = set(src.opens)
        for u in tgt.opens:
            pre = 0
            for i, t in enumerate(table):
                if (u >> t) & 1:
                    pre |= 1 << i
            if pre not in src_opens:
                return False
        return True

    def product_object(self, a, b):
        name = f"({a}x{b})"
        if name not in self._spaces:
            A, B = self.space(a), self.space(b)
            n, m = A.n, B.n
            if n * m > self.ceiling:
                raise WindowExceeded(f"{name} tendria {n * m} puntos (techo {self.ceiling})")
            base = set()
            for u in A.opens:
                for v in B.opens:
                    rect = 0
                    for i in range(n):
                        if (u >> i) & 1:
                            for j in range(m):
                                if (v >> j) & 1:
                                    rect |= 1 << (i * m + j)
                    base.add(rect)
            points = tuple(f"({p},{q})" for p in A.points for q in B.points)
            self._spaces[name] = Space(points, _generated_topology(n * m, base))
        return name

    def subobject(self, a, mask):
        A = self.space(a)
        full = (1 << A.n) - 1
        if mask == full:
            return a, self.identity(a)
        name = f"{a}|{mask}"
        idx = [i for i in range(A.n) if (mask >> i) & 1]
        if name not in self._spaces:
            induced = set()
            for u in A.opens:
                induced.add(sum(1 << k for k, i in enumerate(idx) if (u >> i) & 1))
            self._spaces[name] = Space(tuple(A.points[i] for i in idx), tuple(sorted(induced)))
        return name, self.make_arrow(name, a, idx)

    def window(self):
        return "FinTop[" + ",".join(self._core[2:]) + "]"

    def describe(self):
        return {"generator": self.generator, "spaces": {k: self.tables[k] for k in sorted(self.tables)}}


# ---------------------------
# Operaciones del modulo
# ---------------------------
def validate_category(C):
    """
    Leyes de identidad y asociatividad, producto elegido y terminal.
    Una tabla de composicion incompleta levanta MalformedCategory.
    """
    window = C.window()
    arrows = C.arrows()
    by_dom = {}
    for f in arrows:
        by_dom.setdefault(f.dom, []).append(f)

    def identity_laws():
        for f in arrows:
            if C.compose(f, C.identity(f.dom)) != f or C.compose(C.identity(f.cod), f) != f:
                return Verdict.refute({"law": "identity", "arrow": f.id}, window)
        return Verdict.hold(window)

    def associativity():
        for f in arrows:
            for g in by_dom.get(f.cod, []):
                gf = C.compose(g, f)
                for h in by_dom.get(g.cod, []):
                    if C.compose(h, gf) != C.compose(C.compose(h, g), f):
                        return Verdict.refute(
                            {"law": "associativity", "triple": [h.id, g.id, f.id]}, window)
        return Verdict.hold(window)

    def terminal():
        t = C.terminal()
        for x in C.objects():
            n = len(C.hom(x, t))
            if n != 1:
                return Verdict.refute({"law": "terminal", "object": x, "arrows": n}, window)
        return Verdict.hold(window)

    def products():
        objs = C.objects()
        for a in objs:
            for b in objs:
                v = check_product(C, a, b)
                if not v.holds:
                    return v
        return Verdict.hold(window)

    return conjoin([identity_laws, associativity, terminal, products], window)


def check_product(C, a, b):
    "<f,g> es la UNICA h con pi_a h = f, pi_b h = g, para todo X de la ventana"
    window = C.window()
    p = C.product(a, b)
    for x in C.objects():
        homs = C.hom(x, p.obj)
        seen = {}
        for h in homs:
            key = (C.compose(p.left, h).id, C.compose(p.right, h).id)
            seen[key] = seen.get(key, 0) + 1
        for f in C.hom(x, a):
            for g in C.hom(x, b):
                count = seen.get((f.id, g.id), 0)
                if count != 1:
                    return Verdict.refute({"law": "product", "product": [a, b], "pair": [f.id, g.id],
                                           "mediators": count}, window)
    return Verdict.hold(window)


def product(C, a, b):
    return C.product(a, b)


def pair(C, f, g):
    return C.pair(f, g)


def terminal(C):
    return C.terminal()


def pullback(C, f, h):
    return C.pullback(f, h)


def is_pullback_square(C, sq):
    "Conmuta y toda otra cuna desde la ventana factoriza de forma unica"
    window = C.window()
    if C.compose(sq.f, sq.k) != C.compose(sq.h, sq.g):
        return Verdict.refute({"law": "square_commutes", "square": sq.describe()}, window)
    for q in C.objects():
        seen = {}
        for u in C.hom(q, sq.apex):
            key = (C.compose(sq.g, u).id, C.compose(sq.k, u).id)
            seen[key] = seen.get(key, 0) + 1
        for x in C.hom(q, sq.h.dom):
            hx = C.compose(sq.h, x)
            for y in C.hom(q, sq.f.dom):
                if C.compose(sq.f, y) != hx:
                    continue
                count = seen.get((x.id, y.id), 0)
                if count != 1:
                    return Verdict.refute({"law": "pullback_universal", "square": sq.describe(),
                                           "cone": [x.id, y.id], "mediators": count}, window)
    return Verdict.hold(window)


def is_monic(C, f):
    window = C.window()
    for z in C.objects():
        seen = {}
        for g in C.hom(z, f.dom):
            key = C.compose(f, g).id
            if key in seen:
                return Verdict.refute({"law": "monic", "arrow": f.id, "g": seen[key].id, "h": g.id}, window)
            seen[key] = g
    return Verdict.hold(window)


def find_isomorphism(C, a, b):
    "Par (f, g) de inversas mutuas, o None"
    if a == b:
        ida = C.identity(a)
        return ida, ida
    ida, idb = C.identity(a), C.identity(b)
    backs = C.hom(b, a)
    for f in C.hom(a, b):
        for g in backs:
            if C.compose(g, f) == ida and C.compose(f, g) == idb:
                return f, g
    return None


def is_iso(C, f):
    idd, idc = C.identity(f.dom), C.identity(f.cod)
    return any(C.compose(g, f) == idd and C.compose(f, g) == idc for g in C.hom(f.cod, f.dom))


def is_initial(C, a):
    return all(len(C.hom(a, x)) == 1 for x in C.objects())


def is_stable_initial(C, a):
    window = C.window()
    for x in C.objects():
        n = len(C.hom(a, x))
        if n != 1:
            return Verdict.refute({"law": "initial", "object": a, "target": x, "arrows": n}, window)
    for x in C.objects():
        p = C.product(x, a)
        if find_isomorphism(C, p.obj, a) is None:
            return Verdict.refute({"law": "stable_initial", "object": a, "factor": x,
                                   "product": p.obj}, window)
    return Verdict.hold(window)


def stable_initial_objects(C):
    return [a for a in C.objects() if is_stable_initial(C, a).holds]


def arrows_isomorphic(C, f, p):
    "Existen isos u: dom f -> dom p, v: cod f -> cod p con p.u = v.f"
    dom_isos = _isos(C, f.dom, p.dom)
    if not dom_isos:
        return False
    for v in _isos(C, f.cod, p.cod):
        vf = C.compose(v, f)
        if any(C.compose(p, u) == vf for u in dom_isos):
            return True
    return False


def _isos(C, a, b):
    if C.size(a) != C.size(b):
        return []
    ida, idb = C.identity(a), C.identity(b)
    backs = C.hom(b, a)
    return [f for f in C.hom(a, b)
            if any(C.compose(g, f) == ida and C.compose(f, g) == idb for g in backs)]


def projection_squares(C):
    "Cuadrados canonicos de producto sobre las proyecciones de la ventana"
    squares = []
    objs = C.objects()
    for z in objs:
        for a in objs:
            p = C.product(z, a)
            ida, idz = C.identity(a), C.identity(z)
            for x in objs:
                for h in C.hom(x, z):
                    q = C.product(x, a)
                    squares.append(Square(q.obj, p.left, h, q.left, C.cross(h, ida)))
                for h in C.hom(x, a):
                    q = C.product(z, x)
                    squares.append(Square(q.obj, p.right, h, q.right, C.cross(idz, h)))
    return squares


def projection_class(C):
    objs = C.objects()
    members = []
    for a in objs:
        for b in objs:
            p = C.product(a, b)
            members.extend([p.left, p.right])
    members = list(dict.fromkeys(members))
    squares = projection_squares(C)
    if C.is_explicit:
        extra = []
        for f in members:
            for x in objs:
                for h in C.hom(x, f.cod):
                    sq = C.pullback(f, h)
                    if sq is not None and not any(
                            s.f == f and s.h == h and s.apex == sq.apex for s in squares):
                        extra.append(sq)
        squares = squares + extra
    member_set = set(members)

    def contains(f):
        return f in member_set or any(arrows_isomorphic(C, f, p) for p in members)

    return ArrowClass("Prj", members, squares, contains, closed=True)


def is_pullback_stable(C, cls):
    window = C.window()
    for f in cls.members:
        for x in C.objects():
            for h in C.hom(x, f.cod):
                sq = C.pullback(f, h)
                if sq is None:
                    return Verdict.refute({"law": "pullback_missing", "class": cls.name,
                                           "f": f.id, "h": h.id}, window)
                if sq.g not in cls:
                    return Verdict.refute({"law": "pullback_stable", "class": cls.name,
                                           "f": f.id, "h": h.id, "g": sq.g.id}, window)
    return Verdict.hold(window)


def factors_through(C, m, n):
    "Existe k con n.k = m"
    return any(C.compose(n, k) == m for k in C.hom(m.dom, n.dom))


def monics_into(C, a):
    return [m for y in C.subobject_domains(a) for m in C.hom(y, a) if is_monic(C, m).holds]


def subobject_poset(C, a):
    """
    Monos hacia a cocientados por factorizacion mutua; representante = el
    primero en el orden canonico de enumeracion. Etiquetas = ids de flechas.
    """
    monics = monics_into(C, a)
    reps = []
    for m in monics:
        if not any(factors_through(C, m, r) and factors_through(C, r, m) for r in reps):
            reps.append(m)
    leq = [[factors_through(C, r, s) for s in reps] for r in reps]
    return FinPoset([r.id for r in reps], leq)
