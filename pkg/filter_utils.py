# filter_utils.py
"""
Filtros booleanos sobre flags de clasificacion, usados por `search` y por
los tests de enumeracion.

Sintaxis:
    expr   := term ('|' term)*
    term   := factor ('&' factor)*
    factor := '!' factor | '(' expr ')' | flag
Tambien se aceptan `and`, `or`, `not`.

Flags:
    - los de report_export.FLAGS (full_comp, classical, tripos, ...): verdadero si Holds
    - hyp.<teorema>: todas las hipotesis del teorema valen
    - concl.<teorema>: la conclusion del teorema vale
"""
import re

from report_export import FLAGS, run_check
from theorems import THEOREMS, check_theorem
from utils import FindocError


class FilterError(FindocError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<op>[&|!()])|(?P<name>[A-Za-z_][\w.]*))")
_KEYWORDS = {"and": "&", "or": "|", "not": "!"}


def tokenize(expr):
    tokens, pos = [], 0
    expr = expr.rstrip()
    while pos < len(expr):
        m = _TOKEN.match(expr, pos)
        if not m:
            raise FilterError(f"Caracter inesperado en la posicion {pos}: {expr[pos:pos + 10]!r}")
        if m.group("op"):
            tokens.append(m.group("op"))
        else:
            name = m.group("name")
            tokens.append(_KEYWORDS.get(name, ("name", name)))
        pos = m.end()
    return tokens


def known_flag(name):
    if name in FLAGS:
        return True
    prefix, _, tid = name.partition(".")
    return prefix in ("hyp", "concl") and tid in THEOREMS


class Filter:
    """Expresion compilada; evalua perezosamente contra un mapeo flag -> bool."""

    def __init__(self, expr):
        self.expr = expr
        self._tokens = tokenize(expr)
        self._pos = 0
        if not self._tokens:
            raise FilterError("Filtro vacio")
        self._tree = self._parse_or()
        if self._pos != len(self._tokens):
            raise FilterError(f"Token sobrante: {self._tokens[self._pos]!r}")
        self.names = sorted(self._collect(self._tree))
        unknown = [n for n in self.names if not known_flag(n)]
        if unknown:
            raise FilterError(f"Flags desconocidos: {', '.join(unknown)}")

    # Parser recursivo

    def _peek(self):
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def _take(self):
        tok = self._peek()
        self._pos += 1
        return tok

    def _parse_or(self):
        node = self._parse_and()
        while self._peek() == "|":
            self._take()
            node = ("or", node, self._parse_and())
        return node

    def _parse_and(self):
        node = self._parse_not()
        while self._peek() == "&":
            self._take()
            node = ("and", node, self._parse_not())
        return node

    def _parse_not(self):
        tok = self._take()
        if tok == "!":
            return ("not", self._parse_not())
        if tok == "(":
            node = self._parse_or()
            if self._take() != ")":
                raise FilterError("Falta ')'")
            return node
        if isinstance(tok, tuple):
            return tok
        raise FilterError(f"Se esperaba un flag, se encontro {tok!r}")

    def _collect(self, node):
        if node[0] == "name":
            return {node[1]}
        return set().union(*(self._collect(n) for n in node[1:]))

    # Evaluacion

    def evaluate(self, flags, node=None):
        node = node or self._tree
        kind = node[0]
        if kind == "name":
            return bool(flags[node[1]])
        if kind == "not":
            return not self.evaluate(flags, node[1])
        if kind == "and":
            return self.evaluate(flags, node[1]) and self.evaluate(flags, node[2])
        return self.evaluate(flags, node[1]) or self.evaluate(flags, node[2])

    def __call__(self, D):
        return self.evaluate(DoctrineFlags(D))

    def __repr__(self):
        return f"Filter({self.expr!r})"


class DoctrineFlags:
    """Mapeo perezoso flag -> bool sobre una doctrina."""

    def __init__(self, D):
        self.D = D
        self._cache = {}

    def __getitem__(self, name):
        if name not in self._cache:
            self._cache[name] = self._compute(name)
        return self._cache[name]

    def _compute(self, name):
        if name in FLAGS:
            return run_check(name, self.D).holds
        prefix, _, tid = name.partition(".")
        report = check_theorem(tid, self.D)
        if prefix == "hyp":
            return report.hypotheses_hold
        return report.conclusion.holds


def compile_filter(expr):
    return Filter(expr)
