import functools
import hashlib
import json
import threading
from dataclasses import dataclass, field

# Un solo lock para escrituras de reportes y memo de instancias
report_lock = threading.Lock()

HOLDS = "holds"
REFUTED = "refuted"
NOT_APPLICABLE = "not_applicable"


# ---------------------------
# Errores
# ---------------------------
class FindocError(Exception):
    """Raiz de todos los errores del workbench."""


class WindowExceeded(FindocError):
    """Un objeto o fibra materializado supera el techo de la ventana."""


class MalformedCategory(FindocError):
    """Tabla de composicion incompleta o forma de reindexado incorrecta."""


class NotAProduct(FindocError):
    pass


class StructureMissing(FindocError):
    pass


class UnknownTheorem(FindocError):
    pass


class BudgetExceeded(FindocError):
    pass


class InstanceFormatError(FindocError):
    """Error de parseo con posicion: ruta JSON, linea y columna."""

    def __init__(self, message, path="", line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = path or "<documento>"
        if line is not None:
            where = f"{where} (linea {line}, columna {column or 0})"
        super().__init__(f"{where}: {message}")


# ---------------------------
# Veredictos
# ---------------------------
@dataclass(frozen=True, eq=True)
class Verdict:
    """
    Resultado de un chequeo cuantificado universalmente.

    - holds: vale en la ventana descrita por `window`
    - refuted: `payload` lleva el contraejemplo
    - not_applicable: `reason` nombra la hipotesis que falta
    """
    kind: str
    window: str = ""
    reason: str = ""
    payload: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def hold(cls, window):
        return cls(HOLDS, window=window)

    @classmethod
    def refute(cls, payload, window=""):
        return cls(REFUTED, window=window, payload=dict(payload))

    @classmethod
    def skip(cls, reason, **payload):
        return cls(NOT_APPLICABLE, reason=reason, payload=payload)

    @property
    def holds(self):
        return self.kind == HOLDS

    @property
    def refuted(self):
        return self.kind == REFUTED

    @property
    def not_applicable(self):
        return self.kind == NOT_APPLICABLE

    def to_dict(self):
        out = {"kind": self.kind}
        if self.window:
            out["window"] = self.window
        if self.reason:
            out["reason"] = self.reason
        if self.payload:
            out["payload"] = self.payload
        return out

    @classmethod
    def from_dict(cls, data):
        return cls(data["kind"], window=data.get("window", ""),
                   reason=data.get("reason", ""), payload=data.get("payload", {}))

    def __str__(self):
        if self.holds:
            return f"Holds[{self.window}]"
        if self.refuted:
            return f"Refuted({self.payload.get('law', '?')})"
        return f"NotApplicable({self.reason})"


def conjoin(checks, window):
    """
    Conjuncion perezosa de veredictos: `checks` es un iterable de veredictos
    o de funciones sin argumentos. Corta en el primer Refuted; si alguno es
    NotApplicable (y ninguno refutado) devuelve el primero de ellos.
    """
    skipped = None
    for check in checks:
        verdict = check() if callable(check) else check
        if verdict.refuted:
            return verdict
        if verdict.not_applicable and skipped is None:
            skipped = verdict
    return skipped if skipped is not None else Verdict.hold(window)


# ---------------------------
# Hash estable de instancias
# ---------------------------
def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def compute_instance_hash(description, length=16):
    """Hash sha256 del JSON canonico de la instancia, truncado a 'length' caracteres."""
    hasher = hashlib.sha256()
    hasher.update(canonical_json(description).encode("utf-8"))
    return hasher.hexdigest()[:length]


def guarded(check):
    """Envuelve un chequeo: WindowExceeded se reporta como NotApplicable(window)."""
    @functools.wraps(check)
    def run(*args, **kwargs):
        try:
            return check(*args, **kwargs)
        except WindowExceeded as e:
            return Verdict.skip("window", detail=str(e))
    return run
