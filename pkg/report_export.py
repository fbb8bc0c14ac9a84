"""
Reportes de clasificacion: registros en orden fijo (definiciones primero,
luego comprehension, eleccion y heacos), resumen legible, JSON determinista
y exportacion a Excel.
"""
import json
import logging
import os
import time

import pandas as pd
from tqdm import tqdm

from constructions import derived_sigma_check, dual_correspondence, is_eaco, is_heaco
from doctrine import (frobenius, has_bottoms, has_tops, is_existential, is_pi_doctrine,
                      is_primary, is_propositional, is_sigma_doctrine, validate_doctrine)
from logic import (ac_check, check_declared, check_substitutive, cocomprehension,
                   comprehension, find_equality, has_cocomprehension, has_comprehension,
                   has_diagonal_equality, is_classical, is_elementary, is_full_cocomprehension,
                   is_full_comprehension, is_higher_order, is_implicational, is_tripos,
                   is_tripos_via_characterization, negation, negation_check, weak_power_object)
from utils import Verdict, WindowExceeded, guarded, report_lock

logger = logging.getLogger(__name__)


def _substitutive(D):
    w = find_equality(D)
    if w is None:
        return Verdict.skip("not elementary")
    return check_substitutive(D, w)


# (flag, descripcion, chequeo) en el orden de las definiciones
CHECKS = [
    ("valid", "functor laws and monotonicity", validate_doctrine),
    ("primary", "primary (meets preserved)", is_primary),
    ("tops", "fibers with top", has_tops),
    ("bottoms", "fibers with bottom", has_bottoms),
    ("propositional", "propositional (Heyting, preserved)", is_propositional),
    ("sigma", "Sigma(Prj)-doctrine", is_sigma_doctrine),
    ("pi", "Pi(Prj)-doctrine", is_pi_doctrine),
    ("frobenius", "Frobenius reciprocity (Prj)", frobenius),
    ("existential", "existential", is_existential),
    ("elementary", "elementary (equality predicates)", is_elementary),
    ("substitutive", "equality substitutive", _substitutive),
    ("derived_sigma", "Sigma_f from equality agrees", derived_sigma_check),
    ("diagonal_equality", "diagonal equality (tripos iii)", lambda D: has_diagonal_equality(D)[0]),
    ("comp", "comprehension", has_comprehension),
    ("full_comp", "full comprehension", is_full_comprehension),
    ("cocomp", "co-comprehension", has_cocomprehension),
    ("full_cocomp", "full co-comprehension", is_full_cocomprehension),
    ("dual_correspondence", "comprehension of dual = co-comprehension", dual_correspondence),
    ("negation", "negation (natural)", lambda D: negation_check(D)[0]),
    ("classical", "classical", is_classical),
    ("implicational", "implicational (Heyting table)", is_implicational),
    ("higher_order", "weak power objects", is_higher_order),
    ("tripos", "tripos", is_tripos),
    ("tripos_char", "tripos via characterization", is_tripos_via_characterization),
    ("ac", "axiom of choice (epsilon)", lambda D: ac_check(D)[0]),
    ("eaco", "eaco", is_eaco),
    ("heaco", "heaco", is_heaco),
]

FLAGS = [flag for flag, _, _ in CHECKS]
_BY_FLAG = {flag: (desc, fn) for flag, desc, fn in CHECKS}


def run_check(flag, D):
    return guarded(_BY_FLAG[flag][1])(D)


def classify(D, flags=None, progress=False):
    """Lista de (flag, Verdict, segundos) en el orden de CHECKS."""
    out = []
    for flag in tqdm(flags or FLAGS, desc="classify", disable=not progress):
        start = time.perf_counter()
        verdict = run_check(flag, D)
        out.append((flag, verdict, time.perf_counter() - start))
    return out


# ---------------------------
# Testigos
# ---------------------------
def _safe(fn, *args):
    try:
        return fn(*args)
    except WindowExceeded:
        return None


def witness_tables(D):
    C = D.base
    out = {}
    eq = _safe(find_equality, D)
    if eq is not None:
        out["delta"] = eq.describe(D)
    for kind, search in (("comprehension", comprehension), ("cocomprehension", cocomprehension)):
        table = {}
        for a in C.objects():
            entries = {}
            for alpha in range(D.fiber(a).n):
                w = _safe(search, D, a, alpha)
                if w is not None:
                    entries[D.label(a, alpha)] = w.arrow.id
            if entries:
                table[a] = entries
        if table:
            out[kind] = table
    neg = _safe(negation, D)
    if neg is not None:
        out["negation"] = {a: {D.label(a, i): D.label(a, j) for i, j in enumerate(t)}
                           for a, t in sorted(neg.tables.items())}
    verdict, eps = _safe(ac_check, D) or (None, None)
    if verdict is not None and verdict.holds:
        out["epsilon"] = eps.describe(D)
    powers = {}
    for a in C.base_objects():
        w = _safe(weak_power_object, D, a)
        if w is not None:
            powers[a] = {"power": w.power, "member": D.label(C.product(a, w.power).obj, w.member)}
    if powers:
        out["power_objects"] = powers
    return out


# ---------------------------
# Registros
# ---------------------------
def classification_records(results, include_timing=False):
    records = []
    for flag, verdict, elapsed in results:
        rec = {"check": flag}
        rec.update(verdict.to_dict())
        if include_timing:
            rec["elapsed"] = round(elapsed, 6)
        records.append(rec)
    return records


def build_report(D, results, config=None, include_witnesses=True):
    config = config or {}
    include_timing = config.get("Report", {}).get("include_timing", False)
    report = {
        "schema_version": config.get("General", {}).get("report_schema_version", 1),
        "instance": {"name": D.name, "hash": D.instance_hash, "window": D.window()},
        "classification": classification_records(results, include_timing),
    }
    declared = getattr(D, "declared", None)
    if declared:
        report["declared"] = check_declared(D).to_dict()
    if include_witnesses:
        report["witnesses"] = witness_tables(D)
    return report


def theorem_records(reports, include_timing=False):
    return [r.to_dict(include_timing) for r in reports]


def dumps(report):
    "JSON determinista: orden de campos fijo, sin marcas de tiempo"
    return json.dumps(report, indent=2, ensure_ascii=False, default=str)


def write_json(report, path):
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    with report_lock:
        with open(path, "w", encoding="utf-8") as f:
            f.write(dumps(report))
            f.write("\n")
    logger.info(f"Reporte escrito en {path}")


# ---------------------------
# Resumen legible
# ---------------------------
_SYMBOL = {"holds": "yes", "refuted": "NO", "not_applicable": "n/a"}


def _detail(verdict):
    if verdict.refuted:
        return ", ".join(f"{k}={v}" for k, v in verdict.payload.items())
    if verdict.not_applicable:
        return verdict.reason
    return verdict.window


def human_summary(D, results):
    lines = [f"Instancia: {D.name or '-'}  hash={D.instance_hash}  ventana={D.window()}"]
    width = max(len(desc) for _, desc, _ in CHECKS)
    for flag, verdict, _ in results:
        desc = _BY_FLAG[flag][0]
        lines.append(f"  {desc:<{width}}  {_SYMBOL[verdict.kind]:<4} {_detail(verdict)}")
    return "\n".join(lines)


# ---------------------------
# Excel
# ---------------------------
def results_frame(results):
    rows = [{"check": flag, "verdict": verdict.kind, "window": verdict.window,
             "detail": _detail(verdict)} for flag, verdict, _ in results]
    if not rows:
        rows.append({"check": "", "verdict": "", "window": "", "detail": ""})
    return pd.DataFrame(rows, columns=["check", "verdict", "window", "detail"])


def export_xlsx(results, path, sheet="classification", append=False):
    df_new = results_frame(results)
    with report_lock:
        if append and os.path.exists(path):
            df_existente = pd.read_excel(path, sheet_name=sheet)
            df_new = pd.concat([df_existente, df_new], ignore_index=True)
        df_new.to_excel(path, sheet_name=sheet, index=False)
    logger.info(f"Clasificacion exportada a {path}")
    return path
