"""
Front end de linea de comandos.

    validate <instancia> [--recheck reporte.json]
    classify <instancia> [--json ruta] [--xlsx ruta] [--flags a,b,...]
    derive   <instancia> --what {sigma,implication,cocomp,dual,graph,epsilon}
    theorem  <instancia> (--id X | --all) [--json ruta]
    search   --filter EXPR [--budget N] [--limit K]
    catalog  (--list | --emit ID [--explicit])

<instancia> es un archivo JSON o un id de catalogo (PS-2-0, SIER, ...).
Codigos de salida: 0 ok, 1 algun veredicto Refuted, 2 error de uso o de parseo.
"""
import argparse
import copy
import json
import logging
import os
import sys

import catalog
from config_utils import load_config, setup_logging
from constructions import (cocomp_from_negation, derived_implication_table, derived_sigma,
                           dualize, graph)
from doctrine import RECHECKS, recheck, validate_doctrine
from enumeration import enumerate_doctrines
from filter_utils import compile_filter
from instance_file import load_instance, serialize
from logic import ac_check, check_declared
from report_export import (FLAGS, build_report, classify, dumps, export_xlsx, human_summary,
                           theorem_records, write_json)
from theorems import THEOREMS, check_all, check_theorem
from utils import FindocError, StructureMissing

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_REFUTED, EXIT_ERROR = 0, 1, 2
DERIVATIONS = ("sigma", "implication", "cocomp", "dual", "graph", "epsilon")


# ---------------------------
# Argumentos
# ---------------------------
def build_parser():
    parser = argparse.ArgumentParser(prog="findoc", description="Finite-model workbench for doctrines")
    parser.add_argument("--window", type=int, default=None,
                        help="techo de cardinalidad para conjuntos y espacios materializados")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="leyes de functor, monotonia y testigos declarados")
    p.add_argument("instance")
    p.add_argument("--recheck", metavar="REPORT", help="re-verifica los Refuted de un reporte")

    p = sub.add_parser("classify", help="todas las flags de clasificacion")
    p.add_argument("instance")
    p.add_argument("--json", dest="json_path")
    p.add_argument("--xlsx", dest="xlsx_path")
    p.add_argument("--flags", help="lista separada por comas (por defecto todas)")
    p.add_argument("--no-witnesses", action="store_true")

    p = sub.add_parser("derive", help="estructura derivada")
    p.add_argument("instance")
    p.add_argument("--what", choices=DERIVATIONS, required=True)
    p.add_argument("--arrow", help="restringe sigma/graph a una flecha")
    p.add_argument("--object", help="restringe implication/cocomp a un objeto")

    p = sub.add_parser("theorem", help="chequea teoremas del registro")
    p.add_argument("instance")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--id", dest="theorem_id", choices=sorted(THEOREMS))
    group.add_argument("--all", action="store_true")
    p.add_argument("--json", dest="json_path")
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("search", help="busca doctrinas pequenas que satisfacen un filtro")
    p.add_argument("--filter", dest="expr", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--limit", type=int, default=1)
    p.add_argument("--max-fiber", type=int, default=None)
    p.add_argument("--max-base", type=int, default=None)
    p.add_argument("--strict", action="store_true", help="agotar el presupuesto es un error")

    p = sub.add_parser("catalog", help="instancias de catalogo")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--list", action="store_true")
    group.add_argument("--emit", metavar="ID")
    p.add_argument("--explicit", action="store_true", help="emite tablas en vez de la referencia")
    return parser


def _config(args):
    config = copy.deepcopy(load_config())
    if args.window is not None:
        config["Window"]["finset_ceiling"] = args.window
        config["Window"]["top_ceiling"] = args.window
    return config


def load(ref, config):
    "Archivo de instancia o id de catalogo"
    if os.path.exists(ref):
        return load_instance(ref, config)
    return catalog.build(ref, config)


def _progress(config):
    return bool(config.get("Search", {}).get("progress", False))


# ---------------------------
# Comandos
# ---------------------------
def cmd_validate(args, config):
    D = load(args.instance, config)
    verdicts = [("valid", validate_doctrine(D))]
    if D.declared:
        verdicts.append(("declared", check_declared(D)))
    code = EXIT_OK
    for name, v in verdicts:
        print(f"{name}: {v}")
        if v.refuted:
            print(f"  {json.dumps(v.payload, default=str, sort_keys=True)}")
            code = EXIT_REFUTED
    if args.recheck:
        with open(args.recheck, "r", encoding="utf-8") as f:
            report = json.load(f)
        if not _recheck_report(D, report):
            code = EXIT_REFUTED
    return code


def _refuted_payloads(report):
    for rec in report.get("classification", []):
        if rec.get("kind") == "refuted":
            yield rec["check"], rec.get("payload", {})
    for rec in report.get("theorems", []):
        concl = rec.get("conclusion", {})
        if concl.get("kind") == "refuted":
            yield rec["theorem"], concl.get("payload", {})


def _recheck_report(D, report):
    "True si todos los contraejemplos re-verificables se reproducen"
    ok = True
    for name, payload in _refuted_payloads(report):
        if payload.get("law") not in RECHECKS:
            print(f"recheck {name}: sin re-verificacion para {payload.get('law')!r}")
            continue
        reproduced = recheck(D, payload)
        print(f"recheck {name}: {'reproduced' if reproduced else 'NOT reproduced'}")
        if not reproduced:
            logger.error(f"Contraejemplo de {name} no se reproduce: {payload}")
            ok = False
    return ok


def cmd_classify(args, config):
    D = load(args.instance, config)
    flags = FLAGS
    if args.flags:
        flags = [f.strip() for f in args.flags.split(",") if f.strip()]
        unknown = [f for f in flags if f not in FLAGS]
        if unknown:
            raise FindocError(f"Flags desconocidos: {', '.join(unknown)}")
    results = classify(D, flags, progress=_progress(config))
    print(human_summary(D, results))
    if args.json_path:
        write_json(build_report(D, results, config, include_witnesses=not args.no_witnesses),
                   args.json_path)
    if args.xlsx_path:
        export_xlsx(results, args.xlsx_path, sheet=config["Report"].get("xlsx_sheet", "classification"))
    return EXIT_REFUTED if any(v.refuted for _, v, _ in results) else EXIT_OK


def _derive(D, what, arrow=None, obj=None):
    C = D.base
    objects = [obj] if obj else C.objects()
    arrows = [C.arrow(arrow)] if arrow else C.arrows()
    if what == "sigma":
        out = {}
        for f in arrows:
            values = {D.label(f.dom, a): derived_sigma(D, f, a) for a in range(D.fiber(f.dom).n)}
            if any(v is None for v in values.values()):
                return {"not_applicable": "not elementary and existential"}
            out[f.id] = {k: D.label(f.cod, v) for k, v in values.items()}
        return out
    if what == "implication":
        out = {}
        for a in objects:
            try:
                table = derived_implication_table(D, a)
            except StructureMissing as e:
                return {"not_applicable": str(e)}
            out[a] = {D.label(a, i): {D.label(a, j): D.label(a, table[i, j]) for j in range(len(table))}
                      for i in range(len(table))}
        return out
    if what == "cocomp":
        out = {}
        for a in objects:
            entries = {}
            for alpha in range(D.fiber(a).n):
                w = cocomp_from_negation(D, a, alpha)
                entries[D.label(a, alpha)] = None if w is None else w.arrow.id
            out[a] = entries
        return out
    if what == "graph":
        out = {}
        for f in arrows:
            g = graph(D, f)
            if g is None:
                return {"not_applicable": "not elementary"}
            out[f.id] = D.label(C.product(f.dom, f.cod).obj, g)
        return out
    if what == "epsilon":
        verdict, table = ac_check(D)
        return {"verdict": verdict.to_dict(), "epsilon": table.describe(D)}
    raise FindocError(f"Derivacion desconocida: {what!r}")


def cmd_derive(args, config):
    D = load(args.instance, config)
    if args.what == "dual":
        sys.stdout.write(serialize(dualize(D)))
        return EXIT_OK
    print(dumps(_derive(D, args.what, args.arrow, args.object)))
    return EXIT_OK


def cmd_theorem(args, config):
    D = load(args.instance, config)
    if args.all:
        reports = check_all(D, workers=args.workers, progress=_progress(config))
    else:
        reports = [check_theorem(args.theorem_id, D)]
    width = max(len(r.theorem) for r in reports)
    for r in reports:
        print(f"{r.theorem:<{width}}  {r.conclusion}")
    if args.json_path:
        include_timing = config.get("Report", {}).get("include_timing", False)
        write_json({"schema_version": config["General"].get("report_schema_version", 1),
                    "instance": {"name": D.name, "hash": D.instance_hash, "window": D.window()},
                    "theorems": theorem_records(reports, include_timing)}, args.json_path)
    return EXIT_REFUTED if any(r.conclusion.refuted for r in reports) else EXIT_OK


def cmd_search(args, config):
    search = config["Search"]
    accept = compile_filter(args.expr)
    found = list(enumerate_doctrines(
        max_fiber_size=args.max_fiber or search["max_fiber_size"],
        min_fiber_size=search["min_fiber_size"],
        max_base_size=args.max_base or search["max_base_size"],
        accept=accept,
        budget=args.budget or search["budget"],
        strict=args.strict,
        limit=args.limit,
        progress=_progress(config),
    ))
    if not found:
        print(f"Sin doctrinas que satisfagan {args.expr!r} dentro del presupuesto")
        return EXIT_REFUTED
    for D in found:
        sys.stdout.write(serialize(D))
    return EXIT_OK


def cmd_catalog(args, config):
    if args.list:
        for cid in catalog.catalog_ids():
            print(f"{cid:<10}  {catalog.CATALOG[cid][0]}")
        return EXIT_OK
    sys.stdout.write(serialize(catalog.build(args.emit, config), explicit=args.explicit))
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "derive": cmd_derive,
    "theorem": cmd_theorem,
    "search": cmd_search,
    "catalog": cmd_catalog,
}


def run(argv=None):
    "Ejecuta un comando y devuelve el codigo de salida"
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR
    try:
        config = _config(args)
        setup_logging(config, verbose=args.verbose)
        return COMMANDS[args.command](args, config)
    except (FindocError, OSError, json.JSONDecodeError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
