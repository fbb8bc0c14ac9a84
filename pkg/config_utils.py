import os
import json
import logging
import copy

CONFIG_FILENAME = "config.ini"
LOG_FORMAT = "[%(funcName)s] %(message)s"

logger = logging.getLogger(__name__)


# ---------------------------
# Path de config
# ---------------------------
def get_config_path():
    override = os.environ.get("FINDOC_CONFIG")
    if override:
        return override
    return os.path.join(os.path.abspath(os.path.dirname(__file__)), CONFIG_FILENAME)


# ---------------------------
# Config por defecto
# ---------------------------
def get_default_config():
    output_folder = os.path.join(os.path.abspath(os.path.dirname(__file__)), "output")
    return {
        "General": {
            "output_folder": output_folder,
            "report_schema_version": 1,
            "log_level": "WARNING"
        },
        "Window": {
            "finset_ceiling": 8,
            "fiber_ceiling": 4096,
            "top_ceiling": 8,
            "hom_ceiling": 65536
        },
        "Search": {
            "budget": 100000,
            "max_fiber_size": 3,
            "min_fiber_size": 1,
            "max_base_size": 3,
            "progress": True
        },
        "Catalog": {
            "ps_max_size": 2,
            "ps_power_depth": 0
        },
        "Report": {
            "include_timing": False,
            "xlsx_sheet": "classification"
        }
    }


# ---------------------------
# Cargar config (crear si no existe)
# ---------------------------
def load_config(path=None):
    config_path = path or get_config_path()
    default_config = get_default_config()

    if os.path.exists(config_path):
        with open(config_path, "r", encoding="utf-8") as f:
            config = json.load(f)
        existed = True
    else:
        config = copy.deepcopy(default_config)
        existed = False

    # Asegurar secciones y claves por defecto
    changed = False
    for section, values in default_config.items():
        if section not in config:
            config[section] = copy.deepcopy(values)
            changed = True
            continue
        for key, value in values.items():
            if key not in config[section]:
                config[section][key] = value
                changed = True

    # Solo guardar si el archivo ya existia y le faltaban claves
    if existed and changed:
        save_config(config, config_path)
    elif not existed:
        try:
            save_config(config, config_path)
        except OSError as e:
            logger.warning(f"No se pudo crear {config_path}: {e}")

    budget = os.environ.get("FINDOC_BUDGET")
    if budget:
        try:
            config["Search"]["budget"] = int(budget)
        except ValueError:
            logger.warning(f"FINDOC_BUDGET ignorado, no es entero: {budget!r}")

    return config


# ---------------------------
# Guardar config
# ---------------------------
def save_config(config, path=None):
    config_path = path or get_config_path()
    with open(config_path, "w", encoding="utf-8") as f:
        json.dump(config, f, indent=4)


# ---------------------------
# Accesos por seccion
# ---------------------------
def get_window_settings(config=None):
    if config is None:
        config = load_config()
    return config.get("Window", get_default_config()["Window"])


def get_search_settings(config=None):
    if config is None:
        config = load_config()
    return config.get("Search", get_default_config()["Search"])


def setup_logging(config=None, verbose=False):
    if config is None:
        config = load_config()
    level = "DEBUG" if verbose else config.get("General", {}).get("log_level", "WARNING")
    logging.basicConfig(level=getattr(logging, str(level).upper(), logging.WARNING),
                        format=LOG_FORMAT)
