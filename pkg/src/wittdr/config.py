"""Suite configuration: defaults, loading, validation."""

import copy
import json
import os
from importlib import resources

import jsonschema

from .arith import is_prime
from .errors import ConfigInvalid, WittDRError
from .parsing import parse_ring
from .witt import MAX_LEVEL, MAX_PRIME

CONFIG_ENV = "WITTDR_CONFIG"
EXHAUSTIVE_LEVEL = 3
GROUPS = ("witt-axioms", "unit-groups", "endo-monoid", "rigidity",
          "splitting", "lemma59", "cech-weights")
EXHAUSTIVE_GROUPS = ("unit-groups", "endo-monoid")

DEFAULT_CONFIG = {
    "primes": [2, 3, 5],
    "wittLevels": [2, 3],
    "pdTruncation": 2,
    "degreeBound": None,  # p^2 per prime
    "cechWittLevel": 3,
    "enumerationCap": 4096,
    "samples": 200,
    "rings": [
        {"ring": "Z/81", "p": 3, "n": 4},
        {"ring": "F4", "p": 2, "n": 3},
        {"ring": "F2[e]/(e^2)", "p": 2, "n": 3},
        {"ring": "Z/8", "p": 2, "n": 3},
        {"ring": "F2", "p": 2, "n": 3},
        {"ring": "F3[e]/(e^2)", "p": 3, "n": 2},
        {"ring": "Z/4", "p": 2, "n": 2},
    ],
    "groups": list(GROUPS),
    "jobs": 1,
    "seed": 0,
    "oracle": "none",
    "out": None,
}


def load_schema(name):
    text = resources.files("wittdr").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def default_config():
    return copy.deepcopy(DEFAULT_CONFIG)


def load_config(source=None):
    """Merge a JSON file path, a dict or nothing (env default) onto the defaults."""
    if source is None:
        source = os.environ.get(CONFIG_ENV) or None
    data = {}
    if isinstance(source, dict):
        data = source
    elif source is not None:
        try:
            with open(source) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigInvalid([f"<file>: cannot read {source}: {exc}"]) from exc
    cfg = default_config()
    cfg.update(data)
    return validate_config(cfg)


def validate_config(cfg):
    problems = []
    validator = jsonschema.Draft7Validator(load_schema("config"))
    for err in sorted(validator.iter_errors(cfg), key=lambda e: list(e.path)):
        field = "/".join(str(x) for x in err.path) or "<root>"
        problems.append(f"{field}: {err.message}")
    if problems:
        raise ConfigInvalid(problems)

    for p in cfg["primes"]:
        if not is_prime(p) or p > MAX_PRIME:
            problems.append(f"primes: {p} is not a prime <= {MAX_PRIME}")
    for n in cfg["wittLevels"]:
        if n > MAX_LEVEL:
            problems.append(f"wittLevels: {n} exceeds the cap {MAX_LEVEL}")
    exhaustive = any(g in cfg["groups"] for g in EXHAUSTIVE_GROUPS)
    if exhaustive and max(cfg["wittLevels"]) > EXHAUSTIVE_LEVEL:
        problems.append(f"wittLevels: exhaustive groups need levels <= {EXHAUSTIVE_LEVEL}")
    if cfg["cechWittLevel"] > 3:
        problems.append("cechWittLevel: at most 3")
    for i, entry in enumerate(cfg["rings"]):
        if not is_prime(entry["p"]) or entry["p"] > MAX_PRIME:
            problems.append(f"rings/{i}/p: {entry['p']} is not a prime <= {MAX_PRIME}")
        if entry["n"] > MAX_LEVEL:
            problems.append(f"rings/{i}/n: {entry['n']} exceeds the cap {MAX_LEVEL}")
        try:
            parse_ring(entry["ring"])
        except (WittDRError, KeyError, TypeError, ValueError) as exc:
            problems.append(f"rings/{i}/ring: {exc}")
    if problems:
        raise ConfigInvalid(problems)
    return cfg
