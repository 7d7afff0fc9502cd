"""Deterministic walks in deterministic environments.

Maps are given by built-in name or as a JSON document; environments as
dicts (or JSON text). Exact probabilities come back as fractions.Fraction.
"""

import json
from fractions import Fraction

from . import _core
from ._core import DwdeError, map_names

__all__ = [
    "DwdeError",
    "map_names",
    "cylinder_measure",
    "simulate",
    "return_probability",
    "hit_before",
    "path_counts",
    "transience_certificate",
    "run_scenario",
    "report",
]


def _doc(value):
    return value if isinstance(value, str) else json.dumps(value)


def _map(value):
    return value if isinstance(value, str) else json.dumps(value)


def cylinder_measure(map, word):
    return Fraction(_core.cylinder_measure(_map(map), list(word)))


def simulate(map, env, steps, seed=0, start=0, mode="symbolic", env_seed=None):
    return _core.simulate(_map(map), _doc(env), steps, seed, start, mode, env_seed)


def return_probability(map, env, horizon, start=0, env_seed=None):
    return Fraction(_core.return_probability(_map(map), _doc(env), horizon, start, env_seed))


def hit_before(map, env, a, b, start=0, env_seed=None):
    """P(reach b before a) from `start`, exact."""
    return Fraction(_core.hit_before(_map(map), _doc(env), a, b, start, env_seed))


def path_counts(n_max, k_max):
    return [[int(c) for c in row] for row in _core.path_counts(n_max, k_max)]


def transience_certificate(map, r):
    return _core.transience_certificate(_map(map), r)


def run_scenario(config):
    """Runs a scenario and returns the result document as a dict."""
    return json.loads(_core.run_scenario(_doc(config)))


def report(result, format="json"):
    return _core.report(_doc(result), format)
