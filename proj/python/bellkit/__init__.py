"""Bell-inequality toolkit: analytic values, Monte Carlo runs, local polytope."""

import json

from . import _core

__all__ = [
    "singlet_coincidence",
    "malus",
    "evaluate_inequality",
    "check_local_polytope",
    "enumerate_boole_facets",
    "run_experiment",
    "observer_ordering",
    "reproduce_paper",
    "cli",
]

singlet_coincidence = _core.singlet_coincidence
malus = _core.malus
observer_ordering = _core.observer_ordering


def evaluate_inequality(name, probabilities, sigma_k=3.0):
    """Report dict for star, double-star or minmax-a4 on analytic values."""
    return json.loads(_core.evaluate_inequality(name, list(probabilities), sigma_k))


def check_local_polytope(n_vars, constraints, exact=True):
    """constraints: (i, j, target) with target a float or a "num/den" string."""
    return json.loads(_core.check_local_polytope(n_vars, [tuple(c) for c in constraints], exact))


def enumerate_boole_facets(n_vars, pairs):
    return json.loads(_core.enumerate_boole_facets(n_vars, [tuple(p) for p in pairs]))


def _plan_value(v):
    if isinstance(v, (list, tuple)):
        return ", ".join(str(x) for x in v)
    return str(v)


def run_experiment(**plan):
    """Keyword form of a plan file, e.g. generator="lhv", n_pairs=10000,
    inequalities=["double-star"], comparisons=["P/E"]."""
    text = "".join(f"{k} = {_plan_value(v)}\n" for k, v in plan.items())
    return json.loads(_core.run_experiment(text))


def reproduce_paper(seed=20090512, n_pairs=1_000_000, threads=1):
    return json.loads(_core.reproduce_paper(seed, n_pairs, threads))


def cli(*args):
    """Runs the command line in-process; returns (exit_code, stdout, stderr)."""
    return _core.cli([str(a) for a in args])
