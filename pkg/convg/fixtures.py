"""
Named spaces shipped with the package as JSON documents.

========  ==============================================================
``S2``    Sierpinski space on {a, b}
``D2``    discrete space on {a, b}
``C2``    chaotic space on {a, b}
``P3``    pretopological but not topological, on {a, b, c}
``W3``    centered and isotone but not stable, on {a, b, c}
========  ==============================================================
"""

import os

from .io import load_space

__all__ = ["FIXTURES", "fixture_path", "load_fixture"]

FIXTURES = ("S2", "D2", "C2", "P3", "W3")

_DATA = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def fixture_path(name):
    if name not in FIXTURES:
        raise KeyError("no fixture named {0!r}".format(name))
    return os.path.join(_DATA, name + ".json")


def load_fixture(name):
    """Load one of ``FIXTURES`` as a Preconvergence."""
    return load_space(fixture_path(name))
