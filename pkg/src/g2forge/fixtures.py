"""Built-in fixture registry and .lie resolution for the CLI.

Fixtures live as .lie files in the packaged ``fixtures/`` directory; the
environment variable G2FORGE_FIXTURES overrides the directory.  ``h`` is the
solvable matrix group whose closed structure is a steady gradient soliton,
``abelian`` is the torsion-free control, ``n52`` the nilpotent classification
fixture (5-dimensional, padded to 7).
"""

import os
from importlib import resources
from pathlib import Path

from . import charts
from .exterior import parse_form
from .liealg import load_lie

MODEL_PHI_TEXT = "e127 + e347 + e567 + e135 - e146 - e236 - e245"

_ANNOTATIONS = {
    "h": (
        "solvable, non-unimodular matrix subgroup of GL(7,R)",
        "almost nilpotent",
        "(R x N5,2) semidirect R",
        "carries a left-invariant steady gradient soliton",
    ),
    "abelian": ("abelian", "torsion-free control fixture"),
    "n52": ("2-step nilpotent", "5-dimensional algebra padded to dimension 7"),
}

BUILTIN_NAMES = tuple(_ANNOTATIONS)


class Fixture:
    """A named algebra with its default 3-form and free-form annotations."""

    __slots__ = ("name", "algebra", "phi", "annotations", "chart_primitives")

    def __init__(self, name, algebra, phi, annotations=(), chart_primitives=None):
        self.name = name
        self.algebra = algebra
        self.phi = phi
        self.annotations = tuple(annotations)
        self.chart_primitives = chart_primitives


def fixtures_dir():
    override = os.environ.get("G2FORGE_FIXTURES")
    if override:
        return Path(override)
    return Path(resources.files("g2forge") / "fixtures")


def fixture_path(name):
    base = fixtures_dir()
    for candidate in (base / name, base / f"{name}.lie"):
        if candidate.is_file():
            return candidate
    raise FileNotFoundError(f"no fixture {name!r} in {base}")


def load_fixture(name, field):
    algebra = load_lie(fixture_path(name), field)
    phi = parse_form(MODEL_PHI_TEXT, field)
    primitives = charts.LINEAR_COFRAME_PRIMITIVES if name == "h" else None
    return Fixture(name, algebra, phi, _ANNOTATIONS.get(name, ()), primitives)


def resolve_algebra(arg, field):
    """A CLI algebra argument: an existing path wins, then a fixture name.

    Returns (algebra, source description).
    """
    p = Path(arg)
    if p.is_file():
        return load_lie(p, field), str(p)
    stem = p.stem if p.suffix == ".lie" else arg
    path = fixture_path(stem)
    return load_lie(path, field), f"fixture:{stem}"
