"""Bundled derivation scripts for the rule figures and the EPR argument."""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Dict, List

from .formulas import Derivation
from .syntax import parse_derivation

# derivations that check in B, one per rule figure
RULE_FIGURES = [
    "with_formation",
    "with_implicit_reflection_1",
    "with_implicit_reflection_2",
    "with_axiom_1",
    "with_axiom_2",
    "with_explicit_reflection_1",
    "with_explicit_reflection_2",
    "ent_formation",
    "ent_implicit_reflection_1",
    "ent_implicit_reflection_2",
    "ent_axiom_1",
    "ent_axiom_2",
    "ent_explicit_reflection_1",
    "ent_explicit_reflection_2",
    "cut_measurement",
    "cut_measurement_perp",
    "cut_over_entanglement",
    "epr_rule",
]


def _dir():
    return resources.files(__package__).joinpath("fixtures")


def names() -> List[str]:
    return sorted(p.name[:-4] for p in _dir().iterdir() if p.name.endswith(".blp"))


def text(name: str) -> str:
    return _dir().joinpath(f"{name}.blp").read_text(encoding="utf-8")


def load(name: str) -> Derivation:
    return parse_derivation(text(name))


def load_all() -> Dict[str, Derivation]:
    return {n: load(n) for n in names()}


def resolve(path: str) -> Path:
    """A path on disk, or the bundled fixture with that file name."""
    p = Path(path)
    if p.exists():
        return p
    stem = p.name[:-4] if p.name.endswith(".blp") else p.name
    if stem in names():
        return Path(str(_dir().joinpath(f"{stem}.blp")))
    raise FileNotFoundError(f"no such file or bundled fixture: {path}")
