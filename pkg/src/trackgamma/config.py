"""Experiment configurations shared by the scripts."""
from __future__ import annotations

import argparse
from dataclasses import dataclass, field, fields


@dataclass
class GridConfig:
    """Property-Gamma grid run on perturbed cogroup structures."""
    groups: list[str] = field(default_factory=lambda: ["Z/2", "Z/4", "Z+Z/2"])
    powers: list[int] = field(default_factory=lambda: [2, 3, -1])
    max_rank: int = 3
    length: int = 4
    seed: int = 0
    structure_seeds: tuple[int, int] = (11, 12)
    uniqueness: bool = False


@dataclass
class CohomologyConfig:
    systems: list[str] = field(default_factory=list)  # empty means every fixture system
    max_degree: int = 4


@dataclass
class SearchConfig:
    """Exhaustive pseudosection search on the table fixtures."""
    fixtures: list[str] = field(default_factory=list)
    normalized: bool = True
    stop_at_first: bool = False


def parse_config(cls, argv=None, description: str = ""):
    """Build ``cls`` from command-line flags named after its fields."""
    ap = argparse.ArgumentParser(description=description)
    defaults = cls()
    for f in fields(cls):
        value = getattr(defaults, f.name)
        flag = "--" + f.name.replace("_", "-")
        if isinstance(value, bool):
            ap.add_argument(flag, action=argparse.BooleanOptionalAction, default=value)
        elif isinstance(value, (list, tuple)):
            kind = type(value[0]) if value else str
            ap.add_argument(flag, nargs="*" if isinstance(value, list) else len(value), type=kind,
                            default=value)
        else:
            ap.add_argument(flag, type=type(value), default=value)
    ns = ap.parse_args(argv)
    kwargs = {f.name: getattr(ns, f.name) for f in fields(cls)}
    for f in fields(cls):
        if isinstance(getattr(defaults, f.name), tuple):
            kwargs[f.name] = tuple(kwargs[f.name])
    return cls(**kwargs)
