"""Plain key=value configuration.

Recognised keys (all optional)::

    pythagoras.1 = 4          # caps on the number of squares, per degree
    pythagoras.2 = 5
    pythagoras.3 = 6
    pythagoras.4 = 7
    enumeration_limit = 10000000
    precision = 53            # bits for printed embeddings and houses
    stage_c_trace_factor = 2.0
    unit_house_bound = 50

Lines starting with # or ; are comments.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .latenum import DEFAULT_LIMIT
from .sosrep import DEFAULT_CAPS, PythagorasTable


@dataclass
class Config:
    caps: dict = field(default_factory=lambda: dict(DEFAULT_CAPS))
    enumeration_limit: int = DEFAULT_LIMIT
    precision: int = 53
    stage_c_trace_factor: float = 2.0
    unit_house_bound: int = 50

    @property
    def table(self) -> PythagorasTable:
        return PythagorasTable(dict(self.caps))


def parse_config(text: str) -> Config:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    cp.read_string("[main]\n" + text)
    cfg = Config()
    for key, value in cp["main"].items():
        if key.startswith("pythagoras."):
            cfg.caps[int(key.split(".", 1)[1])] = int(value)
        elif key == "enumeration_limit":
            cfg.enumeration_limit = int(value)
        elif key == "precision":
            cfg.precision = int(value)
        elif key == "stage_c_trace_factor":
            cfg.stage_c_trace_factor = float(value)
        elif key == "unit_house_bound":
            cfg.unit_house_bound = int(value)
        else:
            raise ValueError(f"unknown configuration key {key!r}")
    return cfg


def load_config(path=None) -> Config:
    if path is None:
        return Config()
    with open(path) as fh:
        return parse_config(fh.read())
