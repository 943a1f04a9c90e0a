"""Run configuration, read from the JSON file named by QPMUT_CONFIG."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields

from .errors import ParseError

ENV_VAR = "QPMUT_CONFIG"


@dataclass
class Config:
    trunc: int = 12
    primes: object = "auto"          # "auto" or a list of primes
    max_seeds: int = 10000
    max_terms: int = 10**6
    max_total_dim: int = 10
    iso_draws: int = 5
    iso_seed: int = 0
    out_dir: str | None = None

    def __post_init__(self):
        if not isinstance(self.trunc, int) or self.trunc < 3:
            raise ParseError(f"truncation degree must be an integer >= 3, got {self.trunc!r}", path="/trunc")
        for name in ("max_seeds", "max_terms", "max_total_dim", "iso_draws"):
            v = getattr(self, name)
            if not isinstance(v, int) or v <= 0:
                raise ParseError(f"{name} must be a positive integer, got {v!r}", path=f"/{name}")
        if self.primes != "auto":
            if not isinstance(self.primes, list) or not all(isinstance(p, int) and p >= 2 for p in self.primes):
                raise ParseError("primes must be 'auto' or a list of integers >= 2", path="/primes")

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        extra = set(d) - known - {"schema_version"}
        if extra:
            raise ParseError(f"unknown config keys {sorted(extra)}")
        return cls(**{k: v for k, v in d.items() if k in known})


def load_config(path=None) -> Config:
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return Config()
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"config {path}: invalid JSON: {exc.msg}", offset=exc.pos) from None
    if not isinstance(doc, dict):
        raise ParseError("config must be a JSON object")
    return Config.from_dict(doc)
