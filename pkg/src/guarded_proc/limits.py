"""Search budgets shared by the oracles, the CCS explorer and the CLI."""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

ENV_VAR = "GUARDED_PROC_LIMITS"


class LimitExceeded(RuntimeError):
    """A combinatorial search would exceed its budget."""


@dataclass(frozen=True)
class Limits:
    carrier: int = 8  # max carrier size for enumeration
    cardinality: int = 8  # max size of any enumerated Pfin node
    witness_space: int = 2**20  # max candidate subsets in witness counting
    enumeration: int = 200_000  # max values produced by enumerate()
    states: int = 10_000  # max states explored when compiling CCS

    @classmethod
    def from_env(cls, environ=None) -> "Limits":
        """Read overrides such as ``states=500,witness_space=4096``."""
        environ = os.environ if environ is None else environ
        spec = environ.get(ENV_VAR, "").strip()
        if not spec:
            return cls()
        names = {f.name for f in dataclasses.fields(cls)}
        kwargs = {}
        for part in spec.split(","):
            if not part.strip():
                continue
            name, sep, value = part.partition("=")
            name = name.strip()
            if not sep or name not in names:
                raise ValueError(f"bad {ENV_VAR} entry {part!r}")
            kwargs[name] = int(value)
        return cls(**kwargs)


DEFAULT = Limits()
