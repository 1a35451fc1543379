"""Resource caps shared by the argument builder and the solvers."""

from __future__ import annotations

from dataclasses import dataclass


class CapExceeded(RuntimeError):
    """A configured resource cap or search budget was exceeded."""


@dataclass(frozen=True)
class Limits:
    max_atoms: int = 4
    max_arguments: int = 20_000
    # grounded and stable scale further than the enumerating semantics
    max_nodes_light: int = 20_000
    max_nodes_enum: int = 4_000
    search_budget: int = 2_000_000

    def __post_init__(self):
        for name in ("max_atoms", "max_arguments", "max_nodes_light", "max_nodes_enum", "search_budget"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_LIMITS = Limits()
