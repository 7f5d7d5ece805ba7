"""Central numeric tolerances and limits."""

from __future__ import annotations

from dataclasses import dataclass

EXACT = "exact"
FLOAT = "float"
MODES = (EXACT, FLOAT)

DEFAULT_MAX_ORDER = 48


@dataclass(frozen=True)
class Tolerances:
    """Float-mode thresholds. Ignored entirely in exact mode."""

    rank: float = 1e-9  # pivot / singular value cutoff
    equal: float = 1e-9  # entrywise matrix equality
    ortho: float = 1e-12  # |<u, v>| counted as zero
    parallel: float = 1e-10  # 1 - |cos| below this means parallel
    invariance: float = 1e-9  # allowed |f(gx) - f(x)|

    def __post_init__(self):
        for name in ("rank", "equal", "ortho", "parallel", "invariance"):
            if getattr(self, name) <= 0:
                raise ValueError(f"tolerance {name} must be positive")


DEFAULT_TOL = Tolerances()
