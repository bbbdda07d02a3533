"""Resource ceilings for the exhaustive procedures.

Defaults are generous for desk scale; each can be overridden with an
environment variable or per call by passing an explicit ceiling.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_MAX_VALUATIONS = "MODEF_MAX_VALUATIONS"
ENV_MAX_FRAMES = "MODEF_MAX_FRAMES"
ENV_MAX_MAPS = "MODEF_MAX_MAPS"
ENV_MAX_POSITIONS = "MODEF_MAX_POSITIONS"

DEFAULT_MAX_VALUATIONS = 2 ** 22
DEFAULT_MAX_FRAMES = 200_000
DEFAULT_MAX_MAPS = 5_000_000
DEFAULT_MAX_POSITIONS = 2_000_000


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{name} must be strictly positive, got {value}")
    return value


@dataclass(frozen=True)
class Limits:
    """Ceilings on the sizes of exhaustive searches.

    max_valuations: valuation count in modal validity checks.
    max_frames: frames yielded by the isomorphism-free enumerator.
    max_maps: candidate maps visited by morphism/isomorphism search.
    max_positions: memoized positions in the game solver.
    """

    max_valuations: int = DEFAULT_MAX_VALUATIONS
    max_frames: int = DEFAULT_MAX_FRAMES
    max_maps: int = DEFAULT_MAX_MAPS
    max_positions: int = DEFAULT_MAX_POSITIONS

    @staticmethod
    def from_env() -> "Limits":
        return Limits(
            max_valuations=_env_int(ENV_MAX_VALUATIONS, DEFAULT_MAX_VALUATIONS),
            max_frames=_env_int(ENV_MAX_FRAMES, DEFAULT_MAX_FRAMES),
            max_maps=_env_int(ENV_MAX_MAPS, DEFAULT_MAX_MAPS),
            max_positions=_env_int(ENV_MAX_POSITIONS, DEFAULT_MAX_POSITIONS),
        )


DEFAULT_LIMITS = Limits()
