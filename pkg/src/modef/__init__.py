"""Executable decision procedures for Euclidean modal logics.

The package classifies logics K5 plus an axiom by whether modal definability
of first-order sentences over their frame class is decidable, decides
definability and correspondence at desk scale, and exposes the supporting
constructions (flowers, galaxies, reductions, characteristic formulas, games,
and frame interpretations) as verified library operations.
"""

__version__ = "0.1.0"
