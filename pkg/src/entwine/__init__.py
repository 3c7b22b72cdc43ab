"""Exact separability / Frobenius analysis for entwining structures.

Decides, by exact linear algebra over Q or F_p, whether the forgetful
functors attached to a finite-dimensional entwining structure (and the
associated smash products and ring extensions) are separable and/or part of
a Frobenius pair, producing explicit verified witnesses or certificates of
infeasibility.
"""

__version__ = "0.1.0"

from .exactlin import QQ, Field, LinMap, ParseError, ShapeError  # noqa: F401
