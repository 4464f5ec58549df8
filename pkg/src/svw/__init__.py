"""Exact symbolic computations in N=1 supersymmetric vertex algebras.

Builds the BRST complex for gl(n+1|n) with its odd principal nilpotent,
extracts the W-algebra generators from a column determinant of operators,
and checks the relevant identities with exact rational arithmetic.
"""

from .expression import Expression
from .lca import LambdaPoly
from .engine import Engine
from .liesuper import principal_data, PrincipalData
from .exprio import parse, to_text

__all__ = ["Expression", "LambdaPoly", "Engine", "principal_data", "PrincipalData",
           "parse", "to_text"]
