"""Triangulations of closed 3-manifolds and their barycentric subdivisions."""

from .core import (
    EDGES,
    PseudoTriangulation,
    TriangulationBuilder,
    ValidationReport,
    from_simplicial,
    perm_compose,
    perm_inverse,
    perm_sign,
    validate,
)
from .subdivision import DeltaComplex, barycentric

__all__ = [
    "EDGES",
    "PseudoTriangulation",
    "TriangulationBuilder",
    "ValidationReport",
    "from_simplicial",
    "perm_compose",
    "perm_inverse",
    "perm_sign",
    "validate",
    "DeltaComplex",
    "barycentric",
]

from .builders import build_lens, build_seifert, build_surface_times_circle  # noqa: E402
from .homology import integral_h1  # noqa: E402
from .io import format_tri, parse_tri, read_tri, write_tri  # noqa: E402

__all__ += [
    "build_lens",
    "build_seifert",
    "build_surface_times_circle",
    "integral_h1",
    "format_tri",
    "parse_tri",
    "read_tri",
    "write_tri",
]
