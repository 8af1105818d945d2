"""Glue between the arithmetic classifier and the triangulation oracle."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .classifier import Verdict, classify
from .cohomology import MAX_M, CohomologyProfile, dw_from_triangulation
from .errors import SeifertValidationError
from .seifert import SeifertData, canonicalize, h1
from .triangulation.builders import MAX_TETS, build_seifert, seifert_block_fibers
from .triangulation.core import PseudoTriangulation


@lru_cache(maxsize=8192)
def _seifert_triangulation(fibers: tuple[tuple[int, int], ...], max_tets: int) -> PseudoTriangulation:
    return build_seifert(SeifertData(0, fibers), max_tets=max_tets)


def seifert_triangulation(d: SeifertData, max_tets: int = MAX_TETS) -> PseudoTriangulation:
    """``build_seifert``, shared between fiber orders (the builder sorts fibers anyway)."""
    d = canonicalize(d)
    if d.genus != 0:
        raise SeifertValidationError("triangulations are built for genus 0 only")
    return _seifert_triangulation(seifert_block_fibers(d), max_tets)


@dataclass(frozen=True)
class Comparison:
    data: SeifertData
    verdict: Verdict
    oracle: CohomologyProfile
    snf_m: int
    tet_count: int

    @property
    def z_agrees(self) -> bool:
        return self.verdict.z == self.oracle.z_definition

    @property
    def essential_agrees(self) -> bool:
        return self.verdict.essential == self.oracle.essential

    @property
    def m_agrees(self) -> bool:
        return self.snf_m == self.oracle.m == self.verdict.m

    @property
    def agree(self) -> bool:
        return self.z_agrees and self.essential_agrees and self.m_agrees

    def to_dict(self) -> dict:
        return {
            "genus": self.data.genus,
            "fibers": [[p, q] for p, q in self.data.fibers],
            "agree": self.agree,
            "z_agrees": self.z_agrees,
            "essential_agrees": self.essential_agrees,
            "m_agrees": self.m_agrees,
            "snf_m": self.snf_m,
            "tets": self.tet_count,
            "classifier": self.verdict.to_dict(),
            "oracle": self.oracle.to_dict(),
        }


def compare(d: SeifertData, max_tets: int = MAX_TETS, max_m: int = MAX_M) -> Comparison:
    d = canonicalize(d)
    verdict = classify(d)
    tri = seifert_triangulation(d, max_tets)
    prof = dw_from_triangulation(tri, max_m=max_m)
    return Comparison(d, verdict, prof, h1(d).mod2_dim, tri.tet_count)
