"""Z/2 Dijkgraaf-Witten invariants of Seifert fibered spaces."""

__version__ = "0.1.0"
