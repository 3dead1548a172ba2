"""Constructions, verifiers, and applications for nearly complete graphs
whose edge sets decompose into large pairwise edge-disjoint induced matchings."""

__version__ = "0.1.0"
