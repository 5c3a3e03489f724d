"""Exact rank and crank moments of overpartitions, the quasimodular relations
among them, and the congruences and class-number identities they imply."""

__version__ = "0.1.0"
