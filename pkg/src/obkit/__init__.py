"""obkit: symbolic obstruction calculus for pseudoisotopy invariants
over free products of free and finitely generated abelian groups."""

__version__ = "0.1.0"
