"""Simple Lie algebras over F_p in a Chevalley basis, and monogamy checks for sl2-triples."""

__version__ = "0.1.0"
