"""Exact arithmetic over F_p: dense linear algebra, sparse polynomials, rank certificates."""
