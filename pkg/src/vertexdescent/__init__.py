"""Exact vertex algebras over differential rings."""
