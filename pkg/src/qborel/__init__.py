"""Exact computation of bicovariant differential calculi on q-deformed and classical Borel algebras."""

__version__ = "0.1.0"
