"""Multiplicative dependence of algebraic numbers of bounded height: enumeration,
exact dependence tests and stratified counts."""

__version__ = "0.1.0"
