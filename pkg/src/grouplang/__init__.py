"""Rational, recognizable, context-free and algebraic subsets of free groups,
free-abelian groups and ``Z^m ⋊ Z``, with the transfer constructions between
a group and its finite-index subgroups."""

__version__ = "0.1.0"
