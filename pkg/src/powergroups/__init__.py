"""Exact computational toolkit for powerful p-groups and their linearized models.

Submodules:

- ``gfp``        arithmetic and quadratic-residue utilities in GF(p), p odd
- ``altalg``     alternating algebras over GF(p): ideals, quotients,
                 composition series, Jordan-Hoelder machinery
- ``dim3class``  classification of 3-dimensional alternating algebras via
                 3x3 structure matrices and twisted congruence
- ``pgroup``     explicit finite p-group engines, chain predicates and the
                 group/algebra bridge
- ``census``     classification tables and presentation-counting functions
- ``cli``        command-line front end
"""

from powergroups.gfp import PrimeField

__all__ = ["PrimeField"]
