"""coverlab: covering systems of Z with odd moduli and what they buy.

The library verifies covers of the integers, audits tables of primitive
prime divisors of 2^n - 1, constructs CRT residue classes whose members
x keep x - 2^n (and x^2 - F_{3n}/2) away from prime powers, and re-proves
the supporting case analyses with exhaustive modular certificates.
"""

from .covers import CoveringSystem, ResidueClass

__version__ = "0.1.0"

__all__ = ["CoveringSystem", "ResidueClass", "__version__"]
