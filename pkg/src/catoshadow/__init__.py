"""Exact Grothendieck-group and coinvariant-algebra shadows of translation,
wall-crossing, projective and tilting functors on category O.

Modules: ``weyl`` (root data, Weyl groups, Bruhat order), ``hecke``
(Hecke algebra, KL polynomials), ``coinv`` (coinvariant algebra, Schubert
classes), ``blocks`` (K-groups of blocks and functor matrices), ``soergel``
(Bott-Samelson modules over the coinvariant algebra), ``verify`` and ``cli``.
"""

from .weyl import ConfigurationError, UsageError, Weight, WeylElem, WeylGroup, weyl_group

__version__ = "0.1.0"

__all__ = ["ConfigurationError", "UsageError", "Weight", "WeylElem", "WeylGroup", "weyl_group", "__version__"]
