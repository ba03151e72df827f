"""Exact-arithmetic toolkit for labeled Dynkin-type diagrams.

Subpackage map:

- diagrams: labeled diagrams, subdiagrams, quotients, collapse/lift
- nested: nested sets, maximal nested sets, rank data, composition
- assoc: face posets of nested-set complexes, coherence and
  factorization checking over group carriers
- cartan: generalized Cartan matrices, symmetrizers, realizations,
  orthogonal-complement structures with feasibility certificates
- series: truncated formal power series with exact rational matrix
  coefficients
- liealg: finite-type Chevalley algebras with integer structure
  constants and the normalized invariant form
- reps: finite-dimensional irreducibles, triple products of the braid
  generators, Casimir data, invariant tensors on module pairs
- parabolic: orthogonal complements of the doubled subdiagram part
  inside the Borel halves of the double
- twist: truncated induced modules, intertwiners, one-jets of relative
  twists and their antisymmetrized parts
- cli: command-line interface (`dynkit ...`)
"""

__version__ = "0.1.0"

from .diagrams import Diagram, Subdiagram, QuotientDiagram  # noqa: F401
