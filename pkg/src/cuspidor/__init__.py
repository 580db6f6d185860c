"""cuspidor: exact combinatorics behind supercuspidal packet constructions.

Modules
-------
exactcore    Smith normal form, finite abelian quotients, Q/Z linear algebra
cyclotomic   exact Q(zeta_N) arithmetic
ffield       GF(p^m), characters, Gauss sums
rootdata     classical root data, Weyl machinery, Tits pairings, bad primes
torus        Frobenius-twisted tori, non-singular characters, bicharacters
cocycle      eta/beta cochain calculus and coherent splittings
clifford     finite abelian extensions, multiplicity-one, irreducible census
dixon        independent character-table oracle
centralizer  parameter centralizers, the D_{2n} commutator verification
charformula  depth-zero chi-data, a-data, Delta_II, Weyl-summed characters
cli          JSON command-line surface (``cuspidor``)
acceptance   the eleven acceptance criteria behind ``cuspidor sweep``
"""

from .exactcore import FinAb, Mat, QV, RankReport, smith_normal_form
from .cyclotomic import Cyc
from .ffield import FiniteField, gauss_sum, mult_character
from .rootdata import RootDatum, WeylElement, build_classical, lambda_pair
from .torus import FrobeniusTorus, TorusCharacter

__all__ = [
    "Cyc", "FinAb", "FiniteField", "FrobeniusTorus", "Mat", "QV",
    "RankReport", "RootDatum", "TorusCharacter", "WeylElement",
    "build_classical", "gauss_sum", "lambda_pair", "mult_character",
    "smith_normal_form",
]

__version__ = "0.1.0"
