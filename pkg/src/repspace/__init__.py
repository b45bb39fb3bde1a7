"""Local models of SU(2) representation spaces of surface groups.

Numerical flat representations and their group cohomology, exact Poisson
algebras of the local models, and detectors (Poisson rank, Zariski tangent
dimension) for the orbit-type strata.
"""

__version__ = "0.1.0"
