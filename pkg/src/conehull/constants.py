"""Numerical tolerances shared by every module.

Kept in one table so that predicates in the hull, the LP and the cone
projection agree with each other.
"""

#: facet inequalities and containment tests
GEOM_TOL = 1e-9
#: unit norm / pairwise orthogonality of bases and facet normals
ORTHO_TOL = 1e-12
#: scaled determinant below which points are not in general position
DEGENERACY_TOL = 1e-10
#: phase-one objective threshold of the simplex method
LP_TOL = 1e-9
#: coefficient threshold for membership in the NNLS active set
ACTIVE_TOL = 1e-10
#: relative threshold on the pivoted-QR diagonal for the face dimension
RANK_TOL = 1e-8
#: residual allowed in the KKT conditions of the cone projection
KKT_TOL = 1e-9
#: absolute tolerance of the adaptive Gauss-Legendre rule
QUAD_ABS_TOL = 1e-12
#: z-score threshold of statistical report rows
Z_THRESHOLD = 4.0
#: visibility threshold of the incremental hull, relative to the point spread
HULL_REL_TOL = 1e-12
