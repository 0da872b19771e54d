"""Shared numeric constants for both kernel backends.

Full-precision lifting ladder coefficients for the irreversible 9/7
biorthogonal filter pair (predict/update alternating, then scaling;
approx divides by the scale, detail multiplies). The detail branch
annihilates polynomials up to degree 3 to float precision, which the
vanishing-moment tests rely on.
"""

LIFT_PREDICT_1 = -1.586134342059924
LIFT_UPDATE_1 = -0.052980118572961
LIFT_PREDICT_2 = 0.882911075530934
LIFT_UPDATE_2 = 0.443506852043971
LIFT_SCALE = 1.149604398860241
