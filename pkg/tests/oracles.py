"""Frozen reference values for the test suite.

Every float here was computed independently of the library under test,
with 40-digit working precision, from the closed-form quantization
conditions of the four models (transcendental root-finding on the exact
conditions, plus exact rational series algebra where the coefficients
are rational).  They are pinned as literals so the tests cannot drift
with the implementation.
"""

from fractions import Fraction

F = Fraction

# -- exact rational strength-series coefficients (orders 2, 3, 4, ...) --------

POSCHL_TELLER_COEFFS = (F(-1), F(2), F(-5), F(14), F(-42), F(132), F(-429))

SQUARE_COEFFS = (
    F(-1),
    F(4, 3),
    F(-92, 45),
    F(1072, 315),
    F(-84752, 14175),
    F(1020928, 93555),
)

EXPONENTIAL_COEFFS = (
    F(-1),
    F(3),
    F(-143, 12),
    F(3887, 72),
    F(-71303, 270),
)

# pointlike well in a periodic box: coefficient_j(L) * L**(2 - j) is an
# L-independent rational constant (j = 1, 2, 3, ...)
DELTA_BOX_RESCALED = (
    F(-1),
    F(-1, 12),
    F(-1, 180),
    F(-1, 3780),
    F(-1, 226800),
    F(1, 1496880),
)

# -- direct integral coefficients (orders 1..4) -------------------------------

SQUARE_W = (F(-1), F(2, 3), F(-4, 5), F(368, 315))
POSCHL_TELLER_W = (F(-1), F(1), F(-2), F(5))
EXPONENTIAL_W = (F(-1), F(3, 2), F(-29, 6), F(2843, 144))
DELTA_W = (F(-1, 2), F(0), F(0), F(0))

# -- exact ground-state energies ----------------------------------------------

SQUARE_EXACT = {
    0.05: -0.002345133245513719339578,
    0.1: -0.008842139071180674497406,
    0.2: -0.03179636046008202616748,
    0.5: -0.153960796351806285657,
    1.0: -0.4537531658603282480453,
    2.0: -1.207795667726789109091,
    5.0: -3.852504625369540909496,
    10.0: -8.592785275229838909247,
}

EXPONENTIAL_EXACT = {
    0.25: -0.03802696043799028577851,
    0.5: -0.114292022951653199222,
    0.75: -0.2093918849063026087798,
    1.0: -0.316654654927936782565,
    2.0: -0.8172087636857501538725,
}

# pointlike well in a periodic box, keyed by (strength, box length)
DELTA_PERIODIC_EXACT = {
    (2.0, 20.0): -1.000000008244613844,
    (2.0, 12.0): -1.0000245735279878,
    (2.0, 10.0): -1.000181451503979327,
    (2.0, 8.0): -1.0013355944955839,
    (2.0, 6.0): -1.0096784896671424,
    (1.0, 8.0): -0.26660135176896854633,
}

# square well confined to a periodic box (L = 12, strength 1)
SQUARE_IN_BOX_L12 = -0.4544527977986886226

# -- branch points -------------------------------------------------------------

SQUARE_BRANCH = (-1.0, -0.4392288398906451507759796)
POSCHL_TELLER_BRANCH = (-0.25, -0.25)
EXPONENTIAL_BRANCH = (-0.08114353351454569996, -0.1515049754704325139094)

# -- periodic-box perturbation coefficients (L = 10, basis cutoff 200) ----------

RSPT_DELTA_L10_N200 = (-0.1, -0.083080662576, -0.055135076583)

# -- resummation references -----------------------------------------------------

# [3/3] approximant of the order-6 exponential-well series
PADE33_EXPONENTIAL_NUM = (F(0), F(0), F(-1), F(-84049, 20490))
PADE33_EXPONENTIAL_DEN = (F(1), F(145519, 20490), F(384769, 40980), F(-20309, 8196))
# absolute error tolerances of that approximant at strengths 0.25, 0.5, 0.75,
# fixed from the measured errors 6.22e-5, 1.48e-3, 7.70e-3
PADE33_EXPONENTIAL_TOL = (1e-4, 2e-3, 1e-2)

# two-point approximant (3, 2) of the order-6 hyperbolic-secant series, in
# the square-root variable: numerator and denominator coefficients
TPPADE_PT_NUM = (F(0), F(0), F(0), F(0), F(-1), F(-1))
TPPADE_PT_DEN = (F(1), F(1), F(2), F(1))
