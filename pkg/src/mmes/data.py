"""Coefficient tables for the 7-qubit state sigma_7.

Basis vectors are listed 0-based. ``SIGMA7_COEFFS`` keys are the 1-based
(i, j) pairs of the published table; values are (real, imaginary) parts.
"""

# 4-qubit MMES basis, entries in units of 1/4
MMES4_BASIS = (
    (-1, -1, -1, -1, -1, -1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1),
    (-1, -1, -1, -1, -1, -1, 1, 1, 1, -1, 1, -1, -1, 1, 1, -1),
    (-1, -1, -1, -1, 1, 1, -1, -1, -1, 1, -1, 1, -1, 1, 1, -1),
    (-1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, -1, -1, 1),
    (-1, -1, 1, 1, -1, -1, -1, -1, -1, 1, 1, -1, 1, -1, 1, -1),
    (-1, -1, 1, 1, -1, -1, -1, -1, 1, -1, -1, 1, -1, 1, -1, 1),
    (-1, -1, 1, 1, 1, 1, 1, 1, -1, 1, 1, -1, -1, 1, -1, 1),
    (-1, -1, 1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1),
    (-1, 1, -1, 1, -1, 1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1),
    (-1, 1, -1, 1, -1, 1, 1, -1, 1, 1, 1, 1, -1, -1, 1, 1),
    (-1, 1, -1, 1, 1, -1, -1, 1, -1, -1, -1, -1, -1, -1, 1, 1),
    (-1, 1, -1, 1, 1, -1, -1, 1, 1, 1, 1, 1, 1, 1, -1, -1),
    (-1, 1, 1, -1, -1, 1, -1, 1, -1, -1, 1, 1, 1, 1, 1, 1),
    (-1, 1, 1, -1, -1, 1, -1, 1, 1, 1, -1, -1, -1, -1, -1, -1),
    (-1, 1, 1, -1, 1, -1, 1, -1, -1, -1, 1, 1, -1, -1, -1, -1),
    (-1, 1, 1, -1, 1, -1, 1, -1, 1, 1, -1, -1, 1, 1, 1, 1),
)

# GHZ basis: (index a, index b, sign) for (|a> + sign |b>)/sqrt(2)
GHZ3_BASIS = (
    (0, 7, 1), (0, 7, -1),
    (1, 6, 1), (1, 6, -1),
    (2, 5, 1), (2, 5, -1),
    (3, 4, 1), (3, 4, -1),
)

SIGMA7_COEFFS = {
    (1, 1): (0.313685, -0.019416),
    (1, 4): (-0.124963, 0.00751404),
    (2, 2): (6.16876805e-6, -0.000116371),
    (2, 3): (-0.000103808, -0.0000691072),
    (3, 2): (0.000046695, -0.0000735369),
    (3, 3): (-0.000243151, -0.000195018),
    (4, 1): (0.0193888, 0.313752),
    (4, 4): (-0.00777771, -0.124766),
    (5, 5): (0.0719262, 0.15313),
    (5, 8): (0.152837, -0.0721254),
    (6, 6): (-0.160604, -0.0526771),
    (6, 7): (0.0528744, -0.160803),
    (7, 6): (0.0527307, -0.160861),
    (7, 7): (0.161076, 0.0527179),
    (8, 5): (0.153033, -0.0719374),
    (8, 8): (-0.0723194, -0.153041),
    (9, 5): (0.0529309, -0.160616),
    (9, 8): (0.160688, 0.0526321),
    (10, 6): (-0.072288, -0.153269),
    (10, 7): (-0.15302, 0.0720842),
    (11, 6): (-0.152985, 0.0719888),
    (11, 7): (0.0719157, 0.153028),
    (12, 5): (-0.161016, -0.0527083),
    (12, 8): (0.0526094, -0.160931),
    (13, 1): (0.0128427, -0.0812437),
    (13, 4): (0.032297, -0.204478),
    (14, 2): (-0.087611, -0.17006),
    (14, 3): (0.264942, 0.00134756),
    (15, 2): (-0.245851, -0.124495),
    (15, 3): (-0.132874, 0.115682),
    (16, 1): (-0.0128813, 0.0812742),
    (16, 4): (-0.0323628, 0.204452),
}

SIGMA7_PIME = 0.131952
