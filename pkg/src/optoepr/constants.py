"""CODATA 2018 physical constants (SI units).

All numerical physics in the package goes through this table so that every
module agrees bit-for-bit on the fundamental constants.
"""

# Reduced Planck constant [J s]
HBAR = 1.054571817e-34

# Boltzmann constant [J/K] (exact by SI definition)
K_B = 1.380649e-23

# Speed of light in vacuum [m/s] (exact by SI definition)
C_LIGHT = 299792458.0
