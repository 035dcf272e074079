"""Physical constants (CODATA 2018, exact where defined) in SI units."""

from scipy import constants as _c

SPEED_OF_LIGHT = _c.c  # 299792458 m/s, exact
HBAR = _c.hbar  # 1.054571817e-34 J s
BOLTZMANN = _c.k  # 1.380649e-23 J/K, exact
ATOMIC_MASS_UNIT = _c.atomic_mass  # 1.66053906660e-27 kg

TWO_PI = 2.0 * _c.pi
