"""Physical constants used throughout the package (SI units)."""

C_LIGHT = 299_792_458.0          # speed of light in vacuum [m/s]
HBAR = 1.054_571_817e-34         # reduced Planck constant [J s]
