"""How big can a footprint be, and what does it cost?

Walks through the air-to-ground model: the line-of-sight probability as a function
of elevation, the coverage radius set by a path-loss budget, the altitude that goes
with it and the transmit power of smaller footprints.
"""
import math

import numpy as np

from aerialbs import EnvParams, altitude_for_radius, coverage_radius, los_probability, transmit_power

env = EnvParams(f_c=2.0e9)

print("elevation (deg)  P(LoS)")
for deg in (10, 20, 30, 42.44, 60, 90):
    print(f"{deg:>14}  {los_probability(math.radians(deg), env):.4f}")

for fc in (2.0e9, 2.5e9):
    e = EnvParams(f_c=fc)
    R = coverage_radius(100.0, e)
    print(f"\nf_c = {fc / 1e9:.1f} GHz: R = {R:.2f} m at altitude {altitude_for_radius(R, e):.2f} m")

R = coverage_radius(100.0, env)
print("\nradius fraction  power (dBm)  power (mW)")
for frac in np.linspace(0.25, 1.0, 4):
    p = transmit_power(frac * R, env)
    print(f"{frac:>15.2f}  {p:>11.2f}  {10 ** (p / 10):>10.1f}")
# Halving the radius saves 20*log10(2), about 6 dB, i.e. a factor of four in mW.
