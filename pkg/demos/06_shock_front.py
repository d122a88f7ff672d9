"""Jump relations on a light-speed front.

Admissible field jumps are transverse circular modes; for them the energy
density, flux, and front speed lock together.  The characteristic determinant
factors as (lambda^2 - 1)^2, so every normal direction carries two speeds at
+1 and two at -1.

Run with: python3 demos/06_shock_front.py
"""

import numpy as np

from bqfield import Medium
from bqfield.shock import (FrontData, admissible_jump, afield_jump_energy,
                           afield_jump_residual, characteristic_determinant,
                           characteristic_roots, theta_jump_residual)

medium = Medium(epsilon=2.0, mu=0.5)
m = np.array([0.0, 0.0, 1.0])

# An admissible jump and a generic inadmissible one.
jump = admissible_jump(m, amplitude=1.0)
front = FrontData(m=m, jump_E=jump.real / np.sqrt(medium.epsilon),
                  jump_H=jump.imag / np.sqrt(medium.mu), medium=medium)
bad = FrontData(m=m, jump_E=np.array([1.0, 0.0, 0.0]), medium=medium)

print("admissible jump residuals:", afield_jump_residual(front))
print("plain E-jump residuals:   ", afield_jump_residual(bad))

laws = afield_jump_energy(front)
print("\nenergy laws on the admissible front:")
for key, val in laws.items():
    print(f"  {key:>12} = {val:.3e}")

# Charge-current jumps ride the conjugate circular mode.
jJ = 0.7 * m + 0.3 * np.conj(admissible_jump(m))
front_theta = FrontData(m=m, jump_rho=0.7, jump_J=jJ, medium=medium)
print("\ncharge-current jump residuals:", theta_jump_residual(front_theta))

# Characteristic speeds for a few random normals.
rng = np.random.default_rng(7)
for _ in range(3):
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    roots = np.sort(characteristic_roots(v))
    print(f"normal {np.round(v, 3)}: speeds {np.round(roots, 12)}")

lam = 0.5
print(f"\ndeterminant at lambda = {lam}: "
      f"{characteristic_determinant(m, lam):.6f}  "
      f"(matches (lambda^2 - 1)^2 = {(lam**2 - 1) ** 2:.6f})")
