"""Tour of the biquaternion algebra: products, conjugation, and the norm form.

Run with: python3 demos/01_algebra.py
"""

import numpy as np

from bqfield import Biquaternion
from bqfield.biquaternion import basis_vector, from_scalar, from_vector, one

# The product of two elements a = f + F and b = g + G is
#   a o b = (f g - (F, G)) + (f G + g F + [F, G])
# with the complex-bilinear dot product, so i e1 squares to +1 even though
# e1 squares to -1.
e1, e2, e3 = basis_vector(0), basis_vector(1), basis_vector(2)

print("e1 o e1 =", (e1 @ e1).scalar, (e1 @ e1).vector)
print("e1 o e2 =", (e1 @ e2).scalar, (e1 @ e2).vector)
ie1 = 1j * e1
print("(i e1) o (i e1) =", (ie1 @ ie1).scalar, (ie1 @ ie1).vector)

a = Biquaternion(np.complex128(2 - 1j), np.array([1.0, 2j, 0.5 + 0.5j]))
b = Biquaternion(np.complex128(0.3), np.array([0.0, 1.0, -2.0 + 1j]))
ab = a @ b
print("\nsample product scalar:", ab.scalar)
print("sample product vector:", ab.vector)

# Conjugation reverses products, and complex conjugation rides along with it:
# (a o b)* = b* o a*.
lhs = (a @ b).conj()
rhs = b.conj() @ a.conj()
print("\nreversal residual:", max(np.abs(lhs.scalar - rhs.scalar).max(),
                                  np.abs(lhs.vector - rhs.vector).max()))

# The norm form sigma(a) = f^2 + (F, F) is multiplicative, which is what makes
# the algebra useful for factorizing second-order operators.
def sigma(x):
    return x.scalar ** 2 + (x.vector ** 2).sum(axis=0)

print("sigma(a) sigma(b) - sigma(ab):", abs(sigma(a) * sigma(b) - sigma(ab)))

# Everything broadcasts over grids: a field of biquaternions multiplies
# pointwise with the same four-component formula.
rng = np.random.default_rng(0)
F = Biquaternion(rng.standard_normal((8, 8)) + 0j, rng.standard_normal((3, 8, 8)) + 0j)
G = 1j * F.conj()
H = F @ G
ident = from_scalar(np.ones((8, 8)))  # the identity, broadcast over the grid
print("\ngrid product shape:", H.shape, " identity check:",
      np.abs((ident @ F).vector - F.vector).max())
print("scalar embedding:", from_scalar(3.0).scalar, "| vector embedding:",
      from_vector(np.array([1.0, 0, 0])).vector)
