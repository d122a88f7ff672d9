"""Discrete nabla on a periodic grid and the mutual complex gradients D+-.

Two interchangeable schemes sit behind one interface:

* ``spectral`` -- exact wavenumber multiplication via FFT (default; the odd
  Nyquist wavenumber is zeroed so first derivatives of real data stay real),
* ``central4`` -- fourth-order centred differences with periodic wraparound.

The mutual gradients act on biquaternions F = f + F as

    D+- F = (dF/dtau -+ i div F) + (dF/dtau_vec +- i grad f +- i curl F)

and factor the wave operator: D- D+ = D+ D- = d^2/dtau^2 - Laplacian.  Time
derivatives are not discretised here; callers supply them (analytically in
tests, from stored history in diagnostics).
"""

from __future__ import annotations

import numpy as np
from scipy import fft as sfft

from .biquaternion import Biquaternion

__all__ = ["Nabla", "apply_dplus", "apply_dminus", "apply_box"]

_AXES = (-3, -2, -1)


class Nabla:
    """Spatial derivative bundle bound to a grid and a scheme.

    Parameters
    ----------
    grid : Grid
        Periodic box; only n, L, h are used.
    scheme : str
        "spectral" or "central4".
    workers : int
        Thread count handed to scipy.fft (spectral scheme only).
    """

    schemes = ("spectral", "central4")

    def __init__(self, grid, scheme: str = "spectral", workers: int = 1):
        assert scheme in self.schemes, f"unknown scheme {scheme!r}, pick from {self.schemes}"
        self.grid = grid
        self.scheme = scheme
        self.workers = int(workers)
        if scheme == "spectral":
            # ik arrays for first derivatives (odd Nyquist zeroed), |k|^2 for the
            # Laplacian (Nyquist kept: even derivative), and the 2/3-rule mask.
            iks = []
            k2s = []
            keep = []
            for ax, (n, h) in enumerate(zip(grid.n, grid.h)):
                k = 2 * np.pi * np.fft.fftfreq(n, d=h)
                k2s.append(k**2)
                kd = k.copy()
                if n % 2 == 0:
                    kd[n // 2] = 0.0
                iks.append(1j * kd)
                m = np.abs(np.fft.fftfreq(n, d=1.0 / n)) <= n / 3
                keep.append(m)
            shape = [(-1, 1, 1), (1, -1, 1), (1, 1, -1)]
            self._ik = [a.reshape(s) for a, s in zip(iks, shape)]
            self._k2 = sum(a.reshape(s) for a, s in zip(k2s, shape))
            self._dealias = np.ones(grid.n, dtype=bool)
            for m, s in zip(keep, shape):
                self._dealias &= m.reshape(s)

    # -- transforms ----------------------------------------------------------
    def fftn(self, f):
        return sfft.fftn(f, axes=_AXES, workers=self.workers)

    def ifftn(self, fh):
        return sfft.ifftn(fh, axes=_AXES, workers=self.workers)

    # -- central difference helper -------------------------------------------
    def _diff4(self, f, axis: int):
        h = self.grid.h[axis]
        ax = axis - 3  # operate on the trailing grid axes
        return (
            -np.roll(f, -2, axis=ax)
            + 8 * np.roll(f, -1, axis=ax)
            - 8 * np.roll(f, 1, axis=ax)
            + np.roll(f, 2, axis=ax)
        ) / (12 * h)

    def _diff2_4(self, f, axis: int):
        h = self.grid.h[axis]
        ax = axis - 3
        return (
            -np.roll(f, -2, axis=ax)
            + 16 * np.roll(f, -1, axis=ax)
            - 30 * f
            + 16 * np.roll(f, 1, axis=ax)
            - np.roll(f, 2, axis=ax)
        ) / (12 * h * h)

    # -- first-order operators -------------------------------------------------
    def grad(self, f):
        """Gradient of a scalar field, shape (3, nx, ny, nz)."""
        if self.scheme == "spectral":
            fh = self.fftn(f)
            return self.ifftn(np.stack([ik * fh for ik in self._ik]))
        return np.stack([self._diff4(f, ax) for ax in range(3)])

    def div(self, F):
        """Divergence of a vector field (component axis first)."""
        if self.scheme == "spectral":
            Fh = self.fftn(F)
            return self.ifftn(sum(self._ik[ax] * Fh[ax] for ax in range(3)))
        return sum(self._diff4(F[ax], ax) for ax in range(3))

    def curl(self, F):
        """Curl of a vector field (component axis first)."""
        if self.scheme == "spectral":
            Fh = self.fftn(F)
            ik = self._ik
            return self.ifftn(
                np.stack(
                    [
                        ik[1] * Fh[2] - ik[2] * Fh[1],
                        ik[2] * Fh[0] - ik[0] * Fh[2],
                        ik[0] * Fh[1] - ik[1] * Fh[0],
                    ]
                )
            )
        d = self._diff4
        return np.stack(
            [
                d(F[2], 1) - d(F[1], 2),
                d(F[0], 2) - d(F[2], 0),
                d(F[1], 0) - d(F[0], 1),
            ]
        )

    def laplacian(self, f):
        """Laplacian of a scalar or componentwise of a vector field."""
        if self.scheme == "spectral":
            return self.ifftn(-self._k2 * self.fftn(f))
        return sum(self._diff2_4(f, ax) for ax in range(3))

    def dealias(self, f):
        """2/3-rule filter: zero every mode with any |k_i| > n_i/3.

        Applied to quadratic products only; with band-limited inputs this
        removes the aliased tail exactly.
        """
        if self.scheme != "spectral":
            return f
        fh = self.fftn(f)
        fh *= self._dealias
        return self.ifftn(fh)


def apply_dplus(nabla: Nabla, F: Biquaternion, dF_dtau: Biquaternion) -> Biquaternion:
    """D+ F = (f_tau - i div F) + (F_tau + i grad f + i curl F)."""
    return Biquaternion(
        dF_dtau.scalar - 1j * nabla.div(F.vector),
        dF_dtau.vector + 1j * nabla.grad(F.scalar) + 1j * nabla.curl(F.vector),
    )


def apply_dminus(nabla: Nabla, F: Biquaternion, dF_dtau: Biquaternion) -> Biquaternion:
    """D- F = (f_tau + i div F) + (F_tau - i grad f - i curl F)."""
    return Biquaternion(
        dF_dtau.scalar + 1j * nabla.div(F.vector),
        dF_dtau.vector - 1j * nabla.grad(F.scalar) - 1j * nabla.curl(F.vector),
    )


def apply_box(nabla: Nabla, F: Biquaternion, d2F_dtau2: Biquaternion) -> Biquaternion:
    """Wave operator (d^2/dtau^2 - Laplacian) F, componentwise."""
    return Biquaternion(
        d2F_dtau2.scalar - nabla.laplacian(F.scalar),
        d2F_dtau2.vector - nabla.laplacian(F.vector),
    )
