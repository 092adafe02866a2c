"""Small dense complex matrices (dimension 2 to 4).

Everything here is deliberately independent of the closed forms in the rest
of the package: the cyclic Jacobi eigensolver, the spectral matrix exponential
and the partial trace are the reference route the closed forms are checked
against.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
JACOBI_TOL = 1e-14
_MAX_SWEEPS = 64

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

#: sigma_0..sigma_3 = I, X, Y, Z
PAULIS = (I2, SX, SY, SZ)


class NonHermitianError(ValueError):
    """Raised when a matrix expected to be Hermitian is not, within tolerance."""

    def __init__(self, asymmetry: float, tol: float = HERMITIAN_TOL):
        self.asymmetry = asymmetry
        super().__init__(
            f"matrix is not Hermitian: max|M - M^dagger| = {asymmetry:.3e} > {tol:.1e}"
        )


class NotPositiveError(ValueError):
    """Raised when a density matrix has an eigenvalue below -PSD_TOL."""


class Spectrum(NamedTuple):
    """Eigenvalues in descending order and the matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m, dims=(2, 3, 4)) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise ValueError(f"expected a square matrix of dimension {dims}, got shape {a.shape}")
    return a


def max_asymmetry(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def symmetrize(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return (M + M^dagger)/2, refusing inputs whose asymmetry exceeds ``tol``."""
    a = as_matrix(m)
    asym = max_asymmetry(a)
    if asym > tol:
        raise NonHermitianError(asym, tol)
    return 0.5 * (a + a.conj().T)


def _off_norm(a: np.ndarray) -> float:
    off = a[~np.eye(a.shape[0], dtype=bool)]
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_eig(m, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Eigendecomposition of a small Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies a real Givens rotation that zeroes it. Sweeps stop once the
    off-diagonal Frobenius norm drops below ``JACOBI_TOL`` (relative to the
    matrix norm when that exceeds one).
    """
    a = symmetrize(m, tol)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(_MAX_SWEEPS):
        if _off_norm(a) <= JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = apq / r
                theta = 0.5 * np.arctan2(2.0 * r, (a[q, q] - a[p, p]).real)
                c, s = np.cos(theta), np.sin(theta)
                g = np.eye(n, dtype=complex)
                g[p, p] = c
                g[p, q] = s * phase
                g[q, p] = -s * np.conj(phase)
                g[q, q] = c
                a = g.conj().T @ a @ g
                a[p, q] = a[q, p] = 0.0
                v = v @ g
    else:  # pragma: no cover - Jacobi converges quadratically for n <= 4
        raise RuntimeError("Jacobi eigensolver did not converge")

    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], v[:, order])


def matrix_exp_hermitian(m) -> np.ndarray:
    spec = hermitian_eig(m)
    out = (spec.eigenvectors * np.exp(spec.eigenvalues)) @ spec.eigenvectors.conj().T
    return 0.5 * (out + out.conj().T)


def density_spectrum(rho) -> Spectrum:
    """Spectrum of a density matrix with eigenvalues in [-PSD_TOL, 0) clamped to zero."""
    spec = hermitian_eig(rho)
    q = spec.eigenvalues
    if q[-1] < -PSD_TOL:
        raise NotPositiveError(f"density matrix has eigenvalue {q[-1]:.3e} < -{PSD_TOL:.0e}")
    return Spectrum(np.clip(q, 0.0, None), spec.eigenvectors)


def partial_trace_B(rho) -> np.ndarray:
    """Reduced state of qubit A from a two-qubit (4x4) operator."""
    r = as_matrix(rho, dims=(4,))
    return np.einsum("ajbj->ab", r.reshape(2, 2, 2, 2))


def kron2(a, b) -> np.ndarray:
    """a (x) b with ``a`` acting on qubit A (the left, most significant index)."""
    return np.kron(as_matrix(a, dims=(2,)), as_matrix(b, dims=(2,)))


def validate_density(rho, tol: float = 1e-10) -> np.ndarray:
    r = symmetrize(rho)
    tr = np.trace(r).real
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    return r
