"""Dense complex-matrix kernels with explicit tolerance semantics.

All approximate comparisons in the package use the single rule
``max(tol.abs, tol.rel * scale)`` where ``scale`` is the spectral norm of
the matrix providing context.  Rank decisions go through the SVD, which is
what keeps the highly non-normal nilpotent matrices elsewhere in the
package well behaved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "spectral_norm",
    "hermitian_part",
    "rank",
    "hermitian_spectrum",
    "kernel_basis",
]


@dataclass(frozen=True)
class Tolerance:
    """Relative/absolute threshold pair.

    ``rel`` scales with the context matrix, ``abs`` is the absolute floor.
    """

    rel: float = 1e-10
    abs: float = 1e-12

    def __post_init__(self) -> None:
        if self.rel < 0.0 or self.abs < 0.0:
            raise ValueError("tolerances must be nonnegative")

    def threshold(self, scale: float) -> float:
        """Comparison threshold for quantities of the given norm scale."""
        return max(self.abs, self.rel * scale)


DEFAULT_TOL = Tolerance()


def as_matrix(m, square: bool = False) -> np.ndarray:
    """Coerce to a finite complex 2-d array, validating shape."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise ValueError(f"expected a nonempty 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    if square and a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def spectral_norm(m) -> float:
    """Largest singular value."""
    a = np.asarray(m, dtype=np.complex128)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def hermitian_part(m: np.ndarray) -> np.ndarray:
    """(M + M*) / 2."""
    return 0.5 * (m + m.conj().T)


def rank(m, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank: singular values above max(abs, rel * sigma_max)."""
    a = as_matrix(m)
    sv = np.linalg.svd(a, compute_uv=False)
    thr = tol.threshold(float(sv[0]) if sv.size else 0.0)
    return int(np.sum(sv > thr))


def hermitian_spectrum(m, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Raises NotHermitian when ``||M - M*||`` exceeds the tolerance at the
    scale of ``M``.
    """
    a = as_matrix(m, square=True)
    if spectral_norm(a - a.conj().T) > tol.threshold(spectral_norm(a)):
        raise NotHermitian("matrix is not Hermitian at the given tolerance")
    w, v = np.linalg.eigh(hermitian_part(a))
    return w, v


def kernel_basis(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal columns spanning the numerical null space of M."""
    a = as_matrix(m)
    _, sv, vh = np.linalg.svd(a)
    thr = tol.threshold(float(sv[0]) if sv.size else 0.0)
    r = int(np.sum(sv > thr))
    return vh[r:, :].conj().T
