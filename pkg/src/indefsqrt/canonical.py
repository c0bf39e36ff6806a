"""Canonical pairs (B, H) for H-nonnegative matrices.

An H-nonnegative matrix is similar, via a simultaneous transformation of B
and the Gramian H, to a direct sum of 1x1 blocks at real eigenvalues and
2x2 nilpotent Jordan blocks.  Positive eigenvalues carry sign +1, negative
eigenvalues sign -1, size-2 blocks at zero always sign +1; only size-1
blocks at zero have a free sign.  This module models that block data,
synthesizes matrix pairs from it, and reduces numeric pairs back to it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    GramianNotHermitian,
    GramianSingular,
    IllConditioned,
    NotHNonnegative,
)
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, hermitian_part, spectral_norm

__all__ = [
    "CanonicalBlock",
    "CanonicalPair",
    "Transform",
    "jordan_matrix",
    "sip_matrix",
    "synthesize",
    "scramble",
    "is_H_selfadjoint",
    "is_H_nonnegative",
    "canonicalize",
    "tri_split",
]


@dataclass(frozen=True)
class CanonicalBlock:
    """One Jordan block with its sign characteristic.

    Sizes are 1 or 2; size 2 happens only at eigenvalue 0 and then the
    sign is +1.  Nonzero eigenvalues force the sign to match sign(lambda).
    """

    eigenvalue: float
    size: int = 1
    sign: int = 1

    def __post_init__(self) -> None:
        if self.size not in (1, 2):
            raise ValueError(f"block size must be 1 or 2, got {self.size}")
        if self.sign not in (1, -1):
            raise ValueError(f"block sign must be +1 or -1, got {self.sign}")
        if not np.isfinite(self.eigenvalue):
            raise ValueError("block eigenvalue must be finite")
        if self.size == 2 and (self.eigenvalue != 0.0 or self.sign != 1):
            raise ValueError("size-2 blocks occur only at eigenvalue 0 with sign +1")
        if self.eigenvalue > 0.0 and self.sign != 1:
            raise ValueError("positive eigenvalues carry sign +1")
        if self.eigenvalue < 0.0 and self.sign != -1:
            raise ValueError("negative eigenvalues carry sign -1")

    def _order_key(self) -> tuple[float, int]:
        # canonical order: descending eigenvalue; at zero: +1 singles,
        # -1 singles, then size-2 blocks
        if self.eigenvalue == 0.0:
            group = {(1, 1): 0, (1, -1): 1, (2, 1): 2}[(self.size, self.sign)]
        else:
            group = 0
        return (-self.eigenvalue, group)


@dataclass(frozen=True)
class CanonicalPair:
    """Multiset of canonical blocks, stored in the canonical order."""

    blocks: tuple[CanonicalBlock, ...]

    def __init__(self, blocks) -> None:
        blocks = tuple(sorted(blocks, key=CanonicalBlock._order_key))
        object.__setattr__(self, "blocks", blocks)

    @property
    def dimension(self) -> int:
        return sum(b.size for b in self.blocks)

    @property
    def q(self) -> int:
        """Number of blocks at positive eigenvalues."""
        return sum(1 for b in self.blocks if b.eigenvalue > 0.0)

    @property
    def r(self) -> int:
        """Number of blocks at nonzero eigenvalues."""
        return sum(1 for b in self.blocks if b.eigenvalue != 0.0)

    @property
    def s(self) -> int:
        """Number of size-1 blocks at eigenvalue zero."""
        return sum(1 for b in self.blocks if b.eigenvalue == 0.0 and b.size == 1)

    @property
    def t(self) -> int:
        """Number of size-2 blocks at eigenvalue zero."""
        return sum(1 for b in self.blocks if b.size == 2)

    @property
    def s_plus(self) -> int:
        return sum(
            1
            for b in self.blocks
            if b.eigenvalue == 0.0 and b.size == 1 and b.sign == 1
        )

    @property
    def s_minus(self) -> int:
        return sum(
            1
            for b in self.blocks
            if b.eigenvalue == 0.0 and b.size == 1 and b.sign == -1
        )

    def zero_part(self) -> "CanonicalPair":
        return CanonicalPair(b for b in self.blocks if b.eigenvalue == 0.0)

    def matches(self, other: "CanonicalPair", rtol: float = 1e-6, atol: float = 0.0) -> bool:
        """Block-multiset equality with a relative eigenvalue tolerance."""
        if len(self.blocks) != len(other.blocks):
            return False
        for a, b in zip(self.blocks, other.blocks):
            if a.size != b.size or a.sign != b.sign:
                return False
            if abs(a.eigenvalue - b.eigenvalue) > atol + rtol * max(
                abs(a.eigenvalue), abs(b.eigenvalue)
            ):
                return False
        return True


@dataclass(frozen=True, eq=False)
class Transform:
    """Invertible change of basis: B -> S^-1 B S, H -> S* H S."""

    S: np.ndarray

    @property
    def cond(self) -> float:
        return float(np.linalg.cond(self.S, 2))

    def inverse_similarity(self, m: np.ndarray) -> np.ndarray:
        """S^-1 M S."""
        return np.linalg.solve(self.S, m @ self.S)

    def congruence(self, m: np.ndarray) -> np.ndarray:
        """S* M S."""
        return self.S.conj().T @ m @ self.S


def jordan_matrix(eigenvalue: complex, size: int) -> np.ndarray:
    """Jordan block J_size(eigenvalue)."""
    j = np.eye(size, k=1, dtype=np.complex128)
    j += eigenvalue * np.eye(size, dtype=np.complex128)
    return j


def sip_matrix(size: int) -> np.ndarray:
    """Anti-diagonal matrix of ones (the sip matrix Q_n)."""
    return np.fliplr(np.eye(size, dtype=np.complex128))


def synthesize(cp: CanonicalPair) -> tuple[np.ndarray, np.ndarray]:
    """Build (B, H) realizing the canonical pair, blocks in canonical order."""
    if cp.dimension == 0:
        raise ValueError("cannot synthesize an empty canonical pair")
    b_blocks = [jordan_matrix(b.eigenvalue, b.size) for b in cp.blocks]
    h_blocks = [b.sign * sip_matrix(b.size) for b in cp.blocks]
    return scipy.linalg.block_diag(*b_blocks), scipy.linalg.block_diag(*h_blocks)


def _random_invertible(n: int, rng: np.random.Generator, cond_cap: float) -> np.ndarray:
    """Random invertible matrix with condition number at most cond_cap."""

    def haar_unitary() -> np.ndarray:
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        q, r = np.linalg.qr(z)
        d = np.diagonal(r)
        return q * (d / np.abs(d))

    half = 0.5 * np.log(cond_cap)
    sigma = np.exp(rng.uniform(-half, half, size=n))
    return (haar_unitary() * sigma) @ haar_unitary()


def scramble(
    cp: CanonicalPair, seed: int, cond_cap: float = 100.0
) -> tuple[np.ndarray, np.ndarray, Transform]:
    """Hide a canonical pair behind a random similarity/congruence.

    Returns (S^-1 B S, S* H S, S) for a seeded random invertible S with
    condition number at most ``cond_cap``.
    """
    if cond_cap <= 1.0:
        raise ValueError("cond_cap must exceed 1")
    b, h = synthesize(cp)
    rng = np.random.default_rng(seed)
    s = _random_invertible(cp.dimension, rng, cond_cap)
    return np.linalg.solve(s, b @ s), s.conj().T @ h @ s, Transform(s)


def _check_gramian(h: np.ndarray, tol: Tolerance) -> None:
    norm_h = spectral_norm(h)
    if spectral_norm(h - h.conj().T) > tol.threshold(norm_h):
        raise GramianNotHermitian("H is not Hermitian at the given tolerance")
    sv = np.linalg.svd(h, compute_uv=False)
    if sv[-1] <= tol.threshold(float(sv[0])):
        raise GramianSingular("H is numerically singular")


def is_H_selfadjoint(b, h, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff HB is Hermitian, i.e. HB = B*H."""
    b = as_matrix(b, square=True)
    h = as_matrix(h, square=True)
    if b.shape != h.shape:
        raise ValueError("B and H must have equal dimensions")
    _check_gramian(h, tol)
    hb = h @ b
    return spectral_norm(hb - hb.conj().T) <= tol.threshold(spectral_norm(hb))


def is_H_nonnegative(b, h, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff B is H-selfadjoint and HB is positive semidefinite."""
    b = as_matrix(b, square=True)
    h = as_matrix(h, square=True)
    if not is_H_selfadjoint(b, h, tol):
        return False
    hb = hermitian_part(h @ b)
    eigs = np.linalg.eigvalsh(hb)
    return bool(eigs[0] >= -tol.threshold(spectral_norm(hb)))


def tri_split(cp: CanonicalPair) -> tuple[CanonicalPair, CanonicalPair, CanonicalPair]:
    """Split block data by eigenvalue sign: (negative, zero, positive)."""
    neg = CanonicalPair(b for b in cp.blocks if b.eigenvalue < 0.0)
    zero = CanonicalPair(b for b in cp.blocks if b.eigenvalue == 0.0)
    pos = CanonicalPair(b for b in cp.blocks if b.eigenvalue > 0.0)
    return neg, zero, pos


def canonicalize(
    b, h, tol: Tolerance = DEFAULT_TOL
) -> tuple[CanonicalPair, Transform]:
    """Reduce an H-nonnegative pair (B, H) to canonical block data.

    Returns (cp, S) with S^-1 B S and S* H S equal to synthesize(cp) up to
    roundoff.  The generalized zero eigenspace is identified as ker(B^2)
    through the SVD, which is immune to the eigenvalue scatter of the 2x2
    nilpotent blocks; the nonzero spectrum is resolved by a single
    Hermitian-definite generalized eigenproblem, which also makes the
    eigenvectors H-orthogonal inside eigenvalue clusters.
    """
    b = as_matrix(b, square=True)
    h = as_matrix(h, square=True)
    if not is_H_nonnegative(b, h, tol):
        raise NotHNonnegative("the pair (B, H) is not H-nonnegative")

    n = b.shape[0]
    norm_b = spectral_norm(b)
    zero_thr = tol.threshold(norm_b)

    b2 = b @ b
    _, s2, vh2 = np.linalg.svd(b2)
    thr2 = tol.threshold(float(s2[0]))
    m1 = int(np.sum(s2 > thr2))
    m0 = n - m1

    # (block, [columns of S]) accumulated in arbitrary order, sorted at the end
    entries: list[tuple[CanonicalBlock, list[np.ndarray]]] = []

    if m1:
        # range(B^2) is the B-invariant complement of the zero eigenspace
        u1 = np.linalg.svd(b2)[0][:, :m1]
        g1 = hermitian_part(u1.conj().T @ h @ u1)
        p1 = hermitian_part(u1.conj().T @ (h @ b) @ u1)
        try:
            # H x = nu (HB) x on range(B^2); HB is positive definite there
            _, w = scipy.linalg.eigh(g1, p1)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            raise IllConditioned(f"nonzero spectral part is degenerate: {exc}") from exc
        x = u1 @ w
        for j in range(m1):
            col = x[:, j]
            c = float(np.real(col.conj() @ h @ col))
            if c == 0.0:
                raise IllConditioned("H degenerates on a nonzero eigenvector")
            mu = 1.0 / c
            if abs(mu) <= zero_thr:
                raise IllConditioned(
                    f"eigenvalue {mu:.3e} falls inside the zero cluster at tolerance"
                )
            sign = 1 if c > 0.0 else -1
            if sign != (1 if mu > 0.0 else -1):
                raise IllConditioned("sign characteristic inconsistent with eigenvalue")
            entries.append((CanonicalBlock(mu, 1, sign), [col / np.sqrt(abs(c))]))

    if m0:
        k0 = vh2[m1:, :].conj().T  # orthonormal basis of ker(B^2)
        nil = k0.conj().T @ b @ k0
        g0 = hermitian_part(k0.conj().T @ h @ k0)
        gn = g0 @ nil

        un_, sn, vhn = np.linalg.svd(nil)
        thr_n = tol.threshold(norm_b)  # ambient scale: nil is B compressed
        t = int(np.sum(sn > thr_n))
        s = m0 - 2 * t
        if s < 0:
            raise IllConditioned("zero-part rank inconsistent with its dimension")

        tops = np.zeros((m0, 0), dtype=np.complex128)
        bottoms = np.zeros((m0, 0), dtype=np.complex128)
        if t:
            tops = vhn[:t, :].conj().T  # spans a complement of ker(nil)
            gram = hermitian_part(tops.conj().T @ gn @ tops)
            try:
                low = np.linalg.cholesky(gram)
            except np.linalg.LinAlgError as exc:
                raise IllConditioned(
                    "chain coupling form is not positive definite"
                ) from exc
            tops = tops @ np.linalg.inv(low).conj().T
            bottoms = nil @ tops  # now tops* G bottoms = I exactly
            cross = tops.conj().T @ g0 @ tops
            tops = tops - bottoms @ (cross / 2.0)  # kills [v_i, v_j]

        if s:
            kerb = vhn[t:, :].conj().T  # ker(nil), dimension s + t
            sing = kerb
            if t:
                # kernel vectors are automatically H-orthogonal to the chain
                # bottoms; remove their components along the chain tops
                sing = kerb - bottoms @ (tops.conj().T @ g0 @ kerb)
            ux, sx, _ = np.linalg.svd(sing, full_matrices=False)
            if sx[s - 1] <= tol.threshold(float(sx[0])):
                raise IllConditioned("cannot separate size-1 zero blocks from chains")
            wb = ux[:, :s]
            gs = hermitian_part(wb.conj().T @ g0 @ wb)
            d, z = np.linalg.eigh(gs)
            scale = float(np.max(np.abs(d)))
            for j in range(s):
                if abs(d[j]) <= tol.threshold(scale):
                    raise IllConditioned("compressed Gramian on ker(B) is degenerate")
                col = k0 @ (wb @ z[:, j]) / np.sqrt(abs(d[j]))
                sign = 1 if d[j] > 0.0 else -1
                entries.append((CanonicalBlock(0.0, 1, sign), [col]))

        for i in range(t):
            entries.append(
                (CanonicalBlock(0.0, 2, 1), [k0 @ bottoms[:, i], k0 @ tops[:, i]])
            )

    entries.sort(key=lambda item: item[0]._order_key())
    cp = CanonicalPair(block for block, _ in entries)
    s_mat = np.column_stack([col for _, cols in entries for col in cols])
    transform = Transform(s_mat)

    bc, hc = synthesize(cp)
    scale = max(1.0, norm_b, spectral_norm(h))
    budget = tol.threshold(scale) * max(transform.cond**2, 1.0) * 100.0
    res_b = spectral_norm(transform.inverse_similarity(b) - bc)
    res_h = spectral_norm(transform.congruence(h) - hc)
    if res_b > budget or res_h > budget:
        raise IllConditioned(
            f"canonical reduction residual too large (B: {res_b:.2e}, H: {res_h:.2e})"
        )
    return cp, transform
