"""Independent structural oracles.

Everything here checks results produced elsewhere without sharing code
paths with the constructions: squaring residuals, nullity sequences of
powers, Jordan structure recovered from rank data, and a brute-force
pairing search used against the closed-form existence criterion.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import ClusterAmbiguity, DimensionMismatch, TooLarge, UnsupportedEntry
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, spectral_norm
from .pairing import SegreCharacteristic, weyr_to_segre

__all__ = [
    "SquareCheck",
    "JordanData",
    "check_square",
    "weyr_sequence",
    "jordan_structure",
    "brute_force_pairing_exists",
]

_EPS = float(np.finfo(np.float64).eps)


class SquareCheck(NamedTuple):
    ok: bool
    residual: float


def check_square(a, b, tol: Tolerance = DEFAULT_TOL) -> SquareCheck:
    """Whether A^2 = B within max(tol.abs, tol.rel * (1 + ||A||^2))."""
    a = as_matrix(a, square=True)
    b = as_matrix(b, square=True)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    residual = spectral_norm(a @ a - b)
    norm_a = spectral_norm(a)
    return SquareCheck(residual <= max(tol.abs, tol.rel * (1.0 + norm_a**2)), residual)


def weyr_sequence(m, lam: complex, tol: Tolerance = DEFAULT_TOL) -> tuple[int, ...]:
    """Nullities of (M - lam I)^k for k = 1.. until they stabilize.

    Powers are taken of the normalized matrix (M - lam I)/||M - lam I||
    and compared against a noise floor that tracks the accumulated
    rounding of the repeated products, so the sequence stays meaningful
    for non-normal matrices whose powers collapse across many orders of
    magnitude.
    """
    m = as_matrix(m, square=True)
    n = m.shape[0]
    shifted = m - lam * np.eye(n)
    scale = spectral_norm(shifted)
    if scale == 0.0:
        return (n,)
    base = shifted / scale
    power = base
    out: list[int] = []
    prev = 0
    for k in range(1, n + 1):
        sv = np.linalg.svd(power, compute_uv=False)
        noise = 10.0 * k * n * _EPS
        denom = scale**k
        abs_floor = tol.abs / denom if denom > 0.0 else np.inf
        thr = max(abs_floor, tol.rel * float(sv[0]), noise)
        nullity = int(np.sum(sv <= thr))
        if nullity <= prev:
            break
        out.append(nullity)
        prev = nullity
        if nullity == n:
            break
        power = power @ base
    return tuple(out)


@dataclass(frozen=True)
class JordanData:
    """Jordan blocks as (eigenvalue, size) with multiplicity."""

    blocks: tuple[tuple[complex, int], ...]

    def __init__(self, blocks) -> None:
        blocks = tuple(
            sorted(
                ((complex(e), int(s)) for e, s in blocks),
                key=lambda b: (-b[0].real, -b[0].imag, -b[1]),
            )
        )
        if any(s < 1 for _, s in blocks):
            raise ValueError("Jordan block sizes must be positive")
        object.__setattr__(self, "blocks", blocks)

    @property
    def dimension(self) -> int:
        return sum(s for _, s in self.blocks)

    def matches(self, other: "JordanData", rtol: float = 1e-6, atol: float = 1e-8) -> bool:
        """Same block multiset, eigenvalues compared with tolerance."""
        if len(self.blocks) != len(other.blocks):
            return False
        key = lambda b: (b[1], b[0].real, b[0].imag)
        for (ea, sa), (eb, sb) in zip(
            sorted(self.blocks, key=key), sorted(other.blocks, key=key)
        ):
            if sa != sb:
                return False
            if abs(ea - eb) > atol + rtol * max(abs(ea), abs(eb)):
                return False
        return True


def _cluster(points: np.ndarray, radius: float) -> list[np.ndarray]:
    """Transitive grouping of complex points at the given radius."""
    idx = list(range(len(points)))
    parent = list(idx)

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in idx:
        for j in idx[i + 1 :]:
            if abs(points[i] - points[j]) <= radius:
                parent[find(j)] = find(i)
    groups: dict[int, list[int]] = {}
    for i in idx:
        groups.setdefault(find(i), []).append(i)
    return [points[g] for g in groups.values()]


def jordan_structure(m, tol: Tolerance = DEFAULT_TOL) -> JordanData:
    """Jordan blocks of M detected from rank data.

    Eigenvalue estimates only seed candidate clusters; each cluster is
    accepted when the Weyr sequence at its mean accounts for exactly the
    cluster's multiplicity.  The cluster radius escalates until the rank
    data validates the partition, which absorbs the eps^(1/k) eigenvalue
    scatter of defective eigenvalues.
    """
    m = as_matrix(m, square=True)
    n = m.shape[0]
    norm = spectral_norm(m)
    if norm == 0.0:
        return JordanData(((0j, 1),) * n)
    evals = np.linalg.eigvals(m)
    radius = max(10.0 * tol.rel * norm, tol.abs)
    max_radius = 0.05 * norm
    while True:
        clusters = _cluster(evals, radius)
        blocks: list[tuple[complex, int]] = []
        consistent = True
        for pts in clusters:
            lam = complex(np.mean(pts))
            weyr = weyr_sequence(m, lam, tol)
            if not weyr or weyr[-1] != len(pts):
                consistent = False
                break
            for size in weyr_to_segre(weyr).entries:
                blocks.append((lam, size))
        if consistent and sum(s for _, s in blocks) == n:
            return JordanData(blocks)
        if radius > max_radius:
            raise ClusterAmbiguity(
                f"no consistent eigenvalue clustering up to radius {radius:.3e}"
            )
        radius *= 10.0


def brute_force_pairing_exists(sc: SegreCharacteristic) -> bool:
    """Exhaustive backtracking search for a Segre pairing.

    Oracle for the closed-form criterion; admissible moves are pairing a 2
    with a 2 or a 1, a 1 with a 1, or leaving a 1 unpaired.
    """
    if any(e > 2 for e in sc.entries):
        raise UnsupportedEntry("brute-force search covers entries in {1, 2} only")
    if len(sc.entries) > 14:
        raise TooLarge("brute-force search limited to 14 entries")
    return _search(sc.num_ones, sc.num_twos)


@lru_cache(maxsize=None)
def _search(n1: int, n2: int) -> bool:
    if n1 == 0 and n2 == 0:
        return True
    if n2 >= 2 and _search(n1, n2 - 2):
        return True
    if n2 >= 1 and n1 >= 1 and _search(n1 - 1, n2 - 1):
        return True
    if n1 >= 2 and _search(n1 - 2, n2):
        return True
    if n1 >= 1 and _search(n1 - 1, n2):
        return True
    return False
