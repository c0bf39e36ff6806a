"""Stability of H-nonnegative square roots.

A root built from a pairing with any (1,1) pair is unstable: the two
oppositely signed zero blocks can be perturbed into a +a/-a pair that has
no H-nonnegative root at all.  With no (1,1) pairs the root is
conditionally stable, and unconditionally stable exactly when every
remaining zero block carries sign +1.  The perturbation probe samples
H-nonnegative neighbours of B empirically and measures how far the root
has to move.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
import scipy.optimize

from .canonical import CanonicalPair, Transform, canonicalize, synthesize
from .errors import ModeViolation, NoHnnRoot
from .linalg import DEFAULT_TOL, Tolerance, hermitian_part, spectral_norm
from .pairing import HNN, SegrePairing, admissible_for_mode, enumerate_pairings, segre_characteristic
from .roots import P10, P11Hsa, RootPlan, assemble_root, build_plan, existence

__all__ = [
    "UNCONDITIONAL",
    "CONDITIONAL",
    "UNSTABLE",
    "StabilityVerdict",
    "ProbeFailure",
    "ProbeReport",
    "classify_root",
    "best_stability",
    "instability_witness",
    "perturbation_probe",
]

UNCONDITIONAL = "unconditional"
CONDITIONAL = "conditional"
UNSTABLE = "unstable"

_LEVEL_RANK = {UNSTABLE: 0, CONDITIONAL: 1, UNCONDITIONAL: 2}


@dataclass(frozen=True)
class StabilityVerdict:
    level: str
    reason: str

    def __post_init__(self) -> None:
        if self.level not in _LEVEL_RANK:
            raise ValueError(f"unknown stability level {self.level!r}")

    @property
    def rank(self) -> int:
        return _LEVEL_RANK[self.level]


def classify_root(plan: RootPlan, cp: CanonicalPair) -> StabilityVerdict:
    """Stability of the specific H-nonnegative root described by the plan."""
    if plan.mode != HNN:
        raise ModeViolation("stability classification applies to hnn roots only")
    ok, why = existence(cp, HNN)
    if not ok:
        raise NoHnnRoot(why)
    l2 = plan.pairing.l2
    if l2 > 0:
        return StabilityVerdict(
            UNSTABLE, f"pairing contains {l2} (1,1) pair(s) of oppositely signed blocks"
        )
    if cp.s_minus == 0:
        return StabilityVerdict(
            UNCONDITIONAL, "no (1,1) pairs and every (1,0) block has sign +1"
        )
    return StabilityVerdict(
        CONDITIONAL,
        f"no (1,1) pairs but {cp.s_minus} (1,0) block(s) carry sign -1",
    )


def best_stability(cp: CanonicalPair) -> StabilityVerdict:
    """Best stability level achievable over all H-nonnegative roots of cp."""
    ok, why = existence(cp, HNN)
    if not ok:
        raise NoHnnRoot(why)
    if cp.s_minus == 0:
        return StabilityVerdict(
            UNCONDITIONAL, "all-(1,0) pairing has every zero block at sign +1"
        )
    return StabilityVerdict(
        CONDITIONAL,
        "sign -1 zero blocks admit arbitrarily close matrices without hnn roots; "
        "the all-(1,0) pairing is still conditionally stable",
    )


def instability_witness(kind: str, a: float) -> tuple[np.ndarray, np.ndarray]:
    """Continuous families (B(a), H) that lose hnn-rootability for a > 0."""
    if not 0.0 <= a <= 1.0:
        raise ValueError("witness parameter a must lie in [0, 1]")
    if kind == "delta_minus":
        return np.array([[-a]], dtype=np.complex128), np.array([[-1.0]], dtype=np.complex128)
    if kind == "mixed_pair":
        return (
            np.diag([a, -a]).astype(np.complex128),
            np.diag([1.0, -1.0]).astype(np.complex128),
        )
    raise ValueError(f"unknown witness kind {kind!r}")


@dataclass(frozen=True)
class ProbeFailure:
    index: int
    reason: str


@dataclass(frozen=True)
class ProbeReport:
    """Outcome of an empirical stability probe."""

    samples: int
    root_exists_count: int
    max_nearest_root_distance: float
    radius: float
    failures: tuple[ProbeFailure, ...]
    sample_distances: tuple[tuple[float, float], ...]  # (||B - B~||, root distance)


def _random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return hermitian_part(z)


def _psd_clip(p: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(hermitian_part(p))
    return (v * np.maximum(w, 0.0)) @ v.conj().T


def _pairing_distance(
    a_target: np.ndarray,
    cpt: CanonicalPair,
    transform: Transform,
    pairing: SegrePairing,
) -> float:
    """Distance from a_target to the nearest constructible root of this pairing.

    Free parameters: one (alpha > 0, phase) pair per (1,1) pair.  Coarse
    grid (positive portion of {-2,-1,0,1,2}, eight phases) refined by up
    to 50 Nelder-Mead steps.
    """
    s = transform.S
    n_free = pairing.l2

    def root_for(theta: np.ndarray) -> np.ndarray:
        params = []
        k = 0
        for pair in pairing.pairs:
            if pair.as_tuple() == (1, 1):
                alpha, phase = theta[2 * k], theta[2 * k + 1]
                params.append(P11Hsa(alpha, abs(alpha) * np.exp(1j * phase)))
                k += 1
            else:
                params.append(P10())
        plan = build_plan(cpt, pairing, HNN, params=tuple(params))
        root = assemble_root(cpt, plan)
        return s @ root @ np.linalg.inv(s)

    if n_free == 0:
        return spectral_norm(root_for(np.zeros(0)) - a_target)

    def objective(theta: np.ndarray) -> float:
        if any(theta[2 * k] <= 1e-8 for k in range(n_free)):
            return 1e6
        return float(np.linalg.norm(root_for(theta) - a_target))

    alphas = [1.0, 2.0]  # alpha <= 0 infeasible for hnn (1,1) roots
    phases = [2.0 * np.pi * i / 8.0 for i in range(8)]
    best_theta = None
    best_val = np.inf
    for combo in product(alphas, phases, repeat=n_free):
        theta = np.asarray(combo, dtype=float)
        val = objective(theta)
        if val < best_val:
            best_val, best_theta = val, theta
    res = scipy.optimize.minimize(
        objective, best_theta, method="Nelder-Mead", options={"maxiter": 50}
    )
    theta = res.x if res.fun < best_val else best_theta
    return spectral_norm(root_for(theta) - a_target)


def _nearest_root_distance(
    a_target: np.ndarray, cpt: CanonicalPair, transform: Transform
) -> float:
    candidates = [
        p
        for p in enumerate_pairings(segre_characteristic(cpt.zero_part()))
        if admissible_for_mode(p, cpt.zero_part(), HNN)[0]
    ]
    return min(_pairing_distance(a_target, cpt, transform, p) for p in candidates)


def perturbation_probe(
    cp: CanonicalPair,
    plan: RootPlan,
    radius: float,
    samples: int,
    seed: int,
    tol: Tolerance = DEFAULT_TOL,
) -> ProbeReport:
    """Sample H-nonnegative perturbations of B and track the nearest roots.

    Perturbs P = HB inside the PSD cone by at most radius * ||H|| (H is
    kept fixed), takes B~ = H^-1 P~, and for every B~ that still has an
    hnn root records the distance from the planned root of B to the
    nearest constructible root of B~.  Deterministic in the seed.
    """
    if radius <= 0.0:
        raise ValueError("probe radius must be positive")
    b, h = synthesize(cp)
    a = assemble_root(cp, plan)
    p = hermitian_part(h @ b)
    n = b.shape[0]
    norm_h = spectral_norm(h)
    rng = np.random.default_rng(seed)

    failures: list[ProbeFailure] = []
    dists: list[tuple[float, float]] = []
    for i in range(samples):
        e = _random_hermitian(n, rng)
        # magnitude in [1/2, 1] of the half-radius budget; PSD clipping can
        # at most double the move, keeping ||P~ - P|| <= radius * ||H||
        target = 0.5 * radius * norm_h * rng.uniform(0.5, 1.0)
        e *= target / spectral_norm(e)
        p_tilde = _psd_clip(p + e)
        b_tilde = np.linalg.solve(h, p_tilde)
        delta_b = spectral_norm(b_tilde - b)
        try:
            cpt, transform = canonicalize(b_tilde, h, tol)
        except Exception as exc:  # degenerate sample, report and continue
            failures.append(ProbeFailure(i, f"canonicalize failed: {exc}"))
            continue
        ok, why = existence(cpt, HNN)
        if not ok:
            failures.append(ProbeFailure(i, why))
            continue
        dists.append((delta_b, _nearest_root_distance(a, cpt, transform)))

    return ProbeReport(
        samples=samples,
        root_exists_count=len(dists),
        max_nearest_root_distance=max((d for _, d in dists), default=0.0),
        radius=radius,
        failures=tuple(failures),
        sample_distances=tuple(dists),
    )
