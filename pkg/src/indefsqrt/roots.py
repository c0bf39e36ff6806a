"""Explicit square roots assembled from per-pair parametric templates.

Each Segre pair maps to a small template whose square is the corresponding
canonical block: a (1,1) root of the 2x2 zero matrix, a (2,1) root of
J2(0)+J1(0), a (2,2) root of J2(0)+J2(0).  Full roots are direct sums of
these templates scattered into the physical block positions, plus scalar
roots +-sqrt(lambda) (or +-i sqrt(-lambda)) at the nonzero eigenvalues.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Union

import numpy as np

from .canonical import CanonicalPair, jordan_matrix, synthesize
from .errors import ConstraintViolation, ExistenceViolation, ModeViolation
from .pairing import (
    GENERAL,
    HNN,
    HSA,
    SegrePair,
    SegrePairing,
    _check_mode,
    admissible_for_mode,
    enumerate_pairings,
    segre_characteristic,
)

__all__ = [
    "P10",
    "P11",
    "P11Upper",
    "P21",
    "P22",
    "P22Alt",
    "P11Hsa",
    "P21Hsa",
    "RootParams",
    "RootSignChoice",
    "RootPlan",
    "params_norm",
    "root_block",
    "root_block_structured",
    "target_block",
    "sample_params",
    "build_plan",
    "assemble_root",
    "PredictedBlock",
    "predicted_jordan_form",
    "existence",
]

_MODULUS_SLACK = 1e-9  # construction noise allowance for |beta| constraints


@dataclass(frozen=True)
class P10:
    """Pair (1,0): the only root of [0] is [0]; no free parameters."""

    kind = "p10"

    def free_values(self) -> tuple[complex, ...]:
        return ()


@dataclass(frozen=True)
class P11:
    """Pair (1,1): [[a, -a^2/b], [b, -a]] with b != 0."""

    alpha: complex
    beta: complex
    kind = "p11"

    def __post_init__(self) -> None:
        if self.beta == 0:
            raise ConstraintViolation("p11 requires beta != 0")

    def free_values(self) -> tuple[complex, ...]:
        return (self.alpha, self.beta)


@dataclass(frozen=True)
class P11Upper:
    """Pair (1,1), upper-triangular family [[0, a], [0, 0]]; a = 0 excluded."""

    alpha: complex
    kind = "p11_upper"

    def __post_init__(self) -> None:
        # a = 0 would duplicate the root of two (1,0) pairs; excluded so that
        # every pairing determines the Jordan form of its roots uniquely
        if self.alpha == 0:
            raise ConstraintViolation("p11_upper requires alpha != 0")

    def free_values(self) -> tuple[complex, ...]:
        return (self.alpha,)


@dataclass(frozen=True)
class P21:
    """Pair (2,1): [[0, a, b], [0, 0, 0], [0, 1/b, 0]] with b != 0."""

    alpha: complex
    beta: complex
    kind = "p21"

    def __post_init__(self) -> None:
        if self.beta == 0:
            raise ConstraintViolation("p21 requires beta != 0")

    def free_values(self) -> tuple[complex, ...]:
        return (self.alpha, self.beta)


@dataclass(frozen=True)
class P22:
    """Pair (2,2), lower family; a1 != 0, the corner entry is dependent."""

    alpha1: complex
    alpha2: complex
    alpha3: complex
    alpha4: complex
    kind = "p22"

    def __post_init__(self) -> None:
        if self.alpha1 == 0:
            raise ConstraintViolation("p22 requires alpha1 != 0")

    @property
    def beta(self) -> complex:
        """Dependent corner entry, always recomputed from the free values."""
        a1, a2, a3, a4 = self.alpha1, self.alpha2, self.alpha3, self.alpha4
        return (a1 + a3 * a3 * a2 - 2 * a1 * a3 * a4) / (a1 * a1)

    def free_values(self) -> tuple[complex, ...]:
        return (self.alpha1, self.alpha2, self.alpha3, self.alpha4)


@dataclass(frozen=True)
class P22Alt:
    """Pair (2,2), strictly upper family; g1, g2 != 0."""

    gamma1: complex
    gamma2: complex
    gamma3: complex
    kind = "p22_alt"

    def __post_init__(self) -> None:
        if self.gamma1 == 0 or self.gamma2 == 0:
            raise ConstraintViolation("p22_alt requires gamma1 != 0 and gamma2 != 0")

    def free_values(self) -> tuple[complex, ...]:
        return (self.gamma1, self.gamma2, self.gamma3)


@dataclass(frozen=True)
class P11Hsa:
    """Pair (1,1) with opposite signs: real a != 0, |b| = |a|."""

    alpha: float
    beta: complex
    kind = "p11_hsa"

    def __post_init__(self) -> None:
        if self.alpha == 0:
            raise ConstraintViolation("p11_hsa requires alpha != 0")
        if abs(abs(self.beta) - abs(self.alpha)) > _MODULUS_SLACK * (1 + abs(self.alpha)):
            raise ConstraintViolation("p11_hsa requires |beta| = |alpha|")

    def free_values(self) -> tuple[complex, ...]:
        return (complex(self.alpha), self.beta)


@dataclass(frozen=True)
class P21Hsa:
    """Pair (2,1) with both signs +1: real a, |b| = 1."""

    alpha: float
    beta: complex
    kind = "p21_hsa"

    def __post_init__(self) -> None:
        if abs(abs(self.beta) - 1.0) > _MODULUS_SLACK:
            raise ConstraintViolation("p21_hsa requires |beta| = 1")

    def free_values(self) -> tuple[complex, ...]:
        return (complex(self.alpha), self.beta)


RootParams = Union[P10, P11, P11Upper, P21, P22, P22Alt, P11Hsa, P21Hsa]

_PAIR_KINDS = {
    (1, 0): ("p10",),
    (1, 1): ("p11", "p11_upper", "p11_hsa"),
    (2, 1): ("p21", "p21_hsa"),
    (2, 2): ("p22", "p22_alt"),
}

_HSA_KINDS = {
    (1, 0): "p10",
    (1, 1): "p11_hsa",
    (2, 1): "p21_hsa",
}


def params_norm(params: RootParams) -> float:
    """Euclidean norm of the free parameter vector."""
    vals = params.free_values()
    return float(np.sqrt(sum(abs(v) ** 2 for v in vals)))


def target_block(pair: SegrePair) -> np.ndarray:
    """The canonical block a template for this pair must square to."""
    size = pair.first + pair.second
    out = np.zeros((size, size), dtype=np.complex128)
    if pair.first == 2:
        out[0, 1] = 1.0
    if pair.second == 2:
        out[2, 3] = 1.0
    return out


def root_block(pair: SegrePair, params: RootParams) -> np.ndarray:
    """Template matrix for one Segre pair; its square is target_block(pair)."""
    if params.kind not in _PAIR_KINDS.get(pair.as_tuple(), ()):
        raise ConstraintViolation(
            f"params of kind {params.kind!r} do not fit pair {pair.as_tuple()}"
        )
    if isinstance(params, P10):
        return np.zeros((1, 1), dtype=np.complex128)
    if isinstance(params, P11):
        a, b = params.alpha, params.beta
        return np.array([[a, -a * a / b], [b, -a]], dtype=np.complex128)
    if isinstance(params, P11Upper):
        return np.array([[0.0, params.alpha], [0.0, 0.0]], dtype=np.complex128)
    if isinstance(params, P11Hsa):
        a, b = params.alpha, params.beta
        return np.array([[a, -np.conj(b)], [b, -a]], dtype=np.complex128)
    if isinstance(params, (P21, P21Hsa)):
        a, b = params.alpha, params.beta
        return np.array(
            [[0.0, a, b], [0.0, 0.0, 0.0], [0.0, 1.0 / b, 0.0]], dtype=np.complex128
        )
    if isinstance(params, P22):
        a1, a2, a3, a4 = params.alpha1, params.alpha2, params.alpha3, params.alpha4
        bb = params.beta
        return np.array(
            [
                [-a3, -a4, -a3 * a3 / a1, bb],
                [0.0, -a3, 0.0, -a3 * a3 / a1],
                [a1, a2, a3, a4],
                [0.0, a1, 0.0, a3],
            ],
            dtype=np.complex128,
        )
    if isinstance(params, P22Alt):
        g1, g2, g3 = params.gamma1, params.gamma2, params.gamma3
        return np.array(
            [
                [0.0, g1, g2, g3],
                [0.0, 0.0, 0.0, g2],
                [0.0, 1.0 / g2, 0.0, -g1],
                [0.0, 0.0, 0.0, 0.0],
            ],
            dtype=np.complex128,
        )
    raise ConstraintViolation(f"unknown params kind {params.kind!r}")


def root_block_structured(pair: SegrePair, params: RootParams, mode: str) -> np.ndarray:
    """Template for a structured root; selfadjoint w.r.t. the local Gramian.

    The local Gramian is [1] for (1,0), diag(1, -1) for (1,1) (opposite
    signs) and Q2 + Q1 for (2,1).  Pairs (2,2) never admit structured
    roots; (2,1) is excluded for H-nonnegative roots, and an H-nonnegative
    (1,1) root additionally needs alpha > 0.
    """
    if mode not in (HSA, HNN):
        raise ValueError(f"structured mode must be 'hsa' or 'hnn', got {mode!r}")
    pt = pair.as_tuple()
    if pt == (2, 2):
        raise ModeViolation("(2,2) pairs admit no structured square root")
    if pt == (2, 1) and mode == HNN:
        raise ModeViolation("(2,1) pairs admit no H-nonnegative square root")
    if pt not in _HSA_KINDS or params.kind != _HSA_KINDS[pt]:
        raise ConstraintViolation(
            f"params of kind {params.kind!r} do not fit pair {pt} in mode {mode!r}"
        )
    if mode == HNN and isinstance(params, P11Hsa) and params.alpha <= 0:
        raise ConstraintViolation(
            "an H-nonnegative (1,1) root requires alpha > 0"
        )
    return root_block(pair, params)


def sample_params(
    pair: SegrePair, mode: str, seed: int, kind: str | None = None
) -> RootParams:
    """Draw valid template parameters, deterministic in the seed.

    Magnitudes are log-uniform in [0.1, 10], phases uniform.  For pairs
    with two template families the family is part of the draw unless
    ``kind`` pins it.
    """
    _check_mode(mode)
    rng = np.random.default_rng(seed)
    return _draw_params(pair, mode, rng, kind)


def _draw_params(
    pair: SegrePair, mode: str, rng: np.random.Generator, kind: str | None = None
) -> RootParams:
    def mag() -> float:
        return float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))

    def cplx() -> complex:
        return mag() * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))

    pt = pair.as_tuple()
    if pt == (1, 0):
        return P10()
    if mode in (HSA, HNN):
        if pt == (1, 1):
            a = mag() if mode == HNN else mag() * (1 if rng.random() < 0.5 else -1)
            return P11Hsa(a, abs(a) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)))
        if pt == (2, 1):
            a = mag() * (1 if rng.random() < 0.5 else -1)
            return P21Hsa(a, np.exp(1j * rng.uniform(0.0, 2.0 * np.pi)))
        raise ModeViolation(f"pair {pt} not admissible in mode {mode!r}")
    if pt == (1, 1):
        if kind is None:
            kind = "p11" if rng.random() < 0.5 else "p11_upper"
        if kind == "p11":
            return P11(cplx(), cplx())
        if kind == "p11_upper":
            return P11Upper(cplx())
    if pt == (2, 1):
        return P21(cplx(), cplx())
    if pt == (2, 2):
        if kind is None:
            kind = "p22" if rng.random() < 0.5 else "p22_alt"
        if kind == "p22":
            return P22(cplx(), cplx(), cplx(), cplx())
        if kind == "p22_alt":
            return P22Alt(cplx(), cplx(), cplx())
    raise ConstraintViolation(f"cannot draw params of kind {kind!r} for pair {pt}")


@dataclass(frozen=True)
class RootSignChoice:
    """One +-1 per nonzero-eigenvalue block, in canonical block order."""

    deltas: tuple[int, ...]

    def __init__(self, deltas) -> None:
        deltas = tuple(int(d) for d in deltas)
        if any(d not in (1, -1) for d in deltas):
            raise ValueError("deltas must be +1 or -1")
        object.__setattr__(self, "deltas", deltas)


@dataclass(frozen=True)
class RootPlan:
    """Everything needed to assemble one concrete root.

    ``assignment`` maps each pair of the pairing to the indices (into
    cp.blocks) of the physical zero blocks it consumes.
    """

    pairing: SegrePairing
    mode: str
    params: tuple[RootParams, ...]
    signs: RootSignChoice
    assignment: tuple[tuple[int, ...], ...]


def _assign_blocks(
    cp: CanonicalPair, pairing: SegrePairing, mode: str
) -> tuple[tuple[int, ...], ...]:
    """Greedy map from pairs to physical zero-block indices.

    In structured modes each (2,1) consumes a +1 single and each (1,1) one
    +1 and one -1 single, the template order being (+1, -1).  Any feasible
    assignment yields the same canonical output, so greedy in canonical
    order is enough.
    """
    plus = deque(
        i
        for i, b in enumerate(cp.blocks)
        if b.eigenvalue == 0.0 and b.size == 1 and b.sign == 1
    )
    minus = deque(
        i
        for i, b in enumerate(cp.blocks)
        if b.eigenvalue == 0.0 and b.size == 1 and b.sign == -1
    )
    doubles = deque(i for i, b in enumerate(cp.blocks) if b.size == 2)

    def any_single() -> int:
        if plus:
            return plus.popleft()
        return minus.popleft()

    assignment = []
    try:
        for pair in pairing.pairs:
            pt = pair.as_tuple()
            if pt == (2, 2):
                assignment.append((doubles.popleft(), doubles.popleft()))
            elif pt == (2, 1):
                single = plus.popleft() if mode in (HSA, HNN) else any_single()
                assignment.append((doubles.popleft(), single))
            elif pt == (1, 1):
                if mode in (HSA, HNN):
                    assignment.append((plus.popleft(), minus.popleft()))
                else:
                    assignment.append((any_single(), any_single()))
            else:
                assignment.append((any_single(),))
    except IndexError as exc:
        raise ExistenceViolation(
            "pairing cannot be realized with the available block signs"
        ) from exc
    if plus or minus or doubles:
        raise ExistenceViolation("pairing does not cover all zero blocks")
    return tuple(assignment)


def build_plan(
    cp: CanonicalPair,
    pairing: SegrePairing,
    mode: str,
    seed: int = 0,
    signs: RootSignChoice | None = None,
    params: tuple[RootParams, ...] | None = None,
) -> RootPlan:
    """Assemble a RootPlan: sampled params, default signs, greedy assignment."""
    _check_mode(mode)
    ok, why = existence(cp, mode)
    if not ok:
        raise ExistenceViolation(why)
    ok, why = admissible_for_mode(pairing, cp.zero_part(), mode)
    if not ok:
        raise ExistenceViolation(why)
    if signs is None:
        signs = RootSignChoice((1,) * cp.r)
    if params is None:
        rng = np.random.default_rng(seed)
        params = tuple(_draw_params(p, mode, rng) for p in pairing.pairs)
    if len(params) != len(pairing.pairs):
        raise ValueError("one params entry required per pair")
    return RootPlan(pairing, mode, params, signs, _assign_blocks(cp, pairing, mode))


def assemble_root(cp: CanonicalPair, plan: RootPlan) -> np.ndarray:
    """Square root of synthesize(cp).B in the canonical coordinates.

    Nonzero blocks get delta*sqrt(lambda) (or i*delta*sqrt(-lambda));
    the zero part embeds one template per pair at its assigned physical
    positions.  In mode hsa/hnn the result is H-selfadjoint (resp.
    H-nonnegative) for H = synthesize(cp).H.
    """
    mode = plan.mode
    _check_mode(mode)
    ok, why = existence(cp, mode)
    if not ok:
        raise ExistenceViolation(why)
    ok, why = admissible_for_mode(plan.pairing, cp.zero_part(), mode)
    if not ok:
        raise ExistenceViolation(why)
    _check_signs(cp, plan.signs, mode)

    offsets = []
    pos = 0
    for b in cp.blocks:
        offsets.append(pos)
        pos += b.size
    n = pos
    a = np.zeros((n, n), dtype=np.complex128)

    deltas = iter(plan.signs.deltas)
    for i, b in enumerate(cp.blocks):
        if b.eigenvalue > 0.0:
            a[offsets[i], offsets[i]] = next(deltas) * np.sqrt(b.eigenvalue)
        elif b.eigenvalue < 0.0:
            a[offsets[i], offsets[i]] = 1j * next(deltas) * np.sqrt(-b.eigenvalue)

    for pair, params, blocks in zip(plan.pairing.pairs, plan.params, plan.assignment):
        if mode in (HSA, HNN):
            tmpl = root_block_structured(pair, params, mode)
        else:
            tmpl = root_block(pair, params)
        coords: list[int] = []
        for bi in blocks:
            coords.extend(range(offsets[bi], offsets[bi] + cp.blocks[bi].size))
        a[np.ix_(coords, coords)] = tmpl
    return a


def _check_signs(cp: CanonicalPair, signs: RootSignChoice, mode: str) -> None:
    if len(signs.deltas) != cp.r:
        raise ValueError(f"sign choice must provide {cp.r} entries, one per nonzero block")
    if mode == HNN and any(d != 1 for d in signs.deltas):
        raise ModeViolation("H-nonnegative roots force delta = +1 at every eigenvalue")


@dataclass(frozen=True)
class PredictedBlock:
    """One Jordan block of a predicted root; sign None when undetermined."""

    eigenvalue: complex
    size: int
    sign: int | None = None


def predicted_jordan_form(
    pairing: SegrePairing,
    cp: CanonicalPair,
    signs: RootSignChoice,
    mode: str = GENERAL,
) -> tuple[PredictedBlock, ...]:
    """Jordan data of every root realizing the pairing with these signs.

    Zero part: l1 J1(0) + l2 J2(0) + l3 J3(0) + l4 J4(0).  Sign data is
    attached in structured modes: (1,0) roots inherit the sign of their
    source block, (2,1) roots carry +1, and the J2(0) sign of an hsa
    (1,1) root is left undetermined (it depends on the parameters).
    """
    _check_mode(mode)
    ok, why = admissible_for_mode(pairing, cp.zero_part(), mode)
    if not ok:
        raise ModeViolation(why)
    structured = mode in (HSA, HNN)
    if structured:
        ok, why = existence(cp, mode)
        if not ok:
            raise ModeViolation(why)
    _check_signs(cp, signs, mode)

    out = []
    deltas = iter(signs.deltas)
    for b in cp.blocks:
        if b.eigenvalue > 0.0:
            val = next(deltas) * np.sqrt(b.eigenvalue)
            out.append(PredictedBlock(complex(val), 1, 1 if structured else None))
        elif b.eigenvalue < 0.0:
            val = 1j * next(deltas) * np.sqrt(-b.eigenvalue)
            out.append(PredictedBlock(val, 1, None))

    assignment = _assign_blocks(cp, pairing, mode)
    for pair, blocks in zip(pairing.pairs, assignment):
        pt = pair.as_tuple()
        if pt == (1, 0):
            sign = cp.blocks[blocks[0]].sign if structured else None
            out.append(PredictedBlock(0j, 1, sign))
        elif pt == (1, 1):
            # hsa: eta = +-1 undetermined; hnn: always +1
            sign = 1 if mode == HNN else None
            out.append(PredictedBlock(0j, 2, sign))
        elif pt == (2, 1):
            out.append(PredictedBlock(0j, 3, 1 if structured else None))
        else:
            out.append(PredictedBlock(0j, 4, None))
    out.sort(key=lambda blk: (-blk.eigenvalue.real, -blk.eigenvalue.imag, -blk.size))
    return tuple(out)


def existence(cp: CanonicalPair, mode: str) -> tuple[bool, str]:
    """Closed-form existence criterion for a square root in the given mode."""
    _check_mode(mode)
    negatives = cp.r - cp.q
    if mode == GENERAL:
        sc = segre_characteristic(cp.zero_part())
        if sc.num_twos % 2 == 1 and sc.num_ones == 0:
            return False, "odd number of size-2 zero blocks and no size-1 zero blocks"
        return True, "zero-part Segre characteristic admits a pairing"
    if negatives:
        return False, f"negative eigenvalues present ({negatives} block(s))"
    if mode == HSA:
        if cp.s_plus < cp.t:
            return False, f"s+ = {cp.s_plus} < t = {cp.t}"
        return True, "spectrum nonnegative and s+ >= t"
    if cp.t > 0:
        return False, f"size-2 blocks at eigenvalue zero present (t = {cp.t})"
    return True, "spectrum nonnegative and t = 0"
