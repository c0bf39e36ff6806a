"""Segre characteristics and Segre pairings.

A Segre pairing partitions the Jordan block sizes of a nilpotent matrix
into pairs differing by at most one (a block may instead be paired with a
padding zero, but only a size-1 block: (2,0) is not admissible).  For
H-nonnegative matrices all sizes are 1 or 2, so the only pairs are (2,2),
(2,1), (1,1) and (1,0), and a pairing is determined by how many of each it
uses.
"""

from __future__ import annotations

from dataclasses import dataclass

from .canonical import CanonicalPair
from .errors import NonZeroEigenvalue, InvalidWeyr, PairingMismatch, UnsupportedEntry

__all__ = [
    "GENERAL",
    "HSA",
    "HNN",
    "MODES",
    "SegreCharacteristic",
    "SegrePair",
    "SegrePairing",
    "segre_characteristic",
    "weyr_to_segre",
    "has_square_root",
    "enumerate_pairings",
    "admissible_for_mode",
]

GENERAL = "general"
HSA = "hsa"  # H-selfadjoint square roots
HNN = "hnn"  # H-nonnegative square roots
MODES = (GENERAL, HSA, HNN)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}, expected one of {MODES}")


@dataclass(frozen=True)
class SegreCharacteristic:
    """Non-increasing Jordan block sizes at one eigenvalue."""

    entries: tuple[int, ...]

    def __init__(self, entries) -> None:
        entries = tuple(int(e) for e in entries)
        if any(e < 1 for e in entries):
            raise ValueError("Segre entries must be positive integers")
        if any(a < b for a, b in zip(entries, entries[1:])):
            raise ValueError("Segre entries must be non-increasing")
        object.__setattr__(self, "entries", entries)

    @property
    def num_ones(self) -> int:
        return sum(1 for e in self.entries if e == 1)

    @property
    def num_twos(self) -> int:
        return sum(1 for e in self.entries if e == 2)

    def _require_small(self) -> None:
        if any(e > 2 for e in self.entries):
            raise UnsupportedEntry(
                "Segre entries above 2 do not occur for H-nonnegative matrices"
            )


@dataclass(frozen=True)
class SegrePair:
    """One pair of a Segre pairing; second entry 0 means unpaired."""

    first: int
    second: int

    def __post_init__(self) -> None:
        if self.first < self.second:
            raise ValueError("pair entries must be ordered first >= second")
        if self.second < 0:
            raise ValueError("pair entries must be nonnegative")
        if self.first - self.second > 1:
            raise ValueError(f"pair {(self.first, self.second)} differs by more than one")
        if self.first == 0:
            raise ValueError("the pair (0, 0) is not admissible")

    def as_tuple(self) -> tuple[int, int]:
        return (self.first, self.second)


@dataclass(frozen=True)
class SegrePairing:
    """A full Segre pairing, pairs in lexicographic descending order."""

    pairs: tuple[SegrePair, ...]

    def __init__(self, pairs) -> None:
        pairs = tuple(
            sorted(pairs, key=lambda p: p.as_tuple(), reverse=True)
        )
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_counts(cls, l1: int, l2: int, l3: int, l4: int) -> "SegrePairing":
        pairs = (
            [SegrePair(2, 2)] * l4
            + [SegrePair(2, 1)] * l3
            + [SegrePair(1, 1)] * l2
            + [SegrePair(1, 0)] * l1
        )
        return cls(pairs)

    @property
    def l1(self) -> int:
        return sum(1 for p in self.pairs if p.as_tuple() == (1, 0))

    @property
    def l2(self) -> int:
        return sum(1 for p in self.pairs if p.as_tuple() == (1, 1))

    @property
    def l3(self) -> int:
        return sum(1 for p in self.pairs if p.as_tuple() == (2, 1))

    @property
    def l4(self) -> int:
        return sum(1 for p in self.pairs if p.as_tuple() == (2, 2))

    def counts(self) -> tuple[int, int, int, int]:
        return (self.l1, self.l2, self.l3, self.l4)

    def entry_multiset(self) -> tuple[int, ...]:
        """Nonzero entries covered by the pairing, sorted descending."""
        out = []
        for p in self.pairs:
            out.append(p.first)
            if p.second:
                out.append(p.second)
        return tuple(sorted(out, reverse=True))


def segre_characteristic(cp0: CanonicalPair) -> SegreCharacteristic:
    """Block sizes of a nilpotent canonical pair, sorted descending."""
    if any(b.eigenvalue != 0.0 for b in cp0.blocks):
        raise NonZeroEigenvalue("Segre characteristic requires eigenvalue 0 blocks only")
    return SegreCharacteristic(sorted((b.size for b in cp0.blocks), reverse=True))


def weyr_to_segre(nullities) -> SegreCharacteristic:
    """Convert a Weyr sequence (nullities of successive powers) to block sizes.

    The increments of the nullity sequence form the conjugate partition of
    the Segre characteristic: the k-th increment counts blocks of size >= k.
    """
    w = [int(x) for x in nullities]
    if any(x < 0 for x in w):
        raise InvalidWeyr("nullities must be nonnegative")
    if any(a > b for a, b in zip(w, w[1:])):
        raise InvalidWeyr("nullities must be non-decreasing")
    inc = [w[0]] + [b - a for a, b in zip(w, w[1:])] if w else []
    if any(a < b for a, b in zip(inc, inc[1:])):
        raise InvalidWeyr("nullity increments must be non-increasing")
    sizes = []
    for k, d in enumerate(inc, start=1):
        nxt = inc[k] if k < len(inc) else 0
        sizes.extend([k] * (d - nxt))
    return SegreCharacteristic(sorted(sizes, reverse=True))


def has_square_root(sc: SegreCharacteristic) -> bool:
    """Closed-form square-root criterion for sizes in {1, 2}.

    True iff the number of 2s is even, or it is odd and at least one 1 is
    available to absorb the leftover 2.
    """
    sc._require_small()
    if sc.num_twos % 2 == 0:
        return True
    return sc.num_ones >= 1


def enumerate_pairings(sc: SegreCharacteristic) -> list[SegrePairing]:
    """All Segre pairings of sc, as distinct count vectors (l1, l2, l3, l4).

    Sorted by (l4, l3, l2, l1) descending.  Empty exactly when no square
    root exists.
    """
    sc._require_small()
    n1, n2 = sc.num_ones, sc.num_twos
    found = []
    for l4 in range(n2 // 2 + 1):
        l3 = n2 - 2 * l4
        if l3 > n1:
            continue
        rest = n1 - l3
        for l2 in range(rest // 2 + 1):
            l1 = rest - 2 * l2
            found.append((l4, l3, l2, l1))
    found.sort(reverse=True)
    return [SegrePairing.from_counts(l1, l2, l3, l4) for (l4, l3, l2, l1) in found]


def admissible_for_mode(
    pairing: SegrePairing, cp0: CanonicalPair, mode: str
) -> tuple[bool, str]:
    """Whether a pairing supports a root of the given structure.

    general: always.  hsa: no (2,2) pairs, each (2,1) consumes a +1 single
    and each (1,1) one +1 and one -1 single.  hnn: additionally no (2,1)
    pairs (no size-2 blocks at all).
    """
    _check_mode(mode)
    sc = segre_characteristic(cp0)
    if pairing.entry_multiset() != sc.entries:
        raise PairingMismatch(
            f"pairing covers {pairing.entry_multiset()}, expected {sc.entries}"
        )
    if mode == GENERAL:
        return True, "any pairing admits an unstructured root"
    l1, l2, l3, l4 = pairing.counts()
    if l4 > 0:
        return False, "(2,2) needs opposite sign characteristics, impossible here"
    if mode == HNN and l3 > 0:
        return False, "(2,1) pairs produce size-3 root blocks, not H-nonnegative"
    if l3 + l2 > cp0.s_plus:
        return (
            False,
            f"needs {l3 + l2} singles with sign +1, only {cp0.s_plus} available",
        )
    if l2 > cp0.s_minus:
        return False, f"needs {l2} singles with sign -1, only {cp0.s_minus} available"
    return True, "sign assignment exists"
