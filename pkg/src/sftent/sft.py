"""Shift-of-finite-type specifications, finite patterns, local admissibility.

A spec is an alphabet size N plus a finite list of forbidden patterns, each a
symbol assignment on a finite shape.  A pattern on a finite lattice is locally
admissible when no forbidden pattern occurs at any placement of its shape that
lies fully inside the pattern's support.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import SymbolOutOfRange
from .lattice import FiniteLattice, Point, _keys


@dataclass(frozen=True)
class ForbiddenPattern:
    """A symbol assignment on a finite shape, canonicalised to min x = min y = 0."""

    cells: tuple[tuple[Point, int], ...]

    @staticmethod
    def make(cells: Iterable[tuple[tuple[int, int], int]]) -> "ForbiddenPattern":
        items = [((int(p[0]), int(p[1])), int(s)) for p, s in cells]
        if not items:
            raise ValueError("forbidden pattern must have at least one cell")
        offsets = [p for p, _ in items]
        if len(set(offsets)) != len(offsets):
            raise ValueError("forbidden pattern offsets must be distinct")
        mx = min(x for x, _ in offsets)
        my = min(y for _, y in offsets)
        moved = sorted(
            ((Point(x - mx, y - my), s) for (x, y), s in items),
            key=lambda cs: (cs[0].y, cs[0].x),
        )
        return ForbiddenPattern(tuple(moved))

    @cached_property
    def shape(self) -> FiniteLattice:
        return FiniteLattice([p for p, _ in self.cells])

    @cached_property
    def extent(self) -> tuple[int, int]:
        """(max dx, max dy) over the canonical offsets."""
        return (
            max(p.x for p, _ in self.cells),
            max(p.y for p, _ in self.cells),
        )

    def transpose(self) -> "ForbiddenPattern":
        return ForbiddenPattern.make([((p.y, p.x), s) for p, s in self.cells])


@dataclass(frozen=True)
class SftSpec:
    """Alphabet 0..N-1 plus a deduplicated list of forbidden patterns."""

    alphabet_size: int
    forbidden: tuple[ForbiddenPattern, ...]
    name: str = ""

    def __post_init__(self):
        if self.alphabet_size < 2:
            raise ValueError("alphabet size must be >= 2")
        for pat in self.forbidden:
            for _, s in pat.cells:
                if not 0 <= s < self.alphabet_size:
                    raise SymbolOutOfRange(
                        f"symbol {s} outside alphabet 0..{self.alphabet_size - 1}"
                    )

    @staticmethod
    def make(alphabet_size: int, forbidden: Iterable, name: str = "") -> "SftSpec":
        pats = [p if isinstance(p, ForbiddenPattern) else ForbiddenPattern.make(p) for p in forbidden]
        unique = sorted(set(pats), key=lambda p: p.cells)
        return SftSpec(alphabet_size, tuple(unique), name)

    # -- structural predicates for the counting engines ---------------------

    @cached_property
    def window2x2(self) -> bool:
        """True when every forbidden shape fits inside a 2x2 window."""
        return all(p.extent[0] <= 1 and p.extent[1] <= 1 for p in self.forbidden)

    @cached_property
    def pure_axis(self) -> str | None:
        """'horizontal' / 'vertical' when constraints never cross rows / columns."""
        if not self.window2x2:
            return None
        if all(p.extent[1] == 0 for p in self.forbidden):
            return "horizontal"
        if all(p.extent[0] == 0 for p in self.forbidden):
            return "vertical"
        return None

    @cached_property
    def forbidden_diameter(self) -> int:
        """Max Chebyshev extent of any forbidden shape (0 for a full shift)."""
        if not self.forbidden:
            return 0
        return max(max(p.extent) for p in self.forbidden)

    @cached_property
    def safe_symbols(self) -> tuple[int, ...]:
        """Symbols that occur in no forbidden pattern (padding with one can
        never complete a forbidden occurrence)."""
        used = {s for p in self.forbidden for _, s in p.cells}
        return tuple(s for s in range(self.alphabet_size) if s not in used)

    def transpose(self) -> "SftSpec":
        return SftSpec.make(
            self.alphabet_size,
            [p.transpose() for p in self.forbidden],
            name=self.name + "^T" if self.name else "",
        )


@dataclass(frozen=True)
class Pattern:
    """A total symbol assignment on a finite support.

    Symbols are stored aligned with the support's canonical point order.
    """

    support: FiniteLattice
    symbols: tuple[int, ...]

    def __post_init__(self):
        if len(self.symbols) != len(self.support):
            raise ValueError("symbol tuple must match the support size")

    @staticmethod
    def from_dict(assignment: dict) -> "Pattern":
        support = FiniteLattice(assignment.keys())
        syms = tuple(int(assignment[(p.x, p.y)]) for p in support)
        return Pattern(support, syms)

    @cached_property
    def _by_point(self) -> dict:
        return {(p.x, p.y): s for p, s in zip(self.support, self.symbols)}

    def symbol(self, point) -> int:
        return self._by_point[(int(point[0]), int(point[1]))]

    def translate(self, v) -> "Pattern":
        moved = self.support.translate(v)
        return Pattern(moved, self.symbols)  # canonical order is translation-invariant

    def transpose(self) -> "Pattern":
        return Pattern.from_dict({(y, x): s for (x, y), s in self._by_point.items()})


@dataclass(frozen=True)
class CountResult:
    """Exact pattern count with its counting-mode tag."""

    value: int
    mode: str                    # "local" | "extendable"
    lattice_size: int
    margin: int | None = None    # set for mode == "extendable"

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("count cannot be negative")


# ---------------------------------------------------------------------------
# builtin specs
# ---------------------------------------------------------------------------


def golden_mean_horizontal() -> SftSpec:
    """Binary spec forbidding two horizontally adjacent 1s."""
    return SftSpec.make(2, [[((0, 0), 1), ((1, 0), 1)]], name="golden-mean-h")


def golden_mean_vertical() -> SftSpec:
    """Binary spec forbidding two vertically adjacent 1s."""
    return SftSpec.make(2, [[((0, 0), 1), ((0, 1), 1)]], name="golden-mean-v")


def full_shift(alphabet_size: int = 2) -> SftSpec:
    """No constraints at all."""
    return SftSpec.make(alphabet_size, [], name=f"full:{alphabet_size}")


def period_forcing_horizontal() -> SftSpec:
    """Binary spec forbidding both 00 and 11 horizontally: rows must alternate."""
    return SftSpec.make(
        2,
        [[((0, 0), 1), ((1, 0), 1)], [((0, 0), 0), ((1, 0), 0)]],
        name="period-forcing-h",
    )


BUILTIN_SPECS = {
    "golden-mean-h": golden_mean_horizontal,
    "golden-mean-v": golden_mean_vertical,
    "period-forcing-h": period_forcing_horizontal,
}


# ---------------------------------------------------------------------------
# placements and admissibility
# ---------------------------------------------------------------------------


def placements(shape: FiniteLattice, lat: FiniteLattice) -> list[Point]:
    """Translation vectors v with shape + v fully inside lat, canonical order."""
    if len(shape) == 0 or len(lat) == 0:
        return []
    anchor = shape.coords[0]
    candidates = lat.coords - anchor                # (P, 2) candidate vectors
    lat_keys = _keys(lat.coords)
    offs = shape.coords[np.newaxis, :, :]           # (1, S, 2)
    cells = candidates[:, np.newaxis, :] + offs     # (P, S, 2)
    flat = cells.reshape(-1, 2)
    inside = np.isin(flat[:, 1] * np.int64(2**32) + flat[:, 0], lat_keys)
    ok = inside.reshape(len(lat), len(shape)).all(axis=1)
    vecs = candidates[ok]
    order = np.lexsort((vecs[:, 0], vecs[:, 1]))
    return [Point(int(x), int(y)) for x, y in vecs[order].tolist()]


def forbidden_occurrences(lat: FiniteLattice, spec: SftSpec):
    """Precompute, per forbidden pattern, the cell-index tuples of each placement.

    Returns (indices, symbols) pairs where `indices` point into the lattice's
    canonical point order.  Shared by the brute-force counter and the
    admissibility check.
    """
    index_of = {(p.x, p.y): i for i, p in enumerate(lat)}
    out = []
    for pat in spec.forbidden:
        syms = tuple(s for _, s in pat.cells)
        for v in placements(pat.shape, lat):
            idx = tuple(index_of[(p.x + v.x, p.y + v.y)] for p, _ in pat.cells)
            out.append((idx, syms))
    return out


def is_locally_admissible(pattern: Pattern, spec: SftSpec) -> bool:
    """True iff no forbidden pattern occurs fully inside the pattern's support."""
    for s in pattern.symbols:
        if not 0 <= s < spec.alphabet_size:
            raise SymbolOutOfRange(
                f"symbol {s} outside alphabet 0..{spec.alphabet_size - 1}"
            )
    for idx, syms in forbidden_occurrences(pattern.support, spec):
        if all(pattern.symbols[i] == s for i, s in zip(idx, syms)):
            return False
    return True
