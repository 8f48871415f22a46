"""Point-line incidence structures with bitset-backed subspace machinery.

Point sets are plain Python ints used as bitsets, which keeps the exhaustive
checks in this package fast without any dependencies.  Lines are sorted tuples
of point indices.  The constructor deliberately does not enforce partial
linearity: corrupted structures must stay representable so that the axiom
checker can report on them.
"""

from __future__ import annotations

from typing import Iterable, Iterator

__all__ = ["bits", "mask_of", "IncidenceStructure"]


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(points: Iterable[int]) -> int:
    """Bitset over the given point indices."""
    out = 0
    for p in points:
        out |= 1 << p
    return out


class IncidenceStructure:
    """An indexed point set together with lines of size at least two."""

    def __init__(self, n_points: int, lines: Iterable[Iterable[int]]):
        if n_points < 0:
            raise ValueError("point count must be nonnegative")
        self.n_points = n_points
        self.full_mask = (1 << n_points) - 1
        norm: list[tuple[int, ...]] = []
        masks: list[int] = []
        for line in lines:
            pts = tuple(sorted(line))
            if len(pts) < 2:
                raise ValueError(f"line {pts} has fewer than 2 points")
            if len(set(pts)) != len(pts):
                raise ValueError(f"line {pts} repeats a point")
            if pts[0] < 0 or pts[-1] >= n_points:
                raise ValueError(f"line {pts} has out-of-range points")
            norm.append(pts)
            masks.append(mask_of(pts))
        self.lines = norm
        self.line_masks = masks
        self._lines_at: list[list[int]] = [[] for _ in range(n_points)]
        adj = [1 << p for p in range(n_points)]
        for i, m in enumerate(masks):
            for p in norm[i]:
                self._lines_at[p].append(i)
                adj[p] |= m
        self.adj = adj
        self._pair_line: dict[tuple[int, int], int] = {}
        for i, pts in enumerate(norm):
            for x in range(len(pts)):
                for y in range(x + 1, len(pts)):
                    self._pair_line.setdefault((pts[x], pts[y]), i)

    # -- basic incidence -------------------------------------------------

    def lines_at(self, p: int) -> list[int]:
        """Ids of the lines through point ``p``."""
        return self._lines_at[p]

    def collinear(self, a: int, b: int) -> bool:
        """True iff ``a == b`` or some line carries both points."""
        return bool((self.adj[a] >> b) & 1)

    def line_through(self, a: int, b: int) -> int | None:
        """Id of a line through two distinct points, or None."""
        if a == b:
            raise ValueError("need two distinct points")
        key = (a, b) if a < b else (b, a)
        return self._pair_line.get(key)

    # -- perps and radicals ------------------------------------------------

    def perp_of(self, a: int) -> int:
        """All points collinear with ``a``, including ``a`` itself."""
        return self.adj[a]

    def set_perp(self, xs: int) -> int:
        """Intersection of perps over the set; everything for the empty set."""
        out = self.full_mask
        for p in bits(xs):
            out &= self.adj[p]
        return out

    def radical_of(self, xs: int) -> int:
        return xs & self.set_perp(xs)

    # -- subspaces ---------------------------------------------------------

    def closure_of(self, xs: int) -> int:
        """Least superset containing every line that meets it twice."""
        cur = xs
        changed = True
        while changed:
            changed = False
            for m in self.line_masks:
                if m & ~cur and (m & cur).bit_count() >= 2:
                    cur |= m
                    changed = True
        return cur

    def is_subspace(self, xs: int) -> bool:
        for m in self.line_masks:
            if (m & xs).bit_count() >= 2 and m & ~xs:
                return False
        return True

    def is_hyperplane(self, xs: int) -> bool:
        """A proper subspace meeting every line."""
        if xs == self.full_mask or not self.is_subspace(xs):
            return False
        return all(m & xs for m in self.line_masks)

    def is_spiky(self, xs: int) -> bool:
        """Every point of the set is collinear with some point outside it."""
        for p in bits(xs):
            if not self.adj[p] & ~xs:
                return False
        return True

    def is_scaly(self, xs: int) -> bool:
        """Every line inside the set lies in the perp of some outside point."""
        for m in self.line_masks:
            if not m & ~xs and not self.set_perp(m) & ~xs:
                return False
        return True

    def singular_dim(self, xs: int) -> int | None:
        """Projective dimension of a singular subspace, None if not singular.

        The dimension is the length of a greedy generating chain: each step
        adds one point outside the closure of the points picked so far.
        """
        if not self.is_subspace(xs):
            raise ValueError("singular_dim needs a subspace")
        if xs == 0:
            return -1
        for p in bits(xs):
            if xs & ~self.adj[p]:
                return None
        first = (xs & -xs).bit_length() - 1
        cur = 1 << first
        dim = 0
        while cur != xs:
            rest = xs & ~cur
            x = (rest & -rest).bit_length() - 1
            cur = self.closure_of(cur | (1 << x))
            dim += 1
        return dim

    # -- line helpers --------------------------------------------------------

    def lines_in(self, xs: int) -> list[int]:
        """Ids of the lines fully contained in the set."""
        return [i for i, m in enumerate(self.line_masks) if not m & ~xs]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IncidenceStructure):
            return NotImplemented
        return self.n_points == other.n_points and sorted(self.lines) == sorted(other.lines)

    def __repr__(self) -> str:
        return f"IncidenceStructure({self.n_points} points, {len(self.lines)} lines)"
