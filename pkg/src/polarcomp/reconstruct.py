"""Rebuilding the ambient polar space from a complement's own incidence.

The engine is :class:`Parallelism`: a crossing-configuration relation on
disjoint proper lines (two further lines meeting both, with their common
point off the first two), its reflexive-transitive closure via union-find,
and on top of that the anti-euclidean relation on affine lines, its lift to
parallel classes, and the ternary collinearity test for directions.

New points are the parallel classes.  New lines come in two families: sets
of classes mutually related under the lifted relation (these recover lines
of the horizon that no plane reaches) and per-plane direction sets.  The
assembly is purely intrinsic; the ground-truth horizon data of the
complement is consulted only by :func:`canonical_map` and the verification
layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complement import Complement
from .errors import HorizonRefusal, IntegrityError
from .incidence import IncidenceStructure, bits

__all__ = [
    "Parallelism",
    "ParallelClasses",
    "ReconstructedStructure",
    "star_parallel",
    "parallel_closure",
    "intrinsic_affine_lines",
    "reconstruct",
    "canonical_map",
]


def _star_witness(comp: Complement, meets_i: int, meets_j: int, lm_i: int, lm_j: int) -> bool:
    """Two distinct lines crossing both, meeting each other off the pair."""
    transversals = meets_i & meets_j
    if transversals.bit_count() < 2:
        return False
    off = ~(lm_i | lm_j)
    for l1 in bits(transversals):
        for p in bits(comp.line_trace[l1] & off):
            if comp.lines_at_point(p) & transversals & ~(1 << l1):
                return True
    return False


def star_parallel(comp: Complement, k1: int, k2: int) -> bool:
    """The crossing-configuration relation on two proper lines.

    True iff the lines are disjoint and some two distinct proper lines cross
    both of them while meeting each other in a point off both.  This is the
    single-step relation; see :class:`Parallelism` for its closure.
    """
    lm1, lm2 = comp.line_trace[k1], comp.line_trace[k2]
    if lm1 & lm2:
        return False
    m1 = 0
    for p in bits(lm1):
        m1 |= comp.lines_at_point(p)
    m2 = 0
    for p in bits(lm2):
        m2 |= comp.lines_at_point(p)
    return _star_witness(comp, m1, m2, lm1, lm2)


@dataclass
class ParallelClasses:
    """Partition of the (intrinsically) affine lines into parallel classes."""

    class_id: dict[int, int]
    classes: list[tuple[int, ...]] = field(default_factory=list)


class Parallelism:
    """All intrinsic relations of a complement, precomputed as bit tables."""

    def __init__(self, comp: Complement):
        self.comp = comp
        n = comp.n_lines
        lm = comp.line_trace
        self.meets = [0] * n
        for i in range(n):
            m = 0
            for p in bits(lm[i]):
                m |= comp.lines_at_point(p)
            self.meets[i] = m

        star = [0] * n
        for i in range(n):
            lmi = lm[i]
            for j in range(i + 1, n):
                if lmi & lm[j]:
                    continue
                if _star_witness(comp, self.meets[i], self.meets[j], lmi, lm[j]):
                    star[i] |= 1 << j
                    star[j] |= 1 << i
        self.star_rows = star

        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(n):
            for j in bits(star[i] >> (i + 1)):
                ri, rj = find(i), find(i + 1 + j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

        self._affine = [star[i] != 0 for i in range(n)]
        roots: dict[int, int] = {}
        members: list[list[int]] = []
        cid: dict[int, int] = {}
        for i in range(n):
            if not self._affine[i]:
                continue
            r = find(i)
            if r not in roots:
                roots[r] = len(members)
                members.append([])
            cid[i] = roots[r]
            members[roots[r]].append(i)
        self.classes: list[tuple[int, ...]] = [tuple(m) for m in members]
        self.class_id = cid
        self.n_classes = len(self.classes)

        self.class_line_mask = [0] * self.n_classes
        for k, c in cid.items():
            self.class_line_mask[c] |= 1 << k
        self._par_rows = [
            self.class_line_mask[cid[i]] if self._affine[i] else 0 for i in range(n)
        ]

        # reach[k]: classes having a member through some point of line k.
        point_classes: dict[int, int] = {}
        for k, c in cid.items():
            for p in bits(lm[k]):
                point_classes[p] = point_classes.get(p, 0) | (1 << c)
        self.reach = [0] * n
        for k in range(n):
            if not self._affine[k]:
                continue
            r = 0
            for p in bits(lm[k]):
                r |= point_classes.get(p, 0)
            self.reach[k] = r
        self.creach = [0] * self.n_classes
        for k, c in cid.items():
            self.creach[c] |= self.reach[k]

        self._prime: list[tuple[int, ...]] | None = None
        self._second: list[tuple[int, ...]] | None = None

    # -- the parallelism itself ---------------------------------------------

    def star(self, k1: int, k2: int) -> bool:
        return bool((self.star_rows[k1] >> k2) & 1)

    def parallel(self, k1: int, k2: int) -> bool:
        """Reflexive-transitive closure of the crossing configuration."""
        return bool((self._par_rows[k1] >> k2) & 1)

    def table(self) -> list[int]:
        """Row ``k``: bitmask of lines intrinsically parallel to ``k``."""
        return list(self._par_rows)

    def is_affine(self, k: int) -> bool:
        """Self-parallel lines; intrinsically detected."""
        return self._affine[k]

    def affine_ids(self) -> list[int]:
        return [k for k in range(self.comp.n_lines) if self._affine[k]]

    def parallel_classes(self) -> ParallelClasses:
        return ParallelClasses(dict(self.class_id), list(self.classes))

    # -- relations on affine lines and classes -------------------------------

    def anti_euclidean(self, k1: int, k2: int) -> bool:
        """No affine line through a point of the first is parallel to the second."""
        if not self._affine[k1] or not self._affine[k2]:
            raise ValueError("both lines must be affine")
        return not (self.reach[k1] >> self.class_id[k2]) & 1

    def equiv(self, c1: int, c2: int) -> bool:
        """The anti-euclidean relation lifted to a pair of classes."""
        if c1 == c2:
            return False
        return not ((self.creach[c1] >> c2) & 1 or (self.creach[c2] >> c1) & 1)

    def _equiv_hat(self, m: int, c: int) -> bool:
        return m == c or self.equiv(m, c)

    def lines_prime(self) -> list[tuple[int, ...]]:
        """Class sets spanned by related class pairs; recovers unreachable
        horizon lines.

        For each related pair the set collects every class related (in the
        reflexive sense) to both; duplicates from different generating pairs
        collapse.
        """
        if self._prime is None:
            out: list[tuple[int, ...]] = []
            seen = set()
            for c1 in range(self.n_classes):
                for c2 in range(c1 + 1, self.n_classes):
                    if not self.equiv(c1, c2):
                        continue
                    group = tuple(
                        m
                        for m in range(self.n_classes)
                        if self._equiv_hat(m, c1) and self._equiv_hat(m, c2)
                    )
                    if group not in seen:
                        seen.add(group)
                        out.append(group)
            self._prime = out
        return self._prime

    def lines_second(self) -> list[tuple[int, ...]]:
        """Per-plane direction sets of size at least two."""
        if self._second is None:
            out: list[tuple[int, ...]] = []
            seen = set()
            for pi in self.comp.semiaffine_planes():
                group = sorted(
                    {
                        self.class_id[k]
                        for k in bits(self.comp.plane_lines(pi))
                        if self._affine[k]
                    }
                )
                if len(group) < 2:
                    continue
                key = tuple(group)
                if key not in seen:
                    seen.add(key)
                    out.append(key)
            self._second = out
        return self._second

    def ternary_collinear(self, c1: int, c2: int, c3: int) -> bool:
        """Whether three distinct directions lie on a common horizon line.

        Either some representatives form a triangle (pairwise meeting in
        three distinct points), or the three classes are mutually related.
        """
        if len({c1, c2, c3}) != 3:
            raise ValueError("classes must be pairwise distinct")
        if self.equiv(c1, c2) and self.equiv(c2, c3) and self.equiv(c3, c1):
            return True
        lm = self.comp.line_trace
        mask3 = self.class_line_mask[c3]
        for m1 in self.classes[c1]:
            for m2 in bits(self.class_line_mask[c2] & self.meets[m1]):
                z12 = lm[m1] & lm[m2]
                for m3 in bits(mask3 & self.meets[m1] & self.meets[m2]):
                    if not (z12 == (lm[m1] & lm[m3]) == (lm[m2] & lm[m3])):
                        return True
        return False


def parallel_closure(comp: Complement) -> tuple[list[int], ParallelClasses]:
    """Relation table and classes of the intrinsic parallelism."""
    par = Parallelism(comp)
    return par.table(), par.parallel_classes()


def intrinsic_affine_lines(comp: Complement) -> list[int]:
    """Lines detected as affine from the inside: the self-parallel ones."""
    return Parallelism(comp).affine_ids()


@dataclass
class ReconstructedStructure:
    """The rebuilt ambient space with its tagged line families."""

    structure: IncidenceStructure
    n_proper: int
    families: dict[str, list[tuple[int, ...]]]
    parallelism: Parallelism
    complement: Complement


def reconstruct(comp: Complement, parallelism: Parallelism | None = None) -> ReconstructedStructure:
    """Assemble proper points plus directions into a copy of the base space.

    Proper lines are extended by their direction when affine; the two new
    line families contribute the horizon lines.  Refuses a horizon that is a
    hyperplane: that case is recovered by a different construction and is
    out of scope here.
    """
    if comp.base.structure.is_hyperplane(comp.horizon):
        raise HorizonRefusal("hyperplane horizon: delegated case")
    par = parallelism if parallelism is not None else Parallelism(comp)
    n_proper = len(comp.proper_points)

    extended: list[tuple[int, ...]] = []
    for k, trace in enumerate(comp.line_trace):
        pts = [comp.local_index[p] for p in bits(trace)]
        if par.is_affine(k):
            pts.append(n_proper + par.class_id[k])
        extended.append(tuple(sorted(pts)))
    prime = [tuple(n_proper + c for c in group) for group in par.lines_prime()]
    second = [tuple(n_proper + c for c in group) for group in par.lines_second()]

    st = IncidenceStructure(n_proper + par.n_classes, extended + prime + second)
    return ReconstructedStructure(
        structure=st,
        n_proper=n_proper,
        families={"extended": extended, "prime": prime, "second": second},
        parallelism=par,
        complement=comp,
    )


def canonical_map(recon: ReconstructedStructure) -> dict[int, int]:
    """Map reconstructed point ids onto base point ids.

    Proper points map to themselves; each class maps to the common point at
    infinity of its members.  Any ambiguity falsifies the theory and raises
    :class:`IntegrityError` rather than guessing.
    """
    comp = recon.complement
    par = recon.parallelism
    mapping = {local: base for base, local in comp.local_index.items()}
    seen: dict[int, int] = {}
    for c, members in enumerate(par.classes):
        infs = set()
        for k in members:
            if not comp.is_affine(k):
                raise IntegrityError(f"class {c} contains line {k} with no point at infinity")
            infs.add(comp.point_at_infinity(k))
        if len(infs) != 1:
            raise IntegrityError(f"class {c} reaches several horizon points: {sorted(infs)}")
        direction = infs.pop()
        if direction in seen:
            raise IntegrityError(f"classes {seen[direction]} and {c} share direction {direction}")
        seen[direction] = c
        mapping[recon.n_proper + c] = direction
    uncovered = comp.horizon & ~sum(1 << d for d in seen) if seen else comp.horizon
    if uncovered:
        raise IntegrityError(f"horizon points {list(bits(uncovered))} have no direction")
    return mapping
