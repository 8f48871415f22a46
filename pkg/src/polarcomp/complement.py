"""Complements of a subspace in a polar space, with their horizon geometry.

Removing a subspace W from a polar space leaves the proper points and the
traces of lines not inside W.  Lines whose closure meets W in a point are
affine; the horizon notions (points at infinity, deep points, semiaffine
planes, deep lines) all live here, together with the two search operations
that the verification layer exercises: extending W to a hyperplane avoiding
two line closures, and chaining coplanar steps between parallel lines.

All point sets are bitmasks over *base* point indices; proper line ids index
the complement's own line list.  :meth:`Complement.structure` reindexes to a
standalone incidence structure when one is needed.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence

from .errors import HorizonRefusal, LemmaFalsified
from .incidence import IncidenceStructure, bits, mask_of
from .polar import PolarSpace

__all__ = [
    "PlaneRecord",
    "Complement",
    "build_complement",
    "drop_proper_line",
    "resolve_horizon",
]


class PlaneRecord(NamedTuple):
    """A singular base plane not inside the horizon, split along it."""

    closure: int
    proper: int
    horizon: int


class Complement:
    """The point-line structure left after removing a horizon subspace."""

    def __init__(self, base: PolarSpace, horizon: int, line_ids: Sequence[int] | None = None):
        st = base.structure
        if horizon & ~st.full_mask:
            raise ValueError("horizon has out-of-range points")
        if not st.is_subspace(horizon):
            raise ValueError("horizon must be a subspace of the base space")
        if horizon == st.full_mask:
            raise HorizonRefusal("horizon equals the whole point set")
        if not any(not horizon & ~h for h in base.hyperplane_candidates()):
            raise HorizonRefusal("horizon lies in no candidate hyperplane")
        self.base = base
        self.horizon = horizon
        self.proper_mask = st.full_mask & ~horizon
        self.proper_points = list(bits(self.proper_mask))
        self.local_index = {b: i for i, b in enumerate(self.proper_points)}
        self._line_ids = list(range(len(st.lines))) if line_ids is None else sorted(line_ids)

        self.line_trace: list[int] = []
        self.line_closure: list[int] = []
        self._infinity: list[int | None] = []
        self.horizon_line_ids: list[int] = []
        for k in self._line_ids:
            m = st.line_masks[k]
            if not m & self.proper_mask:
                self.horizon_line_ids.append(k)
                continue
            self.line_trace.append(m & self.proper_mask)
            self.line_closure.append(k)
            inf = m & horizon
            self._infinity.append(inf.bit_length() - 1 if inf else None)

        self.n_lines = len(self.line_trace)
        self._point_lines: dict[int, int] = {}
        for i, trace in enumerate(self.line_trace):
            for p in bits(trace):
                self._point_lines[p] = self._point_lines.get(p, 0) | (1 << i)

        self._planes: list[PlaneRecord] | None = None
        self._plane_lines: list[int] | None = None
        self._semiaffine: list[int] | None = None
        self._structure: IncidenceStructure | None = None

    # -- lines and parallelism --------------------------------------------

    def lines_at_point(self, p: int) -> int:
        """Bitmask of proper line ids through a proper base point."""
        return self._point_lines.get(p, 0)

    def is_affine(self, k: int) -> bool:
        return self._infinity[k] is not None

    def affine_lines(self) -> list[int]:
        return [k for k in range(self.n_lines) if self._infinity[k] is not None]

    def point_at_infinity(self, k: int) -> int:
        inf = self._infinity[k]
        if inf is None:
            raise ValueError(f"line {k} has no point at infinity")
        return inf

    def horizon_parallel(self, k: int, l: int) -> bool:
        """Closures meet inside the horizon; the ground-truth parallelism."""
        inf = self._infinity[k]
        return inf is not None and inf == self._infinity[l]

    def parallel_table(self) -> list[int]:
        """Row ``k`` holds the bitmask of lines parallel to ``k``."""
        fibers: dict[int, int] = {}
        for k, inf in enumerate(self._infinity):
            if inf is not None:
                fibers[inf] = fibers.get(inf, 0) | (1 << k)
        return [0 if inf is None else fibers[inf] for inf in self._infinity]

    def deep_points(self) -> int:
        """Horizon points that no proper line reaches."""
        covered = 0
        for inf in self._infinity:
            if inf is not None:
                covered |= 1 << inf
        return self.horizon & ~covered

    # -- planes --------------------------------------------------------------

    def planes(self) -> list[PlaneRecord]:
        if self._planes is None:
            self._planes = [
                PlaneRecord(m, m & self.proper_mask, m & self.horizon)
                for m in self.base.singular_planes()
                if m & self.proper_mask
            ]
        return self._planes

    def plane_lines(self, pi: int) -> int:
        """Bitmask of proper line ids whose trace lies inside plane ``pi``."""
        if self._plane_lines is None:
            self._plane_lines = []
            for rec in self.planes():
                m = 0
                for k, trace in enumerate(self.line_trace):
                    if not trace & ~rec.closure:
                        m |= 1 << k
                self._plane_lines.append(m)
        return self._plane_lines[pi]

    def semiaffine_planes(self) -> list[int]:
        """Ids of planes containing at least one affine line."""
        if self._semiaffine is None:
            out = []
            for pi in range(len(self.planes())):
                if any(self._infinity[k] is not None for k in bits(self.plane_lines(pi))):
                    out.append(pi)
            self._semiaffine = out
        return self._semiaffine

    def plane_horizon(self, pi: int) -> int:
        """Points at infinity realized by the affine lines inside a plane."""
        out = 0
        for k in bits(self.plane_lines(pi)):
            inf = self._infinity[k]
            if inf is not None:
                out |= 1 << inf
        if out == 0:
            raise ValueError(f"plane {pi} is not semiaffine")
        return out

    def deep_lines(self) -> list[int]:
        """Base ids of horizon lines that are no plane's set of infinities."""
        realized = set()
        for pi in self.semiaffine_planes():
            realized.add(self.plane_horizon(pi))
        st = self.base.structure
        return [k for k in self.horizon_line_ids if st.line_masks[k] not in realized]

    # -- the two guaranteed searches -----------------------------------------

    def _require_parallel_pair(self, k: int, l: int) -> int:
        if k == l:
            raise ValueError("need two distinct lines")
        if not self.horizon_parallel(k, l):
            raise ValueError("lines are not parallel")
        return self._infinity[k]  # type: ignore[return-value]

    def avoiding_hyperplane(self, k: int, l: int) -> int:
        """A candidate hyperplane over the horizon avoiding both closures."""
        self._require_parallel_pair(k, l)
        st = self.base.structure
        if st.is_hyperplane(self.horizon):
            return self.horizon
        km = st.line_masks[self.line_closure[k]]
        lm = st.line_masks[self.line_closure[l]]
        for h in self.base.hyperplane_candidates():
            if not self.horizon & ~h and km & ~h and lm & ~h:
                return h
        raise LemmaFalsified(
            f"no candidate hyperplane over the horizon avoids the closures of lines {k} and {l}"
        )

    def plane_path(self, k: int, l: int) -> list[int]:
        """A chain of planes through the common infinity joining two lines.

        Nodes are planes whose closure contains the shared point at infinity;
        consecutive planes share a proper line; the first contains ``k`` and
        the last contains ``l``.
        """
        a = self._require_parallel_pair(k, l)
        nodes = [pi for pi in range(len(self.planes())) if (self.planes()[pi].closure >> a) & 1]
        starts = [pi for pi in nodes if (self.plane_lines(pi) >> k) & 1]
        targets = {pi for pi in nodes if (self.plane_lines(pi) >> l) & 1}
        parent: dict[int, int | None] = {pi: None for pi in starts}
        queue = list(starts)
        qi = 0
        while qi < len(queue):
            pi = queue[qi]
            qi += 1
            if pi in targets:
                path = [pi]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])  # type: ignore[arg-type]
                path.reverse()
                return path
            for pj in nodes:
                if pj not in parent and self.plane_lines(pi) & self.plane_lines(pj):
                    parent[pj] = pi
                    queue.append(pj)
        raise LemmaFalsified(
            f"no plane chain joins lines {k} and {l} through their point at infinity"
        )

    # -- reindexed structure ---------------------------------------------------

    def structure(self) -> IncidenceStructure:
        """The complement as a standalone structure on local point ids."""
        if self._structure is None:
            lines = [
                tuple(sorted(self.local_index[p] for p in bits(trace)))
                for trace in self.line_trace
            ]
            self._structure = IncidenceStructure(len(self.proper_points), lines)
        return self._structure


def build_complement(ps: PolarSpace, horizon: int) -> Complement:
    """The complement of a horizon subspace in a polar space."""
    return Complement(ps, horizon)


def drop_proper_line(c: Complement, k: int) -> Complement:
    """A copy of the complement with one proper line deleted from the base."""
    keep = [b for b in c._line_ids if b != c.line_closure[k]]
    return Complement(c.base, c.horizon, line_ids=keep)


def _parse_spec(ps: PolarSpace, tokens: list[str], pos: int) -> tuple[int, int]:
    if pos >= len(tokens):
        raise ValueError("horizon spec ended early")
    st = ps.structure
    head = tokens[pos]
    if head in ("point", "line", "plane", "perp"):
        if pos + 1 >= len(tokens):
            raise ValueError(f"{head} needs an id")
        try:
            idx = int(tokens[pos + 1])
        except ValueError:
            raise ValueError(f"{head} id must be an integer, got {tokens[pos + 1]!r}") from None
        if head == "point":
            if not 0 <= idx < st.n_points:
                raise ValueError(f"point id {idx} out of range")
            return 1 << idx, pos + 2
        if head == "perp":
            if not 0 <= idx < st.n_points:
                raise ValueError(f"perp id {idx} out of range")
            return st.adj[idx], pos + 2
        if head == "line":
            if not 0 <= idx < len(st.lines):
                raise ValueError(f"line id {idx} out of range")
            return st.line_masks[idx], pos + 2
        planes = ps.singular_planes()
        if not 0 <= idx < len(planes):
            raise ValueError(f"plane id {idx} out of range")
        return planes[idx], pos + 2
    if head == "meet":
        m1, pos = _parse_spec(ps, tokens, pos + 1)
        m2, pos = _parse_spec(ps, tokens, pos)
        return m1 & m2, pos
    if head == "span":
        if pos + 1 >= len(tokens):
            raise ValueError("span needs a point list")
        try:
            ids = [int(t) for t in tokens[pos + 1].split(",") if t]
        except ValueError:
            raise ValueError(f"span wants comma-separated ints, got {tokens[pos + 1]!r}") from None
        if not ids:
            raise ValueError("span needs at least one point id")
        for idx in ids:
            if not 0 <= idx < st.n_points:
                raise ValueError(f"point id {idx} out of range")
        return st.closure_of(mask_of(ids)), pos + 2
    raise ValueError(f"unknown horizon spec token {head!r}")


def resolve_horizon(ps: PolarSpace, text: str) -> int:
    """Parse the horizon mini-language into a point set.

    Grammar: ``point N`` | ``line N`` | ``plane N`` | ``perp N`` |
    ``meet <spec> <spec>`` | ``span N,N,...``.
    """
    tokens = text.split()
    if not tokens:
        return 0
    mask, pos = _parse_spec(ps, tokens, 0)
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in horizon spec: {' '.join(tokens[pos:])}")
    return mask
