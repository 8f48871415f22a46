"""Isomorphism checking and the executable property battery.

Everything here distrusts the construction code on purpose: ground truth is
recomputed from closures and the base space, intrinsic results are compared
against it, and failures carry witnesses instead of raising.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass

from .complement import Complement
from .errors import IntegrityError, LemmaFalsified
from .incidence import IncidenceStructure, bits
from .polar import _partial_linear_witness
from .reconstruct import Parallelism, canonical_map, reconstruct

__all__ = ["CheckResult", "is_isomorphism", "find_isomorphism", "run_lemma_battery"]


@dataclass
class CheckResult:
    check_id: str
    status: str  # pass | fail | skip
    witness: dict | None = None
    elapsed_ms: float = 0.0

    def as_dict(self, include_elapsed: bool = False) -> dict:
        out: dict = {"check_id": self.check_id, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if include_elapsed:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


# -- isomorphism ---------------------------------------------------------------


def is_isomorphism(
    a: IncidenceStructure, b: IncidenceStructure, mapping: dict[int, int]
) -> tuple[bool, dict]:
    """Check a point bijection line-by-line; certificate or first violation."""
    if set(mapping.keys()) != set(range(a.n_points)):
        raise ValueError("mapping must be total on the first structure's points")
    values = set(mapping.values())
    if len(values) != len(mapping) or a.n_points != b.n_points:
        raise ValueError("mapping must be a bijection between equal point sets")
    if values and (min(values) < 0 or max(values) >= b.n_points):
        raise ValueError("mapping hits out-of-range points")

    images = [tuple(sorted(mapping[p] for p in line)) for line in a.lines]
    image_count = Counter(images)
    target_count = Counter(b.lines)
    if image_count != target_count:
        for i, img in enumerate(images):
            if image_count[img] > target_count.get(img, 0):
                return False, {
                    "line": i,
                    "image": list(img),
                    "reason": "image is not a line of the target",
                }
        for line, cnt in target_count.items():
            if image_count.get(line, 0) < cnt:
                return False, {
                    "target_line": list(line),
                    "reason": "no line maps onto this target line",
                }
    buckets: dict[tuple[int, ...], list[int]] = {}
    for j, line in enumerate(b.lines):
        buckets.setdefault(line, []).append(j)
    cursor: dict[tuple[int, ...], int] = {}
    line_map = {}
    for i, img in enumerate(images):
        k = cursor.get(img, 0)
        cursor[img] = k + 1
        line_map[i] = buckets[img][k]
    return True, {"line_map": line_map}


def _joint_colors(a: IncidenceStructure, b: IncidenceStructure) -> tuple[list[int], list[int]]:
    """Iterated refinement of point colors, shared across both structures."""

    def initial(st: IncidenceStructure, table: dict) -> list[int]:
        out = []
        for p in range(st.n_points):
            key = tuple(sorted(len(st.lines[i]) for i in st.lines_at(p)))
            out.append(table.setdefault(key, len(table)))
        return out

    table: dict = {}
    ca = initial(a, table)
    cb = initial(b, table)
    n_colors = len(table)
    while True:
        sig_table: dict = {}

        def next_colors(st: IncidenceStructure, colors: list[int]) -> list[int]:
            out = []
            for p in range(st.n_points):
                profiles = sorted(
                    tuple(sorted(colors[x] for x in st.lines[i])) for i in st.lines_at(p)
                )
                key = (colors[p], tuple(profiles))
                out.append(sig_table.setdefault(key, len(sig_table)))
            return out

        na = next_colors(a, ca)
        nb = next_colors(b, cb)
        if len(sig_table) == n_colors:
            return na, nb
        n_colors = len(sig_table)
        ca, cb = na, nb


def find_isomorphism(a: IncidenceStructure, b: IncidenceStructure) -> dict[int, int] | None:
    """Backtracking isomorphism search with color-refinement pruning.

    Deterministic: candidate orders are fixed by point ids.  Returns a point
    mapping validated by :func:`is_isomorphism`, or None when the search
    space is exhausted.
    """
    if a.n_points != b.n_points or len(a.lines) != len(b.lines):
        return None
    if sorted(len(l) for l in a.lines) != sorted(len(l) for l in b.lines):
        return None
    ca, cb = _joint_colors(a, b)
    if Counter(ca) != Counter(cb):
        return None

    by_color: dict[int, list[int]] = {}
    for v in range(b.n_points):
        by_color.setdefault(cb[v], []).append(v)

    # Static assignment order: most-constrained first, preferring points
    # attached to already-ordered ones.
    order: list[int] = []
    placed = [False] * a.n_points
    for _ in range(a.n_points):
        best = None
        best_key = None
        for p in range(a.n_points):
            if placed[p]:
                continue
            attached = sum(1 for q in order if (a.adj[p] >> q) & 1)
            key = (-attached, len(by_color.get(ca[p], ())), p)
            if best_key is None or key < best_key:
                best, best_key = p, key
        order.append(best)  # type: ignore[arg-type]
        placed[best] = True  # type: ignore[index]

    pos = {p: i for i, p in enumerate(order)}
    # Lines become checkable once their last point (in assignment order) maps.
    trigger: list[list[int]] = [[] for _ in range(a.n_points)]
    for i, line in enumerate(a.lines):
        last = max(line, key=lambda p: pos[p])
        trigger[last].append(i)
    b_lines = set(b.lines)

    image = [-1] * a.n_points
    used = [False] * b.n_points

    def attempt(depth: int) -> bool:
        if depth == a.n_points:
            return True
        p = order[depth]
        for v in by_color.get(ca[p], ()):
            if used[v] or cb[v] != ca[p]:
                continue
            ok = True
            for q in order[:depth]:
                if ((a.adj[p] >> q) & 1) != ((b.adj[v] >> image[q]) & 1):
                    ok = False
                    break
            if not ok:
                continue
            image[p] = v
            used[v] = True
            complete = True
            for li in trigger[p]:
                img = tuple(sorted(image[x] for x in a.lines[li]))
                if img not in b_lines:
                    complete = False
                    break
            if complete and attempt(depth + 1):
                return True
            image[p] = -1
            used[v] = False
        return False

    if not attempt(0):
        return None
    mapping = {p: image[p] for p in range(a.n_points)}
    ok, _ = is_isomorphism(a, b, mapping)
    return mapping if ok else None


# -- the battery ---------------------------------------------------------------


def _timed(check_id: str, fn) -> CheckResult:
    t0 = time.perf_counter()
    try:
        witness = fn()
        status = "pass" if witness is None else "fail"
        if witness is not None and witness.get("status") == "skip":
            status = "skip"
            witness = witness.get("witness")
    except (LemmaFalsified, IntegrityError, ValueError) as exc:
        status, witness = "fail", {"error": str(exc)}
    return CheckResult(check_id, status, witness, (time.perf_counter() - t0) * 1000.0)


def _ground_direction(comp: Complement, members: tuple[int, ...]) -> int | None:
    dirs = set()
    for k in members:
        if not comp.is_affine(k):
            return None
        dirs.add(comp.point_at_infinity(k))
    return dirs.pop() if len(dirs) == 1 else None


def _horizon_line_between(comp: Complement, d1: int, d2: int) -> int | None:
    """Base id of the line through two horizon points if it lies in the horizon."""
    st = comp.base.structure
    if d1 == d2 or not st.collinear(d1, d2):
        return None
    li = st.line_through(d1, d2)
    if li is None or st.line_masks[li] & ~comp.horizon:
        return None
    return li


def run_lemma_battery(
    comp: Complement,
    *,
    seed: int = 0,
    exhaustive: bool = False,
    pair_cap: int = 500,
    class_limit: int = 40,
    triple_cap: int = 2000,
) -> list[CheckResult]:
    """Run every verified property of the complement; report, never raise."""
    st = comp.base.structure
    rnd = random.Random(seed)
    results: list[CheckResult] = []
    par_holder: dict[str, Parallelism] = {}

    # Over a hyperplane horizon only the ground-side properties are in scope:
    # recovery is delegated, and the crossing configuration has no room in
    # the order-2 affine planes such a horizon leaves behind.
    delegated = st.is_hyperplane(comp.horizon)
    DELEGATED = {"status": "skip", "witness": {"reason": "hyperplane horizon: delegated case"}}

    def par() -> Parallelism:
        if "par" not in par_holder:
            par_holder["par"] = Parallelism(comp)
        return par_holder["par"]

    def check_partial_linear() -> dict | None:
        return _partial_linear_witness(comp.structure())

    def check_affine_fibration() -> dict | None:
        w = comp.horizon
        closures = [st.line_masks[b] for b in comp.line_closure]
        for k, cm in enumerate(closures):
            cnt = (cm & w).bit_count()
            if cnt > 1:
                return {"line": k, "reason": f"closure meets the horizon in {cnt} points"}
            if (cnt == 1) != comp.is_affine(k):
                return {"line": k, "reason": "affine flag disagrees with the closure"}
        for k in range(comp.n_lines):
            for l in range(k, comp.n_lines):
                ground = bool(closures[k] & closures[l] & w)
                if ground != comp.horizon_parallel(k, l):
                    return {"lines": [k, l], "reason": "parallel table disagrees with closures"}
        return None

    def check_deep_points() -> dict | None:
        deep = comp.deep_points()
        if st.is_hyperplane(comp.horizon):
            if deep.bit_count() > 1:
                return {"deep_points": list(bits(deep)), "reason": "more than one deep point"}
            if deep & ~st.radical_of(comp.horizon):
                return {"deep_points": list(bits(deep)), "reason": "deep point off the radical"}
            return None
        if deep:
            return {"deep_points": list(bits(deep)), "reason": "deep points on a non-hyperplane"}
        if not st.is_spiky(comp.horizon):
            return {"reason": "horizon is not spiky"}
        return None

    def parallel_pairs() -> list[tuple[int, int]]:
        fibers: dict[int, list[int]] = {}
        for k in comp.affine_lines():
            fibers.setdefault(comp.point_at_infinity(k), []).append(k)
        pairs = [
            (k, l)
            for members in fibers.values()
            for i, k in enumerate(members)
            for l in members[i + 1 :]
        ]
        if not exhaustive and len(pairs) > pair_cap:
            pairs = rnd.sample(pairs, pair_cap)
            pairs.sort()
        return pairs

    def check_avoiding_hyperplane() -> dict | None:
        for k, l in parallel_pairs():
            h = comp.avoiding_hyperplane(k, l)
            km = st.line_masks[comp.line_closure[k]]
            lm = st.line_masks[comp.line_closure[l]]
            if comp.horizon & ~h:
                return {"lines": [k, l], "reason": "hyperplane does not contain the horizon"}
            if not km & ~h or not lm & ~h:
                return {"lines": [k, l], "reason": "hyperplane contains a closure"}
            if not st.is_hyperplane(h):
                return {"lines": [k, l], "reason": "candidate is not a hyperplane"}
        return None

    def check_plane_chains() -> dict | None:
        for k, l in parallel_pairs():
            path = comp.plane_path(k, l)
            if not path:
                return {"lines": [k, l], "reason": "empty plane chain"}
            a = comp.point_at_infinity(k)
            for pi in path:
                if not (comp.planes()[pi].closure >> a) & 1:
                    return {"lines": [k, l], "plane": pi, "reason": "plane misses the infinity"}
            if not (comp.plane_lines(path[0]) >> k) & 1:
                return {"lines": [k, l], "reason": "first plane misses the first line"}
            if not (comp.plane_lines(path[-1]) >> l) & 1:
                return {"lines": [k, l], "reason": "last plane misses the second line"}
            for pi, pj in zip(path, path[1:]):
                if not comp.plane_lines(pi) & comp.plane_lines(pj):
                    return {"lines": [k, l], "planes": [pi, pj], "reason": "no shared line"}
        return None

    def check_parallel_tables_match() -> dict | None:
        if delegated:
            return DELEGATED
        intrinsic = par().table()
        ground = comp.parallel_table()
        for k in range(comp.n_lines):
            if intrinsic[k] != ground[k]:
                diff = intrinsic[k] ^ ground[k]
                return {
                    "line": k,
                    "disagreeing_lines": list(bits(diff))[:8],
                    "reason": "intrinsic and ground parallelism differ",
                }
        return None

    def check_self_parallel_affine() -> dict | None:
        if delegated:
            return DELEGATED
        for k in comp.affine_lines():
            if not par().parallel(k, k):
                return {"line": k, "reason": "affine line is not self-parallel"}
        return None

    def check_affine_detection() -> dict | None:
        if delegated:
            return DELEGATED
        intrinsic = set(par().affine_ids())
        ground = set(comp.affine_lines())
        if intrinsic != ground:
            return {
                "only_intrinsic": sorted(intrinsic - ground)[:8],
                "only_ground": sorted(ground - intrinsic)[:8],
            }
        return None

    def class_directions() -> list[int] | dict:
        dirs = []
        for c, members in enumerate(par().classes):
            d = _ground_direction(comp, members)
            if d is None:
                return {"class": c, "reason": "class has no single ground direction"}
            dirs.append(d)
        return dirs

    def check_deep_line_equivalence() -> dict | None:
        if delegated:
            return DELEGATED
        dirs = class_directions()
        if isinstance(dirs, dict):
            return dirs
        deep = set(comp.deep_lines())
        p = par()
        for c1 in range(p.n_classes):
            for c2 in range(c1 + 1, p.n_classes):
                li = _horizon_line_between(comp, dirs[c1], dirs[c2])
                expected = li is not None and li in deep
                if p.equiv(c1, c2) != expected:
                    return {
                        "classes": [c1, c2],
                        "directions": [dirs[c1], dirs[c2]],
                        "expected": expected,
                    }
        return None

    def check_equiv_triples_collinear() -> dict | None:
        if delegated:
            return DELEGATED
        dirs = class_directions()
        if isinstance(dirs, dict):
            return dirs
        p = par()
        related = [
            (c1, c2)
            for c1 in range(p.n_classes)
            for c2 in range(c1 + 1, p.n_classes)
            if p.equiv(c1, c2)
        ]
        by_first: dict[int, list[int]] = {}
        for c1, c2 in related:
            by_first.setdefault(c1, []).append(c2)
        for c1, c2 in related:
            for c3 in by_first.get(c2, ()):
                if not p.equiv(c1, c3):
                    continue
                line = st.line_through(dirs[c1], dirs[c2]) if st.collinear(dirs[c1], dirs[c2]) else None
                on_line = line is not None and (st.line_masks[line] >> dirs[c3]) & 1
                if not on_line:
                    return {"classes": [c1, c2, c3], "directions": [dirs[c1], dirs[c2], dirs[c3]]}
        return None

    def check_ternary_collinearity() -> dict | None:
        if delegated:
            return DELEGATED
        dirs = class_directions()
        if isinstance(dirs, dict):
            return dirs
        p = par()
        nc = p.n_classes
        if nc < 3:
            return None
        if exhaustive or nc <= class_limit:
            triples = [
                (a, b, c)
                for a in range(nc)
                for b in range(a + 1, nc)
                for c in range(b + 1, nc)
            ]
        else:
            chosen = set()
            while len(chosen) < triple_cap:
                chosen.add(tuple(sorted(rnd.sample(range(nc), 3))))
            triples = sorted(chosen)
        for c1, c2, c3 in triples:
            line = st.line_through(dirs[c1], dirs[c2]) if st.collinear(dirs[c1], dirs[c2]) else None
            ground = line is not None and (st.line_masks[line] >> dirs[c3]) & 1
            if p.ternary_collinear(c1, c2, c3) != bool(ground):
                return {
                    "classes": [c1, c2, c3],
                    "directions": [dirs[c1], dirs[c2], dirs[c3]],
                    "ground_collinear": bool(ground),
                }
        return None

    def check_new_line_families() -> dict | None:
        if delegated:
            return DELEGATED
        dirs = class_directions()
        if isinstance(dirs, dict):
            return dirs
        p = par()
        prime = p.lines_prime()
        second = p.lines_second()
        if len(set(prime)) != len(prime):
            return {"reason": "duplicate sets in the first new family"}
        if len(set(second)) != len(second):
            return {"reason": "duplicate sets in the second new family"}
        overlap = set(prime) & set(second)
        if overlap:
            return {"set": list(next(iter(overlap))), "reason": "families overlap"}
        q = comp.base.form.field.q
        deep = comp.deep_lines()
        deep_masks = {st.line_masks[li]: li for li in deep}
        seen_deep = {}
        for group in prime:
            if len(group) != q + 1:
                return {"set": list(group), "reason": f"expected {q + 1} classes"}
            dmask = 0
            for c in group:
                dmask |= 1 << dirs[c]
            if dmask not in deep_masks:
                return {"set": list(group), "reason": "directions are not a deep line"}
            li = deep_masks[dmask]
            if li in seen_deep:
                return {"set": list(group), "reason": "deep line recovered twice"}
            seen_deep[li] = group
        missing = [li for li in deep if li not in seen_deep]
        if missing:
            return {"deep_lines": missing, "reason": "deep lines not recovered"}
        expected_second = set()
        for pi in comp.semiaffine_planes():
            hz = comp.plane_horizon(pi)
            if hz.bit_count() < 2:
                continue
            dir_class = {d: c for c, d in enumerate(dirs)}
            expected_second.add(tuple(sorted(dir_class[d] for d in bits(hz))))
        if expected_second != set(second):
            return {
                "missing": [list(g) for g in sorted(expected_second - set(second))][:4],
                "extra": [list(g) for g in sorted(set(second) - expected_second)][:4],
            }
        return None

    def check_class_point_bijection() -> dict | None:
        if delegated:
            return DELEGATED
        dirs = class_directions()
        if isinstance(dirs, dict):
            return dirs
        if len(set(dirs)) != len(dirs):
            return {"reason": "two classes share a direction"}
        covered = 0
        for d in dirs:
            covered |= 1 << d
        expected = comp.horizon & ~comp.deep_points()
        if covered != expected:
            return {
                "uncovered": list(bits(expected & ~covered))[:8],
                "unexpected": list(bits(covered & ~expected))[:8],
            }
        return None

    def check_ambient_recovery() -> dict | None:
        if delegated:
            return DELEGATED
        recon = reconstruct(comp, par())
        mapping = canonical_map(recon)
        ok, cert = is_isomorphism(recon.structure, st, mapping)
        if not ok:
            return cert
        return None

    checks = [
        ("partial_linear", check_partial_linear),
        ("affine_fibration", check_affine_fibration),
        ("deep_points", check_deep_points),
        ("avoiding_hyperplane", check_avoiding_hyperplane),
        ("plane_chains", check_plane_chains),
        ("parallel_tables_match", check_parallel_tables_match),
        ("self_parallel_affine", check_self_parallel_affine),
        ("affine_detection", check_affine_detection),
        ("deep_line_equivalence", check_deep_line_equivalence),
        ("equiv_triples_collinear", check_equiv_triples_collinear),
        ("ternary_collinearity", check_ternary_collinearity),
        ("new_line_families", check_new_line_families),
        ("class_point_bijection", check_class_point_bijection),
        ("ambient_recovery", check_ambient_recovery),
    ]
    for check_id, fn in checks:
        results.append(_timed(check_id, fn))
    return results
