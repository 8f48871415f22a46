"""Batch command-line front end.

Verbs:

* ``build``    construct a polar space and emit its incidence JSON
* ``run``      build, cut out a horizon, and run the requested tasks
* ``horizons`` list candidate horizon specs for a space

Form descriptors: ``sp:D:Q`` (symplectic, vector dimension D), ``q+:N:Q`` /
``q-:N:Q`` / ``q:N:Q`` (hyperbolic / elliptic / parabolic quadric in
projective dimension N) and ``herm:N:Q`` (hermitian, Q a square).  Horizons
use the mini-language of :func:`polarcomp.complement.resolve_horizon`.

All JSON output is canonical: sorted keys, two-space indent, LF endings.
Exit codes: 0 all good, 1 internal error, 2 configuration error, 3 horizon
refusal, 10+N when N checks failed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .complement import Complement, build_complement, resolve_horizon
from .errors import ConfigurationError, HorizonRefusal, IntegrityError
from .incidence import IncidenceStructure, bits
from .polar import (
    FormSpec,
    PolarSpace,
    build_polar,
    check_polar_axioms,
    elliptic_form,
    hermitian_form,
    hyperbolic_form,
    parabolic_form,
    symplectic_form,
)
from .algebra import GF
from .reconstruct import Parallelism, canonical_map, reconstruct
from .verify import find_isomorphism, is_isomorphism, run_lemma_battery

DEFAULT_TASKS = ("axioms", "complement", "lemmas", "reconstruct", "verify")

_FORM_BUILDERS = {
    "sp": symplectic_form,
    "q": parabolic_form,
    "q+": hyperbolic_form,
    "q-": elliptic_form,
    "herm": hermitian_form,
}


def parse_form(desc: str) -> FormSpec:
    """Turn a descriptor like ``sp:6:2`` into a form."""
    parts = desc.split(":")
    if len(parts) != 3:
        raise ConfigurationError(f"form descriptor {desc!r} is not kind:dim:order")
    kind, dim_s, q_s = parts
    if kind not in _FORM_BUILDERS:
        raise ConfigurationError(f"unknown form kind {kind!r}")
    try:
        dim = int(dim_s)
        q = int(q_s)
    except ValueError:
        raise ConfigurationError(f"non-integer fields in form descriptor {desc!r}") from None
    try:
        field = GF.of_order(q)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None
    return _FORM_BUILDERS[kind](dim, field)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(payload, out: str | None) -> None:
    text = canonical_json(payload)
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def structure_payload(ps: PolarSpace, desc: str) -> dict:
    return {
        "meta": {
            "kind": ps.form.kind,
            "field_order": ps.form.field.q,
            "ambient_dim": ps.ambient_dim,
            "rank": ps.rank,
            "n_lines": len(ps.structure.lines),
        },
        "n_points": ps.structure.n_points,
        "lines": [list(line) for line in ps.structure.lines],
        "form": desc,
    }


def load_incidence(path: str) -> IncidenceStructure:
    """Read back the JSON written by ``build`` (or any {n_points, lines})."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return IncidenceStructure(data["n_points"], data["lines"])


def cmd_build(args) -> int:
    ps = build_polar(parse_form(args.form))
    _emit(structure_payload(ps, args.form), args.out)
    return 0


def _complement_payload(comp: Complement) -> dict:
    st = comp.base.structure
    return {
        "horizon_points": list(bits(comp.horizon)),
        "n_proper_points": len(comp.proper_points),
        "n_proper_lines": comp.n_lines,
        "affine_lines": comp.affine_lines(),
        "deep_points": list(bits(comp.deep_points())),
        "deep_lines": [list(st.lines[li]) for li in comp.deep_lines()],
        "n_planes": len(comp.planes()),
        "n_semiaffine_planes": len(comp.semiaffine_planes()),
        "horizon_is_hyperplane": st.is_hyperplane(comp.horizon),
    }


def _run_single(
    ps: PolarSpace,
    horizon: int,
    tasks: list[str],
    outdir: Path,
    *,
    seed: int,
    exhaustive: bool,
    timings: bool,
) -> int:
    """Run the pipeline for one configuration; returns the failed-check count."""
    outdir.mkdir(parents=True, exist_ok=True)
    failed = 0
    comp: Complement | None = None

    def need_comp() -> Complement:
        nonlocal comp
        if comp is None:
            comp = build_complement(ps, horizon)
        return comp

    if "axioms" in tasks:
        report = check_polar_axioms(ps)
        _emit(report.as_dict(), str(outdir / "axioms.json"))
        if not report.all_ok:
            failed += 1

    if "complement" in tasks:
        _emit(_complement_payload(need_comp()), str(outdir / "complement.json"))

    if "lemmas" in tasks:
        checks = run_lemma_battery(need_comp(), seed=seed, exhaustive=exhaustive)
        n_bad = sum(1 for c in checks if c.status == "fail")
        failed += n_bad
        _emit(
            {
                "checks": [c.as_dict(include_elapsed=timings) for c in checks],
                "failed": n_bad,
            },
            str(outdir / "lemma_battery.json"),
        )

    recon = None
    if "reconstruct" in tasks or "verify" in tasks:
        recon = reconstruct(need_comp())

    if "reconstruct" in tasks and recon is not None:
        try:
            cmap = canonical_map(recon)
            map_pairs = [[k, cmap[k]] for k in sorted(cmap)]
            map_error = None
        except IntegrityError as exc:
            map_pairs = None
            map_error = str(exc)
            failed += 1
        payload = {
            "n_points": recon.structure.n_points,
            "n_proper_points": recon.n_proper,
            "families": {
                name: [list(line) for line in lines]
                for name, lines in recon.families.items()
            },
            "canonical_map": map_pairs,
        }
        if map_error is not None:
            payload["canonical_map_error"] = map_error
        _emit(payload, str(outdir / "reconstruction.json"))

    if "verify" in tasks and recon is not None:
        payload: dict = {}
        try:
            cmap = canonical_map(recon)
            ok, cert = is_isomorphism(recon.structure, ps.structure, cmap)
            payload["canonical_isomorphism"] = ok
            if not ok:
                payload["violation"] = cert
                failed += 1
        except IntegrityError as exc:
            payload["canonical_isomorphism"] = False
            payload["violation"] = {"error": str(exc)}
            failed += 1
        found = find_isomorphism(ps.structure, recon.structure)
        payload["independent_search"] = {
            "found": found is not None,
            "mapping": None if found is None else [[k, found[k]] for k in sorted(found)],
        }
        if found is None:
            failed += 1
        _emit(payload, str(outdir / "verification.json"))

    return failed


def _parse_tasks(text: str) -> list[str]:
    tasks = [t for t in text.split(",") if t]
    if not tasks:
        raise ConfigurationError("no tasks requested")
    bad = [t for t in tasks if t not in DEFAULT_TASKS]
    if bad:
        raise ConfigurationError(f"unknown tasks: {', '.join(bad)}")
    return tasks


def _noncollinear_pair(ps: PolarSpace) -> tuple[int, int]:
    st = ps.structure
    for j in range(1, st.n_points):
        if not st.collinear(0, j):
            return 0, j
    raise ConfigurationError("space has no noncollinear pair")


def default_suite() -> list[tuple[str, str]]:
    """The shipped configurations: three spaces, three horizon shapes each.

    Horizons are a single point, a full line, and the span of a
    noncollinear point pair (resolved per space at run time).
    """
    out = []
    for desc in ("sp:6:2", "q+:5:2", "q:6:2"):
        out.append((desc, "point 0"))
        out.append((desc, "line 0"))
        out.append((desc, "span-noncollinear"))
    return out


def _sanitize(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9+-]+", "_", text).strip("_")


def cmd_run(args) -> int:
    tasks = _parse_tasks(args.tasks)
    if args.suite:
        total_failed = 0
        base_out = Path(args.out or "suite-out")
        spaces: dict[str, PolarSpace] = {}
        for desc, horizon_spec in default_suite():
            if desc not in spaces:
                spaces[desc] = build_polar(parse_form(desc))
            ps = spaces[desc]
            if horizon_spec == "span-noncollinear":
                a, b = _noncollinear_pair(ps)
                horizon_spec = f"span {a},{b}"
            try:
                horizon = resolve_horizon(ps, horizon_spec)
            except ValueError as exc:
                raise ConfigurationError(str(exc)) from None
            subdir = base_out / _sanitize(desc) / _sanitize(horizon_spec)
            total_failed += _run_single(
                ps,
                horizon,
                tasks,
                subdir,
                seed=args.seed,
                exhaustive=args.exhaustive,
                timings=args.timings,
            )
        return 0 if total_failed == 0 else 10 + total_failed
    if args.form is None or args.horizon is None:
        raise ConfigurationError("run needs --form and --horizon (or --suite)")
    ps = build_polar(parse_form(args.form))
    try:
        horizon = resolve_horizon(ps, args.horizon)
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from None
    failed = _run_single(
        ps,
        horizon,
        tasks,
        Path(args.out or "run-out"),
        seed=args.seed,
        exhaustive=args.exhaustive,
        timings=args.timings,
    )
    return 0 if failed == 0 else 10 + failed


def cmd_horizons(args) -> int:
    ps = build_polar(parse_form(args.form))
    st = ps.structure
    kind = args.kind
    entries = []
    if kind == "points":
        entries = [{"spec": f"point {i}", "size": 1} for i in range(st.n_points)]
    elif kind == "lines":
        entries = [
            {"spec": f"line {i}", "size": len(line)} for i, line in enumerate(st.lines)
        ]
    elif kind == "planes":
        entries = [
            {"spec": f"plane {i}", "size": m.bit_count()}
            for i, m in enumerate(ps.singular_planes())
        ]
    elif kind == "perps":
        entries = [
            {"spec": f"perp {i}", "size": st.adj[i].bit_count()} for i in range(st.n_points)
        ]
    elif kind == "perp-intersections":
        for i in range(st.n_points):
            for j in range(i + 1, st.n_points):
                size = (st.adj[i] & st.adj[j]).bit_count()
                entries.append({"spec": f"meet perp {i} perp {j}", "size": size})
    else:
        raise ConfigurationError(f"unknown horizon kind {kind!r}")
    _emit({"form": args.form, "kind": kind, "entries": entries}, args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarcomp",
        description="Polar spaces, subspace complements, and their reconstruction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="construct a polar space, emit incidence JSON")
    p_build.add_argument("--form", required=True, help="form descriptor, e.g. sp:6:2")
    p_build.add_argument("--out", default=None, help="output file (default: stdout)")
    p_build.set_defaults(func=cmd_build)

    p_run = sub.add_parser("run", help="cut out a horizon and run tasks")
    p_run.add_argument("--form", default=None, help="form descriptor")
    p_run.add_argument("--horizon", default=None, help="horizon spec, e.g. 'point 5'")
    p_run.add_argument(
        "--tasks",
        default=",".join(DEFAULT_TASKS),
        help=f"comma list from {{{','.join(DEFAULT_TASKS)}}}",
    )
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p_run.add_argument(
        "--exhaustive", action="store_true", help="full pair/triple enumeration"
    )
    p_run.add_argument(
        "--timings", action="store_true", help="include elapsed times in reports"
    )
    p_run.add_argument(
        "--suite", action="store_true", help="run the shipped default configurations"
    )
    p_run.set_defaults(func=cmd_run)

    p_hor = sub.add_parser("horizons", help="list candidate horizons")
    p_hor.add_argument("--form", required=True)
    p_hor.add_argument(
        "--kind",
        default="points",
        choices=["points", "lines", "planes", "perps", "perp-intersections"],
    )
    p_hor.add_argument("--out", default=None)
    p_hor.set_defaults(func=cmd_horizons)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HorizonRefusal as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - safety net
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
