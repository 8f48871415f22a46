"""Intrinsic parallelism, the derived relations, and reassembly of the base.

The order-2 symplectic complements cover the plain cases; the order-3
hyperbolic line-perp horizon has a genuinely unreachable horizon line and
so exercises the first new-line family.  Two pinned cases document that the
crossing-configuration relation underdetects parallelism on perp-meet
horizons at order 2; those horizons are deliberately not in the default
suite.
"""

import pytest

from polarcomp import (
    HorizonRefusal,
    Parallelism,
    build_complement,
    canonical_map,
    intrinsic_affine_lines,
    is_isomorphism,
    parallel_closure,
    reconstruct,
    star_parallel,
)
from polarcomp.incidence import bits


# ---------------------------------------------------------------------------
# the relation itself
# ---------------------------------------------------------------------------


def test_star_matches_precomputed_rows(comp_line, par_line):
    aff = comp_line.affine_lines()
    sample = aff[:6] + aff[20:24]
    for i, k in enumerate(sample):
        for l in sample[i + 1 :]:
            assert star_parallel(comp_line, k, l) == par_line.star(k, l)


def test_star_is_irreflexive_on_meeting_lines(comp_point, par_point):
    # lines sharing a proper point are never star-related
    k = comp_point.affine_lines()[0]
    p = next(iter(bits(comp_point.line_trace[k])))
    for l in bits(comp_point.lines_at_point(p)):
        if l != k:
            assert not par_point.star(k, l)
            assert not star_parallel(comp_point, k, l)


def test_point_horizon_single_class(comp_point, par_point):
    assert par_point.n_classes == 1
    assert par_point.classes == [tuple(comp_point.affine_lines())]
    assert par_point.table() == comp_point.parallel_table()
    assert par_point.is_affine(comp_point.affine_lines()[0])
    assert not par_point.is_affine(300)
    assert par_point.lines_prime() == []
    assert par_point.lines_second() == []


def test_affine_detection_matches_ground(comp_point, comp_line, par_point, par_line):
    assert set(par_point.affine_ids()) == set(comp_point.affine_lines())
    assert set(par_line.affine_ids()) == set(comp_line.affine_lines())
    assert intrinsic_affine_lines(comp_point) == par_point.affine_ids()


def test_parallel_closure_wrapper(comp_line, par_line):
    table, classes = parallel_closure(comp_line)
    assert table == par_line.table()
    assert classes.classes == par_line.classes
    assert classes.class_id == par_line.class_id


def test_line_horizon_classes(comp_line, par_line):
    assert par_line.n_classes == 3
    # classes are fibers over the three horizon points
    for members in par_line.classes:
        dirs = {comp_line.point_at_infinity(k) for k in members}
        assert len(dirs) == 1
    assert par_line.table() == comp_line.parallel_table()


def test_parallel_is_reflexive_exactly_on_affine(par_line, comp_line):
    for k in range(comp_line.n_lines):
        assert par_line.parallel(k, k) == comp_line.is_affine(k)


# ---------------------------------------------------------------------------
# derived relations
# ---------------------------------------------------------------------------


def test_anti_euclidean_requires_affine_input(par_point, comp_point):
    aff = comp_point.affine_lines()
    with pytest.raises(ValueError, match="affine"):
        par_point.anti_euclidean(aff[0], 300)
    # one shared direction: representatives always see each other
    assert not par_point.anti_euclidean(aff[0], aff[1])


def test_equiv_is_antireflexive(par_line):
    for c in range(par_line.n_classes):
        assert not par_line.equiv(c, c)


def test_line_horizon_has_no_equiv_pairs(par_line):
    # the horizon line is realized by the planes over it, hence not deep,
    # and the relation on classes must agree
    assert [
        (a, b)
        for a in range(3)
        for b in range(a + 1, 3)
        if par_line.equiv(a, b)
    ] == []
    assert par_line.lines_prime() == []


def test_line_horizon_second_family(par_line):
    # every semiaffine plane with a full direction triple sees the whole
    # horizon line, so one set survives deduplication
    assert par_line.lines_second() == [(0, 1, 2)]


def test_ternary_on_the_line_horizon(par_line):
    assert par_line.ternary_collinear(0, 1, 2)
    with pytest.raises(ValueError, match="distinct"):
        par_line.ternary_collinear(0, 1, 1)


def test_reconstruct_point_horizon(comp_point, par_point, sp62):
    recon = reconstruct(comp_point, par_point)
    st = recon.structure
    assert st.n_points == 63
    assert len(st.lines) == 315
    assert recon.n_proper == 62
    assert len(recon.families["extended"]) == 315
    assert recon.families["prime"] == []
    assert recon.families["second"] == []
    mapping = canonical_map(recon)
    assert mapping[recon.n_proper] == 0  # the class lands on the removed point
    ok, cert = is_isomorphism(st, sp62.structure, mapping)
    assert ok, cert


def test_reconstruct_line_horizon(comp_line, par_line, sp62):
    recon = reconstruct(comp_line, par_line)
    assert recon.structure.n_points == 63
    assert len(recon.structure.lines) == 315
    assert len(recon.families["second"]) == 1
    ok, cert = is_isomorphism(recon.structure, sp62.structure, canonical_map(recon))
    assert ok, cert


def test_reconstruct_refuses_hyperplane_horizon(sp62):
    comp = build_complement(sp62, sp62.structure.adj[0])
    with pytest.raises(HorizonRefusal, match="delegated"):
        reconstruct(comp)


def test_reconstruct_empty_horizon(sp62):
    comp = build_complement(sp62, 0)
    recon = reconstruct(comp)
    assert recon.parallelism.n_classes == 0
    ok, _ = is_isomorphism(recon.structure, sp62.structure, canonical_map(recon))
    assert ok


# ---------------------------------------------------------------------------
# the deep-line configuration over order 3
# ---------------------------------------------------------------------------


def test_q53_line_perp_horizon_shape(comp_q53_lperp, q53):
    st = q53.structure
    assert comp_q53_lperp.horizon.bit_count() == 22
    assert len(comp_q53_lperp.proper_points) == 108
    assert comp_q53_lperp.n_lines == 495
    assert len(comp_q53_lperp.horizon_line_ids) == 25
    assert comp_q53_lperp.deep_points() == 0
    assert comp_q53_lperp.deep_lines() == [0]
    assert not st.is_hyperplane(comp_q53_lperp.horizon)


def test_q53_classes_and_tables(comp_q53_lperp, par_q53):
    assert par_q53.n_classes == 22
    assert par_q53.table() == comp_q53_lperp.parallel_table()
    assert set(par_q53.affine_ids()) == set(comp_q53_lperp.affine_lines())


def test_q53_prime_family_recovers_the_deep_line(comp_q53_lperp, par_q53, q53):
    prime = par_q53.lines_prime()
    assert prime == [(0, 1, 8, 9)]
    (group,) = prime
    assert len(group) == q53.form.field.q + 1
    # its directions are exactly the deep line
    dirs = set()
    for c in group:
        for k in par_q53.classes[c]:
            dirs.add(comp_q53_lperp.point_at_infinity(k))
    assert dirs == set(q53.structure.lines[0])
    # generating pairs are related, and so are all pairs inside the group
    for i, c1 in enumerate(group):
        for c2 in group[i + 1 :]:
            assert par_q53.equiv(c1, c2)


def test_q53_second_family(par_q53):
    second = par_q53.lines_second()
    assert len(second) == 24
    assert all(len(g) == 4 for g in second)
    assert set(second).isdisjoint(par_q53.lines_prime())


def test_q53_ternary_against_ground(comp_q53_lperp, par_q53, q53):
    st = q53.structure
    dirs = []
    for members in par_q53.classes:
        dirs.append(comp_q53_lperp.point_at_infinity(members[0]))
    checked = disagree = 0
    for a in range(0, 22, 3):
        for b in range(a + 1, 22, 2):
            for c in range(b + 1, 22):
                line = st.line_through(dirs[a], dirs[b]) if st.collinear(dirs[a], dirs[b]) else None
                ground = line is not None and (st.line_masks[line] >> dirs[c]) & 1
                checked += 1
                if par_q53.ternary_collinear(a, b, c) != bool(ground):
                    disagree += 1
    assert checked > 300
    assert disagree == 0


def test_q53_reconstruction_counts(comp_q53_lperp, par_q53, q53):
    recon = reconstruct(comp_q53_lperp, par_q53)
    assert recon.structure.n_points == 130
    assert len(recon.structure.lines) == 495 + 1 + 24
    ok, cert = is_isomorphism(recon.structure, q53.structure, canonical_map(recon))
    assert ok, cert


# ---------------------------------------------------------------------------
# pinned divergence on perp-meet horizons at order 2
# ---------------------------------------------------------------------------


def test_perp_meet_horizon_diverges_collinear_pair(sp62):
    st = sp62.structure
    comp = build_complement(sp62, st.adj[0] & st.adj[3])  # 0 and 3 share line 0
    assert comp.horizon.bit_count() == 15
    par = Parallelism(comp)
    ground_dirs = {comp.point_at_infinity(k) for k in comp.affine_lines()}
    assert len(ground_dirs) == 15
    assert par.n_classes == 12  # too few: some fibers are not connected
    assert par.table() != comp.parallel_table()


def test_perp_meet_horizon_diverges_noncollinear_pair(sp62):
    st = sp62.structure
    assert not st.collinear(0, 1)
    comp = build_complement(sp62, st.adj[0] & st.adj[1])
    par = Parallelism(comp)
    assert par.table() != comp.parallel_table()
