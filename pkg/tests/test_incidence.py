"""Bitset incidence structures: closures, perps, subspace predicates."""

import pytest

from polarcomp import IncidenceStructure, bits, mask_of

# The 7-point projective plane; every point pair lies on exactly one line.
FANO_LINES = [
    (0, 1, 2),
    (0, 3, 4),
    (0, 5, 6),
    (1, 3, 5),
    (1, 4, 6),
    (2, 3, 6),
    (2, 4, 5),
]


@pytest.fixture(scope="module")
def fano():
    return IncidenceStructure(7, FANO_LINES)


@pytest.fixture(scope="module")
def path2():
    """Two lines glued at point 2."""
    return IncidenceStructure(5, [(0, 1, 2), (2, 3, 4)])


def test_bits_and_mask_roundtrip():
    assert list(bits(mask_of([5, 1, 3]))) == [1, 3, 5]
    assert list(bits(0)) == []
    assert mask_of([]) == 0


def test_constructor_validation():
    with pytest.raises(ValueError):
        IncidenceStructure(-1, [])
    with pytest.raises(ValueError):
        IncidenceStructure(3, [(0,)])
    with pytest.raises(ValueError):
        IncidenceStructure(3, [(0, 0)])
    with pytest.raises(ValueError):
        IncidenceStructure(3, [(0, 3)])


def test_lines_are_sorted_tuples():
    st = IncidenceStructure(4, [(3, 1, 0)])
    assert st.lines == [(0, 1, 3)]
    assert st.line_masks == [mask_of([0, 1, 3])]


def test_collinear_and_line_through(fano, path2):
    for a in range(7):
        assert fano.collinear(a, a)
        for b in range(7):
            assert fano.collinear(a, b)
    assert fano.line_through(0, 1) == 0
    assert fano.line_through(6, 2) == 5
    with pytest.raises(ValueError):
        fano.line_through(3, 3)
    assert path2.line_through(0, 3) is None
    assert not path2.collinear(0, 3)


def test_perp_and_set_perp(path2):
    assert path2.perp_of(0) == mask_of([0, 1, 2])
    assert path2.set_perp(0) == path2.full_mask
    assert path2.set_perp(mask_of([0, 3])) == mask_of([2])
    assert path2.radical_of(path2.full_mask) == mask_of([2])


def test_closure(fano):
    pair = mask_of([0, 1])
    assert fano.closure_of(pair) == mask_of([0, 1, 2])
    triangle = mask_of([1, 3, 6])
    assert fano.closure_of(triangle) == fano.full_mask
    for m in (0, 1 << 4, mask_of([0, 1, 2])):
        assert fano.closure_of(m) == m
        assert fano.closure_of(fano.closure_of(m)) == fano.closure_of(m)


def test_subspace_predicates(fano):
    assert fano.is_subspace(0)
    assert fano.is_subspace(1 << 3)
    assert fano.is_subspace(fano.full_mask)
    assert fano.is_subspace(mask_of([0, 1, 2]))
    assert not fano.is_subspace(mask_of([0, 1]))


def test_hyperplanes_of_the_plane(fano):
    # every line of a projective plane is a hyperplane, nothing smaller is
    for m in fano.line_masks:
        assert fano.is_hyperplane(m)
    assert not fano.is_hyperplane(1 << 0)
    assert not fano.is_hyperplane(fano.full_mask)


def test_spiky(fano, sp62):
    st = sp62.structure
    assert st.is_spiky(1 << 0)
    assert st.is_spiky(st.line_masks[0])
    assert not st.is_spiky(st.adj[0])  # the removed point sees nothing outside
    assert not fano.is_spiky(fano.full_mask)
    assert fano.is_spiky(0)


def test_scaly(sp62):
    st = sp62.structure
    assert st.is_scaly(st.line_masks[0])
    assert not st.is_scaly(st.adj[0])
    assert st.is_scaly(1 << 5)  # no line inside, vacuous


def test_singular_dim(sp62):
    st = sp62.structure
    assert st.singular_dim(0) == -1
    assert st.singular_dim(1 << 7) == 0
    assert st.singular_dim(st.line_masks[0]) == 1
    assert st.singular_dim(sp62.singular_planes()[0]) == 2
    assert st.singular_dim(st.adj[0]) is None
    with pytest.raises(ValueError):
        st.singular_dim(mask_of([0, 3]))  # two points of a line, not closed


def test_lines_in(fano):
    assert fano.lines_in(fano.full_mask) == list(range(7))
    assert fano.lines_in(mask_of([0, 3, 4])) == [1]
    assert fano.lines_in(mask_of([0, 1])) == []


def test_equality_ignores_line_order():
    a = IncidenceStructure(4, [(0, 1), (2, 3)])
    b = IncidenceStructure(4, [(2, 3), (1, 0)])
    c = IncidenceStructure(5, [(0, 1), (2, 3)])
    assert a == b
    assert a != c


def test_repr_is_compact(fano):
    assert "7 points" in repr(fano)
