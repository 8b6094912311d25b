import itertools
import math

import pytest

from dnalg.polytopes import (
    LEAF,
    FaceProduct,
    GammaFacet,
    GammaVertex,
    OrderedPartition,
    TopFace,
    binary_trees,
    boundary_census,
    catalan,
    degeneracy,
    delete_leaf,
    enumerate_facets,
    enumerate_vertices,
    facet_face_operator,
    facet_vertices,
    flatten_vertex,
    graft,
    ordered_partitions,
    planar_trees,
    render_tree,
    stirling2,
    tree_dim,
    tree_leaves,
)


def oracle_ordered_partitions(n):
    """Independent enumeration: linear orders on the blocks of unordered
    partitions, built from subsets recursively."""
    items = tuple(range(1, n + 1))

    def partitions(rest):
        if not rest:
            yield []
            return
        first, tail = rest[0], rest[1:]
        for subset_bits in itertools.product((0, 1), repeat=len(tail)):
            block = (first,) + tuple(t for t, b in zip(tail, subset_bits) if b)
            remaining = tuple(t for t, b in zip(tail, subset_bits) if not b)
            for more in partitions(remaining):
                yield [block] + more

    out = set()
    for blocks in partitions(items):
        if len(blocks) < 2:
            continue
        for order in itertools.permutations(blocks):
            out.add(tuple(order))
    return out


def oracle_binary_trees(m):
    """Independent Catalan-style enumeration of binary bracketings."""
    if m == 1:
        return [LEAF]
    out = []
    for left in range(1, m):
        for lt in oracle_binary_trees(left):
            for rt in oracle_binary_trees(m - left):
                out.append((lt, rt))
    return out


# ---------------------------------------------------------------------------
# trees


def test_binary_tree_counts():
    for m in range(1, 7):
        assert len(binary_trees(m)) == catalan(m - 1)
        assert set(binary_trees(m)) == set(map(_retuple, oracle_binary_trees(m)))


def _retuple(t):
    return t if t is LEAF else tuple(_retuple(c) for c in t)


def test_k5_has_14_vertices():
    assert len(binary_trees(5)) == 14


def test_tree_dimensions():
    corolla = tuple([LEAF] * 4)
    assert tree_dim(corolla) == 2          # the whole polytope on 4 letters
    for t in binary_trees(4):
        assert tree_dim(t) == 0
    assert len(planar_trees(4)) == 11      # all faces of the 2-dimensional case


def test_graft_and_delete_leaf():
    t = graft((LEAF, LEAF), [(LEAF, LEAF), LEAF])
    assert t == ((LEAF, LEAF), LEAF)
    assert delete_leaf(t, 2) == (LEAF, LEAF)
    assert delete_leaf((LEAF, LEAF), 0) == LEAF
    assert render_tree(t) == "((..).)"


# ---------------------------------------------------------------------------
# facets


def test_facets_two_letters():
    facets = enumerate_facets(2)
    labels = {str(f.partition) for f in facets}
    assert labels == {"(1),(2)", "(2),(1)"}


def test_facets_three_letters():
    assert len(enumerate_facets(3)) == 12


def test_facets_four_letters():
    facets = enumerate_facets(4)
    assert len(facets) == 74
    expected = sum(
        math.factorial(m) * stirling2(4, m) for m in range(2, 5)
    )
    assert len(facets) == expected


def test_facets_match_oracle():
    for n in (2, 3, 4):
        ours = {f.partition.blocks for f in enumerate_facets(n)}
        assert ours == oracle_ordered_partitions(n)


def test_facet_dimensions():
    for n in (2, 3, 4, 5):
        for f in enumerate_facets(n):
            assert f.dimension == n - 2


def test_partition_validation():
    with pytest.raises(ValueError):
        OrderedPartition(3, ((1, 2), (2, 3)))
    with pytest.raises(ValueError):
        OrderedPartition(3, ((2, 1), (3,)))
    with pytest.raises(ValueError):
        GammaFacet(OrderedPartition(3, ((1, 2, 3),)))


# ---------------------------------------------------------------------------
# vertices


def test_vertex_counts():
    assert len(enumerate_vertices(2)) == 2
    assert len(enumerate_vertices(3)) == 12
    assert len(enumerate_vertices(4)) == math.factorial(4) * catalan(3)  # 120


def test_vertices_are_distinct():
    vs = enumerate_vertices(3)
    assert len(set(vs)) == 12


# ---------------------------------------------------------------------------
# the face operator


def test_face_operator_flattens_to_vertex():
    part = OrderedPartition(3, ((1, 2), (3,)))
    v2 = enumerate_vertices(2)[0]
    v1 = GammaVertex((1,), LEAF)
    out = facet_face_operator(part, (LEAF, LEAF), [v2, v1])
    assert isinstance(out, GammaVertex)
    assert out.n == 3


def test_face_operator_rejects_arity_mismatch():
    part = OrderedPartition(3, ((1, 2), (3,)))
    v1 = GammaVertex((1,), LEAF)
    with pytest.raises(ValueError):
        facet_face_operator(part, (LEAF, LEAF, LEAF), [v1, v1])
    with pytest.raises(ValueError):
        facet_face_operator(part, (LEAF, LEAF), [v1, v1])


def test_facet_vertex_counts_three_letters():
    for facet in enumerate_facets(3):
        vs = facet_vertices(facet)
        assert len(vs) == 2
        assert len(set(vs)) == 2
        assert facet.vertex_count() == 2


def test_facet_vertex_count_two_two_type():
    facet = GammaFacet(OrderedPartition(4, ((1, 2), (3, 4))))
    assert facet.vertex_count() == 4
    assert len(set(facet_vertices(facet))) == 4


def test_vertex_facet_incidences():
    for n in (2, 3, 4):
        facets = enumerate_facets(n)
        vertices = set(enumerate_vertices(n))
        incidences = 0
        covered = set()
        for facet in facets:
            vs = facet_vertices(facet)
            assert len(vs) == len(set(vs))
            assert set(vs) <= vertices
            covered.update(vs)
            incidences += len(vs)
        assert covered == vertices  # the facets cover the boundary
        assert incidences == sum(f.vertex_count() for f in facets)


def test_dimension_additivity():
    part = OrderedPartition(4, ((1, 3), (2, 4)))
    face = facet_face_operator(
        part, (LEAF, LEAF), [TopFace(2), TopFace(2)]
    )
    assert isinstance(face, FaceProduct)
    assert face.dimension == 2  # = n - 2


# ---------------------------------------------------------------------------
# degeneracies


def test_degeneracy_two_letters():
    v = GammaVertex((1, 2), (LEAF, LEAF))
    out = degeneracy(v, 1)
    assert out == GammaVertex((1,), LEAF)


def test_degeneracy_example_three_letters():
    v = GammaVertex((2, 1, 3), ((LEAF, LEAF), LEAF))
    out = degeneracy(v, 3)
    assert out == GammaVertex((2, 1), (LEAF, LEAF))


def test_degeneracy_covers_all_vertices():
    targets = set(enumerate_vertices(2))
    for v in enumerate_vertices(3):
        for j in (1, 2, 3):
            out = degeneracy(v, j)
            assert out in targets


def test_degeneracy_on_faces():
    part = OrderedPartition(3, ((1, 2), (3,)))
    face = facet_face_operator(part, (LEAF, LEAF), [TopFace(2), TopFace(1)])
    out = degeneracy(face, 3)
    # removing the singleton block leaves the whole two-letter polytope
    assert out == TopFace(2)
    out2 = degeneracy(face, 1)
    assert out2.n == 2


def test_degeneracy_closure_on_operator_faces():
    # every operator-produced face of the 4-letter polytope degenerates to a
    # well-formed label on 3 letters
    part = OrderedPartition(4, ((1, 4), (2, 3)))
    for ktree in planar_trees(2):
        for f1 in [TopFace(2)] + list(enumerate_vertices(2)):
            for f2 in [TopFace(2)] + list(enumerate_vertices(2)):
                face = facet_face_operator(part, ktree, [f1, f2])
                for j in (1, 2, 3, 4):
                    out = degeneracy(face, j)
                    assert out.n == 3
                    assert 0 <= out.dimension <= 2


# ---------------------------------------------------------------------------
# census


def test_census_three_letters():
    c = boundary_census(3)
    assert c["vertices"] == 12 and c["facets"] == 12
    assert c["f_vector"] == [12, 12]
    assert c["euler_characteristic"] == 0


def test_census_two_letters():
    c = boundary_census(2)
    assert c["f_vector"] == [2]
    assert c["euler_characteristic"] == 2


def test_census_counts_up_to_five():
    expect = {
        1: (1, 0),
        2: (2, 2),
        3: (12, 12),
        4: (120, 74),
        5: (1680, 540),
    }
    for n, (verts, facets) in expect.items():
        c = boundary_census(n)
        assert (c["vertices"], c["facets"]) == (verts, facets)
        assert c["vertices"] == math.factorial(n) * catalan(n - 1)
        if n >= 2:
            assert c["facets"] == sum(
                math.factorial(m) * stirling2(n, m) for m in range(2, n + 1)
            )


def test_census_facet_types():
    c = boundary_census(3)
    assert c["facets_by_type"] == {"1|1|1": 6, "1|2": 3, "2|1": 3}


def test_degeneracy_rejects_bad_letters():
    v = GammaVertex((1, 2), (LEAF, LEAF))
    with pytest.raises(ValueError):
        degeneracy(v, 3)
    with pytest.raises(ValueError):
        degeneracy(GammaVertex((1,), LEAF), 1)


def test_enumerations_are_deterministic():
    assert enumerate_facets(3) == enumerate_facets(3)
    assert enumerate_vertices(3) == enumerate_vertices(3)
    assert [f.partition.blocks for f in enumerate_facets(2)] == [
        ((1,), (2,)),
        ((2,), (1,)),
    ]
