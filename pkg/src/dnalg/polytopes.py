"""Combinatorics of associahedra and permuto-associahedra.

Faces of the associahedron on m letters are planar rooted trees with m
leaves whose internal nodes all have at least two children; binary trees
are the vertices.  The permuto-associahedron on n letters is an
(n-1)-dimensional polytope whose facets are labelled by ordered partitions
of {1..n} into at least two blocks; the facet of a partition of type
(t_1,...,t_m) decomposes as a product of the associahedron on m letters
and the smaller permuto-associahedra on t_1, ..., t_m letters, and its
vertices are (permutation, binary tree) pairs obtained by grafting.

Mid-dimensional faces beyond facets and vertices are exposed as nested
labels produced by iterated face operators; their identifications are not
modelled, so counts in between are best-effort and only vertex/facet data
is used for cross-checked censuses.

Enumeration is pure and deterministic (lexicographic everywhere), so
results are stable across runs and safe to compute concurrently.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

LEAF = None  # leaves of planar trees


def tree_leaves(tree) -> int:
    if tree is LEAF:
        return 1
    return sum(tree_leaves(c) for c in tree)


def tree_internal_nodes(tree) -> int:
    if tree is LEAF:
        return 0
    return 1 + sum(tree_internal_nodes(c) for c in tree)


def tree_dim(tree) -> int:
    """Dimension of the associahedron face a tree labels: m-1-#internal."""
    return tree_leaves(tree) - 1 - tree_internal_nodes(tree)


def is_binary(tree) -> bool:
    if tree is LEAF:
        return True
    return len(tree) == 2 and all(is_binary(c) for c in tree)


@lru_cache(maxsize=None)
def planar_trees(m: int) -> tuple:
    """All planar rooted trees with m leaves, internal nodes of arity >= 2."""
    if m < 1:
        raise ValueError("need at least one leaf")
    if m == 1:
        return (LEAF,)
    out = []
    for parts in _compositions(m, 2):
        for children in itertools.product(*(planar_trees(t) for t in parts)):
            out.append(tuple(children))
    return tuple(out)


@lru_cache(maxsize=None)
def binary_trees(m: int) -> tuple:
    return tuple(t for t in planar_trees(m) if is_binary(t))


def _compositions(total: int, min_parts: int):
    """Ordered compositions of ``total`` into at least ``min_parts`` positive
    parts, lexicographically."""
    out = []

    def rec(remaining, acc):
        if remaining == 0:
            if len(acc) >= min_parts:
                out.append(tuple(acc))
            return
        for part in range(1, remaining + 1):
            rec(remaining - part, acc + [part])

    rec(total, [])
    return out


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def render_tree(tree) -> str:
    if tree is LEAF:
        return "."
    return "(" + "".join(render_tree(c) for c in tree) + ")"


def graft(tree, subtrees):
    """Replace the leaves of ``tree`` (left to right) by the given subtrees."""
    subs = list(subtrees)

    def rec(t):
        if t is LEAF:
            return subs.pop(0)
        return tuple(rec(c) for c in t)

    out = rec(tree)
    if subs:
        raise ValueError("too many subtrees")
    return out


_DELETED = object()


def delete_leaf(tree, index: int):
    """Remove the index-th leaf (0-based, left to right), collapsing any
    internal node left with a single child."""

    def rec(t, lo):
        # returns (new subtree or the deletion marker, leaves consumed)
        if t is LEAF:
            return (_DELETED if lo == index else LEAF), 1
        consumed = 0
        children = []
        for c in t:
            new_c, used = rec(c, lo + consumed)
            consumed += used
            if new_c is not _DELETED:
                children.append(new_c)
        if not children:
            return _DELETED, consumed
        if len(children) == 1:
            return children[0], consumed
        return tuple(children), consumed

    new_tree, total = rec(tree, 0)
    if index < 0 or index >= total:
        raise ValueError("leaf index out of range")
    if new_tree is _DELETED:
        raise ValueError("cannot delete the last leaf")
    return new_tree


# ---------------------------------------------------------------------------
# ordered partitions and facets


@dataclass(frozen=True)
class OrderedPartition:
    """An ordered partition of {1..n}: disjoint increasing blocks covering it."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise ValueError("blocks must be nonempty")
            if list(block) != sorted(block):
                raise ValueError("blocks must be increasing")
            seen.update(block)
        if len(seen) != sum(len(b) for b in self.blocks) or seen != set(
            range(1, self.n + 1)
        ):
            raise ValueError("blocks must partition {1..n}")

    @property
    def type(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    @property
    def m(self) -> int:
        return len(self.blocks)

    def __str__(self):
        return ",".join("(" + ",".join(map(str, b)) + ")" for b in self.blocks)


def ordered_partitions(n: int, min_blocks: int = 2):
    """All ordered partitions of {1..n} with at least ``min_blocks`` blocks,
    as surjections onto {1..m} enumerated in lexicographic order."""
    for m in range(min_blocks, n + 1):
        for labels in itertools.product(range(m), repeat=n):
            if set(labels) != set(range(m)):
                continue
            blocks = tuple(
                tuple(i + 1 for i, lab in enumerate(labels) if lab == b)
                for b in range(m)
            )
            yield OrderedPartition(n, blocks)


@dataclass(frozen=True)
class GammaFacet:
    """A facet of the permuto-associahedron, labelled by an ordered partition
    into at least two blocks."""

    partition: OrderedPartition

    def __post_init__(self):
        if self.partition.m < 2:
            raise ValueError("facets need at least two blocks")

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def dimension(self) -> int:
        # (m-2) from the associahedron factor plus (t_i - 1) per block
        return self.n - 2

    @property
    def decomposition(self) -> tuple[int, tuple[int, ...]]:
        """(m, block types): the facet is a product of the associahedron on m
        letters with the smaller permuto-associahedra on each block."""
        return self.partition.m, self.partition.type

    def vertex_count(self) -> int:
        m, types = self.decomposition
        count = catalan(m - 1)
        for t in types:
            count *= gamma_vertex_count(t)
        return count


def enumerate_facets(n: int) -> list[GammaFacet]:
    if n < 1:
        raise ValueError("n must be positive")
    return [GammaFacet(part) for part in ordered_partitions(n, 2)]


# ---------------------------------------------------------------------------
# vertices


@dataclass(frozen=True)
class GammaVertex:
    """A vertex: a permutation of {1..n} with a binary planar tree on n leaves."""

    perm: tuple[int, ...]
    tree: object

    def __post_init__(self):
        n = len(self.perm)
        if sorted(self.perm) != list(range(1, n + 1)):
            raise ValueError("perm must be a permutation of {1..n}")
        if tree_leaves(self.tree) != n or not is_binary(self.tree):
            raise ValueError("tree must be binary with one leaf per letter")

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def dimension(self) -> int:
        return 0

    def __str__(self):
        return f"{self.perm} {render_tree(self.tree)}"


def gamma_vertex_count(n: int) -> int:
    return math.factorial(n) * catalan(n - 1)


def enumerate_vertices(n: int) -> list[GammaVertex]:
    if n < 1:
        raise ValueError("n must be positive")
    return [
        GammaVertex(perm, tree)
        for perm in itertools.permutations(range(1, n + 1))
        for tree in binary_trees(n)
    ]


# ---------------------------------------------------------------------------
# nested face labels and the face operator


@dataclass(frozen=True)
class TopFace:
    """The whole permuto-associahedron on n letters, as a face label."""

    n: int

    @property
    def dimension(self) -> int:
        return self.n - 1


@dataclass(frozen=True)
class FaceProduct:
    """A face sitting inside the facet of ``partition``: an associahedron
    face for the blocks plus one face label per block."""

    partition: OrderedPartition
    ktree: object
    factors: tuple

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def dimension(self) -> int:
        return tree_dim(self.ktree) + sum(f.dimension for f in self.factors)


GammaFace = TopFace | FaceProduct | GammaVertex


def facet_face_operator(partition: OrderedPartition, ktree, factors) -> GammaFace:
    """Compose factor faces into a face of the ambient polytope.

    ``ktree`` must have one leaf per block and each factor must be a face
    label on that block's size.  Zero-dimensional input flattens to the
    canonical (permutation, tree) vertex.
    """
    factors = tuple(factors)
    if partition.m < 2:
        raise ValueError("need at least two blocks")
    if tree_leaves(ktree) != partition.m:
        raise ValueError(
            f"tree has {tree_leaves(ktree)} leaves for {partition.m} blocks"
        )
    if len(factors) != partition.m:
        raise ValueError("one factor face per block")
    for block, f in zip(partition.blocks, factors):
        if f.n != len(block):
            raise ValueError("factor face size does not match its block")
    face = FaceProduct(partition, ktree, factors)
    if face.dimension == 0:
        return flatten_vertex(face)
    return face


def flatten_vertex(face) -> GammaVertex:
    """Canonical (permutation, binary tree) form of a dimension-0 label."""
    if isinstance(face, GammaVertex):
        return face
    if isinstance(face, TopFace):
        if face.n != 1:
            raise ValueError("only the one-letter polytope is itself a vertex")
        return GammaVertex((1,), LEAF)
    if face.dimension != 0:
        raise ValueError("face has positive dimension")
    sub = [flatten_vertex(f) for f in face.factors]
    perm = tuple(
        block[v.perm[i] - 1]
        for block, v in zip(face.partition.blocks, sub)
        for i in range(len(block))
    )
    tree = graft(face.ktree, [v.tree for v in sub])
    return GammaVertex(perm, tree)


def facet_vertices(facet: GammaFacet) -> list[GammaVertex]:
    """All vertices of a facet, via the product decomposition."""
    m, types = facet.decomposition
    out = []
    for ktree in binary_trees(m):
        for combo in itertools.product(*(enumerate_vertices(t) for t in types)):
            out.append(
                flatten_vertex(FaceProduct(facet.partition, ktree, tuple(combo)))
            )
    return out


# ---------------------------------------------------------------------------
# degeneracies


def degeneracy(label, j: int):
    """Delete letter j and renumber the rest; collapses unary tree nodes and
    empty blocks.  Defined for labels on at least two letters."""
    n = _label_letters(label)
    if not 1 <= j <= n:
        raise ValueError("letter out of range")
    if n < 2:
        raise ValueError("cannot delete from a one-letter label")
    if isinstance(label, GammaVertex):
        pos = label.perm.index(j)
        perm = tuple(x - 1 if x > j else x for x in label.perm if x != j)
        return GammaVertex(perm, delete_leaf(label.tree, pos))
    if isinstance(label, TopFace):
        return TopFace(label.n - 1)
    part = label.partition
    which = next(i for i, b in enumerate(part.blocks) if j in b)
    block = part.blocks[which]

    def renumber(x):
        return x - 1 if x > j else x

    if len(block) == 1:
        new_blocks = tuple(
            tuple(renumber(x) for x in b)
            for i, b in enumerate(part.blocks)
            if i != which
        )
        new_factors = label.factors[:which] + label.factors[which + 1:]
        ktree = delete_leaf(label.ktree, which)
        if len(new_blocks) == 1:
            # A single remaining block: the face is the surviving factor,
            # whose local letters already enumerate the remaining letters.
            return label.factors[1 - which]
        face = FaceProduct(
            OrderedPartition(part.n - 1, new_blocks), ktree, new_factors
        )
    else:
        local = sorted(block).index(j) + 1
        new_blocks = tuple(
            tuple(renumber(x) for x in (b if i != which else tuple(x for x in b if x != j)))
            for i, b in enumerate(part.blocks)
        )
        new_factors = tuple(
            f if i != which else degeneracy(f, local)
            for i, f in enumerate(label.factors)
        )
        face = FaceProduct(
            OrderedPartition(part.n - 1, new_blocks), label.ktree, new_factors
        )
    if face.dimension == 0:
        return flatten_vertex(face)
    return face


def _label_letters(label) -> int:
    return label.n


# ---------------------------------------------------------------------------
# census


def stirling2(n: int, k: int) -> int:
    if k == 0:
        return 1 if n == 0 else 0
    if n == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def boundary_census(n: int) -> dict:
    """Vertex and facet counts (n <= 5), facet counts by type, plus the full
    f-vector and Euler characteristic of the boundary where all faces are
    vertices or facets (n <= 3)."""
    if not 1 <= n <= 5:
        raise ValueError("census supports 1 <= n <= 5")
    facets = enumerate_facets(n) if n >= 2 else []
    vertices = enumerate_vertices(n)
    by_type: dict[tuple[int, ...], int] = {}
    for f in facets:
        by_type[f.partition.type] = by_type.get(f.partition.type, 0) + 1
    out = {
        "n": n,
        "dimension": n - 1,
        "vertices": len(vertices),
        "facets": len(facets),
        "facets_by_type": {
            "|".join(map(str, t)): c for t, c in sorted(by_type.items())
        },
        "facet_dimensions": sorted({f.dimension for f in facets}),
        "associahedron_vertices": catalan(n - 1),
    }
    if n <= 3:
        if n == 1:
            f_vector: list[int] = []
        elif n == 2:
            f_vector = [len(vertices)]
        else:
            f_vector = [len(vertices), len(facets)]
        euler = sum((-1) ** i * c for i, c in enumerate(f_vector))
        out["f_vector"] = f_vector
        out["euler_characteristic"] = euler
    return out
