"""Finite abstract simplicial complexes and their combinatorial constructions.

A simplex is a strictly increasing tuple of vertex ids; a complex is a
downward-closed family of simplices on vertices 0..vertex_count-1.  All
values are immutable; constructions return new complexes (plus index maps
where vertices are re-labelled), so references stay stable for provenance
tracking.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Raised when simplicial-complex input data is malformed."""


def faces(simplex: Simplex) -> list[Simplex]:
    """All codimension-1 faces, in vertex-removal order."""
    return [simplex[:i] + simplex[i + 1 :] for i in range(len(simplex))]


def _check_simplex(simplex: Simplex, vertex_count: int) -> None:
    if len(simplex) == 0:
        raise ComplexError("empty simplex")
    if any(v < 0 or v >= vertex_count for v in simplex):
        raise ComplexError(f"vertex id out of range in {simplex}")
    if any(simplex[i] >= simplex[i + 1] for i in range(len(simplex) - 1)):
        raise ComplexError(f"simplex {simplex} is not strictly increasing")


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed set of sorted vertex tuples on a contiguous vertex range."""

    vertex_count: int
    simplices: frozenset[Simplex]

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise ComplexError("negative vertex count")
        covered = set()
        for s in self.simplices:
            _check_simplex(s, self.vertex_count)
            covered.update(s)
            if len(s) > 1:
                for f in faces(s):
                    if f not in self.simplices:
                        raise ComplexError(f"face {f} of {s} missing: not downward closed")
        if covered != set(range(self.vertex_count)):
            raise ComplexError("some vertex id appears in no simplex")

    @property
    def is_empty(self) -> bool:
        return not self.simplices

    @cached_property
    def dim(self) -> int:
        """Maximal simplex dimension; -1 for the empty complex."""
        return max((len(s) for s in self.simplices), default=0) - 1

    @cached_property
    def by_dim(self) -> list[list[Simplex]]:
        out: list[list[Simplex]] = [[] for _ in range(self.dim + 1)]
        for s in self.simplices:
            out[len(s) - 1].append(s)
        for level in out:
            level.sort()
        return out

    def simplices_of_dim(self, d: int) -> list[Simplex]:
        if d < 0 or d > self.dim:
            return []
        return self.by_dim[d]

    @cached_property
    def index_of(self) -> list[dict[Simplex, int]]:
        """Per dimension, position of each simplex in the sorted listing."""
        return [{s: i for i, s in enumerate(level)} for level in self.by_dim]

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.by_dim)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector()))

    @cached_property
    def component_labels(self) -> list[int]:
        """Vertex -> component id (0-based, ordered by smallest member vertex)."""
        parent = list(range(self.vertex_count))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for edge in self.simplices_of_dim(1):
            ra, rb = find(edge[0]), find(edge[1])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        labels, next_id = {}, 0
        out = []
        for v in range(self.vertex_count):
            r = find(v)
            if r not in labels:
                labels[r] = next_id
                next_id += 1
            out.append(labels[r])
        return out

    def connected_components(self) -> int:
        if self.is_empty:
            return 0
        return max(self.component_labels) + 1

    def is_connected(self) -> bool:
        return self.connected_components() == 1


def downward_closure(maximal: list[Simplex]) -> set[Simplex]:
    closed: set[Simplex] = set()
    for s in maximal:
        for k in range(1, len(s) + 1):
            closed.update(combinations(s, k))
    return closed


def from_maximal_simplices(vertex_count: int, maximal: list[list[int]]) -> SimplicialComplex:
    """Downward closure of the given maximal simplices.

    Raises ComplexError on duplicate vertices inside a tuple, out-of-range
    ids, or an empty maximal list.
    """
    if not maximal:
        raise ComplexError("empty maximal simplex list")
    canon = []
    for raw in maximal:
        s = tuple(sorted(raw))
        if len(set(s)) != len(s):
            raise ComplexError(f"duplicate vertex in {raw}")
        _check_simplex(s, vertex_count)
        canon.append(s)
    return SimplicialComplex(vertex_count, frozenset(downward_closure(canon)))


def empty_complex() -> SimplicialComplex:
    return SimplicialComplex(0, frozenset())


def solid_simplex(n: int) -> SimplicialComplex:
    """The full n-simplex on n+1 vertices."""
    if n < 0:
        raise ComplexError("n must be >= 0")
    return from_maximal_simplices(n + 1, [list(range(n + 1))])


def boundary_sphere(n: int) -> SimplicialComplex:
    """Boundary of the (n+1)-simplex: the minimal triangulation of the n-sphere."""
    if n < 0:
        raise ComplexError("n must be >= 0")
    verts = list(range(n + 2))
    maximal = [list(c) for c in combinations(verts, n + 1)]
    return from_maximal_simplices(n + 2, maximal)


def cycle_complex(m: int) -> SimplicialComplex:
    """The m-gon: m vertices with edges {i, i+1 mod m}."""
    if m < 3:
        raise ComplexError("cycle needs at least 3 vertices")
    return from_maximal_simplices(m, [[i, (i + 1) % m] for i in range(m)])


def torus_seven_vertex() -> SimplicialComplex:
    """The minimal 7-vertex triangulation of the torus (Csaszar torus).

    Triangles are the Z/7 orbits of {0,1,3} and {0,2,3}; every vertex pair
    is an edge, giving f-vector (7, 21, 14).
    """
    triangles = [[i % 7, (i + 1) % 7, (i + 3) % 7] for i in range(7)]
    triangles += [[i % 7, (i + 2) % 7, (i + 3) % 7] for i in range(7)]
    return from_maximal_simplices(7, triangles)


def projective_plane_six_vertex() -> SimplicialComplex:
    """The minimal 6-vertex real projective plane (antipodal icosahedron quotient)."""
    triangles = [
        [0, 1, 2], [0, 1, 5], [0, 2, 4], [0, 3, 4], [0, 3, 5],
        [1, 2, 3], [1, 3, 4], [1, 4, 5], [2, 3, 5], [2, 4, 5],
    ]
    return from_maximal_simplices(6, triangles)


def klein_bottle_grid() -> SimplicialComplex:
    """A 9-vertex Klein bottle: diagonally triangulated 3x3 grid, one gluing reflected."""
    n = 3

    def vid(x: int, y: int) -> int:
        if y == n:
            x, y = (n - x) % n, 0
        return (x % n) * n + (y % n)

    triangles = set()
    for x in range(n):
        for y in range(n):
            a, b = vid(x, y), vid(x + 1, y)
            c, d = vid(x, y + 1), vid(x + 1, y + 1)
            triangles.add(tuple(sorted({a, b, d})))
            triangles.add(tuple(sorted({a, c, d})))
    return from_maximal_simplices(n * n, [list(t) for t in sorted(triangles)])


def barycentric_subdivision(
    K: SimplicialComplex,
) -> tuple[SimplicialComplex, dict[int, Simplex]]:
    """First barycentric subdivision.

    New vertices are the simplices of K (ids assigned in (dim, lex) order);
    new simplices are the chains of proper faces.  Returns the subdivision
    and the provenance map new-vertex-id -> simplex of K, which is what
    group actions are transported along.
    """
    if K.is_empty:
        return K, {}
    originals = [s for level in K.by_dim for s in level]
    vid = {s: i for i, s in enumerate(originals)}
    provenance = {i: s for s, i in vid.items()}

    cofaces: dict[Simplex, list[Simplex]] = {s: [] for s in originals}
    for tau in originals:
        if len(tau) == 1:
            continue
        for k in range(1, len(tau)):
            for sigma in combinations(tau, k):
                cofaces[sigma].append(tau)

    chains: list[tuple[int, ...]] = []

    def extend(chain: list[int], top: Simplex) -> None:
        chains.append(tuple(chain))
        for tau in cofaces[top]:
            chain.append(vid[tau])
            extend(chain, tau)
            chain.pop()

    for s in originals:
        extend([vid[s]], s)
    # ids increase with dimension, so chains are already sorted tuples
    sd = SimplicialComplex(len(originals), frozenset(chains))
    return sd, provenance


def full_subcomplex(
    K: SimplicialComplex, vertex_set: set[int]
) -> tuple[SimplicialComplex, dict[int, int]]:
    """All simplices of K with vertices inside vertex_set, re-indexed contiguously.

    Returns the subcomplex and the old->new vertex index map.  An empty
    selection yields the empty complex.
    """
    if any(v < 0 or v >= K.vertex_count for v in vertex_set):
        raise ComplexError("vertex_set not contained in the vertex range")
    kept = [s for s in K.simplices if all(v in vertex_set for v in s)]
    used = sorted({v for s in kept for v in s})
    index_map = {old: new for new, old in enumerate(used)}
    relabelled = frozenset(tuple(index_map[v] for v in s) for s in kept)
    return SimplicialComplex(len(used), relabelled), index_map


def connected_components(K: SimplicialComplex) -> int:
    return K.connected_components()


def euler_characteristic(K: SimplicialComplex) -> int:
    return K.euler_characteristic()


def dimension(K: SimplicialComplex) -> int:
    return K.dim
