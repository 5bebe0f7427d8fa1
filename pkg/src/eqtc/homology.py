"""Boundary matrices, Betti numbers, and cohomology bases with projection.

Signs come from the global vertex order of each complex, so the boundary
and coboundary operators (and later the cup product) are consistent across
the whole package.
"""

from __future__ import annotations

from eqtc.complex_core import SimplicialComplex, faces
from eqtc.linalg import (
    Field,
    FieldError,
    LinearSolver,
    column_space_basis,
    mat_vec,
    nullspace,
    parse_field,
    rank,
    zero_matrix,
)

__all__ = [
    "boundary_matrix",
    "boundary_matrices",
    "coboundary_matrix",
    "betti_numbers",
    "CochainBasis",
    "cohomology_basis",
    "parse_field",
]


def boundary_matrix(K: SimplicialComplex, field: Field, d: int) -> list[list]:
    """Matrix of the boundary map from d-chains to (d-1)-chains.

    Rows are indexed by the sorted (d-1)-simplices, columns by the sorted
    d-simplices; the entry for dropping the i-th vertex is (-1)^i.
    """
    rows = K.simplices_of_dim(d - 1)
    cols = K.simplices_of_dim(d)
    row_index = K.index_of[d - 1] if rows else {}
    mat = zero_matrix(len(rows), len(cols), field)
    for j, s in enumerate(cols):
        for i, f in enumerate(faces(s)):
            sign = field.of_int(-1 if i % 2 else 1)
            r = row_index[f]
            mat[r][j] = field.add(mat[r][j], sign)
    return mat


def boundary_matrices(K: SimplicialComplex, field: Field) -> list[list[list]]:
    """All boundary matrices, index d giving the map from d-chains (d >= 1)."""
    return [boundary_matrix(K, field, d) for d in range(1, K.dim + 1)]


def coboundary_matrix(K: SimplicialComplex, field: Field, d: int) -> list[list]:
    """Matrix of the coboundary from d-cochains to (d+1)-cochains.

    This is the transpose of the boundary map one degree up:
    (delta a)(tau) = sum_i (-1)^i a(tau with i-th vertex dropped).
    """
    B = boundary_matrix(K, field, d + 1)
    n_rows = len(K.simplices_of_dim(d + 1))
    n_cols = len(K.simplices_of_dim(d))
    out = zero_matrix(n_rows, n_cols, field)
    for i in range(len(B)):
        for j in range(len(B[0]) if B else 0):
            out[j][i] = B[i][j]
    return out


def betti_numbers(K: SimplicialComplex, field: Field) -> tuple[int, ...]:
    """Betti numbers b_0..b_dim over the given field."""
    if K.is_empty:
        raise FieldError("Betti numbers of the empty complex are undefined")
    ranks = [0] * (K.dim + 2)
    for d in range(1, K.dim + 1):
        ranks[d] = rank(boundary_matrix(K, field, d), field)
    f = K.f_vector()
    return tuple(f[d] - ranks[d] - ranks[d + 1] for d in range(K.dim + 1))


class CochainBasis:
    """Representative cocycles per degree plus coordinate projection.

    For each degree d it stores a list of cocycle vectors whose classes form
    a basis of the degree-d cohomology, and a solver that writes any cocycle
    as (basis coordinates, coboundary part).
    """

    def __init__(self, K: SimplicialComplex, field: Field):
        if K.is_empty:
            raise FieldError("cohomology of the empty complex is undefined")
        self.complex = K
        self.field = field
        self.representatives: dict[int, list[list]] = {}
        self._cobound: dict[int, list[list]] = {}
        self._solvers: dict[int, LinearSolver] = {}
        for d in range(K.dim + 1):
            self._build_degree(d)

    def _solver(self, d: int) -> LinearSolver:
        # built lazily: projections are only ever requested in the few
        # degrees where cup products land, and the solver is the costly part
        if d not in self._solvers:
            columns = self.representatives[d] + self._cobound[d]
            n_d = len(self.complex.simplices_of_dim(d))
            mat = [[columns[c][r] for c in range(len(columns))] for r in range(n_d)]
            self._solvers[d] = LinearSolver(mat, self.field)
        return self._solvers[d]

    def _cocycle_basis(self, d: int) -> list[list]:
        K, field = self.complex, self.field
        n_d = len(K.simplices_of_dim(d))
        if d == K.dim:
            basis = []
            for i in range(n_d):
                v = [field.zero] * n_d
                v[i] = field.one
                basis.append(v)
            return basis
        delta = coboundary_matrix(K, field, d)
        return nullspace(delta, field, n_d)

    def _build_degree(self, d: int) -> None:
        K, field = self.complex, self.field
        n_d = len(K.simplices_of_dim(d))
        cocycles = self._cocycle_basis(d)
        cobound: list[list] = []
        if d >= 1:
            delta_prev = coboundary_matrix(K, field, d - 1)
            keep = column_space_basis(delta_prev, field) if delta_prev else []
            cobound = [[delta_prev[r][c] for r in range(n_d)] for c in keep]

        if d == 0:
            # canonical representatives: component indicator cochains
            labels = K.component_labels
            n_comp = K.connected_components()
            verts = K.simplices_of_dim(0)
            reps = []
            for comp in range(n_comp):
                reps.append(
                    [field.one if labels[s[0]] == comp else field.zero for s in verts]
                )
        else:
            # extend the coboundary basis by independent cocycles
            reps = []
            candidates = cobound + cocycles
            m = [[candidates[c][r] for c in range(len(candidates))] for r in range(n_d)]
            keep = column_space_basis(m, field) if candidates else []
            for c in keep:
                if c >= len(cobound):
                    reps.append(cocycles[c - len(cobound)])

        self.representatives[d] = reps
        self._cobound[d] = cobound

    def betti(self, d: int) -> int:
        return len(self.representatives.get(d, []))

    def betti_vector(self) -> tuple[int, ...]:
        return tuple(self.betti(d) for d in range(self.complex.dim + 1))

    def is_cocycle(self, d: int, v: list) -> bool:
        if d >= self.complex.dim:
            return True
        delta = coboundary_matrix(self.complex, self.field, d)
        return all(self.field.is_zero(x) for x in mat_vec(delta, v, self.field))

    def project(self, d: int, cocycle: list) -> tuple[list, list]:
        """Coordinates of a cocycle in the chosen basis, plus its coboundary part."""
        k = len(self.representatives[d])
        x = self._solver(d).solve(cocycle)
        coords = x[:k]
        field = self.field
        n_d = len(self.complex.simplices_of_dim(d))
        rest = [field.zero] * n_d
        for c, coeff in enumerate(x[k:]):
            if field.is_zero(coeff):
                continue
            col = self._cobound[d][c]
            rest = [field.add(rest[r], field.mul(coeff, col[r])) for r in range(n_d)]
        return coords, rest


def cohomology_basis(K: SimplicialComplex, field: Field) -> CochainBasis:
    return CochainBasis(K, field)
