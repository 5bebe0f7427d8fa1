"""Cohomology rings, Kunneth tensor rings, zero-divisors, and cup-length search.

The cup product on cochains uses the front-face/back-face formula on the
globally sorted vertex order:

    (a.b)(v_0..v_{p+q}) = a(v_0..v_p) * b(v_p..v_{p+q})

which satisfies the Leibniz rule on the nose, so products of cocycles
project to well-defined classes.  The ring of the product space is modelled
as the graded tensor square of the cohomology ring (exact over a field),
and the zero-divisors are the kernel of the multiplication map back to the
ring.  Any nonzero product of k zero-divisors certifies TC > k; the search
below looks for the longest such certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from eqtc.complex_core import SimplicialComplex
from eqtc.homology import CochainBasis, cohomology_basis
from eqtc.linalg import Field, FieldError, nullspace


def cup_product_cochain(
    K: SimplicialComplex, field: Field, a: list, b: list, p: int, q: int
) -> list:
    """Cochain-level cup product of a (degree p) and b (degree q).

    Returns the zero cochain when p+q exceeds dim K.
    """
    d = p + q
    top = K.simplices_of_dim(d)
    if not top:
        return []
    idx_p = K.index_of[p]
    idx_q = K.index_of[q]
    out = []
    for s in top:
        front = s[: p + 1]
        back = s[p:]
        out.append(field.mul(a[idx_p[front]], b[idx_q[back]]))
    return out


Element = dict[int, object]  # global basis index -> field scalar


@dataclass
class CohomologyRing:
    """Graded basis with structure constants a_i . a_j = sum_k c[i,j][k] a_k."""

    complex: SimplicialComplex
    field: Field
    basis: CochainBasis
    degrees: list[int]
    labels: list[str]
    local_index: list[tuple[int, int]]  # global index -> (degree, index within degree)
    constants: dict[tuple[int, int], Element]
    unit: Element

    @property
    def size(self) -> int:
        return len(self.degrees)

    @property
    def top_degree(self) -> int:
        return max(self.degrees)

    def indices_of_degree(self, d: int) -> list[int]:
        return [i for i, deg in enumerate(self.degrees) if deg == d]

    def multiply_basis(self, i: int, j: int) -> Element:
        return self.constants.get((i, j), {})

    def multiply(self, x: Element, y: Element) -> Element:
        out: Element = {}
        field = self.field
        for i, ci in x.items():
            for j, cj in y.items():
                coeff = field.mul(ci, cj)
                if field.is_zero(coeff):
                    continue
                for k, c in self.multiply_basis(i, j).items():
                    acc = field.add(out.get(k, field.zero), field.mul(coeff, c))
                    if field.is_zero(acc):
                        out.pop(k, None)
                    else:
                        out[k] = acc
        return out

    def element_degree(self, x: Element) -> int | None:
        degs = {self.degrees[i] for i in x}
        if len(degs) > 1:
            raise FieldError("inhomogeneous ring element")
        return degs.pop() if degs else None


def ring_structure(K: SimplicialComplex, field: Field) -> CohomologyRing:
    """Cohomology ring of K: basis representatives with projected cup products.

    Asserts graded commutativity of the structure constants and that the
    unit class acts as the identity.
    """
    basis = cohomology_basis(K, field)
    degrees: list[int] = []
    labels: list[str] = []
    local_index: list[tuple[int, int]] = []
    for d in range(K.dim + 1):
        for i in range(basis.betti(d)):
            degrees.append(d)
            labels.append(f"a{d}_{i}")
            local_index.append((d, i))
    globals_of: dict[tuple[int, int], int] = {li: g for g, li in enumerate(local_index)}

    constants: dict[tuple[int, int], Element] = {}
    n = len(degrees)
    for i in range(n):
        di, ii = local_index[i]
        rep_i = basis.representatives[di][ii]
        for j in range(n):
            dj, jj = local_index[j]
            d = di + dj
            if d > K.dim:
                continue
            rep_j = basis.representatives[dj][jj]
            prod = cup_product_cochain(K, field, rep_i, rep_j, di, dj)
            coords, _ = basis.project(d, prod)
            entry: Element = {}
            for k, c in enumerate(coords):
                if not field.is_zero(c):
                    entry[globals_of[(d, k)]] = c
            if entry:
                constants[(i, j)] = entry

    unit: Element = {g: field.one for g, (d, _) in enumerate(local_index) if d == 0}
    ring = CohomologyRing(K, field, basis, degrees, labels, local_index, constants, unit)

    # graded commutativity: c_ij = (-1)^{|i||j|} c_ji
    for i in range(n):
        for j in range(n):
            sign = field.of_int((-1) ** (degrees[i] * degrees[j]))
            lhs = ring.multiply_basis(i, j)
            rhs = ring.multiply_basis(j, i)
            scaled = {k: field.mul(sign, c) for k, c in rhs.items()}
            assert lhs == scaled, f"cup product not graded-commutative at ({i},{j})"
    # unit acts as identity on the basis
    for i in range(n):
        assert ring.multiply(unit, {i: field.one}) == {i: field.one}
        assert ring.multiply({i: field.one}, unit) == {i: field.one}
    return ring


TensorElement = dict[tuple[int, int], object]  # (i, j) basis pair -> scalar


@dataclass
class TensorRing:
    """Graded tensor square of a cohomology ring, with the multiplication map.

    Multiplication uses the Koszul sign (x@y)(x'@y') = (-1)^{|y||x'|} xx'@yy',
    and cup() sends x@y to x.y in the underlying ring.
    """

    ring: CohomologyRing

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def top_degree(self) -> int:
        return 2 * self.ring.top_degree

    def pair_degree(self, pair: tuple[int, int]) -> int:
        return self.ring.degrees[pair[0]] + self.ring.degrees[pair[1]]

    def pairs_of_degree(self, d: int) -> list[tuple[int, int]]:
        out = [
            (i, j)
            for i in range(self.ring.size)
            for j in range(self.ring.size)
            if self.ring.degrees[i] + self.ring.degrees[j] == d
        ]
        return sorted(out)

    def pair_label(self, pair: tuple[int, int]) -> str:
        li, lj = self.ring.labels[pair[0]], self.ring.labels[pair[1]]
        return f"{li}(x){lj}"

    def tensor(self, x: Element, y: Element) -> TensorElement:
        field = self.field
        out: TensorElement = {}
        for i, ci in x.items():
            for j, cj in y.items():
                c = field.mul(ci, cj)
                if not field.is_zero(c):
                    out[(i, j)] = c
        return out

    def multiply(self, x: TensorElement, y: TensorElement) -> TensorElement:
        field = self.field
        degrees = self.ring.degrees
        out: TensorElement = {}
        for (i, j), cx in x.items():
            for (k, l), cy in y.items():
                sign = field.of_int((-1) ** (degrees[j] * degrees[k]))
                coeff = field.mul(sign, field.mul(cx, cy))
                if field.is_zero(coeff):
                    continue
                left = self.ring.multiply_basis(i, k)
                if not left:
                    continue
                right = self.ring.multiply_basis(j, l)
                if not right:
                    continue
                for m, cm in left.items():
                    for nn, cn in right.items():
                        add = field.mul(coeff, field.mul(cm, cn))
                        key = (m, nn)
                        acc = field.add(out.get(key, field.zero), add)
                        if field.is_zero(acc):
                            out.pop(key, None)
                        else:
                            out[key] = acc
        return out

    def cup(self, x: TensorElement) -> Element:
        """Image under the multiplication map to the underlying ring."""
        field = self.field
        out: Element = {}
        for (i, j), c in x.items():
            for k, ck in self.ring.multiply_basis(i, j).items():
                acc = field.add(out.get(k, field.zero), field.mul(c, ck))
                if field.is_zero(acc):
                    out.pop(k, None)
                else:
                    out[k] = acc
        return out

    def element_degree(self, x: TensorElement) -> int | None:
        degs = {self.pair_degree(p) for p in x}
        if len(degs) > 1:
            raise FieldError("inhomogeneous tensor element")
        return degs.pop() if degs else None


def kunneth_tensor_ring(ring: CohomologyRing) -> TensorRing:
    return TensorRing(ring)


@dataclass(frozen=True)
class ZeroDivisor:
    label: str
    degree: int
    coeffs: tuple[tuple[tuple[int, int], object], ...]

    def element(self) -> TensorElement:
        return dict(self.coeffs)


@dataclass
class ZeroDivisorSet:
    mode: str
    tensor: TensorRing
    elements: list[ZeroDivisor]


def _freeze(x: TensorElement) -> tuple:
    return tuple(sorted(x.items()))


def zero_divisor_set(T: TensorRing, mode: str = "elementary") -> ZeroDivisorSet:
    """Zero-divisors of the tensor ring.

    "elementary" lists xbar = x(x)1 - 1(x)x for each positive-degree basis
    class x; "full_kernel" computes a kernel basis of the multiplication
    map in every degree.  Every element is checked to map to zero.
    """
    ring = T.ring
    field = T.field
    elements: list[ZeroDivisor] = []
    if mode == "elementary":
        for g in range(ring.size):
            d = ring.degrees[g]
            if d == 0:
                continue
            x: Element = {g: field.one}
            elem = T.tensor(x, ring.unit)
            for key, c in T.tensor(ring.unit, x).items():
                acc = field.sub(elem.get(key, field.zero), c)
                if field.is_zero(acc):
                    elem.pop(key, None)
                else:
                    elem[key] = acc
            elements.append(ZeroDivisor(f"zbar({ring.labels[g]})", d, _freeze(elem)))
    elif mode == "full_kernel":
        # degree 0 matters for disconnected spaces (component idempotents)
        for d in range(0, T.top_degree + 1):
            pairs = T.pairs_of_degree(d)
            if not pairs:
                continue
            targets = ring.indices_of_degree(d)
            mat = [[field.zero] * len(pairs) for _ in targets]
            row_of = {g: r for r, g in enumerate(targets)}
            for c, pair in enumerate(pairs):
                for g, coeff in ring.multiply_basis(*pair).items():
                    mat[row_of[g]][c] = coeff
            if targets:
                kernel = nullspace(mat, field, len(pairs))
            else:
                kernel = [
                    [field.one if i == c else field.zero for i in range(len(pairs))]
                    for c in range(len(pairs))
                ]
            for k, vec in enumerate(kernel):
                elem = {pairs[c]: v for c, v in enumerate(vec) if not field.is_zero(v)}
                if elem:
                    elements.append(ZeroDivisor(f"zker{d}_{k}", d, _freeze(elem)))
    else:
        raise ValueError(f"unknown zero-divisor mode {mode!r}")

    for z in elements:
        assert not T.cup(z.element()), f"{z.label} does not map to zero"
    return ZeroDivisorSet(mode, T, elements)


def combined_zero_divisors(T: TensorRing) -> ZeroDivisorSet:
    """Elementary and full-kernel zero-divisors together, deduplicated.

    The nil search only improves with more candidate factors, so the engine
    feeds it the union of both modes.
    """
    seen: set = set()
    combined: list[ZeroDivisor] = []
    for mode in ("elementary", "full_kernel"):
        for z in zero_divisor_set(T, mode).elements:
            if z.coeffs not in seen:
                seen.add(z.coeffs)
                combined.append(z)
    return ZeroDivisorSet("combined", T, combined)


@dataclass
class ProductCertificate:
    """A nonzero product of homogeneous elements, witnessing a cup-length bound."""

    length: int
    factor_labels: list[str]
    field_name: str
    value_degree: int | None


def verify_zero_divisor_certificate(T: TensorRing, factors: list[ZeroDivisor]) -> bool:
    """Independent re-multiplication of a certificate, left to right."""
    if not factors:
        return False
    acc = factors[0].element()
    for z in factors[1:]:
        acc = T.multiply(acc, z.element())
    return bool(acc)


def nilpotency_lower_bound(
    T: TensorRing,
    Z: ZeroDivisorSet,
    depth_cap: int,
    search: str = "exhaustive",
    seed: int = 0,
    trials: int = 200,
) -> tuple[ProductCertificate, list[ZeroDivisor]]:
    """Longest nonzero product found among products of elements of Z.

    Exhaustive mode enumerates multisets of the given elements (graded
    commutativity makes order irrelevant up to sign) with zero-product
    pruning; the result is a valid lower bound for the nilpotency of the
    zero-divisor ideal.  Randomized mode tries seeded random linear
    combinations as factors instead.
    """
    if depth_cap < 1:
        raise ValueError("depth_cap must be >= 1")
    field = T.field
    cands = sorted(Z.elements, key=lambda z: (z.degree, z.label))
    best_len = 0
    best: list[ZeroDivisor] = []

    if search == "exhaustive":
        def extend(prod: TensorElement, start: int, chain: list[ZeroDivisor]) -> None:
            nonlocal best_len, best
            if len(chain) > best_len:
                best_len, best = len(chain), list(chain)
            if len(chain) >= depth_cap:
                return
            prod_degree = T.element_degree(prod)
            for idx in range(start, len(cands)):
                z = cands[idx]
                if prod_degree + z.degree > T.top_degree:
                    continue
                nxt = T.multiply(prod, z.element())
                if nxt:
                    chain.append(z)
                    extend(nxt, idx, chain)
                    chain.pop()

        for idx, z in enumerate(cands):
            elem = z.element()
            if elem:
                extend(elem, idx, [z])
    elif search == "randomized":
        rng = Random(seed)
        if cands:
            for _ in range(trials):
                chain: list[ZeroDivisor] = []
                prod: TensorElement | None = None
                for _ in range(depth_cap):
                    degree = rng.choice(sorted({z.degree for z in cands}))
                    pool = [z for z in cands if z.degree == degree]
                    combo: TensorElement = {}
                    picked = []
                    for z in pool:
                        c = field.of_int(rng.randint(0, 3))
                        if field.is_zero(c):
                            continue
                        picked.append(z.label)
                        for key, v in z.element().items():
                            acc = field.add(combo.get(key, field.zero), field.mul(c, v))
                            if field.is_zero(acc):
                                combo.pop(key, None)
                            else:
                                combo[key] = acc
                    if not combo:
                        break
                    label = "+".join(picked)
                    nxt = combo if prod is None else T.multiply(prod, combo)
                    if not nxt:
                        break
                    prod = nxt
                    chain.append(ZeroDivisor(label, T.element_degree(combo), _freeze(combo)))
                if len(chain) > best_len:
                    best_len, best = len(chain), list(chain)
    else:
        raise ValueError(f"unknown search mode {search!r}")

    if best:
        assert verify_zero_divisor_certificate(T, best), "certificate failed re-multiplication"
    cert = ProductCertificate(
        length=best_len,
        factor_labels=[z.label for z in best],
        field_name=field.name,
        value_degree=sum(z.degree for z in best) if best else None,
    )
    return cert, best


def reduced_cuplength(ring: CohomologyRing, depth_cap: int) -> ProductCertificate:
    """Longest nonzero product of positive-degree basis classes."""
    field = ring.field
    cands = [g for g in range(ring.size) if ring.degrees[g] > 0]
    best_len = 0
    best: list[int] = []
    if depth_cap >= 1:
        def extend(prod: Element, start: int, chain: list[int]) -> None:
            nonlocal best_len, best
            if len(chain) > best_len:
                best_len, best = len(chain), list(chain)
            if len(chain) >= depth_cap:
                return
            for idx in range(start, len(cands)):
                g = cands[idx]
                nxt = ring.multiply(prod, {g: field.one})
                if nxt:
                    chain.append(g)
                    extend(nxt, idx, chain)
                    chain.pop()

        for idx, g in enumerate(cands):
            extend({g: field.one}, idx, [g])
    return ProductCertificate(
        length=best_len,
        factor_labels=[ring.labels[g] for g in best],
        field_name=field.name,
        value_degree=sum(ring.degrees[g] for g in best) if best else None,
    )
