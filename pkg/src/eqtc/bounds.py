"""Saturation engine deriving intervals for cat, TC, cat_G, TC_G with provenance.

Facts live in a FactBase: quantities (invariant kind + space + acting group)
with best-known lower/upper values, every value backed by a Bound record
whose premises point at earlier bounds, computation certificates, or
user-asserted facts.  Rules encode standard inequalities between these
invariants; saturation applies them to a fixed point, which exists because
every rule is monotone and values live in a finite lattice (integers up to
the seeded maxima, plus infinity).

Hypotheses that a finite model cannot decide (free action, metrizability,
acting by homomorphisms, bundle numerability) only enter as user-certified
annotations and are marked as such in provenance.  Empty fixed-point sets
count as connected for G-connectivity; every derivation consuming that
convention carries a caveat.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from math import ceil, inf, isinf
from random import Random

from eqtc.complex_core import SimplicialComplex, from_maximal_simplices
from eqtc.group_action import (
    RegularAction,
    Subgroup,
    fixed_subcomplex,
    group_closure,
    has_fixed_vertex,
    is_G_connected,
    isotropy,
    orbit_complex,
    regularize,
    subgroups,
    validate_action,
)
from eqtc.homology import parse_field
from eqtc.problems import Problem, ProblemFormatError
from eqtc.ring import (
    ProductCertificate,
    combined_zero_divisors,
    kunneth_tensor_ring,
    nilpotency_lower_bound,
    reduced_cuplength,
    ring_structure,
)

Value = object  # int >= 1 or math.inf


def fmt_value(v: Value) -> str:
    return "infinity" if isinf(v) else str(v)


@dataclass(frozen=True)
class EngineConfig:
    fields: tuple[str, ...] = ("F2", "F3", "Q")
    depth_cap: int | None = None  # None: 2*dim per space
    seed: int = 0
    subgroup_mode: str = "conjugacy"  # or "all"
    group_order_cap: int = 10_000
    subgroup_cap: int = 256
    max_ring_simplices: int = 4_000
    max_passes: int = 100

    @staticmethod
    def from_problem(problem: Problem, **overrides) -> "EngineConfig":
        merged: dict = {}
        for key, raw in problem.config.items():
            if key == "fields":
                merged["fields"] = tuple(raw)
            elif key in (
                "depth_cap",
                "seed",
                "subgroup_mode",
                "group_order_cap",
                "subgroup_cap",
                "max_ring_simplices",
            ):
                merged[key] = raw
            else:
                raise ProblemFormatError(f"config.{key}: unknown configuration key")
        merged.update({k: v for k, v in overrides.items() if v is not None})
        cfg = EngineConfig(**merged)
        if cfg.subgroup_mode not in ("conjugacy", "all"):
            raise ProblemFormatError("config.subgroup_mode: must be 'conjugacy' or 'all'")
        for name in cfg.fields:
            parse_field(name)
        return cfg


@dataclass(frozen=True)
class Quantity:
    kind: str  # cat | TC | cat_G | TC_G
    space: str  # space key within a context
    group: str | None = None  # None | "G" | "H<k>" | "GxG"


@dataclass(frozen=True)
class Bound:
    id: int
    context: str
    quantity: Quantity
    side: str  # lower | upper
    value: Value
    rule: str
    statement: str
    premises: tuple[int, ...] = ()
    certificate: dict | None = None
    hypotheses: tuple[str, ...] = ()
    caveats: tuple[str, ...] = ()


RULE_STATEMENTS: dict[str, str] = {
    "CONV": "covering-type invariants count the sets of an open cover, so every value is >= 1",
    "DISC": "a space with more than one path component admits no motion planner with "
    "finitely many domains of continuity: TC = infinity",
    "ASSERT": "user-asserted fact (taken on trust, see justification)",
    "R1": "TC of a space exceeds the number of factors in any nonzero product of "
    "zero-divisors in its cohomology tensor square, over any field",
    "R2": "cat of a path-connected space exceeds the number of factors in any nonzero "
    "product of positive-degree cohomology classes (Svarc's sectional-category bound)",
    "R3": "cat(X) <= TC(X) <= cat(X x X) for a path-connected space",
    "R4": "TC(X) <= 2 dim(X) + 1 for a path-connected paracompact space",
    "R4b": "cat(X) <= dim(X) + 1 for a connected complex (classical companion to the "
    "dimension bound for TC; not part of the equivariant theory)",
    "R5": "cat(X x X) <= 2 cat(X) - 1 for a connected finite complex (product "
    "inequality, trivial-group case)",
    "R6": "cat_G(X) >= cat(X/G); equality when a compact group acts freely on a "
    "metrizable space",
    "R7": "TC(X^H) <= TC_G(X) for every closed subgroup H of G",
    "R8": "TC_K(X) <= TC_G(X) for every closed subgroup K of G",
    "R9": "a G-space with a disconnected fixed set X^H is not G-connected and has "
    "TC_G(X) = infinity",
    "R10": "TC_G(X) <= cat_G(X x X) for a G-connected space (diagonal action)",
    "R11": "cat_H(X) <= TC_G(X) for a G-connected space and H the isotropy group of a point",
    "R12": "cat_G(X) <= TC_G(X) <= 2 cat_G(X) - 1 for a G-connected space with a fixed point",
    "R13": "for a G-connected space with a fixed point, TC_G(X) = 1 exactly when "
    "cat_G(X) = 1 (X is G-contractible)",
    "R14": "cat_G(X x Y) <= cat_G(X) + cat_G(Y) - 1 for G-connected spaces with "
    "X^G or Y^G nonempty (diagonal action); instantiated with Y = X",
    "R15": "cat_{GxK}(X x Y) <= cat_G(X) + cat_K(Y) - 1 for path-connected spaces "
    "(product action); instantiated with Y = X and K = G",
    "R16": "TC_G(X) = cat_G(X) when a G-connected topological group X carries an "
    "action by group homomorphisms",
    "R17": "TC_G(G) = cat(G) for a connected metrizable group acting on itself by "
    "left translations",
    "R18": "TC(X_G) <= TC_G(X) * TC(B) for the fiber space X_G = E x_G X associated "
    "to a numerable principal G-bundle E -> B",
    "R19": "TC(X) <= TC_G(X)",
}

# R9 precedes R7 so the canonical derivation of an infinite TC_G carries the
# disconnected-fixed-set witness (R7 would reach infinity via the seeded
# TC of the disconnected fixed space instead)
RULE_ORDER = [
    "R3",
    "R5",
    "R6",
    "R9",
    "R7",
    "R8",
    "R10",
    "R11",
    "R12",
    "R13",
    "R14",
    "R15",
    "R16",
    "R17",
    "R18",
    "R19",
]


@dataclass
class SpaceInfo:
    key: str
    display: str
    complex: SimplicialComplex | None  # None for formal spaces
    formal: bool = False
    empty: bool = False
    dim: int | None = None
    connected: bool | None = None
    simplex_count: int | None = None
    betti: dict[str, tuple[int, ...]] = field(default_factory=dict)
    rings: dict[str, object] = field(default_factory=dict)  # field name -> CohomologyRing
    analyzed: bool = False
    skip_reason: str | None = None


@dataclass
class SubgroupClassInfo:
    key: str
    display: str
    subgroup: Subgroup
    order: int
    is_trivial: bool
    is_full: bool
    fixed_space: str | None  # space key; "X" for the trivial class


@dataclass
class ProblemContext:
    name: str  # "" for the root, else "fiber" / "base"
    problem: Problem
    is_associated: bool = False
    complex: SimplicialComplex | None = None
    regular: RegularAction | None = None
    equivariant: bool = False
    classes: list[SubgroupClassInfo] = field(default_factory=list)
    spaces: dict[str, SpaceInfo] = field(default_factory=dict)
    annotations: tuple[str, ...] = ()
    g_connected: bool | None = None
    g_connected_witness: tuple[str, int] | None = None  # (class display, components)
    empty_fixed_classes: tuple[str, ...] = ()
    fixed_vertex: bool | None = None
    isotropy_classes: tuple[str, ...] = ()
    notes: list[str] = field(default_factory=list)

    def label(self) -> str:
        return self.name or "root"


@dataclass
class BestSide:
    value: Value
    bound_id: int | None


class FactBase:
    """Quantities with best bounds, the full bound log, and inconsistencies."""

    def __init__(self, config: EngineConfig):
        self.config = config
        self.contexts: dict[str, ProblemContext] = {}
        self.bounds: list[Bound] = []
        self.quantities: list[tuple[str, Quantity]] = []
        self.best: dict[tuple[str, Quantity], dict[str, BestSide]] = {}
        self.inconsistencies: list[tuple[str, Quantity, int, int]] = []
        self.associated: tuple[str, str, str] | None = None  # fiber ctx, base ctx, just.

    def register(self, ctx: str, q: Quantity) -> None:
        key = (ctx, q)
        if key in self.best:
            return
        self.quantities.append(key)
        self.best[key] = {
            "lower": BestSide(1, None),
            "upper": BestSide(inf, None),
        }

    def is_registered(self, ctx: str, q: Quantity) -> bool:
        return (ctx, q) in self.best

    def lower(self, ctx: str, q: Quantity) -> BestSide:
        return self.best[(ctx, q)]["lower"]

    def upper(self, ctx: str, q: Quantity) -> BestSide:
        return self.best[(ctx, q)]["upper"]

    def add_bound(
        self,
        ctx: str,
        q: Quantity,
        side: str,
        value: Value,
        rule: str,
        premises: tuple[int, ...] = (),
        certificate: dict | None = None,
        hypotheses: tuple[str, ...] = (),
        caveats: tuple[str, ...] = (),
    ) -> bool:
        """Record the bound if it improves the current best; returns True if it did."""
        assert side in ("lower", "upper")
        assert isinf(value) or (isinstance(value, int) and value >= 1), value
        record = self.best[(ctx, q)]
        current = record[side]
        improved = value > current.value if side == "lower" else value < current.value
        if not improved:
            return False
        bound = Bound(
            id=len(self.bounds) + 1,
            context=ctx,
            quantity=q,
            side=side,
            value=value,
            rule=rule,
            statement=RULE_STATEMENTS[rule],
            premises=premises,
            certificate=certificate,
            hypotheses=hypotheses,
            caveats=caveats,
        )
        self.bounds.append(bound)
        record[side] = BestSide(value, bound.id)
        lo, hi = record["lower"], record["upper"]
        if lo.value > hi.value:
            self.inconsistencies.append((ctx, q, lo.bound_id, hi.bound_id))
        return True

    def bound_by_id(self, bound_id: int) -> Bound:
        return self.bounds[bound_id - 1]

    def interval(self, ctx: str, q: Quantity) -> tuple[Value, Value]:
        record = self.best[(ctx, q)]
        return record["lower"].value, record["upper"].value

    def clone(self) -> "FactBase":
        """Copy with the same contexts but an independent bound log."""
        out = FactBase(self.config)
        out.contexts = self.contexts
        out.associated = self.associated
        out.bounds = list(self.bounds)
        out.quantities = list(self.quantities)
        out.best = {k: {s: replace(v) for s, v in sides.items()} for k, sides in self.best.items()}
        out.inconsistencies = list(self.inconsistencies)
        return out


# ---------------------------------------------------------------------------
# display helpers

_KIND_ORDER = {"cat": 0, "TC": 1, "cat_G": 2, "TC_G": 3}


def quantity_display(ctx: ProblemContext, q: Quantity) -> str:
    space = ctx.spaces[q.space].display if q.space in ctx.spaces else q.space
    if q.kind in ("cat", "TC"):
        head = q.kind
    else:
        base = "cat" if q.kind == "cat_G" else "TC"
        head = f"{base}_{{{q.group}}}" if q.group not in (None, "G") else f"{base}_G"
    prefix = f"{ctx.name}:" if ctx.name else ""
    return f"{prefix}{head}({space})"


# ---------------------------------------------------------------------------
# context construction and seeding


def _space_quantity(ctx: ProblemContext, kind: str, space: str, group: str | None = None) -> Quantity:
    return Quantity(kind, space, group)


def _canonical_equivariant(ctx: ProblemContext, kind: str, class_key: str) -> Quantity:
    """cat_H / TC_K for a subgroup class, folding trivial and full classes."""
    info = next(c for c in ctx.classes if c.key == class_key)
    base = "cat" if kind == "cat_G" else "TC"
    if info.is_trivial:
        return Quantity(base, "X", None)
    if info.is_full:
        return Quantity(kind, "X", "G")
    return Quantity(kind, "X", info.key)


def _analyze_space(info: SpaceInfo, config: EngineConfig) -> None:
    K = info.complex
    if K is None or info.empty:
        return
    info.dim = K.dim
    info.connected = K.is_connected()
    info.simplex_count = len(K.simplices)
    if info.simplex_count > config.max_ring_simplices:
        info.skip_reason = (
            f"cohomology skipped: {info.simplex_count} simplices exceed the "
            f"configured limit {config.max_ring_simplices}"
        )
        return
    for name in config.fields:
        # one ring per field; Betti numbers come with the basis for free
        ring = ring_structure(K, parse_field(name))
        info.rings[name] = ring
        info.betti[name] = ring.basis.betti_vector()
    info.analyzed = True


def _build_action_context(name: str, problem: Problem, config: EngineConfig) -> ProblemContext:
    ctx = ProblemContext(name=name, problem=problem)
    K = from_maximal_simplices(problem.vertex_count, [list(s) for s in problem.maximal_simplices])
    ctx.complex = K
    G = group_closure(K.vertex_count, [list(g) for g in problem.group_generators],
                      cap=config.group_order_cap)
    action = validate_action(K, G)
    R = regularize(action)
    assert R.complex.dim == K.dim, "subdivision must preserve dimension"
    ctx.regular = R
    ctx.equivariant = not G.is_trivial
    ctx.annotations = tuple(problem.annotations)

    ctx.spaces["X"] = SpaceInfo("X", "X", K)
    _analyze_space(ctx.spaces["X"], config)
    ctx.spaces["XxX"] = SpaceInfo(
        "XxX", "X x X", None, formal=True, dim=2 * K.dim, connected=ctx.spaces["X"].connected
    )

    if ctx.equivariant:
        # subgroups are enumerated on the transported group, so their fixed
        # sets are subcomplexes of the regularized complex
        mode = "up_to_conjugacy" if config.subgroup_mode == "conjugacy" else "all"
        class_list = subgroups(R.group, mode, cap=config.subgroup_cap)
        for pos, H in enumerate(class_list):
            key = f"H{pos}"
            display = "G" if H.is_full else key
            fixed_key: str | None
            if H.is_trivial:
                fixed_key = "X"
            else:
                fixed, _ = fixed_subcomplex(R, H)
                fixed_key = f"fix:{key}"
                info = SpaceInfo(fixed_key, f"X^{display}", fixed, empty=fixed.is_empty)
                if not fixed.is_empty:
                    _analyze_space(info, config)
                ctx.spaces[fixed_key] = info
            ctx.classes.append(
                SubgroupClassInfo(key, display, H, H.order, H.is_trivial, H.is_full, fixed_key)
            )

        quotient, _ = orbit_complex(R)
        orbit_info = SpaceInfo("orbit", "X/G", quotient)
        _analyze_space(orbit_info, config)
        ctx.spaces["orbit"] = orbit_info

        conn = is_G_connected(R, [c.subgroup for c in ctx.classes])
        ctx.g_connected = conn.value
        if conn.witness is not None:
            pos, n_parts = conn.witness
            ctx.g_connected_witness = (ctx.classes[pos].display, n_parts)
        ctx.empty_fixed_classes = tuple(ctx.classes[p].display for p in conn.empty_classes)
        ctx.fixed_vertex = has_fixed_vertex(R)

        iso_keys = []
        for v in range(R.complex.vertex_count):
            stab = isotropy(R.action, v)
            for cls in ctx.classes:
                if any(
                    cls.subgroup.conjugate(g).elements == stab.elements
                    for g in R.group.elements
                ):
                    if cls.key not in iso_keys:
                        iso_keys.append(cls.key)
                    break
        ctx.isotropy_classes = tuple(sorted(iso_keys))

        if "free_action" in ctx.annotations and ctx.fixed_vertex:
            ctx.notes.append(
                "annotation free_action contradicts a computed fixed vertex; "
                "the annotation was still honoured (user-certified)"
            )
    return ctx


def _register_quantities(fb: FactBase, ctx: ProblemContext) -> None:
    name = ctx.name
    if ctx.is_associated:
        fb.register(name, Quantity("TC", "assoc", None))
        return
    for kind in ("cat", "TC"):
        fb.register(name, Quantity(kind, "X", None))
    fb.register(name, Quantity("cat", "XxX", None))
    if ctx.equivariant:
        fb.register(name, Quantity("cat_G", "X", "G"))
        fb.register(name, Quantity("TC_G", "X", "G"))
        fb.register(name, Quantity("cat_G", "XxX", "G"))
        fb.register(name, Quantity("cat_G", "XxX", "GxG"))
        for kind in ("cat", "TC"):
            fb.register(name, Quantity(kind, "orbit", None))
        for cls in ctx.classes:
            if cls.is_trivial:
                continue
            space = cls.fixed_space
            if space and not ctx.spaces[space].empty:
                for kind in ("cat", "TC"):
                    fb.register(name, Quantity(kind, space, None))
            if not cls.is_full:
                fb.register(name, Quantity("cat_G", "X", cls.key))
                fb.register(name, Quantity("TC_G", "X", cls.key))


def _seed_convention(fb: FactBase) -> None:
    for ctx_name, q in fb.quantities:
        fb.add_bound(ctx_name, q, "lower", 1, "CONV")


def _certificate_dict(cert: ProductCertificate) -> dict:
    return {
        "field": cert.field_name,
        "length": cert.length,
        "factors": list(cert.factor_labels),
    }


def _seed_space_bounds(fb: FactBase, ctx: ProblemContext) -> None:
    config = fb.config
    for key, info in sorted(ctx.spaces.items()):
        if info.formal or info.empty or info.complex is None:
            continue
        q_cat = Quantity("cat", key, None)
        q_tc = Quantity("TC", key, None)
        if not fb.is_registered(ctx.name, q_tc):
            continue
        if info.connected is False:
            fb.add_bound(
                ctx.name,
                q_tc,
                "lower",
                inf,
                "DISC",
                certificate={"components": info.complex.connected_components()},
            )
        if not info.analyzed:
            continue
        K = info.complex
        zd_cap = config.depth_cap if config.depth_cap is not None else max(1, 2 * K.dim)
        cup_cap = config.depth_cap if config.depth_cap is not None else max(1, K.dim)
        if info.connected:
            # for disconnected spaces the infinity seed always dominates R1,
            # and component idempotents would make the product search useless
            for field_name in config.fields:
                ring = info.rings[field_name]
                tensor = kunneth_tensor_ring(ring)
                zd = combined_zero_divisors(tensor)
                cert, _ = nilpotency_lower_bound(tensor, zd, zd_cap)
                if cert.length >= 1:
                    fb.add_bound(
                        ctx.name,
                        q_tc,
                        "lower",
                        cert.length + 1,
                        "R1",
                        certificate=_certificate_dict(cert),
                    )
                cup = reduced_cuplength(ring, cup_cap)
                if cup.length >= 1:
                    fb.add_bound(
                        ctx.name,
                        q_cat,
                        "lower",
                        cup.length + 1,
                        "R2",
                        certificate=_certificate_dict(cup),
                        hypotheses=(f"path-connected({info.display})",),
                    )
        if info.connected:
            fb.add_bound(
                ctx.name,
                q_tc,
                "upper",
                2 * info.dim + 1,
                "R4",
                certificate={"dim": info.dim},
                hypotheses=(f"path-connected({info.display})",),
            )
            fb.add_bound(
                ctx.name,
                q_cat,
                "upper",
                info.dim + 1,
                "R4b",
                certificate={"dim": info.dim},
                hypotheses=(f"path-connected({info.display})",),
            )


def _seed_assertions(fb: FactBase, ctx: ProblemContext) -> None:
    for fact in ctx.problem.asserted_facts:
        if fact.kind in ("cat_G", "TC_G"):
            if not ctx.equivariant:
                raise ProblemFormatError(
                    f"asserted {fact.kind} but the group of {ctx.label()} is trivial"
                )
            q = Quantity(fact.kind, fact.space, "G")
        else:
            q = Quantity(fact.kind, fact.space, None)
        if not fb.is_registered(ctx.name, q):
            raise ProblemFormatError(
                f"asserted fact targets unregistered quantity {fact.kind}({fact.space})"
            )
        sides = ("lower", "upper") if fact.side == "equal" else (fact.side,)
        for side in sides:
            fb.add_bound(
                ctx.name,
                q,
                side,
                fact.value,
                "ASSERT",
                certificate={"justification": fact.justification},
                hypotheses=("user-asserted",),
            )


def seed_facts(problem: Problem, config: EngineConfig | None = None) -> FactBase:
    """Build contexts, compute all space data, and seed the fact base."""
    config = config or EngineConfig.from_problem(problem)
    fb = FactBase(config)
    if problem.is_associated_space:
        if problem.fiber.is_associated_space or problem.base.is_associated_space:
            raise ProblemFormatError("nested associated-space declarations are not supported")
        root = ProblemContext(name="", problem=problem, is_associated=True)
        root.spaces["assoc"] = SpaceInfo("assoc", "X_G", None, formal=True)
        fb.contexts[""] = root
        fb.contexts["fiber"] = _build_action_context("fiber", problem.fiber, config)
        fb.contexts["base"] = _build_action_context("base", problem.base, config)
        fb.associated = ("fiber", "base", problem.bundle_justification)
    else:
        fb.contexts[""] = _build_action_context("", problem, config)
    for ctx in fb.contexts.values():
        _register_quantities(fb, ctx)
    _seed_convention(fb)
    for ctx in fb.contexts.values():
        if not ctx.is_associated:
            _seed_space_bounds(fb, ctx)
            _seed_assertions(fb, ctx)
    return fb


# ---------------------------------------------------------------------------
# rules


def _twice_minus_one(v: Value) -> Value:
    return inf if isinf(v) else 2 * v - 1


def _half_roundup(v: Value) -> Value:
    # inverse of v <= 2u - 1: u >= (v+1)/2
    return inf if isinf(v) else ceil((v + 1) / 2)


def _product(a: Value, b: Value) -> Value:
    return inf if (isinf(a) or isinf(b)) else a * b


@dataclass(frozen=True)
class Candidate:
    ctx: str
    quantity: Quantity
    side: str
    value: Value
    premises: tuple[int, ...] = ()
    certificate: dict | None = None
    hypotheses: tuple[str, ...] = ()
    caveats: tuple[str, ...] = ()


def _ineq_candidates(
    fb: FactBase,
    ctx: str,
    smaller: Quantity,
    larger: Quantity,
    hypotheses: tuple[str, ...],
    caveats: tuple[str, ...] = (),
) -> list[Candidate]:
    """Both interval propagations of `smaller <= larger`."""
    out = []
    lo = fb.lower(ctx, smaller)
    out.append(
        Candidate(ctx, larger, "lower", lo.value, _ids(lo), None, hypotheses, caveats)
    )
    hi = fb.upper(ctx, larger)
    if not isinf(hi.value):
        out.append(
            Candidate(ctx, smaller, "upper", hi.value, _ids(hi), None, hypotheses, caveats)
        )
    return out


def _ids(*sides: BestSide) -> tuple[int, ...]:
    return tuple(s.bound_id for s in sides if s.bound_id is not None)


def _g_hypotheses(ctx: ProblemContext) -> tuple[tuple[str, ...], tuple[str, ...]]:
    hyp = ("G-connected (computed over subgroup classes)",)
    caveats = ()
    if ctx.empty_fixed_classes:
        caveats = (
            "empty fixed sets treated as path-connected for: "
            + ", ".join(f"X^{d}" for d in ctx.empty_fixed_classes),
        )
    return hyp, caveats


def _rule_R3(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if ctx.is_associated or ctx.spaces["X"].connected is not True:
        return []
    hyp = ("path-connected(X)",)
    cat_x = Quantity("cat", "X", None)
    tc_x = Quantity("TC", "X", None)
    cat_xx = Quantity("cat", "XxX", None)
    return _ineq_candidates(fb, ctx.name, cat_x, tc_x, hyp) + _ineq_candidates(
        fb, ctx.name, tc_x, cat_xx, hyp
    )


def _rule_R5(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if ctx.is_associated or ctx.spaces["X"].connected is not True:
        return []
    cat_x = fb.upper(ctx.name, Quantity("cat", "X", None))
    if isinf(cat_x.value):
        return []
    return [
        Candidate(
            ctx.name,
            Quantity("cat", "XxX", None),
            "upper",
            _twice_minus_one(cat_x.value),
            _ids(cat_x),
            None,
            ("path-connected(X)",),
        )
    ]


def _rule_R6(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if not ctx.equivariant:
        return []
    cat_g = Quantity("cat_G", "X", "G")
    cat_orbit = Quantity("cat", "orbit", None)
    out = _ineq_candidates(fb, ctx.name, cat_orbit, cat_g, ())
    if "free_action" in ctx.annotations and "metrizable" in ctx.annotations:
        hyp = (
            "annotation:free_action (user-certified)",
            "annotation:metrizable (user-certified)",
        )
        out += _ineq_candidates(fb, ctx.name, cat_g, cat_orbit, hyp)
    return out


def _rule_R7(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if not ctx.equivariant:
        return []
    out = []
    tc_g = Quantity("TC_G", "X", "G")
    for cls in ctx.classes:
        space = cls.fixed_space
        if space is None or (space != "X" and ctx.spaces[space].empty):
            continue
        tc_fix = Quantity("TC", space, None)
        lo = fb.lower(ctx.name, tc_fix)
        out.append(
            Candidate(
                ctx.name,
                tc_g,
                "lower",
                lo.value,
                _ids(lo),
                {"subgroup": cls.display},
                (),
            )
        )
    return out


def _rule_R8(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if not ctx.equivariant:
        return []
    out = []
    tc_g = Quantity("TC_G", "X", "G")
    for cls in ctx.classes:
        if cls.is_trivial or cls.is_full:
            continue
        tc_k = Quantity("TC_G", "X", cls.key)
        out += _ineq_candidates(fb, ctx.name, tc_k, tc_g, (f"subgroup {cls.display} <= G",))
    return out


def _rule_R9(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if not ctx.equivariant or ctx.g_connected is not False:
        return []
    display, parts = ctx.g_connected_witness
    return [
        Candidate(
            ctx.name,
            Quantity("TC_G", "X", "G"),
            "lower",
            inf,
            (),
            {"witness_subgroup": display, "components": parts},
            (f"fixed set X^{display} has {parts} path components",),
        )
    ]


def _rule_R10(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if not ctx.equivariant or ctx.g_connected is not True:
        return []
    hyp, caveats = _g_hypotheses(ctx)
    return _ineq_candidates(
        fb,
        ctx.name,
        Quantity("TC_G", "X", "G"),
        Quantity("cat_G", "XxX", "G"),
        hyp,
        caveats,
    )


def _rule_R11(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if not ctx.equivariant or ctx.g_connected is not True:
        return []
    hyp, caveats = _g_hypotheses(ctx)
    out = []
    tc_g = Quantity("TC_G", "X", "G")
    for key in ctx.isotropy_classes:
        cls = next(c for c in ctx.classes if c.key == key)
        cat_h = _canonical_equivariant(ctx, "cat_G", key)
        out += _ineq_candidates(
            fb,
            ctx.name,
            cat_h,
            tc_g,
            hyp + (f"isotropy subgroup {cls.display} occurs at a vertex",),
            caveats,
        )
    return out


def _rule_R12(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if not ctx.equivariant or ctx.g_connected is not True or not ctx.fixed_vertex:
        return []
    hyp, caveats = _g_hypotheses(ctx)
    hyp = hyp + ("X^G nonempty (fixed vertex found)",)
    cat_g = Quantity("cat_G", "X", "G")
    tc_g = Quantity("TC_G", "X", "G")
    out = _ineq_candidates(fb, ctx.name, cat_g, tc_g, hyp, caveats)
    hi = fb.upper(ctx.name, cat_g)
    if not isinf(hi.value):
        out.append(
            Candidate(
                ctx.name, tc_g, "upper", _twice_minus_one(hi.value), _ids(hi), None, hyp, caveats
            )
        )
    lo = fb.lower(ctx.name, tc_g)
    if lo.value > 1:
        out.append(
            Candidate(
                ctx.name, cat_g, "lower", _half_roundup(lo.value), _ids(lo), None, hyp, caveats
            )
        )
    return out


def _rule_R13(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if not ctx.equivariant or ctx.g_connected is not True or not ctx.fixed_vertex:
        return []
    hyp, caveats = _g_hypotheses(ctx)
    hyp = hyp + ("X^G nonempty (fixed vertex found)",)
    cat_g = Quantity("cat_G", "X", "G")
    tc_g = Quantity("TC_G", "X", "G")
    out = []
    for a, b in ((cat_g, tc_g), (tc_g, cat_g)):
        hi = fb.upper(ctx.name, a)
        if hi.value == 1:
            out.append(Candidate(ctx.name, b, "upper", 1, _ids(hi), None, hyp, caveats))
        lo = fb.lower(ctx.name, a)
        if lo.value >= 2:
            out.append(Candidate(ctx.name, b, "lower", 2, _ids(lo), None, hyp, caveats))
    return out


def _rule_R14(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if not ctx.equivariant or ctx.g_connected is not True or not ctx.fixed_vertex:
        return []
    hyp, caveats = _g_hypotheses(ctx)
    hyp = hyp + ("X^G nonempty (fixed vertex found)", "finite complexes are completely normal")
    hi = fb.upper(ctx.name, Quantity("cat_G", "X", "G"))
    if isinf(hi.value):
        return []
    return [
        Candidate(
            ctx.name,
            Quantity("cat_G", "XxX", "G"),
            "upper",
            _twice_minus_one(hi.value),
            _ids(hi),
            None,
            hyp,
            caveats,
        )
    ]


def _rule_R15(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if not ctx.equivariant or ctx.spaces["X"].connected is not True:
        return []
    hi = fb.upper(ctx.name, Quantity("cat_G", "X", "G"))
    if isinf(hi.value):
        return []
    return [
        Candidate(
            ctx.name,
            Quantity("cat_G", "XxX", "GxG"),
            "upper",
            _twice_minus_one(hi.value),
            _ids(hi),
            None,
            ("path-connected(X)", "finite complexes are completely normal"),
        )
    ]


def _equality_candidates(
    fb: FactBase, ctx: str, a: Quantity, b: Quantity, hyp: tuple[str, ...],
    caveats: tuple[str, ...] = ()
) -> list[Candidate]:
    return _ineq_candidates(fb, ctx, a, b, hyp, caveats) + _ineq_candidates(
        fb, ctx, b, a, hyp, caveats
    )


def _rule_R16(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if (
        not ctx.equivariant
        or "topological_group_homomorphism_action" not in ctx.annotations
        or ctx.g_connected is not True
    ):
        return []
    hyp, caveats = _g_hypotheses(ctx)
    hyp = ("annotation:topological_group_homomorphism_action (user-certified)",) + hyp
    return _equality_candidates(
        fb, ctx.name, Quantity("TC_G", "X", "G"), Quantity("cat_G", "X", "G"), hyp, caveats
    )


def _rule_R17(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if (
        not ctx.equivariant
        or "left_translation_action" not in ctx.annotations
        or "metrizable" not in ctx.annotations
        or ctx.spaces["X"].connected is not True
    ):
        return []
    hyp = (
        "annotation:left_translation_action (user-certified)",
        "annotation:metrizable (user-certified)",
        "path-connected(X)",
    )
    return _equality_candidates(
        fb, ctx.name, Quantity("TC_G", "X", "G"), Quantity("cat", "X", None), hyp
    )


def _rule_R18(fb: FactBase, _ctx: ProblemContext) -> list[Candidate]:
    if fb.associated is None:
        return []
    fiber_name, base_name, justification = fb.associated
    fiber_ctx = fb.contexts[fiber_name]
    fiber_q = (
        Quantity("TC_G", "X", "G") if fiber_ctx.equivariant else Quantity("TC", "X", None)
    )
    base_q = Quantity("TC", "X", None)
    hi_f = fb.upper(fiber_name, fiber_q)
    hi_b = fb.upper(base_name, base_q)
    if isinf(hi_f.value) or isinf(hi_b.value):
        return []
    return [
        Candidate(
            "",
            Quantity("TC", "assoc", None),
            "upper",
            _product(hi_f.value, hi_b.value),
            _ids(hi_f, hi_b),
            {"fiber_upper": hi_f.value, "base_upper": hi_b.value},
            ("numerable principal bundle (user-certified): " + justification,),
        )
    ]


def _rule_R19(fb: FactBase, ctx: ProblemContext) -> list[Candidate]:
    if not ctx.equivariant:
        return []
    return _ineq_candidates(
        fb, ctx.name, Quantity("TC", "X", None), Quantity("TC_G", "X", "G"), ()
    )


_RULES = {
    "R3": _rule_R3,
    "R5": _rule_R5,
    "R6": _rule_R6,
    "R7": _rule_R7,
    "R8": _rule_R8,
    "R9": _rule_R9,
    "R10": _rule_R10,
    "R11": _rule_R11,
    "R12": _rule_R12,
    "R13": _rule_R13,
    "R14": _rule_R14,
    "R15": _rule_R15,
    "R16": _rule_R16,
    "R17": _rule_R17,
    "R18": _rule_R18,
    "R19": _rule_R19,
}


def saturate(fb: FactBase, rule_order: list[str] | None = None) -> FactBase:
    """Apply the rule set to a fixed point.

    Values live in a finite lattice, every rule is monotone, and only strict
    improvements are recorded, so this terminates; the fixed point does not
    depend on rule_order.
    """
    order = rule_order or RULE_ORDER
    assert sorted(order) == sorted(RULE_ORDER), "rule_order must be a permutation"
    for _ in range(fb.config.max_passes):
        improved = False
        for rule_id in order:
            rule = _RULES[rule_id]
            for ctx in list(fb.contexts.values()):
                for cand in rule(fb, ctx):
                    if fb.add_bound(
                        cand.ctx,
                        cand.quantity,
                        cand.side,
                        cand.value,
                        rule_id,
                        premises=cand.premises,
                        certificate=cand.certificate,
                        hypotheses=cand.hypotheses,
                        caveats=cand.caveats,
                    ):
                        improved = True
                if rule_id == "R18":
                    break  # cross-context rule, run once per pass
        if not improved:
            return fb
    raise AssertionError("saturation did not reach a fixed point within the pass limit")


def analyze_problem(problem: Problem, config: EngineConfig | None = None) -> FactBase:
    """validate -> regularize -> seed -> saturate."""
    fb = seed_facts(problem, config)
    return saturate(fb)


# ---------------------------------------------------------------------------
# reports


def _sorted_quantities(fb: FactBase) -> list[tuple[str, Quantity]]:
    def sort_key(item: tuple[str, Quantity]):
        ctx_name, q = item
        ctx_rank = {"": 0, "fiber": 1, "base": 2}.get(ctx_name, 3)
        return (
            ctx_rank,
            _KIND_ORDER[q.kind],
            q.space,
            q.group or "",
        )

    return sorted(fb.quantities, key=sort_key)


def _interval_text(lo: Value, hi: Value) -> str:
    if isinf(lo):
        return "= infinity"
    if lo == hi:
        return f"= {lo}"
    if isinf(hi):
        return f"in [{lo}, infinity) (no finite upper bound derived)"
    return f"in [{lo}, {hi}]"


def structured_report(fb: FactBase) -> dict:
    quantities = []
    for ctx_name, q in _sorted_quantities(fb):
        ctx = fb.contexts[ctx_name]
        lo, hi = fb.best[(ctx_name, q)]["lower"], fb.best[(ctx_name, q)]["upper"]
        quantities.append(
            {
                "context": ctx.label(),
                "kind": q.kind,
                "space": q.space,
                "group": q.group,
                "display": quantity_display(ctx, q),
                "lower": fmt_value(lo.value),
                "upper": fmt_value(hi.value),
                "lower_bound_id": lo.bound_id,
                "upper_bound_id": hi.bound_id,
            }
        )
    bounds = []
    for b in fb.bounds:
        bounds.append(
            {
                "id": b.id,
                "context": fb.contexts[b.context].label(),
                "quantity": quantity_display(fb.contexts[b.context], b.quantity),
                "side": b.side,
                "value": fmt_value(b.value),
                "rule": b.rule,
                "statement": b.statement,
                "premises": list(b.premises),
                "certificate": b.certificate,
                "hypotheses": list(b.hypotheses),
                "caveats": list(b.caveats),
            }
        )
    contexts = []
    for ctx in fb.contexts.values():
        spaces = []
        for key, info in sorted(ctx.spaces.items()):
            spaces.append(
                {
                    "key": key,
                    "display": info.display,
                    "formal": info.formal,
                    "empty": info.empty,
                    "dim": info.dim,
                    "connected": info.connected,
                    "simplex_count": info.simplex_count,
                    "betti": {f: list(v) for f, v in sorted(info.betti.items())},
                    "skip_reason": info.skip_reason,
                }
            )
        entry = {
            "context": ctx.label(),
            "problem": ctx.problem.name,
            "equivariant": ctx.equivariant,
            "annotations": list(ctx.annotations),
            "spaces": spaces,
            "notes": list(ctx.notes),
        }
        if ctx.regular is not None:
            entry["subdivision_rounds"] = ctx.regular.subdivision_rounds
            entry["regularized_f_vector"] = list(ctx.regular.complex.f_vector())
        if ctx.equivariant:
            entry["group_order"] = ctx.regular.group.order
            entry["subgroup_classes"] = [
                {"key": c.key, "display": c.display, "order": c.order}
                for c in ctx.classes
            ]
            entry["g_connected"] = ctx.g_connected
            entry["g_connected_witness"] = (
                {
                    "subgroup": ctx.g_connected_witness[0],
                    "components": ctx.g_connected_witness[1],
                }
                if ctx.g_connected_witness
                else None
            )
            entry["empty_fixed_sets"] = list(ctx.empty_fixed_classes)
            entry["has_fixed_vertex"] = ctx.fixed_vertex
            entry["isotropy_classes"] = list(ctx.isotropy_classes)
        contexts.append(entry)
    return {
        "schema_version": 1,
        "problem": fb.contexts[""].problem.name,
        "config": {
            "fields": list(fb.config.fields),
            "depth_cap": fb.config.depth_cap,
            "seed": fb.config.seed,
            "subgroup_mode": fb.config.subgroup_mode,
            "max_ring_simplices": fb.config.max_ring_simplices,
        },
        "contexts": contexts,
        "quantities": quantities,
        "bounds": bounds,
        "inconsistencies": [
            {
                "context": fb.contexts[ctx].label(),
                "quantity": quantity_display(fb.contexts[ctx], q),
                "lower_bound_id": lo_id,
                "upper_bound_id": hi_id,
            }
            for ctx, q, lo_id, hi_id in fb.inconsistencies
        ],
    }


def text_report(fb: FactBase) -> str:
    lines: list[str] = []
    root = fb.contexts[""]
    lines.append(f"problem: {root.problem.name}")
    cfg = fb.config
    cap = "auto" if cfg.depth_cap is None else str(cfg.depth_cap)
    lines.append(
        f"config: fields={','.join(cfg.fields)} depth-cap={cap} "
        f"seed={cfg.seed} subgroups={cfg.subgroup_mode}"
    )
    for ctx in fb.contexts.values():
        lines.append("")
        lines.append(f"context {ctx.label()}: {ctx.problem.name}")
        if ctx.is_associated:
            _, _, justification = fb.associated
            lines.append(f"  formal associated space X_G; bundle hypothesis: {justification}")
        else:
            x = ctx.spaces["X"]
            conn = "connected" if x.connected else "disconnected"
            lines.append(
                f"  complex: {x.complex.vertex_count} vertices, "
                f"{x.simplex_count} simplices, dim {x.dim}, {conn}"
            )
            if ctx.equivariant:
                lines.append(
                    f"  group: order {ctx.regular.group.order}, "
                    f"{len(ctx.classes)} subgroup classes, regularized after "
                    f"{ctx.regular.subdivision_rounds} subdivision(s)"
                )
                if ctx.g_connected:
                    caveat = (
                        " (empty fixed sets counted as connected: "
                        + ", ".join(f"X^{d}" for d in ctx.empty_fixed_classes)
                        + ")"
                        if ctx.empty_fixed_classes
                        else ""
                    )
                    lines.append(f"  G-connected: yes{caveat}")
                else:
                    d, n = ctx.g_connected_witness
                    lines.append(
                        f"  G-connected: no (fixed set X^{d} has {n} path components)"
                    )
                lines.append(f"  fixed vertex: {'yes' if ctx.fixed_vertex else 'no'}")
                iso = ", ".join(
                    next(c.display for c in ctx.classes if c.key == k)
                    for k in ctx.isotropy_classes
                )
                lines.append(f"  isotropy subgroup classes at vertices: {iso}")
            if ctx.annotations:
                lines.append(f"  annotations: {', '.join(ctx.annotations)}")
            for key, info in sorted(ctx.spaces.items()):
                if info.formal:
                    continue
                if info.empty:
                    lines.append(f"  space {info.display}: empty")
                    continue
                betti = " ".join(
                    f"{f}=({','.join(map(str, v))})" for f, v in sorted(info.betti.items())
                )
                extra = f" betti {betti}" if betti else ""
                skip = f" [{info.skip_reason}]" if info.skip_reason else ""
                conn = "connected" if info.connected else "disconnected"
                lines.append(f"  space {info.display}: dim {info.dim}, {conn}{extra}{skip}")
            for note in ctx.notes:
                lines.append(f"  note: {note}")
    lines.append("")
    lines.append("quantities:")
    for ctx_name, q in _sorted_quantities(fb):
        ctx = fb.contexts[ctx_name]
        lo, hi = fb.interval(ctx_name, q)
        lines.append(f"  {quantity_display(ctx, q)} {_interval_text(lo, hi)}")
    lines.append("")
    lines.append("derivations:")
    for b in fb.bounds:
        ctx = fb.contexts[b.context]
        symbol = ">=" if b.side == "lower" else "<="
        parts = [
            f"  #{b.id} {quantity_display(ctx, b.quantity)} {symbol} {fmt_value(b.value)}"
            f" [{b.rule}] {b.statement}"
        ]
        if b.premises:
            parts.append(f"      premises: {', '.join('#' + str(p) for p in b.premises)}")
        if b.certificate:
            parts.append(f"      certificate: {json.dumps(b.certificate, sort_keys=True)}")
        if b.hypotheses:
            parts.append(f"      hypotheses: {'; '.join(b.hypotheses)}")
        if b.caveats:
            parts.append(f"      caveats: {'; '.join(b.caveats)}")
        lines.extend(parts)
    lines.append("")
    if fb.inconsistencies:
        lines.append("INCONSISTENT:")
        for ctx_name, q, lo_id, hi_id in fb.inconsistencies:
            ctx = fb.contexts[ctx_name]
            lo, hi = fb.bound_by_id(lo_id), fb.bound_by_id(hi_id)
            lines.append(
                f"  {quantity_display(ctx, q)}: lower {fmt_value(lo.value)} from #{lo.id} "
                f"[{lo.rule}] clashes with upper {fmt_value(hi.value)} from #{hi.id} [{hi.rule}]"
            )
    else:
        lines.append("inconsistencies: none")
    return "\n".join(lines) + "\n"


def report(fb: FactBase, fmt: str = "text") -> str:
    if fmt == "text":
        return text_report(fb)
    if fmt in ("json", "structured"):
        return json.dumps(structured_report(fb), indent=2, sort_keys=True) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def shuffled_rule_order(seed: int) -> list[str]:
    order = list(RULE_ORDER)
    Random(seed).shuffle(order)
    return order
