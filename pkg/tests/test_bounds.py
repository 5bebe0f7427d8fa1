from __future__ import annotations

import json
from dataclasses import replace
from math import inf, isinf

import pytest

from eqtc.bounds import (
    Quantity,
    analyze_problem,
    report,
    seed_facts,
    saturate,
    shuffled_rule_order,
    structured_report,
    text_report,
)
from eqtc.problems import AssertedFact, Problem, ProblemFormatError, builtin_examples

EXAMPLES = builtin_examples()


def interval(fb, kind, space, group=None, ctx=""):
    return fb.interval(ctx, Quantity(kind, space, group))


def simplex_problem(name="solid", n=3, gens=(), facts=(), annotations=()):
    from itertools import combinations

    return Problem(
        name=name,
        vertex_count=n + 1,
        maximal_simplices=(tuple(range(n + 1)),),
        group_generators=tuple(tuple(g) for g in gens),
        asserted_facts=tuple(facts),
        annotations=tuple(annotations),
    )


def test_trivial_group_solid_simplex_bounds():
    fb = analyze_problem(simplex_problem())
    assert interval(fb, "cat", "X") == (1, 4)
    assert interval(fb, "TC", "X") == (1, 7)  # 2*3+1, no contractibility detection
    # trivial-group input: only non-equivariant quantities
    assert all(q.kind in ("cat", "TC") for _, q in fb.quantities)


def test_sphere_trivial_group_tc_bounds():
    from itertools import combinations

    for n, expected in ((1, 2), (2, 3), (3, 2), (4, 3)):
        problem = Problem(
            name=f"sphere{n}",
            vertex_count=n + 2,
            maximal_simplices=tuple(
                tuple(c) for c in combinations(range(n + 2), n + 1)
            ),
        )
        fb = analyze_problem(problem)
        lo, hi = interval(fb, "TC", "X")
        assert lo == expected
        assert hi == 2 * n + 1


def test_reflection_circle_is_infinite_with_witness():
    fb = analyze_problem(EXAMPLES["sphere-reflection-n1"])
    assert interval(fb, "TC_G", "X", "G") == (inf, inf)
    bid = fb.best[("", Quantity("TC_G", "X", "G"))]["lower"].bound_id
    bound = fb.bound_by_id(bid)
    assert bound.rule == "R9"
    assert bound.certificate["components"] == 2
    assert not fb.inconsistencies


def test_reflection_sphere_closes_interval_with_assertion():
    for name in ("sphere-reflection-n2", "sphere-reflection-n3"):
        fb = analyze_problem(EXAMPLES[name])
        assert interval(fb, "TC_G", "X", "G") == (3, 3)
        assert interval(fb, "cat_G", "X", "G") == (2, 2)
        assert not fb.inconsistencies


def test_reflection_sphere_without_assertion_only_lower():
    bare = replace(EXAMPLES["sphere-reflection-n2"], asserted_facts=())
    fb = analyze_problem(bare)
    lo, hi = interval(fb, "TC_G", "X", "G")
    assert lo == 3
    assert isinf(hi)


def test_reflection_lower_bound_source_n3():
    # for the odd sphere the binding lower bound comes from the fixed 2-sphere
    fb = analyze_problem(EXAMPLES["sphere-reflection-n3"])
    bid = fb.best[("", Quantity("TC_G", "X", "G"))]["lower"].bound_id
    bound = fb.bound_by_id(bid)
    assert bound.rule == "R7"
    assert bound.certificate["subgroup"] == "G"
    lo, hi = interval(fb, "TC", "fix:H1")
    assert lo == 3


def test_free_antipodal_hexagon_cat_g_closed_by_quotient():
    fb = analyze_problem(EXAMPLES["ngon-antipodal"])
    assert interval(fb, "cat", "orbit") == (2, 2)
    assert interval(fb, "cat_G", "X", "G") == (2, 2)
    upper = fb.best[("", Quantity("cat_G", "X", "G"))]["upper"]
    assert fb.bound_by_id(upper.bound_id).rule == "R6"
    lo, hi = interval(fb, "TC_G", "X", "G")
    assert lo == 2 and isinf(hi)


def test_torus_closes_cat_and_bounds_tc():
    fb = analyze_problem(EXAMPLES["torus7"])
    assert interval(fb, "cat", "X") == (3, 3)
    lo, hi = interval(fb, "TC", "X")
    assert lo == 3 and hi == 5
    bid = fb.best[("", Quantity("TC", "X", None))]["lower"].bound_id
    assert fb.bound_by_id(bid).certificate["length"] == 2


def test_klein_bound_via_associated_space():
    fb = analyze_problem(EXAMPLES["klein-bound"])
    lo, hi = interval(fb, "TC", "assoc")
    assert hi == 6
    bid = fb.best[("", Quantity("TC", "assoc", None))]["upper"].bound_id
    bound = fb.bound_by_id(bid)
    assert bound.rule == "R18"
    assert bound.certificate == {"fiber_upper": 3, "base_upper": 2}
    assert interval(fb, "TC_G", "X", "G", ctx="fiber") == (3, 3)
    assert interval(fb, "TC", "X", ctx="base") == (2, 2)


def test_rotation_ngon_reports_caveat_for_empty_fixed_sets():
    fb = analyze_problem(EXAMPLES["ngon-rotation-6"])
    ctx = fb.contexts[""]
    assert ctx.g_connected
    assert ctx.empty_fixed_classes
    assert not ctx.fixed_vertex
    lo, hi = interval(fb, "TC_G", "X", "G")
    assert lo == 2 and isinf(hi)
    # free action: the quotient circle pins cat_G
    assert interval(fb, "cat_G", "X", "G") == (2, 2)


def test_inconsistent_assertion_is_reported_with_both_provenances():
    bad = replace(
        EXAMPLES["sphere-reflection-n2"],
        asserted_facts=(AssertedFact("cat", "X", "equal", 1, "wrong on purpose"),),
    )
    fb = analyze_problem(bad)
    assert fb.inconsistencies
    ctx, q, lo_id, hi_id = fb.inconsistencies[0]
    assert (q.kind, q.space) == ("cat", "X")
    assert fb.bound_by_id(lo_id).rule == "R2"
    assert fb.bound_by_id(hi_id).rule == "ASSERT"
    text = text_report(fb)
    assert "INCONSISTENT" in text


def test_asserted_side_lower_only():
    p = replace(
        EXAMPLES["torus7"],
        asserted_facts=(AssertedFact("TC", "X", "lower", 4, "external computation"),),
    )
    fb = analyze_problem(p)
    assert interval(fb, "TC", "X") == (4, 5)


def test_assert_on_trivial_group_equivariant_quantity_rejected():
    p = replace(
        EXAMPLES["torus7"],
        asserted_facts=(AssertedFact("cat_G", "X", "equal", 2, "no group here"),),
    )
    with pytest.raises(ProblemFormatError):
        analyze_problem(p)


def test_rule_catalogue_equality_r16():
    hexagon = EXAMPLES["ngon-rotation-6"]
    p = replace(
        hexagon,
        annotations=("topological_group_homomorphism_action",),
        name="hexagon-homo",
    )
    fb = analyze_problem(p)
    # the equality ties TC_G to cat_G; cat_G has no upper bound here
    # (no free_action annotation), so only the lower bounds merge
    lo_tc, _ = interval(fb, "TC_G", "X", "G")
    lo_cat, _ = interval(fb, "cat_G", "X", "G")
    assert lo_tc == lo_cat == 2


def test_rule_catalogue_equality_r17():
    hexagon = EXAMPLES["ngon-rotation-6"]
    p = replace(
        hexagon,
        annotations=("left_translation_action", "metrizable"),
        name="hexagon-translation",
    )
    fb = analyze_problem(p)
    assert interval(fb, "TC_G", "X", "G") == (2, 2)
    upper = fb.best[("", Quantity("TC_G", "X", "G"))]["upper"]
    assert fb.bound_by_id(upper.bound_id).rule == "R17"


def test_r12_upper_from_asserted_cat_g():
    fb = analyze_problem(EXAMPLES["sphere-reflection-n2"])
    upper = fb.best[("", Quantity("TC_G", "X", "G"))]["upper"]
    assert fb.bound_by_id(upper.bound_id).rule == "R12"
    assert fb.bound_by_id(upper.bound_id).value == 3


def test_saturation_confluent_under_rule_orders():
    for name in ("sphere-reflection-n2", "ngon-antipodal", "klein-bound", "torus7"):
        base = seed_facts(EXAMPLES[name])
        reference = None
        for s in range(6):
            fb = saturate(base.clone(), shuffled_rule_order(s))
            snapshot = {(c, q): fb.interval(c, q) for c, q in fb.quantities}
            if reference is None:
                reference = snapshot
            assert snapshot == reference


def test_monotone_adding_facts_never_widens():
    bare = replace(EXAMPLES["sphere-reflection-n2"], asserted_facts=())
    fb_bare = analyze_problem(bare)
    fb_full = analyze_problem(EXAMPLES["sphere-reflection-n2"])
    for key in fb_bare.best:
        lo0, hi0 = fb_bare.interval(*key)
        lo1, hi1 = fb_full.interval(*key)
        assert lo1 >= lo0
        assert hi1 <= hi0


def test_g_connectivity_rules_record_their_hypotheses():
    for name in ("sphere-reflection-n2", "ngon-rotation-6"):
        fb = analyze_problem(EXAMPLES[name])
        for b in fb.bounds:
            if b.rule in ("R10", "R11", "R12", "R13", "R14", "R16"):
                assert any("G-connected" in h for h in b.hypotheses), b
            if b.rule == "ASSERT":
                assert "user-asserted" in b.hypotheses
        ctx = fb.contexts[""]
        if ctx.empty_fixed_classes:
            consuming = [b for b in fb.bounds if b.rule in ("R11", "R12")]
            for b in consuming:
                assert b.caveats


def test_provenance_chains_are_acyclic_and_grounded():
    fb = analyze_problem(EXAMPLES["sphere-reflection-n2"])
    for b in fb.bounds:
        for pid in b.premises:
            assert pid < b.id  # ids increase, so chains are acyclic
        if not b.premises:
            assert b.rule in ("CONV", "DISC", "ASSERT", "R1", "R2", "R4", "R4b", "R9")


def test_replaying_premises_reproduces_values():
    fb = analyze_problem(EXAMPLES["sphere-reflection-n2"])
    for b in fb.bounds:
        if b.rule == "R12" and b.side == "upper":
            (pid,) = b.premises
            assert b.value == 2 * fb.bound_by_id(pid).value - 1
        if b.rule == "R5":
            (pid,) = b.premises
            assert b.value == 2 * fb.bound_by_id(pid).value - 1
        if b.rule == "R18":
            fa, ba = b.premises
            assert b.value == fb.bound_by_id(fa).value * fb.bound_by_id(ba).value


def test_structured_report_schema():
    fb = analyze_problem(EXAMPLES["sphere-reflection-n2"])
    doc = structured_report(fb)
    assert doc["schema_version"] == 1
    assert doc["problem"] == "sphere-reflection-n2"
    displays = {q["display"]: (q["lower"], q["upper"]) for q in doc["quantities"]}
    assert displays["TC_G(X)"] == ("3", "3")
    by_id = {b["id"]: b for b in doc["bounds"]}
    for q in doc["quantities"]:
        if q["lower_bound_id"] is not None:
            assert by_id[q["lower_bound_id"]]["side"] == "lower"
    json.dumps(doc)  # serializable


def test_text_report_content():
    fb = analyze_problem(EXAMPLES["sphere-reflection-n1"])
    text = report(fb, "text")
    assert "TC_G(X) = infinity" in text
    assert "2 path components" in text
    fb2 = analyze_problem(EXAMPLES["klein-bound"])
    text2 = report(fb2, "json")
    assert '"upper": "6"' in text2


def test_depth_cap_override_from_config():
    p = replace(EXAMPLES["torus7"], config={"depth_cap": 1})
    fb = analyze_problem(p)
    lo, _ = interval(fb, "TC", "X")
    assert lo == 2  # cap 1 only certifies a single zero-divisor factor


def test_field_sweep_restriction():
    p = replace(EXAMPLES["sphere-reflection-n2"], asserted_facts=(), config={"fields": ["F2"]})
    fb = analyze_problem(p)
    lo, _ = interval(fb, "TC", "X")
    assert lo == 2  # even spheres need characteristic != 2 for the length-2 product


def test_full_symmetry_group_on_sphere_is_not_g_connected():
    # rotations of order 3 fix exactly two poles of the 2-sphere, so the
    # full symmetric group action has infinite equivariant complexity
    from itertools import combinations

    p = Problem(
        name="tetra-s4",
        vertex_count=4,
        maximal_simplices=tuple(tuple(c) for c in combinations(range(4), 3)),
        group_generators=((1, 0, 2, 3), (1, 2, 3, 0)),
    )
    fb = analyze_problem(p)
    ctx = fb.contexts[""]
    assert ctx.regular.group.order == 24
    assert len(ctx.classes) == 11
    assert ctx.g_connected is False
    assert interval(fb, "TC_G", "X", "G") == (inf, inf)
    assert not fb.inconsistencies


def test_disconnected_space_with_swap_action():
    # two disjoint circles exchanged by the action: X itself is a
    # disconnected fixed set (of the trivial subgroup), so everything blows up
    p = Problem(
        name="two-circles-swap",
        vertex_count=6,
        maximal_simplices=((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)),
        group_generators=((3, 4, 5, 0, 1, 2),),
    )
    fb = analyze_problem(p)
    assert interval(fb, "TC", "X") == (inf, inf)
    assert interval(fb, "TC_G", "X", "G") == (inf, inf)
    assert fb.contexts[""].g_connected is False
    # the quotient is a single circle and still gets honest bounds
    assert interval(fb, "cat", "orbit") == (2, 2)
    assert not fb.inconsistencies


def test_r12_reverse_propagation_bounds_cat_g_from_below():
    bare = replace(EXAMPLES["sphere-reflection-n2"], asserted_facts=())
    fb = analyze_problem(bare)
    lo, hi = interval(fb, "cat_G", "X", "G")
    assert lo == 2 and isinf(hi)  # TC_G >= 3 forces cat_G >= ceil(4/2) = 2
    bid = fb.best[("", Quantity("cat_G", "X", "G"))]["lower"].bound_id
    assert fb.bound_by_id(bid).rule == "R12"


def test_klein_four_reflections_on_circle_are_infinite():
    p = Problem(
        name="square-klein4",
        vertex_count=4,
        maximal_simplices=((0, 1), (1, 2), (2, 3), (0, 3)),
        group_generators=((1, 0, 3, 2), (3, 2, 1, 0)),
    )
    fb = analyze_problem(p)
    assert interval(fb, "TC_G", "X", "G") == (inf, inf)


def test_ring_size_limit_skips_cohomology_but_stays_sound():
    p = replace(EXAMPLES["sphere-reflection-n2"], config={"max_ring_simplices": 10})
    fb = analyze_problem(p)
    x = fb.contexts[""].spaces["X"]
    assert not x.analyzed and x.skip_reason
    lo, hi = interval(fb, "TC", "X")
    assert lo >= 1 and hi >= lo
