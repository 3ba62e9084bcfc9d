from __future__ import annotations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from multiway.algebra import (
    SEMIRING_IDENTITIES,
    check_rule_independence,
    layered_isomorphic,
    one_system,
    product_systems,
    reduce_to_binary,
    second_layer,
    seed_symbol,
    sum_systems,
    verify_semiring_identity,
    zero_system,
)
from multiway.core import Rule, evolve, make_system, render_glyphs

# Fixed operands reused across tests: a shuffler whose B drifts while
# spawning As, a growing two-letter system, and a short branching cascade.
SYS_AB = make_system([("AB", "BA"), ("B", "AAB")], "AB")
SYS_CD = make_system([("CD", "CDD"), ("C", "CD")], "CDC")
SYS_BRANCH = make_system([("P", "Q"), ("Q", "R"), ("Q", "S")], "P")
SHUTTLE = make_system([("A", "AB"), ("AB", "BA")], "A")


def layer_counts(graph):
    return [len(layer) for layer in graph.layers]


def pointwise_sum(a: list[int], b: list[int]) -> list[int]:
    return [1] + [x + y for x, y in zip(a[1:], b[1:])]


def convolved(a: list[int], b: list[int]) -> list[int]:
    n = min(len(a), len(b))
    return [sum(a[k] * b[d - k] for k in range(d + 1)) for d in range(n)]


# ---------------------------------------------------------------------------
# second_layer / sum / product


def test_second_layer_of_doubling_system():
    assert second_layer(make_system([("A", "AB")], "AA")) == {"ABA", "AAB"}


def test_second_layer_of_ruleless_system():
    assert second_layer(one_system()) == set()


def test_sum_adds_counts_from_distance_one():
    grower = make_system([("A", "AB")], "AA")
    constant = make_system([("C", "CC")], "C")
    combo = sum_systems(grower, constant)
    assert combo.kind == "sum"
    assert combo.growth_law == "exact"
    assert combo.fresh_symbol == "[@seed]"
    assert combo.system.init == seed_symbol()
    got = layer_counts(evolve(combo.system, 7))
    assert got == [1, 3, 4, 5, 6, 7, 8, 9]


def test_sum_matches_pointwise_oracle():
    h = 6
    a = layer_counts(evolve(SYS_AB, h))
    b = layer_counts(evolve(SYS_CD, h))
    combo = sum_systems(SYS_AB, SYS_CD)
    assert combo.independence.status == "independent"
    assert layer_counts(evolve(combo.system, h)) == pointwise_sum(a, b)


def test_sum_seed_rules_target_both_second_layers():
    combo = sum_systems(SYS_AB, SYS_CD)
    seed = seed_symbol()
    targets = {rhs for lhs, rhs in combo.system.rules if lhs == seed}
    assert targets == second_layer(SYS_AB) | second_layer(SYS_CD)


def test_product_counts_are_convolutions():
    ones_a = make_system([("A", "AB")], "A")
    ones_b = make_system([("C", "CD")], "C")
    combo = product_systems(ones_a, ones_b)
    assert combo.kind == "product"
    assert combo.system.init == "AC"
    assert layer_counts(evolve(combo.system, 8)) == list(range(1, 10))

    h = 6
    a = layer_counts(evolve(SYS_AB, h))
    b = layer_counts(evolve(SYS_BRANCH, h))
    prod = product_systems(SYS_AB, SYS_BRANCH)
    assert layer_counts(evolve(prod.system, h)) == convolved(a, b)


def test_product_graph_is_box_product():
    h = 4
    ga, gb = evolve(SHUTTLE, h), evolve(SYS_BRANCH, h)
    da, db = ga.state_distances(), gb.state_distances()
    # the expected-edge construction below assumes no back/cross edges
    assert all(da[e.dst] == da[e.src] + 1 for e in ga.edges)
    assert all(db[e.dst] == db[e.src] + 1 for e in gb.edges)

    gp = evolve(product_systems(SHUTTLE, SYS_BRANCH).system, h)
    for d in range(h + 1):
        expected = {
            sa + sb
            for i in range(d + 1)
            for sa in ga.layer_strings(i)
            for sb in gb.layer_strings(d - i)
        }
        assert set(gp.layer_strings(d)) == expected

    lifted: set[tuple[str, str]] = set()
    for e in ga.edges:
        for w, dw in zip(gb.states, db):
            if da[e.src] + dw < h:
                lifted.add((ga.states[e.src] + w, ga.states[e.dst] + w))
    for e in gb.edges:
        for u, du in zip(ga.states, da):
            if du + db[e.src] < h:
                lifted.add((u + gb.states[e.src], u + gb.states[e.dst]))
    got = {(gp.states[e.src], gp.states[e.dst]) for e in gp.edges}
    assert got == lifted


def test_sum_of_dependent_operands_is_a_lower_bound():
    m1 = make_system([("A", "B")], "A")
    m2 = make_system([("B", "A")], "B")
    combo = sum_systems(m1, m2)
    assert combo.growth_law == "lower_bound"
    assert combo.independence.status == "dependent"
    h = 4
    formula = pointwise_sum(
        layer_counts(evolve(m1, h)), layer_counts(evolve(m2, h))
    )
    got = layer_counts(evolve(combo.system, h))
    assert all(g >= f for g, f in zip(got, formula))


def test_sum_of_sums_composes():
    inner = sum_systems(SYS_AB, SYS_CD)
    outer = sum_systems(inner.system, SYS_BRANCH)
    h = 5
    a = layer_counts(evolve(SYS_AB, h))
    b = layer_counts(evolve(SYS_CD, h))
    c = layer_counts(evolve(SYS_BRANCH, h))
    got = layer_counts(evolve(outer.system, h))
    assert got == [1] + [x + y + z for x, y, z in zip(a[1:], b[1:], c[1:])]


def test_reserved_symbol_rejected_outside_sum_shape():
    impostor = make_system([("[@seed]", "A")], "[@seed]A")
    with pytest.raises(ValueError, match="sum shape"):
        sum_systems(impostor, SYS_CD)
    other = make_system([("[@mine]", "B")], "[@mine]")
    with pytest.raises(ValueError, match="reserved"):
        product_systems(SYS_AB, other)


# ---------------------------------------------------------------------------
# Rule independence


def test_disjoint_alphabets_are_independent_without_simulation():
    verdict = check_rule_independence(SYS_AB, SYS_CD)
    assert verdict.status == "independent"
    assert verdict.witness_layer is None
    assert verdict.independent


def test_swap_pair_is_dependent_with_witness():
    m1 = make_system([("A", "B")], "A")
    m2 = make_system([("B", "A")], "B")
    verdict = check_rule_independence(m1, m2, horizon=4)
    assert verdict.status == "dependent"
    assert not verdict.independent
    # the merged graph grows a back edge B -> A visible from depth 1 on
    assert verdict.witness_layer == 1


def test_shared_alphabet_can_still_be_independent():
    m1 = make_system([("A", "AB")], "A")
    m2 = make_system([("BA", "B")], "B")
    verdict = check_rule_independence(m1, m2, horizon=5)
    assert verdict.status == "independent_up_to_horizon"
    assert verdict.independent


def test_system_is_independent_of_itself():
    verdict = check_rule_independence(SHUTTLE, SHUTTLE)
    assert verdict.status == "independent_up_to_horizon"


def test_independence_horizon_must_be_at_least_two():
    with pytest.raises(ValueError):
        check_rule_independence(SYS_AB, SHUTTLE, horizon=1)


# ---------------------------------------------------------------------------
# Layered graph isomorphism


def test_relabelled_systems_are_isomorphic():
    g1 = evolve(make_system([("A", "AB")], "A"), 4)
    g2 = evolve(make_system([("C", "CD")], "C"), 4)
    assert layered_isomorphic(g1, g2) == (True, None)


def test_extra_back_edge_breaks_isomorphism():
    g1 = evolve(make_system([("A", "B")], "A"), 3)
    g2 = evolve(make_system([("A", "B"), ("B", "A")], "A"), 3)
    ok, _ = layered_isomorphic(g1, g2)
    assert not ok


def test_isomorphism_requires_matching_horizons():
    g = evolve(SHUTTLE, 3)
    with pytest.raises(ValueError):
        layered_isomorphic(g, evolve(SHUTTLE, 4))


def test_empty_tail_graphs_are_isomorphic():
    g = evolve(one_system(), 3)
    assert layered_isomorphic(g, evolve(one_system(), 3)) == (True, None)


# ---------------------------------------------------------------------------
# Binary reduction


def test_reduce_to_binary_worked_example():
    combo = reduce_to_binary(make_system([("A", "AB")], "AA"))
    assert combo.kind == "reduced"
    assert combo.system.rules == (Rule("aba", "abaabba"),)
    assert combo.system.init == "abaaba"
    assert combo.system.alphabet.glyphs == ("a", "b")
    assert combo.translation == {"A": "aba", "B": "abba"}


def _codeword_boundaries(state: str) -> set[int]:
    """Greedy decode of a concatenation of a·b^i·a codewords."""
    cuts = {0}
    i = 0
    while i < len(state):
        assert state[i] == "a", state
        j = i + 1
        while state[j] == "b":
            j += 1
        assert state[j] == "a", state
        i = j + 1
        cuts.add(i)
    return cuts


def _assert_reduction_faithful(m, horizon):
    combo = reduce_to_binary(m)
    translate = combo.translation
    g = evolve(m, horizon)
    gr = evolve(combo.system, horizon)
    for d in range(horizon + 1):
        expected = {
            "".join(translate[render_glyphs(c)] for c in s)
            for s in g.layer_strings(d)
        }
        assert set(gr.layer_strings(d)) == expected
    images = {
        (
            "".join(translate[render_glyphs(c)] for c in g.states[e.src]),
            "".join(translate[render_glyphs(c)] for c in g.states[e.dst]),
        )
        for e in g.edges
    }
    assert {(gr.states[e.src], gr.states[e.dst]) for e in gr.edges} == images
    # no translated pattern may ever match off the codeword grid
    for state in gr.states:
        cuts = _codeword_boundaries(state)
        for lhs, _ in combo.system.rules:
            p = state.find(lhs)
            while p != -1:
                assert p in cuts and p + len(lhs) in cuts
                p = state.find(lhs, p + 1)


def test_reduction_preserves_graph_and_respects_boundaries():
    _assert_reduction_faithful(SYS_AB, 5)
    _assert_reduction_faithful(SYS_BRANCH, 4)


def test_reduction_handles_bracketed_tokens():
    m = make_system([("[on]", "[on][off]")], "[on]")
    combo = reduce_to_binary(m)
    assert combo.translation == {"[on]": "aba", "[off]": "abba"}
    assert layer_counts(evolve(combo.system, 5)) == layer_counts(evolve(m, 5))


def test_reduction_of_empty_system():
    combo = reduce_to_binary(one_system())
    assert combo.system.init == ""
    assert combo.system.rules == ()
    assert combo.system.alphabet.glyphs == ("a", "b")


_sym = st.sampled_from("ABC")
_word = st.text(alphabet=_sym, min_size=0, max_size=3)
_lhs = st.text(alphabet=_sym, min_size=1, max_size=2)


@settings(max_examples=60, deadline=None)
@given(
    rules=st.lists(st.tuples(_lhs, _word), min_size=1, max_size=3),
    init=st.text(alphabet=_sym, min_size=1, max_size=3),
)
def test_reduction_faithful_on_random_systems(rules, init):
    m = make_system(rules, init)
    g = evolve(m, 4, max_states=2_000)
    assume(not g.truncated)
    _assert_reduction_faithful(m, 4)


# ---------------------------------------------------------------------------
# Sum/product laws on random independent pairs

_left_rules = st.lists(
    st.tuples(
        st.text(alphabet=st.sampled_from("AB"), min_size=1, max_size=2),
        st.text(alphabet=st.sampled_from("AB"), min_size=2, max_size=3),
    ),
    min_size=1,
    max_size=2,
)
_right_rules = st.lists(
    st.tuples(
        st.text(alphabet=st.sampled_from("XY"), min_size=1, max_size=2),
        st.text(alphabet=st.sampled_from("XY"), min_size=2, max_size=3),
    ),
    min_size=1,
    max_size=2,
)


@settings(max_examples=40, deadline=None)
@given(
    r1=_left_rules,
    i1=st.text(alphabet=st.sampled_from("AB"), min_size=1, max_size=2),
    r2=_right_rules,
    i2=st.text(alphabet=st.sampled_from("XY"), min_size=1, max_size=2),
)
def test_growth_laws_on_disjoint_pairs(r1, i1, r2, i2):
    # keep every right side strictly longer than its left side, so no state
    # is ever revisited and the combination laws are exact
    assume(all(len(rhs) > len(lhs) for lhs, rhs in r1 + r2))
    m1, m2 = make_system(r1, i1), make_system(r2, i2)
    h = 5
    g1 = evolve(m1, h, max_states=3_000)
    g2 = evolve(m2, h, max_states=3_000)
    assume(not (g1.truncated or g2.truncated))
    a, b = layer_counts(g1), layer_counts(g2)

    total = sum_systems(m1, m2)
    assert total.growth_law == "exact"
    assert layer_counts(evolve(total.system, h, max_states=20_000)) == pointwise_sum(a, b)

    prod = product_systems(m1, m2)
    gp = evolve(prod.system, h, max_states=60_000)
    assume(not gp.truncated)
    assert layer_counts(gp) == convolved(a, b)


# ---------------------------------------------------------------------------
# Semiring identities


def test_identity_catalogue_is_complete():
    assert set(SEMIRING_IDENTITIES) == {
        "sum-comm",
        "sum-assoc",
        "sum-neutral",
        "prod-comm",
        "prod-assoc",
        "prod-neutral",
        "distributivity",
        "annihilation",
    }


def test_sum_commutes_by_signature():
    report = verify_semiring_identity("sum-comm", SYS_AB, SYS_CD)
    assert report.holds and report.mode == "signature"


def test_sum_associates_by_signature():
    report = verify_semiring_identity("sum-assoc", SYS_AB, SYS_CD, SYS_BRANCH)
    assert report.holds and report.mode == "signature"


def test_sum_neutral_element_up_to_isomorphism():
    report = verify_semiring_identity("sum-neutral", SYS_AB)
    assert report.holds and report.mode == "isomorphism"


def test_product_commutes_up_to_isomorphism():
    report = verify_semiring_identity("prod-comm", SHUTTLE, SYS_BRANCH)
    assert report.holds and report.mode == "isomorphism"


def test_product_associates_by_signature():
    report = verify_semiring_identity("prod-assoc", SYS_AB, SYS_CD, SYS_BRANCH)
    assert report.holds and report.mode == "signature"


def test_product_neutral_element_by_signature():
    report = verify_semiring_identity("prod-neutral", SYS_AB)
    assert report.holds and report.mode == "signature"


def test_distributivity_fails_at_first_layer():
    report = verify_semiring_identity("distributivity", SYS_AB, SYS_CD, SYS_BRANCH)
    assert not report.holds
    assert report.mode == "isomorphism"
    assert report.counterexample_layer == 1


def test_annihilation_fails_at_first_layer():
    report = verify_semiring_identity("annihilation", SYS_AB)
    assert not report.holds
    assert report.counterexample_layer == 1


def test_identity_arity_is_checked():
    with pytest.raises(ValueError):
        verify_semiring_identity("sum-comm", SYS_AB)
    with pytest.raises(ValueError):
        verify_semiring_identity("no-such-identity", SYS_AB)


def test_neutral_constants():
    zero = zero_system()
    assert zero.init == seed_symbol() and zero.rules == ()
    one = one_system()
    assert one.init == "" and one.rules == () and len(one.alphabet) == 0
