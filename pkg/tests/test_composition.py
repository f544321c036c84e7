import numpy as np
import pytest

from bishop.composition import (
    AnaphoricComposer,
    Argument,
    BridgeComposer,
    ChainComposer,
    ColourComposer,
    ComposeContext,
    Concept,
    Epoch,
    GroupingComposer,
    GroupSplitComposer,
    IdentityComposer,
    Mode,
    OrderingComposer,
    OrderingParams,
    RefKind,
    SelectComposer,
    SpatialComposer,
    referents_group,
    referents_single,
    split_group,
)
from bishop.errors import AnaphoraUnavailableError, ComposeError
from bishop.lexicon import fit_colour_model
from bishop.scene import GREEN, PURPLE, generate_scene, remove_object
from bishop.vision import VisionContext

from conftest import make_state


def ctx_for(state):
    return ComposeContext.from_state(state)


def single(weights, **kw):
    return Concept(weights=weights, ref_kind=RefKind.SINGLE, **kw)


# -- referent extraction -------------------------------------------------------

def test_referents_single_argmax_and_ties():
    assert referents_single(single({3: 0.9, 5: 0.1})) == 3
    assert referents_single(single({3: 0.5, 5: 0.5})) == 3
    scaled = single({3: 5.0, 5: 1.0})
    assert referents_single(scaled) == referents_single(single({3: 0.5, 5: 0.1}))


def test_referents_group_threshold_arithmetic():
    assert referents_group(single({1: 1.0, 2: 1.0, 3: 1.0})) == {1, 2, 3}
    assert referents_group(single({1: 1.0, 2: 0.9, 3: 0.1}), 0.5) == {1, 2}
    c = single({1: 0.7, 2: 0.4, 3: 0.2})
    assert referents_single(c) in referents_group(c)


def test_split_group_expands_best_composite():
    c = Concept(weights={100: 0.9, 1: 0.9, 2: 0.9, 101: 0.4, 3: 0.4, 4: 0.4},
                ref_kind=RefKind.GROUP, split_groups=True,
                composites={100: (1, 2), 101: (3, 4)})
    out = split_group(c)
    assert dict(out.weights) == {1: 1.0, 2: 1.0}
    assert out.ref_kind is RefKind.SINGLE
    assert not out.split_groups


def test_split_group_passes_through_without_composites():
    c = single({1: 0.2, 2: 0.8}, split_groups=True)
    assert split_group(c) == c


# -- colour ---------------------------------------------------------------------

def test_colour_weight_is_density_peak_at_mean():
    model = fit_colour_model("toy", [[10, 10, 10], [12, 10, 10],
                                     [10, 12, 10], [10, 10, 12], [8, 8, 8]])
    state = make_state([(0, 0.5, 0.5, GREEN), (1, 0.2, 0.2, PURPLE)])
    ctx = ctx_for(state)

    class PinnedModel:
        def pdf(self, rgb):
            return model.pdf(model.mean)

    composer = ColourComposer(PinnedModel(), arity=1)
    out = composer.apply([Argument(single({0: 1.0}))], ctx)[0]
    assert out.weights[0] == pytest.approx(model.peak_density())
    det = float(np.linalg.det(model.cov))
    assert model.peak_density() == pytest.approx(((2 * np.pi) ** 3 * det) ** -0.5)


def test_colour_separates_ground_truth_classes(lexicon):
    state = make_state([
        (0, 0.15, 0.3, PURPLE), (1, 0.5, 0.55, PURPLE), (2, 0.85, 0.8, PURPLE),
        (3, 0.3, 0.75, GREEN), (4, 0.7, 0.25, GREEN),
    ])
    ctx = ctx_for(state)
    composer = ColourComposer(lexicon.colour_models["purple"], arity=0,
                              ref=RefKind.SINGLE)
    out = composer.apply([], ctx)[0]
    ranked = sorted(out.weights, key=lambda i: -out.weights[i])
    assert set(ranked[:3]) == {0, 1, 2}
    assert set(ranked[3:]) == {3, 4}


def test_colour_ranking_is_idempotent(lexicon):
    # re-applying the composer narrows to the referenced objects but never
    # reorders them
    composer = ColourComposer(lexicon.colour_models["green"], arity=1)
    for seed in range(100):
        state = generate_scene(seed, 8)
        ctx = ctx_for(state)
        once = composer.apply([Argument(ctx.default_concept(RefKind.SINGLE))],
                              ctx)[0]
        twice = composer.apply([Argument(once)], ctx)[0]
        rank = lambda c: sorted(c.weights, key=lambda i: (-c.weights[i], i))
        assert rank(twice) == rank(once)[:len(rank(twice))], f"seed {seed}"


# -- ordering --------------------------------------------------------------------

def test_ordering_extreme_candidate_weight_is_one():
    state = make_state([(0, 0.1, 0.5, GREEN), (1, 0.6, 0.5, GREEN)])
    out = OrderingComposer(OrderingParams(mode=Mode.MIN, axis="x"),
                           arity=1).apply(
        [Argument(single({0: 1.0, 1: 1.0}))], ctx_for(state))[0]
    assert out.weights[0] == pytest.approx(1.0)


def test_region_weights_at_zero_and_max_distance():
    # object 0 sits exactly at the board centre, object 1 far away
    state = make_state([(0, 0.5, 0.5, GREEN), (1, 0.9, 0.9, GREEN)])
    out = OrderingComposer(
        OrderingParams(mode=Mode.REGION, axis="point", region_point="centre"),
        arity=1).apply([Argument(single({0: 1.0, 1: 1.0}))], ctx_for(state))[0]
    assert out.weights[0] == pytest.approx(0.38, abs=2e-3)
    assert out.weights[1] == pytest.approx(0.38 ** 2, abs=2e-3)


def test_region_single_candidate_weight_is_gamma():
    state = make_state([(0, 0.2, 0.8, GREEN)])
    out = OrderingComposer(
        OrderingParams(mode=Mode.REGION, axis="point", region_point="centre"),
        arity=1).apply([Argument(single({0: 1.0}))], ctx_for(state))[0]
    assert out.weights[0] == pytest.approx(0.38)


def test_ordering_weights_strictly_decrease_in_rank():
    xs = [0.1, 0.3, 0.5, 0.7, 0.9]
    state = make_state([(i, x, 0.5, GREEN) for i, x in enumerate(xs)])
    arg = Argument(single({i: 1.0 for i in range(5)}))
    out = OrderingComposer(OrderingParams(mode=Mode.MIN, axis="x"),
                           arity=1).apply([arg], ctx_for(state))[0]
    ws = [out.weights[i] for i in range(5)]
    assert all(a > b for a, b in zip(ws, ws[1:]))
    assert referents_single(out) == 0

    out_max = OrderingComposer(OrderingParams(mode=Mode.MAX, axis="x"),
                               arity=1).apply([arg], ctx_for(state))[0]
    ws_max = [out_max.weights[i] for i in range(5)]
    assert all(a < b for a, b in zip(ws_max, ws_max[1:]))
    assert referents_single(out_max) == 4


def test_ordering_argmax_matches_sort_oracle():
    min_x = OrderingComposer(OrderingParams(mode=Mode.MIN, axis="x"), arity=1)
    max_y = OrderingComposer(OrderingParams(mode=Mode.MAX, axis="y"), arity=1)
    for seed in range(200):
        state = generate_scene(seed, 10)
        ctx = ctx_for(state)
        arg = Argument(ctx.default_concept(RefKind.SINGLE))
        vision = ctx.current
        ids = vision.object_ids()
        leftmost = min(ids, key=lambda i: (vision.centroid(i)[0], i))
        frontmost = max(ids, key=lambda i: (vision.centroid(i)[1], -i))
        assert referents_single(min_x.apply([arg], ctx)[0]) == leftmost
        assert referents_single(max_y.apply([arg], ctx)[0]) == frontmost


def test_ordering_requires_referents():
    state = make_state([(0, 0.5, 0.5, GREEN)])
    with pytest.raises(ComposeError):
        OrderingComposer(OrderingParams(mode=Mode.MIN, axis="x"),
                         arity=1).apply([Argument(Concept())], ctx_for(state))


# -- grouping --------------------------------------------------------------------

def test_grouping_isolated_pair():
    state = make_state([
        (0, 0.2, 0.2, GREEN), (1, 0.21, 0.21, GREEN),
        (2, 0.8, 0.8, PURPLE), (3, 0.8, 0.2, PURPLE), (4, 0.2, 0.8, GREEN),
    ])
    ctx = ctx_for(state)
    out = GroupingComposer(count=2, arity=1).apply(
        [Argument(ctx.default_concept(RefKind.GROUP))], ctx)[0]
    assert out.ref_kind is RefKind.GROUP
    assert len(out.composites) == 1
    comp_id, members = next(iter(out.composites.items()))
    assert members == (0, 1)
    hull_px = {tuple(p) for p in ctx.current.pixels(comp_id).astype(int)}
    for oid in (0, 1):
        assert {tuple(p) for p in ctx.current.pixels(oid).astype(int)} <= hull_px


def test_grouping_exact_size_rule():
    # the only cluster has four members; a subset of three is not a component
    state = make_state([
        (0, 0.50, 0.50, GREEN), (1, 0.56, 0.50, GREEN),
        (2, 0.50, 0.56, GREEN), (3, 0.56, 0.56, GREEN),
        (4, 0.05, 0.05, PURPLE),
    ])
    ctx = ctx_for(state)
    arg = Argument(ctx.default_concept(RefKind.GROUP))
    with pytest.raises(ComposeError):
        GroupingComposer(count=3, arity=1).apply([arg], ctx)
    out = GroupingComposer(count=4, arity=1).apply([arg], ctx)[0]
    assert next(iter(out.composites.values())) == (0, 1, 2, 3)


def test_tighter_group_outweighs_looser():
    state = make_state([
        (0, 0.20, 0.20, GREEN), (1, 0.25, 0.20, GREEN),
        (2, 0.70, 0.70, GREEN), (3, 0.81, 0.70, GREEN),
    ])
    ctx = ctx_for(state)
    out = GroupingComposer(count=2, arity=1).apply(
        [Argument(ctx.default_concept(RefKind.GROUP))], ctx)[0]
    tight = next(c for c, m in out.composites.items() if m == (0, 1))
    loose = next(c for c, m in out.composites.items() if m == (2, 3))
    assert out.weights[tight] > out.weights[loose]


# -- spatial ----------------------------------------------------------------------

def test_spatial_weight_is_inverse_distance_when_aligned():
    state = make_state([(0, 0.8, 0.5, PURPLE), (1, 0.4, 0.5, GREEN)])
    ctx = ctx_for(state)
    out = SpatialComposer("left", arity=2).apply(
        [Argument(single({1: 1.0})), Argument(single({0: 1.0}))], ctx)[0]
    dist = ctx.current.board_distance(1, 0)
    assert out.weights[1] == pytest.approx(1.0 / dist, rel=1e-3)


def test_spatial_drops_misaligned_targets():
    # target 1 is left of the landmark, target 2 is at 90 degrees (in front)
    state = make_state([(0, 0.6, 0.4, PURPLE), (1, 0.3, 0.4, GREEN),
                        (2, 0.6, 0.8, GREEN)])
    ctx = ctx_for(state)
    out = SpatialComposer("left", arity=2).apply(
        [Argument(single({1: 1.0, 2: 1.0})), Argument(single({0: 1.0}))], ctx)[0]
    assert 1 in out.weights and 2 not in out.weights


def test_spatial_uses_composite_landmark_only():
    state = make_state([
        (0, 0.70, 0.44, PURPLE), (1, 0.70, 0.56, PURPLE),
        (2, 0.40, 0.50, GREEN),
    ])
    ctx = ctx_for(state)
    grouped = GroupingComposer(arity=1).apply(
        [Argument(Concept(weights={0: 1.0, 1: 1.0}, ref_kind=RefKind.GROUP))],
        ctx)[0]
    out = SpatialComposer("left", arity=2).apply(
        [Argument(ctx.default_concept(RefKind.SINGLE)), Argument(grouped)],
        ctx)[0]
    # members of the hull are excluded as targets
    assert set(out.weights) == {2}


def test_spatial_two_landmarks_take_max():
    state = make_state([
        (0, 0.80, 0.30, PURPLE), (1, 0.80, 0.70, PURPLE), (2, 0.40, 0.70, GREEN),
    ])
    ctx = ctx_for(state)
    out = SpatialComposer("left", arity=2).apply(
        [Argument(single({2: 1.0})), Argument(single({0: 1.0, 1: 1.0}))],
        ctx)[0]
    expected = max(ctx.current.spatial_score(2, 0, "left"),
                   ctx.current.spatial_score(2, 1, "left"))
    assert out.weights[2] == pytest.approx(expected)


def test_spatial_fails_when_target_set_empties():
    state = make_state([(0, 0.5, 0.5, GREEN)])
    ctx = ctx_for(state)
    with pytest.raises(ComposeError):
        SpatialComposer("left", arity=2).apply(
            [Argument(single({0: 1.0})), Argument(single({0: 1.0}))], ctx)


# -- anaphora ---------------------------------------------------------------------

def test_anaphora_refers_to_last_removed():
    state = remove_object(generate_scene(13, 6), 2)
    out = AnaphoricComposer(arity=0).apply([], ctx_for(state))[0]
    assert dict(out.weights) == {2: 1.0}
    assert out.epoch is Epoch.PREVIOUS
    assert out.ref_kind is RefKind.SINGLE and out.determinate


def test_anaphora_without_history_fails():
    state = generate_scene(13, 6)
    with pytest.raises(AnaphoraUnavailableError):
        AnaphoricComposer(arity=0).apply([], ctx_for(state))


def test_spatial_with_previous_epoch_landmark_measures_old_raster():
    # removed cone 0 sits at front-centre; cone 1 is directly behind it
    state = make_state([
        (0, 0.50, 0.70, GREEN), (1, 0.50, 0.40, PURPLE), (2, 0.10, 0.75, GREEN),
    ])
    after = remove_object(state, 0)
    ctx = ctx_for(after)
    anaphor = AnaphoricComposer(arity=0).apply([], ctx)[0]
    target = Concept(weights={1: 1.0, 2: 1.0}, ref_kind=RefKind.SINGLE)
    out = SpatialComposer("behind", arity=2).apply(
        [Argument(target), Argument(anaphor)], ctx)[0]
    assert referents_single(out) == 1
    assert out.epoch is Epoch.PREVIOUS


# -- select, bridge, chain ----------------------------------------------------------

def test_select_sets_determinacy_and_preserves_weights():
    state = make_state([(0, 0.5, 0.5, GREEN)])
    src = single({0: 0.25})
    out = SelectComposer(arity=1).apply([Argument(src)], ctx_for(state))[0]
    assert out.determinate and dict(out.weights) == {0: 0.25}
    again = SelectComposer(arity=1).apply([Argument(out)], ctx_for(state))[0]
    assert again == out


def test_bridge_applies_modifier_to_head():
    state = make_state([(0, 0.2, 0.5, GREEN), (1, 0.7, 0.5, GREEN)])
    ctx = ctx_for(state)
    head = Argument(ctx.default_concept(RefKind.SINGLE), IdentityComposer(arity=0))
    modifier = Argument(single({0: 1.0, 1: 1.0}),
                        OrderingComposer(OrderingParams(mode=Mode.MIN, axis="x"),
                                         arity=0))
    out = BridgeComposer(arity=2).apply([head, modifier], ctx)[0]
    assert referents_single(out) == 0


def test_bridge_fails_without_applicable_modifier():
    state = make_state([(0, 0.5, 0.5, GREEN)])
    ctx = ctx_for(state)
    with pytest.raises(ComposeError):
        BridgeComposer(arity=2).apply(
            [Argument(ctx.default_concept(RefKind.SINGLE)),
             Argument(Concept(), None)], ctx)


def test_group_split_bridge_splits_then_applies():
    state = make_state([
        (0, 0.30, 0.30, GREEN), (1, 0.36, 0.40, GREEN), (2, 0.24, 0.40, GREEN),
        (3, 0.85, 0.85, GREEN),
    ])
    ctx = ctx_for(state)
    grouped = GroupingComposer(count=3, arity=1).apply(
        [Argument(Concept(weights={0: 1, 1: 1, 2: 1, 3: 1},
                          ref_kind=RefKind.GROUP))], ctx)[0]
    frontmost = OrderingComposer(OrderingParams(mode=Mode.MAX, axis="y"), arity=1)
    out = GroupSplitComposer(arity=2).apply(
        [Argument(single({3: 1.0}), frontmost), Argument(grouped)], ctx)[0]
    # the front member of the triple wins; the faraway cone is not considered
    assert referents_single(out) in (1, 2)
    assert referents_single(out) == 1
    assert 3 not in out.weights


def test_chain_flushes_in_reverse_accumulation_order():
    state = make_state([
        (0, 0.10, 0.90, GREEN),   # frontmost overall
        (1, 0.05, 0.20, GREEN),   # leftmost overall, far back
        (2, 0.90, 0.85, GREEN),
    ])
    ctx = ctx_for(state)
    front = OrderingComposer(OrderingParams(mode=Mode.MAX, axis="y"), arity=1)
    left = OrderingComposer(OrderingParams(mode=Mode.MIN, axis="x"), arity=1)
    # queue [left, front] applied to c is left(front(c)): front runs first
    chain = ChainComposer((left, front))
    out = chain.apply([Argument(ctx.default_concept(RefKind.SINGLE))], ctx)[0]
    assert referents_single(out) == 0

    reverse = ChainComposer((front, left))
    out2 = reverse.apply([Argument(ctx.default_concept(RefKind.SINGLE))], ctx)[0]
    assert referents_single(out2) == 1


def test_chain_identity_when_empty():
    state = make_state([(0, 0.5, 0.5, GREEN)])
    ctx = ctx_for(state)
    src = ctx.default_concept(RefKind.SINGLE)
    out = ChainComposer(()).apply([Argument(src)], ctx)
    assert out == [src]


def test_weight_positivity_across_composers(lexicon):
    state = generate_scene(31, 12)
    ctx = ctx_for(state)
    arg = Argument(ctx.default_concept(RefKind.SINGLE))
    outputs = [
        ColourComposer(lexicon.colour_models["green"], arity=1).apply([arg], ctx),
        OrderingComposer(OrderingParams(mode=Mode.MIN, axis="x"),
                         arity=1).apply([arg], ctx),
        GroupingComposer(arity=1).apply(
            [Argument(ctx.default_concept(RefKind.GROUP))], ctx),
    ]
    for concepts in outputs:
        for c in concepts:
            assert all(w > 0 for w in c.weights.values())


def test_referent_sets_shrink_through_filtering_composers(lexicon):
    # colour and ordering outputs only ever narrow their input's referents
    colour = ColourComposer(lexicon.colour_models["green"], arity=1)
    ordering = OrderingComposer(OrderingParams(mode=Mode.MIN, axis="x"),
                                arity=1)
    for seed in range(50):
        state = generate_scene(seed, 9)
        ctx = ctx_for(state)
        src = ctx.default_concept(RefKind.SINGLE)
        for composer in (colour, ordering):
            out = composer.apply([Argument(src)], ctx)[0]
            assert set(out.weights) <= set(src.weights), f"seed {seed}"
