"""Apply each composer family by hand and watch the concepts evolve."""

from bishop import default_lexicon, referents_group, referents_single
from bishop.composition import (
    Argument,
    ComposeContext,
    Mode,
    OrderingComposer,
    OrderingParams,
    RefKind,
)
from bishop.scene import Scene, SceneObject, state_from_scene

lexicon = default_lexicon()

scene = Scene(seed=0, width=512, height=512, objects=(
    SceneObject(0, 0.10, 0.30, "purple"),
    SceneObject(1, 0.18, 0.36, "purple"),
    SceneObject(2, 0.55, 0.70, "green"),
    SceneObject(3, 0.85, 0.25, "green"),
    SceneObject(4, 0.50, 0.20, "purple"),
))
state = state_from_scene(scene)
ctx = ComposeContext.from_state(state)


def show(label, concept):
    ws = ", ".join(f"{i}:{w:.3g}" for i, w in sorted(concept.weights.items()))
    print(f"{label:<28} kind={concept.ref_kind.value:<6} {{{ws}}}")


everything = ctx.default_concept(RefKind.SINGLE)
show("all objects", everything)

print("\n-- colour ------------------------------------------------")
purple = next(e for e in lexicon.lookup("purple") if e.category == "CADJ")
purple_concept = purple.composer.apply([Argument(everything)], ctx)[0]
show('"purple" over everything', purple_concept)
print(f"best: {referents_single(purple_concept)}  "
      f"group: {sorted(referents_group(purple_concept))}")

print("\n-- ordering ------------------------------------------------")
leftmost = OrderingComposer(OrderingParams(mode=Mode.MIN, axis="x"), arity=1)
show("leftmost(purple)", leftmost.apply([Argument(purple_concept)], ctx)[0])
region = next(e for e in lexicon.lookup("middle") if e.category == "N")
show("middle(everything)", region.composer.apply([Argument(everything)], ctx)[0])

print("\n-- grouping + split -----------------------------------------")
pair = next(e for e in lexicon.lookup("pair") if e.category == "N")
grouped = pair.composer.apply([Argument(everything)], ctx)[0]
show("pair(everything)", grouped)
from bishop.composition import split_group
from dataclasses import replace
members = split_group(replace(grouped, split_groups=True))
show("split to members", members)

print("\n-- spatial ------------------------------------------------")
behind = next(e for e in lexicon.lookup("behind") if e.category == "P")
result = behind.composer.apply(
    [Argument(everything), Argument(purple_concept)], ctx)[0]
show("behind(all, purple)", result)
print(f"best target: {referents_single(result)}")
