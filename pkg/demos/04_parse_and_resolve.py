"""Resolve referring expressions end to end, with a chart dump and a
two-turn anaphora exchange."""

from bishop import default_lexicon, remove_object, resolve
from bishop.scene import Scene, SceneObject, state_from_scene

lexicon = default_lexicon()

scene = Scene(seed=0, width=512, height=512, objects=(
    SceneObject(0, 0.05, 0.50, "green"),
    SceneObject(1, 0.30, 0.45, "purple"),
    SceneObject(2, 0.60, 0.55, "purple"),
    SceneObject(3, 0.80, 0.50, "green"),
))
state = state_from_scene(scene)

print("scene: green(0) purple(1) purple(2) green(3), left to right")
print()

for utterance in (
    "the purple one on the left",
    "the rightmost cone",
    "the purple one gleep on the left",     # unknown word absorbed
    "the frontmost cone",
):
    r = resolve(utterance, state, lexicon)
    print(f"{utterance!r:<45} -> {r.chosen} ({r.consistency.value})")

print("\n== chart for the reference utterance =====================")
r = resolve("the purple one on the left", state, lexicon, keep_chart=True)
for line in r.chart.dump().splitlines():
    if " NP " in line:
        print(" ", line)

print("\n== anaphora across a removal ==============================")
exchange = state_from_scene(Scene(seed=0, width=512, height=512, objects=(
    SceneObject(0, 0.50, 0.70, "green"),     # front centre
    SceneObject(1, 0.50, 0.40, "purple"),    # directly behind it
    SceneObject(2, 0.10, 0.60, "green"),
)))
first = resolve("the green one in the front", exchange, lexicon)
print(f"turn 1: 'the green one in the front' -> {first.chosen}; removing it")
exchange = remove_object(exchange, first.chosen)
second = resolve("the one behind that one", exchange, lexicon)
print(f"turn 2: 'the one behind that one' -> {second.chosen} "
      f"({second.consistency.value})")
