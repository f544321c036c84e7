"""Author and verify the packaged regression corpus.

Every record's target comes from a pure-geometry oracle over the hand-placed
object table (never from the engine).  The builder replays each session,
asserts decisive margins so rasterization cannot flip an answer, checks that
the engine agrees with every oracle, and only then freezes the JSONL.

    python tools/build_corpus.py
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from bishop.lexicon import default_lexicon
from bishop.resolution import resolve
from bishop.scene import Scene, SceneObject, remove_object, state_from_scene

GROUP_THRESHOLD = 0.15
MARGIN = 0.03          # board units; decisive gap required between ranks


class Obj:
    def __init__(self, oid, x, y, colour):
        self.id, self.x, self.y, self.colour = oid, x, y, colour


# -- oracle vocabulary (pure geometry over board coordinates) -----------------

def only(colour):
    def f(objs, removed):
        hits = [o for o in objs if o.colour == colour]
        assert len(hits) == 1, f"expected exactly one {colour}, got {hits}"
        return hits[0].id
    return f


def extremum(axis, largest, colour=None, among=None):
    def f(objs, removed):
        pool = [o for o in objs if colour is None or o.colour == colour]
        if among is not None:
            pool = [o for o in pool if o.id in among]
        assert pool
        key = (lambda o: o.x) if axis == "x" else (lambda o: o.y)
        ranked = sorted(pool, key=key, reverse=largest)
        if len(ranked) > 1:
            gap = abs(key(ranked[0]) - key(ranked[1]))
            assert gap >= MARGIN, f"indecisive {axis} extremum: gap {gap:.3f}"
        return ranked[0].id
    return f


def sequenced(first, then):
    """Left-to-right stacking: the first extremum is decisive, the second
    runs over its survivor (and must therefore agree)."""
    def f(objs, removed):
        winner = first(objs, removed)
        survivors = [o for o in objs if o.id == winner]
        assert then(survivors, removed) == winner
        return winner
    return f


def nearest_centre(colour=None):
    def f(objs, removed):
        pool = [o for o in objs if colour is None or o.colour == colour]
        ranked = sorted(pool, key=lambda o: (o.x - 0.5) ** 2 + (o.y - 0.5) ** 2)
        if len(ranked) > 1:
            d0 = ((ranked[0].x - 0.5) ** 2 + (ranked[0].y - 0.5) ** 2) ** 0.5
            d1 = ((ranked[1].x - 0.5) ** 2 + (ranked[1].y - 0.5) ** 2) ** 0.5
            assert d1 - d0 >= MARGIN, "indecisive middle"
        return ranked[0].id
    return f


def corner_then_right(colour):
    def f(objs, removed):
        def corner_dist(o):
            return min(((o.x - cx) ** 2 + (o.y - cy) ** 2) ** 0.5
                       for cx in (0, 1) for cy in (0, 1))
        pool = [o for o in objs if o.colour == colour and corner_dist(o) < 0.25]
        assert pool
        ranked = sorted(pool, key=lambda o: -o.x)
        if len(ranked) > 1:
            assert ranked[0].x - ranked[1].x >= MARGIN
        return ranked[0].id
    return f


def _components(objs):
    ids = [o.id for o in objs]
    pos = {o.id: (o.x, o.y) for o in objs}
    parent = {i: i for i in ids}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a in ids:
        for b in ids:
            if a < b:
                d = ((pos[a][0] - pos[b][0]) ** 2
                     + (pos[a][1] - pos[b][1]) ** 2) ** 0.5
                # membership must be raster-proof on both sides of the line
                assert not GROUP_THRESHOLD - 0.02 < d < GROUP_THRESHOLD + 0.02, \
                    f"pair {a},{b} sits on the grouping threshold ({d:.3f})"
                if d < GROUP_THRESHOLD:
                    parent[find(a)] = find(b)
    comps = {}
    for i in ids:
        comps.setdefault(find(i), set()).add(i)
    return [c for c in comps.values() if len(c) >= 2]


def group_member_extremum(colour, size, axis, largest):
    def f(objs, removed):
        pool = [o for o in objs if o.colour == colour]
        comps = [c for c in _components(pool) if len(c) == size]
        assert len(comps) == 1, f"need exactly one {colour} group of {size}"
        return extremum(axis, largest, among=comps[0])(objs, removed)
    return f


def beside_group(colour, size, side):
    """Unique object level with a cluster and strictly to its side."""
    def f(objs, removed):
        pool = [o for o in objs if o.colour == colour]
        comps = [c for c in _components(pool) if len(c) == size]
        assert len(comps) == 1
        members = comps[0]
        xs = [o.x for o in objs if o.id in members]
        cy = sum(o.y for o in objs if o.id in members) / size
        if side == "left":
            band = [o for o in objs if o.id not in members
                    and o.x < min(xs) - 0.1 and abs(o.y - cy) < 0.15]
        else:
            band = [o for o in objs if o.id not in members
                    and o.x > max(xs) + 0.1 and abs(o.y - cy) < 0.15]
        assert len(band) == 1, f"need a unique object {side} of the group"
        return band[0].id
    return f


def behind_colour_pair(target_colour, landmark_colour):
    """Unique target-coloured object directly behind some landmark object."""
    def f(objs, removed):
        landmarks = [o for o in objs if o.colour == landmark_colour]
        hits = [o for o in objs if o.colour == target_colour
                and any(abs(o.x - l.x) < 0.1 and o.y < l.y - 0.1
                        for l in landmarks)]
        assert len(hits) == 1
        return hits[0].id
    return f


def behind_removed(colour=None):
    def f(objs, removed):
        assert removed is not None
        hits = [o for o in objs
                if (colour is None or o.colour == colour)
                and abs(o.x - removed.x) < 0.1 and o.y < removed.y - 0.1]
        assert hits, "need an object behind the removed one"
        dist = lambda o: ((o.x - removed.x) ** 2 + (o.y - removed.y) ** 2) ** 0.5
        hits.sort(key=dist)
        if len(hits) > 1:
            # aligned candidates score by inverse distance: demand a clear gap
            assert dist(hits[1]) - dist(hits[0]) >= 0.1
        return hits[0].id
    return f


def the_only_one():
    def f(objs, removed):
        assert len(objs) == 1
        return objs[0].id
    return f


# -- session table -------------------------------------------------------------

G, P = "green", "purple"

SESSIONS = [
    ("s01", [(0.30, 0.40, P), (0.10, 0.20, G), (0.60, 0.30, G),
             (0.80, 0.70, G), (0.40, 0.75, G)],
     [
        ("the purple cone", only(P), ["colour"]),
        ("the leftmost green one", extremum("x", False, colour=G),
         ["colour", "extremum"]),
        ("the frontmost cone", extremum("y", True), ["extremum"]),
        ("the green one on the right", extremum("x", True, colour=G),
         ["colour", "extremum"]),
     ]),

    ("s02", [(0.05, 0.50, G), (0.30, 0.45, P), (0.60, 0.55, P),
             (0.80, 0.50, G)],
     [
        ("the purple one on the left", extremum("x", False, colour=P),
         ["colour", "extremum"]),
        ("the rightmost cone", extremum("x", True), ["extremum"]),
        ("the purple one", only(P), ["colour"]),
     ]),

    ("s03", [(0.50, 0.52, G), (0.10, 0.10, P), (0.92, 0.15, P),
             (0.12, 0.85, G), (0.80, 0.80, P)],
     [
        ("the one in the middle", nearest_centre(), ["region"]),
        ("the purple one in the corner on the right", corner_then_right(P),
         ["colour", "region", "combined"]),
        ("the green cone", only(G), ["colour"]),
     ]),

    ("s04", [(0.20, 0.80, G), (0.05, 0.70, G), (0.60, 0.30, P),
             (0.85, 0.20, P), (0.50, 0.55, P)],
     [
        ("the front left cone",
         sequenced(extremum("y", True), extremum("x", False)),
         ["combined", "extremum"]),
        ("the back right purple one",
         sequenced(extremum("y", False, colour=P),
                   extremum("x", True, colour=P)),
         ["combined", "extremum", "colour"]),
        ("the leftmost one", extremum("x", False), ["extremum"]),
     ]),

    ("s05", [(0.20, 0.20, G), (0.28, 0.30, G), (0.10, 0.24, G),
             (0.80, 0.80, G), (0.70, 0.20, P), (0.78, 0.28, P)],
     [
        ("the frontmost one of the three green ones",
         group_member_extremum(G, 3, "y", True),
         ["grouping", "extremum", "combined"]),
        ("the leftmost one of the two purple ones",
         group_member_extremum(P, 2, "x", False),
         ["grouping", "extremum", "combined"]),
        ("the green one in the front", extremum("y", True, colour=G),
         ["colour", "extremum"]),
     ]),

    ("s06", [(0.70, 0.45, P), (0.78, 0.52, P), (0.70, 0.57, P),
             (0.45, 0.52, G), (0.66, 0.05, G), (0.95, 0.90, G)],
     [
        ("the one to the left of the group of purple ones",
         beside_group(P, 3, "left"), ["grouping", "spatial"]),
        ("the green one behind the purple one", behind_colour_pair(G, P),
         ["colour", "spatial"]),
        ("the frontmost purple one", extremum("y", True, colour=P),
         ["colour", "extremum"]),
     ]),

    ("s07", [(0.50, 0.70, G), (0.50, 0.40, P), (0.10, 0.60, G),
             (0.52, 0.12, P)],
     [
        ("the green one in the front", extremum("y", True, colour=G),
         ["colour", "extremum"]),
        ("the one behind that one", behind_removed(),
         ["anaphora", "spatial"]),
        ("the purple one behind that one", behind_removed(colour=P),
         ["anaphora", "spatial", "colour"]),
     ]),

    ("s08", [(0.15, 0.30, G), (0.35, 0.60, P), (0.55, 0.25, G),
             (0.75, 0.65, P), (0.90, 0.35, G), (0.20, 0.80, P)],
     [
        ("the rightmost green cone", extremum("x", True, colour=G),
         ["colour", "extremum"]),
        ("the purple one in the front", extremum("y", True, colour=P),
         ["colour", "extremum"]),
        ("the leftmost cone", extremum("x", False), ["extremum"]),
        ("the green one", only(G), ["colour"]),
     ]),

    ("s09", [(0.48, 0.50, G), (0.50, 0.90, P), (0.10, 0.15, G),
             (0.88, 0.20, P), (0.90, 0.85, G)],
     [
        ("the cone in the middle", nearest_centre(), ["region"]),
        ("the green one in the back", extremum("y", False, colour=G),
         ["colour", "extremum"]),
        ("the purple cone on the right in the rear",
         sequenced(extremum("x", True, colour=P),
                   extremum("y", False, colour=P)),
         ["combined", "colour", "extremum"]),
     ]),

    ("s10", [(0.25, 0.50, G), (0.33, 0.55, G), (0.60, 0.52, P),
             (0.50, 0.05, G), (0.10, 0.90, P)],
     [
        ("the one to the right of the pair of green cones",
         beside_group(G, 2, "right"), ["grouping", "spatial"]),
        ("the green one in the front", extremum("y", True, colour=G),
         ["colour", "extremum"]),
        ("the backmost cone", extremum("y", False), ["extremum"]),
     ]),

    ("s11", [(0.30, 0.45, G), (0.30, 0.10, P), (0.70, 0.40, G),
             (0.75, 0.75, P)],
     [
        ("the purple cone that's behind the green cone",
         behind_colour_pair(P, G), ["colour", "spatial"]),
        ("the frontmost cone", extremum("y", True), ["extremum"]),
        ("the cone that's on the left", extremum("x", False), ["extremum"]),
     ]),

    ("s12", [(0.20, 0.20, P), (0.50, 0.45, G), (0.52, 0.75, P),
             (0.85, 0.30, G), (0.30, 0.90, P)],
     [
        ("the leftmost purple", extremum("x", False, colour=P),
         ["colour", "extremum"]),
        ("the middle green cone", nearest_centre(colour=G),
         ["colour", "region"]),
        ("the purple one in the middle", nearest_centre(colour=P),
         ["colour", "region"]),
     ]),

    ("s13", [(0.10, 0.58, G), (0.40, 0.52, P), (0.65, 0.48, P),
             (0.90, 0.55, G)],
     [
        ("the purple cone on the left side", extremum("x", False, colour=P),
         ["colour", "extremum"]),
        ("a green cone on the right", extremum("x", True, colour=G),
         ["colour", "extremum"]),
        ("the um cone in the front", extremum("y", True), ["extremum"]),
        ("the last one", the_only_one(), ["other"]),
     ]),
]


def build():
    lexicon = default_lexicon()
    out_dir = Path(__file__).resolve().parents[1] / "src" / "bishop" / "data" / "corpus"
    scene_dir = out_dir / "scenes"
    scene_dir.mkdir(parents=True, exist_ok=True)

    lines = []
    n_records = 0
    for name, layout, steps in SESSIONS:
        scene = Scene(seed=0, width=512, height=512, objects=tuple(
            SceneObject(id=i, x=x, y=y, colour=c)
            for i, (x, y, c) in enumerate(layout)))
        scene_path = scene_dir / f"{name}.json"
        scene_path.write_text(json.dumps(scene.to_document(), indent=2,
                                         sort_keys=True) + "\n")

        objs = [Obj(i, x, y, c) for i, (x, y, c) in enumerate(layout)]
        state = state_from_scene(scene)
        removed = None
        for index, (utterance, oracle, tags) in enumerate(steps):
            target = oracle(objs, removed)
            resolution = resolve(utterance, state, lexicon)
            assert resolution.chosen == target, (
                f"[{name}#{index}] {utterance!r}: engine chose "
                f"{resolution.chosen} ({resolution.consistency.value}), "
                f"oracle says {target}")
            lines.append(json.dumps({
                "session": name, "index": index,
                "scene": f"scenes/{name}.json",
                "utterance": utterance, "target": target, "tags": tags,
            }))
            removed = next(o for o in objs if o.id == target)
            objs = [o for o in objs if o.id != target]
            state = remove_object(state, target)
            n_records += 1

    (out_dir / "regression.jsonl").write_text("\n".join(lines) + "\n")
    print(f"wrote {n_records} records across {len(SESSIONS)} sessions")


if __name__ == "__main__":
    build()
