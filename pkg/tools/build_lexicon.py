"""Regenerate the packaged lexicon file.

Fits the two colour models from labelled rendered cones (100 per class),
then writes the entry and grammar tables.  Run from the repository root:

    python tools/build_lexicon.py
"""

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from bishop.lexicon import LEXICON_FORMAT, fit_colour_model, load_lexicon
from bishop.scene import generate_scene
from bishop.vision import VisionContext

SAMPLES_PER_CLASS = 100

# The ML fit is tight around the luminance spread of unoccluded cones, which
# would let the referent cutoff drop dimly lit same-class objects.  Widening
# the covariance keeps every same-class density well above that cutoff
# without disturbing the ranking or the class separation.
COV_INFLATION = 16.0


def collect_samples():
    samples = {"green": [], "purple": []}
    seed = 10_000
    while any(len(v) < SAMPLES_PER_CLASS for v in samples.values()):
        state = generate_scene(seed, 12)
        vision = VisionContext(state.raster)
        for obj in state.current.objects:
            bucket = samples[obj.colour]
            if len(bucket) < SAMPLES_PER_CLASS:
                bucket.append(vision.average_rgb(obj.id).tolist())
        seed += 1
    return samples


def colour_model_table():
    samples = collect_samples()
    table = []
    for name in ("green", "purple"):
        model = fit_colour_model(name, samples[name])
        table.append({
            "name": name,
            "mean": [round(float(v), 6) for v in model.mean],
            "cov": [[round(float(v) * COV_INFLATION, 6) for v in row]
                    for row in model.cov],
        })
    return table


def entry(word, category, arity, ref, **composer):
    return {"word": word, "category": category, "arity": arity, "ref": ref,
            "composer": composer}


def extremum(axis, mode):
    return dict(kind="ordering_extremum", axis=axis, mode=mode)


def region(point):
    return dict(kind="ordering_region", point=point)


def adj_and_noun(word, composer):
    return [entry(word, "ADJ", 1, "none", **composer),
            entry(word, "N", 0, "single", **composer)]


def entry_table():
    entries = []

    # articles, relatives, specifiers
    entries.append(entry("the", "ART", 1, "none", kind="select"))
    entries.append(entry("a", "ART", 1, "none", kind="identity"))
    entries.append(entry("that", "ART", 1, "single", kind="anaphoric"))
    entries.append(entry("that", "N", 0, "single", kind="anaphoric"))
    entries.append(entry("that", "REL", 2, "none", kind="bridge"))
    entries.append(entry("it", "N", 0, "single", kind="anaphoric"))
    entries.append(entry("which", "REL", 2, "none", kind="bridge"))
    entries.append(entry("is", "VPRES", 0, "none", kind="identity"))
    entries.append(entry("that's", "RELVPRES", 0, "none", kind="identity"))
    entries.append(entry("it's", "RELVPRES", 0, "none", kind="identity"))
    entries.append(entry("just", "SPEC", 1, "none", kind="identity"))
    entries.append(entry("right", "SPEC", 1, "none", kind="identity"))

    # colour
    for colour in ("green", "purple"):
        entries.append(entry(colour, "CADJ", 1, "none",
                             kind="colour_probabilistic", model=colour))
        entries.append(entry(colour, "N", 0, "single",
                             kind="colour_probabilistic", model=colour))

    # bare nouns
    for word in ("cone", "one", "side"):
        entries.append(entry(word, "N", 0, "single", kind="identity"))
    for word in ("cones", "ones"):
        entries.append(entry(word, "N", 0, "group", kind="identity"))

    # extrema; raster y grows downward so front/bottom/closest share max-y
    for word in ("left", "leftmost"):
        entries.extend(adj_and_noun(word, extremum("x", "min")))
    for word in ("right", "rightmost"):
        entries.extend(adj_and_noun(word, extremum("x", "max")))
    for word in ("front", "frontmost", "bottom", "bottommost", "closest"):
        entries.extend(adj_and_noun(word, extremum("y", "max")))
    for word in ("back", "backmost", "rear", "rearmost", "top", "furthest"):
        entries.extend(adj_and_noun(word, extremum("y", "min")))

    # regions
    for word in ("middle", "centre", "center"):
        entries.extend(adj_and_noun(word, region("centre")))
    entries.append(entry("corner", "N", 0, "single", **region("nearest_corner")))

    # spatial noun senses for "to the left of" / "in front of"
    for word, direction in (("left", "left"), ("right", "right"),
                            ("front", "front"), ("back", "behind")):
        entries.append(entry(word, "N", 2, "single", kind="spatial",
                             direction=direction))

    # prepositions
    for word, direction in (("behind", "behind"), ("above", "above"),
                            ("below", "below")):
        entries.append(entry(word, "P", 2, "none", kind="spatial",
                             direction=direction))
    for word in ("on", "in", "to", "at"):
        entries.append(entry(word, "P", 2, "none", kind="bridge"))
    entries.append(entry("of", "POF", 2, "none", kind="group_split"))

    # grouping
    entries.append(entry("group", "N", 0, "group", kind="grouping", count=None))
    entries.append(entry("row", "N", 0, "group", kind="grouping", count=None))
    entries.append(entry("pair", "N", 0, "group", kind="grouping", count=2))
    entries.append(entry("two", "ADJ", 1, "none", kind="grouping", count=2))
    entries.append(entry("three", "ADJ", 1, "none", kind="grouping", count=3))

    return entries


def rule(head, tail, fn, args):
    return {"head": head, "tail": tail,
            "templates": [{"fn": fn, "args": args}]}


def grammar_table():
    return [
        rule("ADJ", ["ADJ", "ADJ"], 1, [0]),
        rule("NP", ["ADJ", "NP"], 0, [1]),
        rule("NP", ["CADJ", "N"], 0, [1]),
        rule("NP", ["N"], 0, []),
        rule("NP", ["ART", "NP"], 0, [1]),
        rule("NP", ["NP", "P", "NP"], 1, [0, 2]),
        rule("NP", ["NP", "P", "ART", "N", "POF", "NP"], 3, [0, 5]),
        rule("NP", ["NP", "RELVPRES", "P", "ART", "N", "POF", "NP"], 4, [0, 6]),
        rule("NP", ["NP", "P", "N", "POF", "NP"], 2, [0, 4]),
        rule("NP", ["NP", "REL", "VPRES", "NP"], 1, [0, 3]),
        rule("NP", ["NP", "REL", "P", "NP"], 2, [0, 3]),
        rule("NP", ["NP", "REL", "VPRES", "P", "NP"], 3, [0, 4]),
        rule("NP", ["NP", "RELVPRES", "P", "NP"], 2, [0, 3]),
        rule("NP", ["NP", "REL", "VPRES", "ADJ"], 3, [0]),
        rule("NP", ["NP", "RELVPRES", "ADJ"], 2, [0]),
        rule("NP", ["NP", "REL", "CADJ"], 2, [0]),
        rule("P", ["SPEC", "P"], 0, [1]),
        rule("P", ["P", "P"], 1, []),
        rule("P", ["POF"], 0, []),
    ]


def main():
    doc = {
        "format": LEXICON_FORMAT,
        "colour_models": colour_model_table(),
        "entries": entry_table(),
        "grammar": grammar_table(),
    }
    load_lexicon(doc)   # validate before writing
    out = Path(__file__).resolve().parents[1] / "src" / "bishop" / "data" / "lexicon.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {out} ({len(doc['entries'])} entries, "
          f"{len(doc['grammar'])} rules)")


if __name__ == "__main__":
    main()
