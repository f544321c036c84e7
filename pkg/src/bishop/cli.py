"""Command-line surface: scene generation, single-utterance resolution,
corpus evaluation, and the random-listener baseline."""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from .errors import BishopError
from .lexicon import default_lexicon, load_lexicon_file
from .resolution import resolve
from .scene import export_png, generate_scene, load_scene, save_scene, state_from_scene

PACKAGED_CORPUS = "data/corpus/regression.jsonl"


def _lexicon(args):
    if getattr(args, "lexicon", None):
        return load_lexicon_file(args.lexicon)
    return default_lexicon()


def cmd_gen(args) -> int:
    state = generate_scene(args.seed, args.objects)
    save_scene(state.current, args.out)
    print(f"wrote {args.out}: {args.objects} objects, seed {args.seed}")
    return 0


def cmd_resolve(args) -> int:
    state = state_from_scene(load_scene(args.scene))
    lexicon = _lexicon(args)
    rng = np.random.default_rng(args.seed)
    resolution = resolve(args.utterance, state, lexicon, rng=rng,
                         keep_chart=True)
    print(json.dumps(resolution.to_payload(), indent=2))
    if args.chart:
        print(resolution.chart.dump())
    if args.png:
        export_png(state.raster, args.png, outline_id=resolution.chosen)
        print(f"wrote {args.png}")
    if args.features:
        _dump_features(state, args.features)
        print(f"wrote {args.features}")
    return 0


def _dump_features(state, path: Path) -> None:
    from .vision import VisionContext

    vision = VisionContext(state.raster)
    lines = ["id,r,g,b,cx,cy"]
    for oid in vision.object_ids():
        r, g, b = vision.average_rgb(oid)
        cx, cy = vision.centroid(oid)
        lines.append(f"{oid},{r:.3f},{g:.3f},{b:.3f},{cx:.3f},{cy:.3f}")
    Path(path).write_text("\n".join(lines) + "\n")


def cmd_eval(args) -> int:
    if args.corpus:
        records = corpus_mod.load_corpus(args.corpus)
    else:
        packaged = resources.files("bishop").joinpath(PACKAGED_CORPUS)
        with resources.as_file(packaged) as path:
            records = corpus_mod.load_corpus(path)
    report = corpus_mod.evaluate(records, _lexicon(args), seed=args.seed)
    print(report.render())
    return 0 if report.accuracy >= args.floor else 1


def cmd_baseline(args) -> int:
    mean, stderr = corpus_mod.chance_baseline(args.sessions, args.trials,
                                              seed=args.seed)
    print(f"sessions: {args.sessions}  trials: {args.trials}")
    print(f"mean success rate: {mean:.4f}  (stderr {stderr:.5f})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bishop",
        description="Referring-expression resolution over synthetic scenes")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a scene file")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--objects", type=int, default=30)
    gen.add_argument("--out", type=Path, required=True)
    gen.set_defaults(func=cmd_gen)

    res = sub.add_parser("resolve", help="resolve one utterance in a scene")
    res.add_argument("--scene", type=Path, required=True)
    res.add_argument("--utterance", required=True)
    res.add_argument("--chart", action="store_true",
                     help="dump the parse chart edges")
    res.add_argument("--png", type=Path, default=None,
                     help="write the raster with the chosen object outlined")
    res.add_argument("--features", type=Path, default=None,
                     help="dump per-object vision features as CSV")
    res.add_argument("--seed", type=int, default=0)
    res.add_argument("--lexicon", type=Path, default=None)
    res.set_defaults(func=cmd_resolve)

    ev = sub.add_parser("eval", help="replay a corpus and report accuracy")
    ev.add_argument("--corpus", type=Path, default=None,
                    help="JSONL corpus (defaults to the packaged regression set)")
    ev.add_argument("--floor", type=float, default=1.0,
                    help="exit non-zero when accuracy drops below this")
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--lexicon", type=Path, default=None)
    ev.set_defaults(func=cmd_eval)

    base = sub.add_parser("baseline",
                          help="random-listener chance performance")
    base.add_argument("--sessions", type=int, required=True)
    base.add_argument("--trials", type=int, required=True)
    base.add_argument("--seed", type=int, default=0)
    base.set_defaults(func=cmd_baseline)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BishopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
