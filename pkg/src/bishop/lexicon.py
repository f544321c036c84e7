"""The grounded lexicon: word entries, composer specs, and colour models.

Lexicon files ("bishop-lexicon v1", JSON) carry three tables: fitted colour
models, lexical entries, and the grammar rules the parser runs.  Keeping the
grammar in data lets tests swap rules without code changes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.stats import multivariate_normal

from .composition import (
    AnaphoricComposer,
    BridgeComposer,
    ColourComposer,
    Composer,
    GroupingComposer,
    GroupSplitComposer,
    IdentityComposer,
    Mode,
    OrderingComposer,
    OrderingParams,
    RefKind,
    SelectComposer,
    SpatialComposer,
)
from .errors import ColourModelError, LexiconError
from .vision import DIRECTIONS

LEXICON_FORMAT = "bishop-lexicon v1"

CATEGORIES = {"ADJ", "CADJ", "N", "REL", "VPRES", "RELVPRES", "ART", "SPEC",
              "P", "POF", "PAT", "PIN"}

# Declared arities a composer kind can carry.  Unary kinds accept 0 because a
# bare noun applies its composer to the default all-objects concept.
KIND_ARITIES = {
    "colour_probabilistic": {0, 1},
    "ordering_extremum": {0, 1},
    "ordering_region": {0, 1},
    "grouping": {0, 1},
    "select": {0, 1},
    "identity": {0, 1},
    "spatial": {2},
    "bridge": {2},
    "group_split": {2},
    "anaphoric": {0, 1},
}

REF_KINDS = {"none": RefKind.NOT_REFERRING, "single": RefKind.SINGLE,
             "group": RefKind.GROUP}


@dataclass(frozen=True)
class ColourModel:
    """Three-dimensional Gaussian over average RGB."""

    name: str
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        try:
            np.linalg.cholesky(self.cov)
        except np.linalg.LinAlgError as exc:
            raise ColourModelError(
                f"covariance for {self.name!r} is not positive definite") from exc
        object.__setattr__(self, "_dist",
                           multivariate_normal(mean=self.mean, cov=self.cov))

    def pdf(self, rgb) -> float:
        return float(self._dist.pdf(rgb))

    def peak_density(self) -> float:
        det = float(np.linalg.det(self.cov))
        return ((2 * np.pi) ** 3 * det) ** -0.5


def fit_colour_model(name: str, samples) -> ColourModel:
    """Maximum-likelihood Gaussian fit over RGB triples.

    Adds a tiny diagonal jitter when the raw covariance is not factorable;
    exactly constant channels are rejected outright.
    """
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 3:
        raise ColourModelError("samples must be RGB triples")
    if len(data) < 4:
        raise ColourModelError(f"need at least 4 samples, got {len(data)}")
    mean = data.mean(axis=0)
    centred = data - mean
    cov = centred.T @ centred / len(data)
    if np.any(np.diag(cov) == 0.0):
        raise ColourModelError(f"zero-variance channel in samples for {name!r}")
    try:
        np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        cov = cov + np.eye(3) * 1e-6
    return ColourModel(name=name, mean=mean, cov=cov)


@dataclass(frozen=True)
class LexicalEntry:
    word: str
    category: str
    arity: int
    ref: RefKind
    composer_kind: str
    composer: Composer

    def describe(self) -> str:
        return f"{self.word}/{self.category}[{self.composer_kind}/{self.arity}]"


@dataclass(frozen=True)
class Template:
    """Which tail constituent's composer applies to which tail arguments."""

    fn: int
    args: tuple[int, ...]


@dataclass(frozen=True)
class GrammarRule:
    head: str
    tail: tuple[str, ...]
    templates: tuple[Template, ...]

    def __post_init__(self):
        if not self.templates:
            raise LexiconError(f"rule {self.head} <- {' '.join(self.tail)} "
                               "has no argument structure")
        for tpl in self.templates:
            positions = (tpl.fn, *tpl.args)
            if any(not 0 <= p < len(self.tail) for p in positions):
                raise LexiconError(
                    f"template position out of range in rule for {self.head}")


class Lexicon:
    def __init__(self, colour_models: dict[str, ColourModel],
                 entries: list[LexicalEntry], grammar: list[GrammarRule]):
        self.colour_models = colour_models
        self.entries = entries
        self.grammar = grammar
        self._by_word: dict[str, list[LexicalEntry]] = {}
        for e in entries:
            self._by_word.setdefault(e.word, []).append(e)

    def lookup(self, token: str) -> list[LexicalEntry]:
        """All entries for a token; empty means the word is unknown."""
        return list(self._by_word.get(token, []))

    def words(self) -> set[str]:
        return set(self._by_word)


def _build_composer(kind: str, params: dict, arity: int, ref: RefKind,
                    models: dict[str, ColourModel], locus: str) -> Composer:
    common = dict(arity=arity, ref=ref)
    if kind == "colour_probabilistic":
        model = params.get("model")
        if model not in models:
            raise LexiconError(f"{locus}: unknown colour model {model!r}")
        return ColourComposer(models[model], **common)
    if kind == "ordering_extremum":
        mode = Mode.MIN if params.get("mode") == "min" else (
            Mode.MAX if params.get("mode") == "max" else None)
        if mode is None or params.get("axis") not in ("x", "y"):
            raise LexiconError(f"{locus}: extremum needs axis x/y and mode min/max")
        return OrderingComposer(OrderingParams(mode=mode, axis=params["axis"]),
                                **common)
    if kind == "ordering_region":
        point = params.get("point")
        if point is None:
            raise LexiconError(f"{locus}: region ordering needs a point")
        if isinstance(point, list):
            point = tuple(point)
        elif point not in ("centre", "nearest_corner"):
            raise LexiconError(f"{locus}: unknown region point {point!r}")
        return OrderingComposer(
            OrderingParams(mode=Mode.REGION, axis="point", region_point=point),
            **common)
    if kind == "grouping":
        count = params.get("count")
        if count is not None and (not isinstance(count, int) or count < 2):
            raise LexiconError(f"{locus}: group count must be an integer >= 2")
        return GroupingComposer(count=count, **common)
    if kind == "spatial":
        direction = params.get("direction")
        if direction not in DIRECTIONS:
            raise LexiconError(f"{locus}: unknown direction {direction!r}")
        return SpatialComposer(direction, **common)
    if kind == "select":
        return SelectComposer(**common)
    if kind == "identity":
        return IdentityComposer(**common)
    if kind == "bridge":
        return BridgeComposer(**common)
    if kind == "group_split":
        return GroupSplitComposer(**common)
    if kind == "anaphoric":
        return AnaphoricComposer(**common)
    raise LexiconError(f"{locus}: unknown composer kind {kind!r}")


def load_lexicon(document: dict) -> Lexicon:
    """Validate and instantiate a lexicon document."""
    if document.get("format") != LEXICON_FORMAT:
        raise LexiconError(f"not a {LEXICON_FORMAT} document")

    models: dict[str, ColourModel] = {}
    for i, m in enumerate(document.get("colour_models", [])):
        locus = f"colour_models[{i}]"
        try:
            model = ColourModel(name=m["name"],
                                mean=np.asarray(m["mean"], dtype=float),
                                cov=np.asarray(m["cov"], dtype=float))
        except KeyError as exc:
            raise LexiconError(f"{locus}: missing field {exc}") from exc
        if model.name in models:
            raise LexiconError(f"{locus}: duplicate colour model {model.name!r}")
        models[model.name] = model

    entries: list[LexicalEntry] = []
    seen: set[tuple] = set()
    for i, e in enumerate(document.get("entries", [])):
        locus = f"entries[{i}]"
        try:
            word = e["word"]
            category = e["category"]
            arity = int(e["arity"])
            ref = e["ref"]
            spec = dict(e["composer"])
            kind = spec.pop("kind")
        except KeyError as exc:
            raise LexiconError(f"{locus}: missing field {exc}") from exc
        if word != word.lower():
            raise LexiconError(f"{locus}: word forms must be lowercase")
        if category not in CATEGORIES:
            raise LexiconError(f"{locus}: unknown category {category!r}")
        if ref not in REF_KINDS:
            raise LexiconError(f"{locus}: unknown ref behaviour {ref!r}")
        if kind not in KIND_ARITIES:
            raise LexiconError(f"{locus}: unknown composer kind {kind!r}")
        if arity not in KIND_ARITIES[kind]:
            raise LexiconError(
                f"{locus}: {kind} composer cannot take {arity} argument(s)")
        key = (word, category, kind, arity)
        if key in seen:
            raise LexiconError(f"{locus}: duplicate entry {key}")
        seen.add(key)
        composer = _build_composer(kind, spec, arity, REF_KINDS[ref], models,
                                   locus)
        entries.append(LexicalEntry(word=word, category=category, arity=arity,
                                    ref=REF_KINDS[ref], composer_kind=kind,
                                    composer=composer))

    grammar: list[GrammarRule] = []
    for i, r in enumerate(document.get("grammar", [])):
        locus = f"grammar[{i}]"
        try:
            head = r["head"]
            tail = tuple(r["tail"])
            templates = tuple(Template(fn=int(t["fn"]),
                                       args=tuple(int(a) for a in t["args"]))
                              for t in r["templates"])
        except KeyError as exc:
            raise LexiconError(f"{locus}: missing field {exc}") from exc
        if head not in CATEGORIES | {"NP"}:
            raise LexiconError(f"{locus}: unknown head category {head!r}")
        for cat in tail:
            if cat not in CATEGORIES | {"NP"}:
                raise LexiconError(f"{locus}: unknown tail category {cat!r}")
        grammar.append(GrammarRule(head=head, tail=tail, templates=templates))

    return Lexicon(colour_models=models, entries=entries, grammar=grammar)


def dump_lexicon(lexicon: Lexicon) -> dict:
    """Inverse of load_lexicon, for round-trip checks and tooling."""
    doc = {"format": LEXICON_FORMAT, "colour_models": [], "entries": [],
           "grammar": []}
    for model in lexicon.colour_models.values():
        doc["colour_models"].append({
            "name": model.name,
            "mean": [float(v) for v in model.mean],
            "cov": [[float(v) for v in row] for row in model.cov],
        })
    ref_names = {v: k for k, v in REF_KINDS.items()}
    for e in lexicon.entries:
        spec: dict = {"kind": e.composer_kind}
        c = e.composer
        if isinstance(c, ColourComposer):
            spec["model"] = c.model.name
        elif isinstance(c, OrderingComposer):
            if c.params.mode is Mode.REGION:
                point = c.params.region_point
                spec["point"] = list(point) if isinstance(point, tuple) else point
            else:
                spec["axis"] = c.params.axis
                spec["mode"] = c.params.mode.value
        elif isinstance(c, GroupingComposer):
            spec["count"] = c.count
        elif isinstance(c, SpatialComposer):
            spec["direction"] = c.direction
        doc["entries"].append({
            "word": e.word, "category": e.category, "arity": e.arity,
            "ref": ref_names[e.ref], "composer": spec,
        })
    for rule in lexicon.grammar:
        doc["grammar"].append({
            "head": rule.head,
            "tail": list(rule.tail),
            "templates": [{"fn": t.fn, "args": list(t.args)}
                          for t in rule.templates],
        })
    return doc


def load_lexicon_file(path: str | Path) -> Lexicon:
    return load_lexicon(json.loads(Path(path).read_text()))


def default_lexicon() -> Lexicon:
    """The packaged lexicon (colour models fitted offline)."""
    text = resources.files("bishop").joinpath("data/lexicon.json").read_text()
    return load_lexicon(json.loads(text))
