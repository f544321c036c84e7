"""Regression-corpus loading and session replay.

A corpus is a JSONL file of records; records sharing a session id replay in
index order against one evolving scene.  After each record the *target*
object is removed (the describer's intent always wins the round), which is
what feeds the anaphora history exactly like a live game would.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CorpusError
from .lexicon import Lexicon
from .resolution import resolve
from .scene import Scene, SceneState, remove_object, state_from_scene

TAGS = {"colour", "extremum", "region", "combined", "grouping", "spatial",
        "anaphora", "other", "error"}


@dataclass(frozen=True)
class CorpusRecord:
    session: str
    index: int
    scene: Scene
    utterance: str
    target: int
    tags: tuple[str, ...]


@dataclass
class TagScore:
    correct: int = 0
    total: int = 0

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0


@dataclass
class EvalReport:
    results: list[tuple[CorpusRecord, int | None]]
    by_tag: dict[str, TagScore] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def correct(self) -> int:
        return sum(1 for record, chosen in self.results
                   if chosen == record.target)

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0

    def accuracy_excluding(self, *tags: str) -> float:
        kept = [(r, c) for r, c in self.results
                if not (set(r.tags) & set(tags))]
        if not kept:
            return 0.0
        return sum(1 for r, c in kept if c == r.target) / len(kept)

    def render(self) -> str:
        lines = [
            f"records evaluated: {self.total}",
            f"All: {self.accuracy:.1%} ({self.correct}/{self.total})",
            f"All except 'Other': {self.accuracy_excluding('other'):.1%}",
            "All except 'Other' and 'Errors': "
            f"{self.accuracy_excluding('other', 'error'):.1%}",
            "",
            "per strategy:",
        ]
        for tag in sorted(self.by_tag):
            score = self.by_tag[tag]
            lines.append(f"  {tag:<10} {score.accuracy:>6.1%} "
                         f"({score.correct}/{score.total})")
        misses = [(r, c) for r, c in self.results if c != r.target]
        if misses:
            lines.append("")
            lines.append("misses:")
            for record, chosen in misses:
                lines.append(f"  [{record.session}#{record.index}] "
                             f"{record.utterance!r}: chose {chosen}, "
                             f"target {record.target}")
        return "\n".join(lines)


def _load_scene_field(value, base_dir: Path) -> Scene:
    if isinstance(value, str):
        path = base_dir / value
        return Scene.from_document(json.loads(path.read_text()))
    if isinstance(value, dict):
        return Scene.from_document(value)
    raise CorpusError(f"scene must be a document or file reference, "
                      f"got {type(value).__name__}")


def load_corpus(path: str | Path) -> list[CorpusRecord]:
    path = Path(path)
    base_dir = path.parent
    records = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{path}:{lineno}: bad JSON: {exc}") from exc
        try:
            tags = tuple(raw.get("tags", ()))
            unknown = set(tags) - TAGS
            if unknown:
                raise CorpusError(f"{path}:{lineno}: unknown tags {unknown}")
            records.append(CorpusRecord(
                session=str(raw["session"]),
                index=int(raw["index"]),
                scene=_load_scene_field(raw["scene"], base_dir),
                utterance=str(raw["utterance"]),
                target=int(raw["target"]),
                tags=tags,
            ))
        except KeyError as exc:
            raise CorpusError(f"{path}:{lineno}: missing field {exc}") from exc
    if not records:
        raise CorpusError(f"{path}: corpus is empty")
    return records


def evaluate(records: list[CorpusRecord], lexicon: Lexicon,
             seed: int = 0) -> EvalReport:
    """Replay every session in order, resolving and then removing the target."""
    sessions: dict[str, list[CorpusRecord]] = {}
    for record in records:
        sessions.setdefault(record.session, []).append(record)

    rng = np.random.default_rng(seed)
    report = EvalReport(results=[])
    for name in sorted(sessions):
        session = sorted(sessions[name], key=lambda r: r.index)
        state: SceneState = state_from_scene(session[0].scene)
        for record in session:
            if record.target not in state.current.ids():
                raise CorpusError(
                    f"[{name}#{record.index}] target {record.target} is not "
                    "in the scene at this point of the session")
            resolution = resolve(record.utterance, state, lexicon, rng=rng)
            report.results.append((record, resolution.chosen))
            ok = resolution.chosen == record.target
            for tag in record.tags:
                score = report.by_tag.setdefault(tag, TagScore())
                score.total += 1
                score.correct += int(ok)
            state = remove_object(state, record.target)
    return report


def chance_baseline(sessions: int, trials: int, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo of a listener guessing uniformly among remaining objects.

    Each session starts with `trials` objects and one disappears per trial,
    so trial k is a 1-in-(trials-k) guess.  Returns (mean success rate,
    standard error of that mean).
    """
    if sessions < 1 or trials < 1:
        raise ValueError("sessions and trials must be positive")
    rng = np.random.default_rng(seed)
    hits = np.zeros(sessions)
    for remaining in range(trials, 0, -1):
        hits += rng.integers(0, remaining, size=sessions) == 0
    rates = hits / trials
    return float(rates.mean()), float(rates.std(ddof=1) / np.sqrt(sessions))
