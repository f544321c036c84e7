"""Post-parse filtering and the top-level resolve entry point.

The chart's longest referring constituents are the interpretation candidates;
four consistency checks turn them into one committed referent (or an exact
diagnosis of why they disagree).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .composition import (
    AMBIGUITY_MARGIN,
    ComposeContext,
    Concept,
    RefKind,
    referents_group,
    referents_single,
)
from .lexicon import GrammarRule, Lexicon
from .parser import Chart, Constituent, parse, tokenize
from .scene import SceneState


class Consistency(enum.Enum):
    CONSISTENT = "consistent"
    WITHIN_GROUP_AMBIGUITY = "within_group_ambiguity"
    CONTRADICTING_CONSTITUENTS = "contradicting_constituents"
    NO_REFERENT = "no_referent"


@dataclass(frozen=True)
class Candidate:
    constituent: Constituent
    referents: tuple[int, ...]

    @property
    def span(self) -> tuple[int, int]:
        return self.constituent.span

    @property
    def concept(self) -> Concept:
        return self.constituent.concept


@dataclass(frozen=True)
class Resolution:
    chosen: int | None
    consistency: Consistency
    used_random_tiebreak: bool = False
    candidates: tuple[Candidate, ...] = ()
    chart: Chart | None = field(default=None, compare=False)

    def to_payload(self) -> dict:
        return {
            "chosen": self.chosen,
            "consistency": self.consistency.value,
            "used_random_tiebreak": self.used_random_tiebreak,
            "candidates": [
                {"span": list(c.span), "category": c.constituent.category,
                 "referents": list(c.referents)}
                for c in self.candidates
            ],
        }


def _is_ambiguous(concept: Concept) -> bool:
    ordered = sorted(concept.weights.values(), reverse=True)
    return len(ordered) > 1 and (ordered[0] - ordered[1]) <= AMBIGUITY_MARGIN


def _base_referent(concept: Concept, composites: set[int]) -> int:
    """Best referent among real scene objects (composites stand aside)."""
    weights = {i: w for i, w in concept.weights.items() if i not in composites}
    if not weights:
        weights = dict(concept.weights)
    return min(weights, key=lambda i: (-weights[i], i))


def filter_candidates(chart: Chart) -> tuple[list[Candidate], Consistency]:
    """Longest referring edges plus the four consistency checks."""
    referring = chart.referring()
    if not referring:
        return [], Consistency.NO_REFERENT
    longest = max(c.length for c in referring)
    picked = [c for c in referring if c.length == longest]

    kinds = {c.concept.ref_kind for c in picked}
    candidates = []
    for c in picked:
        if c.concept.ref_kind is RefKind.GROUP:
            refs = tuple(sorted(referents_group(c.concept)))
        else:
            refs = (referents_single(c.concept),)
        candidates.append(Candidate(constituent=c, referents=refs))

    if len(kinds) > 1:
        return candidates, Consistency.CONTRADICTING_CONSTITUENTS

    if kinds == {RefKind.SINGLE}:
        for cand in candidates:
            if cand.concept.determinate and _is_ambiguous(cand.concept):
                return candidates, Consistency.WITHIN_GROUP_AMBIGUITY
        if len({cand.referents for cand in candidates}) > 1:
            return candidates, Consistency.CONTRADICTING_CONSTITUENTS
    else:
        if len({cand.referents for cand in candidates}) > 1:
            return candidates, Consistency.CONTRADICTING_CONSTITUENTS

    return candidates, Consistency.CONSISTENT


def select_referent(candidates: list[Candidate], verdict: Consistency,
                    rng: np.random.Generator,
                    chart: Chart | None = None) -> Resolution:
    """Commit to one object.

    A consistent group answer takes its best-weighted member; contradicting
    candidates fall back to a seeded uniform pick over their union.
    """
    if not candidates:
        return Resolution(chosen=None, consistency=Consistency.NO_REFERENT,
                          chart=chart)

    composites: set[int] = set()
    for cand in candidates:
        composites.update(cand.concept.composites)

    random_pick = False
    if verdict is Consistency.CONTRADICTING_CONSTITUENTS:
        pool = sorted({i for cand in candidates for i in cand.referents}
                      - composites)
        if not pool:
            pool = sorted({i for cand in candidates for i in cand.referents})
        chosen = int(pool[rng.integers(len(pool))])
        random_pick = True
    else:
        chosen = _base_referent(candidates[0].concept, composites)

    return Resolution(chosen=chosen, consistency=verdict,
                      used_random_tiebreak=random_pick,
                      candidates=tuple(candidates), chart=chart)


def resolve(utterance: str, state: SceneState, lexicon: Lexicon,
            grammar: list[GrammarRule] | None = None,
            rng: np.random.Generator | None = None,
            keep_chart: bool = False) -> Resolution:
    """Tokenize, parse, filter, and choose; never raises on odd input."""
    if grammar is None:
        grammar = lexicon.grammar
    if rng is None:
        rng = np.random.default_rng(0)
    tokens = tokenize(utterance)
    ctx = ComposeContext.from_state(state)
    chart = parse(tokens, lexicon, grammar, ctx)
    candidates, verdict = filter_candidates(chart)
    return select_referent(candidates, verdict, rng,
                           chart=chart if keep_chart else None)
