"""Bottom-up partial chart parse with composition on rule completion.

The parse never needs to cover the whole utterance.  Unknown words create no
leaf edges; instead every constituent that would end immediately before an
unknown token is extended across it, which makes unknown words invisible to
rule matching.  When a rule completes syntactically, the designated tail
constituent's composer runs; if it fails, the rule produces no edge.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from .composition import (
    Argument,
    ChainComposer,
    ComposeContext,
    ComposedSem,
    Composer,
    Concept,
    GroupSplitComposer,
    IdentityComposer,
    NOT_REFERRING,
    RefKind,
)
from .errors import ComposeError
from .lexicon import GrammarRule, LexicalEntry, Lexicon, Template

log = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[a-z0-9']+")


def tokenize(utterance: str) -> list[str]:
    """Lowercase, whitespace/punctuation split, internal apostrophes kept."""
    tokens = []
    for raw in _TOKEN_RE.findall(utterance.lower()):
        token = raw.strip("'")
        if token:
            tokens.append(token)
    return tokens


@dataclass(frozen=True)
class Constituent:
    """A chart edge: category over a token span, carrying a concept.

    `sem` is the composition this constituent can re-apply when used as a
    modifier; chain edges defer a queue of composers instead of a concept.
    """

    category: str
    start: int
    end: int
    concept: Concept
    sem: Composer | None = None
    rule: GrammarRule | None = None
    children: tuple["Constituent", ...] = ()
    entry: LexicalEntry | None = None

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    @property
    def length(self) -> int:
        return self.end - self.start

    @property
    def is_leaf(self) -> bool:
        return self.entry is not None

    def identity_key(self) -> tuple:
        sem_key = self.sem.identity() if self.sem is not None else None
        return (self.category, self.start, self.end,
                self.concept.identity_key(), sem_key)

    def describe(self) -> str:
        via = (self.entry.describe() if self.entry is not None
               else f"{self.rule.head} <- {' '.join(self.rule.tail)}"
               if self.rule else "?")
        weights = ",".join(f"{i}:{w:.4g}"
                           for i, w in sorted(self.concept.weights.items()))
        return (f"span=[{self.start},{self.end}) {self.category} "
                f"concept={{{weights}}} via {via}")


@dataclass
class Chart:
    tokens: list[str]
    constituents: list[Constituent] = field(default_factory=list)
    unknown: set[int] = field(default_factory=set)

    def referring(self) -> list[Constituent]:
        return [c for c in self.constituents if c.concept.referring]

    def edges(self, category: str | None = None) -> list[Constituent]:
        if category is None:
            return list(self.constituents)
        return [c for c in self.constituents if c.category == category]

    def dump(self) -> str:
        lines = [c.describe() for c in
                 sorted(self.constituents, key=lambda c: (c.start, c.end,
                                                          c.category))]
        return "\n".join(lines)


def complete_rule(rule: GrammarRule, parts: list[Constituent],
                  ctx: ComposeContext) -> list[Constituent]:
    """Run a syntactically complete rule; composer failures yield no edges."""
    results: list[Constituent] = []
    for tpl in rule.templates:
        functor = parts[tpl.fn]
        args = [parts[i] for i in tpl.args]
        if rule.head == "P":
            promoted = _promote_preposition(rule, tpl, functor, args, parts)
            if promoted is not None:
                results.append(promoted)
            continue
        sem = functor.sem
        if sem is None or not sem.accepts(len(args)):
            continue
        if (rule.head == "NP" and rule.tail[0] == "ADJ" and tpl.fn == 0
                and len(args) == 1 and _adj_modified(args[0])):
            # stacked adjectives compose through the ADJ chain, left to
            # right, never by nesting noun phrases right to left
            continue
        if len(args) == 1 and not args[0].concept.referring:
            chained = _make_chain(rule, functor, args[0], parts)
            if chained is not None:
                results.append(chained)
            continue
        if any(not a.concept.referring for a in args):
            continue
        try:
            if not args and functor.concept.referring:
                # the functor already yielded its concept at leaf creation
                concepts = [functor.concept]
            else:
                concepts = sem.apply([Argument(a.concept, a.sem) for a in args],
                                     ctx)
        except ComposeError as exc:
            log.debug("rule %s <- %s failed: %s", rule.head,
                      " ".join(rule.tail), exc)
            continue
        reapply = _reapplicable(sem, args)
        for concept in concepts:
            results.append(Constituent(
                category=rule.head, start=parts[0].start, end=parts[-1].end,
                concept=concept, sem=reapply, rule=rule, children=tuple(parts)))
    return results


def _reapplicable(sem: Composer, args: list[Constituent]) -> Composer | None:
    if len(args) == 0:
        return sem
    if len(args) == 1 and args[0].sem is not None:
        return ComposedSem(sem, args[0].sem)
    return None   # bridged/spatial results are not re-applied as modifiers


def _adj_modified(c: Constituent) -> bool:
    return (c.rule is not None and c.rule.head == "NP"
            and bool(c.rule.tail) and c.rule.tail[0] == "ADJ")


def _make_chain(rule: GrammarRule, functor: Constituent, arg: Constituent,
                parts: list[Constituent]) -> Constituent | None:
    """Queue the accepting composer ahead of the argument's pending ones."""
    front = (functor.sem.queue if isinstance(functor.sem, ChainComposer)
             else (functor.sem,))
    if isinstance(arg.sem, ChainComposer):
        back = arg.sem.queue
    elif arg.sem is not None:
        back = (arg.sem,)
    else:
        return None
    if any(not c.can_transform for c in front + back):
        return None
    return Constituent(
        category=rule.head, start=parts[0].start, end=parts[-1].end,
        concept=NOT_REFERRING, sem=ChainComposer(front + back), rule=rule,
        children=tuple(parts))


def _promote_preposition(rule: GrammarRule, tpl: Template,
                         functor: Constituent, args: list[Constituent],
                         parts: list[Constituent]) -> Constituent | None:
    # P-headed rules install a composer instead of running one: SPEC wrappers
    # pass their argument through, everything else adopts the functor.
    if isinstance(functor.sem, IdentityComposer) and args:
        sem = args[0].sem
    else:
        sem = functor.sem
    if isinstance(sem, GroupSplitComposer) and rule.tail != ("POF",):
        # "of" joins composition only through its own promotion; wrapping it
        # in specifier or doubled-preposition edges breeds spurious readings
        return None
    return Constituent(category="P", start=parts[0].start, end=parts[-1].end,
                       concept=NOT_REFERRING, sem=sem, rule=rule,
                       children=tuple(parts))


def parse(tokens: list[str], lexicon: Lexicon, grammar: list[GrammarRule],
          ctx: ComposeContext) -> Chart:
    """Agenda-driven bottom-up chart parse over the given grammar."""
    unknown = {i for i, t in enumerate(tokens) if not lexicon.lookup(t)}
    chart = Chart(tokens=list(tokens), unknown=unknown)

    def absorb(end: int) -> int:
        while end < len(tokens) and end in unknown:
            end += 1
        return end

    rules_by_first: dict[str, list[GrammarRule]] = {}
    for rule in grammar:
        rules_by_first.setdefault(rule.tail[0], []).append(rule)

    completed: dict[tuple[int, str], list[Constituent]] = {}
    actives: dict[tuple[int, str], list[tuple[GrammarRule, tuple]] ] = {}
    seen: set[tuple] = set()
    agenda: list[Constituent] = []

    def push(c: Constituent) -> None:
        key = c.identity_key()
        if key in seen:
            return
        seen.add(key)
        agenda.append(c)

    def advance(rule: GrammarRule, parts: tuple) -> None:
        if len(parts) == len(rule.tail):
            for made in complete_rule(rule, list(parts), ctx):
                push(_with_absorbed_end(made, absorb(made.end)))
            return
        need = (parts[-1].end, rule.tail[len(parts)])
        actives.setdefault(need, []).append((rule, parts))
        for c in list(completed.get(need, [])):
            advance(rule, parts + (c,))

    for i, token in enumerate(tokens):
        for entry in lexicon.lookup(token):
            # words that refer on their own yield their concept right away,
            # so rules like NP <- CADJ N see the noun's default referent set
            concept = NOT_REFERRING
            if entry.arity == 0 and entry.ref is not RefKind.NOT_REFERRING:
                try:
                    produced = entry.composer.apply([], ctx)
                    if produced:
                        concept = produced[0]
                except ComposeError:
                    concept = NOT_REFERRING
            push(Constituent(category=entry.category, start=i,
                             end=absorb(i + 1), concept=concept,
                             sem=entry.composer, entry=entry))

    while agenda:
        c = agenda.pop()
        chart.constituents.append(c)
        key = (c.start, c.category)
        completed.setdefault(key, []).append(c)
        for rule in rules_by_first.get(c.category, []):
            advance(rule, (c,))
        for rule, parts in list(actives.get(key, [])):
            advance(rule, parts + (c,))

    return chart


def _with_absorbed_end(c: Constituent, end: int) -> Constituent:
    if end == c.end:
        return c
    return Constituent(category=c.category, start=c.start, end=end,
                       concept=c.concept, sem=c.sem, rule=c.rule,
                       children=c.children, entry=c.entry)
