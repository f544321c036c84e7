"""Concepts and the semantic composers that transform them.

A Concept is a weighted referent set flowing between composers as the parser
completes grammar rules.  Composers are small callables bound to lexical
entries; each consumes argument concepts (or the default all-objects concept
when invoked with no arguments) and yields new concepts.  Failures raise
ComposeError, which the parser treats as "the rule does not succeed".
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType

import numpy as np

from .errors import AnaphoraUnavailableError, ComposeError
from .scene import SceneState
from .vision import VisionContext

GAMMA = 0.38                    # exponential falloff for ordering weights
GROUP_REL_THRESHOLD = 0.5       # min/max-relative cutoff for group extraction
CONVERSION_RATIO = 0.5          # max-relative cutoff for composer inputs
WEIGHT_FLOOR = 1e-300           # keeps colour weights positive under underflow
AMBIGUITY_MARGIN = 1e-9


class RefKind(enum.Enum):
    NOT_REFERRING = "not_referring"
    SINGLE = "single"
    GROUP = "group"


class Epoch(enum.Enum):
    CURRENT = "current"
    PREVIOUS = "previous"


@dataclass(frozen=True)
class Concept:
    """Weighted referent set with single/group, determinacy and epoch flags."""

    weights: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))
    ref_kind: RefKind = RefKind.NOT_REFERRING
    determinate: bool = False
    epoch: Epoch = Epoch.CURRENT
    split_groups: bool = False
    composites: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self):
        if not isinstance(self.weights, MappingProxyType):
            object.__setattr__(self, "weights", MappingProxyType(dict(self.weights)))
        if not isinstance(self.composites, MappingProxyType):
            object.__setattr__(self, "composites",
                               MappingProxyType(dict(self.composites)))
        if self.ref_kind is not RefKind.NOT_REFERRING and not self.weights:
            raise ValueError("referring concepts need a non-empty weight map")
        for w in self.weights.values():
            if w <= 0:
                raise ValueError("reference strengths must be positive")

    @property
    def referring(self) -> bool:
        return self.ref_kind is not RefKind.NOT_REFERRING

    def identity_key(self) -> tuple:
        """Stable key used by the chart to suppress duplicate edges."""
        return (
            self.ref_kind, self.determinate, self.epoch, self.split_groups,
            tuple(sorted((i, round(w, 9)) for i, w in self.weights.items())),
        )


NOT_REFERRING = Concept()


def referents_single(concept: Concept) -> int:
    """Best referent: maximum strength, ties broken by lowest id."""
    if not concept.weights:
        raise ComposeError("empty concept has no referent")
    return min(concept.weights, key=lambda i: (-concept.weights[i], i))


def referents_group(concept: Concept,
                    rel_threshold: float = GROUP_REL_THRESHOLD) -> set[int]:
    """Referents above a cutoff relative to the min/max strength."""
    if not concept.weights:
        return set()
    values = concept.weights.values()
    w_min, w_max = min(values), max(values)
    cutoff = w_min + rel_threshold * (w_max - w_min)
    return {i for i, w in concept.weights.items() if w >= cutoff}


def split_group(concept: Concept) -> Concept:
    """Expand the best composite referent into its members, uniformly weighted.

    Pass-through when the concept holds no composites.
    """
    comp_ids = [i for i in concept.weights if i in concept.composites]
    if not comp_ids:
        return concept
    best = min(comp_ids, key=lambda i: (-concept.weights[i], i))
    members = concept.composites[best]
    return replace(
        concept,
        weights=MappingProxyType({m: 1.0 for m in members}),
        ref_kind=RefKind.SINGLE,
        split_groups=False,
        composites=MappingProxyType({}),
    )


# ---------------------------------------------------------------------------
# Composition context
# ---------------------------------------------------------------------------


@dataclass
class ComposeContext:
    """Shared read-only state for one resolution."""

    current: VisionContext
    previous: VisionContext | None = None
    last_removed: int | None = None
    gamma: float = GAMMA

    @classmethod
    def from_state(cls, state: SceneState, **kwargs) -> "ComposeContext":
        previous = (VisionContext(state.previous_raster)
                    if state.previous_raster is not None else None)
        return cls(current=VisionContext(state.raster), previous=previous,
                   last_removed=state.last_removed, **kwargs)

    def vision(self, epoch: Epoch) -> VisionContext:
        if epoch is Epoch.PREVIOUS:
            if self.previous is None:
                raise ComposeError("no previous scene to measure against")
            return self.previous
        return self.current

    def default_concept(self, ref_kind: RefKind) -> Concept:
        ids = self.current.object_ids()
        if not ids:
            raise ComposeError("scene is empty")
        kind = ref_kind if ref_kind is not RefKind.NOT_REFERRING else RefKind.SINGLE
        return Concept(weights={i: 1.0 for i in ids}, ref_kind=kind)


@dataclass(frozen=True)
class Argument:
    """What a completed constituent exposes to a composer."""

    concept: Concept
    sem: "Composer | None" = None


def referent_ids(concept: Concept,
                 ratio: float = CONVERSION_RATIO) -> list[int]:
    """Objects a concept is taken to reference when fed to a composer.

    The cutoff is relative to the maximum strength alone: a min/max-relative
    cutoff would always shave off the lower half of a same-class band (all
    greens in a green-only scene), which no reading of "the green ones"
    supports.
    """
    if not concept.weights:
        return []
    w_max = max(concept.weights.values())
    return sorted(i for i, w in concept.weights.items() if w >= ratio * w_max)


# ---------------------------------------------------------------------------
# Composers
# ---------------------------------------------------------------------------


class Composer:
    """Executable meaning bound to a lexical entry.

    `arity` is the declared number of concept arguments; unary kinds invoked
    with zero arguments act on the default all-objects concept.
    """

    kind = "composer"

    # whether the composer can transform a single concept when re-applied by
    # a bridge or flushed from a chain, independent of its declared arity
    can_transform = True

    def __init__(self, arity: int = 0, ref: RefKind = RefKind.NOT_REFERRING):
        self.arity = arity
        self.ref = ref

    def accepts(self, n_args: int) -> bool:
        return n_args == self.arity

    def apply(self, args: list[Argument], ctx: ComposeContext) -> list[Concept]:
        raise NotImplementedError

    def identity(self):
        """Key for duplicate-edge suppression across equal re-derivations."""
        return id(self)

    def source_concept(self, args: list[Argument], ctx: ComposeContext) -> Concept:
        if args:
            if not args[0].concept.referring:
                raise ComposeError("argument does not refer")
            return args[0].concept
        return ctx.default_concept(self.ref)

    def __repr__(self):
        return f"<{type(self).__name__} arity={self.arity}>"


class IdentityComposer(Composer):
    """Nouns like "one"/"cones": yield the source concept unchanged."""

    kind = "identity"

    def apply(self, args, ctx):
        return [self.source_concept(args, ctx)]


class SelectComposer(Composer):
    """"the": mark the concept as unambiguously picking out its referent."""

    kind = "select"

    def apply(self, args, ctx):
        src = self.source_concept(args, ctx)
        return [replace(src, determinate=True)]


class ColourComposer(Composer):
    """Weight referents by a Gaussian colour density over their average RGB."""

    kind = "colour_probabilistic"

    def __init__(self, model, **kwargs):
        super().__init__(**kwargs)
        self.model = model

    def apply(self, args, ctx):
        src = self.source_concept(args, ctx)
        vision = ctx.vision(src.epoch)
        weights = {}
        for oid in referent_ids(src):
            density = self.model.pdf(vision.average_rgb(oid))
            weights[oid] = max(float(density), WEIGHT_FLOOR)
        if not weights:
            raise ComposeError("no referents to colour-weight")
        kind = src.ref_kind if src.referring else RefKind.SINGLE
        return [Concept(weights=weights, ref_kind=kind,
                        determinate=src.determinate, epoch=src.epoch,
                        composites=_surviving(src, weights))]


class Mode(enum.Enum):
    MIN = "min"
    MAX = "max"
    REGION = "region"


@dataclass(frozen=True)
class OrderingParams:
    mode: Mode
    axis: str = "x"                      # "x", "y", or "point" for regions
    region_point: str | tuple | None = None
    gamma: float = GAMMA

    def __post_init__(self):
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must be in (0, 1)")
        if (self.mode is Mode.REGION) != (self.region_point is not None):
            raise ValueError("region_point is required exactly for region mode")


def _region_distance(vision: VisionContext, oid: int, point) -> float:
    w, h = vision.raster.width - 1, vision.raster.height - 1
    c = vision.centroid(oid)
    if point == "centre":
        targets = [np.array([w / 2.0, h / 2.0])]
    elif point == "nearest_corner":
        targets = [np.array(p, dtype=float)
                   for p in ((0, 0), (w, 0), (0, h), (w, h))]
    else:
        targets = [np.asarray(point, dtype=float)]
    return min(float(np.linalg.norm(c - t)) for t in targets)


class OrderingComposer(Composer):
    """Spatial extrema and regions via the exponential falloff weighting.

    Minimal: w = gamma^(i * (1 + v)) over the ascending order, where i is the
    0-based rank and v the feature value normalized to [0, 1].  Maximal uses
    the descending order with v mirrored, so the extreme object always gets
    weight 1.  Regions use w = gamma^(1 + d/d_max) with d the distance to the
    reference point.
    """

    kind = "ordering"

    def __init__(self, params: OrderingParams, **kwargs):
        super().__init__(**kwargs)
        self.params = params

    def apply(self, args, ctx):
        src = self.source_concept(args, ctx)
        vision = ctx.vision(src.epoch)
        ids = referent_ids(src)
        if not ids:
            raise ComposeError("no referents to order")
        p = self.params
        if p.mode is Mode.REGION:
            dist = {i: _region_distance(vision, i, p.region_point) for i in ids}
            d_max = max(dist.values())
            if len(ids) == 1:
                weights = {ids[0]: p.gamma}
            else:
                weights = {
                    i: p.gamma ** (1.0 + (dist[i] / d_max if d_max > 0 else 0.0))
                    for i in ids
                }
        else:
            axis = 0 if p.axis == "x" else 1
            feature = {i: float(vision.centroid(i)[axis]) for i in ids}
            f_min = min(feature.values())
            f_max = max(feature.values())
            span = f_max - f_min
            norm = {i: ((feature[i] - f_min) / span if span > 0 else 0.0)
                    for i in ids}
            descending = p.mode is Mode.MAX
            ranked = sorted(ids, key=lambda i: (-feature[i] if descending
                                                else feature[i], i))
            weights = {}
            for rank, i in enumerate(ranked):
                v = (1.0 - norm[i]) if descending else norm[i]
                weights[i] = p.gamma ** (rank * (1.0 + v))
        return [replace(src, weights=MappingProxyType(weights),
                        split_groups=False,
                        composites=_surviving(src, weights))]


class GroupingComposer(Composer):
    """Find clusters among the referents; emit their hulls as composites.

    The resulting concept references every qualifying group's composite and
    members, weighted by exp(-cohesion / threshold) so tighter groups rank
    higher.  No qualifying group fails the rule.
    """

    kind = "grouping"

    def __init__(self, count: int | None = None, **kwargs):
        super().__init__(**kwargs)
        self.count = count

    def apply(self, args, ctx):
        src = self.source_concept(args, ctx)
        vision = ctx.vision(src.epoch)
        ids = [i for i in referent_ids(src) if not vision.is_composite(i)]
        if len(ids) < 2:
            raise ComposeError("grouping needs at least two candidate objects")
        groups = vision.find_groups(ids, count=self.count)
        if not len(groups):
            raise ComposeError("no qualifying groups")
        weights: dict[int, float] = {}
        composites: dict[int, tuple[int, ...]] = {}
        for group in groups:
            comp = vision.make_composite(group.members)
            strength = math.exp(-group.cohesion / vision.group_distance_threshold)
            weights[comp.id] = strength
            composites[comp.id] = group.members
            for m in group.members:
                weights[m] = strength
        return [Concept(weights=weights, ref_kind=RefKind.GROUP,
                        determinate=src.determinate, epoch=src.epoch,
                        composites=composites)]


class SpatialComposer(Composer):
    """Score targets by the AVS direction measure against landmark referents.

    When the landmark concept carries composites, only the hulls serve as
    landmarks.  Targets never include the landmarks themselves (or their
    members); targets scoring zero are dropped.
    """

    kind = "spatial"
    can_transform = False

    def __init__(self, direction: str, **kwargs):
        super().__init__(**kwargs)
        self.direction = direction

    def apply(self, args, ctx):
        if len(args) != 2:
            raise ComposeError("spatial composition needs target and landmark")
        target, landmark = args[0].concept, args[1].concept
        if not (target.referring and landmark.referring):
            raise ComposeError("spatial arguments must refer")
        vision = ctx.vision(landmark.epoch)

        landmark_ids = referent_ids(landmark)
        composite_landmarks = [i for i in landmark_ids if vision.is_composite(i)]
        if composite_landmarks:
            landmark_ids = composite_landmarks
        if not landmark_ids:
            raise ComposeError("no landmark referents")

        excluded = set(landmark_ids)
        for lid in composite_landmarks:
            excluded.update(vision.composite(lid).members)
        target_ids = [i for i in referent_ids(target)
                      if i not in excluded and not vision.is_composite(i)]
        if not target_ids:
            raise ComposeError("no targets left after excluding landmarks")

        weights = {}
        for tid in target_ids:
            scores = []
            for lid in landmark_ids:
                try:
                    scores.append(vision.spatial_score(tid, lid, self.direction))
                except Exception:
                    continue
            if scores and max(scores) > 0:
                weights[tid] = max(scores)
        if not weights:
            raise ComposeError(f"nothing lies {self.direction} of the landmark")
        epoch = (Epoch.PREVIOUS
                 if Epoch.PREVIOUS in (target.epoch, landmark.epoch)
                 else Epoch.CURRENT)
        return [Concept(weights=weights, ref_kind=RefKind.SINGLE,
                        determinate=target.determinate, epoch=epoch)]


class AnaphoricComposer(Composer):
    """Refer back to the last object removed, in the previous visual scene."""

    kind = "anaphoric"

    def apply(self, args, ctx):
        if ctx.last_removed is None or ctx.previous is None:
            raise AnaphoraUnavailableError("nothing has been removed yet")
        return [Concept(weights={ctx.last_removed: 1.0}, ref_kind=RefKind.SINGLE,
                        determinate=True, epoch=Epoch.PREVIOUS)]


class BridgeComposer(Composer):
    """Vacuous prepositions ("on", "in"): re-apply the modifier NP's pending
    composition to the head NP's concept."""

    kind = "bridge"
    can_transform = False

    def apply(self, args, ctx):
        if len(args) != 2:
            raise ComposeError("bridge needs two arguments")
        head, modifier = args
        if not head.concept.referring:
            raise ComposeError("bridged head does not refer")
        if modifier.sem is None or not modifier.sem.can_transform:
            raise ComposeError("modifier has no applicable composition")
        return modifier.sem.apply([Argument(head.concept)], ctx)


class GroupSplitComposer(Composer):
    """"of": flag the right concept for group splitting, split it, then apply
    the left constituent's pending composition to the result."""

    kind = "group_split"
    can_transform = False

    def apply(self, args, ctx):
        if len(args) != 2:
            raise ComposeError("of-bridge needs two arguments")
        head, source = args
        if not source.concept.referring:
            raise ComposeError("of-source does not refer")
        if head.sem is None or not head.sem.can_transform:
            raise ComposeError("of-head has no applicable composition")
        flagged = replace(source.concept, split_groups=True)
        return head.sem.apply([Argument(split_group(flagged))], ctx)


class ChainComposer(Composer):
    """Queued compositions whose arguments did not refer yet.

    Flushed exactly once, in reverse order of accumulation: queue [A, B]
    applied to c yields A(B(c)).
    """

    kind = "chain"

    def __init__(self, queue: tuple[Composer, ...]):
        super().__init__(arity=1)
        self.queue = queue

    def accepts(self, n_args):
        return n_args == 1

    def identity(self):
        return ("chain", tuple(c.identity() for c in self.queue))

    def apply(self, args, ctx):
        if len(args) != 1 or not args[0].concept.referring:
            raise ComposeError("a chain flushes on one referring argument")
        concepts = [args[0].concept]
        for sem in reversed(self.queue):
            if not sem.can_transform:
                raise ComposeError(f"queued {sem.kind} composer cannot chain")
            next_concepts = []
            for c in concepts:
                next_concepts.extend(sem.apply([Argument(c)], ctx))
            if not next_concepts:
                raise ComposeError("queued composer produced nothing")
            concepts = next_concepts
        return concepts


class ComposedSem(Composer):
    """Re-applicable composition of a completed constituent: outer(inner(c))."""

    kind = "composed"

    def __init__(self, outer: Composer, inner: Composer | None):
        super().__init__(arity=1)
        self.outer = outer
        self.inner = inner

    def accepts(self, n_args):
        return n_args == 1

    def identity(self):
        return ("composed", self.outer.identity(),
                self.inner.identity() if self.inner is not None else None)

    def apply(self, args, ctx):
        inner_args = args
        if self.inner is not None and self.inner.can_transform:
            concepts = self.inner.apply(args, ctx)
            if not concepts:
                raise ComposeError("inner composition produced nothing")
            inner_args = [Argument(concepts[0])]
        return self.outer.apply(inner_args, ctx)


def _surviving(src: Concept, weights) -> dict:
    return {cid: members for cid, members in src.composites.items()
            if cid in weights}
