"""Visual features computed from the raster alone.

Everything the composers know about the world comes through here: average
colours, centroids, distance-threshold groups, convex-hull composites, and
the attentional-vector-sum direction measure used for spatial relations.
The ground-truth scene is deliberately out of reach.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .errors import EmptyRegionError, UndefinedDirectionError
from .scene import BACKGROUND, Raster, SceneObject

# Raster y grows downward, so "behind" is up-screen and "front" is
# down-screen (toward the viewer).
DIRECTIONS = {
    "left": (-1.0, 0.0),
    "right": (1.0, 0.0),
    "behind": (0.0, -1.0),
    "back": (0.0, -1.0),
    "above": (0.0, -1.0),
    "front": (0.0, 1.0),
    "below": (0.0, 1.0),
}

GROUP_DISTANCE_THRESHOLD = 0.15   # board units, hand-set on the regression scenes
AVS_LAMBDA = 0.7
DISTANCE_EPSILON = 1e-6

COMPOSITE_ID_BASE = 1000


@dataclass(frozen=True)
class Group:
    id: int
    members: tuple[int, ...]
    cohesion: float    # mean pairwise centroid distance, board units


@dataclass(frozen=True)
class GroupSet:
    groups: tuple[Group, ...]

    def __len__(self) -> int:
        return len(self.groups)

    def __iter__(self):
        return iter(self.groups)


@dataclass
class VisionContext:
    """Feature extractor over one raster.

    Composites created during a resolution are registered here so later
    composers can treat them like ordinary objects.  Instances are cheap;
    build one per raster per resolution and share it read-only.
    """

    raster: Raster
    group_distance_threshold: float = GROUP_DISTANCE_THRESHOLD
    avs_lambda: float = AVS_LAMBDA
    reference_vectors: dict[str, tuple[float, float]] = field(
        default_factory=lambda: dict(DIRECTIONS))

    def __post_init__(self):
        self._pixel_cache: dict[int, np.ndarray] = {}
        self._centroid_cache: dict[int, np.ndarray] = {}
        self._boundary_cache: dict[int, np.ndarray] = {}
        self._composites: dict[int, SceneObject] = {}
        self._composite_by_members: dict[tuple[int, ...], int] = {}
        present = np.unique(self.raster.id_map)
        self._base_ids = [int(i) for i in present if i != BACKGROUND]
        self._next_composite = COMPOSITE_ID_BASE

    # -- object bookkeeping -------------------------------------------------

    @property
    def board_scale(self) -> float:
        return 1.0 / (self.raster.width - 1)

    def object_ids(self) -> list[int]:
        """Base (non-composite) object ids visible in the raster."""
        return list(self._base_ids)

    def is_composite(self, oid: int) -> bool:
        return oid in self._composites

    def composite(self, oid: int) -> SceneObject:
        return self._composites[oid]

    def pixels(self, oid: int) -> np.ndarray:
        """(N, 2) array of (x, y) pixel coordinates owned by the object."""
        if oid not in self._pixel_cache:
            if oid in self._composites:
                raise AssertionError("composite pixels are registered at creation")
            rows, cols = np.nonzero(self.raster.id_map == oid)
            if rows.size == 0:
                raise EmptyRegionError(f"object {oid} owns no pixels")
            self._pixel_cache[oid] = np.column_stack([cols, rows]).astype(float)
        return self._pixel_cache[oid]

    # -- per-object features ------------------------------------------------

    def average_rgb(self, oid: int) -> np.ndarray:
        px = self.pixels(oid).astype(int)
        return self.raster.rgb[px[:, 1], px[:, 0]].astype(float).mean(axis=0)

    def centroid(self, oid: int) -> np.ndarray:
        if oid not in self._centroid_cache:
            self._centroid_cache[oid] = self.pixels(oid).mean(axis=0)
        return self._centroid_cache[oid]

    def distance(self, a: int, b: int) -> float:
        """Euclidean distance between centres of mass, in pixels."""
        return float(np.linalg.norm(self.centroid(a) - self.centroid(b)))

    def board_distance(self, a: int, b: int) -> float:
        return self.distance(a, b) * self.board_scale

    # -- grouping -----------------------------------------------------------

    def find_groups(self, candidate_ids, count: int | None = None) -> GroupSet:
        """Single-linkage components under the distance threshold.

        Only the given candidates are considered; a group needs at least two
        members.  With `count`, only components of exactly that size qualify.
        """
        ids = sorted(set(candidate_ids))
        if not ids:
            raise ValueError("candidate_ids must be non-empty")
        pts = np.array([self.centroid(i) for i in ids]) * self.board_scale
        dist = cdist(pts, pts)
        adjacent = dist < self.group_distance_threshold

        unassigned = set(range(len(ids)))
        components: list[list[int]] = []
        while unassigned:
            frontier = [unassigned.pop()]
            comp = list(frontier)
            while frontier:
                i = frontier.pop()
                linked = [j for j in unassigned if adjacent[i, j]]
                for j in linked:
                    unassigned.remove(j)
                comp.extend(linked)
                frontier.extend(linked)
            components.append(sorted(comp))

        groups = []
        for comp in sorted(components):
            if len(comp) < 2:
                continue
            if count is not None and len(comp) != count:
                continue
            sub = dist[np.ix_(comp, comp)]
            cohesion = float(sub[np.triu_indices(len(comp), k=1)].mean())
            groups.append(Group(
                id=len(groups),
                members=tuple(ids[i] for i in comp),
                cohesion=cohesion,
            ))
        return GroupSet(groups=tuple(groups))

    # -- composites ---------------------------------------------------------

    def make_composite(self, member_ids) -> SceneObject:
        """New object whose pixel set is the filled convex hull of its members."""
        members = tuple(sorted(set(int(m) for m in member_ids)))
        if len(members) < 2:
            raise ValueError("a composite needs at least two members")
        if members in self._composite_by_members:
            return self._composites[self._composite_by_members[members]]
        pts = np.vstack([self.pixels(m) for m in members])
        pixels = _fill_hull(pts)

        oid = self._next_composite
        self._next_composite += 1
        centroid = pixels.mean(axis=0)
        obj = SceneObject(
            id=oid,
            x=float(centroid[0] * self.board_scale),
            y=float(centroid[1] * self.board_scale),
            members=members,
        )
        self._composites[oid] = obj
        self._composite_by_members[members] = oid
        self._pixel_cache[oid] = pixels
        return obj

    # -- spatial relation measure -------------------------------------------

    def boundary_pixels(self, oid: int) -> np.ndarray:
        if oid not in self._boundary_cache:
            px = self.pixels(oid).astype(int)
            filled = set(map(tuple, px))
            edge = [p for p in px
                    if ((p[0] + 1, p[1]) not in filled
                        or (p[0] - 1, p[1]) not in filled
                        or (p[0], p[1] + 1) not in filled
                        or (p[0], p[1] - 1) not in filled)]
            self._boundary_cache[oid] = np.array(edge, dtype=float)
        return self._boundary_cache[oid]

    def avs_direction(self, trajector: int, landmark: int) -> np.ndarray:
        """Unit direction from landmark to trajector.

        Interpolates between the centre-to-centre vector and the vector along
        the closest boundary-pixel pair: lambda=1 gives pure centres, lambda=0
        pure closest points.
        """
        if trajector == landmark:
            raise ValueError("trajector and landmark must be distinct")
        v_centres = self.centroid(trajector) - self.centroid(landmark)
        v_centres = _unit_or_zero(v_centres)

        tb = self.boundary_pixels(trajector)
        lb = self.boundary_pixels(landmark)
        pair_dist = cdist(lb, tb)
        li, ti = np.unravel_index(np.argmin(pair_dist), pair_dist.shape)
        v_proximal = _unit_or_zero(tb[ti] - lb[li])

        lam = self.avs_lambda
        combined = lam * v_centres + (1.0 - lam) * v_proximal
        norm = np.linalg.norm(combined)
        if norm < 1e-12:
            raise UndefinedDirectionError(
                f"no direction between {trajector} and {landmark}")
        return combined / norm

    def spatial_score(self, trajector: int, landmark: int,
                      direction_name: str) -> float:
        """Alignment with a reference direction, divided by board distance.

        Alignment falls linearly from 1 at zero angular deviation to 0 at 90
        degrees and beyond.
        """
        ref = np.asarray(self.reference_vectors[direction_name], dtype=float)
        direction = self.avs_direction(trajector, landmark)
        cos = float(np.clip(np.dot(direction, ref), -1.0, 1.0))
        theta = np.degrees(np.arccos(cos))
        align = max(0.0, 1.0 - theta / 90.0)
        dist = self.board_distance(trajector, landmark)
        return align / max(dist, DISTANCE_EPSILON)


def _unit_or_zero(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        return np.zeros_like(v)
    return v / norm


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew monotone chain; returns hull vertices counter-clockwise."""
    pts = np.unique(points, axis=0)
    if len(pts) <= 2:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def build(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], p) <= 0:
                chain.pop()
            chain.append(p)
        return chain

    lower = build(pts)
    upper = build(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def _fill_hull(points: np.ndarray) -> np.ndarray:
    """Pixels inside the convex hull of the given pixel coordinates.

    Degenerate hulls (a point or a segment) rasterize to the segment itself.
    """
    hull = convex_hull(points)
    if len(hull) == 1:
        return hull.astype(float)
    if len(hull) == 2:
        a, b = hull
        steps = int(np.ceil(np.abs(b - a).max())) + 1
        seg = np.unique(np.rint(np.linspace(a, b, steps)).astype(int), axis=0)
        return seg.astype(float)

    y0 = int(np.floor(hull[:, 1].min()))
    y1 = int(np.ceil(hull[:, 1].max()))
    edges = list(zip(hull, np.roll(hull, -1, axis=0)))
    rows = []
    for y in range(y0, y1 + 1):
        xs = []
        for a, b in edges:
            ya, yb = a[1], b[1]
            if ya == yb:
                if abs(y - ya) < 0.5:
                    xs.extend([a[0], b[0]])
                continue
            lo, hi = min(ya, yb), max(ya, yb)
            if lo <= y <= hi:
                t = (y - ya) / (yb - ya)
                xs.append(a[0] + t * (b[0] - a[0]))
        if not xs:
            continue
        x_lo = int(np.ceil(min(xs) - 1e-9))
        x_hi = int(np.floor(max(xs) + 1e-9))
        if x_hi >= x_lo:
            span = np.arange(x_lo, x_hi + 1)
            rows.append(np.column_stack([span, np.full_like(span, y)]))
    return np.vstack(rows).astype(float)
