"""Scene generation, deterministic rasterization, and removal history.

A scene is a set of coloured cones on a unit board.  Rendering projects the
board onto a square raster with a painter's algorithm: objects further back
(smaller y) are drawn first, so nearer cones occlude them.  The raster keeps
a per-pixel owner map so the vision layer never needs the ground truth.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import GenerationError, ObjectNotFoundError

SCENE_FORMAT = "bishop-scene v1"

RASTER_SIZE = 512
BACKGROUND = -1

GREEN = "green"
PURPLE = "purple"
CLASS_COLOURS = {GREEN: (60, 170, 70), PURPLE: (140, 60, 160)}

# Board-top pixels are rendered 12% darker, board-bottom 12% brighter, standing
# in for distance from the light source.  Keeps per-object average colours
# spread enough for a non-degenerate Gaussian fit while classes stay separable.
LUMINANCE_AMPLITUDE = 0.12

# Cone footprint at depth scale 1.0, in pixels.
CONE_BASE_WIDTH = 26.0
CONE_HEIGHT = 34.0

MIN_SEPARATION = 0.04   # board units between cone centres
PLACEMENT_RETRIES = 200
VISIBILITY_RETRIES = 20

MAX_OBJECTS = 30


@dataclass(frozen=True)
class SceneObject:
    """One cone (or a composite hull object created by the vision layer)."""

    id: int
    x: float
    y: float
    colour: str | None = None
    members: tuple[int, ...] = ()

    @property
    def is_composite(self) -> bool:
        return bool(self.members)

    @property
    def board_pos(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Scene:
    seed: int
    width: int
    height: int
    objects: tuple[SceneObject, ...]

    def __post_init__(self):
        ids = [o.id for o in self.objects]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate object ids in scene")
        for o in self.objects:
            if not (0.0 <= o.x <= 1.0 and 0.0 <= o.y <= 1.0):
                raise ValueError(f"object {o.id} outside the unit board")

    def ids(self) -> list[int]:
        return [o.id for o in self.objects]

    def get(self, oid: int) -> SceneObject:
        for o in self.objects:
            if o.id == oid:
                return o
        raise ObjectNotFoundError(oid)

    def without(self, oid: int) -> "Scene":
        self.get(oid)
        return replace(self, objects=tuple(o for o in self.objects if o.id != oid))

    def to_document(self) -> dict:
        return {
            "format": SCENE_FORMAT,
            "seed": self.seed,
            "width": self.width,
            "height": self.height,
            "objects": [
                {"id": o.id, "x": o.x, "y": o.y, "colour": o.colour}
                for o in self.objects
            ],
        }

    @classmethod
    def from_document(cls, doc: dict) -> "Scene":
        if doc.get("format") != SCENE_FORMAT:
            raise ValueError(f"not a {SCENE_FORMAT} document")
        objects = tuple(
            SceneObject(id=int(o["id"]), x=float(o["x"]), y=float(o["y"]),
                        colour=o["colour"])
            for o in doc["objects"]
        )
        return cls(seed=int(doc["seed"]), width=int(doc["width"]),
                   height=int(doc["height"]), objects=objects)


@dataclass
class Raster:
    """Rendered image plus the per-pixel owner map."""

    rgb: np.ndarray       # (H, W, 3) uint8
    id_map: np.ndarray    # (H, W) int32, BACKGROUND for unowned pixels

    @property
    def width(self) -> int:
        return self.id_map.shape[1]

    @property
    def height(self) -> int:
        return self.id_map.shape[0]


@dataclass(frozen=True)
class SceneState:
    """Current scene plus exactly one step of removal history."""

    current: Scene
    raster: Raster = field(compare=False)
    previous: Scene | None = None
    previous_raster: Raster | None = field(default=None, compare=False)
    last_removed: int | None = None


def cone_polygon(obj: SceneObject, width: int, height: int) -> np.ndarray:
    """Triangle footprint of a cone in pixel coordinates, apex first.

    Base width and height scale with board y to fake perspective; the apex
    pokes above the base so a cone just behind another keeps visible pixels.
    """
    px = obj.x * (width - 1)
    py = obj.y * (height - 1)
    scale = 0.7 + 0.6 * obj.y
    w = CONE_BASE_WIDTH * scale
    h = CONE_HEIGHT * scale
    return np.array([
        [px, py - 2.0 * h / 3.0],
        [px - w / 2.0, py + h / 3.0],
        [px + w / 2.0, py + h / 3.0],
    ])


def _fill_triangle(rgb: np.ndarray, id_map: np.ndarray, verts: np.ndarray,
                   base_colour: tuple[int, int, int], oid: int) -> None:
    height, width = id_map.shape
    x0 = max(int(np.floor(verts[:, 0].min())), 0)
    x1 = min(int(np.ceil(verts[:, 0].max())), width - 1)
    y0 = max(int(np.floor(verts[:, 1].min())), 0)
    y1 = min(int(np.ceil(verts[:, 1].max())), height - 1)
    if x0 > x1 or y0 > y1:
        return
    xs, ys = np.meshgrid(np.arange(x0, x1 + 1), np.arange(y0, y1 + 1))

    def edge(a, b):
        return (b[0] - a[0]) * (ys - a[1]) - (b[1] - a[1]) * (xs - a[0])

    a, b, c = verts
    e0, e1, e2 = edge(a, b), edge(b, c), edge(c, a)
    inside = ((e0 >= 0) & (e1 >= 0) & (e2 >= 0)) | ((e0 <= 0) & (e1 <= 0) & (e2 <= 0))
    if not inside.any():
        return

    rows = ys[inside]
    cols = xs[inside]
    lum = 1.0 + LUMINANCE_AMPLITUDE * (2.0 * rows / (height - 1) - 1.0)
    colour = np.clip(np.outer(lum, np.asarray(base_colour, dtype=float)), 0, 255)
    rgb[rows, cols] = colour.astype(np.uint8)
    id_map[rows, cols] = oid


def render(scene: Scene) -> Raster:
    """Rasterize the scene back-to-front.  Pure function of the scene."""
    rgb = np.zeros((scene.height, scene.width, 3), dtype=np.uint8)
    id_map = np.full((scene.height, scene.width), BACKGROUND, dtype=np.int32)
    for obj in sorted(scene.objects, key=lambda o: (o.y, o.id)):
        verts = cone_polygon(obj, scene.width, scene.height)
        _fill_triangle(rgb, id_map, verts, CLASS_COLOURS[obj.colour], obj.id)
    return Raster(rgb=rgb, id_map=id_map)


def _place_objects(rng: np.random.Generator, n_objects: int) -> list[tuple[float, float]]:
    positions: list[tuple[float, float]] = []
    for _ in range(n_objects):
        for attempt in range(PLACEMENT_RETRIES):
            x, y = (round(float(v), 6) for v in rng.random(2))
            if all((x - px) ** 2 + (y - py) ** 2 >= MIN_SEPARATION ** 2
                   for px, py in positions):
                positions.append((x, y))
                break
        else:
            raise GenerationError(
                f"could not place object {len(positions)} after "
                f"{PLACEMENT_RETRIES} retries")
    return positions


def generate_scene(seed: int, n_objects: int = MAX_OBJECTS) -> SceneState:
    """Generate a fresh scene; deterministic in (seed, n_objects).

    Objects get uniform-random positions with a minimum centre separation,
    and an independent 50% chance of being green.  Scenes where rendering
    fully occludes an object are re-drawn from the same stream.
    """
    if not 1 <= n_objects <= MAX_OBJECTS:
        raise ValueError(f"n_objects must be in [1, {MAX_OBJECTS}], got {n_objects}")
    rng = np.random.default_rng(seed)
    for _ in range(VISIBILITY_RETRIES):
        colours = [GREEN if v < 0.5 else PURPLE for v in rng.random(n_objects)]
        positions = _place_objects(rng, n_objects)
        scene = Scene(
            seed=seed, width=RASTER_SIZE, height=RASTER_SIZE,
            objects=tuple(
                SceneObject(id=i, x=x, y=y, colour=c)
                for i, ((x, y), c) in enumerate(zip(positions, colours))
            ),
        )
        raster = render(scene)
        visible = set(np.unique(raster.id_map))
        if all(o.id in visible for o in scene.objects):
            return SceneState(current=scene, raster=raster)
    raise GenerationError(
        f"seed {seed} kept producing fully occluded objects")


def state_from_scene(scene: Scene) -> SceneState:
    return SceneState(current=scene, raster=render(scene))


def remove_object(state: SceneState, oid: int) -> SceneState:
    """Remove a base object; the old scene becomes the one-step history."""
    obj = state.current.get(oid)
    if obj.is_composite:
        raise ObjectNotFoundError(oid)
    new_scene = state.current.without(oid)
    return SceneState(
        current=new_scene,
        raster=render(new_scene),
        previous=state.current,
        previous_raster=state.raster,
        last_removed=oid,
    )


def dumps_scene(scene: Scene) -> str:
    return json.dumps(scene.to_document(), indent=2, sort_keys=True) + "\n"


def save_scene(scene: Scene, path: str | Path) -> None:
    Path(path).write_text(dumps_scene(scene))


def load_scene(path: str | Path) -> Scene:
    return Scene.from_document(json.loads(Path(path).read_text()))


def export_png(raster: Raster, path: str | Path, outline_id: int | None = None) -> None:
    """Debug view of the raster; optionally outlines one object in white."""
    from PIL import Image

    rgb = raster.rgb.copy()
    if outline_id is not None:
        mask = raster.id_map == outline_id
        edge = mask & ~(
            np.roll(mask, 1, 0) & np.roll(mask, -1, 0)
            & np.roll(mask, 1, 1) & np.roll(mask, -1, 1)
        )
        rgb[edge] = (255, 255, 255)
    Image.fromarray(rgb).save(str(path))
