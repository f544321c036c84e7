"""Walk through the raster-derived features: colours, centroids, groups,
hull composites, and the interpolated spatial direction measure."""

import numpy as np

from bishop import generate_scene
from bishop.vision import VisionContext

state = generate_scene(seed=42, n_objects=12)
vision = VisionContext(state.raster)
ids = vision.object_ids()

print("== per-object features =================================")
print(f"{'id':>3} {'avg RGB':>20} {'centroid (px)':>18}")
for oid in ids[:6]:
    rgb = vision.average_rgb(oid)
    c = vision.centroid(oid)
    print(f"{oid:>3} {np.round(rgb, 1)!s:>20} "
          f"({c[0]:7.1f}, {c[1]:7.1f})")

print("\n== pairwise distance ====================================")
a, b = ids[0], ids[1]
print(f"distance({a}, {b}) = {vision.distance(a, b):.1f} px "
      f"= {vision.board_distance(a, b):.3f} board units")

print("\n== threshold groups =====================================")
groups = vision.find_groups(ids)
print(f"threshold: {vision.group_distance_threshold} board units")
for g in groups:
    print(f"  group {g.id}: members={g.members} cohesion={g.cohesion:.3f}")
if not len(groups):
    print("  (no clusters in this scene)")

print("\n== hull composite =======================================")
if len(groups):
    comp = vision.make_composite(groups.groups[0].members)
    print(f"composite id={comp.id} members={comp.members} "
          f"hull pixels={len(vision.pixels(comp.id))}")

print("\n== spatial direction (AVS) ==============================")
t, l = ids[0], ids[1]
for lam in (0.0, 0.7, 1.0):
    v = VisionContext(state.raster, avs_lambda=lam).avs_direction(t, l)
    print(f"  lambda={lam:.1f}: direction=({v[0]:+.3f}, {v[1]:+.3f})")
for name in ("left", "right", "behind", "front"):
    print(f"  score[{name}]({t} rel {l}) = "
          f"{vision.spatial_score(t, l, name):.3f}")
