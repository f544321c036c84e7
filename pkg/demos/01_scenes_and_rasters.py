"""Generate a scene, render it, remove an object, and export a debug PNG."""

import numpy as np

from bishop import generate_scene, remove_object
from bishop.scene import dumps_scene, export_png

state = generate_scene(seed=7, n_objects=30)
scene = state.current

print("== scene generation ====================================")
print(f"objects: {len(scene.objects)}")
greens = sum(o.colour == "green" for o in scene.objects)
print(f"green/purple split: {greens}/{len(scene.objects) - greens}")
print("first three objects:")
for obj in scene.objects[:3]:
    print(f"  id={obj.id} pos=({obj.x:.3f}, {obj.y:.3f}) colour={obj.colour}")

print("\n== raster ==============================================")
print(f"size: {state.raster.width}x{state.raster.height}")
owned = (state.raster.id_map >= 0).sum()
print(f"foreground pixels: {owned} "
      f"({100 * owned / state.raster.id_map.size:.1f}% of the board)")
visible = np.unique(state.raster.id_map)
print(f"every object visible: {all(o.id in visible for o in scene.objects)}")

print("\n== removal history =====================================")
removed = scene.ids()[0]
after = remove_object(state, removed)
print(f"removed object {removed}")
print(f"current count: {len(after.current.objects)}, "
      f"previous count: {len(after.previous.objects)}")
print(f"last_removed: {after.last_removed}")

export_png(state.raster, "scene7.png", outline_id=removed)
print("\nwrote scene7.png (removed object outlined)")
print("\nscene file preview:")
print("\n".join(dumps_scene(scene).splitlines()[:8]), "...")
