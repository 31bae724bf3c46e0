"""Expand one category into its instance grid and tile a contact sheet.

Instances vary a weight (scaling one affine component of every map), a
flip, and the 3x3 patch pattern. The sheet shows the first 40
instances: 5 weight rows x 8 columns spanning flips and patterns.
"""

from pathlib import Path

import numpy as np
from PIL import Image

from fdsl import RenderConfig, SearchConfig, enumerate_instances, render_instance, search_categories

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

category = search_categories(SearchConfig(category_count=1, seed=44))[0]
cfg = RenderConfig(width=128, height=128, point_count=50_000,
                   draw_mode="patch-fix")

instances = enumerate_instances(category, 200)
print(f"category 0 expands into {len(instances)} instances; first few:")
for inst in instances[:6]:
    weight = ("identity" if inst.weight.is_identity
              else f"{'abcdef'[inst.weight.target]}*{inst.weight.factor}")
    print(f"  instance {inst.instance_id}: weight {weight}, "
          f"flip {inst.flip}, patch variant {inst.patch_variant}")

cols, rows = 8, 5
sheet = Image.new("L", (cols * 128, rows * 128))
for k, inst in enumerate(instances[:cols * rows]):
    img = render_instance(category, inst, cfg)
    sheet.paste(Image.fromarray(np.asarray(img)), ((k % cols) * 128,
                                                   (k // cols) * 128))
sheet.save(OUT / "instance-sheet.png")
print(f"wrote {OUT}/instance-sheet.png ({cols}x{rows} tiles)")
