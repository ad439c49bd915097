"""Run every preset and print the predicted and observed wave structure.

Writes each experiment below ./gallery/<name>/ and prints one line per preset.

    python demos/figure_gallery.py [jobs]
"""

import sys
from dataclasses import replace

from vgcg.harness.presets import names, preset
from vgcg.harness.runner import batch

jobs = int(sys.argv[1]) if len(sys.argv) > 1 else 4
exps = [replace(preset(n), out_dir=f"gallery/{n}") for n in names()]
print(f"{'preset':40s} {'region':10s} {'predicted':11s} {'observed':14s} match")
for man in batch(exps, jobs):
    v = man.verdicts
    lab = v.get("classify", {}).get("label_t0", "-")
    w = v.get("waveid")
    if w:
        print(f"{man.name:40s} {lab:10s} {w['predicted']:11s} {' '.join(w['sequence']) or '-':14s} {w['match']}")
    else:
        d = v.get("delta", {})
        print(f"{man.name:40s} {lab:10s} {'-':11s} {'delta only':14s} residual ok {d.get('residual_ok')}")
    for e in man.errors:
        print(f"    {e['analysis']}: {e['kind']}: {e['message']}")
