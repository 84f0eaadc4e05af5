#!/usr/bin/env python3
"""Build a spine space and look around.

Fix W inside GF(2)^6 with dim W = 3 and keep the 2-subspaces meeting W in
dimension exactly 1.  The surviving pencils of the ambient space of
2-subspaces are the lines; some keep all their points (projective lines),
some lose exactly one (affine lines).
"""

from collections import Counter

from spinegeo import build_spine, standard_params, validate_params

params = standard_params(q=2, n=6, k=2, m=1, w=3)
report = validate_params(params)
print("parameter gates:")
print("  basic validity :", report.basic)
print("  pencil gate    :", report.pencil_gate)
print("  bundle gate    :", report.bundle_gate)
for note in report.notes:
    print("   ", note)

space = build_spine(params)
print()
print(f"points: {len(space.points)} of {len(space.grass)} ambient 2-subspaces")
print(f"lines : {len(space.lines)}", dict(Counter(l.kind for l in space.lines)))

print()
print("maximal strong subspaces (projective dimension, removed dimension):")
for (kind, p, d), count in sorted(
    Counter((s.kind, s.p_dim, s.d_dim) for s in space.strongs).items()
):
    shape = "projective" if d == -1 else ("punctured" if d == 0 else "slit/affine")
    print(f"  {kind:12s} dim {p}, removed {d:2d} ({shape}): {count}")
for kind, why in space.void_classes.items():
    print(f"  {kind:12s} void: {why}")

planes = space.planes()
print()
print("planes:", dict(Counter(p.kind for p in planes)))
affine = next(p for p in planes if p.kind == "affine")
print("an affine plane keeps", len(affine.closure_gids) - len(affine.improper_gids),
      "of", len(affine.closure_gids), "points and", len(affine.line_ids), "lines")

pencils = space.pencils()
print()
print("line pencils:", len(pencils),
      f"({sum(1 for p in pencils if p.proper)} with a proper vertex)")
print("a pencil with an improper vertex on an affine plane has",
      min(len(p.line_ids) for p in pencils if not p.proper), "lines over GF(2)")
