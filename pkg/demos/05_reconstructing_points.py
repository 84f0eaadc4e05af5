#!/usr/bin/env python3
"""Reconstruct the point set from a stripped line relation -- and watch it
fail where the hypothesis silently breaks.

The pipeline: spanned cliques -> recovered pencils -> abstract dimension
-> the family of dimension->=3 cliques (the proper semibundles) -> glue
semibundles sharing a vertex -> bundles = points.

On (q=2, n=6, k=2, m=0, w=2) every line lies in a 4-dimensional star and
the reconstruction is exact for both relations.  On (q=2, n=6, k=2, m=1,
w=3) the bundle gate formula holds, yet one class of lines lives only in
dimension-2 strong subspaces: no bundle can contain those lines, so the
points come back perfectly but their incidences do not.  This demo runs
the small failing configuration; swap in the roomy one to see it succeed
(it takes a couple of minutes).
"""

from spinegeo import build_spine, compute_pi, standard_params, strip
from spinegeo.bundles import reconstruct, verify_equivalence
from spinegeo.pencils import derive_line_geometry, family_B

ROOMY = dict(q=2, n=6, k=2, m=0, w=2)   # reconstruction succeeds, both relations
PINCHED = dict(q=2, n=6, k=2, m=1, w=3)  # bijection yes, incidence no

space = build_spine(standard_params(**PINCHED))
pi = compute_pi(space)
stripped = strip(pi, seed=11)

geometry = derive_line_geometry(stripped.graph)
family = family_B(geometry)
print(f"semibundle family from the stripped graph: {len(family)} cliques")
recon = reconstruct(family, stripped.graph)
print(f"gluing classes -> {len(recon.points)} bundles "
      f"(transitive: {recon.transitive}) for {len(space.points)} points")

report = verify_equivalence(space, recon, stripped, family)
for check, ok in report["checks"].items():
    print(f"  {check:18s}: {'pass' if ok else 'FAIL'}")
if not report["checks"]["incidence"]:
    witness = report["incidence_witnesses"][0]
    print()
    print(f"point {witness['point']} misses {witness['missing_count']} of its lines,"
          f" all of kind {witness['missing_kinds']}: those lines lie only in"
          " dimension-2 strong subspaces, which no bundle can see.")
