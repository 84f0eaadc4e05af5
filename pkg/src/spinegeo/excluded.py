"""Parameter sets outside the bundle gate, and the point-neighbourhood twist.

Five parameter patterns make the bundle gate fail in a recognisable way.
Four of them collapse to geometries where the point set is recoverable
anyway (the full Grassmann space, a single point, one star, one top).  The
fifth -- w = k, m = k-1, the neighbourhood of the point W -- genuinely
breaks reconstruction: scaling one star by a central collineation with
centre W induces a permutation of the lines that preserves both line
relations yet moves the pencil of lines through a point U inside that star
to a different vertex, so no relation-defined notion can recover points.
`build_homology_map` constructs that permutation and
`verify_counterexample` checks both halves exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gf import Subspace, apply_matrix, invert_matrix, subspace_sum
from .relations import LineRelationGraph
from .spine import STAR_ALPHA, SpineParams, SpineSpace, StrongSubspace, validate_params

CASE_GRASSMANN = "grassmann"
CASE_POINT = "single-point"
CASE_STAR = "star-space"
CASE_TOP = "top-space"
CASE_NEIGHBOURHOOD = "neighbourhood"
CASE_NONE = "none"


@dataclass(frozen=True)
class ExcludedCase:
    tag: str
    star_holds: bool | str  # True, or "unproved"/"unknown"
    detail: str


def classify_case(params: SpineParams) -> ExcludedCase:
    """Match the parameters against the five recognised boundary patterns.

    Outside those patterns the reconstruction status follows the bundle
    gate: provable when it holds, unknown when it fails.
    """
    n, k, m, w = params.space.n, params.k, params.m, params.w_dim
    if w == n:
        return ExcludedCase(CASE_GRASSMANN, True,
                            "W is the whole space; the fragment is the Grassmann space itself")
    if w == m == k:
        return ExcludedCase(CASE_POINT, True, "the whole geometry is the single point W")
    if w == m == k - 1:
        return ExcludedCase(CASE_STAR, True,
                            "the geometry is the star over W, a projective space")
    if w == k + 1 and m == k:
        return ExcludedCase(CASE_TOP, True,
                            "the geometry is the top inside W, a projective space")
    if w == k and m == k - 1:
        return ExcludedCase(CASE_NEIGHBOURHOOD, "unproved",
                            "the geometry is the neighbourhood of the point W;"
                            " a relation-preserving line map breaks bundles")
    gates = validate_params(params)
    if gates.bundle_gate:
        return ExcludedCase(CASE_NONE, True, "bundle gate holds")
    return ExcludedCase(CASE_NONE, "unknown", "bundle gate fails; status not classified")


@dataclass(frozen=True)
class LineMap:
    """A permutation of line ids induced by a point map supported on one star."""

    perm: tuple[int, ...]
    star_id: int
    scale: int
    moved: tuple[int, ...]

    def apply(self, line_id: int) -> int:
        return self.perm[line_id]


def build_homology_map(space: SpineSpace, star: StrongSubspace, scale: int) -> LineMap:
    """Line permutation from a central collineation of one star's closure.

    The star must be one of the neighbourhood case's stars, so its closure
    is a projective space punctured at W.  The collineation fixes the
    star's base pointwise, scales a chosen W-direction by `scale`, and
    fixes a complement pointwise; points outside the star stay put.  The
    induced line map fixes every line not inside the star, and moves
    exactly the lines of the star whose closure misses W.
    """
    params = space.params
    case = classify_case(params)
    if case.tag != CASE_NEIGHBOURHOOD:
        raise ValueError(f"parameters are in case {case.tag!r}, not the neighbourhood case")
    q, n = params.space.q, params.space.n
    if q < 3:
        raise ValueError("a nonidentity central collineation needs q >= 3")
    if not 1 < scale < q:
        raise ValueError(f"scale must lie in [2, q), got {scale}")
    if star.kind != STAR_ALPHA:
        raise ValueError("the neighbourhood case twist lives on a star")

    h = star.generator
    w = params.w
    # basis: rows of H, then a W-direction off H, then any complement
    basis = [list(r) for r in h.rows]
    w_vec = None
    for row in w.rows:
        cand = basis + [list(row)]
        from .gf import _rank

        if _rank(tuple(tuple(r) for r in cand), q, n) == len(basis) + 1:
            w_vec = list(row)
            break
    assert w_vec is not None
    basis.append(w_vec)
    from .gf import _rank

    for i in range(n):
        unit = [1 if j == i else 0 for j in range(n)]
        cand = basis + [unit]
        if _rank(tuple(tuple(r) for r in cand), q, n) == len(basis) + 1:
            basis.append(unit)
        if len(basis) == n:
            break
    b_mat = tuple(tuple(r) for r in basis)
    b_inv = invert_matrix(b_mat, q)
    d = [[0] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = scale if i == h.dim else 1
    # v -> v B^-1 D B  (fixes H and the complement, scales the W-direction)
    t_mat = _mat_mul(_mat_mul(b_inv, tuple(tuple(r) for r in d), q), b_mat, q)

    star_lines = set(star.line_ids)
    w_gid = space.gid_of[w.rows]
    perm = list(range(len(space.lines)))
    moved = []
    for lid in star_lines:
        ln = space.lines[lid]
        h_img = apply_matrix(ln.h, t_mat)
        b_img = apply_matrix(ln.b, t_mat)
        assert h_img == ln.h, "the star base must stay fixed"
        target = space.line_id_by_hb[(h_img.rows, b_img.rows)]
        perm[lid] = target
        if target != lid:
            moved.append(lid)
        # lines whose closure passes through the centre W are invariant;
        # so are the lines inside the axis, hence no converse assertion
        if w_gid in ln.closure_gids:
            assert target == lid
    assert sorted(perm) == list(range(len(space.lines))), "line map must be a bijection"
    return LineMap(tuple(perm), star.id, scale, tuple(sorted(moved)))


def _mat_mul(a, b, q):
    n = len(a)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            s = 0
            for l in range(n):
                s += a[i][l] * b[l][j]
            out[i][j] = s % q
    return out


def verify_counterexample(space: SpineSpace, lmap: LineMap,
                          pi_graph: LineRelationGraph,
                          rho_graph: LineRelationGraph) -> dict:
    """Check the twist preserves both relations yet breaks some bundle.

    (a) relation preservation is checked on every line pair for both
    relations; (b) a top through the twisted star is exhibited, whose
    shared line carries a point U with the star semibundle moved to a
    different vertex U' while the top semibundle stays put; (c) the image
    of the full line bundle at U is compared against every geometric
    bundle and matches none.
    """
    report: dict = {"checks": {}}
    perm = lmap.perm

    violations = 0
    n = len(perm)
    for name, graph in (("pi", pi_graph), ("rho", rho_graph)):
        bad = 0
        for i in range(graph.count):
            ri = graph.rows[i]
            target = 0
            for j in _bits(ri):
                target |= 1 << perm[j]
            if target != graph.rows[perm[i]]:
                bad += 1
        report["checks"][f"preserves_{name}"] = bad == 0
        violations += bad
    report["relation_violations"] = violations
    report["pairs_checked_per_relation"] = n * (n - 1) // 2

    star = space.strongs[lmap.star_id]
    sb = space.semibundles(min_p_dim=2)
    by_strong_vertex = {}
    for (sid, g), lines in sb.items():
        by_strong_vertex[(sid, g)] = lines

    witness = None
    for top in space.strongs:
        if top.kind not in ("alpha-top", "omega-top"):
            continue
        shared = star.point_pids & top.point_pids
        if not shared:
            continue
        shared_lines = set(star.line_ids) & set(top.line_ids)
        if not shared_lines:
            continue
        line_id = min(shared_lines)
        for pid in sorted(shared):
            gid = space.proper_gids[pid]
            k_star = by_strong_vertex.get((star.id, gid))
            k_top = by_strong_vertex.get((top.id, gid))
            if k_star is None or k_top is None:
                continue
            img_star = frozenset(perm[l] for l in k_star)
            img_top = frozenset(perm[l] for l in k_top)
            if img_top != k_top:
                continue
            if img_star != k_star:
                # find the vertex the star semibundle moved to
                moved_to = None
                for (sid, g2), lines in by_strong_vertex.items():
                    if sid == star.id and lines == img_star:
                        moved_to = g2
                        break
                if moved_to is not None and moved_to != gid:
                    witness = {
                        "top": top.id, "shared_line": line_id,
                        "vertex": pid, "vertex_gid": gid, "moved_to_gid": moved_to,
                    }
                    break
        if witness:
            break
    report["checks"]["semibundle_moved"] = witness is not None
    report["witness"] = witness

    bundle_broken = False
    if witness is not None:
        pid = witness["vertex"]
        gid = witness["vertex_gid"]
        bundle = {
            lid for lid in space.lines_through.get(gid, ())
            if pid in space.lines[lid].proper_pids
        }
        image = {perm[l] for l in bundle}
        all_bundles = set()
        for p2 in range(len(space.points)):
            g2 = space.proper_gids[p2]
            all_bundles.add(frozenset(
                lid for lid in space.lines_through.get(g2, ())
                if p2 in space.lines[lid].proper_pids
            ))
        bundle_broken = frozenset(image) not in all_bundles
        report["moved_bundle_size"] = len(bundle)
    report["checks"]["bundle_not_preserved"] = bundle_broken
    report["ok"] = all(report["checks"].values())
    return report


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
