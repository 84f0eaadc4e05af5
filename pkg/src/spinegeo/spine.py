"""Spine spaces: fragments of a Grassmann space cut out by a fixed subspace.

Fix W <= GF(q)^n with dim W = w.  The spine space with parameters (k, m)
keeps the k-subspaces U meeting W in dimension exactly m as proper points,
and the pencils of the ambient Grassmann space with at least two proper
points as lines.  Lines come in three classes (one affine, two projective), and the
maximal strong subspaces come in four classes (two star shapes, two top
shapes), each a projective space with a subspace removed ("slit" space).

The module also materialises planes and line pencils on demand, and runs
the two foundational structure checks used by the verification suite:
the star/top intersection dichotomy and the tripod span property.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .gf import (
    FieldSpec,
    Subspace,
    contains,
    dim_intersect,
    enumerate_between,
    enumerate_subspaces,
    full_subspace,
    intersect,
    rref,
    standard_tail_subspace,
    subspace_sum,
    zero_subspace,
    _rank,
)

LINE_AFFINE = "affine"
LINE_ALPHA = "alpha"
LINE_OMEGA = "omega"

STAR_OMEGA = "omega-star"
STAR_ALPHA = "alpha-star"
TOP_ALPHA = "alpha-top"
TOP_OMEGA = "omega-top"

PLANE_PROJECTIVE = "projective"
PLANE_PUNCTURED = "punctured"
PLANE_AFFINE = "affine"


@dataclass(frozen=True)
class SpineParams:
    """Parameters (q, n, k, m) plus the fixed reference subspace W."""

    space: FieldSpec
    k: int
    m: int
    w: Subspace

    @property
    def w_dim(self) -> int:
        return self.w.dim


def standard_params(q: int, n: int, k: int, m: int, w: int) -> SpineParams:
    """Parameters with W spanned by the last w standard basis vectors.

    The linear group acts transitively on w-subspaces, so the choice of W
    is irrelevant up to isomorphism; fixing it keeps runs reproducible.
    """
    space = FieldSpec(q, n)
    return SpineParams(space, k, m, standard_tail_subspace(space, w))


@dataclass
class GateReport:
    """Which of the construction gates the parameters satisfy.

    basic: the dimension inequalities making the point set well defined.
    pencil_gate: 3 <= n-k and 3 <= k-m, needed for the abstract recovery
        of line pencils to cover every plane.
    bundle_gate: (4 <= n-k and w != m+1) or (4 <= k-m and k != m+1), the
        hypothesis of the bundle-based point reconstruction.
    """

    basic: bool
    pencil_gate: bool
    bundle_gate: bool
    problems: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def validate_params(p: SpineParams) -> GateReport:
    n, k, m, w = p.space.n, p.k, p.m, p.w_dim
    problems = []
    if not 1 < k < n - 1:
        problems.append(f"need 1 < k < n-1, got k={k}, n={n}")
    if m < 0:
        problems.append(f"m = {m} is negative")
    if m > min(k, w):
        problems.append(f"m = {m} exceeds min(k, w) = {min(k, w)}")
    if m < k - (n - w):
        problems.append(f"m = {m} below k - codim(W) = {k - (n - w)}")
    pencil_gate = (n - k >= 3) and (k - m >= 3)
    bundle_gate = (n - k >= 4 and w != m + 1) or (k - m >= 4 and k != m + 1)
    notes = []
    if not pencil_gate:
        notes.append(f"pencil gate fails: need 3 <= n-k (= {n - k}) and 3 <= k-m (= {k - m})")
    if not bundle_gate:
        notes.append(
            f"bundle gate fails: need 4 <= n-k (= {n - k}) with w != m+1 (w = {w}),"
            f" or 4 <= k-m (= {k - m}) with k != m+1 (k = {k})"
        )
    return GateReport(not problems, pencil_gate, bundle_gate, problems, notes)


def classify_line(dh: int, db: int, m: int) -> str | None:
    """Line class from the dimensions in which the pencil bounds meet W.

    dh and db are the meet dimensions of H and B for a pencil p(H, B).
    Returns the class name, or None when the pencil has fewer than two
    proper points.
    """
    if dh == m and db == m + 1:
        return LINE_AFFINE
    if dh == m and db == m:
        return LINE_ALPHA
    if dh == m - 1 and db == m + 1:
        return LINE_OMEGA
    return None


@dataclass(frozen=True)
class SpineLine:
    id: int
    h: Subspace
    b: Subspace
    kind: str
    closure_gids: tuple[int, ...]  # the q+1 pencil members, proper or not
    proper_gids: tuple[int, ...]
    proper_pids: tuple[int, ...]
    improper_gid: int | None  # set exactly for affine lines


@dataclass(frozen=True)
class StrongSubspace:
    id: int
    kind: str
    generator: Subspace  # H for stars, B for tops
    point_pids: frozenset[int]
    closure_gids: frozenset[int]  # includes the removed (improper) part
    p_dim: int
    d_dim: int
    line_ids: tuple[int, ...]


@dataclass(frozen=True)
class PlaneInfo:
    id: int
    side: str  # "star" (H, Y) or "top" (Z, B)
    low: Subspace
    high: Subspace
    kind: str
    line_ids: tuple[int, ...]
    closure_gids: tuple[int, ...]
    improper_gids: tuple[int, ...]


@dataclass(frozen=True)
class GeoPencil:
    plane_id: int
    vertex_gid: int
    proper: bool
    line_ids: frozenset[int]


class SpineSpace:
    """A built spine space: point/line tables plus derived structure caches."""

    def __init__(self, params: SpineParams):
        self.params = params
        self.gates = validate_params(params)
        if not self.gates.basic:
            raise ValueError("invalid parameters: " + "; ".join(self.gates.problems))
        space, k, m, w = params.space, params.k, params.m, params.w
        full = full_subspace(space)

        # Tail-shaped W admits a cheap intersection dimension: U /\ W is the
        # kernel of the projection onto the leading n-w coordinates.
        head = space.n - w.dim
        self._tail_w = w == standard_tail_subspace(space, w.dim)

        def meet_w_dim(u: Subspace) -> int:
            if self._tail_w:
                proj = tuple(row[:head] for row in u.rows)
                return u.dim - _rank(proj, space.q, head)
            return dim_intersect(u, w)

        self.meet_w_dim = meet_w_dim

        self.grass: list[Subspace] = enumerate_subspaces(space, k)
        self.gid_of = {u.rows: i for i, u in enumerate(self.grass)}
        self.proper_gids: list[int] = [
            g for g, u in enumerate(self.grass) if meet_w_dim(u) == m
        ]
        self.pid_of_gid = {g: i for i, g in enumerate(self.proper_gids)}
        self.points: list[Subspace] = [self.grass[g] for g in self.proper_gids]

        self.lines: list[SpineLine] = []
        self.line_id_by_hb: dict[tuple, int] = {}
        lines_by_h: dict[tuple, list[int]] = {}
        lines_by_b: dict[tuple, list[int]] = {}
        for h in enumerate_subspaces(space, k - 1):
            dh = meet_w_dim(h)
            if dh not in (m - 1, m):
                continue
            for b in enumerate_between(h, full, k + 1):
                db = meet_w_dim(b)
                kind = classify_line(dh, db, m)
                if kind is None:
                    continue
                members = enumerate_between(h, b, k)
                closure = tuple(self.gid_of[u.rows] for u in members)
                proper = tuple(g for g in closure if g in self.pid_of_gid)
                improper = tuple(g for g in closure if g not in self.pid_of_gid)
                if kind == LINE_AFFINE:
                    assert len(improper) == 1
                    expected = subspace_sum(h, intersect(b, w))
                    assert self.grass[improper[0]] == expected
                    improper_gid = improper[0]
                else:
                    assert not improper
                    improper_gid = None
                assert len(proper) >= 2
                lid = len(self.lines)
                self.lines.append(
                    SpineLine(
                        lid, h, b, kind, closure,
                        proper, tuple(self.pid_of_gid[g] for g in proper),
                        improper_gid,
                    )
                )
                self.line_id_by_hb[(h.rows, b.rows)] = lid
                lines_by_h.setdefault(h.rows, []).append(lid)
                lines_by_b.setdefault(b.rows, []).append(lid)

        self.degenerate = not self.points or not self.lines

        self.lines_through: dict[int, tuple[int, ...]] = {}
        acc: dict[int, list[int]] = {}
        for ln in self.lines:
            for g in ln.closure_gids:
                acc.setdefault(g, []).append(ln.id)
        self.lines_through = {g: tuple(v) for g, v in acc.items()}

        self.strongs: list[StrongSubspace] = []
        self.void_classes: dict[str, str] = {}
        self.star_id_by_h: dict[tuple, int] = {}
        self.top_id_by_b: dict[tuple, int] = {}
        self._build_strong(lines_by_h, lines_by_b)

        self.star_of_line = [self.star_id_by_h.get(ln.h.rows) for ln in self.lines]
        self.top_of_line = [self.top_id_by_b.get(ln.b.rows) for ln in self.lines]

        self._planes: list[PlaneInfo] | None = None
        self._pencils: list[GeoPencil] | None = None

    # -- strong subspaces --------------------------------------------------

    def _build_strong(self, lines_by_h, lines_by_b):
        params = self.params
        space, k, m, w = params.space, params.k, params.m, params.w
        n, wd = space.n, w.dim
        full = full_subspace(space)
        specs = [
            (STAR_OMEGA, wd - m, -1),
            (STAR_ALPHA, n - k, wd - m - 1),
            (TOP_ALPHA, k - m, -1),
            (TOP_OMEGA, k, k - m - 1),
        ]
        for kind, p_dim, d_dim in specs:
            if p_dim < 2:
                self.void_classes[kind] = f"dimension {p_dim} < 2, not a maximal strong subspace"
                continue
            found = 0
            if kind == STAR_OMEGA:
                if m == 0:
                    self.void_classes[kind] = "no (k-1)-subspace meets W in dimension m-1 = -1"
                    continue
                for h in enumerate_subspaces(space, k - 1):
                    if self.meet_w_dim(h) != m - 1:
                        continue
                    closure = enumerate_between(h, subspace_sum(h, w), k)
                    found += self._add_strong(kind, h, closure, p_dim, d_dim,
                                              lines_by_h.get(h.rows, ()))
            elif kind == STAR_ALPHA:
                for h in enumerate_subspaces(space, k - 1):
                    if self.meet_w_dim(h) != m:
                        continue
                    closure = enumerate_between(h, full, k)
                    found += self._add_strong(kind, h, closure, p_dim, d_dim,
                                              lines_by_h.get(h.rows, ()))
            elif kind == TOP_ALPHA:
                for b in enumerate_subspaces(space, k + 1):
                    if self.meet_w_dim(b) != m:
                        continue
                    closure = enumerate_between(intersect(b, w), b, k)
                    found += self._add_strong(kind, b, closure, p_dim, d_dim,
                                              lines_by_b.get(b.rows, ()))
            else:  # TOP_OMEGA
                for b in enumerate_subspaces(space, k + 1):
                    if self.meet_w_dim(b) != m + 1:
                        continue
                    closure = enumerate_between(zero_subspace(space), b, k)
                    found += self._add_strong(kind, b, closure, p_dim, d_dim,
                                              lines_by_b.get(b.rows, ()))
            if not found:
                self.void_classes.setdefault(kind, "no generator subspace exists for these parameters")

    def _add_strong(self, kind, generator, closure_members, p_dim, d_dim, line_ids) -> int:
        closure_gids = frozenset(self.gid_of[u.rows] for u in closure_members)
        pids = frozenset(
            self.pid_of_gid[g] for g in closure_gids if g in self.pid_of_gid
        )
        if not pids:
            return 0
        sid = len(self.strongs)
        self.strongs.append(
            StrongSubspace(sid, kind, generator, pids, closure_gids, p_dim, d_dim,
                           tuple(line_ids))
        )
        if kind in (STAR_OMEGA, STAR_ALPHA):
            self.star_id_by_h[generator.rows] = sid
        else:
            self.top_id_by_b[generator.rows] = sid
        return 1

    # -- planes and pencils (built on demand, cached) ----------------------

    def planes(self) -> list[PlaneInfo]:
        if self._planes is None:
            self._planes = self._build_planes()
        return self._planes

    def _build_planes(self) -> list[PlaneInfo]:
        params = self.params
        space, k = params.space, params.k
        q = space.q
        full = full_subspace(space)
        zero = zero_subspace(space)
        seen: dict[tuple, None] = {}
        descriptors: list[tuple[str, Subspace, Subspace]] = []
        for ln in self.lines:
            if k + 2 <= space.n:
                for y in enumerate_between(ln.b, full, k + 2):
                    key = ("star", ln.h.rows, y.rows)
                    if key not in seen:
                        seen[key] = None
                        descriptors.append(("star", ln.h, y))
            if k - 2 >= 0:
                for z in enumerate_between(zero, ln.h, k - 2):
                    key = ("top", z.rows, ln.b.rows)
                    if key not in seen:
                        seen[key] = None
                        descriptors.append(("top", z, ln.b))
        planes: list[PlaneInfo] = []
        for side, low, high in descriptors:
            if side == "star":
                line_ids = [
                    self.line_id_by_hb[(low.rows, b.rows)]
                    for b in enumerate_between(low, high, k + 1)
                    if (low.rows, b.rows) in self.line_id_by_hb
                ]
            else:
                line_ids = [
                    self.line_id_by_hb[(h.rows, high.rows)]
                    for h in enumerate_between(low, high, k - 1)
                    if (h.rows, high.rows) in self.line_id_by_hb
                ]
            if len(line_ids) < 2:
                continue
            members = enumerate_between(low, high, k)
            closure = tuple(self.gid_of[u.rows] for u in members)
            improper = tuple(g for g in closure if g not in self.pid_of_gid)
            if len(improper) == 0:
                kind = PLANE_PROJECTIVE
            elif len(improper) == 1:
                kind = PLANE_PUNCTURED
            elif len(improper) == q + 1 and self._collinear_gids(improper):
                kind = PLANE_AFFINE
            else:
                raise RuntimeError(
                    f"unexpected plane fragment: {len(improper)} improper points "
                    f"on a plane with {len(line_ids)} lines"
                )
            planes.append(
                PlaneInfo(len(planes), side, low, high, kind,
                          tuple(sorted(line_ids)), closure, improper)
            )
        return planes

    def _collinear_gids(self, gids) -> bool:
        k = self.params.k
        subs = [self.grass[g] for g in gids]
        meet = subs[0]
        join = subs[0]
        for u in subs[1:]:
            meet = intersect(meet, u)
            join = subspace_sum(join, u)
        return meet.dim == k - 1 and join.dim == k + 1

    def pencils(self) -> list[GeoPencil]:
        """Every geometric pencil: lines of one plane through one closure point."""
        if self._pencils is None:
            out = []
            for plane in self.planes():
                line_closures = [
                    (lid, set(self.lines[lid].closure_gids)) for lid in plane.line_ids
                ]
                for g in plane.closure_gids:
                    members = frozenset(lid for lid, cl in line_closures if g in cl)
                    if len(members) >= 2:
                        out.append(
                            GeoPencil(plane.id, g, g in self.pid_of_gid, members)
                        )
            self._pencils = out
        return self._pencils

    def proper_pencil_sets(self) -> set[frozenset[int]]:
        return {p.line_ids for p in self.pencils() if p.proper}

    def semibundles(self, min_p_dim: int = 3) -> dict[tuple[int, int], frozenset[int]]:
        """Line sets L_U(X) keyed by (strong id, vertex gid), X at least min_p_dim."""
        out = {}
        for st in self.strongs:
            if st.p_dim < min_p_dim:
                continue
            bucket: dict[int, list[int]] = {}
            for lid in st.line_ids:
                for g in self.lines[lid].closure_gids:
                    bucket.setdefault(g, []).append(lid)
            for g, lids in bucket.items():
                if len(lids) >= 2:
                    out[(st.id, g)] = frozenset(lids)
        return out

    # -- foundational checks ------------------------------------------------

    def check_fact_intersections(self) -> dict:
        """Star/top intersection dichotomy, exhaustively over listed strongs.

        Two stars (or two tops) share at most a point.  A star and a top that
        are both projective share at most a point; otherwise they are disjoint
        or share exactly the proper point set of a line.
        """
        line_point_sets = {frozenset(ln.proper_pids): ln.id for ln in self.lines}
        stars = [s for s in self.strongs if s.kind in (STAR_OMEGA, STAR_ALPHA)]
        tops = [s for s in self.strongs if s.kind in (TOP_ALPHA, TOP_OMEGA)]
        violations = []
        checked = 0
        for fam in (stars, tops):
            for i in range(len(fam)):
                pi = fam[i].point_pids
                for j in range(i + 1, len(fam)):
                    checked += 1
                    inter = pi & fam[j].point_pids
                    if len(inter) > 1:
                        violations.append(
                            ("same-type", fam[i].id, fam[j].id, sorted(inter))
                        )
        for s in stars:
            s_proj = s.d_dim == -1
            for t in tops:
                checked += 1
                inter = s.point_pids & t.point_pids
                if s_proj and t.d_dim == -1:
                    if len(inter) > 1:
                        violations.append(("proj-star-top", s.id, t.id, sorted(inter)))
                else:
                    if inter and frozenset(inter) not in line_point_sets:
                        violations.append(("star-top", s.id, t.id, sorted(inter)))
        return {"pairs_checked": checked, "violations": violations, "ok": not violations}

    def check_tripod_span(self) -> dict:
        """Tripods (pairwise coplanar concurrent lines, not on a plane) span a
        listed star or top.

        Lines through a common closure point are pairwise coplanar iff they
        share their pencil base H or their pencil span B, and a same-base
        family contains a non-coplanar triple iff it does not fit in a single
        plane; in that case the common star (resp. top) must exist.
        """
        k = self.params.k
        q, n = self.params.space.q, self.params.space.n
        violations = []
        groups_with_tripods = 0
        for g, lids in self.lines_through.items():
            by_h: dict[tuple, list[int]] = {}
            by_b: dict[tuple, list[int]] = {}
            for lid in lids:
                by_h.setdefault(self.lines[lid].h.rows, []).append(lid)
                by_b.setdefault(self.lines[lid].b.rows, []).append(lid)
            for hrows, members in by_h.items():
                if len(members) < 3:
                    continue
                rows = []
                for lid in members:
                    rows.extend(self.lines[lid].b.rows)
                if _rank(tuple(rows), q, n) > k + 2:  # not all in one plane
                    groups_with_tripods += 1
                    if self.star_id_by_h.get(hrows) is None:
                        violations.append(("star", g, tuple(members)))
            for brows, members in by_b.items():
                if len(members) < 3:
                    continue
                meet = self.lines[members[0]].h
                for lid in members[1:]:
                    meet = intersect(meet, self.lines[lid].h)
                if meet.dim < k - 2:  # not all in one plane
                    groups_with_tripods += 1
                    if self.top_id_by_b.get(brows) is None:
                        violations.append(("top", g, tuple(members)))
        return {
            "vertices_checked": len(self.lines_through),
            "groups_with_tripods": groups_with_tripods,
            "violations": violations,
            "ok": not violations,
        }

    # -- export --------------------------------------------------------------

    def to_json(self) -> dict:
        """Space as a JSON document; canonical bases as row-major digit strings."""

        def digits(sub: Subspace) -> str:
            return "".join(str(x) for row in sub.rows for x in row)

        p = self.params
        return {
            "params": {"q": p.space.q, "n": p.space.n, "k": p.k, "m": p.m, "w": p.w_dim,
                       "w_basis": digits(p.w)},
            "points": [digits(self.grass[g]) for g in self.proper_gids],
            "lines": [
                {
                    "id": ln.id,
                    "kind": ln.kind,
                    "h": digits(ln.h),
                    "b": digits(ln.b),
                    "proper_points": list(ln.proper_pids),
                    "improper_point": (digits(self.grass[ln.improper_gid])
                                       if ln.improper_gid is not None else None),
                }
                for ln in self.lines
            ],
            "strong_subspaces": [
                {
                    "id": st.id,
                    "kind": st.kind,
                    "generator": digits(st.generator),
                    "points": sorted(st.point_pids),
                    "p_dim": st.p_dim,
                    "d_dim": st.d_dim,
                    "lines": sorted(st.line_ids),
                }
                for st in self.strongs
            ],
            "void_classes": dict(sorted(self.void_classes.items())),
        }


def build_spine(params: SpineParams) -> SpineSpace:
    """Construct the spine space; degenerate parameter sets flag rather than fail."""
    return SpineSpace(params)


def space_json_text(space: SpineSpace) -> str:
    return json.dumps(space.to_json(), sort_keys=True, indent=1) + "\n"
