import itertools

import pytest

from spinegeo.cliques import (
    KIND_AFFINE_SEMIFLAT,
    KIND_FLAT,
    KIND_PROJECTIVE_FLAT,
    KIND_PUNCTURED_SEMIFLAT,
    KIND_SEMIBUNDLE_IMPROPER,
    KIND_SEMIBUNDLE_PROPER,
    KIND_UNCLASSIFIED,
    bron_kerbosch,
    classify_clique,
    delta_n,
    family_K,
    family_from_masks,
    geometric_families,
    podmianka,
    span_clique,
)
from spinegeo.relations import bits_of
from spinegeo.spine import PLANE_AFFINE, PLANE_PROJECTIVE


def pencil_triple(space, proper=True, size=3):
    # use a pencil whose base plane extends into a >= 3-dimensional strong
    # subspace; only there does a line off the plane witness non-spanning
    planes = space.planes()
    for p in space.pencils():
        if p.proper != proper or len(p.line_ids) < size:
            continue
        plane = planes[p.plane_id]
        if plane.side == "star":
            host = space.star_id_by_h.get(plane.low.rows)
        else:
            host = space.top_id_by_b.get(plane.high.rows)
        if host is not None and space.strongs[host].p_dim >= 3:
            return tuple(sorted(p.line_ids))[:size]
    raise AssertionError("no such pencil")


def tripod_triple(space):
    # three lines through one point of a >= 3-dimensional strong subspace,
    # not all on a plane: members of a semibundle with three distinct spans
    for (sid, gid), lines in space.semibundles(min_p_dim=3).items():
        if gid not in space.pid_of_gid:
            continue
        by_b = {}
        for lid in sorted(lines):
            by_b.setdefault(space.lines[lid].b.rows, lid)
        if len(by_b) >= 3:
            return tuple(sorted(by_b.values())[:3]), sid, gid
    raise AssertionError("no tripod found")


# ---------- the spanning predicate ------------------------------------------------

def test_pencil_triples_do_not_span(cfg1_space, cfg1_pi):
    assert not delta_n(pencil_triple(cfg1_space), cfg1_pi)


def test_tripods_span(cfg1_space, cfg1_pi):
    tri, _, _ = tripod_triple(cfg1_space)
    assert delta_n(tri, cfg1_pi)


def test_pairs_never_span_under_the_pencil_gate(cfg3_pi):
    # the binary instance is empty when every plane extends into a
    # >= 3-dimensional strong subspace (cfg3); elsewhere a pair on a plane
    # that is itself maximal can have a clique neighbourhood
    checked = 0
    for i in range(0, cfg3_pi.count, 397):
        for j in bits_of(cfg3_pi.rows[i]):
            assert not delta_n((i, j), cfg3_pi)
            checked += 1
            break
    assert checked


def test_some_pairs_span_without_the_pencil_gate(cfg1_space, cfg1_pi):
    # two lines of a plane that is a maximal strong subspace: the common
    # neighbourhood is the rest of that plane, which is a clique
    plane = next(
        p for p in cfg1_space.planes()
        if p.side == "star" and cfg1_space.star_id_by_h.get(p.low.rows) is not None
        and cfg1_space.strongs[cfg1_space.star_id_by_h[p.low.rows]].p_dim == 2
    )
    a, b = plane.line_ids[:2]
    assert cfg1_pi.adjacent(a, b)
    assert delta_n((a, b), cfg1_pi)


def test_duplicates_do_not_span(cfg1_pi):
    i = next(iter(bits_of(cfg1_pi.rows[0])))
    assert not delta_n((0, 0, i), cfg1_pi)


def test_four_lines_can_span(cfg1_space, cfg1_pi):
    # the general-arity form: a tripod extended by a fourth semibundle line
    tri, sid, gid = tripod_triple(cfg1_space)
    lines = sorted(space_lines(cfg1_space, sid, gid))
    extra = next(l for l in lines if l not in tri)
    assert delta_n(tri + (extra,), cfg1_pi)


def space_lines(space, sid, gid):
    return [
        lid for lid in space.strongs[sid].line_ids
        if gid in space.lines[lid].closure_gids
    ]


# ---------- spans --------------------------------------------------------------------

def test_tripod_spans_its_semibundle(cfg1_space, cfg1_pi):
    tri, sid, gid = tripod_triple(cfg1_space)
    expected = frozenset(space_lines(cfg1_space, sid, gid))
    assert span_clique(*tri, cfg1_pi) == expected


def test_triangle_spans_its_flat(cfg1_space, cfg1_pi, cfg1_fams):
    plane = next(p for p in cfg1_space.planes() if p.kind == PLANE_PROJECTIVE)
    # three lines of the plane with no common point form a triangle
    tri = None
    for cand in itertools.combinations(plane.line_ids, 3):
        closures = [set(cfg1_space.lines[l].closure_gids) for l in cand]
        if not set.intersection(*closures):
            tri = cand
            break
    assert tri is not None
    assert span_clique(*tri, cfg1_pi) == frozenset(plane.line_ids)


def test_span_requires_a_spanning_triple(cfg1_space, cfg1_pi):
    with pytest.raises(ValueError):
        span_clique(*pencil_triple(cfg1_space), cfg1_pi)


def test_span_is_generator_independent(cfg1_pi):
    fam = family_K(cfg1_pi)
    for mem, mask in list(zip(fam.members, fam.masks))[::200]:
        spans = set()
        hits = 0
        for tri in itertools.combinations(mem, 3):
            if delta_n(tri, cfg1_pi):
                spans.add(span_clique(*tri, cfg1_pi))
                hits += 1
                if hits == 5:
                    break
        assert spans == {frozenset(mem)}


# ---------- families against the oracle ------------------------------------------------

def test_family_K_equals_bron_kerbosch_pi(cfg1_pi, cfg1_fams):
    spanned = {frozenset(m) for m in family_K(cfg1_pi).members}
    oracle = {frozenset(bits_of(m)) for m in bron_kerbosch(cfg1_pi)}
    assert spanned == oracle == cfg1_fams.pi_family


def test_family_K_equals_bron_kerbosch_rho(cfg1_rho, cfg1_fams):
    # over GF(2) even the affine semiflats are spanned: their single triple
    # has an empty common neighbourhood, which is vacuously a clique
    spanned = {frozenset(m) for m in family_K(cfg1_rho).members}
    oracle = {frozenset(bits_of(m)) for m in bron_kerbosch(cfg1_rho)}
    assert spanned == oracle == cfg1_fams.rho_family


def test_family_from_masks_verifies_and_certifies(cfg1_rho, cfg1_fams):
    masks = []
    for lines in sorted(cfg1_fams.rho_family, key=sorted):
        m = 0
        for l in lines:
            m |= 1 << l
        masks.append(m)
    fam = family_from_masks(cfg1_rho, masks)
    assert len(fam.masks) == len(masks)
    assert all(c is not None for c in fam.certificates)
    with pytest.raises(ValueError):
        family_from_masks(cfg1_rho, [masks[0] & (masks[0] - 1)])  # strict subset


def test_bron_kerbosch_cap():
    from spinegeo.relations import LineRelationGraph

    g = LineRelationGraph("pi", [0] * 10)
    with pytest.raises(ValueError):
        bron_kerbosch(g, max_lines=5)


# ---------- exchange and classification ---------------------------------------------

def test_exchange_flags_by_kind(cfg1_space, cfg1_rho, cfg1_fams):
    flags = {}
    for mask in bron_kerbosch(cfg1_rho):
        kind, _ = classify_clique(frozenset(bits_of(mask)), cfg1_space, cfg1_fams)
        flags.setdefault(kind, set()).add(podmianka(mask, cfg1_rho))
    assert flags[KIND_PROJECTIVE_FLAT] == {False}
    assert flags[KIND_SEMIBUNDLE_PROPER] == {False}
    assert flags[KIND_PUNCTURED_SEMIFLAT] == {True}
    # over GF(2) a direction selector has three lines; removing one leaves a
    # crossing pair whose only completion is the removed line itself, so the
    # affine semiflats fail the exchange here
    assert flags[KIND_AFFINE_SEMIFLAT] == {False}


def test_podmianka_rejects_non_maximal_input(cfg1_rho):
    mask = bron_kerbosch(cfg1_rho)[0]
    low = mask & -mask
    with pytest.raises(ValueError):
        podmianka(mask ^ low, cfg1_rho)


def test_every_maximal_clique_classifies(cfg1_space, cfg1_pi, cfg1_rho, cfg1_fams):
    for graph, expect in ((cfg1_pi, {KIND_PROJECTIVE_FLAT, KIND_FLAT,
                                     KIND_SEMIBUNDLE_PROPER, KIND_SEMIBUNDLE_IMPROPER}),
                          (cfg1_rho, {KIND_PROJECTIVE_FLAT, KIND_PUNCTURED_SEMIFLAT,
                                      KIND_AFFINE_SEMIFLAT, KIND_SEMIBUNDLE_PROPER})):
        kinds = set()
        for mask in bron_kerbosch(graph):
            kind, witness = classify_clique(frozenset(bits_of(mask)), cfg1_space, cfg1_fams)
            assert kind != KIND_UNCLASSIFIED
            kinds.add(kind)
        assert kinds == expect


def test_affine_semiflat_is_a_direction_selector(cfg1_space, cfg1_fams):
    lines = next(iter(
        s for s in cfg1_fams.rho_semiflats
        if classify_clique(s, cfg1_space, cfg1_fams)[0] == KIND_AFFINE_SEMIFLAT
    ))
    kind, pid = classify_clique(lines, cfg1_space, cfg1_fams)
    plane = cfg1_space.planes()[pid]
    assert plane.kind == PLANE_AFFINE
    directions = [cfg1_space.lines[l].improper_gid for l in lines]
    assert len(set(directions)) == len(lines)
    all_directions = {cfg1_space.lines[l].improper_gid for l in plane.line_ids}
    assert set(directions) == all_directions
