"""Elementary transformations, strand tracking and the translation profile.

A move sequence owns a working graph; each rewrite produces a new validated
TorusGraph.  Strand identity is carried by anchors: a lifted dart
(dart, translate) known to lie on the tracked lift of the strand.  Local
rewrites deform strands inside a disk, so anchors parked on surviving darts
keep both their dart and their translate; all net translation enters through
the closing isomorphism.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from . import intlin, polygon as poly
from .groups import build_j, pair
from .spectral import discrete_abel_map
from .torusgraph import (
    BLACK,
    WHITE,
    TorusGraph,
    newton_polygon,
    resolve_graph,
)


class MoveError(ValueError):
    pass


class MoveNotApplicable(MoveError):
    pass


class NotQuadFace(MoveNotApplicable):
    pass


class WrongColorPattern(MoveNotApplicable):
    pass


class NotTwoValent(MoveNotApplicable):
    pass


class ClosingIsomorphismInvalid(MoveError):
    pass


class StrandMatchAmbiguous(MoveError):
    pass


def _fresh(g, candidate):
    if candidate in g.vertices or candidate in g.edges:
        raise MoveError("generated id %r collides with the graph" % candidate)
    return candidate


@dataclass
class MoveOutcome:
    graph: TorusGraph
    weights: dict
    removed_darts: set
    avoid_darts: set


def spider_move(g, weights, face_id, tag="sp"):
    """Urban renewal at a quadrilateral face.

    The face boundary is deleted; a new quadrilateral with opposite corner
    colors is joined to the old corners by weight-1 pendant edges, and each
    new side carries (opposite old side)/Delta with Delta = ac + bd.  The
    contract for this rewrite is the mutation/monodromy/spectral cross-check
    suite, not the formula itself.
    """
    face = g.face_by_id(face_id)
    darts = face.darts
    if len(darts) != 4:
        raise NotQuadFace("face %s has degree %d" % (face_id, len(darts)))
    corners = [g.dart_tail(d) for d in darts]
    if len(set(corners)) != 4:
        raise WrongColorPattern("face %s revisits a corner" % face_id)
    old_edges = [d[0] for d in darts]
    offsets = [(0, 0)]
    for d in darts[:3]:
        offsets.append(poly.vadd(offsets[-1], g.dart_disp(d)))

    vertices = dict(g.vertices)
    edges = {e: v for e, v in g.edges.items() if e not in old_edges}
    rotations = dict(g.rotations)
    new_weights = {e: w for e, w in weights.items() if e not in old_edges}

    n_ids, leg_ids, quad_ids = [], [], []
    for i in range(4):
        n_ids.append(_fresh(g, "%sn%d" % (tag, i)))
        leg_ids.append(_fresh(g, "%sl%d" % (tag, i)))
        quad_ids.append(_fresh(g, "%sq%d" % (tag, i)))
    for i in range(4):
        vertices[n_ids[i]] = WHITE if g.color(corners[i]) == BLACK else BLACK

    delta = weights[old_edges[0]] * weights[old_edges[2]] + weights[old_edges[1]] * weights[old_edges[3]]
    for i in range(4):
        ci, ni = corners[i], n_ids[i]
        if g.color(ci) == BLACK:
            edges[leg_ids[i]] = (ci, ni, (0, 0))
        else:
            edges[leg_ids[i]] = (ni, ci, (0, 0))
        new_weights[leg_ids[i]] = Fraction(1)
        na, nb = n_ids[i], n_ids[(i + 1) % 4]
        oa, ob = offsets[i], offsets[(i + 1) % 4]
        if vertices[na] == BLACK:
            edges[quad_ids[i]] = (na, nb, poly.vsub(oa, ob))
        else:
            edges[quad_ids[i]] = (nb, na, poly.vsub(ob, oa))
        new_weights[quad_ids[i]] = weights[old_edges[(i + 2) % 4]] / delta

    for i in range(4):
        ci = corners[i]
        e_out, e_in = old_edges[i], old_edges[(i - 1) % 4]
        rot = list(rotations[ci])
        idx = rot.index(e_in)
        if rot[(idx - 1) % len(rot)] != e_out:
            raise MoveNotApplicable("face edges are not adjacent at corner %s" % ci)
        others = [rot[(idx + 1 + t) % len(rot)] for t in range(len(rot) - 2)]
        rotations[ci] = tuple([leg_ids[i]] + others)
    for i in range(4):
        rotations[n_ids[i]] = (quad_ids[i], quad_ids[(i - 1) % 4], leg_ids[i])

    out = TorusGraph(vertices, edges, rotations)
    removed = {(e, s) for e in old_edges for s in (1, -1)}
    return MoveOutcome(graph=out, weights=new_weights, removed_darts=removed, avoid_darts=set())


def contract_vertex(g, weights, v, tag="ct"):
    """Shrink a 2-valent vertex, fusing its two neighbors.

    Weights on the two sides are rescaled by the opposite deleted edge's
    weight, which keeps every face variable and both torus monodromies
    unchanged (it is the matching-weight pushforward).
    """
    rot = g.rotations[v]
    if len(rot) != 2:
        raise NotTwoValent("%s has degree %d" % (v, len(rot)))
    f1, f2 = rot
    b1, w1, d1 = g.edges[f1]
    b2, w2, d2 = g.edges[f2]
    if g.color(v) == WHITE:
        u, x = b1, b2
        shift = poly.vsub(d2, d1)  # position of x relative to u
    else:
        u, x = w1, w2
        shift = poly.vsub(d1, d2)
    if u == x:
        raise NotTwoValent("both edges at %s reach the same neighbor" % v)

    merged = _fresh(g, "%sm" % tag)
    vertices = {k: c for k, c in g.vertices.items() if k not in (v, u, x)}
    vertices[merged] = g.color(u)

    edges = {}
    new_weights = {}
    for e, (b, w, d) in g.edges.items():
        if e in (f1, f2):
            continue
        wt = weights[e]
        if b == u or w == u:
            wt = wt * weights[f2]
        if b == x or w == x:
            wt = wt * weights[f1]
            d = poly.vsub(d, shift) if b == x else poly.vadd(d, shift)
        b = merged if b in (u, x) else b
        w = merged if w in (u, x) else w
        edges[e] = (b, w, d)
        new_weights[e] = wt

    def arc_after(vertex, skip):
        r = list(g.rotations[vertex])
        i = r.index(skip)
        return [r[(i + 1 + t) % len(r)] for t in range(len(r) - 1)]

    rotations = {k: r for k, r in g.rotations.items() if k not in (v, u, x)}
    rotations[merged] = tuple(arc_after(u, f1) + arc_after(x, f2))

    out = TorusGraph(vertices, edges, rotations)
    removed = {(e, s) for e in (f1, f2) for s in (1, -1)}
    avoid = set()
    for e in g.rotations[x]:
        if e not in (f1, f2):
            avoid.add((e, 1 if g.color(x) == WHITE else -1))
    return MoveOutcome(graph=out, weights=new_weights, removed_darts=removed, avoid_darts=avoid)


def contract_white(g, weights, v, tag="ct"):
    if g.color(v) != WHITE:
        raise NotTwoValent("%s is not white" % v)
    return contract_vertex(g, weights, v, tag)


def contract_black(g, weights, v, tag="ct"):
    if g.color(v) != BLACK:
        raise NotTwoValent("%s is not black" % v)
    return contract_vertex(g, weights, v, tag)


def expand_vertex(g, weights, v, first, second, tag="ex"):
    """Inverse of contract: split v in two along contiguous rotation arcs,
    joined through a fresh 2-valent vertex of the opposite color."""
    rot = list(g.rotations[v])
    if sorted(first + second) != sorted(rot):
        raise MoveNotApplicable("split arcs must partition the rotation at %s" % v)
    joined = list(first) + list(second)
    n = len(rot)
    if not any(all(joined[t] == rot[(i + t) % n] for t in range(n)) for i in range(n)):
        raise MoveNotApplicable("split arcs must be contiguous in the rotation at %s" % v)

    va, vb = _fresh(g, "%sa" % tag), _fresh(g, "%sb" % tag)
    mid = _fresh(g, "%sv" % tag)
    ea, eb = _fresh(g, "%se1" % tag), _fresh(g, "%se2" % tag)
    col = g.color(v)
    vertices = {k: c for k, c in g.vertices.items() if k != v}
    vertices[va] = vertices[vb] = col
    vertices[mid] = WHITE if col == BLACK else BLACK

    edges = {}
    for e, (b, w, d) in g.edges.items():
        b = va if (b == v and e in first) else (vb if b == v else b)
        w = va if (w == v and e in first) else (vb if w == v else w)
        edges[e] = (b, w, d)
    if col == BLACK:
        edges[ea] = (va, mid, (0, 0))
        edges[eb] = (vb, mid, (0, 0))
    else:
        edges[ea] = (mid, va, (0, 0))
        edges[eb] = (mid, vb, (0, 0))

    rotations = {k: r for k, r in g.rotations.items() if k != v}
    rotations[va] = tuple([ea] + list(first))
    rotations[vb] = tuple([eb] + list(second))
    rotations[mid] = (ea, eb)

    new_weights = dict(weights)
    new_weights[ea] = Fraction(1)
    new_weights[eb] = Fraction(1)
    out = TorusGraph(vertices, edges, rotations)
    return MoveOutcome(graph=out, weights=new_weights, removed_darts=set(), avoid_darts=set())


def mutate_x(epsilon, face_vars, k):
    """Face-variable mutation at face k, independent of any edge-level path.

    The exponent is read from the exchange form with the sign split of the
    standard X-mutation; the one-line formula without the split fails the
    urban-renewal cross-check, which is the authoritative contract here.
    """
    out = {}
    for f, x in face_vars.items():
        if f == k:
            out[f] = 1 / x
            continue
        e = epsilon[f][k]
        if e > 0:
            out[f] = x * (1 + 1 / face_vars[k]) ** (-e)
        elif e < 0:
            out[f] = x * (1 + face_vars[k]) ** (-e)
        else:
            out[f] = x
    return out


def mutate_epsilon(epsilon, k):
    """Standard exchange-matrix mutation at k."""
    out = {}
    for i in epsilon:
        out[i] = {}
        for j in epsilon[i]:
            if i == k or j == k:
                out[i][j] = -epsilon[i][j]
            else:
                a, b = epsilon[i][k], epsilon[k][j]
                out[i][j] = epsilon[i][j] + (abs(a) * b + a * abs(b)) // 2
    return out


# -- sequences ---------------------------------------------------------------


@dataclass
class Anchor:
    dart: tuple
    translate: tuple


@dataclass
class StrandFate:
    """Where a base strand ended up after closing: a lift of `target`."""

    target: str
    offset: tuple


@dataclass
class TranslationProfile:
    per_strand: dict
    per_edge: dict
    reduced: tuple

    def to_json(self):
        def frac(x):
            return str(x) if isinstance(x, Fraction) else x

        return {
            "per_strand": {k: frac(v) for k, v in sorted(self.per_strand.items())},
            "per_edge": {str(k): v for k, v in sorted(self.per_edge.items())},
            "reduced": list(self.reduced),
        }


@dataclass
class SequenceResult:
    base_graph: TorusGraph
    polygon: object
    labels: dict
    weights: dict
    profile: TranslationProfile
    fates: dict
    genus: int


class MoveScript:
    def __init__(self, graph, moves, closing):
        self.graph = graph
        self.moves = list(moves)
        self.closing = closing

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            data = json.load(data)
        return cls(graph=data["graph"], moves=data["moves"], closing=data["closing"])

    def to_json(self):
        return {"graph": self.graph, "moves": self.moves, "closing": self.closing}


def _advance_anchor(g, path, anchor, bad_darts, avoid_darts):
    """Move the anchor forward along its current path to a safe dart."""
    darts = path.darts
    i = darts.index(anchor.dart)
    translate = anchor.translate
    for _ in range(len(darts)):
        d = darts[i]
        if d not in bad_darts and d not in avoid_darts:
            return Anchor(dart=d, translate=translate)
        translate = poly.vadd(translate, g.dart_disp(d))
        i = (i + 1) % len(darts)
    raise StrandMatchAmbiguous("no surviving dart on path %s" % path.id)


def _apply_move(g, weights, move, tag):
    if "spider" in move:
        return spider_move(g, weights, move["spider"], tag=tag + "s")
    if "contract" in move:
        return contract_vertex(g, weights, move["contract"], tag=tag + "c")
    if "expand" in move:
        detail = move["expand"]
        return expand_vertex(
            g, weights, detail["vertex"], detail["first"], detail["second"], tag=tag + "x"
        )
    raise MoveNotApplicable("unknown move %r" % (move,))


def _check_closing(g_final, g_base, closing):
    vmap = dict(closing["vertex_map"])
    emap = dict(closing["edge_map"])
    tau = tuple(closing.get("translation", (0, 0)))
    if sorted(vmap) != sorted(g_final.vertices) or sorted(vmap.values()) != sorted(
        g_base.vertices
    ):
        raise ClosingIsomorphismInvalid("vertex map is not a bijection onto the base")
    if sorted(emap) != sorted(g_final.edges) or sorted(emap.values()) != sorted(g_base.edges):
        raise ClosingIsomorphismInvalid("edge map is not a bijection onto the base")
    for v, img in vmap.items():
        if g_final.color(v) != g_base.color(img):
            raise ClosingIsomorphismInvalid("color mismatch at %s" % v)
    for e, (b, w, _) in g_final.edges.items():
        ib, iw, _ = g_base.edges[emap[e]]
        if ib != vmap[b] or iw != vmap[w]:
            raise ClosingIsomorphismInvalid("incidence mismatch at edge %s" % e)
    for v, img in vmap.items():
        rot = [emap[e] for e in g_final.rotations[v]]
        target = list(g_base.rotations[img])
        n = len(target)
        if len(rot) != n or not any(
            all(rot[(i + t) % n] == target[t] for t in range(n)) for i in range(n)
        ):
            raise ClosingIsomorphismInvalid("rotation mismatch at %s" % v)
    # displacement compatibility: solve for the per-vertex deck correction
    start = min(g_final.vertices)
    kappa = {start: tau}
    queue = [start]
    while queue:
        v = queue.pop(0)
        for e in g_final.rotations[v]:
            b, w, d = g_final.edges[e]
            _, _, dd = g_base.edges[emap[e]]
            other = w if v == b else b
            # lifted edge (w, c) -> (b, c+d) maps to (W, c+k(w)) -> (B, c+k(w)+dd),
            # so k(b) - k(w) = dd - d.
            if v == b:
                want = poly.vsub(poly.vadd(kappa[v], d), dd)
            else:
                want = poly.vadd(poly.vsub(kappa[v], d), dd)
            if other in kappa:
                if kappa[other] != want:
                    raise ClosingIsomorphismInvalid(
                        "displacements are incompatible along edge %s" % e
                    )
            else:
                kappa[other] = want
                queue.append(other)
    return vmap, emap, kappa


def run_sequence(script, weights):
    """Push weights and strand anchors through the script and close up.

    Returns the translation profile: per-strand strip offsets, their family
    sums g(E_rho), and the canonical reduced class modulo j H_1.
    """
    base = resolve_graph(script.graph)
    if sorted(weights) != sorted(base.edges):
        raise MoveError("weights must cover exactly the base edges")
    if any(w == 0 for w in weights.values()):
        raise MoveError("weights must be nonzero")
    base_poly, labels = newton_polygon(base)
    anchors = {z.id: Anchor(dart=z.darts[0], translate=(0, 0)) for z in base.zigzags()}
    strand_class = {z.id: z.homology for z in base.zigzags()}

    g, w = base, dict(weights)
    for i, move in enumerate(script.moves):
        current = {zid: g.zigzag_by_id(g.zigzag_of_dart(a.dart)) for zid, a in anchors.items()}
        outcome = _apply_move(g, w, move, tag="m%d" % i)
        for zid, a in anchors.items():
            anchors[zid] = _advance_anchor(
                g, current[zid], a, outcome.removed_darts, outcome.avoid_darts
            )
        g, w = outcome.graph, outcome.weights
        seen = {}
        for zid, a in anchors.items():
            pid = g.zigzag_of_dart(a.dart)
            if pid in seen:
                raise StrandMatchAmbiguous(
                    "strands %s and %s merged after move %d" % (seen[pid], zid, i)
                )
            seen[pid] = zid
            if g.zigzag_by_id(pid).homology != strand_class[zid]:
                raise StrandMatchAmbiguous(
                    "strand %s changed homology class after move %d" % (zid, i)
                )

    vmap, emap, kappa = _check_closing(g, base, script.closing)
    final_weights = {emap[e]: wt for e, wt in w.items()}

    fates = {}
    for zid, a in anchors.items():
        e, s = a.dart
        tail = g.dart_tail(a.dart)
        mapped = (emap[e], s)
        c = poly.vadd(a.translate, kappa[tail])
        target = base.zigzag_of_dart(mapped)
        tz = base.zigzag_by_id(target)
        if tz.homology != strand_class[zid]:
            raise ClosingIsomorphismInvalid(
                "closing maps strand %s onto a different homology class" % zid
            )
        idx = tz.darts.index(mapped)
        offset = poly.vsub(c, tz.positions[idx])
        fates[zid] = StrandFate(target=target, offset=offset)

    profile = _profile_from_fates(base, base_poly, labels, fates)
    return SequenceResult(
        base_graph=base,
        polygon=base_poly,
        labels=labels,
        weights=final_weights,
        profile=profile,
        fates=fates,
        genus=poly.genus(base_poly),
    )


def _family_members(labels):
    fam = {}
    for zid, rho in labels.items():
        fam.setdefault(rho, []).append(zid)
    for members in fam.values():
        members.sort()
    return fam


def _black_tail_lift(g, z, translate):
    """A black vertex lying on the given lift of z, with its lift position."""
    for d, q in zip(z.darts, z.positions):
        if g.color(g.dart_tail(d)) == BLACK:
            return g.dart_tail(d), poly.vadd(q, translate)
    raise StrandMatchAmbiguous("path %s has no black vertex" % z.id)


def _profile_from_fates(base, base_poly, labels, fates):
    families = _family_members(labels)
    per_strand = {}
    abel = None
    for rho, members in families.items():
        k = len(members)
        permuted = any(fates[z].target != z for z in members)
        if not permuted:
            for z in members:
                h = base.zigzag_by_id(z).homology
                per_strand[z] = Fraction(pair(h, fates[z].offset))
        else:
            if abel is None:
                abel = discrete_abel_map(base)

            def family_index(path_id, translate):
                z = base.zigzag_by_id(path_id)
                v, lift = _black_tail_lift(base, z, translate)
                vals = abel.value(v, lift)
                return sum(vals[m] for m in members)

            shifts = []
            for z in members:
                f0 = family_index(z, (0, 0))
                f1 = family_index(fates[z].target, fates[z].offset)
                shifts.append(f1 - f0)
            if len(set(shifts)) != 1:
                raise StrandMatchAmbiguous(
                    "family %d does not translate rigidly: %r" % (rho, shifts)
                )
            for z in members:
                per_strand[z] = Fraction(shifts[0], k)
    per_edge = {}
    for rho, members in families.items():
        total = sum(per_strand[z] for z in members)
        if total.denominator != 1:
            raise StrandMatchAmbiguous("family sum for edge %d is not integral" % rho)
        per_edge[rho] = int(total)
    if sum(per_edge.values()) != 0:
        raise StrandMatchAmbiguous("family sums do not add to zero")

    n = len(base_poly.vertices)
    gvec = [per_edge.get(rho, 0) for rho in range(n)]
    b = [list(r) for r in build_j(base_poly).matrix]
    reduced = intlin.reduce_mod_image(gvec, b)
    return TranslationProfile(per_strand=per_strand, per_edge=per_edge, reduced=reduced)


def psi(result, polygon=None):
    """The reduced translation class in Z^{E_N}_0 / j H_1.

    A polygon may be passed to assert it is the Newton polygon the sequence
    was computed against (up to translation).
    """
    if polygon is not None and not poly.translation_equal(polygon, result.polygon):
        raise MoveError("sequence does not belong to the given polygon")
    return result.profile.reduced


def is_trivial(result):
    """Triviality of the cluster transformation, split by the genus case."""
    if result.genus >= 1:
        return all(c == 0 for c in result.profile.reduced)
    mults = [d.multiplicity for d in result.polygon.edge_data()]
    return all(
        result.profile.per_edge.get(rho, 0) % m == 0 for rho, m in enumerate(mults)
    )


def abel_shift(result, base_vertex=None):
    """The formal divisor d(w0) - d_t(w0) read off the strand fates.

    For each strand, the level of its tracked lift before and after the
    sequence is the coefficient of its own label in the Abel map at a black
    vertex on the lift; the shift collects the differences.  A translation
    by m yields exactly div chi^m.
    """
    base = result.base_graph
    abel = discrete_abel_map(base, base_vertex)
    shift = {}
    for zid, fate in result.fates.items():
        z0 = base.zigzag_by_id(zid)
        v0, q0 = _black_tail_lift(base, z0, (0, 0))
        level0 = abel.value(v0, q0)[zid]
        z1 = base.zigzag_by_id(fate.target)
        v1, q1 = _black_tail_lift(base, z1, fate.offset)
        level1 = abel.value(v1, q1)[fate.target]
        shift[zid] = level1 - level0
    if sum(shift.values()) != 0:
        raise StrandMatchAmbiguous("Abel shift has nonzero degree")
    return shift


def load_script(handle_or_dict):
    data = handle_or_dict
    if not isinstance(data, dict):
        data = json.load(data)
    return MoveScript.from_json(data)


# -- brute-force closing helper ------------------------------------------------


def find_closing_isomorphism(g_final, g_base, translation=(0, 0)):
    """Search for a closing isomorphism between desk-scale graphs.

    Returns a closing dict usable in a script, or None.  The search roots the
    map at one dart image and propagates through rotations, so it is linear
    per candidate root.
    """
    if len(g_final.vertices) != len(g_base.vertices) or len(g_final.edges) != len(
        g_base.edges
    ):
        return None
    e0 = min(g_final.edges)
    for be0 in sorted(g_base.edges):
        vmap, emap = {}, {}
        ok = True
        stack = [(e0, be0)]
        while stack and ok:
            e, be = stack.pop()
            if e in emap:
                ok = emap[e] == be
                continue
            emap[e] = be
            ends = list(zip(g_final.edges[e][:2], g_base.edges[be][:2]))
            for v, bv in ends:
                if v in vmap:
                    if vmap[v] != bv:
                        ok = False
                        break
                    continue
                rot, brot = g_final.rotations[v], g_base.rotations[bv]
                if len(rot) != len(brot):
                    ok = False
                    break
                vmap[v] = bv
                i, bi = rot.index(e), brot.index(be)
                for t in range(1, len(rot)):
                    stack.append((rot[(i + t) % len(rot)], brot[(bi + t) % len(brot)]))
        if not ok or len(vmap) != len(g_final.vertices) or len(emap) != len(g_final.edges):
            continue
        closing = {
            "vertex_map": vmap,
            "edge_map": emap,
            "translation": list(translation),
        }
        try:
            _check_closing(g_final, g_base, closing)
        except ClosingIsomorphismInvalid:
            continue
        return closing
    return None
