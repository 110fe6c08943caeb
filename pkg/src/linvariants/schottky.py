"""Schottky groups acting on the tree: ping-pong certificates, reduction to a
fundamental domain, the finite quotient of the subtree spanned by the limit
set, and JSON fixtures for externally supplied quotient data.

Group elements are words: tuples of nonzero integers, ``i`` for the i-th
generator (1-based) and ``-i`` for its inverse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .btree import OO, BoundaryBall, BruhatTitsTree, TreeEdge, TreeVertex, adjugate, det, matinv, matmul
from .padic import Padic, PadicField, PrecisionError


class SchottkyError(ValueError):
    """Rejected generators or inconsistent quotient data."""


# -- words -----------------------------------------------------------------------


def reduce_word(word) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse_word(word) -> tuple[int, ...]:
    return tuple(-x for x in reversed(word))


def word_str(word) -> str:
    return " ".join(f"g{x}" if x > 0 else f"g{-x}^-1" for x in word) or "1"


# -- hyperbolic elements -----------------------------------------------------------


@dataclass
class Hyperbolic:
    attracting: object  # Padic or OO
    repelling: object
    multiplier: Padic  # lambda_small / lambda_big, valuation = translation length
    length: int


def hyperbolic_data(g, K: PadicField) -> Hyperbolic:
    """Fixed points and translation length of a hyperbolic matrix over K."""
    a, b, c, d = g
    tr, dt = a + d, det(g)
    if dt.is_zero():
        raise SchottkyError("singular generator")
    if tr.is_zero() or 2 * tr.val >= dt.val:
        raise SchottkyError("generator is not hyperbolic: eigenvalue ratio is a unit")
    # dominant eigenvalue: fixed point of lam -> tr - det/lam starting at tr
    lam = tr
    for _ in range(4 * K.N + 8):
        nxt = tr - dt / lam
        if nxt == lam:
            break
        lam = nxt
    lam2 = dt / lam
    length = lam2.val - lam.val

    def fixed(l):
        v1 = (b, l - a)
        v2 = (l - d, c)
        cand = min((v1, v2), key=lambda v: min(v[0].valuation(), v[1].valuation()))
        x, y = cand
        return OO if y.is_zero() else x / y

    return Hyperbolic(fixed(lam), fixed(lam2), lam2 / lam, length)


# -- the group ---------------------------------------------------------------------


@dataclass
class PingPong:
    """Edge e_i with gamma_i(e_i) = f_i; D^- beyond the reverse of e_i, D^+ beyond f_i."""

    minus_edge: TreeEdge
    plus_edge: TreeEdge
    minus_ball: BoundaryBall
    plus_ball: BoundaryBall


class SchottkyGroup:
    def __init__(self, tree: BruhatTitsTree, generators, pingpong=None, hyperbolics=None):
        self.tree = tree
        self.K = tree.K
        self.generators = [tuple(self.K(x) for x in g) for g in generators]
        self.inverses = [matinv(g) for g in self.generators]
        self.rank = len(self.generators)
        self.pingpong: list[PingPong] | None = pingpong
        self.hyperbolics = hyperbolics
        self._word_cache: dict = {(): (self.K.one(), self.K.zero(), self.K.zero(), self.K.one())}
        self._pword_cache: dict = dict(self._word_cache)

    def letter(self, x: int):
        return self.generators[x - 1] if x > 0 else self.inverses[-x - 1]

    def matrix(self, word):
        word = tuple(word)
        if word in self._word_cache:
            return self._word_cache[word]
        M = matmul(self.matrix(word[:-1]), self.letter(word[-1]))
        if len(self._word_cache) < 20000:
            self._word_cache[word] = M
        return M

    def pmatrix(self, word):
        """A matrix with the same action on the tree and on P^1 as ``word``.

        Inverse letters enter as adjugates, so no division happens and long
        words keep their absolute precision.
        """
        word = tuple(word)
        if word in self._pword_cache:
            return self._pword_cache[word]
        x = word[-1]
        g = self.generators[x - 1] if x > 0 else adjugate(self.generators[-x - 1])
        M = matmul(self.pmatrix(word[:-1]), g)
        if len(self._pword_cache) < 20000:
            self._pword_cache[word] = M
        return M

    # -- fundamental domain ----------------------------------------------

    def _require_cert(self):
        if self.pingpong is None:
            raise SchottkyError("group has no ping-pong certificate")

    def in_domain(self, v: TreeVertex) -> bool:
        self._require_cert()
        T = self.tree
        return not any(
            T.vertex_beyond(pp.minus_edge.reverse, v) or T.vertex_beyond(pp.plus_edge, v) for pp in self.pingpong
        )

    def reduce_point(self, v: TreeVertex, budget: int = 10_000):
        """Return (representative in the fundamental domain, word) with v = word . rep."""
        self._require_cert()
        T = self.tree
        word: list[int] = []
        for _ in range(budget):
            for i, pp in enumerate(self.pingpong, start=1):
                if T.vertex_beyond(pp.plus_edge, v):
                    v = T.act(self.inverses[i - 1], v)
                    word.append(i)
                    break
                if T.vertex_beyond(pp.minus_edge.reverse, v):
                    v = T.act(self.generators[i - 1], v)
                    word.append(-i)
                    break
            else:
                return v, reduce_word(word)
        raise PrecisionError("reduction did not terminate within the budget")

    def boundary_balls(self):
        self._require_cert()
        out = []
        for pp in self.pingpong:
            out += [pp.minus_ball, pp.plus_ball]
        return out

    def edge_in_limit_tree(self, e: TreeEdge) -> bool:
        """For e leaving a vertex of the domain: both sides meet the limit set."""
        T = self.tree
        front, back = T.edge_ball(e), T.edge_ball(e.reverse)
        balls = self.boundary_balls()
        return any(T.ball_contains(front, B) for B in balls) and any(T.ball_contains(back, B) for B in balls)


def _axis_vertex(T: BruhatTitsTree, h: Hyperbolic, k: int, m: int):
    """k-th vertex of the axis, increasing towards the attracting end."""
    A, R = h.attracting, h.repelling
    if R is OO:
        return T.vertex(k, A)
    if A is OO:
        return T.vertex(-k, R)
    return T.vertex(m + k, A) if k >= 0 else T.vertex(m - k, R)


def verify_schottky(tree: BruhatTitsTree, generators, window: int = 2) -> SchottkyGroup:
    """Certify ping-pong position; raises SchottkyError naming the failure."""
    K = tree.K
    gens = []
    for g in generators:
        g = tuple(K(x) for x in g)
        if det(g).is_zero():
            raise SchottkyError("singular generator")
        gens.append(g)
    if not gens:
        raise SchottkyError("need at least one generator")
    hyps = []
    options = []
    for idx, g in enumerate(gens, start=1):
        try:
            h = hyperbolic_data(g, K)
        except SchottkyError as exc:
            raise SchottkyError(f"generator {idx}: {exc}") from None
        hyps.append(h)
        if h.attracting is not OO and h.repelling is not OO:
            m = (h.attracting - h.repelling).valuation()
            if m == float("inf"):
                raise SchottkyError(f"generator {idx}: fixed points collide at working precision")
        else:
            m = 0

        def ax(k, h=h, m=m):
            return _axis_vertex(tree, h, k, m)

        # projection of the base vertex onto the axis
        k = 0
        dist = tree.distance(tree.base, ax(0))
        while tree.distance(tree.base, ax(k + 1)) < dist:
            k += 1
            dist = tree.distance(tree.base, ax(k))
        while tree.distance(tree.base, ax(k - 1)) < dist:
            k -= 1
            dist = tree.distance(tree.base, ax(k))
        L = h.length
        centre = k - (L + 1) // 2
        cands = sorted(range(k - L - window, k + window + 1), key=lambda j: (abs(j - centre), j))
        opts = []
        for j in cands:
            e = TreeEdge(ax(j), ax(j + 1))
            f = TreeEdge(ax(j + L), ax(j + L + 1))
            if tree.act_edge(g, e) != f:
                raise SchottkyError(f"generator {idx}: axis translation check failed (precision too low?)")
            opts.append(PingPong(e, f, tree.edge_ball(e.reverse), tree.edge_ball(f)))
        options.append(opts)

    chosen: list[PingPong] = []

    def compatible(pp, others):
        if not tree.balls_disjoint(pp.minus_ball, pp.plus_ball):
            return False
        for o in others:
            for A in (pp.minus_ball, pp.plus_ball):
                for B in (o.minus_ball, o.plus_ball):
                    if not tree.balls_disjoint(A, B):
                        return False
        return True

    def search(i):
        if i == len(options):
            return True
        for pp in options[i]:
            if compatible(pp, chosen):
                chosen.append(pp)
                if search(i + 1):
                    return True
                chosen.pop()
        return False

    if not search(0):
        raise SchottkyError(_diagnose(tree, options))
    return SchottkyGroup(tree, gens, list(chosen), hyps)


def _diagnose(tree, options):
    for i, oi in enumerate(options, start=1):
        if not any(tree.balls_disjoint(pp.minus_ball, pp.plus_ball) for pp in oi):
            return f"generator {i}: its own ping-pong balls overlap"
    for i, oi in enumerate(options, start=1):
        for j, oj in enumerate(options[i:], start=i + 1):
            ok = any(
                all(tree.balls_disjoint(A, B) for A in (a.minus_ball, a.plus_ball) for B in (b.minus_ball, b.plus_ball))
                for a in oi
                for b in oj
            )
            if not ok:
                return f"ping-pong balls of generators {i} and {j} overlap"
    return "no simultaneous choice of disjoint ping-pong balls"


# -- quotient graph --------------------------------------------------------------


@dataclass(frozen=True)
class QuotientEdge:
    origin: int
    terminus: int
    word: tuple[int, ...]  # tree terminus = word . vertices[terminus]
    reverse: int


@dataclass
class QuotientGraph:
    """Finite graph Gamma \\ T_Gamma with gluing words; vertices[0] anchors the unfolding."""

    vertices: list[TreeVertex]
    edges: list[QuotientEdge]
    component_index: int = 1
    rank: int = 0
    meta: dict = field(default_factory=dict)

    def __eq__(self, other):
        return (
            isinstance(other, QuotientGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
            and self.component_index == other.component_index
        )

    def edges_from(self, i: int) -> list[int]:
        return [k for k, e in enumerate(self.edges) if e.origin == i]

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) // 2

    def valency(self, i: int) -> int:
        return len(self.edges_from(i))


def quotient_graph(G: SchottkyGroup, budget: int | None = None) -> QuotientGraph:
    """BFS over the part of the fundamental domain lying in the limit-set subtree."""
    T = G.tree
    if budget is None:
        budget = 10 * (T.q + 1) * T.q ** (G.rank + 2)
    if G.in_domain(T.base) and sum(G.edge_in_limit_tree(e) for e in T.edges_from(T.base)) >= 2:
        start = T.base
    else:
        start = G.pingpong[0].minus_edge.terminus
    index = {start: 0}
    verts = [start]
    raw = []  # (origin idx, tree terminus, terminus idx, word)
    i = 0
    while i < len(verts):
        w = verts[i]
        for e in T.edges_from(w):
            if not G.edge_in_limit_tree(e):
                continue
            rep, word = G.reduce_point(e.terminus)
            if rep not in index:
                if len(verts) >= budget:
                    raise SchottkyError(f"quotient BFS exceeded the vertex budget {budget}")
                index[rep] = len(verts)
                verts.append(rep)
            raw.append((i, e.terminus, index[rep], word))
        i += 1
    edges = []
    for k, (o, tt, t, word) in enumerate(raw):
        # reverse: from vertices[t] to word^-1 . vertices[o]
        back = T.act(G.pmatrix(inverse_word(word)), verts[o])
        rev = None
        for kk, (o2, tt2, t2, w2) in enumerate(raw):
            if o2 == t and tt2 == back:
                rev = kk
                break
        if rev is None:
            raise SchottkyError(f"edge {k}: reverse edge not found")
        edges.append(QuotientEdge(o, t, word, rev))
    Q = QuotientGraph(verts, edges, 1, G.rank)
    validate_graph(Q, G)
    return Q


def validate_graph(Q: QuotientGraph, G: SchottkyGroup):
    """Involution, gluing consistency, Euler characteristic and generation checks."""
    T = G.tree
    n = len(Q.vertices)
    for k, e in enumerate(Q.edges):
        if not (0 <= e.origin < n and 0 <= e.terminus < n):
            raise SchottkyError(f"edge {k}: vertex index out of range")
        if not (0 <= e.reverse < len(Q.edges)):
            raise SchottkyError(f"edge {k}: reverse index out of range")
        r = Q.edges[e.reverse]
        if r.reverse != k or r.origin != e.terminus or r.terminus != e.origin or e.reverse == k:
            raise SchottkyError(f"edge {k}: broken involution")
        if reduce_word(r.word) != reduce_word(inverse_word(e.word)):
            raise SchottkyError(f"edge {k}: reverse word is not the inverse gluing word")
        tt = T.act(G.pmatrix(e.word), Q.vertices[e.terminus])
        if not T.adjacent(Q.vertices[e.origin], tt):
            raise SchottkyError(f"edge {k}: gluing word {word_str(e.word)} does not map the terminus next to the origin")
    for i in range(n):
        if Q.valency(i) < 2:
            raise SchottkyError(f"vertex {i}: valency {Q.valency(i)} (the limit-set subtree has no leaves)")
    if Q.euler_characteristic() != 1 - G.rank:
        raise SchottkyError(f"Euler characteristic {Q.euler_characteristic()} != 1 - rank = {1 - G.rank}")
    letters = {abs(x) for e in Q.edges for x in e.word}
    if letters != set(range(1, G.rank + 1)):
        raise SchottkyError("gluing words do not involve every generator")
    # distinct tree neighbours out of each vertex
    for i in range(n):
        seen = set()
        for k in Q.edges_from(i):
            e = Q.edges[k]
            tt = T.act(G.pmatrix(e.word), Q.vertices[e.terminus])
            if tt in seen:
                raise SchottkyError(f"edge {k}: duplicates another edge out of vertex {i}")
            seen.add(tt)


# -- JSON fixtures -----------------------------------------------------------------


def matrix_to_json(g):
    return [str(x) for x in g]


def matrix_from_json(K: PadicField, obj):
    flat = obj if len(obj) == 4 and not isinstance(obj[0], list) else [x for row in obj for x in row]
    if len(flat) != 4:
        raise SchottkyError("a matrix needs four entries")
    return tuple(K(x) if not isinstance(x, str) or "O(" in x else _parse_scalar(K, x) for x in flat)


def _parse_scalar(K, text):
    from fractions import Fraction

    try:
        return K(Fraction(text))
    except ValueError:
        return K.parse(text)


def graph_to_json(Q: QuotientGraph, G: SchottkyGroup) -> dict:
    K = G.K
    return {
        "p": K.p,
        "d": K.d,
        "modulus": list(K.modulus),
        "rank": G.rank,
        "component_index": Q.component_index,
        "generators": [matrix_to_json(g) for g in G.generators],
        "vertices": [v.to_json() for v in Q.vertices],
        "edges": [
            {"id": k, "origin": e.origin, "terminus": e.terminus, "pairing_word": list(e.word), "reverse": e.reverse}
            for k, e in enumerate(Q.edges)
        ],
    }


@dataclass
class Component:
    group: SchottkyGroup
    graph: QuotientGraph
    label: str


def _component_from_json(obj, K: PadicField, tree: BruhatTitsTree, certify: bool) -> Component:
    gens = [matrix_from_json(K, g) for g in obj["generators"]]
    if int(obj.get("rank", len(gens))) != len(gens):
        raise SchottkyError("rank does not match the number of generators")
    G = verify_schottky(tree, gens) if certify else SchottkyGroup(tree, gens)
    verts = [TreeVertex.from_json(v) if isinstance(v, dict) else TreeVertex(int(v[0]), 0, tuple(v[1:])) for v in obj["vertices"]]
    edges = []
    raw = obj["edges"]
    for k, e in enumerate(raw):
        word = tuple(int(x) for x in e.get("pairing_word", []) or [])
        if "reverse" in e:
            rev = int(e["reverse"])
        else:
            rev = next(
                (
                    kk
                    for kk, f in enumerate(raw)
                    if f["origin"] == e["terminus"]
                    and f["terminus"] == e["origin"]
                    and reduce_word(tuple(f.get("pairing_word", []) or [])) == inverse_word(word)
                    and kk != k
                ),
                -1,
            )
        edges.append(QuotientEdge(int(e["origin"]), int(e["terminus"]), word, rev))
    Q = QuotientGraph(verts, edges, int(obj.get("component_index", 1)), len(gens))
    validate_graph(Q, G)
    return Component(G, Q, str(obj.get("label", f"component {Q.component_index}")))


def load_fixture(path, N: int = 40, certify: bool = True):
    """Read a fixture file: returns (K, tree, [Component], metadata)."""
    obj = json.loads(Path(path).read_text())
    return fixture_from_json(obj, N, certify)


def fixture_from_json(obj, N: int = 40, certify: bool = True):
    try:
        p, d = int(obj["p"]), int(obj.get("d", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchottkyError(f"malformed fixture: {exc}") from None
    K = PadicField(p, d, N, obj.get("modulus"))
    tree = BruhatTitsTree(K)
    comps_json = obj["components"] if "components" in obj else [obj]
    comps = []
    for c in comps_json:
        try:
            comps.append(_component_from_json(c, K, tree, certify))
        except KeyError as exc:
            raise SchottkyError(f"malformed fixture: missing {exc}") from None
    meta = {k: v for k, v in obj.items() if k not in ("components", "generators", "vertices", "edges")}
    return K, tree, comps, meta
