"""The Bruhat-Tits tree of PGL(2, K) for an unramified p-adic field K.

A vertex is the lattice class spanned by the columns of [[p^n, u], [0, 1]].
The class only depends on n and on u modulo p^n, so vertices correspond to
balls B(u, n) = {t : v(t - u) >= n} in K.  The centre u is stored exactly as
p^-s * (c_0 + c_1 g + ...) with integer coefficients reduced mod p^(n+s).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .padic import INFINITY, Padic, PadicField, PrecisionError


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "oo"


#: the point at infinity of P^1(K)
OO = _Infinity()


@dataclass(frozen=True, order=True)
class TreeVertex:
    n: int
    s: int
    u: tuple[int, ...]

    def to_json(self):
        return {"n": self.n, "s": self.s, "u": list(self.u)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["n"]), int(obj.get("s", 0)), tuple(int(x) for x in obj["u"]))

    def __repr__(self):
        body = ",".join(map(str, self.u))
        return f"V({self.n}; {body}/p^{self.s})" if self.s else f"V({self.n}; {body})"


@dataclass(frozen=True, order=True)
class TreeEdge:
    origin: TreeVertex
    terminus: TreeVertex

    @property
    def reverse(self) -> "TreeEdge":
        return TreeEdge(self.terminus, self.origin)

    def to_json(self):
        return {"origin": self.origin.to_json(), "terminus": self.terminus.to_json()}

    @classmethod
    def from_json(cls, obj):
        return cls(TreeVertex.from_json(obj["origin"]), TreeVertex.from_json(obj["terminus"]))


@dataclass(frozen=True)
class BoundaryBall:
    """{t : v(t - centre) >= radius}, or its complement in P^1 when ``complement``."""

    center: TreeVertex  # the vertex whose ball is B(center, radius)
    complement: bool

    @property
    def radius(self) -> int:
        return self.center.n

    def to_json(self):
        return {"center": self.center.to_json(), "radius": self.radius, "complement": self.complement}


def matmul(A, B):
    a, b, c, d = A
    e, f, g, h = B
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def det(A):
    return A[0] * A[3] - A[1] * A[2]


def adjugate(A):
    a, b, c, d = A
    return (d, -b, -c, a)


def matinv(A):
    dt = det(A)
    if dt.is_zero():
        raise ZeroDivisionError("singular matrix")
    inv = dt.inverse()
    return (A[3] * inv, -A[1] * inv, -A[2] * inv, A[0] * inv)


def mobius(A, z):
    """Apply a 2x2 matrix to a point of P^1 (a Padic in any field containing the entries, or OO)."""
    a, b, c, d = A
    if z is OO:
        return OO if c.is_zero() else a / c
    den = c * z + d
    if den.is_zero():
        return OO
    return (a * z + b) / den


class BruhatTitsTree:
    """Exact combinatorics of the tree for ``K``; matrices are 4-tuples of Padic."""

    def __init__(self, K: PadicField):
        self.K = K
        self.p, self.d, self.q = K.p, K.d, K.q
        self.base = TreeVertex(0, 0, (0,) * K.d)
        self._embeds = {}

    # -- exact centres -------------------------------------------------------

    def _normal(self, n: int, s: int, coeffs) -> TreeVertex:
        p = self.p
        if n + s <= 0:
            return TreeVertex(n, 0, (0,) * self.d)
        m = p ** (n + s)
        coeffs = [c % m for c in coeffs]
        while s > 0 and all(c % p == 0 for c in coeffs):
            coeffs = [c // p for c in coeffs]
            s -= 1
        if n + s <= 0:
            return TreeVertex(n, 0, (0,) * self.d)
        return TreeVertex(n, s, tuple(coeffs))

    def _center_val_diff(self, v: TreeVertex, w: TreeVertex) -> float:
        """v_p(u_v - u_w) computed from the stored (truncated) centres."""
        S = max(v.s, w.s)
        diff = [a * self.p ** (S - v.s) - b * self.p ** (S - w.s) for a, b in zip(v.u, w.u)]
        if not any(diff):
            return INFINITY
        return min(_vp(x, self.p) for x in diff if x) - S

    def center(self, v: TreeVertex, field: PadicField | None = None) -> Padic:
        K = self.K
        if v.n + v.s <= 0 or not any(v.u):
            x = K.zero()
        else:
            x = K._make(0, v.u, K.N)
            x = x * K.p_power(-v.s) if v.s else x
        if field is None or field == K:
            return x
        return self._embedding(field)(x)

    def _embedding(self, field):
        if field not in self._embeds:
            self._embeds[field] = self.K.embedding_into(field)
        return self._embeds[field]

    def vertex(self, n: int, u) -> TreeVertex:
        """Vertex of the ball B(u, n); ``u`` a Padic known to absolute precision >= n."""
        if isinstance(u, int):
            u = self.K(u)
        if u.is_zero():
            if u.prec < n:
                raise PrecisionError(f"centre known to O(p^{u.prec}) but radius {n} requested")
            return self._normal(n, 0, (0,) * self.d)
        if u.prec < n:
            raise PrecisionError(f"centre known to O(p^{u.prec}) but radius {n} requested")
        s, coeffs = u.to_fraction_digits()
        return self._normal(n, s, coeffs)

    # -- matrices and vertices ---------------------------------------------

    def vertex_from_matrix(self, g) -> TreeVertex:
        """Normal form of the lattice class g * O^2."""
        a, b, c, d = (self.K(x) for x in g)
        dt = a * d - b * c
        if dt.is_zero():
            raise PrecisionError("matrix not invertible at working precision")
        # column operations: make the bottom row (0, d') with v(d') minimal
        if d.is_zero() or (not c.is_zero() and c.val < d.val):
            a, b, c, d = b, a, d, c
        n = dt.val - 2 * d.val
        u = b / d
        return self.vertex(n, u)

    def vertex_matrix(self, v: TreeVertex):
        K = self.K
        return (K.p_power(v.n), self.center(v), K.zero(), K.one())

    def act(self, g, v: TreeVertex) -> TreeVertex:
        return self.vertex_from_matrix(matmul(g, self.vertex_matrix(v)))

    def act_edge(self, g, e: TreeEdge) -> TreeEdge:
        return TreeEdge(self.act(g, e.origin), self.act(g, e.terminus))

    # -- adjacency -----------------------------------------------------------

    def parent(self, v: TreeVertex) -> TreeVertex:
        return self._normal(v.n - 1, v.s, v.u)

    def children(self, v: TreeVertex) -> list[TreeVertex]:
        p, n, s = self.p, v.n, v.s
        out = []
        step = p ** (n + s) if n + s >= 0 else None
        for r in itertools.product(range(p), repeat=self.d):
            if step is None:
                # u is 0 and the new digit sits at p^n with n < -s: rescale
                out.append(self._normal(n + 1, -n, r))
            else:
                coeffs = tuple(ui + ri * step for ui, ri in zip(v.u, r))
                out.append(self._normal(n + 1, s, coeffs))
        return out

    def neighbors(self, v: TreeVertex) -> list[TreeVertex]:
        return [self.parent(v)] + self.children(v)

    def is_child(self, parent: TreeVertex, child: TreeVertex) -> bool:
        return child.n == parent.n + 1 and self.parent(child) == parent

    def adjacent(self, v: TreeVertex, w: TreeVertex) -> bool:
        return self.is_child(v, w) or self.is_child(w, v)

    def ancestor(self, v: TreeVertex, level: int) -> TreeVertex:
        if level > v.n:
            raise ValueError("ancestor level above vertex level")
        return self._normal(level, v.s, v.u)

    def join_level(self, v: TreeVertex, w: TreeVertex) -> int:
        m = self._center_val_diff(v, w)
        j = min(v.n, w.n)
        return j if m == INFINITY else min(j, int(m))

    def distance(self, v: TreeVertex, w: TreeVertex) -> int:
        j = self.join_level(v, w)
        return v.n + w.n - 2 * j

    def path(self, v: TreeVertex, w: TreeVertex) -> list[TreeVertex]:
        j = self.join_level(v, w)
        up = [self.ancestor(v, level) for level in range(v.n, j - 1, -1)]
        down = [self.ancestor(w, level) for level in range(j + 1, w.n + 1)]
        return up + down

    def geodesic(self, v: TreeVertex, w: TreeVertex) -> list[TreeEdge]:
        verts = self.path(v, w)
        return [TreeEdge(a, b) for a, b in zip(verts, verts[1:])]

    def depth(self, v: TreeVertex) -> int:
        return self.distance(self.base, v)

    # -- edges -------------------------------------------------------------

    def edge_rep(self, e: TreeEdge):
        """g_e with g_e O^2 = L_o(e) and g_e (O + pO) = L_t(e)."""
        o, t = e.origin, e.terminus
        K = self.K
        M = self.vertex_matrix(o)
        if self.is_child(t, o):
            return M
        if not self.is_child(o, t):
            raise ValueError(f"{o} and {t} are not adjacent")
        # t = (n+1, u + r p^n): M * [[r, 1], [1, 0]]
        r = (self.center(t) - self.center(o)) * K.p_power(-o.n)
        k = (r, K.one(), K.one(), K.zero())
        return matmul(M, k)

    def edge_ball(self, e: TreeEdge) -> BoundaryBall:
        o, t = e.origin, e.terminus
        if self.is_child(o, t):
            return BoundaryBall(t, False)
        if self.is_child(t, o):
            return BoundaryBall(o, True)
        raise ValueError(f"{o} and {t} are not adjacent")

    def edges_from(self, v: TreeVertex) -> list[TreeEdge]:
        return [TreeEdge(v, w) for w in self.neighbors(v)]

    def covering(self, depth: int) -> list[TreeEdge]:
        """Edges from distance ``depth`` to ``depth+1`` from the base vertex."""
        if depth < 0:
            raise ValueError("depth must be >= 0")
        frontier = [TreeEdge(self.base, w) for w in self.neighbors(self.base)]
        for _ in range(depth):
            nxt = []
            for e in frontier:
                for w in self.neighbors(e.terminus):
                    if w != e.origin:
                        nxt.append(TreeEdge(e.terminus, w))
            frontier = nxt
        return frontier

    def bfs(self, start: TreeVertex, radius: int) -> Iterator[tuple[TreeVertex, int]]:
        seen = {start}
        queue = deque([(start, 0)])
        while queue:
            v, r = queue.popleft()
            yield v, r
            if r < radius:
                for w in self.neighbors(v):
                    if w not in seen:
                        seen.add(w)
                        queue.append((w, r + 1))

    # -- balls and points ----------------------------------------------------

    def in_ball(self, ball: BoundaryBall, t) -> bool:
        if t is OO:
            return ball.complement
        if not isinstance(t, Padic):
            t = self.K(t)
        diff = t - self.center(ball.center, t.ctx)
        inside = diff.is_zero() or diff.val >= ball.radius
        if diff.is_zero() and diff.prec < ball.radius:
            raise PrecisionError("point not known well enough to test membership")
        return inside != ball.complement

    def ball_contains(self, big: BoundaryBall, small: BoundaryBall) -> bool:
        """Set containment small subset of big, decided exactly."""
        a, b = small.center, big.center
        if not small.complement and not big.complement:
            return a.n >= b.n and self.join_level(a, b) >= b.n
        if not small.complement and big.complement:
            return self.join_level(a, b) < min(a.n, b.n)
        if small.complement and not big.complement:
            return False
        return b.n >= a.n and self.join_level(a, b) >= a.n

    def balls_disjoint(self, A: BoundaryBall, B: BoundaryBall) -> bool:
        if A.complement and B.complement:
            return False
        if A.complement:
            A, B = B, A
        if not B.complement:
            return self.join_level(A.center, B.center) < min(A.radius, B.radius)
        return self.ball_contains(BoundaryBall(B.center, False), A)

    def vertex_beyond(self, e: TreeEdge, v: TreeVertex) -> bool:
        """Whether v lies in the half-tree on the terminus side of e."""
        return self.distance(v, e.origin) == self.distance(v, e.terminus) + 1


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
