"""Cochains on the quotient graph, harmonic cocycles, group cohomology of free
groups, the Schneider map, the connecting map and the U_p operator.

Gamma-invariant functions on edges of the limit-set subtree are stored by
their values on the quotient edges; values on other tree edges are recovered
by walking the covering map from the anchor vertex (``Unfolder``).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .btree import TreeEdge, TreeVertex, adjugate, matinv, matmul
from .coeff import CoeffModule, CoeffVector
from .padic import INFINITY, PrecisionError
from .schottky import Component, reduce_word


class Unfolder:
    """Locates tree vertices/edges of T_Gamma as (quotient index, word)."""

    def __init__(self, comp: Component):
        self.comp = comp
        self.G, self.Q, self.T = comp.group, comp.graph, comp.group.tree
        self.anchor = self.Q.vertices[0]
        self._edge_target = []
        for e in self.Q.edges:
            self._edge_target.append(self.T.act(self.G.pmatrix(e.word), self.Q.vertices[e.terminus]))
        self._out = {i: self.Q.edges_from(i) for i in range(len(self.Q.vertices))}
        self._cache: dict[TreeVertex, tuple[int, tuple] | None] = {self.anchor: (0, ())}

    def _step(self, idx, word, y):
        """Move from the tree vertex word.vertices[idx] to its neighbour y."""
        # the adjugate gives the same tree map as the inverse without dividing by det
        y0 = self.T.act(adjugate(self.G.pmatrix(word)), y) if word else y
        for k in self._out[idx]:
            if self._edge_target[k] == y0:
                e = self.Q.edges[k]
                return e.terminus, reduce_word(word + e.word), k
        return None

    def locate(self, v: TreeVertex):
        if v in self._cache:
            return self._cache[v]
        path = self.T.path(self.anchor, v)
        # last cached vertex on the path
        start = max(i for i, x in enumerate(path) if x in self._cache)
        state = self._cache[path[start]]
        for x in path[start + 1:]:
            if state is None:
                self._cache[x] = None
                continue
            nxt = self._step(state[0], state[1], x)
            state = None if nxt is None else (nxt[0], nxt[1])
            self._cache[x] = state
        return self._cache[v]

    def locate_edge(self, e: TreeEdge):
        """(quotient edge index, word) with e = word . (lift of that edge), or None."""
        loc = self.locate(e.origin)
        if loc is None:
            return None
        nxt = self._step(loc[0], loc[1], e.terminus)
        if nxt is None:
            return None
        return nxt[2], loc[1]

    def in_limit_tree(self, e: TreeEdge) -> bool:
        return self.locate_edge(e) is not None

    def lift_edge(self, k: int) -> TreeEdge:
        e = self.Q.edges[k]
        return TreeEdge(self.Q.vertices[e.origin], self._edge_target[k])

    def limit_tree_edges_at_depth(self, depth: int) -> list[TreeEdge]:
        """Edges of T_Gamma from distance depth to depth+1 from the base vertex, oriented away."""
        T = self.T
        base = T.base
        if self.locate(base) is None:
            raise PrecisionError("the base vertex is not in the limit-set subtree; conjugate the group")
        frontier = [e for e in T.edges_from(base) if self.in_limit_tree(e)]
        for _ in range(depth):
            nxt = []
            for e in frontier:
                for w in T.neighbors(e.terminus):
                    if w != e.origin:
                        f = TreeEdge(e.terminus, w)
                        if self.in_limit_tree(f):
                            nxt.append(f)
            frontier = nxt
        return frontier


class CohomologyContext:
    """Everything attached to one component and one coefficient module."""

    def __init__(self, comp: Component, module: CoeffModule, up_scale=None):
        self.comp = comp
        self.module = module
        self.L = module.L
        self.G, self.Q, self.T = comp.group, comp.graph, comp.group.tree
        self.unfold = Unfolder(comp)
        self._star = {}
        self.up_scale = up_scale

    # -- group action -------------------------------------------------------

    def star_matrix(self, word):
        word = reduce_word(word)
        if word not in self._star:
            M = self.G.matrix(word)
            self._star[word] = self.star_of_matrix(M)
        return self._star[word]

    def star_of_matrix(self, M):
        mod = self.module
        cols = []
        for J in mod.weight.indices():
            cols.append(mod.star_act(M, mod.basis(J)).data)
        return linalg.transpose(cols)

    def star(self, word, v: CoeffVector) -> CoeffVector:
        if not word:
            return v
        return CoeffVector(self.module, linalg.matvec(self.star_matrix(word), v.data))

    # -- cochains ------------------------------------------------------------

    @property
    def n_edges(self):
        return len(self.Q.edges)

    @property
    def n_vertices(self):
        return len(self.Q.vertices)

    def zero_cochain(self):
        return [self.module.zero() for _ in range(self.n_edges)]

    def value(self, c, e: TreeEdge) -> CoeffVector:
        """Value of the Gamma-equivariant edge function c on any tree edge."""
        loc = self.unfold.locate_edge(e)
        if loc is None:
            return self.module.zero()
        k, word = loc
        return self.star(word, c[k])

    def vertex_value(self, f, v: TreeVertex) -> CoeffVector:
        loc = self.unfold.locate(v)
        if loc is None:
            raise ValueError("vertex outside the limit-set subtree")
        return self.star(loc[1], f[loc[0]])

    def boundary(self, f):
        """(df)(e) = f(o(e)) - f(t(e)) for a Gamma-invariant vertex function f."""
        out = []
        for e in self.Q.edges:
            out.append(f[e.origin] - self.star(e.word, f[e.terminus]))
        return out

    def _flatten(self, c):
        return [x for v in c for x in v.data]

    def _unflatten(self, x):
        n = self.module.dim
        return [CoeffVector(self.module, x[k * n:(k + 1) * n]) for k in range(self.n_edges)]

    def alternating_rows(self):
        """Rows expressing c(e) + word . c(reverse e) = 0."""
        n, L = self.module.dim, self.L
        rows = []
        done = set()
        for k, e in enumerate(self.Q.edges):
            if k in done:
                continue
            done.add(e.reverse)
            S = self.star_matrix(e.word)
            for a in range(n):
                row = [L.zero() for _ in range(n * self.n_edges)]
                row[k * n + a] = row[k * n + a] + L.one()
                for b in range(n):
                    row[e.reverse * n + b] = row[e.reverse * n + b] + S[a][b]
                rows.append(row)
        return rows

    def harmonic_rows(self):
        n, L = self.module.dim, self.L
        rows = []
        for i in range(self.n_vertices):
            for a in range(n):
                row = [L.zero() for _ in range(n * self.n_edges)]
                for k in self.Q.edges_from(i):
                    row[k * n + a] = L.one()
                rows.append(row)
        return rows

    def alternating_basis(self):
        """Basis of C^1(V)^Gamma (alternating, equivariant)."""
        return [self._unflatten(x) for x in linalg.kernel(self.alternating_rows())]

    def harmonic_basis(self):
        rows = self.alternating_rows() + self.harmonic_rows()
        return [self._unflatten(x) for x in linalg.kernel(rows)]

    def check_harmonic(self, c) -> int:
        """Smallest valuation among the defining conditions evaluated on c."""
        x = self._flatten(c)
        worst = INFINITY
        for row in self.alternating_rows() + self.harmonic_rows():
            acc = self.L.zero()
            for a, b in zip(row, x):
                if not a.is_zero():
                    acc = acc + a * b
            worst = min(worst, acc.known_valuation())
        return worst

    def coordinates(self, basis, c, zero_val=None):
        """Coordinates of c in the given list of cochains."""
        A = linalg.transpose([self._flatten(b) for b in basis])
        x, res = linalg.least_solve(A, self._flatten(c), zero_val)
        return x, res

    # -- group cohomology -------------------------------------------------------

    def coboundary_matrix(self):
        """v -> (gamma_i * v - v)_i, as an (r*dim) x dim matrix."""
        n = self.module.dim
        rows = []
        for i in range(1, self.G.rank + 1):
            S = self.star_matrix((i,))
            for a in range(n):
                rows.append([S[a][b] - (self.L.one() if a == b else self.L.zero()) for b in range(n)])
        return rows

    def coboundary(self, v: CoeffVector):
        return [self.star((i,), v) - v for i in range(1, self.G.rank + 1)]

    def h1_dimension(self) -> int:
        n = self.module.dim
        return self.G.rank * n - linalg.rank(self.coboundary_matrix())

    def invariants_dimension(self) -> int:
        B = self.coboundary_matrix()
        return self.module.dim - linalg.rank(B)

    def h1_equal(self, k1, k2, zero_val=None):
        """Decide whether two cocycles (values on generators) are cohomologous.

        Returns (equal, cobounding vector v with k1 - k2 = coboundary(v), residual valuation).
        """
        b = [x for a, c in zip(k1, k2) for x in (a - c).data]
        x, res = linalg.least_solve(self.coboundary_matrix(), b, zero_val)
        ok = res == INFINITY or (zero_val is not None and res >= zero_val)
        return ok, CoeffVector(self.module, x), res

    def cocycle_eval(self, values, word):
        """Evaluate a cocycle given on generators at an arbitrary word."""
        acc = self.module.zero()
        prefix: tuple = ()
        for x in word:
            if x > 0:
                term = values[x - 1]
            else:
                term = -self.star((x,), values[-x - 1])
            acc = acc + self.star(prefix, term)
            prefix = prefix + (x,)
        return acc

    # -- Schneider map and connecting map -----------------------------------

    def path_sum(self, c, v: TreeVertex, w: TreeVertex) -> CoeffVector:
        acc = self.module.zero()
        for e in self.T.geodesic(v, w):
            acc = acc + self.value(c, e)
        return acc

    def kappa_sch(self, c, v: TreeVertex | None = None):
        v = v or self.unfold.anchor
        return [self.path_sum(c, v, self.T.act(self.G.generators[i], v)) for i in range(self.G.rank)]

    def kappa_sch_word(self, c, word, v: TreeVertex | None = None):
        v = v or self.unfold.anchor
        return self.path_sum(c, v, self.T.act(self.G.pmatrix(word), v))

    def delta(self, c, v0: TreeVertex | None = None, v: TreeVertex | None = None):
        """Connecting map of 0 -> V -> C^0 -> C^1 -> 0.

        Lift c to F with dF = c and F(v0) = 0, i.e. F(x) = -(sum of c from v0 to x),
        and return gamma -> F(v) - gamma * F(gamma^-1 v).
        """
        Qv = self.Q.vertices
        v0 = v0 or Qv[-1]
        v = v or self.unfold.anchor

        def F(x):
            return -self.path_sum(c, v0, x)

        out = []
        for i in range(self.G.rank):
            x = self.T.act(adjugate(self.G.generators[i]), v)
            out.append(F(v) - self.star((i + 1,), F(x)))
        return out

    # -- Hecke operator at p ---------------------------------------------------

    def default_up_reps(self):
        K = self.G.K
        return [(K.p_power(1), r, K.zero(), K.one()) for r in K.residue_reps()]

    def check_up_reps(self, reps):
        T = self.T
        K = self.G.K
        base = T.base
        down = (K.one(), K.zero(), K.zero(), K.p_power(1))
        seen = set()
        parent = T.vertex_from_matrix(down)
        for b in reps:
            o = T.vertex_from_matrix(b)
            t = T.vertex_from_matrix(matmul(b, down))
            if t != base or not T.adjacent(o, base) or o == parent or o in seen:
                raise ValueError("U_p representatives do not form a coset decomposition")
            seen.add(o)
        if len(seen) != T.q:
            raise ValueError(f"need {T.q} U_p representatives, got {len(seen)}")

    def hecke_up(self, c, reps=None, scale=None):
        """Double-coset operator at p, computed through the form dictionary.

        An edge function c corresponds to f(g) = g^-1 * c(g e0), e0 the edge
        from the base vertex to its parent, so that c(e) = g_e * f(g_e).  Then
        (U f)(g) = sum_b b * f(g b) and the result is translated back and
        multiplied by ``scale`` (default q^{w/2}).
        """
        reps = reps or self.default_up_reps()
        self.check_up_reps(reps)
        if scale is None:
            scale = self.up_scale if self.up_scale is not None else self.default_up_scale()
        scale = self.L(scale)
        T, K = self.T, self.G.K
        down = (K.one(), K.zero(), K.zero(), K.p_power(1))
        mod = self.module
        out = []
        for k in range(self.n_edges):
            e = self.unfold.lift_edge(k)
            ge = T.edge_rep(e)
            acc = mod.zero()
            for b in reps:
                gb = matmul(ge, b)
                eb = TreeEdge(T.vertex_from_matrix(gb), T.vertex_from_matrix(matmul(gb, down)))
                val = self.value(c, eb)
                if val.is_zero():
                    continue
                f_gb = mod.star_act(matinv(gb), val)
                acc = acc + mod.star_act(ge, mod.star_act(b, f_gb))
            out.append(acc.scale(scale))
        return out

    def default_up_scale(self):
        w = self.module.weight.w
        return self.L(self.T.q) ** (w // 2) if w % 2 == 0 else self.L(self.T.q) ** w

    def operator_matrix(self, op, basis, zero_val=None):
        """Matrix of a linear operator on the span of ``basis`` (columns = images)."""
        cols = []
        worst = INFINITY
        for c in basis:
            x, res = self.coordinates(basis, op(c), zero_val)
            worst = min(worst, res)
            cols.append(x)
        return linalg.transpose(cols), worst


@dataclass
class CocycleReport:
    values: list
    def to_json(self):
        return [v.to_json() for v in self.values]
