"""Coefficient modules V(k, v) = tensor over embeddings of Sym^{k-2} twisted by det^v.

Monomials are indexed by the multidegree ``J = (j_1, ..., j_d)`` where ``j_s``
is the exponent of ``X_s`` in ``X_s^{j_s} Y_s^{k_s - 2 - j_s}``.  Storage is a
dense row-major list of p-adic coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .padic import Padic, PadicField


@dataclass(frozen=True)
class WeightData:
    k: tuple[int, ...]
    v: tuple[int, ...]
    w: int | None = None

    @classmethod
    def from_kw(cls, k, w):
        k = tuple(int(x) for x in k)
        if any(x < 2 for x in k):
            raise ValueError("weights k_i must be >= 2")
        if any((w - x) % 2 for x in k):
            raise ValueError(f"parity condition k_i = w mod 2 fails for k={k}, w={w}")
        return cls(k, tuple((w - x) // 2 for x in k), int(w))

    @classmethod
    def from_kv(cls, k, v):
        k, v = tuple(int(x) for x in k), tuple(int(x) for x in v)
        if len(k) != len(v):
            raise ValueError("k and v must have the same length")
        ws = {x + 2 * y for x, y in zip(k, v)}
        return cls(k, v, ws.pop() if len(ws) == 1 else None)

    @property
    def degrees(self):
        return tuple(x - 2 for x in self.k)

    @property
    def dims(self):
        return tuple(x - 1 for x in self.k)

    @property
    def dim(self):
        n = 1
        for x in self.dims:
            n *= x
        return n

    def indices(self):
        return list(itertools.product(*(range(n) for n in self.dims)))

    def to_json(self):
        return {"k": list(self.k), "v": list(self.v), "w": self.w}


def _flat(dims, J):
    i = 0
    for n, j in zip(dims, J):
        i = i * n + j
    return i


def _apply_axis(data, dims, axis, M):
    """Multiply the tensor ``data`` along ``axis`` by the square matrix ``M``."""
    n = dims[axis]
    inner = 1
    for x in dims[axis + 1:]:
        inner *= x
    outer = len(data) // (n * inner)
    out = list(data)
    for o in range(outer):
        for i in range(inner):
            col = [data[(o * n + r) * inner + i] for r in range(n)]
            for r in range(n):
                acc = None
                for s in range(n):
                    m = M[r][s]
                    if m is None:
                        continue
                    term = m * col[s]
                    acc = term if acc is None else acc + term
                out[(o * n + r) * inner + i] = acc if acc is not None else col[0] * 0
    return out


class CoeffModule:
    """The module V(k, v) over a p-adic field ``L`` containing the local field ``K``.

    ``K`` is the field of matrix entries; ``embed`` maps ``K`` into ``L`` and the
    embeddings sigma_i are ``embed o Frob^i``.
    """

    def __init__(self, weight: WeightData, K: PadicField, L: PadicField | None = None, embed=None):
        if len(weight.k) != K.d:
            raise ValueError(f"weight has {len(weight.k)} components, field has degree {K.d}")
        self.weight, self.K = weight, K
        self.L = L or K
        if embed is None:
            embed = (lambda x: x) if self.L == K else K.embedding_into(self.L)
        self._embed = embed
        self.dims = weight.dims
        self.dim = weight.dim

    def with_field(self, L, embed=None):
        return CoeffModule(self.weight, self.K, L, embed or self.K.embedding_into(L))

    def sigma(self, i: int, x: Padic) -> Padic:
        return self._embed(self.K.frobenius(self.K(x), i))

    # -- vectors -----------------------------------------------------------------

    def zero(self) -> "CoeffVector":
        return CoeffVector(self, [self.L.zero() for _ in range(self.dim)])

    def basis(self, J) -> "CoeffVector":
        data = [self.L.zero() for _ in range(self.dim)]
        data[_flat(self.dims, J)] = self.L.one()
        return CoeffVector(self, data)

    def from_list(self, values) -> "CoeffVector":
        if len(values) != self.dim:
            raise ValueError("wrong number of coefficients")
        return CoeffVector(self, [self.L(x) for x in values])

    def random(self, rng) -> "CoeffVector":
        return CoeffVector(self, [self.L(rng.randrange(-50, 50)) for _ in range(self.dim)])

    # -- matrices of the actions ------------------------------------------------

    def factor_matrix(self, i, g, right=False):
        """Matrix of g on the i-th factor, rows/cols indexed by the X-degree."""
        a, b, c, d = (self.sigma(i, x) for x in g)
        m = self.weight.degrees[i]
        v = self.weight.v[i]
        det = a * d - b * c
        scale = det**v if v else None
        M = [[self.L.zero() for _ in range(m + 1)] for _ in range(m + 1)]
        # g.(X^j Y^{m-j}) = (aX + cY)^j (bX + dY)^{m-j}
        for j in range(m + 1):
            poly = [self.L.one()]
            for factor, count in (((c, a), j), ((d, b), m - j)):
                for _ in range(count):
                    y_coef, x_coef = factor
                    new = [self.L.zero() for _ in range(len(poly) + 1)]
                    for deg, coef in enumerate(poly):
                        new[deg] = new[deg] + coef * y_coef
                        new[deg + 1] = new[deg + 1] + coef * x_coef
                    poly = new
            for jj, coef in enumerate(poly):
                M[jj][j] = coef * scale if scale is not None else coef
        if right:
            M = [list(row) for row in zip(*M)]
        return M

    def act(self, g, P: "CoeffVector") -> "CoeffVector":
        self._check_invertible(g)
        data = P.data
        for i in range(len(self.dims)):
            data = _apply_axis(data, self.dims, i, self.factor_matrix(i, g))
        return CoeffVector(self, data)

    def star_factor(self, g) -> Padic:
        """|det g|_p^{(w-2)/2} as an element of L."""
        w = self.weight.w
        if w is None:
            raise ValueError("star action needs a central weight w")
        det = self.K(g[0] * g[3] - g[1] * g[2])
        e2 = -self.K.d * det.valuation() * (w - 2)
        if e2 % 2:
            raise ValueError("|det|^((w-2)/2) is not a power of p: odd w needs an even determinant valuation")
        e = e2 // 2
        return self.L.p_power(e) if e < self.L.N else self.L.zero()

    def star_act(self, g, P: "CoeffVector") -> "CoeffVector":
        if self.weight.w == 2:
            return self.act(g, P)
        return self.act(g, P).scale(self.star_factor(g))

    def dual_act(self, Q: "CoeffVector", g) -> "CoeffVector":
        """Right action on the dual realisation, adjoint for the monomial pairing."""
        self._check_invertible(g)
        data = Q.data
        for i in range(len(self.dims)):
            data = _apply_axis(data, self.dims, i, self.factor_matrix(i, g, right=True))
        return CoeffVector(self, data)

    def _check_invertible(self, g):
        det = g[0] * g[3] - g[1] * g[2]
        if det.is_zero():
            raise ValueError("singular matrix")

    def phi_q(self, P: "CoeffVector") -> "CoeffVector":
        """P(X, Y) -> prod sigma(-pi)^{v} P(Y, sigma(pi) X) on each factor.

        The coefficient Frobenius enters through its d-th power, which is the
        identity on the unramified field, so the operator is L-linear.
        """
        L, p = self.L, self.K.p
        data = P.data
        prefactor = L.one()
        for i, (m, v) in enumerate(zip(self.weight.degrees, self.weight.v)):
            if v:
                prefactor = prefactor * L(-p) ** v
            M = [[None] * (m + 1) for _ in range(m + 1)]
            # X^j Y^{m-j} -> Y^j (pX)^{m-j}
            for j in range(m + 1):
                M[m - j][j] = L(p) ** (m - j)
            data = _apply_axis(data, self.dims, i, M)
        return CoeffVector(self, data).scale(prefactor)

    # -- pairings ------------------------------------------------------------------

    def pair(self, P: "CoeffVector", Q: "CoeffVector") -> Padic:
        """Coefficient of prod (X_s Y_s)^{k_s-2} in the product P*Q."""
        self._same(P, Q)
        degs = self.weight.degrees
        acc = self.L.zero()
        for J in self.weight.indices():
            Jc = tuple(m - j for m, j in zip(degs, J))
            acc = acc + P[J] * Q[Jc]
        return acc

    def dual_pair(self, Q: "CoeffVector", P: "CoeffVector") -> Padic:
        """<X^J Y^.., X^J' Y^..> = delta_{J J'}."""
        self._same(Q, P)
        acc = self.L.zero()
        for x, y in zip(Q.data, P.data):
            acc = acc + x * y
        return acc

    def _same(self, P, Q):
        if P.module.weight != Q.module.weight:
            raise ValueError("weight mismatch")


class CoeffVector:
    __slots__ = ("module", "data")

    def __init__(self, module: CoeffModule, data):
        self.module, self.data = module, list(data)

    def __getitem__(self, J):
        return self.data[_flat(self.module.dims, J)]

    def __add__(self, other):
        return CoeffVector(self.module, [x + y for x, y in zip(self.data, other.data)])

    def __sub__(self, other):
        return CoeffVector(self.module, [x - y for x, y in zip(self.data, other.data)])

    def __neg__(self):
        return CoeffVector(self.module, [-x for x in self.data])

    def scale(self, s):
        return CoeffVector(self.module, [s * x for x in self.data])

    def __eq__(self, other):
        return isinstance(other, CoeffVector) and all(x == y for x, y in zip(self.data, other.data))

    __hash__ = None

    def is_zero(self):
        return all(x.is_zero() for x in self.data)

    def valuation(self):
        return min(x.valuation() for x in self.data)

    def slice(self, axis, j):
        """Coefficients with the ``axis`` degree fixed to ``j`` (an element of the
        tensor product of the remaining factors, as a flat list)."""
        out = []
        for J in self.module.weight.indices():
            if J[axis] == j:
                out.append(self[J])
        return out

    def to_json(self):
        return {",".join(map(str, J)): str(self[J]) for J in self.module.weight.indices()}

    def __repr__(self):
        return f"CoeffVector({[str(x) for x in self.data]})"
