"""Boundary distributions of harmonic cocycles and Coleman integration by
Riemann sums.

For the tau-th factor, the moments of mu_c on the ball U(e) are read off
c(e): the integral of t^j is the slice of c(e) at X_tau-degree j divided by
binom(k_tau - 2, j); it lives in the tensor product of the other factors,
stored as a flat list.  A covering of P^1(K) by the limit-set edges at a
fixed depth turns integrals into finite sums: on each ball the integrand is
replaced by its Taylor polynomial of degree k_tau - 2 at the centre, which is
paired exactly with the moments.  Balls containing infinity are handled in
the chart s = 1/(t - a).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .btree import TreeEdge, mobius
from .cohom import CohomologyContext
from .coeff import CoeffVector
from .padic import INFINITY, Padic, PadicField, PrecisionError


@dataclass
class Ball:
    edge: TreeEdge
    center: Padic  # in L, already twisted by the embedding sigma_tau
    complement: bool
    location: tuple  # (quotient edge index, word)
    level: int


# -- truncated power series over L ------------------------------------------


def _ps_mul(a, b, n):
    out = [None] * n
    for i, x in enumerate(a[:n]):
        if x.is_zero():
            continue
        for j, y in enumerate(b[: n - i]):
            t = x * y
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    zero = a[0] * 0
    return [zero if x is None else x for x in out]


def _log_one_minus(x, n, L):
    """Coefficients of log(1 - x s) up to degree n - 1."""
    out = [L.zero()]
    pw = L.one()
    for m in range(1, n):
        pw = pw * x
        out.append(-pw / L(m))
    return out


def _binomial_series(a, j, n, L):
    """Coefficients of (1 + a s)^j up to degree n - 1."""
    out = []
    for m in range(n):
        out.append(L(comb(j, m)) * a**m if m <= j else L.zero())
    return out


def _shift(series, k, n, L):
    """Multiply by s^k (k >= 0), truncated to n terms."""
    return ([L.zero()] * k + list(series))[:n]


def default_base_point(L: PadicField, K: PadicField) -> Padic:
    """A Teichmuller unit of L whose residue lies outside the residue field of K."""
    if L.d <= K.d:
        raise ValueError("base point needs a proper unramified extension")
    for r in L.residue_reps():
        if r.is_zero():
            continue
        t = r.teichmuller()
        # residue not in F_{q_K}: t^{q_K} != t
        if not (t ** K.q - t).is_zero() and (t ** K.q - t).valuation() == 0:
            return t
    raise ValueError("no suitable base point")


class Integrator:
    """Riemann sums for one cohomology context, embedding tau and depth."""

    def __init__(self, ctx: CohomologyContext, depth: int, tau: int = 0, z0: Padic | None = None,
                 log_p: Padic | None = None):
        self.ctx = ctx
        self.mod = ctx.module
        self.L = ctx.L
        self.K = ctx.G.K
        self.T = ctx.T
        self.tau = tau
        self.depth = depth
        self.m = self.mod.weight.degrees[tau]
        self.z0 = z0 if z0 is not None else default_base_point(self.L, self.K)
        self._balls = None
        # branch of the logarithm: log(p) = log_p, Iwasawa when None
        self.log_p = log_p

    def log(self, x: Padic) -> Padic:
        out = x.log()
        if self.log_p is not None and x.valuation():
            out = out + self.log_p * self.L(x.valuation())
        return out

    # -- covering ----------------------------------------------------------------

    def balls(self) -> list[Ball]:
        if self._balls is None:
            out = []
            for e in self.ctx.unfold.limit_tree_edges_at_depth(self.depth):
                out.append(self.ball_of(e))
            self._balls = out
        return self._balls

    def ball_of(self, e: TreeEdge) -> Ball:
        B = self.T.edge_ball(e)
        loc = self.ctx.unfold.locate_edge(e)
        a = self.mod.sigma(self.tau, self.T.center(B.center))
        return Ball(e, a, B.complement, loc, B.radius)

    # -- moments -------------------------------------------------------------------

    def raw_moments(self, value: CoeffVector):
        """[int t^j dmu for j <= k_tau - 2], each a flat list over the other factors."""
        out = []
        for j in range(self.m + 1):
            b = self.L(comb(self.m, j))
            out.append([x / b for x in value.slice(self.tau, j)])
        return out

    def recentred(self, raw, a):
        """int (t - a)^n dmu from the raw moments, by binomial expansion."""
        L = self.L
        out = []
        for n in range(self.m + 1):
            acc = [L.zero() for _ in raw[0]]
            for i in range(n + 1):
                coef = L(comb(n, i)) * (-a) ** (n - i)
                acc = [x + coef * y for x, y in zip(acc, raw[i])]
            out.append(acc)
        return out

    def ball_value(self, c, ball: Ball) -> CoeffVector:
        if ball.location is None:
            return self.mod.zero()
        k, word = ball.location
        return self.ctx.star(word, c[k])

    def ball_moments(self, c, ball: Ball, a=None):
        """Moments int_{U} (t - a)^n dmu, n <= k_tau - 2; a defaults to the ball centre."""
        raw = self.raw_moments(self.ball_value(c, ball))
        return self.recentred(raw, ball.center if a is None else a)

    def total_moments(self, c):
        L = self.L
        out = None
        for ball in self.balls():
            raw = self.raw_moments(self.ball_value(c, ball))
            out = raw if out is None else [[x + y for x, y in zip(u, v)] for u, v in zip(out, raw)]
        return out if out is not None else [[L.zero()] for _ in range(self.m + 1)]

    # -- integrals -------------------------------------------------------------------

    def integrate(self, c, normal_series, infinity_series):
        """Sum over the covering of the pairing of Taylor data with moments.

        ``normal_series(a)`` gives the Taylor coefficients in u = t - a;
        ``infinity_series(a)`` gives the coefficients of s^{k-2} F(a + 1/s) in s.
        """
        L, m = self.L, self.m
        acc = None
        for ball in self.balls():
            mom = self.ball_moments(c, ball)
            if all(x.is_zero() for row in mom for x in row):
                continue
            if ball.complement:
                coeffs = infinity_series(ball.center)
                terms = [(coeffs[i], mom[m - i]) for i in range(m + 1)]
            else:
                coeffs = normal_series(ball.center)
                terms = [(coeffs[n], mom[n]) for n in range(m + 1)]
            for f, row in terms:
                if f.is_zero():
                    continue
                contrib = [f * x for x in row]
                acc = contrib if acc is None else [x + y for x, y in zip(acc, contrib)]
        if acc is None:
            acc = [L.zero() for _ in range(max(1, self.mod.dim // (m + 1)))]
        return acc

    def g_eval(self, c, z: Padic):
        """g(z) = int dmu(t) / (z - t), a flat vector over the other factors."""
        L, m = self.L, self.m

        def normal(a):
            alpha = z - a
            if alpha.valuation() >= L.N:
                raise PrecisionError("evaluation point collides with a ball centre")
            inv = alpha.inverse()
            out, pw = [], inv
            for _ in range(m + 1):
                out.append(pw)
                pw = pw * inv
            return out

        def infinity(a):
            # s^{k-2} / (z - a - 1/s) = -s^{k-1} / (1 - (z - a) s): no terms of degree <= k - 2
            return [L.zero()] * (m + 1)

        return self.integrate(c, normal, infinity)

    def log_difference(self, c, z1: Padic, z0: Padic, j: int):
        """int t^j [log(z1 - t) - log(z0 - t)] dmu(t) with the Iwasawa branch."""
        L, n = self.L, self.m + 1

        def normal(a):
            beta, alpha = z1 - a, z0 - a
            const = [self.log(beta) - self.log(alpha)] + [L.zero()] * (n - 1)
            lb = _log_one_minus(beta.inverse(), n, L)
            la = _log_one_minus(alpha.inverse(), n, L)
            bracket = [x + y - w for x, y, w in zip(const, lb, la)]
            return _ps_mul(_binomial_series_u(a, j, n, L), bracket, n)

        def infinity(a):
            beta, alpha = z1 - a, z0 - a
            bracket = [x - y for x, y in zip(_log_one_minus(beta, n + j, L), _log_one_minus(alpha, n + j, L))]
            # s^{k-2-j} (1 + a s)^j [log(1 - beta s) - log(1 - alpha s)]
            prod = _ps_mul(_binomial_series(a, j, n, L), bracket, n)
            return _shift(prod, self.m - j, n, L)

        return self.integrate(c, normal, infinity)

    def lambda_value(self, c, word, z0: Padic | None = None) -> CoeffVector:
        """lambda(gamma)[J] = binom(k-2, J_tau) * int_{z0}^{gamma z0} z^{J_tau} g(z) dz."""
        z0 = self.z0 if z0 is None else z0
        L = self.L
        word = tuple(word)
        if not word:
            return self.mod.zero()
        M = self.ctx.G.pmatrix(word)
        Ml = tuple(self.mod.sigma(self.tau, x) for x in M)
        z1 = mobius(Ml, z0)
        totals = self.total_moments(c)
        per_j = []
        for j in range(self.m + 1):
            acc = self.log_difference(c, z1, z0, j)
            for mm in range(j):
                e = j - mm
                f = (z1**e - z0**e) / L(e)
                acc = [x + f * y for x, y in zip(acc, totals[mm])]
            per_j.append(acc)
        data = [L.zero() for _ in range(self.mod.dim)]
        idx = self.mod.weight.indices()
        counters = [0] * (self.m + 1)
        for pos, J in enumerate(idx):
            j = J[self.tau]
            data[pos] = L(comb(self.m, j)) * per_j[j][counters[j]]
            counters[j] += 1
        return CoeffVector(self.mod, data)

    def kappa_col(self, c, z0=None):
        return [self.lambda_value(c, (i,), z0) for i in range(1, self.ctx.G.rank + 1)]

    # -- residues --------------------------------------------------------------------

    def residue(self, c, e: TreeEdge, extra_depth: int | None = None) -> CoeffVector:
        """I(omega)(e) = int_{U(e)} (t X_tau + Y_tau)^{k_tau - 2} dmu, summed over the
        sub-balls of U(e) that lie ``extra_depth`` levels further out."""
        T = self.T
        B = T.edge_ball(e)
        if B.complement:
            return -self.residue(c, e.reverse, extra_depth)
        extra = self.depth if extra_depth is None else extra_depth
        frontier = [e]
        for _ in range(extra):
            nxt = []
            for f in frontier:
                for w in T.neighbors(f.terminus):
                    if w != f.origin:
                        g = TreeEdge(f.terminus, w)
                        if self.ctx.unfold.in_limit_tree(g):
                            nxt.append(g)
            frontier = nxt
        L, m = self.L, self.m
        acc = self.mod.zero()
        for f in frontier:
            ball = self.ball_of(f)
            mom = self.ball_moments(c, ball)
            acc = acc + self._residue_from_moments(mom, ball.center)
        return acc

    def _residue_from_moments(self, mom, a):
        # (tX + Y)^m = sum_n binom(m, n) (t - a)^n X^n (aX + Y)^{m-n}
        L, m = self.L, self.m
        poly = [[L.zero() for _ in mom[0]] for _ in range(m + 1)]  # X-degree -> vector
        for n in range(m + 1):
            rest = m - n
            for i in range(rest + 1):
                # (aX + Y)^rest contributes binom(rest, i) a^i X^i Y^{rest-i}
                coef = L(comb(m, n) * comb(rest, i)) * a**i
                poly[n + i] = [x + coef * y for x, y in zip(poly[n + i], mom[n])]
        data = [L.zero() for _ in range(self.mod.dim)]
        counters = [0] * (m + 1)
        for pos, J in enumerate(self.mod.weight.indices()):
            j = J[self.tau]
            data[pos] = poly[j][counters[j]]
            counters[j] += 1
        return CoeffVector(self.mod, data)


def _binomial_series_u(a, j, n, L):
    """Coefficients of (a + u)^j in u up to degree n - 1."""
    return [L(comb(j, i)) * a ** (j - i) if i <= j else L.zero() for i in range(n)]


def default_depth_precision(depth: int, k: int, p: int, guard: int = 2) -> int:
    """A priori digits of a depth-D Riemann sum: D - ceil(log_p k) - guard."""
    e, x = 0, 1
    while x < k:
        x *= p
        e += 1
    return depth - e - guard + 1
