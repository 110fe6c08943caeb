"""Capped-absolute-precision arithmetic in unramified extensions of Q_p.

An element of K = Q_p[g]/(f) is stored as ``p^val * u`` where ``u`` is a
polynomial in the generator ``g`` with integer coefficients reduced modulo
``p^(prec - val)``.  ``prec`` is the absolute precision and never exceeds the
context cap ``N``.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from functools import cached_property

INFINITY = float("inf")


class PrecisionError(ArithmeticError):
    pass


class ContextMismatch(TypeError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _floor_log(n: int, p: int) -> int:
    k = 0
    while p ** (k + 1) <= n:
        k += 1
    return k


def vp(n: int, p: int) -> int:
    if n == 0:
        return 10**9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# --- polynomials over Z/m (lists of ints, low degree first) ------------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a, f, p):
    """Remainder of a modulo f over F_p (f need not be monic)."""
    a = [x % p for x in a]
    a = _trim(a)
    f = _trim([x % p for x in f])
    inv = pow(f[-1], -1, p)
    while len(a) >= len(f):
        c = a[-1] * inv % p
        shift = len(a) - len(f)
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
        a = _trim(a)
    return a


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _fp_powmod(a, e, f, p):
    result = [1]
    base = _fp_mod(a, f, p)
    while e:
        if e & 1:
            result = _fp_mod(_fp_mul(result, base, p), f, p)
        base = _fp_mod(_fp_mul(base, base, p), f, p)
        e >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = _trim([x % p for x in a]), _trim([x % p for x in b])
    while b:
        a, b = b, _fp_mod(a, b, p)
    return a


def _prime_factors(n):
    out, i = [], 2
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            while n % i == 0:
                n //= i
        i += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_mod_p(f, p) -> bool:
    """Rabin's test for a monic polynomial f (low degree first) over F_p."""
    d = len(f) - 1
    if d == 1:
        return True
    x = [0, 1]
    if _fp_powmod(x, p**d, f, p) != _fp_mod(x, f, p):
        return False
    for r in _prime_factors(d):
        h = _fp_powmod(x, p ** (d // r), f, p)
        h = h + [0] * (2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_fp_gcd(f, h, p)) > 1:
            return False
    return True


def default_modulus(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible polynomial of degree d mod p."""
    if d == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=d):
        f = list(tail) + [1]
        if f[0] == 0:
            continue
        if is_irreducible_mod_p(f, p):
            return tuple(f)
    raise ValueError(f"no irreducible polynomial of degree {d} mod {p}")


class PadicField:
    """Unramified extension of Q_p of degree ``d`` at absolute precision cap ``N``."""

    def __init__(self, p: int, d: int = 1, N: int = 20, modulus=None, name: str = "g"):
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if d < 1 or N < 1:
            raise ValueError("need d >= 1 and N >= 1")
        if modulus is None:
            modulus = default_modulus(p, d)
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != d + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree d")
        if not is_irreducible_mod_p(list(modulus), p):
            raise ValueError("modulus is not irreducible mod p")
        self.p, self.d, self.N, self.modulus, self.name = p, d, N, modulus, name
        self.q = p**d

    def __repr__(self):
        return f"PadicField(p={self.p}, d={self.d}, N={self.N})"

    def __eq__(self, other):
        return (
            isinstance(other, PadicField)
            and (self.p, self.d, self.N, self.modulus) == (other.p, other.d, other.N, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.d, self.N, self.modulus))

    def with_precision(self, N: int) -> "PadicField":
        return PadicField(self.p, self.d, N, self.modulus, self.name)

    # -- polynomial arithmetic modulo (modulus, p^k) --------------------------

    def _reduce(self, a, m):
        f, d = self.modulus, self.d
        a = list(a)
        for top in range(len(a) - 1, d - 1, -1):
            c = a[top]
            if c:
                base = top - d
                for i in range(d):
                    a[base + i] -= c * f[i]
            a[top] = 0
        return tuple(x % m for x in a[:d]) + (0,) * max(0, d - len(a))

    def _mul(self, a, b, m):
        if self.d == 1:
            return ((a[0] * b[0]) % m,)
        out = [0] * (2 * self.d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self._reduce(out, m)

    def _inv_unit(self, a, k):
        """Inverse of the unit polynomial a modulo p^k."""
        p = self.p
        m = p**k
        if self.d == 1:
            return (pow(a[0], -1, m),)
        # inverse mod p by extended Euclid in F_p[x]/f, then Newton lifting
        r0, r1 = _trim([x % p for x in self.modulus]), _trim([x % p for x in a])
        s0, s1 = [], [1]
        while r1:
            inv = pow(r1[-1], -1, p)
            qt = [0] * max(1, len(r0) - len(r1) + 1)
            r = list(r0)
            while len(r) >= len(r1) and r:
                c = r[-1] * inv % p
                sh = len(r) - len(r1)
                qt[sh] = c
                for i, y in enumerate(r1):
                    r[sh + i] = (r[sh + i] - c * y) % p
                r = _trim(r)
            s = _trim([(x - y) % p for x, y in itertools.zip_longest(s0, _fp_mul(_trim(qt), s1, p), fillvalue=0)])
            r0, r1, s0, s1 = r1, r, s1, s
        if len(r0) != 1:
            raise ZeroDivisionError("element is not a unit")
        c = pow(r0[0], -1, p)
        y = tuple((x * c) % p for x in s0) + (0,) * (self.d - len(s0))
        prec = 1
        while prec < k:
            prec = min(2 * prec, k)
            mm = p**prec
            ay = self._mul(a, y, mm)
            two_minus = tuple(((2 if i == 0 else 0) - v) % mm for i, v in enumerate(ay))
            y = self._mul(y, two_minus, mm)
        return tuple(x % m for x in y)

    # -- constructors ----------------------------------------------------------

    def _make(self, val, coeffs, prec):
        """Normalise ``p^val * coeffs`` known to absolute precision ``prec``."""
        prec = min(prec, self.N)
        if val >= prec:
            return Padic(self, prec, (0,) * self.d, prec)
        p = self.p
        m = p ** (prec - val)
        coeffs = tuple(c % m for c in coeffs)
        if not any(coeffs):
            return Padic(self, prec, (0,) * self.d, prec)
        shift = 0
        while all(c % p == 0 for c in coeffs):
            coeffs = tuple(c // p for c in coeffs)
            shift += 1
        val += shift
        m = p ** (prec - val)
        return Padic(self, val, tuple(c % m for c in coeffs), prec)

    def zero(self, prec=None):
        prec = self.N if prec is None else min(prec, self.N)
        return Padic(self, prec, (0,) * self.d, prec)

    def one(self):
        return self(1)

    def gen(self):
        if self.d == 1:
            raise ValueError("Q_p has no generator")
        return self._make(0, (0, 1) + (0,) * (self.d - 2), self.N)

    def from_coeffs(self, coeffs, val=0, prec=None):
        coeffs = tuple(int(c) for c in coeffs) + (0,) * (self.d - len(coeffs))
        return self._make(val, coeffs, self.N if prec is None else prec)

    def __call__(self, x, prec=None):
        if isinstance(x, Padic):
            if x.ctx == self:
                return x
            if x.ctx.p == self.p and x.ctx.modulus == self.modulus:
                return self._make(x.val, x.coeffs, x.prec)
            raise ContextMismatch(f"cannot coerce {x.ctx} to {self}")
        prec = self.N if prec is None else prec
        if isinstance(x, (int,)) and not isinstance(x, bool):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x == 0:
                return self.zero(prec)
            num, den = x.numerator, x.denominator
            v = vp(num, self.p) - vp(den, self.p)
            num //= self.p ** max(0, vp(num, self.p))
            den //= self.p ** max(0, vp(den, self.p))
            if v >= min(prec, self.N):
                return self.zero(prec)
            k = min(prec, self.N) - v
            m = self.p**k
            u = num * pow(den, -1, m) % m
            return self._make(v, (u,) + (0,) * (self.d - 1), prec)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot build p-adic element from {type(x)}")

    def random_element(self, rng, val=0, unit=True):
        m = self.p ** (self.N - val) if self.N > val else 1
        while True:
            coeffs = tuple(rng.randrange(m) for _ in range(self.d))
            x = self._make(val, coeffs, self.N)
            if not unit or (not x.is_zero() and x.val == val):
                return x

    def residue_reps(self):
        """Canonical representatives of the residue field F_q, as elements."""
        return [self.from_coeffs(c) for c in itertools.product(range(self.p), repeat=self.d)]

    # -- Frobenius and embeddings ---------------------------------------------

    def _eval_poly(self, poly, x):
        acc = self.zero()
        for c in reversed(poly):
            acc = acc * x + self(c)
        return acc

    def _hensel_root(self, poly, approx):
        dpoly = [i * c for i, c in enumerate(poly)][1:]
        y = approx
        for _ in range(self.N.bit_length() + 3):
            fy = self._eval_poly(poly, y)
            if fy.is_zero():
                break
            y = y - fy / self._eval_poly(dpoly, y)
        return y

    @cached_property
    def frobenius_of_gen(self):
        if self.d == 1:
            return None
        g = self.gen()
        return self._hensel_root(self.modulus, g ** self.p)

    def frobenius(self, x: "Padic", power: int = 1) -> "Padic":
        """Arithmetic Frobenius (lift of y -> y^p) applied ``power`` times."""
        power %= self.d
        if self.d == 1 or power == 0 or x.is_zero():
            return x
        img = self.frobenius_of_gen
        for _ in range(power):
            acc = self.zero()
            for c in reversed(x.coeffs):
                acc = acc * img + self._make(0, (c,) + (0,) * (self.d - 1), x.prec - x.val)
            x = acc * self.p_power(x.val)
        return x

    def p_power(self, n: int) -> "Padic":
        return self._make(n, (1,) + (0,) * (self.d - 1), self.N) if n < self.N else self.zero()

    def embedding_into(self, big: "PadicField"):
        """Return a map K -> big sending the generator to a root of the modulus."""
        if big.p != self.p or big.d % self.d:
            raise ValueError("no embedding of unramified fields with these degrees")
        if self.d == 1:
            return lambda x: big._make(x.val, (x.coeffs[0],) + (0,) * (big.d - 1), x.prec)
        root = None
        for r in big.residue_reps():
            if big._eval_poly(self.modulus, r).valuation() >= 1:
                root = big._hensel_root(self.modulus, r)
                break
        if root is None:
            raise ValueError("modulus has no root in the larger field")
        powers = [big.one()]
        for _ in range(self.d - 1):
            powers.append(powers[-1] * root)

        def embed(x):
            if x.is_zero():
                return big.zero(x.prec)
            acc = big.zero()
            for c, pw in zip(x.coeffs, powers):
                acc = acc + big._make(0, (c,) + (0,) * (big.d - 1), x.prec - x.val) * pw
            return acc * big.p_power(x.val) if x.val < big.N else big.zero(x.prec)

        return embed

    # -- text form -------------------------------------------------------------

    _TERM = re.compile(r"^\s*(?:p\^(-?\d+)\s*\*\s*)?\((.*)\)\s*\+\s*O\(p\^(-?\d+)\)\s*$")

    def parse(self, text: str) -> "Padic":
        text = text.strip()
        m = re.match(r"^\s*O\(p\^(-?\d+)\)\s*$", text)
        if m:
            return self.zero(int(m.group(1)))
        m = self._TERM.match(text)
        if not m:
            raise ValueError(f"cannot parse p-adic string {text!r}")
        val = int(m.group(1) or 0)
        prec = int(m.group(3))
        coeffs = [0] * self.d
        for term in m.group(2).split("+"):
            term = term.strip()
            tm = re.match(rf"^(\d+)(?:\*{self.name}(?:\^(\d+))?)?$", term)
            if not tm:
                raise ValueError(f"bad term {term!r}")
            if "*" in term:
                deg = int(tm.group(2) or 1)
            else:
                deg = 0
            coeffs[deg] += int(tm.group(1))
        return self._make(val, coeffs, prec)


class Padic:
    __slots__ = ("ctx", "val", "coeffs", "prec")

    def __init__(self, ctx, val, coeffs, prec):
        self.ctx, self.val, self.coeffs, self.prec = ctx, val, coeffs, prec

    # -- inspection ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self):
        return INFINITY if self.is_zero() else self.val

    def known_valuation(self):
        """Valuation, capped by the precision: a zero known only to O(p^k) gives k."""
        return min(self.val, self.prec)

    @property
    def rel_prec(self) -> int:
        return 0 if self.is_zero() else self.prec - self.val

    def is_unit(self) -> bool:
        return not self.is_zero() and self.val == 0

    def _check(self, other):
        if isinstance(other, Padic):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx} vs {other.ctx}")
            return other
        return self.ctx(other)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = self._check(other)
        ctx = self.ctx
        prec = min(self.prec, other.prec)
        if self.is_zero():
            return ctx._make(other.val, other.coeffs, prec) if not other.is_zero() else ctx.zero(prec)
        if other.is_zero():
            return ctx._make(self.val, self.coeffs, prec)
        m = min(self.val, other.val)
        if m >= prec:
            return ctx.zero(prec)
        p = ctx.p
        sa, sb = p ** (self.val - m), p ** (other.val - m)
        coeffs = tuple(a * sa + b * sb for a, b in zip(self.coeffs, other.coeffs))
        return ctx._make(m, coeffs, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return self.ctx._make(self.val, tuple(-c for c in self.coeffs), self.prec)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        other = self._check(other)
        ctx = self.ctx
        if self.is_zero() or other.is_zero():
            va = self.prec if self.is_zero() else self.val
            vb = other.prec if other.is_zero() else other.val
            bound = min(self.prec + vb, other.prec + va)
            return ctx.zero(bound)
        val = self.val + other.val
        rel = min(self.rel_prec, other.rel_prec)
        prec = min(val + rel, ctx.N)
        if val >= prec:
            return ctx.zero(prec)
        m = ctx.p ** (prec - val)
        return Padic(ctx, val, ctx._mul(self.coeffs, other.coeffs, m), prec)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("division by zero p-adic element")
        ctx = self.ctx
        rel = self.rel_prec
        val = -self.val
        prec = min(val + rel, ctx.N)
        if prec <= val:
            raise PrecisionError("no precision left after inversion")
        return Padic(ctx, val, ctx._inv_unit(self.coeffs, prec - val), prec)

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._check(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            other = self._check(other)
        except (TypeError, ContextMismatch):
            return NotImplemented
        return (self - other).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def add_bigoh(self, prec: int) -> "Padic":
        return self.ctx._make(self.val, self.coeffs, min(prec, self.prec)) if not self.is_zero() else self.ctx.zero(min(prec, self.prec))

    def unit_part(self) -> "Padic":
        if self.is_zero():
            raise ValueError("zero has no unit part")
        return Padic(self.ctx, 0, self.coeffs, self.rel_prec)

    def residue(self) -> tuple[int, ...]:
        """Coefficients of the reduction mod p (element must be integral)."""
        if self.is_zero() or self.val > 0:
            return (0,) * self.ctx.d
        if self.val < 0:
            raise ValueError("element is not integral")
        return tuple(c % self.ctx.p for c in self.coeffs)

    def digits_int(self, k: int) -> tuple[int, ...]:
        """Integer coefficients of the element modulo p^k (element integral)."""
        if self.is_zero() or self.val >= k:
            return (0,) * self.ctx.d
        if self.val < 0:
            raise ValueError("element is not integral")
        m = self.ctx.p**k
        s = self.ctx.p**self.val
        return tuple(c * s % m for c in self.coeffs)

    def to_fraction_digits(self):
        """(shift, coeffs) with self = p^-shift * coeffs and coeffs mod p^(prec+shift)."""
        if self.is_zero():
            return 0, (0,) * self.ctx.d
        shift = max(0, -self.val)
        s = self.ctx.p ** (self.val + shift)
        return shift, tuple(c * s for c in self.coeffs)

    # -- transcendental helpers -----------------------------------------------

    def teichmuller(self) -> "Padic":
        if not self.is_unit():
            raise ValueError("Teichmuller lift needs a unit")
        q = self.ctx.q
        y = self
        for _ in range(self.rel_prec + 1):
            z = y**q
            if z == y:
                return z
            y = z
        return y

    def log(self) -> "Padic":
        """Iwasawa logarithm (log p = 0, log of roots of unity = 0)."""
        if self.is_zero():
            raise ValueError("log of zero")
        ctx = self.ctx
        u = self.unit_part()
        # u^(q-1) is 1 mod p; log(u) = log(u^(q-1)) / (q-1) with q-1 a unit
        w = u ** (ctx.q - 1)
        x = w - 1
        total = ctx.zero(w.prec)
        if x.is_zero():
            return total
        vx = x.val
        bound = w.prec
        power = x
        n = 1
        while True:
            term = power / ctx(n)
            total = total + (term if n % 2 else -term)
            n += 1
            # n*vx - v_p(n) is eventually increasing; stop once it clears the precision
            if n >= 2 and n * vx - _floor_log(n, ctx.p) >= bound:
                break
            power = power * x
        return total / ctx(ctx.q - 1)

    # -- text ------------------------------------------------------------------

    def __str__(self):
        ctx = self.ctx
        if self.is_zero():
            return f"O(p^{self.prec})"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0 and i > 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*{ctx.name}")
            else:
                terms.append(f"{c}*{ctx.name}^{i}")
        body = " + ".join(terms)
        head = f"p^{self.val} * " if self.val else ""
        return f"{head}({body}) + O(p^{self.prec})"

    def __repr__(self):
        return str(self)
