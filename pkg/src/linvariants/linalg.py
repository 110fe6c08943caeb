"""Dense linear algebra over a p-adic field with valuation pivoting.

Matrices are lists of rows of :class:`Padic`.  An entry counts as zero when it
is zero at its own precision or when its valuation reaches ``zero_val``; the
latter is how callers express "noise below the working budget".
"""

from __future__ import annotations

from .padic import INFINITY, Padic, PadicField, PrecisionError


def _is_zero(x: Padic, zero_val) -> bool:
    return x.is_zero() or (zero_val is not None and x.val >= zero_val)


def zeros(F: PadicField, m: int, n: int):
    return [[F.zero() for _ in range(n)] for _ in range(m)]


def identity(F: PadicField, n: int):
    M = zeros(F, n, n)
    for i in range(n):
        M[i][i] = F.one()
    return M


def matvec(A, x):
    out = []
    for row in A:
        acc = None
        for a, b in zip(row, x):
            t = a * b
            acc = t if acc is None else acc + t
        out.append(acc)
    return out


def matmul(A, B):
    Bt = list(zip(*B))
    return [matvec([list(c) for c in Bt], row) for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def rref(A, zero_val=None):
    """Reduced row echelon form; returns (R, pivot_columns, largest pivot valuation)."""
    R = [list(row) for row in A]
    m = len(R)
    n = len(R[0]) if m else 0
    pivots = []
    worst = INFINITY
    r = 0
    for col in range(n):
        if r >= m:
            break
        best, best_val = None, INFINITY
        for i in range(r, m):
            x = R[i][col]
            if not _is_zero(x, zero_val) and x.val < best_val:
                best, best_val = i, x.val
        if best is None:
            continue
        R[r], R[best] = R[best], R[r]
        inv = R[r][col].inverse()
        worst = best_val if worst == INFINITY else max(worst, best_val)
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and not R[i][col].is_zero():
                f = R[i][col]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(col)
        r += 1
    return R, pivots, worst


def rank(A, zero_val=None) -> int:
    if not A:
        return 0
    return len(rref(A, zero_val)[1])


def kernel(A, zero_val=None):
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    if not A:
        raise ValueError("empty matrix")
    F = A[0][0].ctx
    n = len(A[0])
    R, pivots, _ = rref(A, zero_val)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        x = [F.zero() for _ in range(n)]
        x[f] = F.one()
        for row, pc in enumerate(pivots):
            x[pc] = -R[row][f]
        basis.append(x)
    return basis


def solve(A, b, zero_val=None):
    """Solve A x = b, free variables set to 0.  Returns (x, residual valuation).

    Raises when the part of b outside the column span is not below the
    threshold (exactly zero when ``zero_val`` is None).
    """
    x, res = least_solve(A, b, zero_val)
    if res != INFINITY and (zero_val is None or res < zero_val):
        raise PrecisionError(f"inconsistent linear system (residual valuation {res})")
    return x, res


def _eliminate_only(aug, n, zero_val=None):
    """Row reduce using pivots among the first n columns only."""
    R = [list(r) for r in aug]
    m = len(R)
    pivots = []
    r = 0
    for col in range(n):
        if r >= m:
            break
        best, best_val = None, INFINITY
        for i in range(r, m):
            x = R[i][col]
            if not _is_zero(x, zero_val) and x.val < best_val:
                best, best_val = i, x.val
        if best is None:
            continue
        R[r], R[best] = R[best], R[r]
        inv = R[r][col].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and not R[i][col].is_zero():
                f = R[i][col]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(col)
        r += 1
    return R, pivots


def least_solve(A, b, zero_val=None):
    """Solve A x = b using pivots from A only; returns (x, residual valuation).

    Unlike :func:`solve` this never raises: rows of the reduced system without
    a pivot carry the inconsistency, whose smallest valuation is reported.
    """
    F = b[0].ctx
    n = len(A[0])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = _eliminate_only(aug, n, zero_val)
    x = [F.zero() for _ in range(n)]
    for row, pc in enumerate(pivots):
        x[pc] = R[row][n]
    res = INFINITY
    for row in R[len(pivots):]:
        v = row[n].valuation()
        res = min(res, v)
    return x, res


def residual(A, x, b):
    r = [ax - bi for ax, bi in zip(matvec(A, x), b)]
    return min((y.valuation() for y in r), default=INFINITY)


def charpoly(A):
    """Characteristic polynomial det(xI - A), coefficients from constant term up.

    Berkowitz's algorithm: division free, so no precision is lost to
    small denominators.
    """
    n = len(A)
    F = A[0][0].ctx
    if n == 0:
        return [F.one()]
    # C_k vectors; start with the 1x1 leading block
    vect = [F.one(), -A[0][0]]  # coefficients from highest degree down
    for r in range(1, n):
        S = [A[i][r] for i in range(r)]  # column above diagonal
        R = [A[r][j] for j in range(r)]  # row left of diagonal
        Asub = [row[:r] for row in A[:r]]
        # Toeplitz column: 1, -a_rr, -R S, -R A S, -R A^2 S, ...
        col = [F.one(), -A[r][r]]
        X = S
        for _ in range(r):
            col.append(-sum_dot(R, X, F))
            X = matvec(Asub, X)
        new = []
        for i in range(r + 2):
            acc = F.zero()
            for j in range(len(vect)):
                k = i - j
                if 0 <= k < len(col):
                    acc = acc + col[k] * vect[j]
            new.append(acc)
        vect = new
    return list(reversed(vect))


def sum_dot(a, b, F):
    acc = F.zero()
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def poly_eval(coeffs, x):
    acc = None
    for c in reversed(coeffs):
        acc = c if acc is None else acc * x + c
    return acc


def poly_roots(coeffs, digits: int, max_branches: int = 10_000):
    """Roots in the coefficient field of sum coeffs[i] x^i, each to ``digits``
    absolute digits (or less when the data run out).

    Digit-by-digit lifting handles clustered roots; simple roots switch to
    Newton iteration.  Roots outside the ring of integers are found through
    the reversed polynomial.
    """
    while coeffs and coeffs[-1].is_zero():
        coeffs = coeffs[:-1]
    if len(coeffs) <= 1:
        return []
    F = coeffs[0].ctx
    out = []
    if coeffs[0].is_zero():
        # x = 0 is a root; deflate
        out.append(F.zero())
        rest = list(coeffs[1:])
        return out + [r for r in poly_roots(rest, digits, max_branches) if not r.is_zero()]
    # integral roots
    out.extend(_integral_roots(coeffs, digits, max_branches))
    # roots with negative valuation are inverses of roots in pO of the reversed poly
    rev = list(reversed(coeffs))
    for y in _integral_roots(rev, digits, max_branches):
        if not y.is_zero() and y.val >= 1:
            out.append(y.inverse())
    return _dedupe(out)


def _dedupe(roots):
    out = []
    for r in roots:
        if not any((r - s).is_zero() for s in out):
            out.append(r)
    return out


def _normalise(coeffs):
    m = min(c.valuation() for c in coeffs)
    if m == INFINITY:
        return None
    F = coeffs[0].ctx
    s = F.p_power(-m)
    return [c * s for c in coeffs]


def _integral_roots(coeffs, digits, max_branches):
    F = coeffs[0].ctx
    found = []
    stack = [(coeffs, F.zero(), 0)]  # poly in y with x = base + p^level y
    branches = 0
    while stack:
        poly, base, level = stack.pop()
        branches += 1
        if branches > max_branches:
            raise PrecisionError("root search did not settle")
        poly = _normalise(poly)
        if poly is not None and any(c.prec <= 0 for c in poly):
            # the data no longer determine the next digit: clustered root
            poly = None
        if poly is None or level >= digits:
            found.append(base.add_bigoh(level) if level < F.N else base)
            continue
        deriv = [c * F(i) for i, c in enumerate(poly)][1:]
        for r in F.residue_reps():
            val = poly_eval(poly, r)
            if not (val.is_zero() or val.val >= 1):
                continue
            dval = poly_eval(deriv, r) if deriv else F.zero()
            if not dval.is_zero() and dval.val == 0:
                # simple root: Newton from r
                y = r
                for _ in range(F.N.bit_length() + 4):
                    fy = poly_eval(poly, y)
                    if fy.is_zero():
                        break
                    y = y - fy / poly_eval(deriv, y)
                found.append(base + F.p_power(level) * y)
                continue
            shifted = _taylor_shift(poly, r)
            # substitute y = r + p z
            scaled = [c * F.p_power(i) for i, c in enumerate(shifted)]
            stack.append((scaled, base + F.p_power(level) * r, level + 1))
    return found


def _taylor_shift(poly, r):
    """Coefficients of poly(x + r)."""
    out = list(poly)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + r * out[j + 1]
    return out
