"""Teitelbaum L-invariants from kappa^sch/kappa^col, monodromy modules and the
Fontaine-Mazur L-invariant.

The operator Lambda = (kappa^sch)^-1 kappa^col on harmonic cocycles has the
L-invariants as eigenvalues; an eigencocycle c with eigenvalue l satisfies
kappa^col(c) = l kappa^sch(c) in H^1.  The monodromy module attached to c is
written in the basis b1 = iota(c), b2 = omega_c, where an element is
determined by its pair (P, I) of a group-cohomology class and a residue
cocycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .cohom import CohomologyContext
from .integrate import Integrator
from .padic import INFINITY, Padic, PadicField, PrecisionError


class LInvariantError(ArithmeticError):
    pass


def _flat(values):
    return [x for v in values for x in v.data]


def solve_lt(ctx: CohomologyContext, ksch, kcol, zero_val=None):
    """The scalar l with kcol - l*ksch a coboundary.

    Returns (l, cobounding vector data, residual valuation).
    """
    if all(x.is_zero() for x in _flat(ksch)):
        raise LInvariantError("kappa^sch vanishes")
    B = ctx.coboundary_matrix()
    A = [[a] + row for a, row in zip(_flat(ksch), B)]
    x, res = linalg.least_solve(A, _flat(kcol), zero_val)
    R, piv, _ = linalg.rref(A, zero_val)
    if 0 not in piv:
        raise LInvariantError("kappa^sch is a coboundary: l is undetermined")
    return x[0], x[1:], res


def class_matrix(ctx: CohomologyContext, targets, images, zero_val=None):
    """Coordinates of each cocycle in ``images`` in the span of ``targets`` modulo coboundaries.

    Returns (matrix n x len(images), residual).
    """
    B = ctx.coboundary_matrix()
    cols = [_flat(t) for t in targets]
    A = [[col[i] for col in cols] + B[i] for i in range(len(B))]
    n = len(targets)
    out, worst = [], INFINITY
    for img in images:
        x, res = linalg.least_solve(A, _flat(img), zero_val)
        worst = min(worst, res)
        out.append(x[:n])
    return linalg.transpose(out) if out else [], worst


def lambda_operator(ctx, ksch_list, kcol_list, zero_val=None):
    """Matrix of (kappa^sch)^-1 kappa^col in the harmonic basis."""
    return class_matrix(ctx, ksch_list, kcol_list, zero_val)


def eigencocycles(M, digits, zero_val=None):
    """[(eigenvalue, coordinate vector)] for the eigenvalues of M lying in its field."""
    if not M:
        return []
    F = M[0][0].ctx
    poly = linalg.charpoly(M)
    roots = linalg.poly_roots(poly, digits)
    out = []
    n = len(M)
    for r in roots:
        shifted = [[M[i][j] - (r if i == j else F.zero()) for j in range(n)] for i in range(n)]
        thresh = zero_val if zero_val is not None else max(1, r.prec - 2) if r.prec != INFINITY else None
        ker = linalg.kernel(shifted, thresh)
        if not ker:
            continue
        out.append((r, ker[0]))
    return out


def combine(basis, coords):
    acc = None
    for c, a in zip(basis, coords):
        term = [v.scale(a) for v in c]
        acc = term if acc is None else [x + y for x, y in zip(acc, term)]
    return acc


# -- monodromy modules -------------------------------------------------------------------


@dataclass
class MonodromyModule:
    """Rank-2 filtered (phi, N)-module in a fixed basis (columns are images)."""

    field: PadicField
    phi: list
    N: list
    fil: list
    j0: int = 1
    q: int = 1
    labels: tuple = ("iota(c)", "omega")
    meta: dict = field(default_factory=dict)

    def apply(self, M, v):
        return linalg.matvec(M, v)

    def to_json(self):
        s = lambda M: [[str(x) for x in row] for row in M]
        return {
            "basis": list(self.labels),
            "phi": s(self.phi),
            "N": s(self.N),
            "fil": [str(x) for x in self.fil],
            "j0": self.j0,
            "q": self.q,
            **self.meta,
        }

    @classmethod
    def from_json(cls, obj, F: PadicField):
        parse = lambda t: F.parse(t) if isinstance(t, str) else F(t)
        m = lambda M: [[parse(x) for x in row] for row in M]
        return cls(F, m(obj["phi"]), m(obj["N"]), [parse(x) for x in obj["fil"]], int(obj.get("j0", 1)),
                   int(obj.get("q", 1)), tuple(obj.get("basis", ("e1", "e2"))))


def check_module(D: MonodromyModule, zero_val=None) -> dict:
    """Numerical check of the monodromy-module axioms; values are valuations or booleans."""
    F = D.field
    N2 = linalg.matmul(D.N, D.N)
    nn = min(x.known_valuation() for row in N2 for x in row)
    rank_N = linalg.rank(D.N, zero_val)
    ker = linalg.kernel(D.N, zero_val)
    img = [[D.N[0][j], D.N[1][j]] for j in range(2)]
    # im N = ker N: image spanned by a nonzero column lying in the kernel
    im_in_ker = INFINITY
    for col in img:
        for x in linalg.matvec(D.N, col):
            im_in_ker = min(im_in_ker, x.known_valuation())
    lhs = linalg.matmul(D.N, D.phi)
    rhs = linalg.matmul(D.phi, D.N)
    qq = F(D.q)
    comm = min((a - qq * b).known_valuation() for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb))
    if ker:
        k = ker[0]
        det = D.fil[0] * k[1] - D.fil[1] * k[0]
        fil_transverse = det.known_valuation()
    else:
        fil_transverse = None
    return {
        "N_squared_valuation": nn,
        "rank_N": rank_N,
        "dim_ker_N": len(ker),
        "image_in_kernel_valuation": im_in_ker,
        "commutation_valuation": comm,
        "fil_ker_det_valuation": fil_transverse,
    }


def module_ok(chk: dict, digits: int) -> dict:
    return {
        "N_squared_zero": chk["N_squared_valuation"] >= digits,
        "im_N_eq_ker_N": chk["rank_N"] == 1 and chk["dim_ker_N"] == 1 and chk["image_in_kernel_valuation"] >= digits,
        "N_phi_commutation": chk["commutation_valuation"] >= digits,
        "fil_transverse": chk["fil_ker_det_valuation"] is not None and chk["fil_ker_det_valuation"] < digits,
    }


def _eig2(M):
    """Eigenvalues of a 2x2 matrix with roots in its field."""
    poly = linalg.charpoly(M)
    digits = min(x.prec for row in M for x in row)
    return linalg.poly_roots(poly, digits)


def fm_decompose(D: MonodromyModule, zero_val=None):
    """(generator of D1 = ker N, generator of D2) with D2 the phi-eigenline mapping onto D1.

    The eigenvalue on D2 is q times the eigenvalue on D1 (from N phi = q phi N).
    """
    F = D.field
    ker = linalg.kernel(D.N, zero_val)
    if len(ker) != 1:
        raise LInvariantError("ker N is not a line")
    roots = _eig2(D.phi)
    if len(roots) != 2:
        raise LInvariantError("phi is not diagonalisable over the working field at this precision; raise N")
    qq = F(D.q)
    a, b = roots
    ra = (a - qq * b).known_valuation()
    rb = (b - qq * a).known_valuation()
    if ra == rb:
        raise LInvariantError("cannot orient the phi eigenlines; raise the precision")
    hi = a if ra > rb else b
    shifted = [[D.phi[i][j] - (hi if i == j else F.zero()) for j in range(2)] for i in range(2)]
    thresh = zero_val if zero_val is not None else max(1, hi.prec - 2)
    vecs = linalg.kernel(shifted, thresh)
    if len(vecs) != 1:
        raise LInvariantError("phi eigenline is not one-dimensional")
    x = vecs[0]
    Nx = linalg.matvec(D.N, x)
    if all(y.is_zero() or (zero_val is not None and y.valuation() >= zero_val) for y in Nx):
        raise LInvariantError("N vanishes on the chosen eigenline")
    return ker[0], x


def l_fm(D: MonodromyModule, zero_val=None) -> Padic:
    """The scalar L with x - L N(x) in Fil for x spanning D2."""
    _, x = fm_decompose(D, zero_val)
    Nx = linalg.matvec(D.N, x)
    # x - L Nx - mu fil = 0
    A = [[Nx[0], D.fil[0]], [Nx[1], D.fil[1]]]
    sol, res = linalg.least_solve(A, x, zero_val)
    if res != INFINITY and (zero_val is None or res < zero_val):
        raise LInvariantError("degenerate filtration")
    return sol[0]


# -- assembly from cocycles --------------------------------------------------------------


def build_monodromy_module(ctx: CohomologyContext, integ: Integrator, basis, c, kcol_c, zero_val=None,
                           delta_list=None, phi_scale=None, coords=None):
    """Assemble the module attached to an eigencocycle c.

    Coordinates: b1 = iota(c) with (P, I) = (delta(c), 0) and b2 = omega_c with
    (P, I) = (kappa^col(c), I(omega_c)).  When c = sum coords[i] basis[i] is
    given by its coordinates the residues are taken on the basis and combined,
    which keeps the precision of the basis.
    """
    L = ctx.L
    # N = iota o I: residues of omega along the quotient edges
    edges = [ctx.unfold.lift_edge(k) for k in range(ctx.n_edges)]
    coords_c = None
    if coords is None:
        res = [integ.residue(c, e) for e in edges]
    else:
        res = combine([[integ.residue(b, e) for e in edges] for b in basis], coords)
        coords_c = coords
    r_coords, r_res = ctx.coordinates([c], res, zero_val)
    r = r_coords[0]
    # x = iota o delta^-1 o P(omega): solve delta(c'') = kappa^col(c) modulo coboundaries
    deltas = delta_list if delta_list is not None else [ctx.delta(b) for b in basis]
    coords, s_res = class_matrix(ctx, deltas, [kcol_c], zero_val)
    y = [row[0] for row in coords]
    if coords_c is None:
        s_coords, s_res2 = ctx.coordinates([c], combine(basis, y), zero_val)
    else:
        s_coords, s_res2 = linalg.least_solve([[a] for a in coords_c], y, zero_val)
    s = s_coords[0]
    # y = omega - x has P(y) = 0
    zero = L.zero()
    Nmat = [[zero, r], [zero, zero]]
    q = ctx.T.q
    beta = L(phi_scale) if phi_scale is not None else ctx.default_up_scale()
    # phi = beta on y = b2 - s b1 and beta/q on b1
    lo = beta / L(q)
    phi = [[lo, -s * beta + s * lo], [zero, beta]]
    fil = [zero, L.one()]
    meta = {
        "residue_ratio": str(r),
        "residue_fit_valuation": _v(r_res),
        "delta_inverse_scalar": str(s),
        "delta_fit_valuation": _v(min(s_res, s_res2)),
    }
    return MonodromyModule(L, phi, Nmat, fil, 1, q, ("iota(c)", "omega_c"), meta)


def _v(x):
    return None if x == INFINITY else int(x)


@dataclass
class Comparison:
    ell: Padic
    l_fm: Padic
    difference_valuation: float
    budget: int
    passed: bool

    def to_json(self):
        return {
            "ell": str(self.ell),
            "L_FM": str(self.l_fm),
            "difference_valuation": _v(self.difference_valuation),
            "budget": self.budget,
            "pass": self.passed,
        }


def compare(ell: Padic, lfm: Padic, budget: int) -> Comparison:
    d = (ell - lfm).known_valuation()
    return Comparison(ell, lfm, d, budget, d >= budget)
