"""End-to-end computation: group -> quotient -> harmonic cocycles -> kappa
classes -> L-invariants -> monodromy modules -> comparison."""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .btree import BruhatTitsTree
from .coeff import CoeffModule
from .cohom import CohomologyContext
from .config import RunConfig
from .integrate import Integrator, default_depth_precision
from .linv import (
    LInvariantError,
    build_monodromy_module,
    check_module,
    combine,
    compare,
    eigencocycles,
    l_fm,
    lambda_operator,
    module_ok,
    solve_lt,
)
from .padic import INFINITY, Padic, PadicField
from .schottky import Component, fixture_from_json, load_fixture, matrix_from_json, quotient_graph, validate_graph, verify_schottky


@dataclass
class Setup:
    cfg: RunConfig
    K: PadicField
    L: PadicField
    tree: BruhatTitsTree
    components: list
    meta: dict

    def module(self) -> CoeffModule:
        return CoeffModule(self.cfg.weight, self.K, self.L)

    def context(self, comp: Component) -> CohomologyContext:
        up_scale = None if self.cfg.up_scale is None else self.L.parse(self.cfg.up_scale)
        return CohomologyContext(comp, self.module(), up_scale)

    def integrator(self, ctx, depth=None, tau=0) -> Integrator:
        z0 = None if self.cfg.z0 is None else self.L.parse(self.cfg.z0)
        log_p = None if self.cfg.branch == "iwasawa" else self.L.parse(self.cfg.branch)
        return Integrator(ctx, self.cfg.depth if depth is None else depth, tau, z0, log_p)

    def up_reps(self):
        if self.cfg.up_reps is None:
            return None
        return [matrix_from_json(self.K, m) for m in self.cfg.up_reps]


def build_setup(cfg: RunConfig) -> Setup:
    Nw, Nt = cfg.working_precision, cfg.tree_precision
    path = cfg.fixture_path()
    if path is not None:
        K, tree, comps, meta = load_fixture(path, N=Nt)
        if K.p != cfg.p or K.d != cfg.d:
            raise LInvariantError(f"fixture is over p={K.p}, d={K.d} but the config asks for p={cfg.p}, d={cfg.d}")
    elif "components" in cfg.group or "vertices" in cfg.group:
        obj = dict(cfg.group, p=cfg.p, d=cfg.d)
        K, tree, comps, meta = fixture_from_json(obj, N=Nt)
    else:
        K = PadicField(cfg.p, cfg.d, Nt, cfg.extra.get("modulus"))
        tree = BruhatTitsTree(K)
        gens = [matrix_from_json(K, g) for g in cfg.group["generators"]]
        G = verify_schottky(tree, gens)
        Q = quotient_graph(G)
        validate_graph(Q, G)
        comps = [Component(G, Q, cfg.label or "component 1")]
        meta = {}
    L = PadicField(cfg.p, 2 * cfg.d, Nw)
    return Setup(cfg, K, L, tree, comps, meta)


def descend(x: Padic, K: PadicField):
    """(element of K, valuation of the part outside K) for x in the quadratic extension.

    Only implemented for K = Q_p; otherwise x is returned unchanged.
    """
    if x.ctx.d == K.d:
        return x, INFINITY
    if K.d != 1:
        return x, INFINITY
    if x.is_zero():
        return K.zero(x.prec), INFINITY
    rest = (0,) + tuple(x.coeffs[1:])
    outside = x.ctx._make(x.val, rest, x.prec).known_valuation() if any(rest) else INFINITY
    inside = (K(x.coeffs[0]) * K.p_power(x.val)).add_bigoh(x.prec)
    return inside, outside


def _vj(x):
    return None if x == INFINITY else int(x)


def _digits(x: Padic, cfg: RunConfig, k_tau: int) -> int:
    model = default_depth_precision(cfg.depth, k_tau, cfg.p, cfg.guard)
    return int(min(cfg.N, x.prec, model))


def analyse_component(setup: Setup, comp: Component, with_observed: bool = True) -> dict:
    """Everything computed for one component; collects failures instead of raising."""
    cfg = setup.cfg
    ctx = setup.context(comp)
    failures = []
    basis = ctx.harmonic_basis()
    dims = {
        "harmonic": len(basis),
        "h1": ctx.h1_dimension(),
        "invariants": ctx.invariants_dimension(),
        "quotient_vertices": len(comp.graph.vertices),
        "quotient_edges": len(comp.graph.edges) // 2,
    }
    if dims["harmonic"] != dims["h1"]:
        failures.append("dimension mismatch between harmonic cocycles and H^1")
    out = {"label": comp.label, "rank": comp.group.rank, "dimensions": dims, "embeddings": []}
    if not basis:
        out["note"] = "no harmonic cocycles in this weight"
        out["failures"] = failures
        return out
    # U_p
    scale = ctx.up_scale if ctx.up_scale is not None else ctx.default_up_scale()
    worst = INFINITY
    for c in basis:
        U = ctx.hecke_up(c, setup.up_reps())
        for a, b in zip(U, c):
            for x, y in zip(a.data, b.scale(scale).data):
                worst = min(worst, (x - y).known_valuation())
    prec = min(x.prec for c in basis for v in c for x in v.data)
    up_ok = worst >= prec - cfg.guard
    out["U_p"] = {"eigenvalue": str(scale), "defect_valuation": _vj(worst), "pass": up_ok}
    if cfg.cmp and not up_ok:
        failures.append("U_p eigencocycle condition fails")
    ksch = [ctx.kappa_sch(c) for c in basis]
    deltas = [ctx.delta(c) for c in basis]
    for tau in cfg.taus():
        out["embeddings"].append(_analyse_tau(setup, ctx, basis, ksch, deltas, tau, with_observed, failures))
    out["failures"] = failures
    return out


def _analyse_tau(setup, ctx, basis, ksch, deltas, tau, with_observed, failures):
    cfg = setup.cfg
    k_tau = cfg.k[tau]
    integ = setup.integrator(ctx, tau=tau)
    kcol = [integ.kappa_col(c) for c in basis]
    Lam, res = lambda_operator(ctx, ksch, kcol)
    digits_model = default_depth_precision(cfg.depth, k_tau, cfg.p, cfg.guard)
    eig = eigencocycles(Lam, max(1, min(x.prec for row in Lam for x in row) - cfg.guard))
    rep = {
        "tau": tau,
        "depth": cfg.depth,
        "balls": len(integ.balls()),
        "base_point": str(integ.z0),
        "branch": cfg.branch,
        "error_model_digits": digits_model,
        "lambda_matrix": [[str(x) for x in row] for row in Lam],
        "lambda_fit_valuation": _vj(res),
        "eigen": [],
    }
    if len(eig) == 0:
        failures.append(f"tau={tau}: no eigenvalue of the Lambda operator lies in the working field")
    observed = None
    if with_observed and cfg.depth > 1:
        integ2 = setup.integrator(ctx, depth=cfg.depth - 1, tau=tau)
        Lam2, _ = lambda_operator(ctx, ksch, [integ2.kappa_col(c) for c in basis])
        observed = [r for r, _ in eigencocycles(Lam2, max(1, min(x.prec for row in Lam2 for x in row) - cfg.guard))]
    for ell, x in eig:
        c = combine(basis, x)
        kc = combine([list(v) for v in kcol], x)
        ks = ctx.kappa_sch(c)
        entry = {"ell_working": str(ell)}
        try:
            lt, _, lt_res = solve_lt(ctx, ks, kc)
            D = build_monodromy_module(ctx, integ, basis, c, kc, delta_list=deltas, coords=x)
            lf = l_fm(D)
        except (LInvariantError, ArithmeticError) as exc:
            failures.append(f"tau={tau}: {exc}")
            entry["error"] = str(exc)
            rep["eigen"].append(entry)
            continue
        digits = _digits(lt, cfg, k_tau)
        lt_K, outside = descend(lt, setup.K)
        lf_K, _ = descend(lf, setup.K)
        cmpn = compare(lt, lf, digits)
        chk = check_module(D)
        ok = module_ok(chk, digits)
        entry.update(
            {
                "ell": str(lt_K.add_bigoh(digits)),
                "L_FM": str(lf_K.add_bigoh(digits)),
                "digits": digits,
                "solve_lt_residual_valuation": _vj(lt_res),
                "outside_K_valuation": _vj(outside),
                "comparison": cmpn.to_json(),
                "module": D.to_json(),
                "module_checks": {key: _vj(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else v for key, v in chk.items()},
                "module_invariants": ok,
            }
        )
        if observed is not None:
            agree = max(((lt - o).known_valuation() for o in observed), default=None)
            entry["observed_agreement_with_depth_minus_1"] = _vj(agree) if agree is not None else None
        if not cmpn.passed:
            failures.append(f"tau={tau}: L_FM and ell differ at valuation {_vj(cmpn.difference_valuation)}")
        if not all(ok.values()):
            failures.append(f"tau={tau}: monodromy module invariants fail: {[k for k, v in ok.items() if not v]}")
        if outside != INFINITY and outside < digits:
            failures.append(f"tau={tau}: ell has a component outside K at valuation {outside}")
        rep["eigen"].append(entry)
    return rep


def compute(cfg: RunConfig, with_observed: bool = True) -> dict:
    setup = build_setup(cfg)
    comps = [analyse_component(setup, comp, with_observed) for comp in setup.components]
    failures = [f"{c['label']}: {f}" for c in comps for f in c["failures"]]
    return {"config": cfg.to_json(), "fixture": setup.meta, "components": comps, "ok": not failures, "failures": failures}


def tree_dump(cfg: RunConfig, depth: int) -> dict:
    K = PadicField(cfg.p, cfg.d, cfg.tree_precision, cfg.extra.get("modulus"))
    T = BruhatTitsTree(K)
    edges = []
    if depth < 1:
        raise ValueError("tree depth must be >= 1")
    # depth D lists the edges whose terminus lies at distance D from the base vertex
    for e in T.covering(depth - 1):
        B = T.edge_ball(e)
        edges.append({"edge": e.to_json(), "ball": B.to_json()})
    return {"p": cfg.p, "d": cfg.d, "depth": depth, "edges": edges}


def graph_dump(cfg: RunConfig) -> dict:
    from .schottky import graph_to_json

    setup = build_setup(cfg)
    out = []
    for c in setup.components:
        # edges are listed with both orientations; the counts are of geometric edges
        counts = {"vertex_count": len(c.graph.vertices), "edge_count": len(c.graph.edges) // 2}
        out.append(dict(graph_to_json(c.graph, c.group), label=c.label, **counts))
    return {"components": out}


def cocycles_dump(cfg: RunConfig) -> dict:
    setup = build_setup(cfg)
    out = []
    for comp in setup.components:
        ctx = setup.context(comp)
        basis = ctx.harmonic_basis()
        out.append(
            {
                "label": comp.label,
                "weight": cfg.weight.to_json(),
                "dimension": len(basis),
                "basis": [[v.to_json() for v in c] for c in basis],
            }
        )
    return {"components": out}
