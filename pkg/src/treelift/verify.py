"""Verification driver: runs the identity suite on one graph and builds a report."""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field
from itertools import combinations

from . import identities as ident
from .arborescence import matrix_forest_check, tau_by_minors, tau
from .checks import CheckResult, combine
from .digraph import format_graph, is_strongly_connected
from .exploration import exploration_check, sample_orderings
from .lift import DEFAULT_LIFT_CAP, build_lift, count_walk_lifts, lift_structure_check
from .poly import MultiPoly, simplify
from .samples import DEFAULT_SEED, random_vertex_factors, specializations
from .series import DEFAULT_ORDER

DEFAULT_SYMBOLIC_CAP = 12
DEFAULT_EVAL_POINTS = 3


class Skip(Exception):
    pass


@dataclass
class Config:
    checks: tuple = None
    seed: int = DEFAULT_SEED
    series_order: int = DEFAULT_ORDER
    symbolic_cap: int = DEFAULT_SYMBOLIC_CAP
    eval_points: int = DEFAULT_EVAL_POINTS
    lift_cap: int = DEFAULT_LIFT_CAP
    walk_length: int = 6
    orderings: int = 5


@dataclass
class CheckRecord:
    name: str
    identity: str
    status: str  # pass | fail | skip
    values: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)
    note: str = ""
    seconds: float = 0.0


@dataclass
class VerificationReport:
    source: str
    digest: str
    seed: int
    graph: dict
    records: list
    values: dict
    findings: dict

    def counts(self):
        c = {"pass": 0, "fail": 0, "skip": 0}
        for r in self.records:
            c[r.status] += 1
        return c

    @property
    def ok(self):
        return self.counts()["fail"] == 0


class Context:
    """Lazily computed shared state for one graph."""

    def __init__(self, g, config):
        self.g = g
        self.config = config
        self._lift = None
        self._mtable = None
        self._ks = None
        self._chain = None

    def rng(self, name):
        # one stream per check so that selecting checks does not shift the others
        return random.Random(f"{self.config.seed}:{name}")

    @property
    def lift(self):
        if self._lift is None:
            self._lift = build_lift(self.g, self.config.lift_cap)
        return self._lift

    @property
    def ks(self):
        if self._ks is None:
            self._ks = ident.k_table(self.g)
        return self._ks

    @property
    def mtable(self):
        if self._mtable is None:
            self._mtable = ident.m_prime(self.g, self.ks)
        return self._mtable

    def cases(self, dimension, name, g=None):
        """g itself if it is rational or small enough, else random specializations."""
        g = self.g if g is None else g
        if not g.is_symbolic() or dimension <= self.config.symbolic_cap:
            return [g], "exact symbolic" if g.is_symbolic() else "exact rational"
        k = self.config.eval_points
        return specializations(g, self.rng(name), k), f"{k} random rational points"

    def chain(self):
        """A row-stochastic chain on g's edges (g itself, or its normalization)."""
        if self._chain is None:
            g = self.g
            note = ""
            if g.is_symbolic():
                (g,) = specializations(g, self.rng("chain"), 1)
                note = "random positive point, "
            if g.is_row_stochastic():
                self._chain = (g, note + "input chain")
            else:
                try:
                    self._chain = (ident.associated_chain(g), note + "row-normalized weights")
                except ValueError as exc:
                    raise Skip(str(exc)) from None
        return self._chain


# checks -----------------------------------------------------------------------


def _lift_structure(ctx):
    return lift_structure_check(ctx.g, ctx.lift), ""


def _matrix_forest(ctx):
    g = ctx.g
    cases, note = ctx.cases(g.n, "matrix-forest")
    results = []
    for h in cases:
        for k in range(1, g.n + 1):
            for W in combinations(range(g.n), k):
                results.append(matrix_forest_check(h, W))
        t1, t2 = tau_by_minors(h), tau(h)
        results.append(CheckResult("matrix-tree", t1 == t2, witness={} if t1 == t2 else {"minors": t1, "enumerated": t2}))
    return combine("matrix-forest", results), note


def _m_condition(ctx):
    res = ident.m_condition_check(ctx.g, ctx.mtable, ctx.ks)
    return res, ""


def _exploration(ctx):
    ords = sample_orderings(ctx.g, ctx.config.orderings, ctx.config.seed)
    return exploration_check(ctx.g, ctx.mtable, ords), f"{len(ords)} edge orderings"


def _phi(ctx):
    cases, note = ctx.cases(ctx.lift.graph.n, "phi")
    results = []
    for h in cases:
        lift = ctx.lift if h is ctx.g else build_lift(h, ctx.config.lift_cap)
        results.append(ident.phi_check(h, lift, ctx.mtable))
    res = combine("phi", results, results[0].values)
    return res, note


def _r_factorization(ctx):
    cases, note = ctx.cases(ctx.lift.graph.n, "r-factorization")
    results = []
    for h in cases:
        lift = ctx.lift if h is ctx.g else build_lift(h, ctx.config.lift_cap)
        R = ident.r_polynomial(h, lift)
        results.append(ident.r_factorization_check(h, lift, ctx.mtable, R))
        results.append(ident.linear_coefficient_check(h, lift, R))
    return combine("r-factorization", results, {"R": results[0].values["R"]}), note + "; includes R(0)=1 and the s-coefficient"


def _walk_lifts(ctx):
    n = ctx.config.walk_length
    return count_walk_lifts(ctx.g, ctx.lift, n), f"closed walks up to length {n}"


def _zeta(ctx):
    cases, note = ctx.cases(ctx.g.n, "zeta-series")
    res = combine("zeta-series", [ident.zeta_truncated_check(h, ctx.config.series_order) for h in cases])
    return res, f"order {ctx.config.series_order}, {note}"


def _vertex_zeta(ctx):
    rng = ctx.rng("vertex-zeta")
    cases, note = ctx.cases(ctx.g.n, "vertex-zeta")
    results = []
    for h in cases:
        for _ in range(ctx.config.eval_points):
            s = random_vertex_factors(h.n, rng)
            results.append(ident.vertex_weighted_zeta_check(h, s, ctx.config.series_order, ctx.mtable, ctx.ks))
    return combine("vertex-zeta", results), f"{len(results)} random vertex-factor assignments, {note}"


def _sp_formula(ctx):
    rng = ctx.rng("sp-formula")
    cases, note = ctx.cases(ctx.lift.graph.n, "sp-formula")
    results = []
    for h in cases:
        lift = ctx.lift if h is ctx.g else build_lift(h, ctx.config.lift_cap)
        # one S per specialization, or several S when the check runs once
        for _ in range(ctx.config.eval_points if len(cases) == 1 else 1):
            s = random_vertex_factors(h.n, rng)
            results.append(ident.sp_formula_check(h, s, lift, ctx.mtable))
    return combine("sp-formula", results), f"random rational S, {note}"


def _schrodinger(ctx):
    g = ctx.g
    note = ""
    if g.vweights is None:
        g = g.replace(vweights=tuple(MultiPoly.var(f"y_{v}") for v in range(g.n)))
        note = "symbolic vertex weights y_v; "
    cases, how = ctx.cases(ctx.lift.graph.n, "schrodinger", g)
    results = []
    for h in cases:
        lift = build_lift(h, ctx.config.lift_cap)
        results.append(ident.schrodinger_identity_check(h, lift, ctx.mtable))
    return combine("schrodinger", results), note + how


def _stochastic(fn):
    def run(ctx):
        chain, note = ctx.chain()
        return fn(ctx, chain), note
    return run


def _tau_zeta(ctx, chain):
    return ident.tau_from_zeta_derivative(chain)


def _phi_r1(ctx, chain):
    lift = build_lift(chain, ctx.config.lift_cap)
    phi = ident.phi_via_product(chain, ctx.mtable)
    return ident.phi_r1_check(chain, phi, ident.r_polynomial(chain, lift))


def _stationarity(ctx, chain):
    return ident.tree_weight_stationarity_check(chain, build_lift(chain, ctx.config.lift_cap))


CHECKS = [
    ("lift-structure", "lift vertices = arborescences of G; out-degrees, weights and diagonal inherited from roots", _lift_structure),
    ("matrix-forest", "det L^(W) = total weight of forests rooted at W, for every nonempty W", _matrix_forest),
    ("m-condition", "k(W) - 1 = sum of m'(W') over proper strongly connected W' containing W", _m_condition),
    ("exploration", "#{t at w : psi(t) = W} = m'(W) and #{t at w : psi(t) >= W} = k(W)", _exploration),
    ("phi", "tau(lift)/tau(G) = prod Psi(V-W)^m'(W) = det Lhat^(t)/w(t) for all t", _phi),
    ("r-factorization", "det(I - s Mhat)/det(I - s M) = prod det((I - s M)|W)^m'(W)", _r_factorization),
    ("walk-lifts", "number of lifts of a based closed walk = k(support)", _walk_lifts),
    ("zeta-series", "exp(sum s^n/n tr M^n) = 1/det(I - s M)", _zeta),
    ("vertex-zeta", "exp(sum u^n/n tr (S M)^n) = 1/det(I - u S M)", _vertex_zeta),
    ("sp-formula", "det(I - Shat Mhat) = det(I - S M) prod det((I - S M)|W)^m'(W)", _sp_formula),
    ("schrodinger", "det Hhat = prod over strongly connected W of det(H|W)^m'(W)", _schrodinger),
    ("tau-zeta-derivative", "d/ds det(I - s P) at s=1 = -tau(G)", _stochastic(_tau_zeta)),
    ("phi-r1", "R(1) = Phi for a row-stochastic chain", _stochastic(_phi_r1)),
    ("stationarity", "(w(t))_t Phat = (w(t))_t", _stochastic(_stationarity)),
]

CHECK_NAMES = [name for name, _, _ in CHECKS]


def _stringify(v):
    if isinstance(v, dict):
        return {str(k): _stringify(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_stringify(x) for x in v]
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    return str(simplify(v))


def run_checks(g, config=None, source="<memory>", data=None):
    """Run the selected checks and return a VerificationReport."""
    config = Config() if config is None else config
    if not is_strongly_connected(g):
        raise ValueError("graph is not strongly connected")
    selected = CHECK_NAMES if config.checks is None else list(config.checks)
    unknown = [c for c in selected if c not in CHECK_NAMES]
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(unknown)}")
    ctx = Context(g, config)
    ctx.lift  # fail fast on the size cap
    records = []
    for name, formula, fn in CHECKS:
        if name not in selected:
            continue
        t0 = time.perf_counter()
        try:
            res, note = fn(ctx)
            status = "pass" if res.passed else "fail"
            values, witness = res.values, res.witness
        except Skip as exc:
            status, values, witness, note = "skip", {}, {}, str(exc)
        records.append(
            CheckRecord(name, formula, status, _stringify(values), _stringify(witness), note, time.perf_counter() - t0)
        )
    values = {}
    for r in records:
        if r.name == "phi":
            for key in ("phi", "tau", "tau_lift"):
                if key in r.values:
                    values[key] = r.values[key]
    text = data if data is not None else format_graph(g)
    digest = hashlib.sha256(text.encode() if isinstance(text, str) else text).hexdigest()
    graph = {
        "vertices": g.n,
        "edges": len(g.edges),
        "variables": len(g.variables()),
        "stochastic": g.is_row_stochastic(),
        "lift_vertices": ctx.lift.graph.n,
        "lift_edges": len(ctx.lift.graph.edges),
    }
    findings = {"negative_m": ident.negative_exponents(ctx.mtable)}
    return VerificationReport(source, digest, config.seed, graph, records, values, findings)


# formatting ---------------------------------------------------------------------


def _kv(d):
    return "\t".join(f"{k}={json.dumps(v) if not isinstance(v, str) else v}" for k, v in d.items())


def format_text(rep, timings=False):
    lines = [
        "report\ttreelift-verify",
        f"input\t{rep.source}\tsha256={rep.digest}",
        f"seed\t{rep.seed}",
        "graph\t" + _kv({k: rep.graph[k] for k in ("vertices", "edges", "variables", "stochastic")}),
        f"lift\tvertices={rep.graph['lift_vertices']}\tedges={rep.graph['lift_edges']}",
    ]
    for r in rep.records:
        line = f"check\t{r.name}\t{r.status.upper()}\t{r.identity}"
        if r.note:
            line += f"\t[{r.note}]"
        if timings:
            line += f"\t{r.seconds:.3f}s"
        lines.append(line)
        if r.status == "fail":
            for k, v in r.witness.items():
                lines.append(f"witness\t{r.name}\t{k}={v if isinstance(v, str) else json.dumps(v)}")
    for k, v in rep.values.items():
        lines.append(f"value\t{k}\t{v}")
    neg = rep.findings["negative_m"]
    lines.append("finding\tnegative-m\t" + (json.dumps(neg) if neg else "none"))
    c = rep.counts()
    lines.append(f"summary\tpass={c['pass']}\tfail={c['fail']}\tskip={c['skip']}")
    return "\n".join(lines) + "\n"


def format_structured(rep, timings=False):
    doc = {
        "input": {"source": rep.source, "sha256": rep.digest},
        "seed": rep.seed,
        "graph": rep.graph,
        "checks": [
            {
                "name": r.name,
                "identity": r.identity,
                "status": r.status,
                "note": r.note,
                "values": r.values,
                "witness": r.witness,
                **({"seconds": round(r.seconds, 6)} if timings else {}),
            }
            for r in rep.records
        ],
        "values": rep.values,
        "findings": rep.findings,
        "summary": rep.counts(),
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
