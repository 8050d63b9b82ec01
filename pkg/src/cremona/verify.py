"""Replay of every desk-checkable claim about ψ, χ and their relatives.

Each check returns a status in {pass, fail, skipped}; an exception inside a
check is recorded as a failure and the run continues.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .algebra.grammar import parse_poly
from .basepoints import b_count, base_point_tree, proper_base_points
from .bubble import BubblePoint
from .dynamics import (
    NOT_REGULARIZABLE, REGULARIZABLE, Tracker, b_sequence_direct, b_sequence_tracked,
    degree_sequence, mu_estimate, regularizability_verdict,
)
from .planemap import (
    DEFAULT_DEGREE_CAP, Automorphism, PlaneMap, ProjPoint, act, compose, contracted_curves,
    inverse, is_birational, parse_map,
)
from .properties import run_properties
from .registry import CHI_TEXT, PSI_TEXT, chi, chi_np, psi, random_automorphisms, sigma

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


class Skip(Exception):
    pass


@dataclass
class CheckResult:
    index: int
    name: str
    status: str
    detail: str
    seconds: float
    payload: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"index": self.index, "name": self.name, "status": self.status,
                "detail": self.detail, "seconds": round(self.seconds, 3),
                "payload": self.payload}


@dataclass
class VerifyReport:
    checks: List[CheckResult]
    seed: int
    horizon: Optional[int]

    def counts(self) -> Dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def summary(self) -> str:
        n = self.counts()
        total = sum(c.seconds for c in self.checks)
        return (f"{n[PASS]} passed, {n[FAIL]} failed, {n[SKIPPED]} skipped "
                f"in {total:.1f}s")

    def exit_code(self) -> int:
        return 4 if self.counts()[FAIL] else 0

    def to_json(self) -> dict:
        return {"seed": self.seed, "horizon": self.horizon, "counts": self.counts(),
                "checks": [c.to_json() for c in self.checks]}

    def table(self) -> str:
        rows = [f"{'#':>3}  {'status':<8} {'time':>7}  check"]
        for c in self.checks:
            status = c.status if c.status != SKIPPED else "skipped"
            rows.append(f"{c.index:>3}  {status:<8} {c.seconds:6.1f}s  {c.name}: {c.detail}")
        rows.append(self.summary())
        return "\n".join(rows)


class _Context:
    """Shared objects so that ψ's tree, inverse and tracker are built once."""

    def __init__(self, seed: int, horizon: Optional[int], degree_cap: int):
        self.seed = seed
        self.degree_cap = degree_cap
        self.h_psi = 6 if horizon is None else horizon
        self.h_chi = 4 if horizon is None else horizon
        self._cache: Dict[str, object] = {}

    def get(self, key: str, build: Callable[[], object]):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def psi(self) -> PlaneMap:
        return self.get("psi", lambda: parse_map(PSI_TEXT))

    @property
    def psi_inv(self) -> PlaneMap:
        return self.get("psi_inv", lambda: inverse(self.psi))

    @property
    def tracker(self) -> Tracker:
        return self.get("tracker", lambda: Tracker(self.psi, self.degree_cap, f_inv=self.psi_inv))

    def mu(self, key: str, f: PlaneMap, horizon: int):
        return self.get(f"mu:{key}:{horizon}", lambda: mu_estimate(f, horizon))

    def need_persistence(self, horizon: int):
        if horizon < 2:
            raise Skip("horizon too small")


def _monic_set(polys) -> set:
    return {p.monic().to_str() for p in polys}


def _c1(ctx: _Context):
    f = ctx.psi
    ind = proper_base_points(f, seed=ctx.seed)
    ok = f.degree == 5 and [p for p, _ in ind] == [ProjPoint.of(0, 1, 0)]
    return ok, f"degree {f.degree}, Ind = {[str(p) for p, _ in ind]}", {
        "degree": f.degree, "ind": [[str(p), m] for p, m in ind]}


def _c2(ctx: _Context):
    t = base_point_tree(ctx.psi)
    over = all(n.point.anchor == ProjPoint.of(0, 1, 0) for n in t)
    ok = len(t) == 9 and t.is_single_chain() and over
    return ok, f"{len(t)} nodes, single chain: {t.is_single_chain()}", t.to_json()


def _c3(ctx: _Context):
    t = base_point_tree(ctx.psi)
    edges = set(t.proximity_edges())
    expected = {(i, i - 1) for i in range(2, 10)} | {(3, 1)}
    return edges == expected, f"satellite edges {t.satellite_edges()}", {
        "edges": sorted(edges)}


def _c4(ctx: _Context):
    t = base_point_tree(ctx.psi_inv)
    edges = set(t.proximity_edges())
    expected = {(i, i - 1) for i in range(2, 10)}
    q3 = t.node(3).proximate if len(t) >= 3 else ()
    ok = edges == expected and q3 == (2,)
    return ok, f"{len(t)} nodes, q_3 proximate to {list(q3)}", {"edges": sorted(edges)}


def _c5(ctx: _Context):
    t = base_point_tree(ctx.psi)
    ms = t.multiplicities
    rep = t.noether()
    ok = ms == [4] + [1] * 8 and sum(ms) == 12 and sum(m * m for m in ms) == 24 and rep.passed
    return ok, f"m = {ms}; {rep.summary()}", rep.to_json()


def _c6(ctx: _Context):
    curves = contracted_curves(ctx.psi, seed=ctx.seed)
    eqs = _monic_set(c.equation for c in curves)
    want = _monic_set([parse_poly("x"), parse_poly("x^2*y - z^3")])
    images = {str(c.image) for c in curves}
    ok = eqs == want and images == {"(1:0:0)"}
    return ok, f"{sorted(eqs)} -> {sorted(images)}", {"curves": [c.to_json() for c in curves]}


def _c7(ctx: _Context):
    curves = contracted_curves(ctx.psi_inv, seed=ctx.seed)
    eqs = _monic_set(c.equation for c in curves)
    want = _monic_set([parse_poly("y"), parse_poly("z^2 - x*y")])
    return eqs == want, f"{sorted(eqs)} -> {sorted(str(c.image) for c in curves)}", {
        "curves": [c.to_json() for c in curves]}


def _c8(ctx: _Context):
    a, b = b_count(ctx.psi), b_count(ctx.psi_inv)
    return a == b == 9, f"b(psi) = {a}, b(psi^-1) = {b}", {"b": a, "b_inv": b}


def _c9(ctx: _Context):
    tracked, methods = b_sequence_tracked(ctx.psi, 2, tracker=ctx.tracker)
    direct = b_sequence_direct(ctx.psi, 2, ctx.degree_cap)
    ok = tracked == direct and all(m == "tracked" for m in methods)
    return ok, f"tracked {tracked} ({methods}), direct {direct}", {
        "tracked": tracked, "direct": direct}


def _c10(ctx: _Context):
    H = ctx.h_psi
    ctx.need_persistence(H)
    tr = ctx.tracker
    p3 = base_point_tree(ctx.psi).node(3).point
    fwd = [tr.contains(p3, i) for i in range(1, H + 1)]
    bwd = [tr.contains(p3, -i) for i in range(1, H + 1)]
    mu = ctx.get(f"mu:psi:{H}", lambda: mu_estimate(ctx.psi, H, tracker=tr))
    verdict = regularizability_verdict(ctx.psi, H, mu=mu)
    ok = (all(x is True for x in fwd) and all(x is False for x in bwd)
          and mu.lower_bound >= 1 and verdict.level == NOT_REGULARIZABLE)
    return ok, (f"p_3 in Base(psi^i): {fwd}; in Base(psi^-i): {bwd}; "
                f"mu >= {mu.lower_bound} (upper {mu.upper_bound}); {verdict.level}"), {
        "forward": fwd, "backward": bwd, "mu": mu.to_json(), "verdict": verdict.level}


def _c11(ctx: _Context):
    H = ctx.h_psi
    tr = ctx.tracker
    q3 = base_point_tree(ctx.psi_inv).node(3).point
    fwd = [tr.contains(q3, i) for i in range(1, H + 1)]
    return all(x is False for x in fwd), f"q_3 in Base(psi^i), i=1..{H}: {fwd}", {"forward": fwd}


def _c12(ctx: _Context):
    H = ctx.h_chi
    ctx.need_persistence(H)
    rows = []
    ok = True
    for A in random_automorphisms(ctx.seed, 5):
        f = act(A, ctx.psi, "left")
        degs = degree_sequence(f, 2, ctx.degree_cap)
        mu = mu_estimate(f, H)
        rows.append({"A": str(A), "degrees": degs, "mu_lower_bound": mu.lower_bound})
        ok &= degs == [5, 25] and mu.lower_bound >= 1
    detail = "; ".join(f"deg {r['degrees']}, mu >= {r['mu_lower_bound']}" for r in rows)
    return ok, detail, {"rows": rows}


def _c13(ctx: _Context):
    H = ctx.h_chi
    f = parse_map(CHI_TEXT)
    same = chi_np(2, 3) == f
    bir = is_birational(f)
    if H < 2:
        raise Skip("horizon too small")
    mu = ctx.mu("chi", f, H)
    ok = f.degree == 6 and bir and same and mu.lower_bound >= 1
    return ok, (f"degree {f.degree}, birational {bir}, equals shear composition {same}, "
                f"mu >= {mu.lower_bound}"), {"mu": mu.to_json()}


def _c14(ctx: _Context):
    H = ctx.h_chi
    ctx.need_persistence(H)
    rows = []
    ok = True
    for n, p in ((2, 3), (2, 2), (3, 2)):
        f = chi_np(n, p)
        mu = ctx.mu("chi" if (n, p) == (2, 3) else f"chi_{n}_{p}", f, H)
        bir = is_birational(f)
        rows.append({"n": n, "p": p, "degree": f.degree, "birational": bir,
                     "mu_lower_bound": mu.lower_bound})
        ok &= f.degree == n * p and bir and mu.lower_bound >= 1
    detail = "; ".join(f"({r['n']},{r['p']}): deg {r['degree']}, mu >= {r['mu_lower_bound']}"
                       for r in rows)
    return ok, detail, {"rows": rows}


def _c15(ctx: _Context):
    s = sigma()
    involution = compose(s, s).is_identity()
    seq = b_sequence_direct(s, 2)
    H = max(ctx.h_psi, 2)
    mu = mu_estimate(s, H)
    verdict = regularizability_verdict(s, H, mu=mu)
    A = random_automorphisms(ctx.seed, 1)[0].as_map()
    mu_a = mu_estimate(A, H)
    verdict_a = regularizability_verdict(A, H, mu=mu_a)
    ok = (involution and seq == [3, 0] and mu.exact and mu.upper_bound == 0
          and verdict.level == REGULARIZABLE and mu_a.exact and mu_a.upper_bound == 0
          and verdict_a.level == REGULARIZABLE)
    return ok, (f"sigma^2 = id: {involution}; b = {seq}; mu = {mu.upper_bound}; "
                f"{verdict.level}; degree-1 map: mu = {mu_a.upper_bound}, {verdict_a.level}"), {
        "b": seq, "mu": mu.to_json(), "verdict": verdict.level}


def _c16(ctx: _Context):
    H = ctx.h_psi
    ctx.need_persistence(H)
    base = ctx.get(f"mu:psi:{H}", lambda: mu_estimate(ctx.psi, H, tracker=ctx.tracker))
    b_psi, _ = b_sequence_tracked(ctx.psi, 2, tracker=ctx.tracker)
    rows = []
    ok = True
    for A in random_automorphisms(ctx.seed + 1, 3):
        g = act(A, ctx.psi, "conjugate")
        mu = mu_estimate(g, H, b_horizon=max(H, 2))
        b_g = mu.b_sequence[:2]
        rows.append({"A": str(A), "mu_lower_bound": mu.lower_bound, "b": b_g})
        ok &= mu.lower_bound == base.lower_bound and b_g == b_psi
    detail = "; ".join(f"mu >= {r['mu_lower_bound']}, b = {r['b']}" for r in rows)
    return ok, f"psi: mu >= {base.lower_bound}, b = {b_psi}; conjugates: {detail}", {"rows": rows}


def _c17(ctx: _Context):
    rep = run_properties(ctx.seed, per_property=25)
    return rep.passed and rep.instances >= 100, (
        f"{rep.instances} instances, {len(rep.failures)} failures"), rep.to_json()


CHECKS = [
    ("psi parses, degree 5, Ind = {(0:1:0)}", _c1),
    ("Base(psi) is a 9-point chain over (0:1:0)", _c2),
    ("proximity of Base(psi): chain plus p_3 -> p_1", _c3),
    ("proximity of Base(psi^-1): pure chain", _c4),
    ("multiplicities (4,1^8) and Noether equalities", _c5),
    ("Exc(psi) = {x, x^2y - z^3} -> (1:0:0)", _c6),
    ("Exc(psi^-1) = {y, z^2 - xy}", _c7),
    ("b(psi) = b(psi^-1) = 9", _c8),
    ("tracked and direct b-sequences agree for k = 1, 2", _c9),
    ("p_3 persists; mu(psi) >= 1; not regularizable", _c10),
    ("q_3 never in Base(psi^i)", _c11),
    ("random A: deg (A psi)^n = 5^n and mu(A psi) >= 1", _c12),
    ("chi: degree 6, birational, shear factorization, mu >= 1", _c13),
    ("chi_{n,p} family: degree np, birational, mu >= 1", _c14),
    ("controls: sigma and degree-1 maps have mu = 0", _c15),
    ("conjugation invariance of mu and b", _c16),
    ("randomized property suite", _c17),
]


def run_verify(seed: int = 0, horizon: Optional[int] = None,
               degree_cap: int = DEFAULT_DEGREE_CAP, only: Optional[List[int]] = None,
               progress: Optional[Callable[[CheckResult], None]] = None) -> VerifyReport:
    ctx = _Context(seed, horizon, degree_cap)
    results = []
    for i, (name, fn) in enumerate(CHECKS, 1):
        if only and i not in only:
            continue
        t = time.perf_counter()
        try:
            ok, detail, payload = fn(ctx)
            status = PASS if ok else FAIL
        except Skip as s:
            status, detail, payload = SKIPPED, str(s), {}
        except Exception as exc:  # a failing check never aborts the run
            status, detail, payload = FAIL, f"{type(exc).__name__}: {exc}", {}
        res = CheckResult(i, name, status, detail, time.perf_counter() - t, payload)
        results.append(res)
        if progress:
            progress(res)
    return VerifyReport(results, seed, horizon)


def dumps(report: VerifyReport) -> str:
    return json.dumps(report.to_json(), indent=2, default=str)
