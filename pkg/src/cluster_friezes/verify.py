"""Cross-verification suites: every object is recomputed along at least two
independent routes and compared exactly.  The CLI `verify` subcommand and the
acceptance tests both run these."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .errors import BudgetExceeded
from .finite import (
    d_duality_check,
    decompose_hammocks,
    fim_recursion,
    finite_context,
    mono_from_gvector_A,
    named_cartan,
    pairing,
    reconstruct_from_hammocks,
    x_from_rho,
    y_from_delta,
)
from .friezes import (
    FriezeFunction,
    PLMap,
    f_from_trop_point,
    hammock,
    k_from_trop_point,
    shift_trop,
    slice_step,
)
from .laurent import RationalFunction
from .mutation import (
    canonical_address,
    enumerate_exchange_graph,
    extract_gcf,
    is_global_Y_monomial,
    seed_pattern,
    separation_check,
)
from .tropical import TropPoint, check_admissible_A, reexpress_Y

DEFAULT_TYPES = ("A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2")
SMALL_TYPES = ("A2", "A3", "B2", "G2")

EXPECTED_VARIABLE_COUNTS = {
    "A2": 5, "A3": 9, "A4": 14, "B2": 6, "B3": 12, "C3": 12, "D4": 16, "G2": 8,
}


@dataclass
class SuiteResult:
    suite: str
    passed: bool
    elapsed: float
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "suite": self.suite,
            "passed": self.passed,
            "elapsed_sec": round(self.elapsed, 3),
            "details": self.details,
        }


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.time()
        passed, details = fn(*args, **kwargs)
        return SuiteResult(fn.__name__.replace("suite_", "").replace("_", "-"),
                           passed, time.time() - t0, details)

    return wrapper


def _rand_coords(rng, r, lo=-3, hi=3):
    return tuple(rng.randint(lo, hi) for _ in range(r))


def _rank2_y_chain():
    """The five expected seeds of the rank-2 five-step mutation chain, built
    directly from field arithmetic."""
    y1 = RationalFunction.variable(1, 2)
    y2 = RationalFunction.variable(2, 2)
    one = RationalFunction.one(2)
    return [
        (y1, y2),
        (y1 ** -1, y2 * (one + y1)),
        ((one + y2 + y1 * y2) / y1, (y2 * (one + y1)) ** -1),
        (y1 / (one + y2 + y1 * y2), (one + y2) / (y1 * y2)),
        (y2 ** -1, y1 * y2 / (one + y2)),
        (y2, y1),
    ]


@_timed
def suite_remark_not_in(**_):
    """Rank-2 reproduction: 10 Y-variables, the 5-step chain, 5 globals."""
    b = ((0, -1), (1, 0))
    graph = enumerate_exchange_graph("Y", b, 100)
    variables = graph.cluster_variables()
    details = {"y_variables": len(variables), "y_seeds": len(graph.seeds)}
    ok = len(variables) == 10 and len(graph.seeds) == 5

    pattern = seed_pattern("Y", b)
    word = []
    expected = _rank2_y_chain()
    chain_ok = pattern.seed_at(()).cluster == expected[0]
    for step, k in enumerate([1, 2, 1, 2, 1], start=1):
        word.append(k)
        chain_ok = chain_ok and pattern.seed_at(tuple(word)).cluster == expected[step]
    details["chain_matches"] = chain_ok
    ok = ok and chain_ok

    y1 = RationalFunction.variable(1, 2)
    y2 = RationalFunction.variable(2, 2)
    one = RationalFunction.one(2)
    listed_globals = {
        y1,
        y2 * (one + y1),
        (one + y2 + y1 * y2) / y1,
        (one + y2) / (y1 * y2),
        y2 ** -1,
    }
    globals_by_column = set()
    globals_by_expansion = set()
    addresses = sorted(graph.addresses, key=len)
    for y, (addr, i) in variables.items():
        exps = tuple(1 if j == i - 1 else 0 for j in range(2))
        if is_global_Y_monomial(b, addr, exps):
            globals_by_column.add(y)
        # independent route: expand in every chart and test Laurentness;
        # stored entries are written in root-chart coordinates
        laurent_everywhere = True
        for target in addresses:
            expr = _expand_at(y, (), target, pattern)
            if not expr.is_laurent():
                laurent_everywhere = False
                break
        if laurent_everywhere:
            globals_by_expansion.add(y)
    details["globals_by_column"] = len(globals_by_column)
    details["globals_by_expansion"] = len(globals_by_expansion)
    ok = ok and globals_by_column == globals_by_expansion == listed_globals
    return ok, details


def _expand_at(element, src, dst, pattern):
    """Re-express an element given in the chart at src into the chart at dst
    (walk through the common prefix)."""
    lca = 0
    while lca < len(src) and lca < len(dst) and src[lca] == dst[lca]:
        lca += 1
    expr = element
    cur = src
    while len(cur) > lca:
        expr = reexpress_Y(expr, pattern, cur, cur[-1])
        cur = cur[:-1]
    for pos in range(lca, len(dst)):
        expr = reexpress_Y(expr, pattern, cur, dst[pos])
        cur = cur + (dst[pos],)
    return expr


@_timed
def suite_closure_counts(types=DEFAULT_TYPES, budget=10_000, **_):
    """Variable counts of the finite exchange graphs against the root count."""
    details = {}
    ok = True
    for name in types:
        ctx = finite_context(named_cartan(name))
        try:
            graph = ctx.graph("A", ctx.belts.bt, budget)
        except BudgetExceeded:
            details[name] = "budget exceeded"
            ok = False
            continue
        count = len(graph.cluster_variables())
        expected = ctx.roots.rank + len(ctx.roots.positive_roots)
        details[name] = {"variables": count, "expected": expected}
        ok = ok and count == expected
        if name in EXPECTED_VARIABLE_COUNTS:
            ok = ok and count == EXPECTED_VARIABLE_COUNTS[name]
    return ok, details


@_timed
def suite_periodicity(types=DEFAULT_TYPES, trials=200, rng_seed=0, **_):
    """Gliding-symmetry invariance of generic patterns and random functions."""
    rng = random.Random(rng_seed)
    details = {"rng_seed": rng_seed}
    ok = True
    for name in types:
        cartan = named_cartan(name)
        ctx = finite_context(cartan)
        r = cartan.rank
        m_hi = 2 * max(ctx.roots.orbit_lengths) + 4
        fa = ctx.fa
        bad = 0

        generic_bad = 0
        for i in range(1, r + 1):
            for m in range(-2, m_hi + 1):
                j, n = fa.apply(i, m)
                if ctx.belts.x_sv(i, m) != ctx.belts.x_sv(j, n):
                    generic_bad += 1
                if ctx.belts.y(i, m) != ctx.belts.y(j, n):
                    generic_bad += 1

        at = cartan.transpose()
        for trial in range(trials):
            kind = ("tropical-frieze", "cluster-additive")[trial % 2]
            base = (cartan, at)[(trial // 2) % 2]
            f = FriezeFunction.from_slice(kind, base, _rand_coords(rng, r))
            for i in range(1, r + 1):
                for m in range(-2, m_hi + 1):
                    j, n = fa.apply(i, m)
                    if f.value(i, m) != f.value(j, n):
                        bad += 1
        details[name] = {"generic_violations": generic_bad, "violations": bad}
        ok = ok and generic_bad == 0 and bad == 0
    return ok, details


@_timed
def suite_realization(types=SMALL_TYPES, trials=100, rng_seed=0, **_):
    """Coordinate readback along the belt equals the defining recursions."""
    rng = random.Random(rng_seed)
    details = {"rng_seed": rng_seed}
    ok = True
    for name in types:
        cartan = named_cartan(name)
        ctx = finite_context(cartan)
        r = cartan.rank
        bad = 0
        for _ in range(trials):
            coords = _rand_coords(rng, r)
            dsv = TropPoint("A", ctx.belts.bt, coords)
            f = f_from_trop_point(dsv, cartan)
            f_rec = FriezeFunction.from_slice(
                "tropical-frieze", cartan.transpose(), f.slice_at(0)
            )
            if not f.agrees_with(f_rec, -6, 6):
                bad += 1
            rho = TropPoint("Y", ctx.belts.b, coords)
            k = k_from_trop_point(rho, cartan)
            k_rec = FriezeFunction.from_slice("cluster-additive", cartan, k.slice_at(0))
            if not k.agrees_with(k_rec, -6, 6):
                bad += 1
        details[name] = {"disagreements": bad}
        ok = ok and bad == 0
    return ok, details


@_timed
def suite_pairing(types=SMALL_TYPES, trials=50, rng_seed=0, **_):
    """Triple agreement of the duality pairing plus the explicit monomial
    formulas (each call is internally cross-checked and raises on mismatch)."""
    rng = random.Random(rng_seed)
    details = {"rng_seed": rng_seed}
    ok = True
    for name in types:
        cartan = named_cartan(name)
        ctx = finite_context(cartan)
        r = cartan.rank
        checked = 0
        for _ in range(trials):
            delta = TropPoint("A", ctx.belts.bt, _rand_coords(rng, r))
            rho = TropPoint("Y", ctx.belts.b, _rand_coords(rng, r))
            pairing(cartan, delta, rho)
            _, expr = x_from_rho(cartan, rho)
            _, _, mono = mono_from_gvector_A(cartan, rho)
            if expr != mono:
                ok = False
            y_from_delta(cartan, delta)
            checked += 1
        details[name] = {"pairs": checked}
    return ok, details


@_timed
def suite_decomposition(types=DEFAULT_TYPES, trials=100, rng_seed=0, **_):
    """Hammock decomposition reconstructs exactly; hammocks satisfy the
    tropical-frieze recursion."""
    rng = random.Random(rng_seed)
    details = {"rng_seed": rng_seed}
    ok = True
    for name in types:
        cartan = named_cartan(name)
        ctx = finite_context(cartan)
        r = cartan.rank
        dom = ctx.domain()
        m_hi = max(m for _, m in dom)
        for i, m in dom:
            h = hammock(cartan, i, m)
            as_frieze = FriezeFunction.from_values("tropical-frieze", cartan, h.value)
            if not as_frieze.satisfies_recursion(-2, m_hi + 2):
                ok = False
        bad = 0
        for _ in range(trials):
            k = FriezeFunction.from_slice(
                "cluster-additive", cartan, _rand_coords(rng, r)
            )
            parts = decompose_hammocks(cartan, k)
            rebuilt = reconstruct_from_hammocks(cartan, parts)
            if any(rebuilt.value(i, m) != k.value(i, m) for i, m in dom):
                bad += 1
        details[name] = {"failures": bad}
        ok = ok and bad == 0
    return ok, details


@_timed
def suite_d_duality(types=SMALL_TYPES, **_):
    details = {}
    ok = True
    for name in types:
        bad = d_duality_check(named_cartan(name))
        details[name] = {"violations": len(bad)}
        ok = ok and not bad
    return ok, details


@_timed
def suite_fpoly_separation(types=DEFAULT_TYPES, **_):
    """Coefficient-polynomial recursion against the principal-coefficient
    pattern, and the separation identity at every enumerated vertex."""
    details = {}
    ok = True
    for name in types:
        cartan = named_cartan(name)
        ctx = finite_context(cartan)
        r = cartan.rank
        table = fim_recursion(cartan)
        mismatches = 0
        for (i, m), poly in table.items():
            gcf = extract_gcf(ctx.belts.b, canonical_address(i, m, r))
            if gcf.fpolys[i - 1] != poly:
                mismatches += 1
        sep_fail = 0
        for seed in ctx.y_graph().seeds.values():
            if not separation_check(ctx.belts.b, seed.address):
                sep_fail += 1
        details[name] = {"fpoly_mismatches": mismatches, "separation_failures": sep_fail}
        ok = ok and mismatches == 0 and sep_fail == 0
    return ok, details


@_timed
def suite_shift_laws(types=SMALL_TYPES, trials=1000, rng_seed=0, **_):
    """Slice stepping, piecewise-linear round trips, and the tropical shift."""
    rng = random.Random(rng_seed)
    details = {"rng_seed": rng_seed}
    ok = True
    per_type = max(1, trials // len(types))
    for name in types:
        cartan = named_cartan(name)
        ctx = finite_context(cartan)
        r = cartan.rank
        eplus, eminus = PLMap(cartan, "+"), PLMap(cartan, "-")
        bad = 0
        for _ in range(per_type):
            v = _rand_coords(rng, r, -6, 6)
            if eplus.invert(eplus.apply(v)) != v or eminus.invert(eminus.apply(v)) != v:
                bad += 1
            k = FriezeFunction.from_slice("cluster-additive", cartan, v)
            if slice_step(cartan, v) != k.slice_at(1):
                bad += 1
            rho = TropPoint("Y", ctx.belts.b, _rand_coords(rng, r))
            shifted = shift_trop(rho, cartan)
            k0 = k_from_trop_point(rho, cartan)
            k1 = k_from_trop_point(shifted, cartan)
            if any(
                k1.value(i, m) != k0.value(i, m - 1)
                for i in range(1, r + 1)
                for m in range(-3, 4)
            ):
                bad += 1
            reanchored = TropPoint(
                "Y", ctx.belts.b, rho.at_root(), canonical_address(1, 1, r)
            )
            if shifted != reanchored:
                bad += 1
        details[name] = {"failures": bad}
        ok = ok and bad == 0
    return ok, details


@_timed
def suite_admissibility(types=("A2", "B2"), rng_seed=0, **_):
    """Finite-type characterization: cluster monomials pass against their
    g-vectors at full depth, two-term sums fail against every sampled point."""
    rng = random.Random(rng_seed)
    details = {"rng_seed": rng_seed}
    ok = True
    for name in types:
        cartan = named_cartan(name)
        ctx = finite_context(cartan)
        r = cartan.rank
        depth = 2 * len(ctx.a_graph().seeds)
        checked = 0
        for seed in ctx.a_graph().seeds.values():
            exp_sets = [tuple(1 if j == i else 0 for j in range(r)) for i in range(r)]
            exp_sets.append(tuple(1 for _ in range(r)))
            exp_sets.append(tuple(2 if j == 0 else 1 for j in range(r)))
            for exps in exp_sets:
                mono = RationalFunction.one(r)
                for x, e in zip(seed.cluster, exps):
                    mono = mono * x**e
                rho = TropPoint(
                    "Y", ctx.belts.b, tuple(-e for e in exps), seed.address
                )
                if check_admissible_A(mono, rho, depth) is not True:
                    ok = False
                checked += 1
        sums_checked = 0
        x1 = RationalFunction.variable(1, r)
        x2 = RationalFunction.variable(2, r)
        two_term = x1 + x2
        for _ in range(25):
            rho = TropPoint("Y", ctx.belts.b, _rand_coords(rng, r))
            if check_admissible_A(two_term, rho, depth) is not False:
                ok = False
            sums_checked += 1
        details[name] = {"monomials": checked, "sums": sums_checked}
    return ok, details


SUITES = {
    "remark-not-in": suite_remark_not_in,
    "closure-counts": suite_closure_counts,
    "periodicity": suite_periodicity,
    "realization": suite_realization,
    "pairing": suite_pairing,
    "decomposition": suite_decomposition,
    "d-duality": suite_d_duality,
    "fpoly-separation": suite_fpoly_separation,
    "shift-laws": suite_shift_laws,
    "admissibility": suite_admissibility,
}


def run_suite(name, **kwargs) -> SuiteResult:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choices: {sorted(SUITES)}")
    kwargs = {k: v for k, v in kwargs.items() if v is not None}
    return SUITES[name](**kwargs)


def run_all(parallel=True, **kwargs):
    """Run every suite; independent suites execute concurrently (the shared
    pattern caches are lock-protected) and results keep the registry order."""
    if not parallel:
        return [run_suite(name, **kwargs) for name in SUITES]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=4) as pool:
        futures = [pool.submit(run_suite, name, **kwargs) for name in SUITES]
        return [f.result() for f in futures]
