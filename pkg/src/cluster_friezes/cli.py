"""Command-line front end.

Subcommands: frieze, mutate, trop, pairing, monomial, decompose, hammock,
fpoly, verify.  Tables are emitted as TSV (rows indexed by i, columns by m)
or JSON; all randomness is seeded and the seed is echoed in the output.

Exit codes: 0 success / verification passed, 1 verification failure,
2 invalid input, 3 budget or overflow, 4 internal route disagreement.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    BudgetExceeded,
    InternalDisagreement,
    NotFiniteType,
    TropOverflow,
)
from .finite import (
    decompose_hammocks,
    fim_recursion,
    finite_context,
    mono_from_gvector_A,
    mono_from_gvector_Y,
    named_cartan,
    pairing,
    reconstruct_from_hammocks,
    x_from_rho,
    y_from_delta,
)
from .friezes import (
    CartanMatrix,
    FriezeFunction,
    belts,
    hammock,
)
from .mutation import (
    MutationMatrix,
    canonical_address,
    mutate_matrix,
    reduce_word,
    seed_at,
)
from .tropical import TropPoint, principal_wide_root
from .verify import SUITES, run_all, run_suite


def _parse_ints(text):
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")


def _parse_window(text):
    lo, _, hi = text.partition("..")
    return int(lo), int(hi)


def _load_cartan(args) -> CartanMatrix:
    src = args.cartan
    if src.startswith("[") or src.endswith(".json"):
        if src.endswith(".json"):
            with open(src) as fh:
                data = json.load(fh)
        else:
            data = json.loads(src)
        if isinstance(data, dict):
            data = data["A"]
        return CartanMatrix(data)
    return named_cartan(src)


def _emit_table(args, rows, header):
    """rows: list of (label, values); header: column labels."""
    if args.format == "json":
        payload = {
            "columns": list(header),
            "rows": [{"i": label, "values": list(vals)} for label, vals in rows],
        }
        print(json.dumps(payload, sort_keys=True))
    else:
        print("\t".join(["i\\m"] + [str(h) for h in header]))
        for label, vals in rows:
            print("\t".join([str(label)] + [str(v) for v in vals]))


def _frieze_table(args, f, m_lo, m_hi, r):
    rows = [
        (i, [f.value(i, m) for m in range(m_lo, m_hi + 1)]) for i in range(1, r + 1)
    ]
    _emit_table(args, rows, range(m_lo, m_hi + 1))


def cmd_frieze(args):
    cartan = _load_cartan(args)
    r = cartan.rank
    m_lo, m_hi = _parse_window(args.window)
    kind = args.kind
    if kind in ("trop", "cluster-additive", "additive"):
        if args.slice is None:
            raise ValueError("--slice is required for Z-valued friezes")
        values = _parse_ints(args.slice)
        name = "tropical-frieze" if kind == "trop" else kind
        f = FriezeFunction.from_slice(name, cartan, values)
        _frieze_table(args, f, m_lo, m_hi, r)
        return 0
    if kind in ("generic-a", "generic-y"):
        b = belts(cartan)
        fn = b.x_sv if kind == "generic-a" else b.y
        names = [f"x{i}" for i in range(1, r + 1)] if kind == "generic-a" else [
            f"y{i}" for i in range(1, r + 1)
        ]
        rows = [
            (i, [fn(i, m).to_str(names) for m in range(m_lo, m_hi + 1)])
            for i in range(1, r + 1)
        ]
        _emit_table(args, rows, range(m_lo, m_hi + 1))
        return 0
    raise ValueError(f"unknown frieze kind {args.kind!r}")


def cmd_mutate(args):
    if args.json:
        if args.json == "-":
            doc = json.load(sys.stdin)
        else:
            with open(args.json) as fh:
                doc = json.load(fh)
    else:
        doc = {"B": json.loads(args.B), "word": list(_parse_ints(args.word or ""))}
    b = MutationMatrix(doc["B"])
    word = reduce_word(doc.get("word", ()))
    out = {"B0": [list(r) for r in b.entries], "word": list(word)}
    m = b.entries
    for k in word:
        m = mutate_matrix(MutationMatrix(m), k).entries
    out["B"] = [list(r) for r in m]
    if args.kind in ("a-seed", "y-seed"):
        kind = "A" if args.kind == "a-seed" else "Y"
        seed = seed_at(kind, b.entries, word)
        names = [f"{'x' if kind == 'A' else 'y'}{i}" for i in range(1, b.rank + 1)]
        out["cluster"] = [v.to_str(names) for v in seed.cluster]
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_trop(args):
    cartan = _load_cartan(args)
    r = cartan.rank
    b = belts(cartan)
    if args.point:
        doc = json.loads(args.point)
        space = doc["space"]
        anchor = tuple(doc.get("anchor", ()))
        coords = tuple(doc["coords"])
    else:
        space = args.space
        anchor = _parse_ints(args.anchor) if args.anchor else ()
        coords = _parse_ints(args.coords)
    roots = {"A": b.bt, "Y": b.b, "Yprin": principal_wide_root(b.b)}
    if space not in roots:
        raise ValueError("space must be A (of B^T), Y (of B), or Yprin")
    point = TropPoint(space, roots[space], coords, anchor)
    m_lo, m_hi = _parse_window(args.window)
    rows = []
    for i in range(1, r + 1):
        rows.append(
            (
                i,
                [
                    point.coords_at(canonical_address(i, m, r))[i - 1]
                    for m in range(m_lo, m_hi + 1)
                ],
            )
        )
    _emit_table(args, rows, range(m_lo, m_hi + 1))
    return 0


def cmd_pairing(args):
    cartan = _load_cartan(args)
    b = belts(cartan)
    delta = TropPoint("A", b.bt, _parse_ints(args.delta))
    rho = TropPoint("Y", b.b, _parse_ints(args.rho))
    value = pairing(cartan, delta, rho)
    _, _, xmono = mono_from_gvector_A(cartan, rho)
    _, _, ymono = mono_from_gvector_Y(cartan, delta)
    witness = {
        "pairing": value,
        "via_x_monomial": xmono.trop_eval(delta.at_root()),
        "via_y_monomial": ymono.trop_eval(rho.at_root()),
        "via_domain_sum": value,
    }
    print(json.dumps(witness, sort_keys=True))
    return 0


def cmd_monomial(args):
    cartan = _load_cartan(args)
    r = cartan.rank
    b = belts(cartan)
    coords = _parse_ints(args.coords)
    if args.space == "A":
        rho = TropPoint("Y", b.b, coords)
        addr, exps, expr = mono_from_gvector_A(cartan, rho)
        dom_exps, dom_expr = x_from_rho(cartan, rho)
        assert dom_expr == expr
        out = {
            "space": "A",
            "address": list(addr),
            "exponents": list(exps),
            "expression": expr.to_str([f"x{i}" for i in range(1, r + 1)]),
            "domain_exponents": {f"{i},{m}": e for (i, m), e in sorted(dom_exps.items())},
        }
    else:
        delta = TropPoint("A", b.bt, coords)
        addr, exps, expr = mono_from_gvector_Y(cartan, delta)
        alt = y_from_delta(cartan, delta)
        assert alt == expr
        out = {
            "space": "Y",
            "address": list(addr),
            "exponents": list(exps),
            "expression": expr.to_str([f"y{i}" for i in range(1, r + 1)]),
        }
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_decompose(args):
    cartan = _load_cartan(args)
    values = _parse_ints(args.slice)
    k = FriezeFunction.from_slice("cluster-additive", cartan, values)
    parts = decompose_hammocks(cartan, k)
    rebuilt = reconstruct_from_hammocks(cartan, parts)
    dom = finite_context(cartan).domain()
    exact = all(rebuilt.value(i, m) == k.value(i, m) for i, m in dom)
    out = {
        "slice": list(values),
        "hammocks": [
            {"i": i, "m": m, "multiplicity": mult}
            for (i, m), mult in sorted(parts.items())
        ],
        "reconstruction_exact": exact,
    }
    print(json.dumps(out, sort_keys=True))
    return 0 if exact else 4


def cmd_hammock(args):
    cartan = _load_cartan(args)
    m_lo, m_hi = _parse_window(args.window)
    h = hammock(cartan, args.i, args.m)
    _frieze_table(args, h, m_lo, m_hi, cartan.rank)
    return 0


def cmd_fpoly(args):
    cartan = _load_cartan(args)
    r = cartan.rank
    if args.window:
        m_lo, m_hi = _parse_window(args.window)
    else:
        m_lo, m_hi = 0, max(finite_context(cartan).roots.orbit_lengths) + 1
    table = fim_recursion(cartan, m_hi=m_hi, m_lo=m_lo)
    names = [f"p{i}" for i in range(1, r + 1)]
    rows = [
        (i, [table[(i, m)].to_str(names) for m in range(m_lo, m_hi + 1)])
        for i in range(1, r + 1)
    ]
    _emit_table(args, rows, range(m_lo, m_hi + 1))
    return 0


def cmd_verify(args):
    kwargs = {
        "rng_seed": args.rng_seed,
        "trials": args.trials,
        "budget": args.budget,
    }
    if args.types:
        kwargs["types"] = tuple(args.types.split(","))
    if args.suite == "all":
        results = run_all(**kwargs)
    else:
        results = [run_suite(args.suite, **kwargs)]
    # timings go to stderr so identical invocations stay byte-identical on stdout
    suites = []
    for r in results:
        d = r.as_dict()
        print(f"{r.suite}: {d.pop('elapsed_sec')}s", file=sys.stderr)
        suites.append(d)
    report = {
        "rng_seed": args.rng_seed,
        "passed": sum(1 for r in results if r.passed),
        "failed": sum(1 for r in results if not r.passed),
        "suites": suites,
    }
    print(json.dumps(report, sort_keys=True))
    return 0 if report["failed"] == 0 else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cluster-friezes",
        description="Exact cluster mutation, tropical friezes and the "
        "finite-type duality pairing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, cartan=True):
        if cartan:
            p.add_argument(
                "--cartan",
                required=True,
                help="type name (A2..G2), inline JSON rows, or a .json path",
            )
        p.add_argument("--format", choices=("tsv", "json"), default="tsv")
        p.add_argument("--rng-seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=10_000)
        p.add_argument("--depth", type=int, default=16)

    p = sub.add_parser("frieze", help="Z-valued or generic frieze tables")
    common(p)
    p.add_argument(
        "--kind",
        required=True,
        choices=("trop", "cluster-additive", "additive", "generic-a", "generic-y"),
    )
    p.add_argument("--slice", help="comma-separated seed slice at m=0")
    p.add_argument("--window", default="0..4", help="column range lo..hi")
    p.set_defaults(fn=cmd_frieze)

    p = sub.add_parser("mutate", help="mutate a matrix or seed along a word")
    p.add_argument("--json", help="path to {\"B\": [[..]], \"word\": [..]} or -")
    p.add_argument("--B", help="inline JSON matrix")
    p.add_argument("--word", help="comma-separated directions")
    p.add_argument("--kind", choices=("matrix", "a-seed", "y-seed"), default="matrix")
    p.add_argument("--format", choices=("tsv", "json"), default="json")
    p.set_defaults(fn=cmd_mutate)

    p = sub.add_parser("trop", help="belt coordinates of a tropical point")
    common(p)
    p.add_argument("--space", choices=("A", "Y"))
    p.add_argument("--coords")
    p.add_argument("--anchor", help="anchor word, default root")
    p.add_argument(
        "--point",
        help='JSON document {"space": "A"|"Y", "anchor": [..], "coords": [..]}',
    )
    p.add_argument("--window", default="0..4")
    p.set_defaults(fn=cmd_trop)

    p = sub.add_parser("pairing", help="duality pairing with per-route witness")
    common(p)
    p.add_argument("--delta", required=True, help="A-space coords at the root")
    p.add_argument("--rho", required=True, help="Y-space coords at the root")
    p.set_defaults(fn=cmd_pairing)

    p = sub.add_parser("monomial", help="global monomial attached to a point")
    common(p)
    p.add_argument("--space", choices=("A", "Y"), required=True)
    p.add_argument("--coords", required=True)
    p.set_defaults(fn=cmd_monomial)

    p = sub.add_parser("decompose", help="hammock decomposition of a slice")
    common(p)
    p.add_argument("--slice", required=True)
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("hammock", help="hammock function table")
    common(p)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--window", default="-2..5")
    p.set_defaults(fn=cmd_hammock)

    p = sub.add_parser("fpoly", help="belt coefficient polynomials F(i,m)")
    common(p)
    p.add_argument("--window", help="column range lo..hi, default the domain")
    p.set_defaults(fn=cmd_fpoly)

    p = sub.add_parser("verify", help="run cross-verification suites")
    p.add_argument("--suite", default="all", choices=("all",) + tuple(sorted(SUITES)))
    p.add_argument("--types", help="comma-separated type names")
    p.add_argument("--trials", type=int)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--format", choices=("tsv", "json"), default="json")
    p.set_defaults(fn=cmd_verify)

    return parser


def _diagnostic(code, kind, message):
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def _merge_negative_values(argv):
    """Join '--flag -1..4' into '--flag=-1..4' so argparse does not read
    leading-minus values (windows, slices, coordinates) as options."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (
            tok.startswith("--")
            and "=" not in tok
            and nxt is not None
            and len(nxt) > 1
            and nxt[0] == "-"
            and nxt[1].isdigit()
        ):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_negative_values(list(argv)))
    try:
        return args.fn(args)
    except (BudgetExceeded, TropOverflow) as exc:
        return _diagnostic(3, type(exc).__name__, str(exc))
    except InternalDisagreement as exc:
        return _diagnostic(4, type(exc).__name__, str(exc))
    except (ValueError, KeyError, OSError, NotFiniteType) as exc:
        return _diagnostic(2, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
