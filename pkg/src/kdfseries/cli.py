"""Command-line front end.

Subcommands: expand a parameter bundle, verify one identity instance,
fuzz the whole catalog with seeded random instances, check the
concluding family formulas, evaluate numerically, list the catalog, and
print the errata ledger.  JSON output is byte-deterministic for a fixed
seed and configuration.

Exit status: 0 when nothing failed, 1 on failures or internal errors,
2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .errors import KdfError, ParseError
from .kdf_core import KdfSpec, SlotBinding, convergence_class, expand
from .identities import (
    CORRECTED,
    CATALOG,
    IdentityId,
    IdentityInstance,
    _shape_for,
    derive_seed,
    random_instance,
    verify,
)
from .numeval import evaluate
from .reductions import CONCLUSION_IDS, check_conclusion, random_conclusion
from .errata import run_ledger


def _emit_json(doc):
    print(json.dumps(doc, sort_keys=True, separators=(", ", ": ")))


def _load_doc(path):
    try:
        if path is None or path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read input document: {exc}") from exc


def _series_json(series):
    return {
        "varCount": series.var_count,
        "cap": series.cap,
        "terms": [
            {"monomial": list(m), "coeff": str(series.terms[m])}
            for m in series.monomials()
        ],
    }


def _cmd_expand(args):
    doc = _load_doc(args.input)
    try:
        spec = KdfSpec.from_json(doc["spec"])
        binding = (SlotBinding.from_json(doc["binding"]) if "binding" in doc
                   else SlotBinding.identity(spec.n))
        cap = int(doc.get("cap", args.cap))
        var_count = int(doc.get("varCount", binding.max_var() + 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad expand document: {exc}") from exc
    series = expand(spec, binding, var_count, cap)
    if args.format == "json":
        out = _series_json(series)
        out["convergence"] = convergence_class(spec).to_json()
        _emit_json(out)
    else:
        print(series.render())
    return 0


def _cmd_verify(args):
    inst = IdentityInstance.from_json(_load_doc(args.input))
    if args.reading:
        inst = IdentityInstance(inst.id, inst.spec, inst.param_index, inst.r,
                                inst.power_alpha, args.reading, inst.cap)
    report = verify(inst)
    if args.format == "json":
        _emit_json({"instance": inst.to_json(), "report": report.to_json()})
    else:
        print(f"{inst.id.value} reading={inst.reading} cap={inst.cap}: {report.status}")
        if report.first_mismatch is not None:
            m = report.first_mismatch
            print(f"  first mismatch at {list(m.monomial)}: lhs={m.lhs} rhs={m.rhs}")
        if report.detail:
            print(f"  {report.detail}")
    return 0 if report.status != "fail" else 1


def fuzz_catalog(seed, count, cap=None, ids=None, reading=CORRECTED):
    """Seeded sweep over the catalog; returns per-identity tallies.

    Instances are generated in deterministic (id, index) order from
    per-instance derived seeds, so the report depends only on the inputs.
    """
    ids = list(ids) if ids else list(IdentityId)
    rows = []
    for id in ids:
        tally = {"pass": 0, "fail": 0, "pole": 0, "not-applicable": 0}
        failures = []
        for index in range(count):
            child = derive_seed(seed, id.value, index)
            shape_rng = random.Random(derive_seed(child, "shape"))
            n, p, l, q, m = _shape_for(id, shape_rng)
            inst = random_instance(derive_seed(child, "inst"), id, n, (p, l, q, m),
                                   cap=cap, reading=reading)
            report = verify(inst)
            tally[report.status] += 1
            if report.status == "fail":
                failures.append({"index": index, "instance": inst.to_json(),
                                 "report": report.to_json()})
        row = {"id": id.value, "count": count, **tally}
        if failures:
            row["failures"] = failures
        rows.append(row)
    return rows


def _cmd_fuzz(args):
    ids = [IdentityId(args.id)] if args.id else None
    rows = fuzz_catalog(args.seed, args.count, args.cap, ids, args.reading or CORRECTED)
    worst = 0
    if args.format == "json":
        _emit_json({"seed": args.seed, "count": args.count, "results": rows})
    for row in rows:
        if args.format != "json":
            print(f"{row['id']:5s} pass={row['pass']:3d} fail={row['fail']:3d} "
                  f"pole={row['pole']:3d} n/a={row['not-applicable']:3d}")
        worst = max(worst, row["fail"])
    return 1 if worst else 0


def _cmd_conclusions(args):
    rows = []
    failed = False
    for which in CONCLUSION_IDS:
        tally = {"pass": 0, "fail": 0, "pole": 0}
        for index in range(args.count):
            params, r = random_conclusion(derive_seed(args.seed, which, index), which,
                                          cap=args.cap)
            report = check_conclusion(which, params, r, args.cap,
                                      args.reading or CORRECTED)
            tally[report.status] = tally.get(report.status, 0) + 1
        failed = failed or tally["fail"] > 0
        rows.append({"id": which, "count": args.count, **tally})
    if args.format == "json":
        _emit_json({"seed": args.seed, "count": args.count, "results": rows})
    else:
        for row in rows:
            print(f"{row['id']:5s} pass={row['pass']:3d} fail={row['fail']:3d} "
                  f"pole={row['pole']:3d}")
    return 1 if failed else 0


def _cmd_eval(args):
    doc = _load_doc(args.input)
    try:
        spec = KdfSpec.from_json(doc["spec"])
        point = [float(x) for x in doc["point"]]
        cap = int(doc.get("cap", args.cap))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad eval document: {exc}") from exc
    result = evaluate(spec, point, cap)
    if args.format == "json":
        _emit_json(result.to_json())
    else:
        print(f"value={result.value!r} terms={result.terms_used} "
              f"tail~{result.tail_estimate:.3e} domainOk={result.domain_ok}")
    return 0


def _cmd_list(args):
    rows = [{"id": id.value, "summary": desc.summary,
             "hasLiteralReading": desc.has_reading}
            for id, desc in CATALOG.items()]
    if args.format == "json":
        _emit_json({"identities": rows, "conclusions": list(CONCLUSION_IDS)})
    else:
        for row in rows:
            flag = " [dual reading]" if row["hasLiteralReading"] else ""
            print(f"{row['id']:5s} {row['summary']}{flag}")
        print("conclusions: " + ", ".join(CONCLUSION_IDS))
    return 0


def _cmd_errata(args):
    rows = []
    clean = True
    for entry, ok, bad in run_ledger(args.cap):
        expected = ok.status == "pass" and bad.status == "fail"
        clean = clean and expected
        rows.append({"id": entry.id, "deviation": entry.deviation,
                     "corrected": ok.to_json(), "literal": bad.to_json(),
                     "demonstrated": expected})
    if args.format == "json":
        _emit_json({"cap": args.cap, "entries": rows})
    else:
        for row in rows:
            print(f"{row['id']:5s} corrected={row['corrected']['status']:5s} "
                  f"literal={row['literal']['status']:5s}")
            print(f"      {row['deviation']}")
            mm = row["literal"].get("firstMismatch")
            if mm:
                print(f"      literal mismatch at {mm['monomial']}: "
                      f"lhs={mm['lhs']} rhs={mm['rhs']}")
    return 0 if clean else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="kdfseries",
        description="exact truncated-series verifier for hypergeometric summation formulas")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, input_arg=False, **defaults):
        p = sub.add_parser(name)
        p.set_defaults(func=func, **defaults)
        if input_arg:
            p.add_argument("input", nargs="?", default=None,
                           help="JSON document path, or - for stdin")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--count", type=int, default=10)
        p.add_argument("--cap", type=int, default=defaults.get("cap", 7))
        p.add_argument("--reading", choices=("corrected", "literal"), default=None)
        p.add_argument("--id", default=None)
        return p

    add("expand", _cmd_expand, input_arg=True)
    add("verify", _cmd_verify, input_arg=True)
    add("fuzz", _cmd_fuzz, cap=None)
    add("conclusions", _cmd_conclusions, cap=6)
    add("eval", _cmd_eval, input_arg=True, cap=20)
    add("list", _cmd_list)
    add("errata", _cmd_errata, cap=6)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except KdfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
