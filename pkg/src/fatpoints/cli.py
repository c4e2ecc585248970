"""Command-line entry point: ``verify``, ``horace``, ``scan`` and ``hypo``.

Every command prints (or writes) one JSON document carrying a run manifest.
With ``--no-timestamp`` the output depends only on the command line and the
input, so two identical runs are byte-identical.

Exit codes: 0 success (maximal rank / derived / hypotheses hold), 1 bad
input, 2 special / stuck / hypotheses fail / FATAL scan row, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone

from . import __version__
from .ff import DEFAULT_PRIME, PrimeField, child_seed
from .horace import Mode, run, validate_trace
from .hypotheses import (
    DimensionSequence,
    TheoremInstance,
    check_thm01,
    check_thm02,
    check_thm03,
    check_thm04,
)
from .oracle import DEFAULT_TRIALS, Verdict, compute_cohomology, expected_counts
from .scheme import Configuration, FatPoint, SchemeError, configuration_from_json

#: Largest degree ``scan`` accepts; n_t stays at most 231.
SCAN_MAX_DEGREE = 20

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _digest(*docs) -> str:
    blob = json.dumps(docs, sort_keys=True, separators=(",", ":")).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def manifest(args, *inputs) -> dict:
    out = {"command": args.command, "seed": args.seed, "prime": args.prime,
           "trials": args.trials, "input_digest": _digest(*inputs),
           "tool_version": __version__}
    if not args.no_timestamp:
        out["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return out


def _emit(doc: dict, args, pretty_lines=None) -> None:
    if args.pretty and pretty_lines is not None:
        text = "\n".join(pretty_lines(doc)) + "\n"
    else:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _field(args) -> PrimeField:
    try:
        return PrimeField(args.prime)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _config(doc) -> Configuration:
    try:
        return configuration_from_json(doc)
    except SchemeError as exc:
        raise InputError(str(exc)) from None


def _check_modulus(args, t: int) -> None:
    _field(args)
    if args.prime <= t:
        raise InputError(f"modulus must exceed degree (prime={args.prime}, degree={t})")


# --- verify ----------------------------------------------------------------

def _verify_lines(doc):
    r = doc["report"]
    yield f"degree t={r['t']}  n_t={r['n_t']}  length={r['length']}"
    yield f"rank={r['rank']}  h0={r['h0']}  h1={r['h1']}  (expected h0={doc['expected']['h0']}, h1={doc['expected']['h1']})"
    yield f"verdict: {r['verdict']}  after {r['trials_used']} trial(s), seed={r['seed']}, p={r['prime']}"


def cmd_verify(args) -> int:
    doc = _load_json(args.config)
    z = _config(doc)
    _check_modulus(args, z.degree)
    rep = compute_cohomology(z, prime=args.prime, trials=args.trials, seed=args.seed)
    n_t, length, e0, e1 = expected_counts(z)
    _emit({"manifest": manifest(args, doc), "report": rep.to_json(),
           "expected": {"n_t": n_t, "length": length, "h0": e0, "h1": e1}},
          args, _verify_lines)
    return {Verdict.MAXIMAL_RANK: EXIT_OK, Verdict.SPECIAL: EXIT_NEGATIVE,
            Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}[rep.verdict]


# --- horace ----------------------------------------------------------------

def _horace_lines(doc):
    tr = doc["trace"]
    yield f"{'deg':>4} {'kind':<16} {'trace':>5} {'s':>3} {'x':>3} {'fill':>4} {'len':>9}  moved"
    for s in tr["steps"]:
        bad = [c["name"] for c in s["checks"] if not c["holds"]]
        note = f"  [fails: {', '.join(bad)}]" if bad else ""
        after = "-" if s["length_after"] is None else s["length_after"]
        yield (f"{s['degree']:>4} {s['kind']:<16} {s['trace']:>5} {s['s']:>3} {s['x']:>3} "
               f"{s['fillers']:>4} {s['length_before']:>4}->{after!s:<3}  "
               f"{' '.join(s['moved'])}{note}")
    term = tr["terminal"]
    yield f"terminal: degree {term['degree']}, length {term['length']}, rule {term['rule']}"
    yield f"verdict: {tr['verdict']}"


def cmd_horace(args) -> int:
    doc = _load_json(args.config)
    z = _config(doc)
    _check_modulus(args, z.degree)
    if args.base_degree < 1:
        raise InputError("--base-degree must be at least 1")
    mode = Mode.ORACLE if args.oracle_check else Mode.COMBINATORIAL
    try:
        tr = run(z, base_degree=args.base_degree, mode=mode, seed=args.seed,
                 trials=args.trials, prime=args.prime)
    except SchemeError as exc:
        raise InputError(str(exc)) from None
    out = {"manifest": manifest(args, doc), "trace": tr.to_json()}
    agree = True
    if args.validate:
        checks = validate_trace(tr, trials=args.trials, seed=args.seed, prime=args.prime)
        out["validation"] = [{"node": n, "verdict": v, "agrees": a} for n, v, a in checks]
        agree = all(a for _, _, a in checks)
    _emit(out, args, _horace_lines)
    return EXIT_OK if tr.derived and agree else EXIT_NEGATIVE


# --- scan ------------------------------------------------------------------

def _multisets(t: int, budget: int, double_only: bool):
    """Non-increasing multiplicity tuples of total length 1..budget, in
    lexicographic order."""
    if double_only:
        for e in range(1, budget // 3 + 1):
            yield (2,) * e
        return

    def rec(prefix, largest, room):
        if prefix:
            yield prefix
        for m in range(1, largest + 1):
            size = m * (m + 1) // 2
            if size <= room:
                yield from rec(prefix + (m,), m, room - size)

    yield from sorted(rec((), t + 1, budget))


def _scan_row(job) -> dict:
    t, mults, prime, trials, seed = job
    z = Configuration(t, tuple(FatPoint(m) for m in mults))
    rep = compute_cohomology(z, prime=prime, trials=trials, seed=child_seed(seed, t, *mults))
    inst = TheoremInstance(t, tuple(m for m in mults if m != 2), mults.count(2))
    n_t, length, e0, e1 = expected_counts(z)
    ok = check_thm01(inst)["ok"]
    special = rep.verdict is Verdict.SPECIAL
    return {"t": t, "multiplicities": list(mults), "d": list(inst.d), "e": inst.e,
            "n_t": n_t, "length": length, "expected_h0": e0, "expected_h1": e1,
            "rank": rep.rank, "h0": rep.h0, "h1": rep.h1, "verdict": rep.verdict.value,
            "thm01_ok": ok, "fatal": special and ok}


def _scan_lines(doc):
    yield f"{'t':>3} {'multiplicities':<28} {'len':>4} {'n_t':>4} {'h0':>4} {'h1':>4}  verdict"
    for r in doc["rows"]:
        mults = ",".join(map(str, r["multiplicities"]))
        flag = "  FATAL" if r["fatal"] else ""
        yield (f"{r['t']:>3} {mults:<28} {r['length']:>4} {r['n_t']:>4} {r['h0']:>4} "
               f"{r['h1']:>4}  {r['verdict']}{flag}")
    s = doc["summary"]
    yield f"{s['rows']} rows, {s['special']} special, {s['inconclusive']} inconclusive, {s['fatal']} FATAL"


def cmd_scan(args) -> int:
    if args.t_max > SCAN_MAX_DEGREE:
        raise InputError(f"--t-max must be at most {SCAN_MAX_DEGREE}")
    if args.length_budget < 0 or args.t_max < 0:
        raise InputError("--t-max and --length-budget must be non-negative")
    if args.jobs < 1:
        raise InputError("--jobs must be at least 1")
    _check_modulus(args, args.t_max)
    jobs = [(t, mults, args.prime, args.trials, args.seed)
            for t in range(1, args.t_max + 1)
            for mults in _multisets(t, args.length_budget, not args.mixed)]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_scan_row, jobs, chunksize=8))
    else:
        rows = [_scan_row(j) for j in jobs]
    summary = {"rows": len(rows),
               "special": sum(r["verdict"] == Verdict.SPECIAL.value for r in rows),
               "inconclusive": sum(r["verdict"] == Verdict.INCONCLUSIVE.value for r in rows),
               "fatal": sum(r["fatal"] for r in rows)}
    params = {"t_max": args.t_max, "length_budget": args.length_budget,
              "family": "mixed" if args.mixed else "double-only"}
    _emit({"manifest": manifest(args, params), "parameters": params,
           "order": "lexicographic in (t, non-increasing multiplicity tuple)",
           "rows": rows, "summary": summary}, args, _scan_lines)
    return EXIT_NEGATIVE if summary["fatal"] else EXIT_OK


# --- hypo ------------------------------------------------------------------

def _int(doc: dict, key: str, default=None) -> int:
    v = doc.get(key, default)
    if not isinstance(v, int) or isinstance(v, bool):
        raise InputError(f"instance.{key} must be an integer")
    return v


def _types(doc: dict) -> list:
    raw = doc.get("types", [])
    if not isinstance(raw, list) or not all(
            isinstance(x, list) and len(x) == 2 and all(isinstance(v, int) for v in x)
            for x in raw):
        raise InputError("instance.types must be a list of [length, multiplicity] pairs")
    return [tuple(x) for x in raw]


def cmd_hypo(args) -> int:
    doc = _load_json(args.instance)
    if not isinstance(doc, dict):
        raise InputError("instance must be a JSON object")
    dims_doc = _load_json(args.dims) if args.dims else None
    dims = None
    if dims_doc is not None:
        values = dims_doc.get("values") if isinstance(dims_doc, dict) else dims_doc
        if not isinstance(values, list) or not all(isinstance(v, int) for v in values):
            raise InputError("dims must be a list of integers or {\"values\": [...]}")
        dims = DimensionSequence(tuple(values))
    has_types = "types" in doc
    theorem = doc.get("theorem") or {(False, False): "thm01", (True, False): "thm03",
                                     (False, True): "thm02", (True, True): "thm04"}[
                                         (has_types, dims is not None)]
    t, e = _int(doc, "t"), _int(doc, "e", 0)
    try:
        if theorem in ("thm01", "thm02"):
            d = doc.get("d", [])
            if not isinstance(d, list) or not all(isinstance(v, int) for v in d):
                raise InputError("instance.d must be a list of integers")
            inst = TheoremInstance(t, tuple(d), e)
            if theorem == "thm01":
                report = check_thm01(inst)
            elif dims is None:
                raise InputError("thm02 needs --dims")
            else:
                report = check_thm02(inst, dims)
        elif theorem == "thm03":
            report = check_thm03(t, _types(doc), e)
        elif theorem == "thm04":
            if dims is None:
                raise InputError("thm04 needs --dims")
            report = check_thm04(t, _types(doc), e, dims, doc.get("reading", "multiplicity"))
        else:
            raise InputError("instance.theorem must be one of thm01, thm02, thm03, thm04")
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit({"manifest": manifest(args, doc, dims_doc), "report": report}, args,
          lambda d: [f"{c['name']}: {'ok' if c['holds'] else 'FAILS'} ({c['lhs']} vs {c['rhs']})"
                     for c in d["report"]["checks"]] + [f"ok: {d['report']['ok']}"])
    return EXIT_OK if report["ok"] else EXIT_NEGATIVE


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for all randomness")
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME,
                        help=f"prime modulus (default {DEFAULT_PRIME}, the largest prime below 2^62)")
    common.add_argument("--trials", type=int, default=DEFAULT_TRIALS,
                        help="random materializations per rank certificate")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", help="JSON output (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", help="human-readable output")
    common.set_defaults(pretty=False)
    common.add_argument("--jobs", type=int, default=1, help="worker processes (scan only)")
    common.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp from the manifest")

    parser = argparse.ArgumentParser(prog="fatpoints", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="h0/h1 of a configuration")
    p.add_argument("config", help="configuration JSON file, or - for stdin")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("horace", parents=[common], help="Horace-method derivation trace")
    p.add_argument("config", help="configuration JSON file, or - for stdin")
    p.add_argument("--base-degree", type=int, default=1)
    p.add_argument("--oracle-check", action="store_true",
                   help="check every node with the oracle and let it decide the terminal scheme")
    p.add_argument("--validate", action="store_true",
                   help="re-check the finished trace with fresh randomness")
    p.set_defaults(func=cmd_horace)

    p = sub.add_parser("scan", parents=[common], help="sweep instances looking for special systems")
    p.add_argument("--t-max", type=int, default=8)
    p.add_argument("--length-budget", type=int, default=60)
    family = p.add_mutually_exclusive_group()
    family.add_argument("--double-only", dest="mixed", action="store_false", default=False)
    family.add_argument("--mixed", dest="mixed", action="store_true")
    p.add_argument("--out", help="write the table here instead of stdout")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("hypo", parents=[common], help="check theorem hypotheses")
    p.add_argument("instance", help="instance JSON file, or - for stdin")
    p.add_argument("--dims", help="JSON list of h0(X, H^j), j = 0..t")
    p.set_defaults(func=cmd_hypo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.trials < 1:
        print("error: --trials must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
