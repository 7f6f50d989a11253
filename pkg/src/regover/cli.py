"""Command-line interface: ``regover <command> ...``.

Every command prints a result document (JSON by default with ``--format json``,
an aligned table otherwise) and exits with 0 when everything verified, 1 on
a mathematical failure, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .congruence import (
    ClaimFileError,
    builtin_claims,
    check_mod4,
    load_claims,
    mod8_admissible,
    scan_conjecture,
    verify_claims,
    verify_mod8_family,
)
from .enumeration import verify_seven_way
from .errors import CertificateError, RegoverError
from .qseries import FamilyParams, check_identity, gf_family
from .radu import (
    certificate_from_record,
    certify,
    shipped_certificate,
    shipped_witness,
    verify_witness,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_SUITE = [
    "lemma31",
    "lemma32",
    "sellers_dissection",
    "iterated_phi(2,3)",
    "iterated_phi(3,5)",
    "iterated_phi_product(2,3)",
    "phi_product",
    "jacobi_triple",
    "lemma35_mod8",
]


@dataclass
class RunConfig:
    max_terms: int = 50_000
    bounds: dict[str, int] = field(default_factory=lambda: {"small_step_max": 24, "small": 500, "large": 100})

    @classmethod
    def load(cls, path: str | None) -> "RunConfig":
        cfg = cls()
        if path is None:
            return cfg
        data = json.loads(Path(path).read_text())
        if "max_terms" in data:
            cfg.max_terms = int(data["max_terms"])
        cfg.bounds.update({k: int(v) for k, v in data.get("bounds", {}).items()})
        return cfg


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    result: dict
    rows: list[dict]
    passed: bool


def _family(kind: str, params: list[int]) -> FamilyParams:
    if kind == "Rbar":
        if len(params) != 2:
            raise UsageError("Rbar takes two parameters: l mu")
        return FamilyParams("Rbar", params[0], params[1])
    if kind == "RbarStar":
        if len(params) != 1:
            raise UsageError("RbarStar takes one parameter: l")
        return FamilyParams("RbarStar", params[0])
    raise UsageError(f"unknown family {kind!r}; use Rbar or RbarStar")


def cmd_expand(args, cfg: RunConfig) -> Outcome:
    if args.terms < 0 or args.terms > cfg.max_terms:
        raise UsageError(f"--terms must be in 0..{cfg.max_terms}")
    fam = _family(args.kind, args.params)
    series = gf_family(fam, args.terms)
    rows = []
    for n, a in enumerate(series):
        row = {"n": n, "coefficient": a}
        if args.mod:
            row["residue"] = a % args.mod
        rows.append(row)
    return Outcome({"family": fam.to_dict(), "terms": args.terms, "coefficients": rows}, rows, True)


def cmd_identity(args, cfg: RunConfig) -> Outcome:
    if args.terms > cfg.max_terms:
        raise UsageError(f"--terms must be at most {cfg.max_terms}")
    ids = DEFAULT_SUITE if args.ids == ["all"] else args.ids
    results = [check_identity(i, args.terms) for i in ids]
    rows = [r.to_dict() for r in results]
    passed = all(r.passed for r in results)
    return Outcome({"identities": rows, "passed": passed}, rows, passed)


def cmd_sevenway(args, cfg: RunConfig) -> Outcome:
    rep = verify_seven_way(args.l, args.mu, args.nmax)
    rows = [
        {"class": c["class"], "weight": c["weight"], "n": c["n"], "count": c["count"], "rbar": c["rbar"]}
        for c in rep.to_dict()["comparisons"]
    ]
    return Outcome(rep.to_dict(), rows, rep.passed)


def cmd_congruence(args, cfg: RunConfig) -> Outcome:
    from .congruence import default_bound

    b = cfg.bounds
    if args.claims:
        try:
            text = Path(args.claims).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read claim file: {exc}") from None
        claims = load_claims(text, args.bound)
    else:
        claims = builtin_claims(args.bound)
    if args.bound is None and (b["small"], b["large"], b["small_step_max"]) != (500, 100, 24):
        import dataclasses

        claims = [
            dataclasses.replace(c, bound=default_bound(c.m, b["small_step_max"], b["small"], b["large"]))
            for c in claims
        ]
    results = verify_claims(claims)
    rows = []
    for r in results:
        d = r.to_dict()
        rows.append({
            "label": r.claim.label,
            "claim": r.claim.describe(),
            "bound": r.claim.bound,
            "status": d["status"],
            "counterexample_n": d.get("counterexample", {}).get("n", ""),
        })
    n_pass = sum(r.passed for r in results)
    summary = {"claims": len(results), "passed": n_pass, "failed": len(results) - n_pass}
    return Outcome({"results": [r.to_dict() for r in results], "summary": summary}, rows, n_pass == len(results))


def cmd_mod4(args, cfg: RunConfig) -> Outcome:
    rep = check_mod4(args.l, args.mu, args.nmax)
    rows = rep.mismatches or [{"n": f"1..{args.nmax}", "series": "-", "classify": "agree", "delta": "agree"}]
    return Outcome(rep.to_dict(), rows, rep.passed)


def cmd_mod8(args, cfg: RunConfig) -> Outcome:
    admissible = sorted(mod8_admissible(args.p))
    results = [verify_mod8_family(args.p, r, args.bound) for r in admissible]
    rows = [
        {"p": args.p, "r": r, "bound": args.bound, "status": "pass" if res.passed else "fail",
         "counterexample_n": "" if res.passed else res.n}
        for r, res in zip(admissible, results)
    ]
    passed = all(res.passed for res in results)
    return Outcome({"p": args.p, "admissible": admissible, "results": rows, "passed": passed}, rows, passed)


def _cert_record(ref: str) -> dict:
    path = Path(ref)
    if path.exists():
        return json.loads(path.read_text())
    try:
        return shipped_certificate(Path(ref).stem)
    except FileNotFoundError:
        raise UsageError(f"no certificate file or shipped certificate named {ref!r}") from None


def cmd_certify(args, cfg: RunConfig) -> Outcome:
    try:
        rec = _cert_record(args.cert)
        tu, u, family, stated = certificate_from_record(rec)
    except (ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad certificate file: {exc}") from None
    try:
        cert = certify(tu, u, family, stated)
        doc, passed = cert.to_dict(), cert.overall
    except CertificateError as exc:
        doc = exc.certificate.to_dict() if exc.certificate else {}
        doc["error"] = f"{type(exc).__name__}: {exc}"
        passed = False
    rows = [{"item": "Delta* conditions", "value": [c["passed"] for c in doc.get("conditions", [])]},
            {"item": "P(t)", "value": doc.get("P_t")},
            {"item": "nu", "value": doc.get("nu")},
            {"item": "floor(nu) recomputed / stated", "value": f"{doc.get('floor_nu')} / {doc.get('stated_floor_nu')}"},
            {"item": "check bound", "value": doc.get("check_bound")},
            {"item": "finite check", "value": doc.get("finite_check")},
            {"item": "overall", "value": passed}]
    if "error" in doc:
        rows.append({"item": "error", "value": doc["error"]})
    return Outcome(doc, rows, passed)


def cmd_witness(args, cfg: RunConfig) -> Outcome:
    try:
        w = shipped_witness(args.id)
    except FileNotFoundError:
        raise UsageError(f"no shipped witness {args.id!r}") from None
    res = verify_witness(w, args.terms)
    doc = res.to_dict() | {"id": args.id, "common_factor_confirmed": res.rhs_content % res.common_factor == 0
                           if res.common_factor else False}
    return Outcome(doc, [doc], res.passed)


def cmd_scan(args, cfg: RunConfig) -> Outcome:
    if args.conjecture != "r49":
        raise UsageError("only the 'r49' conjecture is available")
    rep = scan_conjecture(args.lmax, args.nmax)
    d = rep.to_dict()
    rows = [{"l": e["l"], "k": e["k"], "progression": e["progression"], "status": e["status"]} for e in d["entries"]]
    return Outcome(d, rows, not rep.counterexamples)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regover", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"regover {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--config", help="JSON file with max_terms and bounds overrides")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="coefficients of Rbar_{l,mu} or Rbar*_l")
    p.add_argument("kind", choices=("Rbar", "RbarStar"))
    p.add_argument("params", nargs="+", type=int)
    p.add_argument("--terms", type=int, default=20)
    p.add_argument("--mod", type=int)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("identity", parents=[common], help="check theta and eta identities")
    p.add_argument("ids", nargs="+", help="identity names, e.g. lemma31 'iterated_phi(2,3)', or 'all'")
    p.add_argument("--terms", type=int, default=300)
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("sevenway", parents=[common], help="compare classes A-F with Rbar by enumeration")
    p.add_argument("l", type=int)
    p.add_argument("mu", type=int)
    p.add_argument("--nmax", type=int, default=20)
    p.set_defaults(func=cmd_sevenway)

    p = sub.add_parser("congruence", parents=[common], help="verify a batch of congruence claims")
    p.add_argument("--claims", help="JSON claim file (default: builtin corpus)")
    p.add_argument("--bound", type=int, help="override every claim's bound")
    p.set_defaults(func=cmd_congruence)

    p = sub.add_parser("classify-mod4", parents=[common], help="mod 4 classification against the series")
    p.add_argument("l", type=int)
    p.add_argument("mu", type=int)
    p.add_argument("--nmax", type=int, default=500)
    p.set_defaults(func=cmd_mod4)

    p = sub.add_parser("mod8", parents=[common], help="mod 8 quadratic-nonresidue family for Rbar*_6")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--bound", type=int, default=100)
    p.set_defaults(func=cmd_mod8)

    p = sub.add_parser("certify", parents=[common], help="check a Radu certificate file")
    p.add_argument("cert", help="certificate JSON path, or a shipped name (R35, R25)")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("witness", parents=[common], help="check a modular-function witness identity")
    p.add_argument("--id", default="cong-1")
    p.add_argument("--terms", type=int, default=200)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("scan", parents=[common], help="search for counterexamples to the Rbar_{4,9} conjecture")
    p.add_argument("--conjecture", default="r49")
    p.add_argument("--lmax", type=int, default=8)
    p.add_argument("--nmax", type=int, default=60)
    p.set_defaults(func=cmd_scan)
    return parser


def _parameters(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "format", "command")}


def document(args, outcome: Outcome, elapsed: float | None = None) -> dict:
    doc = {
        "tool": "regover",
        "version": __version__,
        "command": args.command,
        "parameters": _parameters(args),
        "passed": outcome.passed,
        "result": outcome.result,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    if elapsed is not None:
        doc["elapsed_seconds"] = round(elapsed, 3)
    return doc


def _cell(v: Any) -> str:
    return json.dumps(v) if isinstance(v, (list, dict, bool)) or v is None else str(v)


def render(fmt: str, doc: dict, rows: list[dict]) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=False)
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            fields = list(rows[0])
            if doc["command"] == "expand":
                fields = [f for f in fields if f in ("n", "coefficient", "residue")]
            writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
            writer.writeheader()
            for r in rows:
                writer.writerow({k: _cell(r.get(k, "")) for k in fields})
        return buf.getvalue().rstrip("\n")
    if not rows:
        return f"{doc['command']}: {'PASS' if doc['passed'] else 'FAIL'}"
    fields = list(rows[0])
    table = [fields] + [[_cell(r.get(f, "")) for f in fields] for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(fields))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in table]
    lines.insert(1, "  ".join("-" * w for w in widths))
    lines.append(f"{doc['command']}: {'PASS' if doc['passed'] else 'FAIL'}")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.load(args.config)
        start = time.perf_counter()
        outcome: Outcome = args.func(args, cfg)
        elapsed = time.perf_counter() - start
    except (UsageError, ClaimFileError, RegoverError, ValueError, OSError) as exc:
        print(f"regover {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc = document(args, outcome, elapsed if args.format == "table" else None)
    print(render(args.format, doc, outcome.rows))
    return EXIT_OK if outcome.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
