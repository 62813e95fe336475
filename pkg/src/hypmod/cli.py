"""Command-line front end: verification campaigns, identity suites and one-off evaluations.

Reports are JSON lines (``--format csv`` for CSV), each record carrying
``schema: 1``.  Exit status is 0 exactly when nothing failed.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from sympy import isprime, primerange

from . import __version__
from .algebra import CyclotomicElem
from .analytic import (AnalyticConfig, analytic_suite, eigenform_lvalue, f3f2_integral,
                       f3f2_series, f3p2, lvalue_at_1, period_lvalue_check)
from .charsums import CharacterTable, HpPrecisionError, HyperDatum, hp, psi_twist
from .modforms import (FAMILY_IDS, ap_coefficient, build_family, eigenform_complete,
                       hecke_matrix, hecke_members, hecke_regression, metadata_regression,
                       minimal_level, n_k3)
from .paley import PaleyError, triple_oracle
from .qseries import (GRID, EtaQuotientSpec, borwein_2f1_series_check, check_cubic_identities,
                      eta_quotient_expand, theta_abc)

SCHEMA = 1
PAIRS = (2, 3, 4, 6, 12)
PAIR_FAMILY = {2: 1, 3: 2, 4: 3, 6: 4, 12: 5}
WARN_P_MAX = 2000


# -----------------------------------------------------------------------------
# cache


class CacheStore:
    """Append-only JSON-lines files under one directory, one file per kind.

    Lines are ``{"schema", "key", "params", "result"}``; the key is a hash of
    the canonical JSON of ``params``.  Only the parent process writes.
    """

    def __init__(self, directory: str | os.PathLike | None):
        self.dir = Path(directory) if directory else None
        self._mem: dict[str, dict[str, dict]] = {}

    @staticmethod
    def key(params: dict) -> str:
        blob = json.dumps(params, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:24]

    def _load(self, kind: str) -> dict[str, dict]:
        if kind in self._mem:
            return self._mem[kind]
        table: dict[str, dict] = {}
        if self.dir is not None:
            path = self.dir / f"{kind}.jsonl"
            if path.exists():
                for line in path.read_text().splitlines():
                    if not line.strip():
                        continue
                    rec = json.loads(line)
                    if rec.get("schema") == SCHEMA:
                        table[rec["key"]] = rec["result"]
        self._mem[kind] = table
        return table

    def get(self, kind: str, params: dict):
        return self._load(kind).get(self.key(params))

    def put(self, kind: str, params: dict, result) -> None:
        k = self.key(params)
        table = self._load(kind)
        if k in table:
            return
        table[k] = result
        if self.dir is not None:
            self.dir.mkdir(parents=True, exist_ok=True)
            line = json.dumps({"schema": SCHEMA, "key": k, "params": params, "result": result},
                              sort_keys=True)
            with open(self.dir / f"{kind}.jsonl", "a") as fh:
                fh.write(line + "\n")


def cache_from_env() -> CacheStore:
    return CacheStore(os.environ.get("HYPMOD_CACHE"))


# -----------------------------------------------------------------------------
# verification records


@dataclass
class VerifyRecord:
    pair: tuple[int, int]
    p: int
    j: int
    hp: list[str]
    psi: list[str]
    ap: str
    match: bool
    residual: float
    schema: int = SCHEMA
    timestamps: dict | None = field(default=None)

    def to_json(self) -> dict:
        out = {"schema": self.schema, "pair": list(self.pair), "p": self.p, "j": self.j,
               "hp": self.hp, "psi": self.psi, "ap": self.ap, "match": self.match,
               "residual": self.residual}
        if self.timestamps is not None:
            out["timestamps"] = self.timestamps
        return out


def ideal_choices(M: int) -> list[int]:
    return [j for j in range(1, M + 1) if math.gcd(j, M) == 1]


@lru_cache(maxsize=None)
def _eigenform(fid: int, order_q: int):
    return eigenform_complete(build_family(fid, order_q))


def _order_for(p_max: int) -> int:
    return max(650, p_max + 2)


def _same(x: CyclotomicElem, y) -> bool:
    if x.is_rational() and y.is_rational():
        return x.to_rational() == y.to_rational()
    return abs(complex(x.embed()) - complex(y.embed())) < 1e-20 * max(1.0, abs(complex(y.embed())))


def verify_prime(u: int, p: int, order_q: int | None = None,
                 ideals: list[int] | None = None) -> list[VerifyRecord]:
    """psi * H_p(HD_DM(u,3); 1) against a_p of the completed eigenform, at each ideal."""
    if u not in PAIR_FAMILY:
        raise ValueError(f"pair ({u},3) is not one of {[(x, 3) for x in PAIRS]}")
    datum = HyperDatum.dm(u, 3)
    M = datum.M
    if (p - 1) % M or not isprime(p):
        raise ValueError(f"p = {p} is not a prime 1 mod {M}")
    eig = _eigenform(PAIR_FAMILY[u], order_q or _order_for(p))
    ap = ap_coefficient(eig, p)
    table = CharacterTable(p)
    out = []
    for j in ideals or ideal_choices(M):
        h = hp(datum, 1, table, j)
        psi = psi_twist(u, table, j)
        lhs = psi * h.value
        out.append(VerifyRecord((u, 3), p, j, [str(c) for c in h.value.quadratic_coords()],
                                [str(c) for c in psi.quadratic_coords()], str(ap),
                                _same(lhs, ap), h.residual))
    return out


def _verify_task(args):
    u, p, order_q, ideals = args
    try:
        return [r.to_json() for r in verify_prime(u, p, order_q, ideals)]
    except HpPrecisionError as exc:
        return [{"schema": SCHEMA, "pair": [u, 3], "p": p, "j": None, "match": False,
                 "error": str(exc)}]


def verify_campaign(pairs, p_min: int, p_max: int, jobs: int = 1, ideals=None,
                    cache: CacheStore | None = None, timestamps: bool = False) -> list[dict]:
    """Records for every (pair, p, j), in a fixed order whatever ``jobs`` is."""
    cache = cache or CacheStore(None)
    order_q = _order_for(p_max)
    tasks, slots = [], []
    for u in pairs:
        M = HyperDatum.dm(u, 3).M
        for p in primerange(p_min, p_max + 1):
            if (p - 1) % M:
                continue
            params = {"pair": [u, 3], "p": int(p), "ideals": ideals}
            hit = cache.get("verify", params)
            slots.append((params, hit))
            if hit is None:
                tasks.append((u, int(p), order_q, ideals))
    if jobs > 1 and tasks:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fresh = list(pool.map(_verify_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        fresh = [_verify_task(t) for t in tasks]
    fresh_iter = iter(fresh)
    records = []
    for params, hit in slots:
        if hit is None:
            hit = next(fresh_iter)
            if all(r.get("match") for r in hit):
                cache.put("verify", params, hit)
        records.extend(hit)
    if timestamps:
        stamp = time.strftime("%Y-%m-%dT%H:%M:%S")
        for r in records:
            r["timestamps"] = {"reported": stamp}
    return records


# -----------------------------------------------------------------------------
# output


def _flatten(rec: dict) -> dict:
    return {k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in rec.items()}


def emit(records: list[dict], fmt: str, out) -> None:
    if fmt == "csv":
        cols: list[str] = []
        for r in records:
            for k in r:
                if k not in cols:
                    cols.append(k)
        w = csv.DictWriter(out, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in records:
            w.writerow(_flatten(r))
    else:
        for r in records:
            out.write(json.dumps(r, sort_keys=True) + "\n")


def _with_schema(rec: dict) -> dict:
    return {"schema": SCHEMA, **rec}


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def _finish(records: list[dict], args, failures: int, summary: dict) -> int:
    records = records + [_with_schema({"summary": summary, "failures": failures})]
    out = _open_out(args.output)
    try:
        emit(records, args.format, out)
    finally:
        if out is not sys.stdout:
            out.close()
    print(f"{summary.get('command', '')}: {summary.get('count', len(records) - 1)} records, "
          f"{failures} failures", file=sys.stderr)
    return 0 if failures == 0 else 1


# -----------------------------------------------------------------------------
# subcommands


def cmd_verify(args) -> int:
    pairs = PAIRS if args.pair == "all" else (int(args.pair),)
    if args.p_max > WARN_P_MAX:
        warnings.warn(f"--p-max {args.p_max} above {WARN_P_MAX}: per-prime cost grows like p^2")
    ideals = [args.ideal] if args.ideal else None
    records = verify_campaign(pairs, args.p_min, args.p_max, args.jobs, ideals, cache_from_env(),
                              args.timestamps)
    failures = sum(1 for r in records if not r.get("match"))
    return _finish(records, args, failures,
                   {"command": "verify", "pairs": [[u, 3] for u in pairs], "p_min": args.p_min,
                    "p_max": args.p_max, "count": len(records)})


def run_suite(suite: str, N: int = 480, p_max: int = 200, config: AnalyticConfig | None = None,
              jobs: int = 1) -> list[dict]:
    out = []
    if suite in ("qseries", "all"):
        out += [{"suite": "qseries", **r.to_json()} for r in check_cubic_identities(N)]
        out.append({"suite": "qseries", "name": "borwein_2f1_series", "ok": borwein_2f1_series_check()})
    if suite in ("hecke", "all"):
        out += [{"suite": "hecke", **r.to_json()} for r in hecke_regression()]
        out += [{"suite": "hecke", **r.to_json()} for r in metadata_regression()]
    if suite in ("analytic", "all"):
        out += [{"suite": "analytic", "name": r.check_id, **r.to_json()}
                for r in analytic_suite(config or AnalyticConfig())]
    if suite in ("paley", "all"):
        tasks = [(int(p), 2) for p in primerange(13, p_max + 1) if p % 4 == 1]
        tasks += [(int(p), 3) for p in primerange(7, p_max + 1) if p % 3 == 1]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                reps = list(pool.map(_paley_task, tasks))
        else:
            reps = [_paley_task(t) for t in tasks]
        out += [{"suite": "paley", "name": f"G{k}({p})", "ok": r["agree"], **r}
                for (p, k), r in zip(tasks, reps)]
    return [_with_schema(r) for r in out]


def _paley_task(task):
    p, k = task
    return triple_oracle(p, k).to_json()


def cmd_identities(args) -> int:
    config = AnalyticConfig(target_digits=args.digits)
    records = run_suite(args.suite, args.N, args.p_max, config, args.jobs)
    failures = sum(1 for r in records if not r.get("ok"))
    return _finish(records, args, failures,
                   {"command": "identities", "suite": args.suite, "count": len(records)})


def _expand_object(args):
    n = args.N
    if args.eta:
        spec = EtaQuotientSpec.parse(args.eta, args.scale or 1)
        return eta_quotient_expand(spec, GRID * n)
    if args.k3 or args.kmr:
        r = Fraction(args.k3 or args.kmr)
        scale = args.scale or (n_k3(r) if args.scaled else 1)
        spec = (EtaQuotientSpec.k3 if args.k3 else EtaQuotientSpec.k3_kmr)(r, scale)
        return eta_quotient_expand(spec, GRID * n)
    if args.theta:
        return theta_abc(args.theta, GRID * n)
    if args.eigenform:
        eig = eigenform_complete(build_family(args.eigenform, max(650, n)))
        return eig.series.truncate(GRID * n)
    raise SystemExit("expand: give one of --eta, --k3, --kmr, --theta, --eigenform")


def cmd_expand(args) -> int:
    try:
        s = _expand_object(args)
    except ValueError as exc:
        print(f"expand: {exc}", file=sys.stderr)
        return 2
    out = _open_out(args.output)
    try:
        if args.format == "jsonl":
            out.write(json.dumps(_with_schema(s.to_json()), sort_keys=True) + "\n")
        elif args.format == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["exponent_24", "coeff"])
            for e, c in s.terms():
                w.writerow([e, str(c)])
        else:
            out.write(s.to_text() + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _datum(args) -> HyperDatum:
    if args.k3:
        return HyperDatum.k3(Fraction(args.k3))
    if args.dm:
        u, v = (int(x) for x in args.dm.split(","))
        return HyperDatum.dm(u, v)
    alpha = [Fraction(x) for x in args.alpha.split(",")]
    beta = [Fraction(x) for x in args.beta.split(",")]
    return HyperDatum(tuple(alpha), tuple(beta))


def cmd_hp(args) -> int:
    datum = _datum(args)
    cache = cache_from_env()
    records, failures = [], 0
    primes = [args.p] if args.p else [int(p) for p in primerange(args.p_min, args.p_max + 1)
                                      if (p - 1) % datum.M == 0]
    for p in primes:
        params = {"datum": str(datum), "lam": args.lam, "p": p, "j": args.ideal or 1}
        rec = cache.get("hp", params)
        if rec is None:
            try:
                rec = hp(datum, Fraction(args.lam), CharacterTable(p), args.ideal or 1).to_json()
            except HpPrecisionError as exc:
                rec = {"datum": str(datum), "p": p, "verified": False, "error": str(exc)}
            if rec.get("verified"):
                cache.put("hp", params, rec)
        failures += not rec.get("verified")
        records.append(_with_schema(rec))
    return _finish(records, args, failures, {"command": "hp", "count": len(records)})


def cmd_lvalue(args) -> int:
    config = AnalyticConfig(target_digits=args.digits)
    import mpmath

    if args.family:
        L = eigenform_lvalue(args.family, config)
        rec = {"family": args.family}
    else:
        r = Fraction(args.k3)
        spec = EtaQuotientSpec.k3(r, n_k3(r))
        L = lvalue_at_1([(1, spec)], minimal_level(spec).level, config)
        rec = {"k3": str(r)}
    rec["L1"] = [mpmath.nstr(mpmath.re(L), args.digits), mpmath.nstr(mpmath.im(L), args.digits)]
    return _finish([_with_schema(rec)], args, 0, {"command": "lvalue", "count": 1})


def cmd_p3f2(args) -> int:
    import mpmath

    config = AnalyticConfig(target_digits=args.digits)
    r = Fraction(args.r)
    rec = {"r": str(r), "p3f2": mpmath.nstr(f3p2(r, config), args.digits),
           "f3f2_integral": mpmath.nstr(f3f2_integral(r, config), args.digits),
           "f3f2_series": mpmath.nstr(f3f2_series(r, config), args.digits)}
    failures = 0
    if args.check:
        c = period_lvalue_check(r, config)
        rec["check"] = c.to_json()
        failures = int(not c.ok)
    return _finish([_with_schema(rec)], args, failures, {"command": "p3f2", "count": 1})


def cmd_paley(args) -> int:
    try:
        rep = triple_oracle(args.q, args.k)
    except PaleyError as exc:
        print(f"paley: {exc}", file=sys.stderr)
        return 2
    rec = _with_schema(rep.to_json())
    return _finish([rec], args, int(not rep.agree), {"command": "paley", "count": 1})


def cmd_hecke(args) -> int:
    fam = build_family(args.family, max(650, 50 * args.p))
    B = hecke_matrix(fam, args.p)
    rec = {"family": args.family, "p": args.p,
           "basis": [str(r) for r, _ in hecke_members(fam)],
           "matrix": [[str(x) for x in row] for row in B]}
    return _finish([_with_schema(rec)], args, 0, {"command": "hecke", "count": 1})


def cmd_eigenform(args) -> int:
    choices = {}
    for item in args.constant or []:
        r, _, c = item.partition("=")
        choices[Fraction(r)] = c
    eig = eigenform_complete(build_family(args.family), choices or None)
    rec = _with_schema(eig.to_json())
    rec["ap"] = {str(p): str(ap_coefficient(eig, p)) for p in primerange(2, args.ap_max + 1)}
    return _finish([rec], args, 0, {"command": "eigenform", "count": 1})


# -----------------------------------------------------------------------------
# parser


def _common(formats=("jsonl", "csv")) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=formats, default=formats[0])
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--digits", type=int, default=12, help="target digits for numerics")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()

    ap = argparse.ArgumentParser(prog="hypmod", description="Hypergeometric modularity checks.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="psi * H_p against a_p(f#) over primes")
    p.add_argument("--pair", default="all", choices=["all"] + [str(u) for u in PAIRS],
                   help="u of the pair (u,3)")
    p.add_argument("--p-min", type=int, default=13)
    p.add_argument("--p-max", type=int, default=499)
    p.add_argument("--ideal", type=int, help="one ideal choice j (default: all)")
    p.add_argument("--timestamps", action="store_true", help="stamp records (breaks replay identity)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("identities", parents=[common], help="run a check suite")
    p.add_argument("--suite", choices=("qseries", "hecke", "analytic", "paley", "all"), default="all")
    p.add_argument("-N", type=int, default=480, help="series order in 1/24 units")
    p.add_argument("--p-max", type=int, default=200)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("expand", parents=[_common(("text", "jsonl", "csv"))],
                       help="print a q-expansion")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--eta", help='eta quotient "d:r,d:r"')
    g.add_argument("--k3", help="K3(r,1)")
    g.add_argument("--kmr", help="K3kmr(r)")
    g.add_argument("--theta", choices=("a", "b", "c"))
    g.add_argument("--eigenform", type=int, choices=FAMILY_IDS)
    p.add_argument("--scaled", action="store_true", help="apply tau -> N_K3(r) tau")
    p.add_argument("--scale", type=int, help="explicit outer scale")
    p.add_argument("-N", type=int, default=30, help="order in powers of q")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("hp", parents=[common], help="H_p values")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k3", help="HD_K3(r,1)")
    g.add_argument("--dm", help="HD_DM(u,v) as u,v")
    g.add_argument("--alpha", help="comma-separated alpha (with --beta)")
    p.add_argument("--beta", default="1,1,1")
    p.add_argument("--lam", default="1")
    p.add_argument("-p", type=int)
    p.add_argument("--p-min", type=int, default=13)
    p.add_argument("--p-max", type=int, default=499)
    p.add_argument("--ideal", type=int)
    p.set_defaults(func=cmd_hp)

    p = sub.add_parser("lvalue", parents=[common], help="L(f,1)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--family", type=int, choices=FAMILY_IDS)
    g.add_argument("--k3", help="K3(r,1)(N tau)")
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("p3f2", parents=[common], help="the 3P2 period at r")
    p.add_argument("--r", required=True)
    p.add_argument("--check", action="store_true", help="also compare with the L-value")
    p.set_defaults(func=cmd_p3f2)

    p = sub.add_parser("paley", parents=[common], help="clique counts against closed forms")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, default=3, choices=(2, 3))
    p.set_defaults(func=cmd_paley)

    p = sub.add_parser("hecke", parents=[common], help="matrix of T_p on a family")
    p.add_argument("--family", type=int, choices=FAMILY_IDS, required=True)
    p.add_argument("-p", type=int, required=True)
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("eigenform", parents=[common], help="complete a family to an eigenform")
    p.add_argument("--family", type=int, choices=FAMILY_IDS, required=True)
    p.add_argument("--constant", action="append", metavar="R=VALUE",
                   help='override a free constant, e.g. "5/12=-3*sqrt(5)"')
    p.add_argument("--ap-max", type=int, default=50)
    p.set_defaults(func=cmd_eigenform)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
