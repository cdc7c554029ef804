"""Command-line front end: compute, scan, verify, cache.

Exit codes are a stable contract for CI:

    0   everything requested holds
    1   a mathematical claim FAILS or stays INCONCLUSIVE
    2   usage, configuration, domain, or range errors

Settings resolve as flags > environment > config file > defaults.  The
environment knows ``PSIVERIFY_CACHE_DIR`` (prime-table cache directory) and
``PSIVERIFY_CONFIG`` (path to a JSON config file with keys ``cache_dir``,
``n_max``, ``champion_limit``, ``format``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Sequence

from .arith import factorize, phi_from_factors, psi_from_factors, robin_ratio_from_factors, sigma_from_factors
from .bounds import BOUND_NAMES, StridePolicy, scan_bound
from .claims import CLAIM_IDS, VerifyConfig, build_default_table, claim_description, run_claims
from .errors import PsiverifyError, UnknownClaimError
from .numerics import E_GAMMA_OVER_ZETA2, compare, cv_log
from .primes import CACHE_FILENAME, build_table, inspect_cache
from .series import stream_points

__all__ = ["main"]

_ENV_CACHE = "PSIVERIFY_CACHE_DIR"
_ENV_CONFIG = "PSIVERIFY_CONFIG"

CSV_COLUMNS = [
    "n",
    "p_n",
    "theta",
    "log_theta",
    "R_value",
    "R_radius",
    "g_value",
    "g_radius",
    "margin_lower",
    "verdict",
]


def _load_file_config(path: str | None) -> dict:
    path = path or os.environ.get(_ENV_CONFIG)
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    return cfg


def _setting(flag_value, file_cfg: dict, key: str, env_key: str | None, default):
    if flag_value is not None:
        return flag_value
    if env_key and os.environ.get(env_key):
        return os.environ[env_key]
    if key in file_cfg:
        return file_cfg[key]
    return default


def _cache_dir(args, file_cfg: dict) -> str | None:
    return _setting(getattr(args, "cache_dir", None), file_cfg, "cache_dir", _ENV_CACHE, None)


def _table_limit_for_index(n_max: int) -> int:
    n = max(n_max, 6)
    return max(int(n * (math.log(n) + math.log(math.log(n)))) + 10, 30)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# compute
# ---------------------------------------------------------------------------


def _cmd_compute(args, file_cfg: dict) -> int:
    n = args.n
    fz = factorize(n)
    record = {
        "n": n,
        "factorization": [[p, e] for p, e in fz.factors],
        "psi": psi_from_factors(fz),
        "phi": phi_from_factors(fz),
        "sigma": sigma_from_factors(fz),
    }
    if n >= 3:
        r = robin_ratio_from_factors(fz)
        record["R"] = {"value": r.value, "radius": r.radius}
    else:
        record["R"] = None
    fmt = _setting(args.format, file_cfg, "format", None, "table")
    if fmt == "json":
        _emit(_json_dumps(record), args.output)
    else:
        lines = [
            f"n      = {n}",
            "factorization = "
            + (" * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in fz.factors) or "1"),
            f"psi    = {record['psi']}",
            f"phi    = {record['phi']}",
            f"sigma  = {record['sigma']}",
        ]
        if record["R"] is None:
            lines.append("R      = undefined (n < 3)")
        else:
            lines.append(f"R      = {record['R']['value']!r} +/- {record['R']['radius']:.3e}")
        _emit("\n".join(lines) + "\n", args.output)
    return 0


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------


def _point_rows(table, n_start: int, n_max: int):
    for point in stream_points(table, n_max):
        if point.n < n_start:
            continue
        log_theta = cv_log(point.theta)
        verdict = ""
        if point.n >= 3:
            verdict = compare(point.ratio, E_GAMMA_OVER_ZETA2, ">").status.value
        yield {
            "n": point.n,
            "p_n": point.p,
            "theta": point.theta.value,
            "log_theta": log_theta.value,
            "R_value": point.ratio.value,
            "R_radius": point.ratio.radius,
            "g_value": point.g.value if point.g is not None else None,
            "g_radius": point.g.radius if point.g is not None else None,
            "margin_lower": point.margin_lower.value,
            "verdict": verdict,
        }


def _cmd_scan(args, file_cfg: dict) -> int:
    cache = _cache_dir(args, file_cfg)
    if args.kind in ("points", "lower"):
        n_max = int(_setting(args.n_max, file_cfg, "n_max", None, 10**5))
        n_start = 3 if args.kind == "lower" else 2
        if n_max < n_start:
            raise PsiverifyError(f"scan {args.kind}: n-max must be >= {n_start} (n starts at {n_start})")
        table = build_table(_table_limit_for_index(n_max), cache_dir=cache)
        rows = list(_point_rows(table, n_start, n_max))
        fmt = _setting(args.format, file_cfg, "format", None, "csv")
        if fmt == "json":
            _emit(_json_dumps(rows), args.output)
        else:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for row in rows:
                writer.writerow(
                    [
                        row["n"],
                        row["p_n"],
                        repr(row["theta"]),
                        repr(row["log_theta"]),
                        repr(row["R_value"]),
                        repr(row["R_radius"]),
                        "" if row["g_value"] is None else repr(row["g_value"]),
                        "" if row["g_radius"] is None else repr(row["g_radius"]),
                        repr(row["margin_lower"]),
                        row["verdict"],
                    ]
                )
            _emit(buf.getvalue(), args.output)
        bad = [r for r in rows if r["verdict"] not in ("", "holds")]
        return 1 if bad else 0

    # bound scan
    name = args.name
    if name not in BOUND_NAMES:
        raise UnknownClaimError(f"unknown bound {name!r}; known: {', '.join(BOUND_NAMES)}")
    start = args.start
    stop = args.stop
    table = build_table(_table_limit_for_index(stop), cache_dir=cache)
    policy = StridePolicy(args.dense_until, args.ratio)
    scan = scan_bound(table, name, start, stop, policy=policy, escalate=not args.no_escalate)
    _emit(_json_dumps(scan.to_dict()), args.output)
    return 0 if scan.all_hold else 1


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _cmd_verify(args, file_cfg: dict) -> int:
    ids = args.claims or None
    if ids:
        unknown = [c for c in ids if c not in CLAIM_IDS]
        if unknown:
            raise UnknownClaimError(
                f"unknown claim(s) {', '.join(unknown)}; registry: {', '.join(CLAIM_IDS)}"
            )
    config = VerifyConfig(
        champion_limit=int(_setting(args.champion_limit, file_cfg, "champion_limit", None, 10**6)),
        n_max=int(_setting(args.n_max, file_cfg, "n_max", None, 10**5)),
        reduction_samples=args.samples,
        seed=args.seed,
        escalate=not args.no_escalate,
    )
    table = build_default_table(config, cache_dir=_cache_dir(args, file_cfg))
    report = run_claims(ids, table, config, workers=args.workers)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(_json_dumps(report))
    width = max(len(c) for c in report["claims"])
    lines = []
    for cid, res in report["claims"].items():
        status = "HOLDS" if res["holds"] else "FAILS"
        lines.append(f"{cid:<{width}}  {status:<6} {claim_description(cid)}")
    lines.append("all claims hold" if report["all_hold"] else "SOME CLAIMS DO NOT HOLD")
    _emit("\n".join(lines) + "\n", args.output)
    return 0 if report["all_hold"] else 1


# ---------------------------------------------------------------------------
# cache
# ---------------------------------------------------------------------------


def _cmd_cache(args, file_cfg: dict) -> int:
    cache = _cache_dir(args, file_cfg)
    if cache is None:
        raise PsiverifyError(
            f"no cache directory configured (use --cache-dir or {_ENV_CACHE})"
        )
    path = os.path.join(cache, CACHE_FILENAME)
    if args.action == "build":
        table = build_table(args.limit, cache_dir=cache)
        _emit(
            _json_dumps({"path": path, "limit": table.limit, "count": table.count}),
            args.output,
        )
        return 0
    if args.action == "inspect":
        if not os.path.exists(path):
            raise PsiverifyError(f"no cache at {path}")
        _emit(_json_dumps(inspect_cache(path)), args.output)
        return 0
    if os.path.exists(path):
        os.remove(path)
        _emit(_json_dumps({"removed": path}), args.output)
    else:
        _emit(_json_dumps({"removed": None}), args.output)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psiverify",
        description="Dedekind psi computations and certified inequality verification",
    )
    parser.add_argument("--config", help="JSON config file (or set PSIVERIFY_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="psi/phi/sigma/R and factorization of one integer")
    p.add_argument("n", type=int)
    p.add_argument("--format", choices=["table", "json"], default=None)
    p.add_argument("--output")

    p = sub.add_parser("scan", help="stream primorial points or scan an analytic bound")
    kind = p.add_subparsers(dest="kind", required=True)

    for k in ("points", "lower"):
        q = kind.add_parser(k, help=f"primorial stream ({k})")
        q.add_argument("--n-max", dest="n_max", type=int, default=None)
        q.add_argument("--format", choices=["csv", "json"], default=None)
        q.add_argument("--output")
        q.add_argument("--cache-dir", dest="cache_dir")

    q = kind.add_parser("bounds", help="scan one analytic bound, JSON report")
    q.add_argument("--name", required=True, help=f"one of: {', '.join(BOUND_NAMES)}")
    q.add_argument("--from", dest="start", type=int, required=True)
    q.add_argument("--to", dest="stop", type=int, required=True)
    q.add_argument("--dense-until", dest="dense_until", type=int, default=10**4)
    q.add_argument("--ratio", type=float, default=1.01)
    q.add_argument("--no-escalate", action="store_true")
    q.add_argument("--output")
    q.add_argument("--cache-dir", dest="cache_dir")

    p = sub.add_parser("verify", help="run claim verifications from the registry")
    p.add_argument("claims", nargs="*", help=f"claims to run (default all): {', '.join(CLAIM_IDS)}")
    p.add_argument("--n-max", dest="n_max", type=int, default=None)
    p.add_argument("--champion-limit", dest="champion_limit", type=int, default=None)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=1018)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-escalate", action="store_true")
    p.add_argument("--json", help="write the full JSON report here")
    p.add_argument("--output")
    p.add_argument("--cache-dir", dest="cache_dir")

    p = sub.add_parser("cache", help="manage the prime-table disk cache")
    p.add_argument("action", choices=["build", "inspect", "clear"])
    p.add_argument("--limit", type=int, default=10**6)
    p.add_argument("--output")
    p.add_argument("--cache-dir", dest="cache_dir")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        file_cfg = _load_file_config(args.config)
        if args.command == "compute":
            return _cmd_compute(args, file_cfg)
        if args.command == "scan":
            return _cmd_scan(args, file_cfg)
        if args.command == "verify":
            return _cmd_verify(args, file_cfg)
        return _cmd_cache(args, file_cfg)
    except (PsiverifyError, ValueError, OSError) as exc:
        print(f"psiverify: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
