"""Command-line front end.

    gaussdiv div --input pairs.json --format csv
    gaussdiv brownian --vol-p 1 --vol-q 2 --t-start 0.05 --t-end 5 --steps 50
    gaussdiv limits --sigma 1
    gaussdiv verify --grid small

Exit codes: 0 success, 1 usage / I-O / parse failure, 2 some rows failed,
3 verification bound violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .errors import GaussDivError
from .gaussian import Gaussian1D, GaussianND
from .multivariate import psi_multivariate
from .psi import BrownianPair, brownian_psi, brownian_t_min, psi, psi_limit_sigma
from .report import divergence_report

EXIT_OK, EXIT_USAGE, EXIT_ROWS, EXIT_VERIFY = 0, 1, 2, 3

CSV_INPUT_COLUMNS = ("id", "mu_p", "sigma_p", "mu_q", "sigma_q")
REPORT_COLUMNS = ("id", "hellinger_sq", "bhattacharyya_angle", "fisher_rao", "half_plane", "disc",
                  "psi", "psi_valid", "error")
LIMIT_SIGMAS = (10.0, 1e3, 1e6)


class InputError(Exception):
    """The input file as a whole cannot be read."""


class InvalidRecord(GaussDivError, ValueError):
    pass


@dataclass(frozen=True)
class PairRecord:
    id: str
    family: str
    params_p: Any
    params_q: Any


@dataclass
class ReportRow:
    id: str
    hellinger_sq: Optional[float] = None
    bhattacharyya_angle: Optional[float] = None
    fisher_rao: Optional[float] = None
    half_plane: Optional[float] = None
    disc: Optional[float] = None
    psi: Optional[float] = None
    psi_valid: bool = False
    error: Optional[str] = None


# -- parsing -----------------------------------------------------------------

def _number(value, what: str) -> float:
    if isinstance(value, bool):
        raise InvalidRecord(f"{what} must be a number")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise InvalidRecord(f"{what} must be a number, got {value!r}") from None
    if not math.isfinite(out):
        raise InvalidRecord(f"{what} must be finite")
    return out


def parse_json_records(text: str) -> list[Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise InputError("JSON input must be a top-level array of records")
    return data


def parse_csv_records(text: str) -> list[Any]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None:
        return []
    if tuple(f.strip() for f in reader.fieldnames) != CSV_INPUT_COLUMNS:
        raise InputError(f"CSV header must be {','.join(CSV_INPUT_COLUMNS)}")
    out = []
    for row in reader:
        row = {k.strip(): (v.strip() if isinstance(v, str) else v) for k, v in row.items() if k is not None}
        out.append({
            "id": row.get("id"),
            "family": "univariate",
            "p": {"mu": row.get("mu_p"), "sigma": row.get("sigma_p")},
            "q": {"mu": row.get("mu_q"), "sigma": row.get("sigma_q")},
        })
    return out


def read_records(text: str, input_format: str = "auto") -> list[Any]:
    if input_format == "auto":
        stripped = text.lstrip()
        if not stripped:
            return []
        input_format = "json" if stripped[0] in "[{" else "csv"
    return parse_json_records(text) if input_format == "json" else parse_csv_records(text)


def to_pair_record(raw: Any, index: int) -> PairRecord:
    if not isinstance(raw, dict):
        raise InvalidRecord(f"record {index} is not an object")
    rid = raw.get("id")
    rid = str(index) if rid is None else str(rid)
    family = raw.get("family", "univariate")
    if family not in ("univariate", "multivariate"):
        raise InvalidRecord(f"unknown family {family!r}")
    params = []
    for key in ("p", "q"):
        payload = raw.get(key)
        if not isinstance(payload, dict) or "mu" not in payload or "sigma" not in payload:
            raise InvalidRecord(f"'{key}' must be an object with 'mu' and 'sigma'")
        if family == "univariate":
            params.append(Gaussian1D(_number(payload["mu"], f"{key}.mu"), _number(payload["sigma"], f"{key}.sigma")))
        else:
            try:
                mu = np.array(payload["mu"], dtype=float)
                sigma = np.array(payload["sigma"], dtype=float)
            except (TypeError, ValueError):
                raise InvalidRecord(f"'{key}' mean/covariance must be numeric arrays") from None
            if mu.ndim != 1 or sigma.ndim != 2:
                raise InvalidRecord(f"'{key}' needs a mean vector and a covariance array of arrays")
            params.append(GaussianND(mu, sigma))
    return PairRecord(rid, family, params[0], params[1])


def _row_id(raw: Any, index: int) -> str:
    if isinstance(raw, dict) and raw.get("id") is not None:
        return str(raw["id"])
    return str(index)


def compute_row(raw: Any, index: int) -> ReportRow:
    try:
        rec = to_pair_record(raw, index)
    except GaussDivError as exc:
        return ReportRow(_row_id(raw, index), error=exc.code)
    row = ReportRow(rec.id)
    if rec.family == "univariate":
        rep = divergence_report(rec.params_p, rec.params_q)
        row.hellinger_sq = rep.hellinger_sq
        row.bhattacharyya_angle = rep.bhattacharyya_angle
        row.fisher_rao = rep.fisher_rao
        row.half_plane = rep.half_plane
        row.disc = rep.disc
        row.psi, row.psi_valid, row.error = rep.psi, rep.psi_valid, rep.psi_error
    else:
        # only Psi is defined here for n > 1
        try:
            row.psi = psi_multivariate(rec.params_p, rec.params_q).psi
            row.psi_valid = True
        except GaussDivError as exc:
            row.error = exc.code
    return row


# -- formatting --------------------------------------------------------------

def fmt_number(x: Optional[float]) -> str:
    # repr is the shortest string that round-trips, independent of locale
    return "" if x is None else repr(float(x))


def write_rows_csv(rows: list[ReportRow], out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in rows:
        w.writerow([r.id, *(fmt_number(getattr(r, c)) for c in REPORT_COLUMNS[1:7]),
                    "true" if r.psi_valid else "false", r.error or ""])


def write_rows_json(rows: list[ReportRow], out) -> None:
    payload = [{c: getattr(r, c) for c in REPORT_COLUMNS} for r in rows]
    out.write(json.dumps(payload, indent=2, allow_nan=False))
    out.write("\n")


@contextmanager
def _open_output(path: Optional[str]):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


# -- subcommands -------------------------------------------------------------

def cmd_div(args) -> int:
    try:
        if args.input in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        raws = read_records(text, args.input_format)
    except (OSError, UnicodeDecodeError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows = [compute_row(raw, i) for i, raw in enumerate(raws)]
    try:
        with _open_output(args.output) as out:
            (write_rows_json if args.format == "json" else write_rows_csv)(rows, out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_ROWS if any(r.error for r in rows) else EXIT_OK


def cmd_brownian(args) -> int:
    try:
        bp = BrownianPair(args.drift_p, args.vol_p, args.drift_q, args.vol_q)
    except GaussDivError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not (0.0 < args.t_start < args.t_end) or args.steps < 2:
        print("error: need 0 < t_start < t_end and steps >= 2", file=sys.stderr)
        return EXIT_USAGE
    t_min = brownian_t_min(bp)
    rows = []
    for t in np.linspace(args.t_start, args.t_end, args.steps):
        t = float(t)
        if t <= t_min:
            rows.append((t, None, "below_t_min"))
            continue
        try:
            rows.append((t, brownian_psi(bp, t), "ok"))
        except GaussDivError:
            rows.append((t, None, "below_t_min"))
    with _open_output(args.output) as out:
        if args.format == "json":
            payload = {"t_min": t_min, "rows": [{"t": t, "psi": v, "status": s} for t, v, s in rows]}
            out.write(json.dumps(payload, indent=2, allow_nan=False) + "\n")
        else:
            out.write(f"# t_min={fmt_number(t_min)}\n")
            w = csv.writer(out, lineterminator="\n")
            w.writerow(("t", "psi", "status"))
            for t, v, s in rows:
                w.writerow((fmt_number(t), fmt_number(v), s))
    return EXIT_OK


def limit_table(sigma: float) -> tuple[float, list[tuple[float, float, float]]]:
    """Limit value and (sigma_other, psi, gap) rows; raises InvalidNorm for small sigma."""
    fixed = Gaussian1D(0.0, sigma)
    limit = psi_limit_sigma(fixed)
    rows = []
    for s_other in LIMIT_SIGMAS:
        value = psi(fixed, Gaussian1D(0.0, s_other))
        rows.append((s_other, value, abs(value - limit)))
    return limit, rows


def cmd_limits(args) -> int:
    try:
        limit, rows = limit_table(args.sigma)
    except GaussDivError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = sys.stdout
    out.write(f"sigma,{fmt_number(args.sigma)}\n")
    out.write(f"limit,{fmt_number(limit)}\n")
    out.write("sigma_other,psi,gap\n")
    for s_other, value, gap in rows:
        out.write(f"{fmt_number(s_other)},{fmt_number(value)},{fmt_number(gap)}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_verification

    results = run_verification(args.grid, lambda_offset=args.perturb_lambda)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} {r.name:<24} max_error={r.max_error:.3e} bound={r.bound:.0e} ({r.seconds:.2f}s)"
        if not r.passed:
            line += f" worst={r.worst}"
        print(line)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaussdiv", description="Divergences between Gaussian measures.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("div", help="batch divergences from a CSV or JSON file of pairs")
    p.add_argument("--input", default="-", help="input file (default: stdin)")
    p.add_argument("--input-format", choices=("auto", "csv", "json"), default="auto")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output encoding")
    p.add_argument("--output", default="-", help="output file (default: stdout)")
    p.set_defaults(func=cmd_div)

    p = sub.add_parser("brownian", help="Psi(t) between two Brownian motions on a uniform time grid")
    p.add_argument("--drift-p", type=float, default=0.0)
    p.add_argument("--vol-p", type=float, required=True)
    p.add_argument("--drift-q", type=float, default=0.0)
    p.add_argument("--vol-q", type=float, required=True)
    p.add_argument("--t-start", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_brownian)

    p = sub.add_parser("limits", help="large-variance limit of Psi for a fixed sigma")
    p.add_argument("--sigma", type=float, required=True)
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("verify", help="run oracle cross-checks")
    p.add_argument("--grid", choices=("small", "full"), default="small")
    p.add_argument("--perturb-lambda", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
