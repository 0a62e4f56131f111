"""Command-line front end: ``digamma-zeros {zeros,sums,extrema,verify}``.

CSV columns (fixed):

  zeros    index,value,bracket_lo,bracket_hi,residual,approx_arctan,approx_hermite,approx_gap
  sums     id,terms_used,partial_sum,tail_estimate,tail_bound,tail_error_bound,total,
           closed_form,abs_error,rel_error,tolerance,pass
  extrema  n,location,kind,approx_location,residual,gap

CSV floats carry 12 significant digits, JSON floats round-trip exactly.
Exit codes: 0 success, 1 computation failure or failed check, 2 bad arguments.
"""
import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from datetime import datetime, timezone

from . import hyperfactorial as hf
from . import series, zeros
from ._accel import set_threads
from .constants import CONSTANTS
from .errors import DigammaZerosError

IDENTITY_TOLERANCE = {
    series.IdentityId.PSI_QUAD_SHIFT: 1e-5,
    series.IdentityId.PSI_QUAD: 1e-5,
    series.IdentityId.PSI_QUAD_MINUS1: 1e-5,
    series.IdentityId.PSI_QUARTIC: 1e-8,
    series.IdentityId.PSIG_QUAD: 1e-5,
    series.IdentityId.PSIG_QUARTIC: 1e-8,
}
IDENTITY_K = {i: (10**4 if "quartic" in i.value else 10**5) for i in series.IdentityId}

# (family, k, printed value, half unit of the last printed digit)
REFERENCE_ZEROS = [
    ("psi", 0, 1.461632, 5e-6),
    ("psi", 10, -9.702672541, 5e-9),
    ("psi", 100, -99.80953650, 5e-8),
    ("psi", 1000, -999.8641415, 5e-7),
    ("psig", 0, 2.55766, 5e-5),
    ("psig", 1, 1.39147, 5e-5),
    ("psig", 2, -0.3662934, 5e-7),
    ("psig", 11, -9.622785495, 5e-9),
    ("psig", 101, -99.77177415, 5e-8),
    ("psig", 1001, -999.8444267, 5e-7),
]
REFERENCE_EXTREMA = [(0.290957, 5e-6, hf.ExtremumKind.MAX), (1.53769, 5e-5, hf.ExtremumKind.MIN)]
PRODUCT_Z = (0.25, 0.5, 1.5)
PRODUCT_K = (100, 1000, 10000)
PRODUCT_TOL = 1e-3
VERIFY_N_MAX = 6

ZEROS_FIELDS = ["index", "value", "bracket_lo", "bracket_hi", "residual",
                "approx_arctan", "approx_hermite", "approx_gap"]
SUMS_FIELDS = ["id", "terms_used", "partial_sum", "tail_estimate", "tail_bound",
               "tail_error_bound", "total", "closed_form", "abs_error", "rel_error",
               "tolerance", "pass"]
EXTREMA_FIELDS = ["n", "location", "kind", "approx_location", "residual", "gap"]


# --- rows ------------------------------------------------------------------------

def _approx(family, k):
    fn = zeros.approx_psi_zero if family is zeros.ZeroFamily.PSI else zeros.approx_psiG_zero
    try:
        return fn(k, zeros.ApproxForm.ARCTAN), fn(k, zeros.ApproxForm.HERMITE)
    except DigammaZerosError:
        return None, None


def zero_rows(family, k_max):
    family = zeros.ZeroFamily(family)
    rows = []
    for rec in zeros.zero_table(family, k_max):
        arctan, hermite = _approx(family, rec.index)
        rows.append({
            "index": rec.index,
            "value": rec.value,
            "bracket_lo": rec.bracket_lo,
            "bracket_hi": rec.bracket_hi,
            "residual": rec.residual,
            "approx_arctan": arctan,
            "approx_hermite": hermite,
            "approx_gap": None if arctan is None else abs(rec.value - arctan),
        })
    return rows


def series_row(result):
    tol = IDENTITY_TOLERANCE[result.id]
    return {
        "id": result.id.value,
        "terms_used": result.terms_used,
        "partial_sum": result.partial_sum,
        "tail_estimate": result.tail_estimate,
        "tail_bound": result.tail_bound,
        "tail_error_bound": result.tail_error_bound,
        "total": result.total,
        "closed_form": result.closed_form,
        "abs_error": result.abs_error,
        "rel_error": result.rel_error,
        "tolerance": tol,
        "pass": bool(result.rel_error <= tol),
    }


def extremum_row(rec):
    return {
        "n": rec.n,
        "location": rec.location,
        "kind": rec.kind.value,
        "approx_location": rec.approx_location,
        "residual": rec.residual,
        "gap": rec.gap,
    }


def extrema_records(n_max):
    recs = list(hf.find_positive_extrema())
    for n in range(1, n_max + 1):
        recs.extend(hf.find_negative_extrema(n))
    return recs


# --- verification report ------------------------------------------------------------

def _product_checks():
    out = []
    for family, product, reference in (
        ("psi", series.weierstrass_psi, series.psi_over_gamma),
        ("psig", series.weierstrass_psiG, series.psiG_over_gamma),
    ):
        for z in PRODUCT_Z:
            ref = reference(z)
            errs = [abs(product(z, K) / ref - 1.0) for K in PRODUCT_K]
            decreasing = all(b < a for a, b in zip(errs, errs[1:]))
            out.append({
                "family": family,
                "z": z,
                "K": list(PRODUCT_K),
                "reference": ref,
                "rel_errors": errs,
                "tolerance": PRODUCT_TOL,
                "pass": bool(errs[-1] <= PRODUCT_TOL and decreasing),
            })
    return out


def _zero_checks():
    out = []
    for fam, k, ref, tol in REFERENCE_ZEROS:
        finder = zeros.find_psi_zero if fam == "psi" else zeros.find_psiG_zero
        value = finder(k).value
        diff = abs(value - ref)
        out.append({"family": fam, "k": k, "value": value, "reference_value": ref,
                    "abs_diff": diff, "tolerance": tol, "pass": bool(diff <= tol)})
    return out


def _extrema_checks(records):
    checks = []
    positive = [r for r in records if r.n == 0]
    for rec, (ref, tol, kind) in zip(positive, REFERENCE_EXTREMA):
        diff = abs(rec.location - ref)
        checks.append({"check": f"positive {kind.value} at {ref}", "value": rec.location,
                       "tolerance": tol, "pass": bool(diff <= tol and rec.kind is kind)})
    for rec in records:
        floor = hf.residual_floor(rec.location)
        checks.append({"check": f"residual n={rec.n} x={rec.location!r}", "value": rec.residual,
                       "tolerance": floor, "pass": bool(rec.residual <= floor)})
    gaps = [r.gap for r in records if r.gap is not None and r.n >= 2]
    checks.append({"check": "gap decreasing for n >= 2", "value": gaps, "tolerance": None,
                   "pass": all(b < a for a, b in zip(gaps, gaps[1:]))})
    return checks


def build_report(constants=CONSTANTS, n_max=VERIFY_N_MAX):
    """Every check, gathered section by section.

    A section that raises is recorded as an ``errors`` entry and fails the
    report; the remaining sections still run.
    """
    report = {
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "identities": [],
        "zeros_spot_checks": [],
        "extrema": [],
        "extrema_checks": [],
        "products": [],
        "errors": [],
    }

    def section(name, fn):
        try:
            fn()
        except DigammaZerosError as exc:
            report["errors"].append({"section": name, "message": str(exc)})

    def identities():
        for i in series.IdentityId:
            report["identities"].append(
                series_row(series.verify_identity(i, IDENTITY_K[i], constants)))

    def spot():
        report["zeros_spot_checks"] = _zero_checks()

    def extrema():
        records = extrema_records(n_max)
        report["extrema"] = [extremum_row(r) for r in records]
        report["extrema_checks"] = _extrema_checks(records)

    def products():
        report["products"] = _product_checks()

    section("identities", identities)
    section("zeros_spot_checks", spot)
    section("extrema", extrema)
    section("products", products)
    checks = (report["identities"] + report["zeros_spot_checks"]
              + report["extrema_checks"] + report["products"])
    report["pass"] = not report["errors"] and all(c["pass"] for c in checks)
    return report


# --- formatting ----------------------------------------------------------------------

def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.12g}"
    return str(v)


def format_csv(rows, fields):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for row in rows:
        w.writerow([_csv_cell(row[f]) for f in fields])
    return buf.getvalue()


def format_json(payload):
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = os.path.abspath(out)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".tmp-")
    with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, target)


def _render(rows, fields, fmt):
    return format_csv(rows, fields) if fmt == "csv" else format_json(rows)


# --- commands ---------------------------------------------------------------------------

def cmd_zeros(args):
    rows = zero_rows(args.family, args.k_max)
    emit(_render(rows, ZEROS_FIELDS, args.format), args.out)
    return 0


def cmd_sums(args):
    ids = list(series.IdentityId) if args.id == "all" else [series.IdentityId(args.id)]
    rows = [series_row(series.verify_identity(i, args.k)) for i in ids]
    emit(_render(rows, SUMS_FIELDS, args.format), args.out)
    return 0 if all(r["pass"] for r in rows) else 1


def cmd_extrema(args):
    rows = [extremum_row(r) for r in extrema_records(args.n_max)]
    emit(_render(rows, EXTREMA_FIELDS, args.format), args.out)
    return 0


def cmd_verify(args):
    report = build_report(CONSTANTS)
    emit(format_json(report), args.out)
    return 0 if report["pass"] else 1


def _non_negative(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _tail_k(text):
    v = int(text)
    if v < series.MIN_TAIL_K:
        raise argparse.ArgumentTypeError(f"K must be >= {series.MIN_TAIL_K}, got {text}")
    return v


def build_parser():
    parser = argparse.ArgumentParser(
        prog="digamma-zeros",
        description="Zeros of psi and psi_G, zero-sum identities, hyperfactorial extrema.",
    )
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for the numba kernels (default: all cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=True):
        if formats:
            p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("zeros", help="table of zeros with asymptotic comparisons")
    p.add_argument("--family", choices=["psi", "psig"], required=True)
    p.add_argument("--k-max", type=_non_negative, required=True)
    common(p)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("sums", help="verify the zero-sum identities")
    p.add_argument("--id", choices=[i.value for i in series.IdentityId] + ["all"], default="all")
    p.add_argument("--k", type=_tail_k, default=10**5)
    common(p)
    p.set_defaults(func=cmd_sums)

    p = sub.add_parser("extrema", help="extrema of the hyperfactorial K(x)")
    p.add_argument("--n-max", type=_non_negative, required=True)
    common(p)
    p.set_defaults(func=cmd_extrema)

    p = sub.add_parser("verify", help="run every check and write a JSON report")
    common(p, formats=False)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    set_threads(args.threads)
    try:
        return args.func(args)
    except DigammaZerosError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
