"""``pforge`` command line: forge instances, scan them, print invariants and tables."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from . import invariants as inv
from .fields import QQ, Field, finite_field, parse_field
from .pfaffian import SkewMatrix, kernel_vector, pfaffian
from .poly import Polynomial
from .rng import InstanceRNG
from .smooth import BudgetExceeded, UnsupportedCharacteristic, default_budget, singular_points
from .steiner import (
    AlternatingThreeForm,
    DegenerateInstance,
    Kind,
    ShapeMismatch,
    assemble,
    extract_cubic,
    random_data,
)

DEFAULT_RETRIES = 32


class RetriesExhausted(RuntimeError):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- forge ----------------------------------------------------------------------


def _data_json(kind: Kind, data) -> dict:
    if kind is Kind.LINEAR_PFAFFIAN:
        return {"matrix": data.to_json()}
    forms = data if isinstance(data, list) else [data]
    return {"three_forms": [w.to_json() for w in forms]}


def _data_from_json(kind: Kind, request: dict):
    if kind is Kind.LINEAR_PFAFFIAN:
        return SkewMatrix.from_json(request["matrix"])
    forms = [AlternatingThreeForm.from_json(w) for w in request["three_forms"]]
    return forms if kind is Kind.TWO_TANGENT else forms[0]


def _scan_json(form: Polynomial, budget: int, field: Field) -> dict:
    try:
        report = singular_points(form, budget=budget)
    except (BudgetExceeded, UnsupportedCharacteristic) as exc:
        return {"status": "skipped", "reason": str(exc)}
    out = {"status": "done"}
    out.update(report.to_json(field.format))
    return out


def forge(
    kind: Kind | str,
    field: Field,
    seed: int,
    degree: int = 3,
    budget: int | None = None,
    retries: int = DEFAULT_RETRIES,
    scan: bool = True,
    require_smooth: bool = True,
) -> dict:
    """Draw, assemble, extract and scan until an instance survives.

    Attempt ``a`` uses the sub-stream ``(seed, a)``.  Degenerate instances are
    always rejected; instances with singular rational points are rejected
    while ``require_smooth`` holds and the scan fits the budget.
    """
    kind = Kind(kind)
    budget = default_budget() if budget is None else budget
    rejected = []
    for attempt in range(retries):
        rng = InstanceRNG(seed, attempt)
        data = random_data(kind, field, rng, degree)
        try:
            pres = assemble(kind, data, degree)
            cubic = extract_cubic(pres)
        except DegenerateInstance as exc:
            rejected.append({"attempt": attempt, "outcome": "degenerate", "reason": str(exc)})
            continue
        scan_out = _scan_json(cubic.form, budget, field) if scan else {"status": "skipped", "reason": "disabled"}
        if require_smooth and scan_out.get("singular"):
            rejected.append(
                {"attempt": attempt, "outcome": "singular", "reason": f"{len(scan_out['singular'])} singular points"}
            )
            continue
        instance = cubic.to_json()
        instance["provenance"].update({"seed": seed, "attempt": attempt})
        return {
            "command": "forge",
            "version": __version__,
            "kind": kind.value,
            "degree": cubic.degree,
            "field": str(field),
            "seed": seed,
            "attempts": attempt + 1,
            "rejected": rejected,
            "data": _data_json(kind, data),
            "instance": instance,
            "scan": scan_out,
        }
    raise RetriesExhausted(f"no usable instance in {retries} attempts from seed {seed}")


def forge_from_input(request: dict, budget: int | None = None, scan: bool = True) -> dict:
    kind = Kind(request["kind"])
    degree = int(request.get("degree", 3))
    data = _data_from_json(kind, request)
    pres = assemble(kind, data, degree)
    cubic = extract_cubic(pres)
    field = pres.field
    instance = cubic.to_json()
    if "seed" in request:
        instance["provenance"]["seed"] = request["seed"]
    budget = default_budget() if budget is None else budget
    return {
        "command": "forge",
        "version": __version__,
        "kind": kind.value,
        "degree": cubic.degree,
        "field": str(field),
        "seed": request.get("seed"),
        "attempts": 1,
        "rejected": [],
        "data": _data_json(kind, data),
        "instance": instance,
        "scan": _scan_json(cubic.form, budget, field) if scan else {"status": "skipped", "reason": "disabled"},
    }


# -- invariants -------------------------------------------------------------------


def invariants_report(args: argparse.Namespace) -> dict:
    what = args.what
    if what == "surface":
        s = inv.surface_invariants(args.d, args.s, args.k)
        return {
            "quantity": "surface",
            "formulas": ["surface.degree", "surface.chi", "surface.self-intersection", "surface.canonical"],
            "inputs": {"d": args.d, "s": args.s, "k": args.k},
            "result": s.to_json(),
        }
    if what == "delta":
        if args.kind:
            params = inv.steiner_params(args.kind, args.degree, args.twist)
        else:
            if args.half_rank is None or args.chern is None or args.d is None:
                raise SystemExit("delta needs --kind, or --half-rank, --chern and --d")
            params = inv.PfaffianTypeParams(args.half_rank, args.twist, tuple(args.chern), args.d)
        res = inv.pfaffian_discriminant(params)
        return {
            "quantity": "delta",
            "formulas": ["pfaffian.c2h2", "pfaffian.c2sq", "pfaffian.delta"],
            "inputs": {
                "kind": args.kind,
                "half_rank": params.half_rank,
                "twist": params.twist,
                "chern": list(params.chern),
                "d": params.d,
            },
            "result": res.to_json(),
        }
    if what == "bound":
        return {
            "quantity": "bound",
            "formulas": ["charge.bound"],
            "inputs": {"d": args.d},
            "result": {"k_max": inv.charge_bound(args.d)},
        }
    if what == "charge":
        val = inv.charge_discriminant(args.d, args.k)
        return {
            "quantity": "charge",
            "formulas": ["charge.discriminant"],
            "inputs": {"d": args.d, "k": args.k},
            "result": {"discriminant_times_180": val, "delta": str(inv.Fraction(val, 180))},
        }
    if what == "ci":
        return {
            "quantity": "ci",
            "formulas": ["complete-intersection.lambda"],
            "inputs": {"k": args.k},
            "result": inv.ci_class_check(args.k).to_json(),
        }
    if what == "ulrich":
        return {
            "quantity": "ulrich",
            "formulas": ["ulrich.moduli-dimension", "ulrich.delta", "ulrich.c3", "ulrich.c4"],
            "inputs": {"r": args.r, "a": args.a},
            "result": inv.ulrich_numerics(args.r, args.a).to_json(),
        }
    if what == "chi":
        return {
            "quantity": "chi",
            "formulas": ["instanton.chi-twist"],
            "inputs": {"r": args.r, "k": args.k, "n": args.n, "t": args.t, "d": args.d},
            "result": {"chi": inv.chi_twist(args.r, args.k, args.n, args.t, args.d)},
        }
    if what == "c1":
        return {
            "quantity": "c1",
            "formulas": ["instanton.c1"],
            "inputs": {"r": args.r, "d": args.d},
            "result": {"c1": str(inv.instanton_c1(args.r, args.d))},
        }
    if what == "locus":
        return {
            "quantity": "locus",
            "formulas": ["pfaffian.locus-dimension"],
            "inputs": {"d": args.d},
            "result": inv.pfaffian_locus_dimension(args.d),
        }
    if what == "chern":
        return {
            "quantity": "chern",
            "formulas": ["steiner.chern"],
            "inputs": {"kind": args.kind},
            "result": {"e": list(inv.chern_of_steiner(args.kind))},
        }
    if what == "table1":
        rows = inv.enumerate_table1()
        return {
            "quantity": "table1",
            "formulas": ["ulrich.moduli-dimension", "ulrich.delta", "ulrich.c4"],
            "inputs": {},
            "result": {"rows": [{"r": r, "delta": d, "m": m} for r, d, m in rows]},
        }
    if what == "table2":
        rows = inv.table2()
        return {
            "quantity": "table2",
            "formulas": ["surface.degree", "surface.self-intersection", "gram.discriminant"],
            "inputs": {},
            "result": {"rows": [{"k": k, "delta": d, "h2Y": h, "Y2": y} for k, d, h, y in rows]},
        }
    raise SystemExit(f"unknown invariant {what!r}")


# -- argument parsing -----------------------------------------------------------------


def _field_from_args(args) -> Field:
    if args.field in ("QQ", "Q", "0"):
        return QQ
    try:
        return finite_field(int(args.field), args.ext)
    except ValueError:
        return parse_field(args.field)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pforge", description=__doc__)
    parser.add_argument("--version", action="version", version=f"pforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    f = sub.add_parser("forge", help="generate a Steiner-Pfaffian or linear Pfaffian instance")
    f.add_argument("--kind", choices=[k.value for k in Kind], default=Kind.TWO_TANGENT.value)
    f.add_argument("--degree", type=int, default=3)
    f.add_argument("--field", default="101", help="prime p, or QQ")
    f.add_argument("--ext", type=int, choices=(1, 2), default=1)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--budget", type=int, default=None)
    f.add_argument("--retries", type=int, default=DEFAULT_RETRIES)
    f.add_argument("--no-scan", action="store_true")
    f.add_argument("--allow-singular", action="store_true", help="keep instances with singular points")
    f.add_argument("--input", help="JSON file with kind and raw data instead of random draws")
    f.add_argument("--out")

    t = sub.add_parser("tables", help="print the Ulrich and instanton tables as TSV")
    t.add_argument("--which", choices=("1", "2", "all"), default="all")
    t.add_argument("--out", help="directory receiving table1.tsv and table2.tsv")

    i = sub.add_parser("invariants", help="evaluate closed-form invariants")
    i.add_argument(
        "what",
        choices=("surface", "delta", "bound", "charge", "ci", "ulrich", "chi", "c1", "locus", "chern", "table1", "table2"),
    )
    i.add_argument("--d", type=int)
    i.add_argument("--s", type=int, default=0)
    i.add_argument("--k", type=int, default=0)
    i.add_argument("--r", type=int, default=2)
    i.add_argument("--a", type=int, default=0)
    i.add_argument("--n", type=int, default=4)
    i.add_argument("--t", type=int, default=0)
    i.add_argument("--kind", choices=[k.value for k in Kind])
    i.add_argument("--degree", type=int, default=3)
    i.add_argument("--twist", type=int, default=1)
    i.add_argument("--half-rank", type=int)
    i.add_argument("--chern", type=int, nargs=5)
    i.add_argument("--out")

    c = sub.add_parser("check-smooth", help="scan a form for singular rational points")
    c.add_argument("path", help="polynomial JSON, a forge report, or - for stdin")
    c.add_argument("--ext", type=int, choices=(1, 2), default=None)
    c.add_argument("--budget", type=int, default=None)
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--out")

    p = sub.add_parser("pfaffian", help="Pfaffian of a skew matrix given as JSON")
    p.add_argument("path", help="skew-matrix JSON, or - for stdin")
    p.add_argument("--out")
    return parser


def _read_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return json.loads(text)


def _polynomial_from(doc: dict) -> Polynomial:
    if "instance" in doc:
        doc = doc["instance"]
    if "form" in doc:
        doc = doc["form"]
    return Polynomial.from_json(doc)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "forge":
            if args.input:
                report = forge_from_input(_read_json(args.input), args.budget, not args.no_scan)
            else:
                if args.seed < 0 or args.seed >= 1 << 64:
                    raise SystemExit("--seed must be a 64-bit unsigned integer")
                report = forge(
                    args.kind,
                    _field_from_args(args),
                    args.seed,
                    degree=args.degree,
                    budget=args.budget,
                    retries=args.retries,
                    scan=not args.no_scan,
                    require_smooth=not args.allow_singular,
                )
            _emit(_dump(report), args.out)
            return 0
        if args.command == "tables":
            t1, t2 = inv.table1_tsv(), inv.table2_tsv()
            if args.out:
                d = Path(args.out)
                d.mkdir(parents=True, exist_ok=True)
                if args.which in ("1", "all"):
                    (d / "table1.tsv").write_text(t1)
                if args.which in ("2", "all"):
                    (d / "table2.tsv").write_text(t2)
            else:
                sys.stdout.write({"1": t1, "2": t2, "all": t1 + "\n" + t2}[args.which])
            return 0
        if args.command == "invariants":
            _emit(_dump(invariants_report(args)), args.out)
            return 0
        if args.command == "check-smooth":
            form = _polynomial_from(_read_json(args.path))
            report = singular_points(form, budget=args.budget, workers=args.workers, ext=args.ext)
            field = form.field if args.ext is None else finite_field(form.field.characteristic, args.ext)
            _emit(_dump(report.to_json(field.format)), args.out)
            return 0 if report.clean else 1
        if args.command == "pfaffian":
            m = SkewMatrix.from_json(_read_json(args.path))
            out = {"size": m.size, "ring": m.ring.tag()}
            if m.size % 2 == 0:
                out["pfaffian"] = m.ring.serialize(pfaffian(m))
            else:
                out["kernel_vector"] = [m.ring.serialize(v) for v in kernel_vector(m)]
            _emit(_dump(out), args.out)
            return 0
    except RetriesExhausted as exc:
        sys.stderr.write(_dump({"error": "RetriesExhausted", "message": str(exc)}))
        return 2
    except (DegenerateInstance, ShapeMismatch, BudgetExceeded, UnsupportedCharacteristic, ValueError, KeyError, OSError) as exc:
        sys.stderr.write(_dump({"error": type(exc).__name__, "message": str(exc)}))
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
