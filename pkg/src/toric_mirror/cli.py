"""``toric-mirror <command> --model FILE [flags]``: JSON verification reports."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from fractions import Fraction

from . import __version__
from . import _poly as P
from .cohomology import CohomClass, RingPresentation, chern_total, integrate
from .errors import DomainError, GeometryError, SchemaError, ToricMirrorError, TruncationWarning
from .gamma_class import (
    KClass, central_charge_terms, gamma_class, reflection_check, todd_class,
)
from .gkz import certificate_classes, gkz_operator, i_function, mirror_map, rank_check, verify_gkz
from .mellin_barnes import residue_sum
from .models import ModelFile, load_model
from .oscillatory import asymptotic_compare, build_potential, errors_decreasing, positive_cycle_integral
from .toric_geom import check_stability, is_weak_fano, mori_generators, nef_rays

COMMANDS = (
    "check", "ifunction", "gkz-verify", "mirror-map", "gamma", "asymptotics",
    "central-charge", "oscillatory", "mellin",
)


# -- serialization ------------------------------------------------------------

def _real(x: float) -> str:
    return format(float(x), ".17g")


def encode(obj):
    """JSON-ready form: rationals as "num/den", reals as 17-digit strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return _real(obj)
    if isinstance(obj, complex):
        return {"re": _real(obj.real), "im": _real(obj.imag)}
    if isinstance(obj, CohomClass):
        return [encode(x) for x in obj.coeffs]
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return encode(obj.item())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(encode(report), sort_keys=True, indent=2) + "\n"


def _basis_names(ring: RingPresentation) -> list:
    return [P.to_string({mono: 1}) for mono in ring.basis]


def _floats(text: str) -> list:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise DomainError(f"cannot read numbers from {text!r}") from None


def _q_vector(text: str, k: int) -> list:
    q = _floats(text)
    if len(q) == 1:
        q = q * k
    if len(q) != k:
        raise DomainError(f"expected {k} q-values, got {len(q)}")
    return q


def _bundle(text: str | None, k: int) -> KClass:
    if not text:
        return KClass.structure_sheaf(k)
    summands = []
    for part in text.split(","):
        try:
            vec = tuple(int(x) for x in part.split(":"))
        except ValueError:
            raise DomainError(f"cannot read line bundle {part!r}") from None
        if len(vec) != k:
            raise DomainError(f"line bundle {part!r} needs {k} components")
        summands.append((1, vec))
    return KClass(tuple(summands))


# -- commands -----------------------------------------------------------------

def cmd_check(mf: ModelFile, ring: RingPresentation, args) -> dict:
    f, g = mf.fan, mf.git
    fano = is_weak_fano(f)
    return {
        "git": {"charges": g.charges, "omega": g.omega},
        "fan": {"rays": f.rays, "max_cones": f.max_cones},
        "stability": check_stability(g)._asdict(),
        "weak_fano": fano.weak_fano,
        "fano": fano.fano,
        "rank": rank_check(ring),
        "betti": ring.betti,
        "basis": _basis_names(ring),
        "mori_generators": mori_generators(f, g),
        "nef_rays": nef_rays(f, g),
        "primitive_collections": ring.primitive_collections,
    }


def _bound(args, mf: ModelFile) -> int:
    return args.bound if args.bound is not None else mf.defaults.get("bound", 6)


def _tol(args, mf: ModelFile) -> float:
    return args.tol if args.tol is not None else mf.defaults.get("tol", 1e-10)


def cmd_ifunction(mf, ring, args) -> dict:
    I = i_function(ring, _bound(args, mf))
    terms = []
    for d in sorted(I.terms, key=lambda d: (I.degree(d), d)):
        series = I.terms[d]
        terms.append({
            "d": d,
            "omega_degree": I.degree(d),
            "z_powers": [{"e": e, "coeffs": series[e]} for e in sorted(series)],
        })
    return {"bound": I.bound, "basis": _basis_names(ring), "terms": terms}


def cmd_gkz_verify(mf, ring, args) -> dict:
    bound = _bound(args, mf)
    res = verify_gkz(ring, bound)
    ops = []
    for d in certificate_classes(ring):
        op = gkz_operator(d, ring.git)
        ops.append({"d": d, "operator": op.describe(ring.git.charges), "residual": res[d]})
    return {"bound": bound, "operators": ops, "all_zero": all(r == "zero" for r in res.values())}


def cmd_mirror_map(mf, ring, args) -> dict:
    mm = mirror_map(i_function(ring, _bound(args, mf)))

    def series(s):
        return [{"d": d, "c": c} for d, c in sorted(s.items())]

    return {
        "bound": mm.bound,
        "trivial": mm.trivial,
        "log_terms": [series(s) for s in mm.log_terms],
        "psi": [series(s) for s in mm.psi],
    }


def cmd_gamma(mf, ring, args) -> dict:
    td = todd_class(ring)
    return {
        "basis": _basis_names(ring),
        "gamma_hat": gamma_class(ring),
        "todd": td,
        "todd_integral": integrate(td),
        "euler_characteristic": integrate(chern_total(ring)),
        "reflection_residual": reflection_check(12),
    }


def cmd_asymptotics(mf, ring, args) -> dict:
    if args.q_ratio <= 0 or args.q_ratio >= 1:
        raise DomainError("--q-ratio must lie in (0, 1)")
    w = build_potential(mf.fan, mf.git)
    qs = [[args.q_start * args.q_ratio ** s] * ring.k for s in range(args.steps)]
    rows = asymptotic_compare(w, ring, qs, args.z, _tol(args, mf))
    table = [
        {"q": list(r.q), "numeric": r.numeric, "gamma_value": r.gamma_value, "abs_err": r.abs_err}
        for r in rows
    ]
    if args.csv:
        _write_csv(args.csv, table, ring.k)
    return {"z": args.z, "rows": table, "decreasing": errors_decreasing(rows)}


def csv_text(table: list, k: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    qcols = ["q"] if k == 1 else [f"q{a + 1}" for a in range(k)]
    writer.writerow(qcols + ["numeric", "gamma_value", "abs_err"])
    for row in table:
        writer.writerow([_real(x) for x in row["q"]] + [
            _real(row["numeric"]), _real(row["gamma_value"]), _real(row["abs_err"])
        ])
    return buf.getvalue()


def _write_csv(path: str, table: list, k: int) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(csv_text(table, k))


def cmd_central_charge(mf, ring, args) -> dict:
    q = _q_vector(args.q, ring.k)
    bound = args.bound if args.bound is not None else 25
    E = _bundle(args.bundle, ring.k)
    terms = central_charge_terms(E, i_function(ring, bound), q, args.z)
    value = complex(sum(v for _, v in terms))
    tail = abs(terms[-1][1]) if len(terms) > 1 else 0.0
    return {
        "q": q, "z": args.z, "bound": bound,
        "bundle": [list(v) for _, v in E.summands],
        "value": value,
        "tail": tail,
        "truncation_warning": tail >= 1e-3 * abs(value),
    }


def cmd_oscillatory(mf, ring, args) -> dict:
    q = _q_vector(args.q, ring.k)
    w = build_potential(mf.fan, mf.git)
    r = positive_cycle_integral(w, q, args.z, _tol(args, mf))
    return {
        "q": q, "z": args.z, "potential": w.describe(),
        "value": r.value, "error": r.error, "step": r.step,
        "precision": os.environ.get("TORIC_MIRROR_PRECISION", "double"),
    }


def cmd_mellin(mf, ring, args) -> dict:
    q = _floats(args.q)
    if len(q) != 1:
        raise DomainError("mellin takes a single q")
    r = residue_sum(mf.git, q[0], args.z, args.terms)
    return {"q": q[0], "z": args.z, "terms": args.terms, "value": r.value, "tail_estimate": r.tail_estimate}


HANDLERS = {
    "check": cmd_check,
    "ifunction": cmd_ifunction,
    "gkz-verify": cmd_gkz_verify,
    "mirror-map": cmd_mirror_map,
    "gamma": cmd_gamma,
    "asymptotics": cmd_asymptotics,
    "central-charge": cmd_central_charge,
    "oscillatory": cmd_oscillatory,
    "mellin": cmd_mellin,
}


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toric-mirror", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", required=True, help="model JSON file")
        return p

    add("check", "stability, fan, weak-Fano and rank report")
    for name, text in (("ifunction", "I-function coefficients"),
                       ("gkz-verify", "GKZ residuals on the truncated I-function"),
                       ("mirror-map", "mirror map series")):
        add(name, text).add_argument("--bound", type=int)
    add("gamma", "Gamma-hat and Todd classes")
    p = add("asymptotics", "positive-cycle period against Gamma-class asymptotics")
    p.add_argument("--z", type=float, default=1.0)
    p.add_argument("--q-start", type=float, default=1e-2)
    p.add_argument("--q-ratio", type=float, default=0.1)
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--tol", type=float)
    p.add_argument("--csv", help="also write the table to this CSV file")
    p = add("central-charge", "I-function central charge of a sum of line bundles")
    p.add_argument("--q", required=True, help="q value, or comma-separated vector")
    p.add_argument("--z", type=float, default=1.0)
    p.add_argument("--bundle", help='line bundles as "a:b,c:d" (default: structure sheaf)')
    p.add_argument("--bound", type=int)
    p = add("oscillatory", "positive-cycle exponential period")
    p.add_argument("--q", required=True)
    p.add_argument("--z", type=float, default=1.0)
    p.add_argument("--tol", type=float)
    p = add("mellin", "Mellin-Barnes residue sum (Picard rank one)")
    p.add_argument("--q", required=True)
    p.add_argument("--z", type=float, default=1.0)
    p.add_argument("--terms", type=int, default=30)
    return ap


def _echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "command" and v is not None}


def run(argv=None) -> tuple[int, str]:
    """Parse ``argv``, run the command, and return (exit status, report text)."""
    args = build_parser().parse_args(argv)
    report = {"command": args.command, "args": _echo(args), "version": __version__, "model": None}
    try:
        mf = load_model(args.model)
        report["model"] = mf.name
        ring = RingPresentation(mf.fan, mf.git)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            report["result"] = HANDLERS[args.command](mf, ring, args)
    except ToricMirrorError as e:
        err = {"kind": e.kind, "message": str(e)}
        if isinstance(e, (SchemaError, GeometryError)):
            err["path"] = e.path
            err["category"] = "SchemaError" if isinstance(e, SchemaError) else "GeometryError"
        report["error"] = err
        return 1, dumps(report)
    except OSError as e:
        report["error"] = {"kind": "IOError", "message": f"{e.strerror}: {e.filename}"}
        return 1, dumps(report)
    return 0, dumps(report)


def main(argv=None) -> int:
    status, text = run(argv)
    sys.stdout.write(text)
    sys.stdout.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
