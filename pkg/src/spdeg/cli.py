"""Command-line front end.

Verbs: catalog, validate, invariants, ricci, degenerate, hasse, theorem-a,
theorem-b, remark-check.  Every verb is a thin wrapper over library calls;
--json output is deterministic (sorted keys, sorted ids, fixed seed).

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import catalog, curvature, degeneration, invariants, tensor
from .scalars import format_rational

DEFAULT_SEED = 20240801


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(human)


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def _parse_class(text: str):
    return catalog.parse_class(text)


def cmd_catalog(args) -> int:
    if args.cls:
        cid = _parse_class(args.cls)
        mu, _ = catalog.make(cid)
        payload = {"class": str(cid), "display": cid.display(),
                   "bracket": mu.to_json_dict()}
        lines = [f"{cid}  {cid.display()}"]
        for i, j, k, c in mu.entries():
            lines.append(f"  [e{i},e{j}] = {format_rational(c)} e{k}")
        _emit(args, payload, "\n".join(lines))
        return 0
    rows = []
    lines = []
    for spec in catalog.CLASS_DEFS:
        entry = {"key": spec.key, "display": spec.display}
        text = f"{spec.key:16s} {spec.display}"
        if spec.param_name:
            entry["parameter"] = f"{spec.param_name}: {spec.param_doc}"
            text += f"   [{spec.param_name}: {spec.param_doc}]"
        rows.append(entry)
        lines.append(text)
    curve_ids = sorted(c.id for c in catalog.curves())
    _emit(args, {"classes": rows, "curves": curve_ids},
          "\n".join(lines) + "\n\ncurves:\n  " + "\n  ".join(curve_ids))
    return 0


def cmd_validate(args) -> int:
    if args.file:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                mu = tensor.Bracket.from_json(fh.read())
        except OSError as e:
            return _fail(3, f"cannot read {args.file}: {e}")
        omega = tensor.TwoForm.canonical(mu.dim)
        label = args.file
    else:
        cid = _parse_class(args.cls)
        mu, omega = catalog.make(cid)
        label = str(cid)
    lie = tensor.is_lie(mu)
    closed = tensor.is_closed(mu, omega)
    payload = {"class": label, "jacobi": lie, "closed": closed}
    _emit(args, payload,
          f"{label}: Jacobi: {'OK' if lie else 'FAIL'}, dw=0: {'OK' if closed else 'FAIL'}")
    return 0 if (lie and closed) else 1


def cmd_invariants(args) -> int:
    cid = _parse_class(args.cls)
    summary = invariants.invariants_summary(cid)
    human = (f"{summary['class']}  {summary['display']}\n"
             f"  dim Der_w = {summary['dim_der_omega']} (expected {summary['expected_dim_der_omega']})\n"
             f"  dim Der   = {summary['dim_der']} (expected {summary['expected_dim_der']})\n"
             f"  orbit dim (symplectic)     = {summary['orbit_dim_symplectic']}\n"
             f"  orbit dim (general linear) = {summary['orbit_dim_general_linear']}\n"
             f"  unimodular = {summary['unimodular']}, derived dim = {summary['derived_dim']}, "
             f"nilpotent = {summary['nilpotent']}")
    _emit(args, summary, human)
    return 0 if summary["matches_expected"] else 1


def cmd_ricci(args) -> int:
    cid = _parse_class(args.cls)
    mu, _ = catalog.make(cid)
    tensors = curvature.ricci(mu)
    c = curvature.einstein_check(mu)
    sig = tensors.ricci.signature()
    payload = {"class": str(cid),
               "ricci_matrix": [[format_rational(x) for x in row] for row in tensors.ricci.m],
               "signature": list(sig),
               "scalar_curvature": format_rational(tensors.scalar_curv),
               "einstein": format_rational(c) if c is not None else None}
    lines = [f"{cid}  Ricci signature {sig}, scalar curvature {format_rational(tensors.scalar_curv)}"]
    for row in tensors.ricci.m:
        lines.append("  [" + ", ".join(format_rational(x) for x in row) + "]")
    lines.append(f"  Einstein: {format_rational(c) if c is not None else 'no'}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_degenerate(args) -> int:
    try:
        inst = catalog.parse_curve(args.curve)
    except (KeyError, ValueError) as e:
        return _fail(2, str(e))
    report = degeneration.verify_curve(inst, dist_tol=args.tol or 1e-8)
    payload = report.to_json_dict()
    lines = [f"{report.label}: {report.status}"
             + ("" if report.symplectic_exact else " (not symplectic)")]
    for t, d in report.float_distances:
        lines.append(f"  d({t:g}) = {d:.3e}")
    lines.append(f"  verified: {report.verified}")
    _emit(args, payload, "\n".join(lines))
    return 0 if report.verified else 1


def _hasse_payload(report):
    return report.to_json_dict()


def cmd_hasse(args) -> int:
    report = degeneration.hasse()
    if args.dot:
        try:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(report.dot + "\n")
        except OSError as e:
            return _fail(3, f"cannot write {args.dot}: {e}")
    payload = _hasse_payload(report)
    lines = []
    for e in sorted(report.edges, key=lambda e: (e.source, e.target)):
        lines.append(f"{e.source:28s} -> {e.target:24s} [{e.status}]"
                     f" der_w strict: {e.der_omega_increases}")
    lines.append(f"all edges verified: {report.all_verified}")
    _emit(args, payload, "\n".join(lines))
    return 0 if (report.all_verified and report.strict_der_omega) else 1


def cmd_theorem_a(args) -> int:
    report = degeneration.hasse()
    suite = degeneration.non_degeneration_suite(seed=args.seed, samples=args.samples)
    ok = (report.all_verified and report.strict_der_omega
          and all(c.passed for c in suite))
    payload = {"edges": [e.to_json_dict() for e in report.edges],
               "non_degenerations": [c.to_json_dict() for c in suite],
               "theorem_b": []}
    if args.pairs:
        payload["pair_status"] = [
            {"source": a, "target": b, "status": s}
            for a, b, s in degeneration.classify_pairs(report)]
    if args.dot:
        try:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(report.dot + "\n")
        except OSError as e:
            return _fail(3, f"cannot write {args.dot}: {e}")
    lines = [f"edges verified: {sum(e.status == 'verified' for e in report.edges)}"
             f"/{len(report.edges)}",
             f"der_w strictly increases along all edges: {report.strict_der_omega}"]
    for c in suite:
        lines.append(f"non-degeneration {c.name}: {'certified' if c.passed else 'FAILED'}")
    lines.append(f"theorem-a: {'PASS' if ok else 'FAIL'}")
    _emit(args, payload, "\n".join(lines))
    return 0 if ok else 1


def cmd_theorem_b(args) -> int:
    records = degeneration.theorem_b_search(seed=args.seed, samples=args.samples,
                                            tmax=args.tmax)
    ok = all((r.status == "witness") or (r.status == "exceptional" and r.all_det_zero)
             for r in records)
    payload = {"edges": [], "non_degenerations": [],
               "theorem_b": [r.to_json_dict() for r in
                             sorted(records, key=lambda r: r.class_id)]}
    lines = []
    for r in sorted(records, key=lambda r: r.class_id):
        if r.status == "witness":
            lines.append(f"{r.class_id:28s} witness at exp(t)=2**{r.k}: signature {r.signature}")
        elif r.status == "exceptional":
            lines.append(f"{r.class_id:28s} degenerate Ricci on {r.samples} exact samples: "
                         f"{'OK' if r.all_det_zero else 'FAIL'}")
        else:
            lines.append(f"{r.class_id:28s} SEARCH EXHAUSTED")
    lines.append(f"theorem-b: {'PASS' if ok else 'FAIL'}")
    _emit(args, payload, "\n".join(lines))
    return 0 if ok else 1


def cmd_remark_check(args) -> int:
    rho0 = catalog.rho_family(Fraction(0))
    sig0 = curvature.ricci(rho0).ricci.signature()
    roots = curvature.find_degenerate_ricci(
        catalog.rho_family, 0, 12, det_tol=args.tol or 1e-12)
    certified = [r for r in roots
                 if r.signature_below == (0, 4, 0) and r.signature_above == (1, 3, 0)]
    ok = sig0 == (0, 4, 0) and len(certified) >= 1
    payload = {"signature_at_zero": list(sig0),
               "roots": [r.to_json_dict() for r in roots],
               "certified_roots": len(certified)}
    lines = [f"signature at t=0: {sig0}"]
    for r in roots:
        lines.append(f"  root t^ = {float(r.t_hat):.12f} in [{float(r.low):.12f}, {float(r.high):.12f}]"
                     f" |det| = {abs(r.det_at_t_hat):.2e}"
                     f" signatures {r.signature_below} -> {r.signature_above}")
    lines.append(f"remark-check: {'PASS' if ok else 'FAIL'}")
    _emit(args, payload, "\n".join(lines))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="spdeg",
        description="Exact verification of symplectic orbit closures in dimension four "
                    "and their curvature-signature applications.")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="seed for randomized exact sampling")
    p.add_argument("--tol", type=float, default=None,
                   help="float tolerance (default: 1e-8 curve distances, "
                        "1e-12 determinant roots)")
    sub = p.add_subparsers(dest="verb")

    sp = sub.add_parser("catalog", help="list classes and curves, or show one class")
    sp.add_argument("--class", dest="cls", help="class id, e.g. d4_2:w2 or r2r2:lambda=7/3")
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("validate", help="check Jacobi and closedness")
    sp.add_argument("--class", dest="cls")
    sp.add_argument("--file", help="bracket JSON file")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("invariants", help="derivation dimensions and structure flags")
    sp.add_argument("--class", dest="cls", required=True)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("ricci", help="Ricci tensor, signature, Einstein check")
    sp.add_argument("--class", dest="cls", required=True)
    sp.set_defaults(func=cmd_ricci)

    sp = sub.add_parser("degenerate", help="verify one degeneration curve")
    sp.add_argument("--curve", required=True,
                    help="curve id, e.g. appendix:rh3-a4 or appendix:d4lambda-n4:lambda=7/3")
    sp.set_defaults(func=cmd_degenerate)

    sp = sub.add_parser("hasse", help="verify the degeneration diagram and emit DOT")
    sp.add_argument("--dot", help="write DOT graph to this path")
    sp.set_defaults(func=cmd_hasse)

    sp = sub.add_parser("theorem-a", help="full diagram verification plus the "
                                          "non-degeneration certificates")
    sp.add_argument("--dot", help="write DOT graph to this path")
    sp.add_argument("--samples", type=int, default=1000,
                    help="random exact samples per orbit check")
    sp.add_argument("--pairs", action="store_true",
                    help="include the status of every ordered class pair")
    sp.set_defaults(func=cmd_theorem_a)

    sp = sub.add_parser("theorem-b", help="curvature-signature witnesses and "
                                          "exceptional-class degeneracy")
    sp.add_argument("--samples", type=int, default=500,
                    help="random exact samples per exceptional class")
    sp.add_argument("--tmax", type=float, default=25.0,
                    help="largest curve time used in the witness search")
    sp.set_defaults(func=cmd_theorem_b)

    sp = sub.add_parser("remark-check", help="degenerate-Ricci root scan for the "
                                             "shear family")
    sp.set_defaults(func=cmd_remark_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    if not getattr(args, "verb", None):
        parser.print_help()
        return 2
    try:
        if args.verb in ("validate",) and not (args.cls or args.file):
            return _fail(2, "validate needs --class or --file")
        return args.func(args)
    except (KeyError, ValueError) as e:
        return _fail(2, f"{e}")
    except OSError as e:
        return _fail(3, f"{e}")


if __name__ == "__main__":
    sys.exit(main())
