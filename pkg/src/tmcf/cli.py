"""Command-line front end.

Every verification suite and experiment is a subcommand that runs its
module operation, collects certificates, and emits a machine-readable
report.  Reports go to stdout (--json) or a file (--out); without --json a
one-line-per-certificate summary is printed instead.  Exit status: 0 when
every certificate passed, 1 when one failed, 2 on usage errors, 3 on
internal errors.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from pathlib import Path

from . import __version__
from .analysis import (
    approx_experiment,
    hankel_suite,
    hyperquadratic_toeplitz,
    omega_quartic_check,
    quadratic_vanishing_search,
    reference_series,
    riccati_check,
    verify_quartic_at_series,
    verify_reference_roots,
)
from .certificate import Certificate, Report
from .contfrac import cf_eval, cf_expand, spectrum_window, tm_stream
from .gf2 import PolyZ
from .guessing import (
    AmbiguousKernelError,
    EmptyKernelError,
    GuessProblem,
    emit_certificate,
    guess_quartic,
    suggested_degree_bound,
    verify_certificate,
)
from .identities import sections_support, verify_identities, verify_sections


def env_precision(fallback: int) -> int:
    """Default precision, overridable through TMCF_PREC."""
    raw = os.environ.get("TMCF_PREC")
    return int(raw) if raw else fallback


def _poly(text: str) -> PolyZ:
    return PolyZ.parse(text)


# ---------------------------------------------------------------------------
# Subcommand handlers.  Each returns (params, certificates).


def cmd_expand(args) -> tuple[dict, list[Certificate]]:
    t0 = time.perf_counter()
    count = args.count
    if args.series:
        prec = args.prec or env_precision(max(4 * count + 64, 1024))
        x = reference_series(args.series, prec)
        params = {"series": args.series, "count": count, "prec": prec}
        expected = None
    else:
        if args.a is None or args.b is None:
            raise SystemExit("expand needs either --series or both --a and --b")
        d = args.a.degree + args.b.degree
        prec = args.prec or env_precision(0) or (count * d + 16)
        stream = tm_stream(args.a, args.b, count)
        x = cf_eval(stream, min(prec, 2 * stream.degree_sum()))
        params = {"a": str(args.a), "b": str(args.b), "count": count, "prec": prec}
        expected = stream.quotients

    back = cf_expand(x, count)
    window = min(count, len(back.quotients))
    spectrum = spectrum_window(back, window)
    residuals: dict[str, object] = {"quotients-extracted": window > 0}
    if expected is not None:
        residuals["quotients-match-word"] = back.quotients == expected[:window]
    if args.series == "baumsweet":
        residuals["degrees-bounded-by-2"] = spectrum.max_degree <= 2
    cert = Certificate.from_residuals(
        "expansion-spectrum",
        params,
        residuals,
        details={
            "extracted": window,
            "exhausted": back.exhausted,
            "max_degree": spectrum.max_degree,
            "histogram": {str(k): v for k, v in sorted(spectrum.histogram.items())},
            "lagrange_log2": spectrum.lagrange_log2,
        },
        wall_time_s=time.perf_counter() - t0,
    )
    return params, [cert]


def cmd_verify_identities(args) -> tuple[dict, list[Certificate]]:
    params = {
        "kmax": args.kmax,
        "eta_cap": args.eta_cap,
        "sections_depth": args.sections_depth,
    }
    return params, verify_identities(args.kmax, args.eta_cap, args.sections_depth)


def cmd_verify_quartic(args) -> tuple[dict, list[Certificate]]:
    if args.cert:
        params = {"cert": str(args.cert)}
        return params, [verify_certificate(args.cert)]
    if args.a is None or args.b is None:
        raise SystemExit("verify-quartic needs --a and --b (or --cert)")
    prec = args.prec or env_precision(2048)
    params = {"a": str(args.a), "b": str(args.b), "prec": prec}
    return params, [verify_quartic_at_series(args.a, args.b, prec)]


def cmd_riccati(args) -> tuple[dict, list[Certificate]]:
    prec = args.prec or env_precision(2048)
    params = {"a": str(args.a), "b": str(args.b), "prec": prec}
    return params, [riccati_check(args.a, args.b, prec)]


def cmd_hyperquadratic(args) -> tuple[dict, list[Certificate]]:
    params = {"smax": args.smax}
    return params, [hyperquadratic_toeplitz(s) for s in range(2, args.smax + 1)]


def cmd_hankel(args) -> tuple[dict, list[Certificate]]:
    params = {"nmax": args.nmax, "recurrence": args.recurrence}
    return params, [hankel_suite(args.nmax, args.recurrence)]


def cmd_omega(args) -> tuple[dict, list[Certificate]]:
    prec = args.prec or env_precision(512)
    params = {"prec": prec}
    return params, [omega_quartic_check(prec)]


def cmd_approx(args) -> tuple[dict, list[Certificate]]:
    params = {"a": str(args.a), "b": str(args.b), "ellmax": args.ellmax}
    certs = [approx_experiment(args.a, args.b, ell) for ell in range(1, args.ellmax + 1)]
    if args.degree2:
        caps = [int(t) for t in args.degree2.split(",") if t]
        params["degree2"] = caps
        certs += [quadratic_vanishing_search(args.a, args.b, d) for d in caps]
    return params, certs


def _guess_one(a: PolyZ, b: PolyZ, degbound: int | None, prec: int | None) -> Certificate:
    t0 = time.perf_counter()
    d_cap = suggested_degree_bound(a, b) if degbound is None else degbound
    n = prec or env_precision(5 * (d_cap + 1) + 32)
    name = f"guess-quartic-{a}-{b}"
    params = {"a": str(a), "b": str(b), "degbound": d_cap, "prec": n}
    try:
        r = guess_quartic(GuessProblem(a=a, b=b, degree_bound=d_cap, precision=n))
    except (EmptyKernelError, AmbiguousKernelError) as e:
        return Certificate(
            name=name,
            params=params,
            passed=False,
            residual=f"{type(e).__name__}: {e}",
            wall_time_s=time.perf_counter() - t0,
        )
    cert = Certificate.from_residuals(
        name,
        params,
        {
            "matches-closed-form": r.matches_closed_form,
            "vanishing-window": r.residual_zero_within or r.vanishing_order >= n,
        },
        details={
            "coefficients": [str(c) for c in r.coefficients],
            "minimized_degree": r.minimized_degree,
            "vanishing_order": r.vanishing_order,
        },
        wall_time_s=time.perf_counter() - t0,
    )
    cert.details["result"] = r  # carried for --out emission, stripped below
    return cert


def cmd_guess(args) -> tuple[dict, list[Certificate]]:
    certs: list[Certificate] = []
    if args.batch:
        rows = [
            row
            for row in csv.reader(Path(args.batch).read_text().splitlines())
            if row and not row[0].lstrip().startswith("#")
        ]
        params = {"batch": str(args.batch), "pairs": len(rows)}
        for row in rows:
            a, b = _poly(row[0]), _poly(row[1])
            degbound = int(row[2]) if len(row) > 2 and row[2].strip() else None
            prec = int(row[3]) if len(row) > 3 and row[3].strip() else None
            certs.append(_guess_one(a, b, degbound, prec))
    else:
        if args.a is None or args.b is None:
            raise SystemExit("guess needs --a and --b (or --batch)")
        certs.append(_guess_one(args.a, args.b, args.degbound, args.prec))
        params = certs[0].params

    if args.out:
        emitted = [c.details.pop("result") for c in certs if "result" in c.details]
        if len(emitted) == 1:
            emit_certificate(emitted[0], args.out)
        elif emitted:
            base = Path(args.out)
            for i, r in enumerate(emitted):
                emit_certificate(r, base.with_stem(f"{base.stem}-{i}"))
    for c in certs:
        c.details.pop("result", None)
    return params, certs


def sections_svg(dots: list[tuple[int, int]], cap: int) -> str:
    """Plain scatter of the support dots; axes are the (negative) exponents."""
    scale, margin, r = 16, 42, 3
    w = margin * 2 + cap * scale
    h = margin * 2 + cap * scale

    def sx(i: int) -> int:
        return margin + (-i) * scale

    def sy(j: int) -> int:
        return h - margin - (-j) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<line x1="{margin}" y1="{h - margin}" x2="{w - margin + 10}" '
        f'y2="{h - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{h - margin}" x2="{margin}" y2="{margin - 10}" '
        f'stroke="black"/>',
        f'<text x="{w - margin}" y="{h - margin + 28}" font-size="12" '
        f'text-anchor="end">a exponent</text>',
        f'<text x="{margin - 28}" y="{margin}" font-size="12" '
        f'transform="rotate(-90 {margin - 28} {margin})">b exponent</text>',
    ]
    for t in range(0, cap + 1, 4):
        parts.append(
            f'<text x="{sx(-t)}" y="{h - margin + 14}" font-size="9" '
            f'text-anchor="middle">{-t}</text>'
        )
        parts.append(
            f'<text x="{margin - 6}" y="{sy(-t) + 3}" font-size="9" '
            f'text-anchor="end">{-t}</text>'
        )
    for i, j in dots:
        parts.append(f'<circle cx="{sx(i)}" cy="{sy(j)}" r="{r}" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts)


def cmd_sections(args) -> tuple[dict, list[Certificate]]:
    params = {"depth": args.depth}
    cert = verify_sections(args.depth)
    if args.csv or args.svg:
        dots, _ = sections_support(args.depth)
        if args.csv:
            Path(args.csv).write_text(
                "\n".join(f"{i},{j}" for i, j in dots) + "\n"
            )
            params["csv"] = str(args.csv)
        if args.svg:
            Path(args.svg).write_text(sections_svg(dots, args.depth - 2) + "\n")
            params["svg"] = str(args.svg)
    return params, [cert]


def cmd_refroots(args) -> tuple[dict, list[Certificate]]:
    prec = args.prec or env_precision(1024)
    params = {"prec": prec, "quotients": args.quotients}
    return params, verify_reference_roots(prec, args.quotients)


# ---------------------------------------------------------------------------
# Parser and dispatch.


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmcf",
        description="Exact verification of continued-fraction identities "
        "over GF(2) function fields.",
    )
    parser.add_argument("--version", action="version", version=f"tmcf {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="write the report (or artifact) here")
    common.add_argument("--json", action="store_true", help="print the full JSON report")

    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(handler=handler)
        return p

    p = add("expand", cmd_expand, "expand a series and report quotient degrees")
    p.add_argument("--a", type=_poly)
    p.add_argument("--b", type=_poly)
    p.add_argument("--series", choices=["baumsweet", "mahler"])
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--prec", type=int)

    p = add("verify-identities", cmd_verify_identities, "run the symbolic identity suite")
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--eta-cap", type=int, default=64)
    p.add_argument("--sections-depth", type=int, default=32)

    p = add("verify-quartic", cmd_verify_quartic, "check the quartic relation on a pair")
    p.add_argument("--a", type=_poly)
    p.add_argument("--b", type=_poly)
    p.add_argument("--prec", type=int)
    p.add_argument("--cert", type=Path, help="re-verify an emitted relation certificate")

    p = add("riccati", cmd_riccati, "check the differential equation on a pair")
    p.add_argument("--a", type=_poly, required=True)
    p.add_argument("--b", type=_poly, required=True)
    p.add_argument("--prec", type=int)

    p = add("hyperquadratic", cmd_hyperquadratic, "Toeplitz determinant exclusion evidence")
    p.add_argument("--smax", type=int, default=4)

    p = add("hankel", cmd_hankel, "Hankel determinants and the halving recurrence")
    p.add_argument("--nmax", type=int, default=64)
    p.add_argument("--recurrence", type=int, default=4096)

    p = add("omega", cmd_omega, "quartic equation for the Jacobi-style expansion")
    p.add_argument("--prec", type=int)

    p = add("approx", cmd_approx, "approximation-norm experiments at power indices")
    p.add_argument("--a", type=_poly, required=True)
    p.add_argument("--b", type=_poly, required=True)
    p.add_argument("--ellmax", type=int, default=3)
    p.add_argument("--degree2", help="comma list of degree caps for the vanishing search")

    p = add("guess", cmd_guess, "recover the quartic relation from series data")
    p.add_argument("--a", type=_poly)
    p.add_argument("--b", type=_poly)
    p.add_argument("--degbound", type=int)
    p.add_argument("--prec", type=int)
    p.add_argument("--batch", type=Path, help="CSV of pairs: a,b[,degbound[,prec]]")

    p = add("sections", cmd_sections, "two-variable expansion support, with plot output")
    p.add_argument("--depth", type=int, default=32)
    p.add_argument("--svg", type=Path)
    p.add_argument("--csv", type=Path)

    p = add("refroots", cmd_refroots, "reference algebraic roots and their expansions")
    p.add_argument("--prec", type=int)
    p.add_argument("--quotients", type=int, default=500)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        params, certs = args.handler(args)
    except SystemExit as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3

    certs.sort(key=lambda c: c.name)
    report = Report(command=args.command, params=params, certificates=certs)
    text = report.to_json()
    if args.out and args.command != "guess":
        try:
            Path(args.out).write_text(text + "\n")
        except OSError as e:
            print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
            return 3
    if args.json:
        print(text)
    else:
        for c in certs:
            mark = "PASS" if c.passed else "FAIL"
            line = f"[{mark}] {c.name} ({c.wall_time_s:.3f}s)"
            if not c.passed:
                line += f" residual: {c.residual}"
            print(line)
        print(f"overall: {'PASS' if report.overall_pass else 'FAIL'}")
    return 0 if report.overall_pass else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
