"""Command-line surface: problem/result file formats and the four commands.

Problem files are JSON: {"n": int, "A_generators": [str], "B_generators":
[str], "options": {...}}.  Result files carry the separator both as a
grammar string (authoritative for humans) and as an exponent/coefficient
list (authoritative for machines); the tool refuses files where the two
disagree beyond 1e-12.  Gram matrices are serialized row-major next to
their basis monomial lists so a result can be re-verified from the two
files alone.

Exit codes: 0 success, 1 input error, 2 no separator found, 3 verification
failure, 4 empty sample cloud.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .bounds import (
    BoundParams,
    generator_norm_warnings,
    jackson_degree,
    lipschitz_constant,
    quadratic_module_complexity,
    separation_degree_bound,
)
from .poly import ParseError, Polynomial, parse
from .semialg import EmptySampleError, SemialgebraicSet, dist_estimate
from .separator import (
    HierarchyExhaustedError,
    SeparatorOptions,
    SeparatorResult,
    certificate_residuals,
    run_hierarchy,
    verify_separation,
)
from .sos import MonomialBasis, QmCertificate

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_SEPARATOR = 2
EXIT_VERIFY_FAILED = 3
EXIT_EMPTY_SAMPLE = 4

COEFF_AGREEMENT_TOL = 1e-12


class InputError(Exception):
    """Anything wrong with input files or flags; maps to exit code 1."""


def _fail(message: str) -> "InputError":
    return InputError(message)


def load_problem(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as err:
        raise _fail(f"cannot read problem file: {err}") from err
    except json.JSONDecodeError as err:
        raise _fail(f"problem file is not valid JSON: {err}") from err
    try:
        n = int(data["n"])
        a_strings = list(data["A_generators"])
        b_strings = list(data["B_generators"])
    except (KeyError, TypeError, ValueError) as err:
        raise _fail(f"problem file is missing required fields: {err}") from err
    try:
        a_gens = tuple(parse(s, n) for s in a_strings)
        b_gens = tuple(parse(s, n) for s in b_strings)
    except ParseError as err:
        raise _fail(f"bad polynomial in problem file: {err}") from err
    try:
        a = SemialgebraicSet(n, a_gens)
        b = SemialgebraicSet(n, b_gens)
    except (TypeError, ValueError) as err:
        raise _fail(f"invalid set description: {err}") from err
    options = data.get("options") or {}
    if not isinstance(options, dict):
        raise _fail("options must be a JSON object")
    return a, b, options


def _poly_to_json(p: Polynomial) -> dict:
    coeffs = [
        {"exponents": list(mono), "coefficient": c}
        for mono, c in sorted(p.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]))
    ]
    return {"string": p.to_string(), "coefficients": coeffs}


def _poly_from_json(data: dict, n: int) -> Polynomial:
    try:
        from_string = parse(data["string"], n)
        listed = Polynomial(
            n, {tuple(e["exponents"]): e["coefficient"] for e in data["coefficients"]}
        )
    except (KeyError, TypeError, ValueError) as err:
        raise _fail(f"malformed polynomial entry: {err}") from err
    if from_string.max_coeff_diff(listed) > COEFF_AGREEMENT_TOL:
        raise _fail("polynomial string and coefficient list disagree beyond 1e-12")
    return from_string


def _certificate_to_json(cert: QmCertificate) -> dict:
    return {
        "level": cert.level,
        "generators": [g.to_string() for g in cert.generators],
        "multipliers": [
            {
                "basis": [list(m) for m in bas.elements],
                "gram_row_major": [float(v) for v in np.asarray(g).reshape(-1)],
            }
            for g, bas in zip(cert.grams, cert.bases)
        ],
    }


def _certificate_from_json(data: dict, n: int, level: int) -> QmCertificate:
    try:
        gens = tuple(parse(s, n) for s in data["generators"])
        grams = []
        bases = []
        for entry in data["multipliers"]:
            elements = tuple(tuple(int(e) for e in m) for m in entry["basis"])
            k = len(elements)
            gram = np.asarray(entry["gram_row_major"], dtype=float).reshape(k, k)
            half = max((sum(m) for m in elements), default=0)
            bases.append(MonomialBasis(n, half, elements))
            grams.append(gram)
    except (KeyError, TypeError, ValueError, ParseError) as err:
        raise _fail(f"malformed certificate entry: {err}") from err
    return QmCertificate(gens, tuple(grams), tuple(bases), int(data.get("level", level)))


def _bound_report(a, b, n, resolution, loj_coeff, loj_exponent, jackson_constant):
    """Distance, Lipschitz constant, approximation degree and level bounds."""
    dist = dist_estimate(a, b, resolution)
    lip = lipschitz_constant(dist)
    gens_a, gens_b = list(a.generators), list(b.generators)
    comp_a = quadratic_module_complexity(
        n, loj_exponent, loj_coeff, len(gens_a), max(g.total_degree() for g in gens_a)
    )
    comp_b = quadratic_module_complexity(
        n, loj_exponent, loj_coeff, len(gens_b), max(g.total_degree() for g in gens_b)
    )
    params = BoundParams(
        n=n,
        dist=dist,
        loj_exponent=loj_exponent,
        loj_coeff=loj_coeff,
        n_generators=max(len(gens_a), len(gens_b)),
        max_generator_degree=max(g.total_degree() for g in gens_a + gens_b),
        jackson_constant=jackson_constant,
    )
    sep = separation_degree_bound(params, comp_a, comp_b)
    params_t1 = BoundParams(
        n=n,
        dist=dist,
        loj_exponent=1.0,
        loj_coeff=loj_coeff,
        n_generators=params.n_generators,
        max_generator_degree=params.max_generator_degree,
        jackson_constant=jackson_constant,
    )
    comp_a1 = quadratic_module_complexity(
        n, 1.0, loj_coeff, len(gens_a), max(g.total_degree() for g in gens_a)
    )
    comp_b1 = quadratic_module_complexity(
        n, 1.0, loj_coeff, len(gens_b), max(g.total_degree() for g in gens_b)
    )
    sep_t1 = separation_degree_bound(params_t1, comp_a1, comp_b1)

    # optional box-to-ball coordinate rescale x -> x/sqrt(n): shrinks the
    # distance by the same factor, which is how the unit-ball normalization
    # of the level bound can be matched
    dist_ball = dist / np.sqrt(n)
    params_ball = BoundParams(
        n=n,
        dist=dist_ball,
        loj_exponent=loj_exponent,
        loj_coeff=loj_coeff,
        n_generators=params.n_generators,
        max_generator_degree=params.max_generator_degree,
        jackson_constant=jackson_constant,
    )
    sep_ball = separation_degree_bound(params_ball, comp_a, comp_b)

    warnings = generator_norm_warnings(gens_a + gens_b)
    warnings.append(
        "Lojasiewicz data defaults (coefficient 1, exponent 1) are assumptions; "
        "exponent 1 needs linearly independent active-constraint gradients"
    )
    warnings.append(
        f"the Jackson constant C={jackson_constant:g} is an absolute constant with no "
        "published numeric value; bounds scale with C^(3.5 n T)"
    )
    nt = n * loj_exponent
    return {
        "dist_estimate": dist,
        "lipschitz_constant": lip,
        "jackson_degree_err1": jackson_degree(lip, n, 1.0, jackson_constant),
        "complexity_A_log10": comp_a.log10_value,
        "complexity_B_log10": comp_b.log10_value,
        "separation_degree_log10": sep.log10_value,
        "separation_degree": sep.pow10_string(),
        "separation_degree_symbolic": (
            f"max(complexity_A, complexity_B) * C^{3.5 * nt:g} * {n}^{3 * nt:g}"
            f" * (6/dist)^{6 * nt:g} evaluated at C={jackson_constant:g}"
        ),
        "separation_degree_T1_log10": sep_t1.log10_value,
        "ball_rescaled": {
            "dist_estimate": dist_ball,
            "separation_degree_log10": sep_ball.log10_value,
        },
        "params": {
            "loj_coeff": loj_coeff,
            "loj_exponent": loj_exponent,
            "jackson_constant": jackson_constant,
            "dist_resolution": resolution,
        },
        "warnings": warnings,
    }


def cmd_separate(args) -> int:
    a, b, file_options = load_problem(args.problem)
    degree_max = args.degree_max if args.degree_max is not None else file_options.get("degree_max", 3)
    level_max = args.level_max if args.level_max is not None else file_options.get("level_max", 8)
    tol = args.tol if args.tol is not None else file_options.get("tol", 1e-8)
    margin = args.margin if args.margin is not None else file_options.get("margin", 1e-6)
    ball = args.ball if args.ball is not None else file_options.get("ball", "on")
    options = SeparatorOptions(
        margin_tol=float(margin), solver_tol=float(tol), ball_constraint=(ball == "on")
    )

    start = time.perf_counter()
    try:
        result = run_hierarchy(a, b, int(degree_max), int(level_max), options)
    except HierarchyExhaustedError as err:
        payload = {"separated": False, "trace": err.trace}
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=2)
        print(json.dumps(payload, indent=2))
        print("no separator found within the degree/level caps", file=sys.stderr)
        return EXIT_NO_SEPARATOR
    elapsed = time.perf_counter() - start

    report = verify_separation(result.p, a, b, resolution=201, tol=1e-3)
    res_a, res_b = certificate_residuals(result)
    try:
        bound = _bound_report(a, b, a.n, 101, 1.0, 1.0, 1.0)
    except EmptySampleError as err:
        bound = {"warnings": [f"bound report unavailable: {err}"]}

    payload = {
        "version": __version__,
        "p": _poly_to_json(result.p),
        "degree": result.p_degree,
        "level": result.level,
        "slack": result.slack,
        "certificates": {
            "A": _certificate_to_json(result.cert_A),
            "B": _certificate_to_json(result.cert_B),
        },
        "verification": {
            "separation": {
                "min_on_A": report.min_on_A,
                "max_on_B": report.max_on_B,
                "resolution": report.resolution,
                "tol": report.tol,
                "passed": report.passed,
            },
            "certificate_residual_A": res_a,
            "certificate_residual_B": res_b,
        },
        "bounds": bound,
        "diagnostics": {
            "trace": result.diagnostics.get("trace", []),
            "sdp_iterations": result.diagnostics.get("sdp_iterations"),
        },
        "timing": {"seconds": elapsed},
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(
        f"separator of degree {result.p_degree} found at level {result.level} "
        f"with margin {result.slack:.6g} in {elapsed:.2f}s",
        file=sys.stderr,
    )
    return EXIT_OK


def _load_result(path: str, n: int):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as err:
        raise _fail(f"cannot read result file: {err}") from err
    except json.JSONDecodeError as err:
        raise _fail(f"result file is not valid JSON: {err}") from err
    if "p" not in data:
        raise _fail("result file has no polynomial entry")
    p = _poly_from_json(data["p"], n)
    return data, p


def cmd_verify(args) -> int:
    a, b, _ = load_problem(args.problem)
    data, p = _load_result(args.result, a.n)
    resolution = int(args.resolution)
    tol = float(args.tol)

    try:
        report = verify_separation(p, a, b, resolution=resolution, tol=tol)
    except EmptySampleError as err:
        print(f"verification impossible: {err}", file=sys.stderr)
        return EXIT_EMPTY_SAMPLE

    output = {
        "separation": {
            "min_on_A": report.min_on_A,
            "max_on_B": report.max_on_B,
            "witness_A": list(report.witness_A),
            "witness_B": list(report.witness_B),
            "count_A": report.count_A,
            "count_B": report.count_B,
            "resolution": resolution,
            "tol": tol,
            "passed": report.passed,
        }
    }

    cert_ok = True
    certs = data.get("certificates")
    if certs:
        level = int(data.get("level", 0))
        slack = float(data.get("slack", 0.0))
        cert_a = _certificate_from_json(certs["A"], a.n, level)
        cert_b = _certificate_from_json(certs["B"], a.n, level)
        mismatches = _foreign_generators(cert_a, a) + _foreign_generators(cert_b, b)
        if mismatches:
            cert_ok = False
            output["certificates"] = {
                "passed": False,
                "note": "certificate generators do not belong to the problem",
                "foreign_generators": mismatches,
            }
        else:
            result = SeparatorResult(
                p=p,
                cert_A=cert_a,
                cert_B=cert_b,
                slack=slack,
                level=level,
                p_degree=p.total_degree(),
            )
            res_a, res_b = certificate_residuals(result)
            min_eig = min(cert_a.min_gram_eigenvalue(), cert_b.min_gram_eigenvalue())
            cert_ok = bool(slack > 0.0 and res_a <= tol and res_b <= tol and min_eig >= -tol)
            output["certificates"] = {
                "residual_A": res_a,
                "residual_B": res_b,
                "min_gram_eigenvalue": min_eig,
                "slack": slack,
                "passed": cert_ok,
            }
    else:
        output["certificates"] = {"passed": None, "note": "result carries no certificates"}

    passed = bool(report.passed and cert_ok)
    output["passed"] = passed
    print(json.dumps(output, indent=2))
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def _foreign_generators(cert: QmCertificate, s: SemialgebraicSet) -> list:
    """Certificate generators beyond the set's own plus the ball polynomial."""
    allowed = list(s.generators) + [Polynomial.ball_generator(s.n)]
    return [
        g.to_string()
        for g in cert.generators
        if not any(g.max_coeff_diff(h) <= COEFF_AGREEMENT_TOL for h in allowed)
    ]


def cmd_bounds(args) -> int:
    a, b, _ = load_problem(args.problem)
    for name, value in (("--c", args.c), ("--T", args.T), ("--C", args.C)):
        if value <= 0:
            raise _fail(f"{name} must be positive")
    if args.T < 1.0:
        raise _fail("--T must be at least 1")
    try:
        report = _bound_report(
            a, b, a.n, int(args.dist_resolution), float(args.c), float(args.T), float(args.C)
        )
    except EmptySampleError as err:
        print(f"bounds unavailable: {err}", file=sys.stderr)
        return EXIT_EMPTY_SAMPLE
    print(json.dumps(report, indent=2))
    return EXIT_OK


def cmd_grid(args) -> int:
    a, b, _ = load_problem(args.problem)
    if a.n != 2:
        raise _fail(f"grid emission is 2-D only, problem has n = {a.n}")
    _, p = _load_result(args.result, a.n)
    resolution = int(args.resolution)
    if resolution < 2:
        raise _fail("resolution must be at least 2")

    axis = np.linspace(-1.0, 1.0, resolution)
    lines = ["x1,x2,p,inA,inB"]
    for x1 in axis:
        for x2 in axis:
            point = (float(x1), float(x2))
            lines.append(
                f"{point[0]!r},{point[1]!r},{p.evaluate(point)!r},"
                f"{int(a.contains(point))},{int(b.contains(point))}"
            )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polysep",
        description="Certified polynomial separation of compact semialgebraic sets",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sep = sub.add_parser("separate", help="search for a certified separating polynomial")
    p_sep.add_argument("problem", help="problem JSON file")
    p_sep.add_argument("--degree-max", type=int, default=None, dest="degree_max")
    p_sep.add_argument("--level-max", type=int, default=None, dest="level_max")
    p_sep.add_argument("--tol", type=float, default=None, help="SDP solver tolerance")
    p_sep.add_argument("--margin", type=float, default=None, help="minimum accepted margin")
    p_sep.add_argument("--ball", choices=["on", "off"], default=None,
                       help="append the redundant ball generator n - |x|^2 (default on)")
    p_sep.add_argument("--out", default=None, help="write the result JSON here")
    p_sep.set_defaults(func=cmd_separate)

    p_ver = sub.add_parser("verify", help="re-check a result file against its problem")
    p_ver.add_argument("problem")
    p_ver.add_argument("result")
    p_ver.add_argument("--resolution", type=int, default=201)
    p_ver.add_argument("--tol", type=float, default=1e-3)
    p_ver.set_defaults(func=cmd_verify)

    p_bnd = sub.add_parser("bounds", help="evaluate the guaranteed-degree calculators")
    p_bnd.add_argument("problem")
    p_bnd.add_argument("--c", type=float, default=1.0, help="Lojasiewicz coefficient")
    p_bnd.add_argument("--T", type=float, default=1.0, help="Lojasiewicz exponent")
    p_bnd.add_argument("--C", type=float, default=1.0, help="Jackson constant")
    p_bnd.add_argument("--dist-resolution", type=int, default=201, dest="dist_resolution")
    p_bnd.set_defaults(func=cmd_bounds)

    p_grd = sub.add_parser("grid", help="emit a CSV level-set grid for 2-D problems")
    p_grd.add_argument("problem")
    p_grd.add_argument("result")
    p_grd.add_argument("--resolution", type=int, default=256)
    p_grd.add_argument("--out", default=None)
    p_grd.set_defaults(func=cmd_grid)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        # argparse exits 0 for --help and 2 for usage errors; keep exit code 2
        # reserved for "no separator found"
        return EXIT_OK if err.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, RuntimeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
