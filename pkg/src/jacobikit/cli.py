"""Command-line front end: one subcommand per toolkit operation, JSON on stdout.

Exit codes: 0 on success (for ``verify``: every check passed), 1 on a
numerical failure, reported as ``{"kind": ..., "detail": ...}`` on stdout,
2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import re
import sys

import numpy as np

from . import determinacy as dc
from .config import DEFAULT, ToleranceConfig
from .corpus import CorpusSpec, generate_corpus
from .errors import JacobiError
from .green import decompose, green, green_to_jacobi
from .inverse import InverseProblem, PerturbationParams, build_perturbed, forward_problem, solve_inverse
from .measures import DiscreteMeasure, favard, push_forward_pi_sq, spectral_measure
from .serialize import from_jsonable, to_jsonable
from .tridiag import JacobiMatrix, eigensystem
from .verify import run_verification


class UsageError(Exception):
    pass


def parse_floats(text: str) -> list[float]:
    text = text.strip()
    if not text:
        return []
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def parse_complex(text: str) -> complex:
    """Accept ``a+bi``, ``a+bj``, ``bi`` and plain reals."""
    s = text.strip().replace(" ", "").replace("i", "j")
    s = re.sub(r"(^|[+-])j", r"\g<1>1j", s)
    try:
        return complex(s)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _config(args) -> ToleranceConfig:
    if not getattr(args, "config", None):
        return DEFAULT
    try:
        return ToleranceConfig.from_dict(_load_json(args.config))
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad config: {exc}") from None


def _matrix(args) -> JacobiMatrix:
    if args.file:
        return from_jsonable(JacobiMatrix, _load_json(args.file))
    if args.q is None:
        raise UsageError("give the matrix with --q/--b or --file")
    return JacobiMatrix(parse_floats(args.q), parse_floats(args.b or ""))


def _measure(args) -> DiscreteMeasure:
    if args.measure_file:
        return from_jsonable(DiscreteMeasure, _load_json(args.measure_file))
    if args.points is None or args.weights is None:
        raise UsageError("give the measure with --points/--weights or --measure-file")
    return DiscreteMeasure(parse_floats(args.points), parse_floats(args.weights))


def _emit_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(x)) for x in row])


# --- subcommands -----------------------------------------------------


def cmd_eig(args, cfg):
    return to_jsonable(eigensystem(_matrix(args), cfg))


def cmd_measure(args, cfg):
    J = _matrix(args)
    rho = spectral_measure(J, cfg) if args.n is None else push_forward_pi_sq(J, args.n, cfg)
    if args.emit_csv:
        _emit_csv(args.emit_csv, ["point", "weight"], zip(rho.points, rho.weights))
    return to_jsonable(rho)


def cmd_favard(args, cfg):
    return to_jsonable(favard(_measure(args), args.max_size, cfg))


def cmd_green(args, cfg):
    J = _matrix(args)
    zs = [parse_complex(z) for z in args.z]
    vals = green(J, args.n, np.array(zs), cfg)
    if args.emit_csv:
        _emit_csv(args.emit_csv, ["re_z", "im_z", "re_G", "im_G"],
                  [(z.real, z.imag, g.real, g.imag) for z, g in zip(zs, vals)])
    out = [to_jsonable(complex(g)) for g in vals]
    return out[0] if len(out) == 1 else out


def cmd_decompose(args, cfg):
    return to_jsonable(decompose(_matrix(args), args.n, cfg))


def _parse_split(text):
    if not text:
        return None
    out = {}
    for part in text.split(","):
        try:
            k, frac = part.split(":")
            out[int(k)] = float(frac)
        except ValueError:
            raise UsageError(f"split entries look like POLE:FRACTION, got {part!r}") from None
    return out


def cmd_rebuild(args, cfg):
    interior = [int(x) for x in parse_floats(args.interior)] if args.interior else []
    K = green_to_jacobi(_measure(args), args.l, interior, _parse_split(args.split), cfg)
    return to_jsonable(K)


def cmd_perturb(args, cfg):
    J = _matrix(args)
    p = PerturbationParams(args.n, args.theta, args.h)
    return {"J_tilde": to_jsonable(build_perturbed(J, p)), "problem": to_jsonable(forward_problem(J, p))}


def cmd_invert(args, cfg):
    if args.problem_file:
        prob = from_jsonable(InverseProblem, _load_json(args.problem_file))
    else:
        if args.S is None or args.S_tilde is None or args.n is None or args.gamma is None:
            raise UsageError("give --problem-file or all of --S, --S-tilde, --n, --gamma")
        prob = InverseProblem(parse_floats(args.S), parse_floats(args.S_tilde), args.n, args.gamma)
    sols = solve_inverse(prob, fractions=args.fractions, cap=args.cap, workers=args.workers, config=cfg)
    return [to_jsonable(s) for s in sols]


def cmd_classify(args, cfg):
    if args.descriptor_file:
        d = dc.MeasureDescriptor.from_dict(_load_json(args.descriptor_file))
    else:
        if args.base is None:
            raise UsageError("give --base (and --ops) or --descriptor-file")
        try:
            d = dc.MeasureDescriptor(dc.DetClass.parse(args.base), tuple(dc.parse_op(o) for o in args.ops))
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad descriptor: {exc}") from None
    return to_jsonable(dc.classify(d))


def _corpus_spec(args) -> CorpusSpec:
    try:
        return CorpusSpec(args.seed, args.count, args.n_min, args.n_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args, cfg):
    report = run_verification(_corpus_spec(args), cfg, args.workers)
    return report.to_dict(), (0 if report.passed else 1)


def cmd_corpus(args, cfg):
    return [to_jsonable(J) for J in generate_corpus(_corpus_spec(args))]


# --- parser -----------------------------------------------------


def _add_matrix(p):
    p.add_argument("--q", help="diagonal, comma separated")
    p.add_argument("--b", help="off-diagonal, comma separated")
    p.add_argument("--file", help="JSON file with {\"q\": [...], \"b\": [...]}")


def _add_measure(p):
    p.add_argument("--points", help="support points, comma separated")
    p.add_argument("--weights", help="weights, comma separated")
    p.add_argument("--measure-file", help="JSON file with {\"points\": [...], \"weights\": [...]}")


def _add_corpus(p):
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--n-max", type=int, default=12)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jacobikit", description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="JSON file overriding tolerances")
    ap.add_argument("--indent", type=int, default=None, help="pretty-print JSON output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eig", help="eigenvalues and normalized eigenvectors")
    _add_matrix(p)
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("measure", help="spectral measure, or pi_n^2 rho with --n")
    _add_matrix(p)
    p.add_argument("--n", type=int)
    p.add_argument("--emit-csv", help="also write points and weights to this CSV file")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("favard", help="Jacobi matrix of a discrete measure")
    _add_measure(p)
    p.add_argument("--max-size", type=int)
    p.set_defaults(func=cmd_favard)

    p = sub.add_parser("green", help="Green function G(z, n)")
    _add_matrix(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--z", nargs="+", required=True, help="points like 0+1i")
    p.add_argument("--emit-csv", help="also write the samples to this CSV file")
    p.set_defaults(func=cmd_green)

    p = sub.add_parser("decompose", help="split -1/G(z, n) into truncated-block Weyl functions")
    _add_matrix(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("rebuild", help="Jacobi matrix with a given l-th Green measure")
    _add_measure(p)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--interior", default="", help="0-based pole indices for the leading block")
    p.add_argument("--split", default="", help="POLE:FRACTION pairs for shared eigenvalues")
    p.set_defaults(func=cmd_rebuild)

    p = sub.add_parser("perturb", help="rescale row and column n; emits the two-spectra data")
    _add_matrix(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--h", type=float, default=0.0)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("invert", help="matrices consistent with two spectra and gamma")
    p.add_argument("--problem-file")
    p.add_argument("--S")
    p.add_argument("--S-tilde", dest="S_tilde")
    p.add_argument("--n", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--fractions", type=float, help="residue share kept inside for shared eigenvalues")
    p.add_argument("--cap", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("classify", help="fold determinacy rules over a modification history")
    p.add_argument("--base", help="DET:k, DET:INF, INDET_NEXTREMAL or INDET_NOT_NEXTREMAL")
    p.add_argument("--ops", nargs="*", default=[], help="e.g. AddMasses:2 MoveMasses:3:1")
    p.add_argument("--descriptor-file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run the invariant suite over a seeded corpus")
    _add_corpus(p)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corpus", help="emit the seeded corpus")
    _add_corpus(p)
    p.set_defaults(func=cmd_corpus)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _config(args)
        out = args.func(args, cfg)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"{ap.prog}: error: {exc}", file=sys.stderr)
        return 2
    except JacobiError as exc:
        print(json.dumps({"kind": exc.kind, "detail": str(exc)}))
        return 1
    code = 0
    if isinstance(out, tuple):
        out, code = out
    print(json.dumps(out, indent=args.indent, allow_nan=False))
    return code


if __name__ == "__main__":
    sys.exit(main())
