"""Command-line front end.

Exit codes: 0 success, 1 failed verification (report still written),
2 configuration error, 3 solver error, 4 divergent series.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import gallery, majorization, matrixcore, spectralfun
from .campaign import VerificationReport
from .exceptions import (
    ConvergenceError,
    InvalidArgument,
    SchurSpecError,
    SingularOperator,
    SolverDivergence,
)

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_SOLVER, EXIT_DIVERGENT = 0, 1, 2, 3, 4
MAX_TRIDIAGONAL_N = 10_000
MAX_DENSE_N = 200

DISCRETIZED = ("sl", "schrod-per", "schrod-dir", "matrix")
OPERATORS = DISCRETIZED + ("hydrogen", "well", "oscillator", "standing", "twoelectron", "synthetic")
CHECKS = (
    "sublinearity",
    "convexity",
    "homogeneity",
    "continuity",
    "truncation",
    "schur-criterion",
    "isotone",
    "trace-sup",
    "unitary-invariance",
)


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    operator: str = None
    params: dict = field(default_factory=dict)
    weights: str = "tsap:1:2"
    seed: int = 0
    trials: int = 1000
    tolerance: float = 1e-9
    output_path: str = None
    format: str = "report-doc"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ConfigError("--tol must be > 0")
        if self.trials < 1:
            raise ConfigError("--trials must be >= 1")
        if self.operator is not None and self.operator not in OPERATORS:
            raise ConfigError(f"unknown operator {self.operator!r}; choose from {', '.join(OPERATORS)}")
        if self.weights is not None:
            try:
                spectralfun.WeightSequence.parse(self.weights)
            except InvalidArgument as exc:
                raise ConfigError(str(exc)) from None


# -- parameter handling --------------------------------------------------------


def parse_params(pairs):
    params = {}
    for item in pairs or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ConfigError(f"--param expects key=value, got {item!r}")
        params[key.strip()] = value.strip()
    return params


def _number(params, key, default=None, kind=float):
    if key not in params:
        if default is None:
            raise ConfigError(f"operator needs --param {key}=...")
        return default
    try:
        return kind(params[key])
    except ValueError:
        raise ConfigError(f"--param {key} must be a number, got {params[key]!r}") from None


def read_two_column(path):
    """Read ``x value`` rows and return a linear interpolant."""
    try:
        data = np.loadtxt(path, delimiter=None, ndmin=2, comments="#")
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read coefficient file {path}: {exc}") from None
    if data.shape[1] != 2 or data.shape[0] < 2:
        raise ConfigError(f"{path}: expected at least two rows of 'x value'")
    order = np.argsort(data[:, 0])
    xs, vs = data[order, 0], data[order, 1]
    return lambda pts: np.interp(pts, xs, vs)


def _coefficient(params, key, default):
    """A constant, or a two-column file interpolated onto the grid."""
    if key not in params:
        return default
    text = params[key]
    try:
        return float(text)
    except ValueError:
        return read_two_column(text)


def _grid_size(params, limit):
    N = _number(params, "N", kind=int)
    if N < gallery.MIN_GRID or N > limit:
        raise ConfigError(f"N must be in [{gallery.MIN_GRID}, {limit}], got {N}")
    return N


@dataclass
class ResolvedOperator:
    name: str
    generator: spectralfun.SpectrumGenerator = None
    spectrum: matrixcore.Spectrum = None
    shift: float = 0.0


def resolve_operator(name, params, select=None, N=None):
    """Build the operator's spectrum (finite) or generator (analytic)."""
    if name not in OPERATORS:
        raise ConfigError(f"unknown operator {name!r}")
    if name not in DISCRETIZED or (name == "sl" and "N" not in params and N is None):
        try:
            return ResolvedOperator(name, generator=gallery.analytic_spectrum(name, **params))
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
    if N is not None:
        params = {**params, "N": str(N)}
    if name == "sl":
        K, spec = gallery.build_sturm_liouville(
            _coefficient(params, "p", 1.0),
            _coefficient(params, "q", 0.0),
            _number(params, "L", 1.0),
            _grid_size(params, MAX_TRIDIAGONAL_N),
        )
        return ResolvedOperator(name, spectrum=gallery.solution_spectrum(K, spec, select), shift=spec.shift)
    if name == "schrod-per":
        K, spec = gallery.build_periodic_schrodinger(_coefficient(params, "V", 0.0), _grid_size(params, MAX_DENSE_N))
        return ResolvedOperator(name, spectrum=gallery.solution_spectrum(K, spec, select), shift=spec.shift)
    if name == "schrod-dir":
        K, spec = gallery.build_dirichlet_schrodinger(_coefficient(params, "V", 0.0), _grid_size(params, MAX_TRIDIAGONAL_N))
        return ResolvedOperator(name, spectrum=gallery.operator_spectrum(K, select))
    path = params.get("file")
    if path is None:
        raise ConfigError("operator 'matrix' needs --param file=PATH")
    try:
        X = matrixcore.read_matrix(path)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    if X.n > MAX_DENSE_N:
        raise ConfigError(f"dense matrices are limited to n <= {MAX_DENSE_N}")
    w = matrixcore.eigh(X).eigenvalues
    return ResolvedOperator(name, spectrum=matrixcore.Spectrum(w if select is None else w[select[0] : select[1]]))


# -- output --------------------------------------------------------------------


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _doc(obj):
    return json.dumps(obj, indent=2) + "\n"


# -- commands ------------------------------------------------------------------


def cmd_eig(args, config):
    op = resolve_operator(config.operator, config.params)
    if op.generator is not None:
        values = op.generator.values(args.terms or 10)
    else:
        values = op.spectrum.eigenvalues
    if config.format == "csv":
        _emit(_csv(["index", "eigenvalue"], enumerate(values.tolist(), 1)), config.output_path)
        return EXIT_OK
    ts = spectralfun.arrange_two_sided(values)
    doc = {
        "operator": config.operator,
        "params": config.params,
        "shift": op.shift,
        "eigenvalues": values.tolist(),
        "two_sided": {
            "positive": ts.positive.tolist(),
            "negative": ts.negative.tolist(),
            "has_zero": ts.has_zero,
        },
    }
    _emit(_doc(doc), config.output_path)
    return EXIT_OK


def cmd_psi(args, config):
    op = resolve_operator(config.operator, config.params)
    mu = spectralfun.WeightSequence.parse(config.weights)
    source = op.generator if op.generator is not None else op.spectrum
    result = spectralfun.psi(source, mu, args.terms)
    if config.format == "csv":
        _emit(_csv(["value", "tail_bound", "terms"], [result]), config.output_path)
    else:
        doc = {
            "operator": config.operator,
            "params": config.params,
            "weights": config.weights,
            "value": result.value,
            "tail_bound": result.tail_bound,
            "terms": result.terms,
        }
        _emit(_doc(doc), config.output_path)
    return EXIT_OK


def _m_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"--m expects comma-separated integers, got {text!r}") from None


def run_check(check, args, config):
    seed, trials, tol, jobs = config.seed, config.trials, config.tolerance, args.jobs
    mu = spectralfun.WeightSequence.parse(config.weights)
    if check == "sublinearity":
        pairs = None
        if args.pair:
            pairs = [tuple(matrixcore.read_matrix(p).entries for p in args.pair)]
        return spectralfun.verify_sublinearity(args.dim, trials, mu, seed, tol, jobs, args.sampler, pairs)
    if check == "convexity":
        return spectralfun.verify_convexity(args.dim, trials, mu, seed, tol, jobs, args.sampler)
    if check == "homogeneity":
        return spectralfun.verify_homogeneity(args.dim, trials, mu, seed, tol, jobs, args.sampler)
    if check == "continuity":
        return spectralfun.verify_spectral_continuity(args.dim, trials, mu, seed, tol, jobs, args.eps, sampler=args.sampler)
    if check == "truncation":
        if config.operator is None:
            raise ConfigError("verify truncation needs --op")
        op = resolve_operator(config.operator, config.params)
        source = op.generator if op.generator is not None else op.spectrum
        return spectralfun.verify_finite_rank_approximation(source, mu, _m_list(args.m))
    if check in ("schur-criterion", "isotone"):
        try:
            f = majorization.SymmetricFunctionSpec.parse(args.fn)
        except InvalidArgument as exc:
            raise ConfigError(str(exc)) from None
        n = 2 if f.arity == 2 else args.dim
        campaign = majorization.criterion_campaign if check == "schur-criterion" else majorization.isotone_campaign
        return campaign(f, n, trials, seed, args.low, args.high, tol, jobs=jobs)
    if check == "trace-sup":
        return matrixcore.verify_trace_sup(args.dim, args.k, trials, seed, tol, frames=args.frames, jobs=jobs)
    if check == "unitary-invariance":
        return matrixcore.verify_unitary_invariance(args.dim, trials, mu.positive_weights(args.dim), seed, tol, jobs=jobs)
    raise ConfigError(f"unknown check {check!r}")


def cmd_verify(args, config):
    report = run_check(args.check, args, config)
    _emit(report.dumps(), config.output_path)
    return EXIT_OK if report.passed else EXIT_FAILED


def _top_eigenvalue(name, params, N):
    return float(resolve_operator(name, params, select=(0, 1), N=N).spectrum.eigenvalues[0])


def _flat_sl(params):
    p = _coefficient(params, "p", 1.0)
    q = _coefficient(params, "q", 0.0)
    return p == 1.0 and q == 0.0


def cmd_plotdata(args, config):
    if args.input:
        return _plot_from_file(args.input, config)
    if args.study == "truncation":
        if config.operator is None:
            raise ConfigError("truncation study needs --op")
        op = resolve_operator(config.operator, config.params)
        source = op.generator if op.generator is not None else op.spectrum
        mu = spectralfun.WeightSequence.parse(config.weights)
        rows = spectralfun.truncation_table(source, mu, _m_list(args.m))
        _emit(_csv(["m", "error", "bound"], rows), config.output_path)
        return EXIT_OK
    if args.study == "mesh":
        if config.operator not in ("sl", "schrod-per", "schrod-dir"):
            raise ConfigError("mesh study needs a discretized --op (sl, schrod-per, schrod-dir)")
        grid = sorted(_m_list(args.grid))
        params = {k: v for k, v in config.params.items() if k != "N"}
        if config.operator == "sl" and _flat_sl(params):
            reference = _number(params, "L", 1.0) ** 2 / math.pi**2
        else:
            reference = _top_eigenvalue(config.operator, params, 4 * grid[-1])
        rows = []
        for N in grid:
            top = _top_eigenvalue(config.operator, params, N)
            rows.append((N, abs(top - reference), top))
        _emit(_csv(["N", "error", "eigenvalue"], rows), config.output_path)
        return EXIT_OK
    raise ConfigError("plotdata needs --input FILE or --study {truncation,mesh}")


def _plot_from_file(path, config):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: expected a report or spectrum document")
    if "check_name" in doc:
        try:
            report = VerificationReport.from_document(doc)
        except (TypeError, KeyError, ValueError) as exc:
            raise ConfigError(f"{path}: malformed report ({exc})") from None
        if report.check_name == "truncation":
            header = ["m", "error", "bound"]
        else:
            header = ["trial", "violation", "allowed"]
        rows = [[d.get(h, "") for h in header] for d in report.details]
        _emit(_csv(header, rows), config.output_path)
        return EXIT_OK
    if "eigenvalues" in doc:
        values = doc["eigenvalues"]
        _emit(_csv(["index", "eigenvalue"], enumerate(values, 1)), config.output_path)
        return EXIT_OK
    raise ConfigError(f"{path}: neither a report nor a spectrum document")


# -- argument parsing ----------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="schurspec",
        description="Weighted eigenvalue sums: spectra, psi evaluation and Schur convexity checks.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--op", help=f"operator: {', '.join(OPERATORS)}")
    common.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    common.add_argument("--weights", default="tsap:1:2", help="osp:c:p, tsap:c:p or list:a,b[;c,d]")
    common.add_argument("--terms", type=int, default=None)
    common.add_argument("--dim", type=int, default=12)
    common.add_argument("--k", type=int, default=3)
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("report-doc", "csv"), default="report-doc")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eig", parents=[common], help="spectrum of an operator")
    sub.add_parser("psi", parents=[common], help="weighted eigenvalue sum with tail bound")

    v = sub.add_parser("verify", parents=[common], help="run a verification campaign")
    v.add_argument("check", choices=CHECKS)
    v.add_argument("--fn", default="csym:2", help="function spec, e.g. csym:3, csym-ratio:2, powsum:2, merkle:cube")
    v.add_argument("--low", type=float, default=0.5)
    v.add_argument("--high", type=float, default=5.0)
    v.add_argument("--m", default="5,10,50,100,500", help="truncation indices")
    v.add_argument("--frames", type=int, default=500, help="random frames per matrix (trace-sup)")
    v.add_argument("--eps", type=float, default=0.01, help="perturbation size (continuity)")
    v.add_argument("--sampler", choices=spectralfun.SAMPLERS, default="symmetric")
    v.add_argument("--pair", nargs=2, metavar=("S", "T"), help="replay one explicit matrix pair (sublinearity)")

    p = sub.add_parser("plotdata", parents=[common], help="CSV series for plotting")
    p.add_argument("--input", help="report or spectrum document to convert")
    p.add_argument("--study", choices=("truncation", "mesh"))
    p.add_argument("--m", default="1,2,5,10,20,50,100,200,500,1000")
    p.add_argument("--grid", default="250,500,1000,2000", help="grid sizes N for the mesh study")
    return parser


COMMANDS = {"eig": cmd_eig, "psi": cmd_psi, "verify": cmd_verify, "plotdata": cmd_plotdata}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            operator=args.op,
            params=parse_params(args.param),
            weights=args.weights,
            seed=args.seed,
            trials=args.trials,
            tolerance=args.tol,
            output_path=args.out,
            format=args.format,
        )
        if args.command in ("eig", "psi") and args.op is None:
            raise ConfigError(f"{args.command} needs --op")
        if args.terms is not None and args.terms < 1:
            raise ConfigError("--terms must be >= 1")
        return COMMANDS[args.command](args, config)
    except (ConfigError, InvalidArgument) as exc:
        return _fail(EXIT_CONFIG, exc)
    except ConvergenceError as exc:
        return _fail(EXIT_DIVERGENT, exc)
    except (SolverDivergence, SingularOperator) as exc:
        return _fail(EXIT_SOLVER, exc)
    except SchurSpecError as exc:
        return _fail(EXIT_CONFIG, exc)
    except OSError as exc:
        return _fail(EXIT_CONFIG, f"{exc.filename or ''}: {exc.strerror}")


def _fail(code, exc):
    msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
    print(f"schurspec: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
