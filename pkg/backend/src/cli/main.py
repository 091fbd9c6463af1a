"""Command-line interface for the elliptic spectra library.

Subcommands: moments, cumulants, identities, diagrams, ncpart, density,
simulate and verify. Data goes to stdout (or --out); logs go to stderr.
"""

import argparse
import logging
import sys
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

# Add backend/src to path for imports
backend_src = Path(__file__).parent.parent
if str(backend_src) not in sys.path:
    sys.path.insert(0, str(backend_src))

import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from pydantic import ValidationError  # noqa: E402

from core import chorddiag, ellipticmc, exactpoly, momentrec, ncpartition, spectral  # noqa: E402
from core.errors import (  # noqa: E402
    BranchCutError,
    ConfigurationError,
    ContinuationError,
    DomainError,
    EigenSolverError,
    MissingCumulantError,
)
from core.settings import Settings, get_settings, load_settings  # noqa: E402
from core.trial_runner import TrialRunner  # noqa: E402
from core.verify_suite import run_suite  # noqa: E402
from models.config import RunConfig  # noqa: E402
from models.diagram import ColoringRule  # noqa: E402
from models.polynomial import IntPolynomial  # noqa: E402
from tools.csv_tools import (  # noqa: E402
    emit_json,
    emit_text,
    format_value,
    frame_to_text,
    json_value,
    records_frame,
    write_csv,
)
from tools.logging_tools import log_run_event  # noqa: E402

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_USAGE = 64
EXIT_CONFIG = 65
EXIT_NUMERICAL = 70
VERIFY_EXIT_CAP = 63

DEFAULT_FORMATS = {
    "moments": "csv",
    "cumulants": "json",
    "identities": "json",
    "diagrams": "json",
    "ncpart": "json",
    "density": "csv",
    "simulate": "csv",
    "verify": "csv",
}

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class UsageError(Exception):
    """Invalid command-line usage."""


class CLIArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting with status 2."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> CLIArgumentParser:
    """Build the argument parser with one subparser per subcommand."""
    common = CLIArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default=argparse.SUPPRESS,
                        help="Output format (default depends on the subcommand)")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS,
                        help="Output file (output directory for simulate)")

    parser = CLIArgumentParser(
        prog="elliptic",
        description="Moments, free cumulants and spectra of squared elliptic random matrices.",
        parents=[common],
    )
    parser.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, default=None,
                        help="Logging level (default from ELLIPTIC_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", parents=[common], help="Moment polynomials M_k(rho) or values")
    p.add_argument("--k", type=int, required=True, help="Largest moment index")
    p.add_argument("--rho", type=float, help="Evaluate at this correlation")

    p = sub.add_parser("cumulants", parents=[common], help="Free cumulants of the symmetrized law")
    p.add_argument("--n", type=int, required=True, help="Largest cumulant order")
    p.add_argument("--rho", type=float, help="Evaluate at this correlation")

    p = sub.add_parser("identities", parents=[common], help="Check the Narayana identity suite")
    p.add_argument("--n", type=int, required=True, help="Largest index checked")

    p = sub.add_parser("diagrams", parents=[common], help="Planar chord-diagram partition functions")
    p.add_argument("--half-size", type=int, required=True, help="Number of chords m")
    p.add_argument("--coloring", choices=["u", "v"], default="u")
    p.add_argument("--atomic", action="store_true", help="Sum over atomic diagrams only")

    p = sub.add_parser("ncpart", parents=[common], help="Non-crossing partition counts and statistics")
    p.add_argument("--type", dest="nc_type", choices=["a", "b"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--stats", action="store_true", help="Include block statistics")

    p = sub.add_parser("density", parents=[common], help="Spectral density of F or G on a grid")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--dist", choices=["f", "g"], default="f")
    p.add_argument("--xmin", type=float, default=None)
    p.add_argument("--xmax", type=float, default=None, help="Default: just past the support edge")
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--eps", type=float, default=None, help="Default from ELLIPTIC_DENSITY_EPS")
    p.add_argument("--richardson", action="store_true")
    p.add_argument("--svg", type=Path, default=None, help="Also write an SVG line plot")

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo spectra of W")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kmax", type=int, default=2)
    p.add_argument("--bins", type=int, default=60)
    p.add_argument("--diag-variance", choices=["unit", "one_plus_rho"], default="unit")
    p.add_argument("--solver", choices=["lapack", "jacobi"], default=None,
                   help="Default from ELLIPTIC_EIGENSOLVER")
    p.add_argument("--plot", type=Path, default=None, help="SVG histogram against d_F")

    p = sub.add_parser("verify", parents=[common], help="Run the acceptance checks")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--fast", dest="fast", action="store_true", default=True)
    mode.add_argument("--full", dest="fast", action="store_false")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """Turn parsed arguments into a validated RunConfig."""
    reserved = {"command", "format", "out", "rho", "seed", "log_level"}
    options = {key: value for key, value in vars(args).items() if key not in reserved}
    return RunConfig(
        command=args.command,
        output_format=getattr(args, "format", None) or DEFAULT_FORMATS[args.command],
        out=getattr(args, "out", None),
        rho=getattr(args, "rho", None),
        seed=getattr(args, "seed", 0),
        options=options,
    )


def ensure_writable(directory: Path) -> Path:
    """Create a directory and check it accepts a temporary file.

    Raises:
        ConfigurationError: If the directory cannot be created or written.
    """
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(dir=directory):
            pass
    except OSError as e:
        raise ConfigurationError(f"output directory {directory} is not writable: {e}") from e
    return directory


def _coefficient_rows(label: str, index: Sequence[int], polys: Sequence[IntPolynomial]) -> pd.DataFrame:
    width = max((p.degree for p in polys), default=0) + 1
    width = max(width, 1)
    columns = [label] + [f"coeff_{i}" for i in range(width)]
    records = []
    for i, p in zip(index, polys):
        record: Dict[str, Any] = {label: i}
        for j in range(width):
            record[f"coeff_{j}"] = p.coefficient(j)
        records.append(record)
    return records_frame(records, columns)


def _polynomial_json(label: str, index: Sequence[int], polys: Sequence[IntPolynomial]) -> List[Dict]:
    return [{label: i, **p.to_json()} for i, p in zip(index, polys)]


def _value_output(config: RunConfig, label: str, index: Sequence[int], values: Sequence[Any]) -> None:
    if config.output_format == "json":
        emit_json([{label: i, "value": json_value(v)} for i, v in zip(index, values)], config.out)
    else:
        records = [{label: i, "value": v} for i, v in zip(index, values)]
        emit_text(frame_to_text(records_frame(records, [label, "value"])), config.out)


def _polynomial_output(config: RunConfig, label: str, index: Sequence[int], polys: Sequence[IntPolynomial]) -> None:
    if config.output_format == "json":
        emit_json(_polynomial_json(label, index, polys), config.out)
    else:
        emit_text(frame_to_text(_coefficient_rows(label, index, polys)), config.out)


def run_moments(config: RunConfig, settings: Settings) -> int:
    k = config.option("k")
    table = momentrec.build_uv(2 * k)
    index = list(range(k + 1))
    if config.rho is not None:
        _value_output(config, "k", index, momentrec.moment_values(table, config.rho, k))
    else:
        _polynomial_output(config, "k", index, [momentrec.moment_polynomial(table, i) for i in index])
    return EXIT_OK


def run_cumulants(config: RunConfig, settings: Settings) -> int:
    n = config.option("n")
    table = momentrec.build_uv(2 * (n // 2))
    cumulants = ncpartition.cumulants_from_moments(momentrec.symmetrized_moments(table, n), n)
    index = list(range(1, n + 1))
    if config.rho is not None:
        rho = int(config.rho) if float(config.rho).is_integer() else config.rho
        _value_output(config, "order", index, [c.evaluate(rho) for c in cumulants])
    else:
        _polynomial_output(config, "order", index, cumulants)
    return EXIT_OK


def run_identities(config: RunConfig, settings: Settings) -> int:
    report = exactpoly.check_identities(config.option("n"))
    if config.output_format == "json":
        emit_json(
            {
                "n_max": report.n_max,
                "checked": report.checked,
                "passed": report.passed,
                "failures": [
                    {"identity_id": f.identity_id, "n": f.n, "difference": f.difference.to_json()["coeffs"]}
                    for f in report.failures
                ],
            },
            config.out,
        )
    else:
        rows = [
            {"identity_id": f.identity_id, "n": f.n, "difference": f.difference.pretty("t")}
            for f in report.failures
        ]
        emit_text(frame_to_text(pd.DataFrame(rows, columns=["identity_id", "n", "difference"])), config.out)
    return EXIT_OK if report.passed else EXIT_CHECKS_FAILED


def run_diagrams(config: RunConfig, settings: Settings) -> int:
    m = config.option("half_size")
    coloring = config.option("coloring", "u")
    atomic = bool(config.option("atomic", False))
    if atomic:
        if coloring != "u":
            raise DomainError("atomic diagrams are weighted with the u coloring")
        if m % 2 == 0:
            poly = chorddiag.atomic_partition_function(m // 2)
        else:
            poly = chorddiag.atomic_partition_function_odd((m - 1) // 2)
    else:
        poly = chorddiag.partition_function(m, ColoringRule(coloring))
    payload = {
        "half_size": m,
        "coloring": coloring,
        "atomic": atomic,
        "count": json_value(poly.evaluate(1)),
        "coeffs": poly.to_json()["coeffs"],
    }
    if config.output_format == "json":
        emit_json(payload, config.out)
    else:
        frame = _coefficient_rows("half_size", [m], [poly])
        frame.insert(1, "count", format_value(poly.evaluate(1)))
        emit_text(frame_to_text(frame), config.out)
    return EXIT_OK


def run_ncpart(config: RunConfig, settings: Settings) -> int:
    n = config.option("n")
    nc_type = config.option("nc_type")
    payload: Dict[str, Any] = {"type": nc_type, "n": n}
    if nc_type == "a":
        payload["count"] = len(ncpartition.enumerate_nca(n))
        if config.option("stats", False):
            payload["block_count"] = ncpartition.block_count_polynomial(n).to_json()["coeffs"]
    else:
        partitions = ncpartition.enumerate_ncb(n)
        payload["count"] = len(partitions)
        payload["zero_block_count"] = sum(1 for p in partitions if p.zero_block() is not None)
        if config.option("stats", False):
            payload["half_nonzero_blocks"] = ncpartition.half_nonzero_block_polynomial(n).to_json()["coeffs"]
            if 1 <= n <= 6:
                payload["zero_block_stats"] = ncpartition.bstats_zero_block(n).to_json()["coeffs"]
    if config.output_format == "json":
        emit_json(payload, config.out)
    else:
        flat = {key: " ".join(value) if isinstance(value, list) else value for key, value in payload.items()}
        emit_text(frame_to_text(pd.DataFrame([flat])), config.out)
    return EXIT_OK


def run_density(config: RunConfig, settings: Settings) -> int:
    dist = config.option("dist", "f")
    eps = config.option("eps", settings.density_eps)
    xmax = config.option("xmax")
    if xmax is None:
        xmax = 1.02 * spectral.support_edge(config.rho, dist)
    grid = spectral.density_grid(dist, config.option("xmin"), xmax, config.option("points", 400))
    richardson = bool(config.option("richardson", False))
    if dist == "f":
        curve = spectral.density_f(grid, config.rho, eps, richardson)
    else:
        curve = spectral.density_g(grid, config.rho, eps, richardson)
    records = [{"x": float(x), "density": float(v)} for x, v in zip(curve.xs, curve.values)]
    if config.output_format == "json":
        emit_json({"rho": config.rho, "dist": curve.dist, "eps": eps,
                   "metadata": curve.metadata, "points": records}, config.out)
    else:
        emit_text(frame_to_text(records_frame(records, ["x", "density"])), config.out)
    svg = config.option("svg")
    if svg is not None:
        from tools.svg_tools import write_density_svg

        write_density_svg(curve, svg)
    return EXIT_OK


def _moment_rows(spectra, kmax: int, rho: float) -> List[Dict[str, Any]]:
    table = momentrec.build_uv(2 * kmax)
    theory = momentrec.moment_values(table, rho, kmax)
    if len(spectra) >= 2:
        estimates = [(e.mean, e.stderr) for e in ellipticmc.empirical_moments(spectra, kmax)]
    else:
        logger.warning("A single trial gives no standard error")
        only = spectra[0]
        estimates = [(float(np.sum(only.eigenvalues ** k)) / only.n, float("nan")) for k in range(kmax + 1)]
    return [
        {"k": k, "empirical": mean, "stderr": stderr, "theory": float(theory[k])}
        for k, (mean, stderr) in enumerate(estimates)
    ]


def run_simulate(config: RunConfig, settings: Settings) -> int:
    out_dir = ensure_writable(config.out or Path(settings.output_dir))
    n, trials, rho = config.option("size"), config.option("trials", 1), config.rho
    kmax = config.option("kmax", 2)
    if kmax > ellipticmc.MOMENT_KMAX:
        raise DomainError(f"--kmax must be at most {ellipticmc.MOMENT_KMAX}")
    solver = config.option("solver") or settings.eigensolver

    runner = TrialRunner(settings.worker_count())
    spectra = ellipticmc.run_trials(
        n, rho, trials, config.seed,
        solver=solver,
        diag_variance=config.option("diag_variance", "unit"),
        runner=runner,
    )
    summary = runner.summary()

    lambdas = np.concatenate([s.eigenvalues for s in spectra])
    eigen_frame = pd.DataFrame({
        "trial": np.repeat(np.arange(trials), n),
        "index": np.tile(np.arange(n), trials),
        "lambda": [format_value(float(v)) for v in lambdas],
    })
    write_csv(eigen_frame, out_dir / "eigenvalues.csv")

    moment_frame = records_frame(_moment_rows(spectra, kmax, rho), ["k", "empirical", "stderr", "theory"])
    write_csv(moment_frame, out_dir / "moments.csv")

    hist = ellipticmc.histogram(spectra, config.option("bins", 60))
    theory_heights = ellipticmc.theory_heights(hist, rho, settings.density_eps)
    hist_records = [
        {"bin_lo": float(lo), "bin_hi": float(hi), "density": float(h), "theory_density": float(t)}
        for lo, hi, h, t in zip(hist.edges[:-1], hist.edges[1:], hist.heights, theory_heights)
    ]
    write_csv(records_frame(hist_records, ["bin_lo", "bin_hi", "density", "theory_density"]),
              out_dir / "histogram.csv")

    plot = config.option("plot")
    if plot is not None:
        from tools.svg_tools import write_density_svg

        grid = np.linspace(hist.edges[0], hist.edges[-1], 400)[1:]
        write_density_svg(spectral.density_f(grid, rho, settings.density_eps), plot, hist)

    log_run_event(
        out_dir / "run_log.csv", "simulate", "trials", "completed",
        f"n={n}, rho={rho}, seed={config.seed}, trials={summary.completed}/{summary.trials}, "
        f"workers={summary.workers}, trial_seconds={summary.seconds:.3f}",
    )
    emit_text(frame_to_text(moment_frame, config.output_format))
    return EXIT_OK


def run_verify(config: RunConfig, settings: Settings) -> int:
    log_dir = ensure_writable(config.out or Path(settings.output_dir))
    results = run_suite(
        fast=bool(config.option("fast", True)),
        workers=settings.worker_count(),
        log_file=log_dir / "run_log.csv",
    )
    frame = pd.DataFrame(
        [{"check": r.name, "status": r.status, "seconds": round(r.seconds, 2), "detail": r.detail}
         for r in results]
    )
    if config.output_format == "json":
        emit_json(frame.to_dict(orient="records"))
    else:
        emit_text(frame.to_string(index=False) + "\n")
    failed = sum(1 for r in results if r.status != "pass")
    return min(failed, VERIFY_EXIT_CAP)


HANDLERS: Dict[str, Callable[[RunConfig, Settings], int]] = {
    "moments": run_moments,
    "cumulants": run_cumulants,
    "identities": run_identities,
    "diagrams": run_diagrams,
    "ncpart": run_ncpart,
    "density": run_density,
    "simulate": run_simulate,
    "verify": run_verify,
}


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger().setLevel(level)


def run(config: RunConfig, settings: Optional[Settings] = None) -> int:
    """Execute one validated command and map failures to exit codes."""
    settings = settings or get_settings()
    try:
        return HANDLERS[config.command](config, settings)
    except ConfigurationError as e:
        sys.stderr.write(f"configuration error: {e}\n")
        return EXIT_CONFIG
    except (ContinuationError, EigenSolverError, BranchCutError) as e:
        logger.error(f"Numerical failure in {config.command}: {e}", exc_info=True)
        sys.stderr.write(f"numerical failure in {config.command}: {e}\n")
        return EXIT_NUMERICAL
    except (DomainError, MissingCumulantError) as e:
        sys.stderr.write(f"invalid arguments for {config.command}: {e}\n")
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one subcommand and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(parser.format_usage())
        sys.stderr.write(f"{e}\n")
        return EXIT_USAGE
    except SystemExit as e:
        # --help and --version exit through argparse
        return int(e.code or 0)

    try:
        settings = load_settings()
    except ConfigurationError as e:
        sys.stderr.write(f"configuration error: {e}\n")
        return EXIT_CONFIG
    configure_logging(args.log_level or settings.log_level)

    try:
        config = build_config(args)
    except ValidationError as e:
        sys.stderr.write(f"invalid arguments for {args.command}: {e}\n")
        return EXIT_USAGE

    return run(config, settings)


if __name__ == "__main__":
    sys.exit(main())
