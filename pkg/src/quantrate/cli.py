"""Command-line front end: figure-reproduction datasets as CSV/JSON.

Subcommands
-----------
rate-sweep       GMI at the optimal loading vs SNR, one curve per resolution.
loading-sweep    GMI vs loading factor at fixed SNR(s), with rows marking
                 the optimum L*, the estimate L̂, and the L=4 rule of thumb.
optimal-loading  Table of L*, L̂, the 2√(ln 2K) scaling law, and the
                 MSE-optimal loading, one row per resolution.
mc-validate      Seeded Monte Carlo GMI vs the analytic value with z-scores;
                 exits with status 2 if any |z| exceeds 5.

All subcommands are deterministic given their full flag set. Output goes to
--out (default stdout) as CSV (UTF-8, header row, '.' decimals, every line
newline-terminated) or JSON that validates against the shipped schema and
echoes the resolved parameters for reproducibility. --plot additionally
renders the dataset as a PNG next to the output file.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

from .errors import DomainError, ParameterError
from .gmi import LN2, capacity_nats, gamma, gmi_rate, to_bits
from .highres import loading_estimate, optimal_loading, scaling_law
from .montecarlo import ChannelParams, estimate_moments
from .quantizer import UniformSpec, make_uniform

AUTO = "auto"
DEFAULT_SEED = 20250813
DEFAULT_SAMPLES = 1_000_000
#: Loading factor reported for one-bit quantizers, whose rate is loading-free.
ONE_BIT_LOADING = 4.0


@dataclass
class SweepConfig:
    """Resolved parameters of one CLI invocation."""

    resolutions: List[int]
    snr_grid_db: List[float]
    loading_grid: Union[List[float], str] = AUTO
    output_path: Optional[str] = None
    format: str = "csv"
    seed: int = DEFAULT_SEED
    n_samples: int = DEFAULT_SAMPLES
    units: str = "bits"
    plot: bool = False

    def __post_init__(self) -> None:
        if not self.resolutions:
            raise ParameterError("at least one resolution (--bits) is required")
        if any(b < 1 or b != int(b) for b in self.resolutions):
            raise ParameterError(f"resolutions must be integers >= 1, got {self.resolutions}")
        if not self.snr_grid_db:
            raise ParameterError("at least one SNR (--snr-db) is required")
        if isinstance(self.loading_grid, str):
            if self.loading_grid != AUTO:
                raise ParameterError(f"loading grid must be {AUTO!r} or numbers, got {self.loading_grid!r}")
        elif not self.loading_grid or any(L <= 0 for L in self.loading_grid):
            raise ParameterError("explicit loading grid must be non-empty and positive")
        if self.format not in ("csv", "json"):
            raise ParameterError(f"format must be csv or json, got {self.format!r}")
        if self.units not in ("bits", "nats"):
            raise ParameterError(f"units must be bits or nats, got {self.units!r}")


@dataclass
class Dataset:
    """Rows plus enough metadata to serialize and re-run them."""

    command: str
    params: Dict[str, object]
    columns: List[str]
    rows: List[Dict[str, object]] = field(default_factory=list)


def _levels(bits: int) -> int:
    return 2 ** (bits - 1)


def _rate(nats: float, units: str) -> float:
    return to_bits(nats) if units == "bits" else nats


def _rate_col(name: str, units: str) -> str:
    return f"{name}_{units}"


def _star_loading(bits: int) -> float:
    """L* for a resolution, with the fixed convention for the one-bit case."""
    K = _levels(bits)
    if K == 1:
        return ONE_BIT_LOADING
    return optimal_loading(K).l_star


def _auto_loading_grid(bits: int) -> List[float]:
    """60 log-spaced loading factors on [0.5, scaling_law + 3]."""
    K = _levels(bits)
    hi = scaling_law(K) + 3.0
    n = 60
    ratio = (hi / 0.5) ** (1.0 / (n - 1))
    return [0.5 * ratio**i for i in range(n)]


def _echo_params(config: SweepConfig, **extra: object) -> Dict[str, object]:
    params: Dict[str, object] = {
        "bits": list(config.resolutions),
        "snr_db": list(config.snr_grid_db),
        "units": config.units,
    }
    params.update(extra)
    return params


def cmd_rate_sweep(config: SweepConfig) -> Dataset:
    """Rate vs SNR at the rate-optimal loading, one row per (b, snr)."""
    gcol = _rate_col("gmi", config.units)
    ccol = _rate_col("capacity", config.units)
    ds = Dataset(
        command="rate-sweep",
        params=_echo_params(config),
        columns=["b", "snr_db", "L_star", gcol, ccol],
    )
    for b in config.resolutions:
        l_star = _star_loading(b)
        g = gamma(UniformSpec.from_loading(_levels(b), l_star))
        for snr_db in config.snr_grid_db:
            snr = 10.0 ** (snr_db / 10.0)
            ds.rows.append(
                {
                    "b": b,
                    "snr_db": snr_db,
                    "L_star": l_star,
                    gcol: _rate(gmi_rate(g, snr), config.units),
                    ccol: _rate(capacity_nats(snr), config.units),
                }
            )
    return ds


def cmd_loading_sweep(config: SweepConfig) -> Dataset:
    """Rate vs loading factor; marker rows flag L*, L̂, and the L=4 rule."""
    gcol = _rate_col("gmi", config.units)
    ds = Dataset(
        command="loading-sweep",
        params=_echo_params(config, loading=config.loading_grid),
        columns=["b", "L", "snr_db", gcol, "marker"],
    )
    for b in config.resolutions:
        K = _levels(b)
        if config.loading_grid == AUTO:
            grid = _auto_loading_grid(b)
        else:
            grid = list(config.loading_grid)
        markers = [(ONE_BIT_LOADING, "L4")]
        if K >= 2:
            markers = [
                (optimal_loading(K).l_star, "L_star"),
                (loading_estimate(K), "L_hat"),
                (ONE_BIT_LOADING, "L4"),
            ]
        for snr_db in config.snr_grid_db:
            snr = 10.0 ** (snr_db / 10.0)
            for L in grid:
                ds.rows.append(
                    {
                        "b": b,
                        "L": L,
                        "snr_db": snr_db,
                        gcol: _rate(gmi_rate(gamma(UniformSpec.from_loading(K, L)), snr), config.units),
                        "marker": "",
                    }
                )
            for L, label in markers:
                ds.rows.append(
                    {
                        "b": b,
                        "L": L,
                        "snr_db": snr_db,
                        gcol: _rate(gmi_rate(gamma(UniformSpec.from_loading(K, L)), snr), config.units),
                        "marker": label,
                    }
                )
    return ds


def cmd_optimal_loading_table(config: SweepConfig) -> Dataset:
    """One row per resolution: L*, L̂, scaling law, and MSE-optimal loading."""
    ds = Dataset(
        command="optimal-loading",
        params={"bits": list(config.resolutions)},
        columns=["K", "b", "L_star", "L_hat", "scaling_law", "L_mse"],
    )
    for b in config.resolutions:
        K = _levels(b)
        if K < 2:
            raise ParameterError("optimal-loading requires resolutions with K >= 2 (b >= 2)")
        analysis = optimal_loading(K)
        ds.rows.append(
            {
                "K": K,
                "b": b,
                "L_star": analysis.l_star,
                "L_hat": analysis.l_hat,
                "scaling_law": analysis.scaling_law,
                "L_mse": analysis.l_mse,
            }
        )
    return ds


def cmd_mc_validate(config: SweepConfig) -> Dataset:
    """Monte Carlo ĜMI against the analytic value, one z-scored row per cell.

    Cell seeds are ``seed + row_index`` in row order, so the whole dataset is
    reproducible from the single --seed value.
    """
    acol = _rate_col("gmi_analytic", config.units)
    mcol = _rate_col("gmi_mc", config.units)
    ds = Dataset(
        command="mc-validate",
        params=_echo_params(
            config,
            loading=config.loading_grid,
            samples=config.n_samples,
            seed=config.seed,
        ),
        columns=["b", "L", "snr_db", acol, mcol, "std_err", "z_score"],
    )
    unit_scale = 1.0 / LN2 if config.units == "bits" else 1.0
    index = 0
    for b in config.resolutions:
        K = _levels(b)
        if config.loading_grid == AUTO:
            loadings = [_star_loading(b), ONE_BIT_LOADING]
        else:
            loadings = list(config.loading_grid)
        for L in loadings:
            q = make_uniform(K, L / K)
            g = gamma(UniformSpec.from_loading(K, L))
            for snr_db in config.snr_grid_db:
                snr = 10.0 ** (snr_db / 10.0)
                analytic = gmi_rate(g, snr)
                est = estimate_moments(
                    ChannelParams(h=1.0, sigma_x2=snr, sigma2=1.0),
                    q,
                    config.n_samples,
                    config.seed + index,
                )
                index += 1
                z = (est.gmi_hat_nats - analytic) / est.std_err_gmi
                ds.rows.append(
                    {
                        "b": b,
                        "L": L,
                        "snr_db": snr_db,
                        acol: analytic * unit_scale,
                        mcol: est.gmi_hat_nats * unit_scale,
                        "std_err": est.std_err_gmi * unit_scale,
                        "z_score": z,
                    }
                )
    return ds


def _format_cell(value: object) -> str:
    if isinstance(value, bool):  # bool is an int subclass; keep it explicit
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(ds: Dataset) -> str:
    lines = [",".join(ds.columns)]
    for row in ds.rows:
        lines.append(",".join(_format_cell(row[c]) for c in ds.columns))
    return "\n".join(lines) + "\n"


def render_json(ds: Dataset) -> str:
    doc = {
        "command": ds.command,
        "params": ds.params,
        "columns": ds.columns,
        "rows": ds.rows,
    }
    return json.dumps(doc, indent=2) + "\n"


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _add_common_flags(p: argparse.ArgumentParser, *, mc: bool = False) -> None:
    p.add_argument("--bits", type=int, nargs="+", metavar="B", help="resolutions in bits")
    p.add_argument("--snr-db", type=float, nargs="+", metavar="DB", help="SNR grid in dB")
    p.add_argument(
        "--loading",
        nargs="+",
        metavar="L",
        help="loading factors, or 'auto' (log grid for loading-sweep; L*,4 for mc-validate)",
    )
    if mc:
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="samples per cell")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="base seed; cell i uses seed+i")
    p.add_argument("--out", metavar="PATH", default=None, help="output file ('-' or omitted: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--units", choices=("bits", "nats"), default="bits")
    p.add_argument("--plot", action="store_true", help="also render a PNG next to --out")


class _Parser(argparse.ArgumentParser):
    """argparse with the documented bad-arguments exit code."""

    def error(self, message: str) -> "NoReturn":  # type: ignore[name-defined]  # noqa: F821
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(4)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quantrate", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("rate-sweep", "loading-sweep", "optimal-loading"):
        p = sub.add_parser(name)
        _add_common_flags(p)
    p = sub.add_parser("mc-validate")
    _add_common_flags(p, mc=True)
    return parser


_DEFAULT_BITS = {
    "rate-sweep": [1, 2, 3, 4, 5, 6],
    "loading-sweep": [3, 6, 9],
    "optimal-loading": list(range(2, 17)),
    "mc-validate": [1, 2, 3, 4, 5, 6],
}
_DEFAULT_SNR_DB = {
    "rate-sweep": [float(s) for s in range(-10, 42, 2)],
    "loading-sweep": [10.0],
    "optimal-loading": [10.0],  # unused by the table; kept for config validity
    "mc-validate": [-10.0, 0.0, 10.0, 20.0, 30.0],
}


def _parse_loading(tokens: Optional[Sequence[str]]) -> Union[List[float], str]:
    if tokens is None:
        return AUTO
    if len(tokens) == 1 and tokens[0] == AUTO:
        return AUTO
    try:
        return [float(t) for t in tokens]
    except ValueError as exc:
        raise ParameterError(f"--loading expects numbers or 'auto', got {list(tokens)}") from exc


def _config_from_args(args: argparse.Namespace) -> SweepConfig:
    return SweepConfig(
        resolutions=args.bits if args.bits else list(_DEFAULT_BITS[args.command]),
        snr_grid_db=args.snr_db if args.snr_db else list(_DEFAULT_SNR_DB[args.command]),
        loading_grid=_parse_loading(args.loading),
        output_path=args.out,
        format=args.format,
        seed=getattr(args, "seed", DEFAULT_SEED),
        n_samples=getattr(args, "samples", DEFAULT_SAMPLES),
        units=args.units,
        plot=args.plot,
    )


_COMMANDS = {
    "rate-sweep": cmd_rate_sweep,
    "loading-sweep": cmd_loading_sweep,
    "optimal-loading": cmd_optimal_loading_table,
    "mc-validate": cmd_mc_validate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        if config.plot and (config.output_path is None or config.output_path == "-"):
            raise ParameterError("--plot requires --out pointing to a file")
        dataset = _COMMANDS[args.command](config)
    except (ParameterError, DomainError) as exc:
        sys.stderr.write(f"quantrate: {exc}\n")
        return 4

    text = render_csv(dataset) if config.format == "csv" else render_json(dataset)
    try:
        _write_output(text, config.output_path)
        if config.plot:
            from . import plotting

            plotting.render_dataset(dataset, config.output_path)
    except OSError as exc:
        sys.stderr.write(f"quantrate: cannot write output: {exc}\n")
        return 3

    if dataset.command == "mc-validate":
        worst = max(abs(float(row["z_score"])) for row in dataset.rows)
        if worst > 5.0:
            sys.stderr.write(f"quantrate: Monte Carlo validation failed: worst |z| = {worst:.2f} > 5\n")
            return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
