"""Command-line front end.

    python -m src thresholds --preset threshold-sweep
    python -m src tangent --code 255,144,8 --z-list 1,5,10
    python -m src analyze --p 0.02 --inner-len 16
    python -m src simulate --preset mc-check --words 100000 --format json
    python -m src validate --trials 10000

Configuration precedence: flags > --config JSON file > --preset > defaults.
Exit codes: 0 success, 1 usage or parameter error, 2 oracle discrepancy.
"""
import argparse
import asyncio
import json
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from .models.model_configs import OutputFormat, RunConfig, RunPresets, merge_config
from .models.decoder_models import DecoderKind, irs_lambda, optimal_kappa
from .theory.analysis import min_bmd_trials, pe_curves
from .theory.thresholds import optimal_thresholds
from .utils.errors import MteeError, UsageError
from .utils.reporting import emit, render_csv, render_json, rows_as_dicts
from .workflows.simulation_workflow import SimulationWorkflow
from .workflows.state import RunStatus
from .workflows.validation_workflow import ValidationWorkflow

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DISCREPANCY = 2


@dataclass
class Table:
    schema: str
    header: List[str]
    rows: List[List[Any]]
    meta: Dict[str, Any] = field(default_factory=dict)

    def render(self, fmt: OutputFormat) -> str:
        if fmt is OutputFormat.JSON:
            return render_json(self.schema, "rows", rows_as_dicts(self.header, self.rows), self.meta)
        return render_csv(self.schema, self.header, self.rows, self.meta)


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting with status 2."""

    def error(self, message: str):
        raise UsageError(message)


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _code_triple(text: str) -> List[int]:
    values = _int_list(text)
    if len(values) not in (2, 3):
        raise argparse.ArgumentTypeError(f"expected n,k or n,k,m, got {text!r}")
    return values


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file in RunConfig layout")
    common.add_argument("--preset", choices=RunPresets.names(), help="named starting configuration")
    common.add_argument("--code", type=_code_triple, help="outer RS code as n,k[,m]")
    common.add_argument("--poly", type=lambda x: int(x, 0), help="primitive polynomial, e.g. 0x11d")
    common.add_argument("--p", type=float, help="BSC crossover probability")
    common.add_argument("--inner-rate", type=float, help="inner code rate (bits)")
    common.add_argument("--inner-len", type=float, help="inner block length n_inner (default m/rate)")
    common.add_argument("--e0", type=float, help="override the Gallager exponent (nats/bit)")
    common.add_argument("--s", type=float, help="override the tilt parameter s")
    common.add_argument("--decoder", choices=[k.value for k in DecoderKind], help="outer decoder family")
    choice = common.add_mutually_exclusive_group()
    choice.add_argument("--lambda", dest="lam", type=float, help="constant tradeoff factor")
    choice.add_argument("--kappa", type=int, help="tangent point of a GS tangent decoder")
    choice.add_argument("--auto", action="store_true", help="optimal tangent decoder per z")
    choice.add_argument("--interleave", type=int, help="collaborative decoder of l-fold interleaved RS, lambda = (l+1)/l")
    common.add_argument("--delta", type=int, help="maximal erasure count of a --lambda decoder")
    common.add_argument("--z", type=int, help="number of decoding trials")
    common.add_argument("--z-list", type=_int_list, help="comma-separated trial counts")
    common.add_argument("--lambdas", type=_float_list, help="comma-separated tradeoff sweep")
    common.add_argument("--words", type=int, help="Monte Carlo words")
    common.add_argument("--seed", type=int, help="RNG seed")
    common.add_argument("--chunks", type=int, help="RNG work partitions")
    common.add_argument("--workers", type=int, help="worker threads")
    common.add_argument("--trials", type=int, help="oracle validation patterns")
    common.add_argument("--inject-fault", action="store_true", help="corrupt decoder output (harness check)")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], help="output format")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mtee-lab", description="Multi-trial error/erasure decoding toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common_flags()
    sub.add_parser("thresholds", parents=[common], help="optimal threshold sets over a lambda sweep")
    sub.add_parser("tangent", parents=[common], help="optimal GS tangent decoders per z")
    sub.add_parser("analyze", parents=[common], help="BMD vs tangent residual error exponents")
    sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate of P_e")
    sub.add_parser("validate", parents=[common], help="RS decoder vs BMD capability region")
    return parser


def flag_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Nested RunConfig overrides for every flag that was given."""
    out: Dict[str, Dict[str, Any]] = {
        "code": {}, "channel": {}, "decoder": {}, "trials": {}, "simulation": {}, "output": {},
    }
    if args.code:
        out["code"].update(n=args.code[0], k=args.code[1])
        if len(args.code) == 3:
            out["code"]["m"] = args.code[2]
    if args.poly is not None:
        out["code"]["primitive_polynomial"] = args.poly

    for flag, key in (("p", "p"), ("inner_rate", "rate_inner"), ("inner_len", "n_inner"), ("e0", "e0"), ("s", "s")):
        if getattr(args, flag) is not None:
            out["channel"][key] = getattr(args, flag)

    if args.decoder:
        out["decoder"]["kind"] = args.decoder
    if args.lam is not None:
        out["decoder"].update(kind=DecoderKind.LAMBDA.value, lam=args.lam)
        out["trials"]["lambdas"] = [args.lam]
    if args.kappa is not None:
        out["decoder"].update(kind=DecoderKind.TANGENT.value, kappa=args.kappa)
    if args.auto:
        out["decoder"]["kind"] = DecoderKind.GS.value
    if args.interleave is not None:
        lam = irs_lambda(args.interleave)
        out["decoder"].update(kind=DecoderKind.LAMBDA.value, lam=lam)
        out["trials"]["lambdas"] = [lam]
    if args.delta is not None:
        out["decoder"]["delta"] = args.delta

    if args.z is not None:
        out["trials"]["z"] = args.z
    if args.z_list:
        out["trials"]["z_list"] = args.z_list
    if args.lambdas:
        out["trials"]["lambdas"] = args.lambdas

    for flag, key in (("words", "num_words"), ("seed", "seed"), ("chunks", "chunks"), ("workers", "workers"), ("trials", "oracle_trials")):
        if getattr(args, flag) is not None:
            out["simulation"][key] = getattr(args, flag)
    if args.inject_fault:
        out["simulation"]["inject_fault"] = True

    if args.format:
        out["output"]["format"] = args.format
    if args.out:
        out["output"]["path"] = args.out
    return {section: values for section, values in out.items() if values}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    config = RunPresets.get_config(args.preset) if args.preset else RunConfig()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                document = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config file {args.config}: {e}")
        if not isinstance(document, dict):
            raise UsageError(f"config file {args.config} must hold a JSON object")
        config = merge_config(config, document)
    return merge_config(config, flag_overrides(args))


def _channel_meta(config: RunConfig, channel) -> Dict[str, Any]:
    return {
        "p": config.channel.p,
        "rate_inner": channel.rate_inner,
        "n_inner": channel.n_inner,
        "e0": channel.e0,
        "s": channel.s,
    }


def cmd_thresholds(config: RunConfig) -> Table:
    """Optimal thresholds T_k (nats/bit) for every lambda of the sweep."""
    code = config.code.build()
    channel = config.channel.build(code.field.m)
    z = config.trials.z
    rows: List[List[Any]] = []
    for lam in config.trials.lambdas:
        ts = optimal_thresholds(lam, z, channel.e0, channel.s)
        rows.extend([lam, k, t] for k, t in enumerate(ts.thresholds, start=1))
    meta = {**_channel_meta(config, channel), "z": z, "reliability_cap": channel.reliability_cap}
    return Table("thresholds", ["lambda", "k", "threshold"], rows, meta)


def cmd_tangent(config: RunConfig) -> Table:
    """Optimal tangent decoders; the channel does not enter."""
    code = config.code.build()
    rows = []
    for z in config.trials.z_list:
        kappa, tangent = optimal_kappa(code, z)
        rows.append([z, kappa, tangent.lam, tangent.delta])
    return Table("tangent", ["z", "kappa", "lambda", "delta"], rows, {"code": code.describe()})


def cmd_analyze(config: RunConfig) -> Table:
    code = config.code.build()
    channel = config.channel.build(code.field.m)
    rows = []
    for row in pe_curves(code, channel.e0, channel.n_inner, config.trials.z_list):
        z_bmd = min_bmd_trials(code, row.z) if row.z is not None else None
        rows.append([
            row.z if row.z is not None else "inf",
            row.bmd_log10_pe,
            row.tangent_log10_pe,
            row.kappa,
            row.lam,
            row.delta,
            z_bmd,
        ])
    header = ["z", "bmd_log10_pe", "tangent_log10_pe", "kappa", "lambda", "delta", "z_bmd"]
    return Table("analyze", header, rows, {"code": code.describe(), **_channel_meta(config, channel)})


def cmd_simulate(config: RunConfig) -> str:
    state = asyncio.run(SimulationWorkflow().run(config))
    if state.status == RunStatus.FAILED or state.report is None:
        raise UsageError(state.error_message or "simulation produced no report")
    report = state.report
    fmt = config.output.format
    if fmt is OutputFormat.JSON:
        payload = {**report.model_dump(mode="json"), "log_ratio": state.log_ratio}
        return render_json("simulate", "report", payload)
    header = [
        "num_words", "num_failures", "pe_hat", "ci_low", "ci_high", "seed", "code", "decoder",
        "lambda", "z", "e0", "s", "n_inner", "log_pe_predicted", "log_ratio", "trial_successes",
    ]
    row = [
        report.num_words, report.num_failures, report.pe_hat, report.ci95[0], report.ci95[1],
        report.seed, report.code, report.decoder, report.lam, report.z, report.e0, report.s,
        report.n_inner, report.log_pe_predicted, state.log_ratio,
        ";".join(str(x) for x in report.trial_successes),
    ]
    meta = {"thresholds": ";".join(f"{t:.17g}" for t in report.thresholds)}
    return render_csv("simulate", header, [row], meta)


def cmd_validate(config: RunConfig) -> Tuple[str, int]:
    """Rendered report and exit code (0 clean, 2 discrepancies)."""
    state = asyncio.run(ValidationWorkflow().run(config))
    if state.status == RunStatus.FAILED or state.report is None:
        raise UsageError(state.error_message or "validation produced no report")
    report = state.report
    exit_code = EXIT_OK if report.ok else EXIT_DISCREPANCY
    if config.output.format is OutputFormat.JSON:
        payload = {**report.model_dump(mode="json"), "ok": report.ok}
        return render_json("validate", "report", payload), exit_code
    meta = {
        "code": report.code,
        "trials": report.trials,
        "seed": report.seed,
        "in_region": report.in_region,
        "decoded_in_region": report.decoded_in_region,
        "decoded_outside_region": report.decoded_outside_region,
        "discrepancies": len(report.discrepancies),
    }
    header = ["eps", "tau", "in_region", "decoded", "correct", "discrepancy"]
    rows = [[d.eps, d.tau, d.in_region, d.decoded, d.correct, d.discrepancy] for d in report.discrepancies]
    return render_csv("validate", header, rows, meta), exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"mtee-lab: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        config = resolve_config(args)
        exit_code = EXIT_OK
        if args.command == "simulate":
            text = cmd_simulate(config)
        elif args.command == "validate":
            text, exit_code = cmd_validate(config)
        else:
            command = {"thresholds": cmd_thresholds, "tangent": cmd_tangent, "analyze": cmd_analyze}[args.command]
            text = command(config).render(config.output.format)
    except (MteeError, ValidationError, ValueError) as e:
        print(f"mtee-lab: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    emit(text, config.output.path)
    return exit_code
