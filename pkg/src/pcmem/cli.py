"""Command-line front end.

Subcommands: run-fscl, program-curve, energy-report, dump-state. Exit codes:
0 success, 2 configuration/input validation error, 1 runtime error. All
outputs (CSV/SVG/text) are deterministic for identical config + seeds.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig, load_config, resolved_text
from .crossbar import save_snapshot
from .device import conductance_curve, write_curve_csv
from .energy import protocol_energy_report, report_text, write_report_csv
from .errors import (
    ConfigInvalid,
    DimensionMismatch,
    ParseError,
    PcmemError,
    RangeViolation,
)
from .memory import save_allocation
from .protocol import average_results, run_protocol, write_results_csv
from .svgplot import line_plot
from .workload import load_embeddings


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML config file")
    common.add_argument("--out-dir", metavar="DIR", help="override config out_dir")
    common.add_argument(
        "--seed", type=int, metavar="N", help="run a single seed, overriding config seeds"
    )
    common.add_argument(
        "--dry-run",
        action="store_true",
        help="validate config, print resolved parameters, run nothing",
    )
    parser = argparse.ArgumentParser(
        prog="pcmem",
        description="PCM-crossbar explicit-memory simulator for few-shot "
        "class-incremental learning",
    )
    parser.add_argument("--version", action="version", version=f"pcmem {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser(
        "run-fscl", parents=[common], help="run the session protocol over EM and oracle"
    )
    sub.add_parser(
        "program-curve", parents=[common], help="characterize the device ensemble curve"
    )
    sub.add_parser(
        "energy-report", parents=[common], help="emit the analytic energy/latency report"
    )
    dump = sub.add_parser(
        "dump-state", parents=[common], help="snapshot crossbar state mid-protocol"
    )
    dump.add_argument(
        "--after-session",
        type=int,
        required=True,
        metavar="K",
        help="run through session K (1-based) and dump the array state",
    )
    return parser


def _load(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.out_dir:
        cfg.out_dir = args.out_dir
    if args.seed is not None:
        cfg.seeds = (args.seed,)
    return cfg


def _resolve_workload(cfg: RunConfig):
    """Synthetic params, or the validated embedding dataset if configured."""
    if cfg.embeddings is None:
        return cfg.workload
    try:
        return load_embeddings(cfg.embeddings)
    except (ParseError, RangeViolation, DimensionMismatch) as exc:
        raise ConfigInvalid(str(exc)) from exc


def _cmd_run_fscl(cfg: RunConfig, out: Path) -> int:
    workload = _resolve_workload(cfg)
    per_seed = []
    for seed in cfg.seeds:
        rng = np.random.default_rng(seed)
        results = run_protocol(
            cfg.protocol, workload, cfg.device, cfg.adc, rng=rng, cols=cfg.cols
        )
        write_results_csv(results, out / f"results_seed{seed}.csv")
        per_seed.append(results)
    mean = average_results(per_seed)
    write_results_csv(mean, out / "results_mean.csv")
    sessions = [r.session_index for r in mean]
    if len(per_seed) > 1:
        err_imc = [
            float(np.std([run[k].accuracy_imc for run in per_seed]))
            for k in range(len(mean))
        ]
        err_orc = [
            float(np.std([run[k].accuracy_oracle for run in per_seed]))
            for k in range(len(mean))
        ]
    else:
        err_imc = err_orc = None
    line_plot(
        out / "accuracy.svg",
        sessions,
        {
            "IMC": ([r.accuracy_imc for r in mean], err_imc),
            "oracle": ([r.accuracy_oracle for r in mean], err_orc),
        },
        title="classification accuracy vs. session",
        xlabel="session",
        ylabel="accuracy",
    )
    worst = max(r.degradation for r in mean)
    print(
        f"run-fscl: {len(cfg.seeds)} seed(s), {len(mean)} sessions, "
        f"final mean accuracy imc={mean[-1].accuracy_imc:.4f} "
        f"oracle={mean[-1].accuracy_oracle:.4f}, worst mean degradation={worst:.4f}"
    )
    print(f"wrote {out / 'results_mean.csv'}")
    return 0


def _cmd_program_curve(cfg: RunConfig, out: Path) -> int:
    rng = np.random.default_rng(cfg.seeds[0])
    table = conductance_curve(cfg.device, cfg.curve.n_devices, cfg.curve.n_pulses, rng)
    write_curve_csv(table, out / "curve.csv")
    line_plot(
        out / "curve.svg",
        table[:, 0],
        {"mean conductance": (table[:, 1], table[:, 2])},
        title=f"conductance vs. SET pulses ({cfg.curve.n_devices} devices)",
        xlabel="SET pulse index",
        ylabel="normalized conductance",
    )
    print(f"program-curve: {table.shape[0]} points over {cfg.curve.n_devices} devices")
    print(f"wrote {out / 'curve.csv'}")
    return 0


def _cmd_energy_report(cfg: RunConfig, out: Path) -> int:
    d = cfg.workload.d
    report = protocol_energy_report(cfg.protocol, cfg.energy, d)
    text = report_text(report, cfg.energy)
    (out / "energy.txt").write_text(text)
    write_report_csv(report, out / "energy.csv")
    sys.stdout.write(text)
    print(f"wrote {out / 'energy.txt'}")
    return 0


def _cmd_dump_state(cfg: RunConfig, out: Path, after_session: int) -> int:
    if not 1 <= after_session <= cfg.protocol.n_sessions:
        raise ConfigInvalid(
            f"--after-session must lie in [1, {cfg.protocol.n_sessions}], "
            f"got {after_session}"
        )
    workload = _resolve_workload(cfg)
    rng = np.random.default_rng(cfg.seeds[0])
    _, em, _ = run_protocol(
        cfg.protocol,
        workload,
        cfg.device,
        cfg.adc,
        rng=rng,
        cols=cfg.cols,
        return_state=True,
        through_session=after_session,
    )
    save_snapshot(em.array, out / f"state_after_s{after_session}.csv")
    save_allocation(em, out / f"allocation_after_s{after_session}.csv")
    print(
        f"dump-state: session {after_session}, {em.next_free} programmed columns, "
        f"{em.array.cols - em.next_free} columns at reset"
    )
    print(f"wrote {out / f'state_after_s{after_session}.csv'}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load(args)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.dry_run:
        sys.stdout.write(resolved_text(cfg))
        print("dry-run: configuration valid, no simulation performed")
        return 0
    out = Path(cfg.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "run-fscl":
            return _cmd_run_fscl(cfg, out)
        if args.command == "program-curve":
            return _cmd_program_curve(cfg, out)
        if args.command == "energy-report":
            return _cmd_energy_report(cfg, out)
        return _cmd_dump_state(cfg, out, args.after_session)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, PcmemError) as exc:
        kind = "input error" if isinstance(exc, OSError) else "runtime error"
        code = 2 if isinstance(exc, OSError) else 1
        print(f"{kind}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
