#!/usr/bin/env python3
"""Headline experiment: full-size protocol, clean vs. noisy devices.

Prints the analytic energy/latency numbers, then runs the 60-base + 8x5-way
5-shot protocol on the synthetic workload twice — once with ideal devices and
once with moderate programming/read noise — and tabulates per-session
accuracy against the exact digital baseline. Outputs land in --out-dir as
CSVs plus an accuracy-vs-session SVG.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from pcmem.device import DeviceModelParams
from pcmem.energy import (
    EnergyTimeParams,
    class_update_cost,
    evaluation_cost,
    in_situ_vs_scratch,
    pulse_energy,
    sessions_update_cost,
    si,
)
from pcmem.protocol import ProtocolSpec, average_results, run_protocol, write_results_csv
from pcmem.svgplot import line_plot
from pcmem.workload import SyntheticWorkloadParams


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="out/experiment", help="output directory")
    ap.add_argument("--seeds", type=int, default=5, help="number of seeds to average")
    ap.add_argument(
        "--queries", type=int, default=100, help="queries per class per session"
    )
    ap.add_argument("--d", type=int, default=256, help="embedding dimension")
    ap.add_argument(
        "--quick", action="store_true", help="3 seeds, 20 queries/class (smoke run)"
    )
    return ap.parse_args()


def print_energy_summary(d):
    p = EnergyTimeParams()
    t_cls, e_cls = class_update_cost(d, p)
    t_sess, e_sess = sessions_update_cost(25, 5, d, p)
    t_eval, e_eval = evaluation_cost(10_000, p)
    cmp_ = in_situ_vs_scratch(p, d)
    print("analytic energy/latency model")
    print(f"  SET pulse energy:            {si(pulse_energy(p), 'J')}")
    print(f"  one class update (d={d}):   {si(t_cls, 's')}, {si(e_cls, 'J')}")
    print(f"  5-way 5-shot session:        {si(t_sess, 's')}, {si(e_sess, 'J')}")
    print(f"  10,000-query evaluation:     {si(t_eval, 's')}, {si(e_eval, 'J')}")
    print(
        f"  in-situ vs. reprogram/class:  {si(cmp_.in_situ_column_j, 'J')} vs. "
        f"{si(cmp_.scratch_column_j, 'J')} ({cmp_.ratio:g}x)"
    )
    print()


def run_condition(label, spec, workload, device, seeds):
    t0 = time.perf_counter()
    per_seed = [
        run_protocol(spec, workload, device, rng=np.random.default_rng(seed))
        for seed in range(seeds)
    ]
    elapsed = time.perf_counter() - t0
    mean = average_results(per_seed)
    print(f"{label}: {seeds} seed(s) in {elapsed:.1f} s")
    return mean


def main():
    args = parse_args()
    if args.quick:
        args.seeds, args.queries = 3, 20
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    print_energy_summary(args.d)

    spec = ProtocolSpec(queries_per_class=args.queries)
    workload = SyntheticWorkloadParams(d=args.d, flip_prob=0.1, query_noise=0.4)
    clean = run_condition(
        "ideal devices", spec, workload, DeviceModelParams(), args.seeds
    )
    noisy = run_condition(
        "noisy devices (sigma_prog=0.05, sigma_read=0.02)",
        spec,
        workload,
        DeviceModelParams(sigma_prog=0.05, sigma_read=0.02),
        args.seeds,
    )

    print()
    print("session  classes  acc(ideal)  acc(noisy)  oracle   degradation")
    for c, n in zip(clean, noisy):
        print(
            f"{c.session_index:>7}  {c.classes_seen:>7}  {c.accuracy_imc:>10.4f}  "
            f"{n.accuracy_imc:>10.4f}  {n.accuracy_oracle:>6.4f}  {n.degradation:>11.4f}"
        )
    worst = max(r.degradation for r in noisy)
    print(f"\nworst mean degradation vs. oracle (noisy): {worst * 100:.2f} pp")

    write_results_csv(clean, out / "results_ideal.csv")
    write_results_csv(noisy, out / "results_noisy.csv")
    sessions = [r.session_index for r in clean]
    line_plot(
        out / "accuracy.svg",
        sessions,
        {
            "ideal devices": ([r.accuracy_imc for r in clean], None),
            "noisy devices": ([r.accuracy_imc for r in noisy], None),
            "oracle": ([r.accuracy_oracle for r in noisy], None),
        },
        title=f"accuracy vs. session (d={args.d}, {args.seeds} seeds)",
        xlabel="session",
        ylabel="accuracy",
    )
    print(f"wrote {out / 'results_ideal.csv'}, {out / 'results_noisy.csv'}, "
          f"{out / 'accuracy.svg'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
