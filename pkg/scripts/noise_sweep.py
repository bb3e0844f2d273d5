#!/usr/bin/env python3
"""Sweep workload difficulty and device noise; plot the accuracy cliff.

The default protocol shape is easy at its nominal operating point (accuracy
stays ~1.0), so this script pushes two knobs until classification genuinely
degrades: the support flip probability (how unlike its class prototype each
training example is) and the query noise level. For each grid point the
final-session accuracy of the PCM path and the exact digital baseline are
averaged over several seeds. The gap between the two curves isolates what
the analog substrate costs on hard workloads.
"""

import argparse
import itertools
import sys
import time
from pathlib import Path

import numpy as np

from pcmem.device import DeviceModelParams
from pcmem.protocol import ProtocolSpec, average_results, run_protocol
from pcmem.svgplot import line_plot
from pcmem.workload import SyntheticWorkloadParams

HEADER = "flip_prob,query_noise,session,classes_seen,acc_imc,acc_oracle,degradation"


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="out/noise_sweep")
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--queries", type=int, default=25, help="queries per class")
    # margins grow with sqrt(d); d=64 puts the accuracy cliff inside the
    # default flip-probability grid instead of past its right edge
    ap.add_argument("--d", type=int, default=64)
    ap.add_argument(
        "--flip-probs", type=float, nargs="+", default=[0.20, 0.30, 0.35, 0.40, 0.45]
    )
    ap.add_argument("--query-noise", type=float, nargs="+", default=[0.8])
    ap.add_argument("--sigma-prog", type=float, default=0.05)
    ap.add_argument("--sigma-read", type=float, default=0.02)
    ap.add_argument("--quick", action="store_true", help="2 seeds, 10 queries/class")
    return ap.parse_args()


def main():
    args = parse_args()
    if args.quick:
        args.seeds, args.queries = 2, 10
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    # flip_prob=0.5 would erase the class signal entirely; the generator
    # rejects it, so cap the sweep just below
    flip_probs = [min(b, 0.49) for b in args.flip_probs]
    spec = ProtocolSpec(queries_per_class=args.queries)
    device = DeviceModelParams(sigma_prog=args.sigma_prog, sigma_read=args.sigma_read)

    rows = []
    final_imc = {}
    final_orc = {}
    for beta, sq in itertools.product(flip_probs, args.query_noise):
        t0 = time.perf_counter()
        workload = SyntheticWorkloadParams(d=args.d, flip_prob=beta, query_noise=sq)
        per_seed = [
            run_protocol(spec, workload, device, rng=np.random.default_rng(seed))
            for seed in range(args.seeds)
        ]
        mean = average_results(per_seed)
        for r in mean:
            rows.append(
                f"{beta:g},{sq:g},{r.session_index},{r.classes_seen},"
                f"{r.accuracy_imc:.10g},{r.accuracy_oracle:.10g},{r.degradation:.10g}"
            )
        final = mean[-1]
        final_imc.setdefault(sq, []).append(final.accuracy_imc)
        final_orc.setdefault(sq, []).append(final.accuracy_oracle)
        print(
            f"flip_prob={beta:.2f} query_noise={sq:.2f}: final acc "
            f"imc={final.accuracy_imc:.4f} oracle={final.accuracy_oracle:.4f} "
            f"gap={final.degradation:+.4f}  ({time.perf_counter() - t0:.1f} s)"
        )

    csv_path = out / "sweep.csv"
    csv_path.write_text(HEADER + "\n" + "\n".join(rows) + "\n")

    series = {}
    for sq in args.query_noise:
        suffix = f" (query_noise={sq:g})" if len(args.query_noise) > 1 else ""
        series[f"PCM path{suffix}"] = (final_imc[sq], None)
        series[f"digital baseline{suffix}"] = (final_orc[sq], None)
    line_plot(
        out / "sweep.svg",
        flip_probs,
        series,
        title=f"final-session accuracy vs. support corruption ({args.seeds} seeds)",
        xlabel="support flip probability",
        ylabel="accuracy",
    )
    print(f"wrote {csv_path} and {out / 'sweep.svg'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
