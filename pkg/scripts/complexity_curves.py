#!/usr/bin/env python3
"""Sample-complexity curves for both estimators.

log10 of the guaranteed sample size over a precision sweep at fixed
failure probability and a failure-probability sweep at fixed precision.
Emits <output>_complexity.csv and <output>_report.json.
"""

import argparse

from fisherinfo import ExperimentConfig, ExperimentKind, gaussian_channel
from fisherinfo.experiments import run_complexity


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--snr", type=float, default=1.0)
    parser.add_argument("--eps-fixed", type=float, default=0.5)
    parser.add_argument("--perr-fixed", type=float, default=0.2)
    parser.add_argument("--output", default="complexity_curves")
    args = parser.parse_args()

    config = ExperimentConfig(
        kind=ExperimentKind.COMPLEXITY,
        channel=gaussian_channel(args.snr),
        eps_fixed=args.eps_fixed,
        perr_fixed=args.perr_fixed,
        output_path=args.output,
    )
    report = run_complexity(config)
    paths = report.write(config.output_path)
    for sweep, eps, perr, plug, clip in report.series.rows:
        label = f"eps={eps:g}" if sweep == 0 else f"p_err={perr:g}"
        print(f"{label}: log10 n = {plug:.2f} (plug-in), {clip:.2f} (clipped)")
    print("wrote " + ", ".join(map(str, paths)))


if __name__ == "__main__":
    main()
