#!/usr/bin/env python3
"""Regenerate the four reference figure datasets and their SVG plots.

Everything goes through the installed command-line interface, so the files
written here are byte-identical to what a user would get by running the
printed commands by hand.  Outputs land in --outdir (default: figures/):

  fig1  vacuum cavities, moving atoms: observables over one revival
  fig2  thermal occupation sweep (kbar = 0.1, 0.5, 5) on a common window
  fig3  detuning sweep (delta = 0.1, 1, 5) over a long window
  fig4  entanglement-purity-energy trajectory and its two projections
  scan  summary table over the default comparison grid
"""

import argparse
import pathlib
import sys

from thermaljc.cli import main as cli_main

BASE = ["--g", "1", "--no-timestamp"]  # data subcommands only; plot takes neither


def run(label: str, args: list[str]) -> None:
    args = args + (BASE if args[0] != "plot" else [])
    print(f"[{label}] thermaljc {' '.join(args)}")
    code = cli_main(args)
    if code != 0:
        sys.exit(f"{label}: command failed with exit code {code}")


def plot(label: str, source: pathlib.Path, output: pathlib.Path,
         extra: list[str]) -> None:
    run(label, ["plot", "--input", str(source), "--output", str(output), *extra])


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", type=pathlib.Path,
                        default=pathlib.Path("figures"))
    parser.add_argument("--steps", type=int, default=2000,
                        help="grid intervals per series")
    opts = parser.parse_args(argv)
    out = opts.outdir
    out.mkdir(parents=True, exist_ok=True)
    steps = str(opts.steps)

    fig1 = out / "fig1_vacuum.csv"
    run("fig1", ["timeseries", "--p", "1", "--kbar", "0", "--delta", "0",
                 "--gt-max", "7", "--steps", steps, "--output", str(fig1)])
    plot("fig1", fig1, out / "fig1_vacuum.svg",
         ["--columns", "concurrence,purity,energy",
          "--title", "vacuum cavities, p = 1"])

    for kbar in ("0.1", "0.5", "5"):
        tag = kbar.replace(".", "p")
        path = out / f"fig2_kbar{tag}.csv"
        run("fig2", ["timeseries", "--p", "1", "--kbar", kbar, "--delta", "0",
                     "--gt-max", "25", "--steps", steps, "--output", str(path)])
        plot("fig2", path, out / f"fig2_kbar{tag}.svg",
             ["--columns", "concurrence,purity,energy",
              "--title", f"thermal cavities, kbar = {kbar}"])

    for delta in ("0.1", "1", "5"):
        tag = delta.replace(".", "p")
        path = out / f"fig3_delta{tag}.csv"
        run("fig3", ["timeseries", "--p", "1", "--kbar", "0.1", "--delta", delta,
                     "--gt-max", "60", "--steps", str(max(opts.steps, 4800)),
                     "--output", str(path)])
        plot("fig3", path, out / f"fig3_delta{tag}.svg",
             ["--columns", "concurrence", "--title", f"detuned, delta = {delta}"])

    fig4 = out / "fig4_epe.csv"
    run("fig4", ["epe", "--p", "1", "--kbar", "0.1", "--delta", "0",
                 "--gt-max", "25", "--steps", steps, "--output", str(fig4)])
    plot("fig4", fig4, out / "fig4_epe_c_vs_p.svg",
         ["--projection", "c-vs-p", "--title", "concurrence vs purity"])
    plot("fig4", fig4, out / "fig4_epe_c_vs_u.svg",
         ["--projection", "c-vs-u", "--title", "concurrence vs energy"])

    run("scan", ["scan", "--p", "1,4", "--kbar", "0.1,0.5,5", "--delta", "0",
                 "--gt-max", "25", "--steps", steps,
                 "--output", str(out / "scan_summary.csv")])

    print(f"wrote {len(list(out.iterdir()))} files to {out}/")


if __name__ == "__main__":
    main()
