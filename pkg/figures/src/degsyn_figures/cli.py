"""Standalone figure scripts.

    degsyn-figures cutoff-bars  --h2 h2-report.json --hinf hinf-report.json -o fig3.png
    degsyn-figures dcgain-bars  --h2 h2-report.json --hinf hinf-report.json -o fig4.png
    degsyn-figures noise-bars   --h2 h2-report.json --hinf hinf-report.json -o fig5.png
    degsyn-figures time-response --open-loop ol.csv --h2 h2.csv --hinf hinf.csv -o fig6.png

Either report/trajectory may be omitted (single-series mode).  Exit code 0
on success, 1 on schema/input errors.
"""

from __future__ import annotations

import argparse
import sys

from .inputs import SchemaError, load_report, load_trajectory
from .plots import BAR_KINDS, FigureSpec, plot_degradation_bars, plot_time_response, save_figure


def _bar_command(kind: str, args) -> int:
    named = [(p.replace("hinf", "hinf"), path)
             for p, path in (("h2", args.h2), ("hinf", args.hinf)) if path is not None]
    if not named:
        print("degsyn-figures: provide at least one of --h2 / --hinf", file=sys.stderr)
        return 1
    log_scale = {"auto": None, "log": True, "linear": False}[args.scale]
    spec = FigureSpec(kind=kind, inputs=tuple(path for _, path in named),
                      output=args.output, log_scale=log_scale)
    reports = [load_report(path) for path in spec.inputs]
    fig = plot_degradation_bars(reports, spec.kind, log_scale=spec.log_scale)
    save_figure(fig, spec.output, {rep.norm_kind: rep.checksum for rep in reports})
    print(f"wrote {spec.output}")
    return 0


def _time_response_command(args) -> int:
    named = [(label, path)
             for label, path in (("open-loop", args.open_loop), ("h2", args.h2), ("hinf", args.hinf))
             if path is not None]
    if not named:
        print("degsyn-figures: provide at least one trajectory CSV", file=sys.stderr)
        return 1
    spec = FigureSpec(kind="time-response", inputs=tuple(p for _, p in named), output=args.output)
    trajectories = {label: load_trajectory(path) for label, path in named}
    fig, rms = plot_time_response(trajectories)
    save_figure(fig, spec.output, {k: t.checksum for k, t in trajectories.items()})
    print(f"wrote {spec.output}  " + "  ".join(f"{k} RMS={v:.4g}" for k, v in rms.items()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="degsyn-figures")
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in BAR_KINDS:
        p = sub.add_parser(kind, help=f"grouped {kind} from report files")
        p.add_argument("--h2", help="H2 report JSON")
        p.add_argument("--hinf", help="H-infinity report JSON")
        p.add_argument("--scale", choices=("auto", "log", "linear"), default="auto")
        p.add_argument("-o", "--output", required=True)
        p.set_defaults(kind=kind)
    p = sub.add_parser("time-response", help="overlaid gust responses from trajectory CSVs")
    p.add_argument("--open-loop", dest="open_loop", help="open-loop trajectory CSV")
    p.add_argument("--h2", help="H2 closed-loop trajectory CSV")
    p.add_argument("--hinf", help="H-infinity closed-loop trajectory CSV")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(kind="time-response")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.kind == "time-response":
            return _time_response_command(args)
        return _bar_command(args.kind, args)
    except SchemaError as exc:
        print(f"degsyn-figures: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"degsyn-figures: {exc}", file=sys.stderr)
        return 1


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
