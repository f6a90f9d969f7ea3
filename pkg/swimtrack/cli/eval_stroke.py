#!/usr/bin/env python3

from swimtrack.cli import EPILOG, main_wrapper
from swimtrack.codetools import InvalidConfigError, info
from swimtrack import codetools, formats, metrics
import argparse
import textwrap


def parse_args(argv=None):
    """Parse command-line arguments"""
    prog = 'swimtrack-eval-stroke'

    parser = argparse.ArgumentParser(
        prog=prog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=textwrap.dedent("""
            Score predicted stroke tops and s-values against ground truth:
            F1 (a top is correct within --tol frames of a true top), ASD and
            SDSTD (distance to the nearest true top) and delta (mean absolute
            s-value difference).

            --pred and --truth accept a `strokes` output, a plain JSON list
            or a simulation truth_peaks.json (pick the lane with --lane).

            Examples:

                {prog} \\
                    --pred lane_3.json \\
                    --truth race/truth_peaks.json --lane 3 \\
                    --svalues-pred race/svalues/lane_3.csv \\
                    --svalues-truth race/svalues_truth/lane_3.csv \\
                    --out stroke.json
        """).format(prog=prog),
        epilog=EPILOG,
    )

    parser.add_argument(
        '--pred',
        required=True,
        help='JSON with the predicted stroke tops')
    parser.add_argument(
        '--truth',
        required=True,
        help='JSON with the true stroke tops')
    parser.add_argument(
        '--lane',
        type=int,
        help='Lane to read from a multi-lane truth file')
    parser.add_argument(
        '--svalues-pred',
        help='Predicted s-value CSV')
    parser.add_argument(
        '--svalues-truth',
        help='Ground truth s-value CSV')
    parser.add_argument(
        '--fps',
        type=float,
        default=30.0,
        help='Frame rate of the s-value files (default: %(default)s)')
    parser.add_argument(
        '--tol',
        type=float,
        default=metrics.DEFAULT_PEAK_TOL,
        help='Frames a correct top may be off by (default: %(default)s)')
    parser.add_argument(
        '--out',
        required=True,
        help='JSON report to write')
    parser.add_argument(
        '-d', '--debug',
        action='count',
        default=codetools.debug_lvl_from_env(),
        help='Debug mode (can specify several times)')
    parser.add_argument('-v', '--version', action=codetools.ScmVersionAction)

    return parser.parse_args(argv)


def run(argv=None):
    """Stroke report"""
    args = parse_args(argv)

    codetools.setup_logging(args.debug)

    pred = formats.read_peaks(args.pred)
    truth = formats.read_peaks(args.truth, lane=args.lane)

    if bool(args.svalues_pred) != bool(args.svalues_truth):
        raise InvalidConfigError(textwrap.dedent("""\
            --svalues-pred and --svalues-truth go together
              --svalues-pred: {p}
              --svalues-truth: {t}\
            """).format(p=args.svalues_pred, t=args.svalues_truth))

    s_pred = s_truth = None
    if args.svalues_pred:
        s_pred = formats.read_svalues(args.svalues_pred, args.fps)
        s_truth = formats.read_svalues(args.svalues_truth, args.fps)

    report = metrics.stroke_report(pred, truth, s_pred, s_truth,
                                   tol=args.tol)
    formats.write_json(args.out, report)

    info("F1 {f:.3f} ASD {a:.2f} -> {p}".format(
        f=report.f1, a=report.asd, p=args.out))


def main(argv=None):
    main_wrapper(run, argv)


if __name__ == '__main__':
    main()
