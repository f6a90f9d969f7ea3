#!/usr/bin/env python3

from swimtrack.cli import EPILOG, main_wrapper
from swimtrack.codetools import info
from swimtrack import codetools, formats, metrics
import argparse
import textwrap


def parse_args(argv=None):
    """Parse command-line arguments"""
    prog = 'swimtrack-eval-mot'

    parser = argparse.ArgumentParser(
        prog=prog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=textwrap.dedent("""
            Score tracker output against ground truth tracks: MOTA, MOTP,
            IDF1, IDP, IDR, the GT / MT / PT / ML trajectory counts and the
            FP / FN / IDSW event counts.

            Examples:

                {prog} --gt race/gt_tracks.csv --hyp tracks.csv \\
                    --out mot.json

                # ground truth annotated every few frames, one row per lane
                {prog} --gt sparse.csv --interpolate --hyp tracks.csv \\
                    --out mot.json
        """).format(prog=prog),
        epilog=EPILOG,
    )

    parser.add_argument(
        '--gt',
        required=True,
        help='Ground truth track CSV')
    parser.add_argument(
        '--hyp',
        required=True,
        help='Tracker output CSV')
    parser.add_argument(
        '--out',
        required=True,
        help='JSON report to write')
    parser.add_argument(
        '--iou',
        type=float,
        default=metrics.DEFAULT_IOU_MATCH,
        help='IoU a match needs (default: %(default)s)')
    parser.add_argument(
        '--interpolate',
        action='store_true',
        help='Treat --gt as sparse lane annotations and interpolate them'
             ' through all frames first')
    parser.add_argument(
        '-d', '--debug',
        action='count',
        default=codetools.debug_lvl_from_env(),
        help='Debug mode (can specify several times)')
    parser.add_argument('-v', '--version', action=codetools.ScmVersionAction)

    return parser.parse_args(argv)


def load_ground_truth(path, interpolate=False):
    if interpolate:
        return metrics.interpolate_ground_truth(formats.read_annotations(path))
    return formats.read_tracks(path, source='ground_truth')


def run(argv=None):
    """Tracking report"""
    args = parse_args(argv)

    codetools.setup_logging(args.debug)

    ground_truth = load_ground_truth(args.gt, args.interpolate)
    hypotheses = formats.read_tracks(args.hyp)
    report = metrics.mot_report(hypotheses, ground_truth,
                                iou_match=args.iou)
    formats.write_json(args.out, report)

    info("wrote tracking report to {p}".format(p=args.out))


def main(argv=None):
    main_wrapper(run, argv)


if __name__ == '__main__':
    main()
