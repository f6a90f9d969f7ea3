#!/usr/bin/env python3

from swimtrack.cli import EPILOG, main_wrapper
from swimtrack.codetools import info
from swimtrack import codetools, formats, metrics
import argparse
import textwrap


def parse_args(argv=None):
    """Parse command-line arguments"""
    prog = 'swimtrack-eval-det'

    parser = argparse.ArgumentParser(
        prog=prog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=textwrap.dedent("""
            Average precision of detector output per class, plus the
            swimming / not swimming split and the mean over all classes.

            Examples:

                {prog} --gt annotations.csv --det race/detections.csv \\
                    --out det.json
        """).format(prog=prog),
        epilog=EPILOG,
    )

    parser.add_argument(
        '--gt',
        required=True,
        help='Annotated boxes, detection CSV layout')
    parser.add_argument(
        '--det',
        required=True,
        help='Detector output CSV')
    parser.add_argument(
        '--iou',
        type=float,
        default=metrics.DEFAULT_AP_IOU,
        help='IoU a true positive needs (default: %(default)s)')
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
    """Detection report"""
    args = parse_args(argv)

    codetools.setup_logging(args.debug)

    annotations = formats.read_detections(args.gt)
    detections = formats.read_detections(args.det)
    report = metrics.average_precision(detections, annotations,
                                       iou_threshold=args.iou)
    formats.write_json(args.out, report)

    info("wrote detection report to {p}".format(p=args.out))


def main(argv=None):
    main_wrapper(run, argv)


if __name__ == '__main__':
    main()
