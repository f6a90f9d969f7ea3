#!/usr/bin/env python3

from swimtrack.cli import EPILOG, main_wrapper
from swimtrack.codetools import info
from swimtrack import codetools, formats, stroke
import argparse
import textwrap


def parse_args(argv=None):
    """Parse command-line arguments"""
    prog = 'swimtrack-strokes'

    parser = argparse.ArgumentParser(
        prog=prog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=textwrap.dedent("""
            Smooth one s-value series, locate the stroke tops and compute the
            stroke rates between them.

            Output JSON:

                {{"track_id": ..., "fps": ..., "peaks": [...],
                  "rates": [{{"frame": ..., "spm": ...}}, ...],
                  "mean_spm": ...}}

            Examples:

                {prog} --svalues race/svalues/lane_3.csv --fps 30 \\
                    --out lane_3.json
        """).format(prog=prog),
        epilog=EPILOG,
    )

    parser.add_argument(
        '--svalues',
        required=True,
        help='S-value CSV of one sub-video')
    parser.add_argument(
        '--fps',
        type=float,
        required=True,
        help='Frame rate of the series')
    parser.add_argument(
        '--out',
        required=True,
        help='JSON file to write')
    parser.add_argument(
        '--order',
        type=int,
        default=8,
        help='Butterworth filter order (default: 8)')
    parser.add_argument(
        '--cutoff',
        type=float,
        default=3.0,
        help='Filter cut-off frequency in Hz (default: 3)')
    parser.add_argument(
        '--track-id',
        type=int,
        help='Track id recorded in the output')
    parser.add_argument(
        '-d', '--debug',
        action='count',
        default=codetools.debug_lvl_from_env(),
        help='Debug mode (can specify several times)')
    parser.add_argument('-v', '--version', action=codetools.ScmVersionAction)

    return parser.parse_args(argv)


def strokes_to_dict(strokes):
    return {
        'track_id': strokes.track_id,
        'fps': strokes.fps,
        'peaks': strokes.peak_positions,
        'rates': [{'frame': f, 'spm': r} for f, r in strokes.rates],
        'mean_spm': strokes.mean_rate,
    }


def run(argv=None):
    """Stroke tops and rates of one series"""
    args = parse_args(argv)

    codetools.setup_logging(args.debug)

    spec = stroke.FilterSpec(order=args.order, cutoff_hz=args.cutoff,
                             fps=args.fps)
    series = formats.read_svalues(args.svalues, args.fps,
                                  track_id=args.track_id)
    strokes = stroke.process_series(series, spec)
    formats.write_json(args.out, strokes_to_dict(strokes))

    info("wrote {n} stroke top(s) to {p}".format(
        n=len(strokes.peak_positions), p=args.out))


def main(argv=None):
    main_wrapper(run, argv)


if __name__ == '__main__':
    main()
