#!/usr/bin/env python3

from swimtrack.cli import EPILOG, main_wrapper
from swimtrack.codetools import info
from swimtrack import codetools, formats, tracker
import argparse
import os
import textwrap


def parse_args(argv=None):
    """Parse command-line arguments"""
    prog = 'swimtrack-track'

    parser = argparse.ArgumentParser(
        prog=prog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=textwrap.dedent("""
            Run the SORT tracker over a detection file and write one row per
            reported box, stamped with its track id.

            Examples:

                {prog} --detections race/detections.csv --out tracks.csv

                # also write the crop rectangles of every sub-video
                {prog} \\
                    --detections race/detections.csv \\
                    --config tracker.json \\
                    --out tracks.csv \\
                    --crops-dir crops \\
                    --pad 10 \\
                    --bounds 1920 1080

            The tracker config is a JSON object with any of iou_min, max_age,
            min_hits, persist_confirmed and a nested kalman object (p0_scale,
            q_scale, r_scale, measurement).
        """).format(prog=prog),
        epilog=EPILOG,
    )

    parser.add_argument(
        '--detections',
        required=True,
        help='Detection CSV, grouped by increasing frame')
    parser.add_argument(
        '--config',
        help='JSON tracker config')
    parser.add_argument(
        '--out',
        required=True,
        help='Track CSV to write')
    parser.add_argument(
        '--crops-dir',
        help='Write per-track crop rectangles as track_<id>.csv here')
    parser.add_argument(
        '--pad',
        type=float,
        default=0.0,
        help='Pixels added around every crop rectangle (default: 0)')
    parser.add_argument(
        '--bounds',
        nargs=2,
        type=float,
        metavar=('WIDTH', 'HEIGHT'),
        help='Clamp crop rectangles to this frame size')
    parser.add_argument(
        '-d', '--debug',
        action='count',
        default=codetools.debug_lvl_from_env(),
        help='Debug mode (can specify several times)')
    parser.add_argument('-v', '--version', action=codetools.ScmVersionAction)

    return parser.parse_args(argv)


def load_config(path):
    if path is None:
        return tracker.TrackerConfig()
    return tracker.TrackerConfig.from_dict(formats.read_config(path))


def write_crops(tracks, crops_dir, pad=0.0, bounds=None):
    """Write `crop_rects()` of every track to `crops_dir/track_<id>.csv`."""
    for t in tracks:
        rects = tracker.crop_rects(t, pad=pad, bounds=bounds)
        crop = t._replace(entries=tuple(rects))
        path = os.path.join(crops_dir, 'track_{i}.csv'.format(i=t.track_id))
        formats.write_tracks(path, [crop])


def run(argv=None):
    """Track detections"""
    args = parse_args(argv)

    codetools.setup_logging(args.debug)

    config = load_config(args.config)
    detections = formats.read_detections(args.detections)
    tracks = tracker.track_detections(detections, config,
                                      progress=args.debug > 0)
    formats.write_tracks(args.out, tracks)

    if args.crops_dir:
        write_crops(tracks, args.crops_dir, pad=args.pad, bounds=args.bounds)

    info("wrote {n} track(s) to {p}".format(n=len(tracks), p=args.out))


def main(argv=None):
    main_wrapper(run, argv)


if __name__ == '__main__':
    main()
