#!/usr/bin/env python3

from swimtrack.cli import EPILOG, main_wrapper
from swimtrack.cli.strokes import strokes_to_dict
from swimtrack.cli.track import load_config, write_crops
from swimtrack.codetools import SwimtrackError, debug, error, info
from swimtrack import codetools, formats, metrics, stroke, tracker
import argparse
import os
import textwrap


def parse_args(argv=None):
    """Parse command-line arguments"""
    prog = 'swimtrack-pipeline'

    parser = argparse.ArgumentParser(
        prog=prog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=textwrap.dedent("""
            Track detections, then turn the s-values of every track into
            stroke tops and stroke rates, and optionally score both against
            ground truth.

            The s-values of a track are read from --svalues-dir as
            track_<id>.csv or, failing that, lane_<lane>.csv, cut to the
            frames the track covers. A track without s-values is listed with
            status "no-svalues".

            Files written to --out-dir:

                tracks.csv                 tracker output
                crops/track_<id>.csv       sub-video crop rectangles
                strokes/track_<id>.json    stroke tops and rates
                stroke_reports/track_<id>.json  with --truth-peaks
                mot_report.json            with --gt
                summary.json

            Examples:

                {prog} \\
                    --detections race/detections.csv \\
                    --svalues-dir race/svalues \\
                    --fps 30 \\
                    --out-dir out \\
                    --gt race/gt_tracks.csv \\
                    --truth-peaks race/truth_peaks.json \\
                    --svalues-truth-dir race/svalues_truth

            Errors of single tracks are collected and reported together at
            the end unless --fail-fast is given; the exit code is the highest
            code among them.
        """).format(prog=prog),
        epilog=EPILOG,
    )

    parser.add_argument(
        '--detections',
        required=True,
        help='Detection CSV')
    parser.add_argument(
        '--svalues-dir',
        required=True,
        help='Directory of s-value CSVs')
    parser.add_argument(
        '--fps',
        type=float,
        required=True,
        help='Frame rate of the video')
    parser.add_argument(
        '--out-dir',
        required=True,
        help='Directory to write results to')
    parser.add_argument(
        '--config',
        help='JSON tracker config')
    parser.add_argument(
        '--gt',
        help='Ground truth track CSV; adds a tracking report')
    parser.add_argument(
        '--truth-peaks',
        help='truth_peaks.json; adds a stroke report per laned track')
    parser.add_argument(
        '--svalues-truth-dir',
        help='Directory of ground truth lane_<lane>.csv s-values')
    parser.add_argument(
        '--pad',
        type=float,
        default=0.0,
        help='Pixels added around every crop rectangle (default: 0)')
    parser.add_argument(
        '--fail-fast',
        action='store_true',
        help='Stop at the first failing track')
    parser.add_argument(
        '-d', '--debug',
        action='count',
        default=codetools.debug_lvl_from_env(),
        help='Debug mode (can specify several times)')
    parser.add_argument('-v', '--version', action=codetools.ScmVersionAction)

    return parser.parse_args(argv)


def find_svalues(svalues_dir, track):
    """Path of the s-value file of `track`, or `None`."""
    names = ['track_{i}.csv'.format(i=track.track_id)]
    if track.lane is not None:
        names.append('lane_{k}.csv'.format(k=track.lane))
    for name in names:
        path = os.path.join(svalues_dir, name)
        if os.path.isfile(path):
            return path
    return None


def process_track(track, args, truth_peaks=None):
    """Stroke analysis of one track.

    Returns
    -------
    entry: dict
        Summary line of the track.
    """
    entry = {
        'track_id': track.track_id,
        'lane': track.lane,
        'first_frame': track.first_frame,
        'last_frame': track.last_frame,
    }

    path = find_svalues(args.svalues_dir, track)
    if path is None:
        debug("track {t}: no s-values".format(t=track.track_id))
        entry['status'] = 'no-svalues'
        return entry

    series = formats.read_svalues(path, args.fps).between(
        track.first_frame, track.last_frame, track_id=track.track_id)
    strokes = stroke.process_series(series, stroke.FilterSpec(fps=args.fps))
    formats.write_json(
        os.path.join(args.out_dir, 'strokes',
                     'track_{i}.json'.format(i=track.track_id)),
        strokes_to_dict(strokes))
    entry.update(status='ok', num_peaks=len(strokes.peak_positions),
                 mean_spm=strokes.mean_rate)

    if truth_peaks is not None and track.lane is not None:
        lane_peaks = [p for p in truth_peaks.get(str(track.lane), [])
                      if track.first_frame <= p <= track.last_frame]

        s_truth = None
        if args.svalues_truth_dir:
            truth_path = os.path.join(args.svalues_truth_dir,
                                      'lane_{k}.csv'.format(k=track.lane))
            if os.path.isfile(truth_path):
                s_truth = formats.read_svalues(truth_path, args.fps)

        report = metrics.stroke_report(
            strokes.peak_positions, lane_peaks,
            series if s_truth is not None else None, s_truth)
        formats.write_json(
            os.path.join(args.out_dir, 'stroke_reports',
                         'track_{i}.json'.format(i=track.track_id)),
            report)
        entry['stroke_report'] = report._asdict()

    return entry


def run(argv=None):
    """Track, analyse strokes and report"""
    args = parse_args(argv)

    codetools.setup_logging(args.debug)

    config = load_config(args.config)
    truth_peaks = None
    if args.truth_peaks:
        data = formats.read_json(args.truth_peaks)
        if not isinstance(data, dict) or 'lanes' not in data:
            raise formats.FormatError(
                "{p} has no 'lanes' object".format(p=args.truth_peaks))
        truth_peaks = data['lanes']

    detections = formats.read_detections(args.detections)
    tracks = tracker.track_detections(detections, config,
                                      progress=args.debug > 0)
    formats.write_tracks(os.path.join(args.out_dir, 'tracks.csv'), tracks)
    write_crops(tracks, os.path.join(args.out_dir, 'crops'), pad=args.pad)

    summary = {'fps': args.fps, 'num_tracks': len(tracks), 'tracks': []}
    problems = []
    for t in tracks:
        try:
            entry = process_track(t, args, truth_peaks)
        except SwimtrackError as e:
            if args.fail_fast:
                raise
            error("track {i}: {e}".format(i=t.track_id, e=e))
            problems.append(e)
            entry = {'track_id': t.track_id, 'lane': t.lane,
                     'first_frame': t.first_frame,
                     'last_frame': t.last_frame,
                     'status': 'error', 'error': str(e)}
        summary['tracks'].append(entry)

    if args.gt:
        ground_truth = formats.read_tracks(args.gt, source='ground_truth')
        report = metrics.mot_report(tracks, ground_truth)
        formats.write_json(os.path.join(args.out_dir, 'mot_report.json'),
                           report)
        summary['mot'] = report._asdict()

    formats.write_json(os.path.join(args.out_dir, 'summary.json'), summary)
    info("wrote summary of {n} track(s) to {d}".format(
        n=len(tracks), d=args.out_dir))

    if problems:
        msg = "{n} track(s) have errors".format(n=len(problems))
        raise codetools.DogpileError(problems, msg)


def main(argv=None):
    main_wrapper(run, argv)


if __name__ == '__main__':
    main()
