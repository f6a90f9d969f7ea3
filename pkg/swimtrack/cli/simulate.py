#!/usr/bin/env python3

from swimtrack.cli import EPILOG, main_wrapper
from swimtrack.codetools import InvalidConfigError, debug, info
from swimtrack import codetools, formats, simgen
import argparse
import os
import textwrap


def parse_args(argv=None):
    """Parse command-line arguments"""
    prog = 'swimtrack-simulate'

    parser = argparse.ArgumentParser(
        prog=prog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=textwrap.dedent("""
            Simulate a race: ground truth lane tracks, noisy detections,
            per-lane s-value series and the true stroke tops.

            Files written to --out-dir:

                detections.csv            noisy detector output
                gt_tracks.csv             ground truth track per lane
                svalues/lane_<k>.csv      noisy s-values per lane
                svalues_truth/lane_<k>.csv  clean s-values per lane
                truth_peaks.json          true stroke tops per lane
                sim_config.json           the configuration used

            Examples:

                {prog} --out-dir race

                SWIMTRACK_SEED=7 {prog} --config noisy.json --out-dir race

            SWIMTRACK_SEED, when set, replaces the seed of the config.
        """).format(prog=prog),
        epilog=EPILOG,
    )

    parser.add_argument(
        '--config',
        help='JSON simulation config (defaults are used when omitted)')
    parser.add_argument(
        '--out-dir',
        required=True,
        help='Directory to write the simulated data to')
    parser.add_argument(
        '-d', '--debug',
        action='count',
        default=codetools.debug_lvl_from_env(),
        help='Debug mode (can specify several times)')
    parser.add_argument('-v', '--version', action=codetools.ScmVersionAction)

    return parser.parse_args(argv)


def load_config(path):
    data = {} if path is None else formats.read_config(path)
    config = simgen.SimConfig.from_dict(data)

    try:
        seed = codetools.seed_from_env()
    except RuntimeError as e:
        raise InvalidConfigError(str(e)) from None
    if seed is not None:
        debug("seed {s} from SWIMTRACK_SEED".format(s=seed))
        config = simgen.SimConfig.from_dict(dict(config.to_dict(), seed=seed))
    return config


def write_result(result, out_dir):
    formats.write_detections(os.path.join(out_dir, 'detections.csv'),
                             result.detections)
    formats.write_tracks(os.path.join(out_dir, 'gt_tracks.csv'),
                         result.ground_truth)

    for lane in sorted(result.svalues):
        name = 'lane_{k}.csv'.format(k=lane)
        formats.write_svalues(os.path.join(out_dir, 'svalues', name),
                              result.predicted_svalues[lane])
        formats.write_svalues(os.path.join(out_dir, 'svalues_truth', name),
                              result.svalues[lane])

    formats.write_json(os.path.join(out_dir, 'truth_peaks.json'), {
        'fps': result.config.fps,
        'lanes': {str(k): v for k, v in sorted(result.true_peaks.items())},
    })
    formats.write_json(os.path.join(out_dir, 'sim_config.json'),
                       result.config.to_dict())


def run(argv=None):
    """Simulate a race and write its files"""
    args = parse_args(argv)

    codetools.setup_logging(args.debug)

    config = load_config(args.config)
    result = simgen.generate(config)
    write_result(result, args.out_dir)

    info("wrote simulation to {d}".format(d=args.out_dir))


def main(argv=None):
    main_wrapper(run, argv)


if __name__ == '__main__':
    main()
