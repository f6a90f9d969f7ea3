"""Command line entry points.

Every module here provides `parse_args(argv)`, `run(argv)` and `main(argv)`.
`main()` turns a `SwimtrackError` into the error's exit code.
"""
from swimtrack.codetools import SwimtrackError, debug, error
import sys

EPILOG = 'Part of swimtrack'


def main_wrapper(run, argv=None):
    """Call `run(argv)` and exit with the status of the outcome."""
    try:
        try:
            run(argv)
        except SwimtrackError as e:
            error(e)
            sys.exit(e.exit_code)
        else:
            sys.exit(0)
    except SystemExit as e:
        debug("exit {status}".format(status=str(e)))
        raise e
