"""Assorted swimtrack utility functions: logging, errors and file helpers."""

from public import public
import argparse
import contextlib
import os
import shutil
import sys
import tempfile
import textwrap

# configured by setup_logging() -- this is declared only as a friendly reminder
# that something unusual is going on this with this var.
logger = None


@public
def setup_logging(verbosity=0):
    """Configure python `logging`.  This is required before the `debug()`,
    `info()`, etc. functions may be used.

    If any other `swimtrack.*` modules, which are not a "package", have been
    imported, and they have a `setup_logging()` function, that is called
    before `logging` is configured.  This gives other modules a chance to
    configure their own logging.

    As an example, if `progressbar2` is being used, it needs to configure a
    `sys.stderr` wrapper before `logging` is configured.  Thus, `logging`
    setup is delayed while simultanously not requiring that `progressbar2` be
    imported unless it is actually being used.

    Parameters
    ----------
    verbosity: int
        Logging / output verbosity level. 1 enables per-track detail while 2+
        adds per-frame detail.
    """
    import pkgutil
    import logging
    import swimtrack

    def iter_namespace(ns_pkg):
        return pkgutil.iter_modules(ns_pkg.__path__, ns_pkg.__name__ + ".")

    # find swimtrack modules that are not a package
    swimtrack_mods = [name for finder, name, ispkg in iter_namespace(swimtrack)
                      if ispkg is False]

    # filter out the current module
    swimtrack_mods = [m for m in swimtrack_mods
                      if m != __name__]

    # filter out modules that have not been imported
    swimtrack_mods = [m for m in swimtrack_mods
                      if m in sys.modules]

    # record funcs successfully called
    logging_funcs = []
    for m in swimtrack_mods:
        try:
            lsetup = getattr(sys.modules[m], 'setup_logging')
            lsetup(verbosity=verbosity)
            logging_funcs.append(lsetup)
        except AttributeError:
            # ignore modules that do not have a setup_logging()
            pass

    logging.basicConfig()
    # configure `logger` for the entire package
    global logger
    logger = logging.getLogger('swimtrack')

    if verbosity:
        logger.setLevel(logging.DEBUG)
    else:
        logger.setLevel(logging.INFO)

    [debug("{m}.{f}()".format(m=f.__module__, f=f.__name__))
        for f in logging_funcs]


# based on _VersionAction() from:
# https://github.com/python/cpython/blob/3.6/Lib/argparse.py
class ScmVersionAction(argparse.Action):
    """Print --version string as `<command> <version>` where `version` is the
    distribution version."""
    def __init__(self,
                 option_strings,
                 version=None,
                 dest=argparse.SUPPRESS,
                 default=argparse.SUPPRESS,
                 help="show program's version number and exit"):
        super(ScmVersionAction, self).__init__(
            option_strings=option_strings,
            dest=dest,
            default=default,
            nargs=0,
            help=help)
        self.version = version

    def __call__(self, parser, namespace, values, option_string=None):
        from importlib.metadata import version, PackageNotFoundError
        try:
            v = version('swimtrack')
        except PackageNotFoundError:
            v = 'unknown'
        formatter = parser._get_formatter()
        formatter.add_text("%(prog)s {v}".format(v=v))
        parser._print_message(formatter.format_help(), sys.stdout)
        parser.exit()


@public
class SwimtrackError(Exception):
    """Base class of every swimtrack domain error.

    `exit_code` is the process exit status a command line tool uses when the
    error ends the run.
    """
    exit_code = 1


@public
class InvalidConfigError(SwimtrackError):
    """A configuration value or file is unusable."""
    exit_code = 2


@public
class DogpileError(SwimtrackError):
    """Aggregate list of exceptions"""
    def __init__(self, errors, msg):
        self.errors = errors
        self.msg = msg

    @property
    def exit_code(self):
        codes = [getattr(e, 'exit_code', 1) for e in self.errors]
        return max(codes) if codes else 1

    def __str__(self):
        return self.msg + "\n" + "\n".join([str(e) for e in self.errors])


@public
def info(*args):
    if logger:
        logger.info(*args)


@public
def debug(*args):
    if logger:
        logger.debug(*args)


@public
def warn(*args):
    if logger:
        logger.warning(*args)


@public
def error(*args):
    if logger:
        logger.error(*args)


@public
class TempDir(object):
    """ContextManager for temporary directories.

    For example::

        import os
        with TempDir() as temp_dir:
            assert os.path.exists(temp_dir)
        assert os.path.exists(temp_dir) is False
    """

    def __init__(self):
        super(TempDir, self).__init__()
        self._temp_dir = tempfile.mkdtemp()

    def __enter__(self):
        return self._temp_dir

    def __exit__(self, ttype, value, traceback):
        shutil.rmtree(self._temp_dir)
        self._temp_dir = None


@public
@contextlib.contextmanager
def atomic_write(path, mode='w'):
    """Open a temporary file next to `path` and move it into place once the
    block exits without an exception.

    Parameters
    ----------
    path: str
        Final file name. Parent directories are created as needed.

    mode: str
        `open()` mode for the temporary file.

    Yields
    ------
    fh: file object
    """
    dirname = os.path.dirname(os.path.abspath(path))
    os.makedirs(dirname, exist_ok=True)

    fd, tmp_path = tempfile.mkstemp(
        dir=dirname,
        prefix='.' + os.path.basename(path) + '.',
        suffix='.tmp',
    )
    try:
        if 'b' in mode:
            fh = os.fdopen(fd, mode)
        else:
            fh = os.fdopen(fd, mode, encoding='utf-8', newline='')
        with fh:
            yield fh
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise

    debug("wrote {path}".format(path=path))


def _int_from_env(name):
    value = os.environ.get(name)
    if not value:
        return None

    try:
        return int(value)
    except ValueError:
        # ensure that logging is configured as this method is likely to be
        # called prior to configuring logging.
        setup_logging(verbosity=1)
        raise RuntimeError(
            textwrap.dedent("""\
            env var {name} '{value}' is not a string value that
            can be converted to an int.""".format(name=name, value=value))
        ) from None


@public
def debug_lvl_from_env():
    """Read and return `SWIMTRACK_DEBUG` env var, if defined.

    Raises
    ------
    RuntimeError
        If SWIMTRACK_DEBUG is not an int convertable value
    """
    debug_lvl = _int_from_env('SWIMTRACK_DEBUG')
    return debug_lvl if debug_lvl is not None else 0


@public
def seed_from_env():
    """Read and return `SWIMTRACK_SEED` env var, or `None` if it is unset.

    Raises
    ------
    RuntimeError
        If SWIMTRACK_SEED is not an int convertable value
    """
    return _int_from_env('SWIMTRACK_SEED')


@public
def check_config_keys(data, allowed, what):
    """Reject a config mapping that is not a dict or has unknown keys.

    Raises
    ------
    InvalidConfigError
    """
    if not isinstance(data, dict):
        raise InvalidConfigError(
            "{what} config must be a JSON object, got {t}".format(
                what=what, t=type(data).__name__))

    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise InvalidConfigError(textwrap.dedent("""\
            unknown {what} config key(s): {bad}
              allowed: {ok}\
            """).format(what=what, bad=', '.join(unknown),
                        ok=', '.join(allowed)))
