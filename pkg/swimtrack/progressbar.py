""" progressbar2 related utils"""

from public import public
import progressbar


@public
def setup_logging(verbosity=0):
    """Configure progressbar sys.stderr wrapper which is required to play nice
    with logging and not have strange formatting artifacts.
    """
    progressbar.streams.wrap_stderr()


@public
def eta_bar(msg, max_value):
    """Display an adaptive ETA / countdown bar with a message.

    Parameters
    ----------
    msg: str
        Message to prefix countdown bar line with

    max_value: max_value
        The max number of progress bar steps/updates
    """

    widgets = [
        "{msg}:".format(msg=msg),
        progressbar.Bar(), ' ', progressbar.AdaptiveETA(),
    ]

    return progressbar.ProgressBar(widgets=widgets, max_value=max_value)


@public
def iter_with_bar(iterable, msg, max_value, enabled=True):
    """Yield from `iterable` while advancing an `eta_bar()`.

    Parameters
    ----------
    iterable
        Items to pass through.

    msg: str
        Message to prefix the bar with.

    max_value: int
        Number of items expected from `iterable`.

    enabled: bool
        When false, items pass through without drawing a bar.
    """
    if not enabled or not max_value:
        yield from iterable
        return

    pbar = eta_bar(msg, max_value).start()
    for i, item in enumerate(iterable):
        yield item
        pbar.update(min(i + 1, max_value))
    pbar.finish()
