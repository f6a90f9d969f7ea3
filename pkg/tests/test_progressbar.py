#!/usr/bin/env python3

from swimtrack import codetools
from swimtrack.progressbar import eta_bar, iter_with_bar

codetools.setup_logging()


def test_iter_with_bar_passes_items_through():
    items = list(range(25))
    assert list(iter_with_bar(iter(items), 'counting', len(items))) == items


def test_iter_with_bar_short_count():
    """More items than announced still all come through"""
    assert list(iter_with_bar(range(5), 'counting', 3)) == [0, 1, 2, 3, 4]


def test_iter_with_bar_disabled():
    assert list(iter_with_bar('abc', 'letters', 3, enabled=False)) == \
        ['a', 'b', 'c']
    assert list(iter_with_bar([], 'nothing', 0)) == []


def test_eta_bar():
    pbar = eta_bar('frames', 10)
    assert pbar.max_value == 10
    pbar.start()
    pbar.update(10)
    pbar.finish()
