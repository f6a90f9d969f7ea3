#!/usr/bin/env python3

from swimtrack import codetools
import os
import pytest


class CodedError(codetools.SwimtrackError):
    exit_code = 4


def test_tempdir():
    """Test temporary directory context manager"""
    with codetools.TempDir() as temp_dir:
        assert os.path.exists(temp_dir)
    assert os.path.exists(temp_dir) is False


def test_debug_lvl_from_env(monkeypatch):
    """fetching default debug level from SWIMTRACK_DEBUG env var"""

    # default when unset
    monkeypatch.setenv('SWIMTRACK_DEBUG', '')
    assert codetools.debug_lvl_from_env() == 0

    with pytest.raises(RuntimeError):
        monkeypatch.setenv('SWIMTRACK_DEBUG', 'foo')
        codetools.debug_lvl_from_env()

    monkeypatch.setenv('SWIMTRACK_DEBUG', '42')
    assert codetools.debug_lvl_from_env() == 42


def test_seed_from_env(monkeypatch):
    monkeypatch.delenv('SWIMTRACK_SEED', raising=False)
    assert codetools.seed_from_env() is None

    monkeypatch.setenv('SWIMTRACK_SEED', '7')
    assert codetools.seed_from_env() == 7

    monkeypatch.setenv('SWIMTRACK_SEED', 'seven')
    with pytest.raises(RuntimeError):
        codetools.seed_from_env()


def test_atomic_write():
    with codetools.TempDir() as temp_dir:
        path = os.path.join(temp_dir, 'sub', 'out.txt')
        with codetools.atomic_write(path) as fh:
            fh.write('hello\n')
        with open(path) as fh:
            assert fh.read() == 'hello\n'

        # a failing block leaves the old file and no temporary behind
        with pytest.raises(ValueError):
            with codetools.atomic_write(path) as fh:
                fh.write('partial')
                raise ValueError('boom')
        with open(path) as fh:
            assert fh.read() == 'hello\n'
        assert os.listdir(os.path.dirname(path)) == ['out.txt']


def test_dogpile_exit_code():
    """The aggregate exits with the most severe code it holds"""
    e = codetools.DogpileError(
        [codetools.SwimtrackError('a'), CodedError('b'),
         codetools.InvalidConfigError('c')],
        'three problems')
    assert e.exit_code == 4
    assert 'three problems' in str(e)
    assert 'b' in str(e)

    assert codetools.DogpileError([], 'none').exit_code == 1


def test_check_config_keys():
    codetools.check_config_keys({'a': 1}, ['a', 'b'], 'test')

    with pytest.raises(codetools.InvalidConfigError) as excinfo:
        codetools.check_config_keys({'a': 1, 'zz': 2}, ['a', 'b'], 'test')
    assert 'zz' in str(excinfo.value)
    assert excinfo.value.exit_code == 2

    with pytest.raises(codetools.InvalidConfigError):
        codetools.check_config_keys([1, 2], ['a'], 'test')
