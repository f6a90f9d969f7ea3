#!/usr/bin/env python3
"""Setup Tools Script"""
import os
import codecs
from setuptools import setup, find_packages

PACKAGENAME = 'swimtrack'
DESCRIPTION = 'Swimmer tracking, stroke rate estimation and evaluation tools'
AUTHOR = 'swimtrack developers'
AUTHOR_EMAIL = 'swimtrack@users.noreply.github.com'
URL = 'https://github.com/swimtrack/swimtrack'
LICENSE = 'MIT'


def read(filename):
    """Convenience function for includes"""
    full_filename = os.path.join(
        os.path.abspath(os.path.dirname(__file__)),
        filename)
    return codecs.open(full_filename, 'r', 'utf-8').read()


long_description = read('README.md')  # pylint:disable=invalid-name


setup(
    name=PACKAGENAME,
    description=DESCRIPTION,
    long_description=long_description,
    long_description_content_type='text/markdown',
    url=URL,
    author=AUTHOR,
    author_email=AUTHOR_EMAIL,
    license=LICENSE,
    classifiers=[
        'Development Status :: 4 - Beta',
        'Programming Language :: Python :: 3.8',
        'License :: OSI Approved :: MIT License',
    ],
    keywords='tracking sort kalman swimming stroke-rate',
    use_scm_version={'fallback_version': '0.0.0'},
    packages=find_packages(exclude=['docs', 'tests*']),
    python_requires='>=3.8',
    install_requires=[
        'motmetrics>=1.2',
        'numpy>=1.21',
        'pandas>=1.5',
        'progressbar2>=3.37.1',
        'public==1.0',
        'scipy>=1.8',
    ],
    setup_requires=[
        'setuptools_scm',
    ],
    tests_require=[
        'flake8>=3.7.7',
        'pytest>=7',
        'pytest-flake8>=1.1.1',
    ],
    # package_data={},
    entry_points={
        'console_scripts': [
            'swimtrack-eval-det = swimtrack.cli.eval_det:main',
            'swimtrack-eval-mot = swimtrack.cli.eval_mot:main',
            'swimtrack-eval-stroke = swimtrack.cli.eval_stroke:main',
            'swimtrack-pipeline = swimtrack.cli.pipeline:main',
            'swimtrack-simulate = swimtrack.cli.simulate:main',
            'swimtrack-strokes = swimtrack.cli.strokes:main',
            'swimtrack-track = swimtrack.cli.track:main',
        ]
    }
)
