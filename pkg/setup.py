# !/usr/bin/env python
# coding: utf-8

import sys

from setuptools import setup

from fairway import __version__ as fairway_version

if sys.version_info < (3, 9):
    sys.exit('python 3.9 or higher is required for fairway')

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(
    name='fairway-toolkit',
    version=fairway_version,
    license='GPL-3',
    packages=[
        'fairway',
        'fairway.api',
        'fairway.data',
        'fairway.fairness',
        'fairway.learners',
        'fairway.lfs',
        'fairway.models',
        'fairway.optimizer',
        'fairway.utils',
    ],
    package_data={'fairway': ['datasets/*.ini']},
    entry_points=dict(
        console_scripts=['fairway = fairway.cli:main']
    ),
    install_requires=[
        'numpy',
        'pandas',
        'requests<3.0',
        'requests_futures',
        'setuptools',
        'wheel',
        'filelock'
    ],
    extras_require=dict(
        test=['pytest>=7']
    ),
    description='Bias removal for tabular classifiers by training-data filtering and fairness-aware tuning',
    long_description=long_description,
    long_description_content_type="text/markdown",
    python_requires='>=3.9',
    classifiers=[
        'License :: OSI Approved :: GNU General Public License v3 or later (GPLv3+)',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.9',
        'Operating System :: OS Independent',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Artificial Intelligence',
        'Development Status :: 4 - Beta',
    ]
)
