#!/usr/bin/env python
#
# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

"""
Setup script for lagbif.

USAGE:
    python setup.py install

"""
import os
import os.path

from setuptools import setup, find_packages
from setuptools.command.test import test as TestCommand

from lagbif import version


class PyTestCommand(TestCommand):
    def finalize_options(self):
        TestCommand.finalize_options(self)
        self.test_args = []
        self.test_suite = True

    def run_tests(self):
        import pytest
        raise SystemExit(pytest.main(['lagbif', '--junitxml=test-reports/unittests.xml']))


# Get the long description from the README file
here = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name="lagbif",
    version=version.LAGBIF_VERSION,
    license="BSD 3-clause",
    author="lagbif contributors",
    description="Caustics, gradient phase portraits and saddle-connection bifurcation diagrams "
                "of Lagrangian generating families",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests.*", "tests"]),
    package_data={"lagbif.utility.tests": ["*.ini"]},
    include_package_data=False,
    install_requires=[
        "click >= 5.1",
        "numpy >= 1.17",
        "scipy >= 1.4",
        "sympy >= 1.5",
    ],
    tests_require=[
        "pytest",
        "behave"
    ],
    zip_safe=False,
    classifiers=[
        'Intended Audience :: Science/Research',

        'Operating System :: MacOS',
        'Operating System :: Microsoft :: Windows',
        'Operating System :: POSIX :: Linux',

        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Scientific/Engineering :: Physics',

        'License :: OSI Approved :: BSD License',
        'Programming Language :: Python :: 3.6',
    ],
    keywords='caustic catastrophe umbilic lagrangian gradient saddle-connection bifurcation morse-smale',
    cmdclass={
        'test': PyTestCommand
    },
    entry_points={
        'console_scripts': [
            'lagbif = lagbif.__main__:cli',
            ],
    },
)
