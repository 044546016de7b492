# -*- coding: utf-8 -*-

import os
import re
import sys

from setuptools import setup
from setuptools import find_packages


REQUIREMENTS = [
    'numpy>=1.17',
    'pandas>=1.5',
    'scipy>=1.4',
]
TEST_REQUIREMENTS = [
    'coverage',
    'docutils',
    'mock',
    'pytest',
    'sphinx',
    'tox',
]


if sys.argv[-1] == 'publish':
    os.system('python3 setup.py sdist && twine upload dist/*')
    sys.exit()


def find_version(fname):
    """Attempts to find the version number in the file names fname.
    Raises RuntimeError if not found.
    """
    version = ''
    with open(fname, 'r') as fp:
        reg = re.compile(r'__version__ = [\'"]([^\'"]*)[\'"]')
        for line in fp:
            m = reg.match(line)
            if m:
                version = m.group(1)
                break
    if not version:
        raise RuntimeError('Cannot find version information')
    return version


setup(
    name='tsgame',
    version=find_version('tsgame/__init__.py'),
    description='Simulator and equilibrium solvers for the task scheduling game '
                'in user-centric participatory sensing',
    packages=find_packages(exclude=('tests',)),
    package_dir={'tsgame': 'tsgame'},
    package_data={'tsgame': ['data/*.json']},
    include_package_data=True,
    install_requires=REQUIREMENTS,
    tests_require=TEST_REQUIREMENTS,
    python_requires='>=3.8',
    entry_points={
        'console_scripts': ['tsgame = tsgame.cli:run'],
    },
    license='MIT',
    zip_safe=False,
    keywords='potential game nash equilibrium crowdsensing scheduling',
    classifiers=[
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    test_suite='tests',
)
