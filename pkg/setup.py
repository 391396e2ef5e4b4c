#!/usr/bin/env python
# -*- coding: utf-8 -*-


try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup


with open('README.rst') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst') as history_file:
    history = history_file.read().replace('.. :changelog:', '')

requirements = [
    'numpy>=1.22',
    'matplotlib',
    'pandas>=1.5',
    'tqdm'
]

test_requirements = [
   'pytest'
]

setup(
    name='aoapy',
    version='0.1.0',
    description="Angle-of-arrival estimation from uplink sounding signals",
    long_description=readme + '\n\n' + history,
    author="The aoapy developers",
    packages=[
        'aoapy',
    ],
    package_dir={'aoapy':
                 'aoapy'},
    include_package_data=True,
    install_requires=requirements,
    entry_points={
        'console_scripts': ['aoapy=aoapy.cli:main'],
    },
    license="BSD",
    zip_safe=False,
    keywords='aoapy angle-of-arrival MUSIC ESPRIT',
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: BSD License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3',
    ],
    test_suite='tests',
    tests_require=test_requirements
)
